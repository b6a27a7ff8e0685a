"""Binary and ternary rule schemata over categories.

All rules are pure and total; ``None`` is the only failure mode.  Application
and composition require ground inputs, so variable categories are confined to
the coordination rule (where the conjunction's variables bind to the conjunct
category).
"""

from __future__ import annotations

from enum import Enum

from .categories import (
    BACKWARD,
    FORWARD,
    NP,
    NP_OBJ,
    NP_SUBJ,
    Category,
    Functor,
    contains_variable,
    is_conjunction,
    unify,
)


def is_case_marker(c: Category) -> bool:
    """Functor turning a bare NP into a case-marked NP (the "ga"/"o"
    particle categories)."""
    return (
        isinstance(c, Functor)
        and c.argument == NP
        and c.result in (NP_SUBJ, NP_OBJ)
    )


class RuleId(Enum):
    FWD_APP = "FwdApp"
    BWD_APP = "BwdApp"
    FWD_COMP = "FwdComp"
    BWD_COMP = "BwdComp"
    FWD_XCOMP = "FwdXComp"
    BWD_XCOMP = "BwdXComp"
    COORD = "Coord"
    PERMUTE = "Permute"


def apply_forward(f: Category, a: Category) -> Category | None:
    """a/b  b  =>  a"""
    if contains_variable(f) or contains_variable(a):
        return None
    if isinstance(f, Functor) and f.slash == FORWARD and f.argument == a:
        return f.result
    return None


def apply_backward(a: Category, f: Category) -> Category | None:
    """b  a\\b  =>  a"""
    if contains_variable(f) or contains_variable(a):
        return None
    if isinstance(f, Functor) and f.slash == BACKWARD and f.argument == a:
        return f.result
    return None


def _composable(f: Functor, g: Functor, *, crossing: bool) -> bool:
    """The "," flag on either functor's argument slot blocks composition;
    the "." flag additionally blocks the crossed variants."""
    if f.restrictions.no_composition or g.restrictions.no_composition:
        return False
    if crossing and (f.restrictions.no_crossing or g.restrictions.no_crossing):
        return False
    return True


def compose_forward(f: Category, g: Category) -> Category | None:
    """a/b  b/c  =>  a/c

    The c-position keeps g's slot restrictions.
    """
    if contains_variable(f) or contains_variable(g):
        return None
    if not (isinstance(f, Functor) and f.slash == FORWARD):
        return None
    if not (isinstance(g, Functor) and g.slash == FORWARD):
        return None
    if not _composable(f, g, crossing=False):
        return None
    if f.argument != g.result:
        return None
    return Functor(f.result, FORWARD, g.argument, g.restrictions)


def compose_backward(g: Category, f: Category) -> Category | None:
    """b\\c  a\\b  =>  a\\c"""
    if contains_variable(f) or contains_variable(g):
        return None
    if not (isinstance(f, Functor) and f.slash == BACKWARD):
        return None
    if not (isinstance(g, Functor) and g.slash == BACKWARD):
        return None
    if not _composable(f, g, crossing=False):
        return None
    if f.argument != g.result:
        return None
    return Functor(f.result, BACKWARD, g.argument, g.restrictions)


def compose_forward_crossing(f: Category, g: Category) -> Category | None:
    """a/b  b\\c  =>  a\\c  (crossed; needed when a forward functor must
    consume a backward-looking clause, e.g. gap passing through SCOMP)"""
    if contains_variable(f) or contains_variable(g):
        return None
    if not (isinstance(f, Functor) and f.slash == FORWARD):
        return None
    if not (isinstance(g, Functor) and g.slash == BACKWARD):
        return None
    if not _composable(f, g, crossing=True):
        return None
    if f.argument != g.result:
        return None
    return Functor(f.result, BACKWARD, g.argument, g.restrictions)


def compose_backward_crossing(g: Category, f: Category) -> Category | None:
    """b/c  a\\b  =>  a/c  (crossed)"""
    if contains_variable(f) or contains_variable(g):
        return None
    if not (isinstance(f, Functor) and f.slash == BACKWARD):
        return None
    if not (isinstance(g, Functor) and g.slash == FORWARD):
        return None
    if not _composable(f, g, crossing=True):
        return None
    if f.argument != g.result:
        return None
    return Functor(f.result, FORWARD, g.argument, g.restrictions)


def coordinate(left: Category, conj: Category, right: Category) -> Category | None:
    """Two like-category constituents around a conjunction combine into one
    constituent of that category.  Non-ground conjuncts are rejected."""
    if not is_conjunction(conj):
        return None
    if contains_variable(left) or contains_variable(right):
        return None
    if left != right:
        return None
    # Case particles attach to NPs only; they are not coordinable on their own.
    if is_case_marker(left):
        return None
    # The conjunction's variable must actually bind to the conjunct category.
    if unify(conj.argument, left) is None:
        return None
    return left


BINARY_RULES: tuple[tuple[RuleId, object], ...] = (
    (RuleId.FWD_APP, apply_forward),
    (RuleId.BWD_APP, apply_backward),
    (RuleId.FWD_COMP, compose_forward),
    (RuleId.BWD_COMP, compose_backward),
    (RuleId.FWD_XCOMP, compose_forward_crossing),
    (RuleId.BWD_XCOMP, compose_backward_crossing),
)
