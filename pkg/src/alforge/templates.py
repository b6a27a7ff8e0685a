"""Template enumeration, heuristic filtering, and Long-set augmentation.

Templates are sequences of lexical-class labels.  Enumeration works bottom-up
over the grammar's finite category universe (the lexical categories closed
under application, first-order composition, coordination and permutation),
which makes exhaustive generation up to length 10 tractable where raw 11^10
prefix search is not.  Equivalence with brute-force search is checked at
small lengths by the test suite.
"""

from __future__ import annotations

import random
from collections import defaultdict
from itertools import product

from .categories import S, Category
from .combinators import BINARY_RULES, is_case_marker
from .grammars import LEXICAL_CLASSES, Grammar
from .parser import ChartParser, rotations

Template = tuple[str, ...]

_MARKERS = ("SUBJ", "OBJ")


def heuristic_filter(classes) -> bool:
    """True iff the template survives the eight filtering heuristics."""
    t = tuple(classes)
    if len(t) < 3:
        return False
    if t[0] == "CONJ" or t[-1] == "CONJ":
        return False
    for a, b in zip(t, t[1:]):
        if a == b == "CONJ":
            return False
        if a == b == "PREP":
            return False
    if t[0] in _MARKERS:
        return False
    if sum(t.count(m) for m in _MARKERS) > t.count("NP"):
        return False
    if "COMP" in t and "VCOMP" not in t:
        return False
    return True


def category_universe(
    grammar: Grammar, permutation_active: bool
) -> tuple[set[Category], dict[tuple[Category, Category], frozenset[Category]]]:
    """Closure of the lexical categories under the rules, plus the binary
    combination table over that closure.  Conjunction is excluded (it feeds
    the ternary coordination rule only, which creates no new categories)."""
    cap = grammar.policy.max_rotations_per_item

    def close_rotations(cat: Category) -> list[Category]:
        return [cat] + (rotations(cat, cap) if permutation_active else [])

    cats: set[Category] = set()
    pending: list[Category] = []
    for cls, cat in grammar.lexicon:
        if cls == "CONJ":
            continue
        for c in close_rotations(cat):
            if c not in cats:
                cats.add(c)
                pending.append(c)

    table: dict[tuple[Category, Category], set[Category]] = defaultdict(set)
    while pending:
        new = set(pending)
        pending = []
        pairs = [(a, b) for a in new for b in cats] + [
            (a, b) for a in cats for b in new if a not in new
        ]
        for a, b in pairs:
            for _rule, fn in BINARY_RULES:
                out = fn(a, b)
                if out is None:
                    continue
                for c in close_rotations(out):
                    table[(a, b)].add(out)
                    if c not in cats:
                        cats.add(c)
                        pending.append(c)
        if len(cats) > 2000:
            raise RuntimeError("category universe failed to close")
    # rotations of results are chart-level unaries, not part of the table
    return cats, {k: frozenset(v) for k, v in table.items()}


def _language(grammar: Grammar, permutation_active: bool, max_len: int):
    """strings[n] = {category: set of class tuples of length n deriving it}."""
    cats, table = category_universe(grammar, permutation_active)
    cap = grammar.policy.max_rotations_per_item
    rot = {c: rotations(c, cap) if permutation_active else [] for c in cats}

    strings: list[dict[Category, set[Template]]] = [dict() for _ in range(max_len + 1)]

    def close_level(level: dict[Category, set[Template]]) -> None:
        for cat in list(level):
            for r in rot.get(cat, ()):
                if r is not cat:
                    level.setdefault(r, set()).update(level[cat])

    lex_level: dict[Category, set[Template]] = defaultdict(set)
    for cls, cat in grammar.lexicon:
        if cls == "CONJ":
            continue
        lex_level[cat].add((cls,))
    strings[1] = dict(lex_level)
    close_level(strings[1])

    for n in range(2, max_len + 1):
        level: dict[Category, set[Template]] = defaultdict(set)
        for n1 in range(1, n):
            left, right = strings[n1], strings[n - n1]
            for a, a_strs in left.items():
                for b, b_strs in right.items():
                    results = table.get((a, b))
                    if not results:
                        continue
                    joined = {sa + sb for sa in a_strs for sb in b_strs}
                    for c in results:
                        level[c].update(joined)
        for n1 in range(1, n - 1):
            left, right = strings[n1], strings[n - 1 - n1]
            for c, a_strs in left.items():
                if is_case_marker(c):
                    continue
                b_strs = right.get(c)
                if not b_strs:
                    continue
                level[c].update(sa + ("CONJ",) + sb for sa in a_strs for sb in b_strs)
        level = dict(level)
        close_level(level)
        strings[n] = level

    return strings


def enumerate_templates(grammar: Grammar, max_len: int = 10) -> list[Template]:
    """Every class sequence of length 3..max_len that passes the heuristics
    and parses to root S, in lexicographic order."""
    if max_len < 3:
        return []
    out: set[Template] = set()
    if grammar.policy.require_rel:
        with_perm = _language(grammar, True, max_len)
        without_perm = _language(grammar, False, max_len)
        for n in range(3, max_len + 1):
            for t in with_perm[n].get(S, ()):
                if "REL" in t:
                    out.add(t)
            for t in without_perm[n].get(S, ()):
                if "REL" not in t:
                    out.add(t)
    else:
        lang = _language(grammar, True, max_len)
        for n in range(3, max_len + 1):
            out.update(lang[n].get(S, ()))
    return sorted(t for t in out if heuristic_filter(t))


def grammatical_sequences(
    grammar: Grammar, max_len: int
) -> dict[int, set[Template]]:
    """All parse-grammatical class sequences up to ``max_len``, without the
    heuristic filter (used by the heuristic-soundness checks)."""
    out: dict[int, set[Template]] = {n: set() for n in range(1, max_len + 1)}
    if grammar.policy.require_rel:
        with_perm = _language(grammar, True, max_len)
        without_perm = _language(grammar, False, max_len)
        for n in out:
            out[n] = {t for t in with_perm[n].get(S, ()) if "REL" in t} | {
                t for t in without_perm[n].get(S, ()) if "REL" not in t
            }
    else:
        lang = _language(grammar, True, max_len)
        for n in out:
            out[n] = set(lang[n].get(S, ()))
    return out


def _extension_candidates(t1: Template, t2: Template):
    yield t1 + t2
    yield t1 + ("CONJ",) + t2
    for i in range(1, len(t1)):
        yield t1[:i] + ("CONJ",) + t2 + t1[i:]


def is_grammatical(template, grammar: Grammar, parser: ChartParser | None = None) -> bool:
    parser = parser or ChartParser(grammar.policy)
    return parser.parse(grammar.categorize(template)).grammatical


def augment_long(
    templates,
    grammar: Grammar,
    min_len: int = 11,
    max_len: int = 20,
    parser: ChartParser | None = None,
) -> list[Template]:
    """Exhaustive Long-template extension of a (small) template set via
    concatenation, mid-sentence conjunction insertion, and conjunction
    appending; candidates are length-gated, deduplicated, re-filtered and
    parse-checked under ``grammar``."""
    parser = parser or ChartParser(grammar.policy)
    templates = [tuple(t) for t in templates]
    seen: set[Template] = set()
    out: list[Template] = []
    for t1, t2 in product(templates, repeat=2):
        for cand in _extension_candidates(t1, t2):
            if not (min_len <= len(cand) <= max_len) or cand in seen:
                continue
            seen.add(cand)
            if heuristic_filter(cand) and is_grammatical(cand, grammar, parser):
                out.append(cand)
    return sorted(out)


def sample_long_templates(
    templates,
    grammar: Grammar,
    per_length: int,
    min_len: int = 11,
    max_len: int = 20,
    seed: int = 0,
    max_attempts_factor: int = 2000,
    parser: ChartParser | None = None,
) -> list[Template]:
    """Randomized variant of ``augment_long`` for large template sets: draws
    random template pairs and extension operators until every length in
    [min_len, max_len] has ``per_length`` valid templates (or attempts run
    out, which raises)."""
    parser = parser or ChartParser(grammar.policy)
    templates = [tuple(t) for t in templates]
    if not templates:
        raise ValueError("no source templates to extend")
    by_len: dict[int, list[Template]] = {}
    for t in sorted(set(templates)):
        by_len.setdefault(len(t), []).append(t)
    rng = random.Random(seed)
    buckets: dict[int, set[Template]] = {n: set() for n in range(min_len, max_len + 1)}
    attempts = max_attempts_factor * per_length
    for target in sorted(buckets):
        bucket = buckets[target]
        for _ in range(attempts):
            if len(bucket) >= per_length:
                break
            op = rng.randrange(3)
            # concatenation preserves total length; the conjunction ops add 1
            need = target if op == 0 else target - 1
            splits = [
                (a, need - a) for a in by_len if need - a in by_len
            ]
            if not splits:
                continue
            a, b = splits[rng.randrange(len(splits))]
            t1 = rng.choice(by_len[a])
            t2 = rng.choice(by_len[b])
            if op == 0:
                cand = t1 + t2
            elif op == 1:
                cand = t1 + ("CONJ",) + t2
            else:
                if len(t1) < 2:
                    continue
                i = rng.randrange(1, len(t1))
                cand = t1[:i] + ("CONJ",) + t2 + t1[i:]
            if len(cand) != target or cand in bucket:
                continue
            if heuristic_filter(cand) and is_grammatical(cand, grammar, parser):
                bucket.add(cand)
    short = [n for n, b in buckets.items() if len(b) < per_length]
    if short:
        raise RuntimeError(
            f"could not find {per_length} long templates for lengths {short}"
        )
    return sorted(t for b in buckets.values() for t in b)


def save_templates(templates, path) -> None:
    with open(path, "w") as fh:
        for t in templates:
            fh.write(" ".join(t) + "\n")


def load_templates(path) -> list[Template]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t = tuple(line.split())
            unknown = set(t) - set(LEXICAL_CLASSES)
            if unknown:
                raise ValueError(f"unknown lexical classes: {sorted(unknown)}")
            out.append(t)
    return out
