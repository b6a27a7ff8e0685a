"""CKY-style chart recognizer/parser over sequences of lexical categories.

Permutation is a unary closure inside each chart cell, limited to verb
functors (categories whose innermost result is S).  Coordination is a ternary
rule over (left span, conjunction token, right span); conjunction tokens never
enter ordinary cells, which keeps variable categories out of the chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .categories import (
    Category,
    Functor,
    Primitive,
    S,
    arity,
    innermost_result,
    is_conjunction,
    permute_cyclic,
)
from .combinators import (
    BINARY_RULES,
    RuleId,
    coordinate,
)


@dataclass(frozen=True)
class ParserPolicy:
    """Grammar-specific permutation policy.

    Permutation only ever applies to categories whose innermost result is S
    and whose outermost argument is not "@"-restricted.  ``require_rel``
    additionally disables it for inputs that do not contain ``rel_category``
    (base-order-conditional disabling for SOV/OSV/VOS/OVS grammars).
    """

    allow_permutation: bool = True
    require_rel: bool = False
    rel_category: Category | None = None
    max_rotations_per_item: int | None = None

    def permutation_active(self, seq: tuple[Category, ...]) -> bool:
        if not self.allow_permutation:
            return False
        if self.require_rel:
            return self.rel_category is not None and self.rel_category in seq
        return True


DEFAULT_POLICY = ParserPolicy()


def in_permutation_scope(c: Category) -> bool:
    """Verb-functor test: functor whose innermost result is S."""
    return isinstance(c, Functor) and innermost_result(c) == S


def rotation_step(c: Category) -> Category | None:
    """Single cyclic rotation if the category is eligible, else None."""
    if not in_permutation_scope(c):
        return None
    if c.restrictions.no_permutation:
        return None
    rotated = permute_cyclic(c)
    return rotated if rotated != c else None


def rotations(c: Category, limit: int | None = None) -> list[Category]:
    """Proper rotations of ``c`` reachable under the eligibility rules, in
    application order (at most arity-1, optionally capped)."""
    out: list[Category] = []
    cap = arity(c) - 1 if isinstance(c, Functor) else 0
    if limit is not None:
        cap = min(cap, limit)
    cur = c
    for _ in range(max(cap, 0)):
        nxt = rotation_step(cur)
        if nxt is None or nxt == c or nxt in out:
            break
        out.append(nxt)
        cur = nxt
    return out


@dataclass(frozen=True)
class Derivation:
    """Derivation tree node; leaves have ``rule`` None."""

    category: Category
    rule: RuleId | None = None
    children: tuple["Derivation", ...] = ()


@dataclass
class ParseResult:
    grammatical: bool
    derivations: list[Derivation] = field(default_factory=list)


_Key = tuple[int, int, Category]


class ChartParser:
    """Reusable parser; rule results are memoized across calls, so keep one
    instance per grammar when parsing in bulk."""

    def __init__(self, policy: ParserPolicy = DEFAULT_POLICY):
        self.policy = policy
        self._pair_memo: dict[tuple[Category, Category], tuple[tuple[RuleId, Category], ...]] = {}

    def _combine(self, a: Category, b: Category) -> tuple[tuple[RuleId, Category], ...]:
        memo = self._pair_memo
        hit = memo.get((a, b))
        if hit is not None:
            return hit
        out = []
        for rule, fn in BINARY_RULES:
            cat = fn(a, b)
            if cat is not None:
                out.append((rule, cat))
        result = tuple(out)
        memo[(a, b)] = result
        return result

    def parse(
        self,
        seq: list[Category] | tuple[Category, ...],
        *,
        derivations: bool = False,
        max_derivations: int = 64,
    ) -> ParseResult:
        chart = self._fill(tuple(seq), backpointers=derivations)
        n = len(seq)
        root = chart.get((0, n), {})
        grammatical = S in root
        result = ParseResult(grammatical)
        if derivations and grammatical:
            result.derivations = self._extract((0, n, S), chart, max_derivations)
        return result

    def derivable(self, seq: list[Category] | tuple[Category, ...]) -> set[Category]:
        """Categories derivable over the whole sequence."""
        chart = self._fill(tuple(seq), backpointers=False)
        return set(chart.get((0, len(seq)), {}))

    def _fill(self, seq: tuple[Category, ...], *, backpointers: bool):
        if not seq:
            raise ValueError("cannot parse an empty sequence")
        n = len(seq)
        permuting = self.policy.permutation_active(seq)
        cap = self.policy.max_rotations_per_item
        conj_positions = [i for i, c in enumerate(seq) if is_conjunction(c)]
        chart: dict[tuple[int, int], dict[Category, list]] = {}

        def add(i: int, j: int, cat: Category, bp) -> None:
            cell = chart.setdefault((i, j), {})
            existing = cell.get(cat)
            if existing is not None:
                if backpointers and bp is not None:
                    existing.append(bp)
                return
            cell[cat] = [bp] if (backpointers and bp is not None) else []
            if permuting:
                prev = cat
                for rot in rotations(cat, cap):
                    if rot in cell:
                        break
                    rbp = (RuleId.PERMUTE, ((i, j, prev),)) if backpointers else None
                    cell[rot] = [rbp] if rbp is not None else []
                    prev = rot

        for i, cat in enumerate(seq):
            if is_conjunction(cat):
                continue  # conjunction tokens feed the coordination rule only
            add(i, i + 1, cat, None)

        for length in range(2, n + 1):
            for i in range(0, n - length + 1):
                j = i + length
                for k in range(i + 1, j):
                    left = chart.get((i, k))
                    right = chart.get((k, j))
                    if not left or not right:
                        continue
                    for a in tuple(left):
                        for b in tuple(right):
                            for rule, cat in self._combine(a, b):
                                bp = (rule, ((i, k, a), (k, j, b))) if backpointers else None
                                add(i, j, cat, bp)
                for p in conj_positions:
                    if not (i < p < j - 1):
                        continue
                    left = chart.get((i, p))
                    right = chart.get((p + 1, j))
                    if not left or not right:
                        continue
                    conj = seq[p]
                    for a in tuple(left):
                        if a not in right:
                            continue
                        cat = coordinate(a, conj, a)
                        if cat is None:
                            continue
                        bp = (
                            (RuleId.COORD, ((i, p, a), (p, p + 1, conj), (p + 1, j, a)))
                            if backpointers
                            else None
                        )
                        add(i, j, cat, bp)
        return chart

    def _extract(self, key: _Key, chart, limit: int) -> list[Derivation]:
        memo: dict[_Key, list[Derivation]] = {}

        def trees(key: _Key) -> list[Derivation]:
            cached = memo.get(key)
            if cached is not None:
                return cached
            i, j, cat = key
            bps = chart.get((i, j), {}).get(cat)
            out: list[Derivation] = []
            if not bps:
                out.append(Derivation(cat))
            else:
                for rule, children in bps:
                    child_alternatives = [trees(c) for c in children]
                    stack = [()]
                    for alts in child_alternatives:
                        stack = [prefix + (t,) for prefix in stack for t in alts]
                        if len(stack) > limit:
                            stack = stack[:limit]
                    for combo in stack:
                        out.append(Derivation(cat, rule, combo))
                        if len(out) >= limit:
                            break
                    if len(out) >= limit:
                        break
            memo[key] = out
            return out

        return trees(key)[:limit]


def parse(
    seq,
    policy: ParserPolicy = DEFAULT_POLICY,
    *,
    derivations: bool = False,
    max_derivations: int = 64,
) -> ParseResult:
    return ChartParser(policy).parse(
        seq, derivations=derivations, max_derivations=max_derivations
    )


def derivation_rules(tree: Derivation) -> set[RuleId]:
    rules = {tree.rule} if tree.rule is not None else set()
    for child in tree.children:
        rules |= derivation_rules(child)
    return rules


def _replay(node: Derivation) -> Category | None:
    """Recompute the node's category from its children; None on mismatch."""
    if node.rule is None:
        if node.children:
            raise ValueError("leaf node with children")
        return node.category
    kids = [_replay(c) for c in node.children]
    if any(k is None for k in kids):
        return None
    if node.rule is RuleId.PERMUTE:
        if len(kids) != 1:
            raise ValueError("permutation node must have one child")
        got = permute_cyclic(kids[0]) if arity(kids[0]) >= 1 else None
    elif node.rule is RuleId.COORD:
        if len(kids) != 3:
            raise ValueError("coordination node must have three children")
        got = coordinate(kids[0], kids[1], kids[2])
    else:
        if len(kids) != 2:
            raise ValueError("binary rule node must have two children")
        fn = dict(BINARY_RULES).get(node.rule)
        if fn is None:
            raise ValueError(f"unknown rule: {node.rule}")
        got = fn(kids[0], kids[1])
    return got if got == node.category else None


def derivation_check(tree: Derivation) -> bool:
    """True iff replaying every rule reproduces each node's category and the
    root is S."""
    if not isinstance(tree, Derivation):
        raise ValueError("malformed derivation tree")
    return _replay(tree) == tree.category and tree.category == S
