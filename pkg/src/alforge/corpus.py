"""Sentence sampling: length-stratified splits, targeted relative-clause test
sets, and minimal pairs.

All randomness flows from a master seed; per-grammar streams are derived with
a stable hash so per-grammar outputs do not depend on iteration order.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from .grammars import LEXICAL_CLASSES, Grammar
from .parser import ChartParser
from .templates import Template, heuristic_filter

SPLITS = (
    "ShortTrain",
    "ShortTest",
    "MediumTest",
    "LongTest",
    "Recursive",
    "Embedded",
    "PairGrammatical",
    "PairUngrammatical",
)

SHORT_BAND = (3, 8)
MEDIUM_BAND = (9, 10)
LONG_BAND = (11, 20)

DEFAULT_WORDS: dict[str, tuple[str, ...]] = {
    "NP": (
        "Kim", "Sandy", "John", "Tom", "Jerry", "man", "child", "car",
        "pasta", "fruits", "wall", "mango", "owl", "scooter", "machine",
        "elf", "shelf", "school", "trouble",
    ),
    "SUBJ": ("ga",),
    "OBJ": ("o",),
    "ADJ": ("red", "tall", "green", "fluffy", "soft", "intelligent", "small", "old"),
    "VT": (
        "kissed", "chased", "met", "received", "nibbles", "controls",
        "escorts", "promised", "caused",
    ),
    "VI": ("ran", "laughed", "sang", "danced", "walk", "evolves", "studied", "slept"),
    "VCOMP": ("said", "believed", "thought", "knew"),
    "COMP": ("that",),
    "PREP": ("in", "on", "near"),
    "REL": ("whom", "which"),
    "CONJ": ("and",),
}


@dataclass(frozen=True)
class Lexicon:
    """Per-class word lists; each word belongs to exactly one class."""

    words: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        missing = set(LEXICAL_CLASSES) - set(self.words)
        if missing:
            raise ValueError(f"lexicon missing classes: {sorted(missing)}")
        seen: dict[str, str] = {}
        for cls, forms in self.words.items():
            if not forms:
                raise ValueError(f"lexicon class {cls} has no words")
            for w in forms:
                if w in seen:
                    raise ValueError(f"word {w!r} in both {seen[w]} and {cls}")
                seen[w] = cls

    @classmethod
    def default(cls) -> "Lexicon":
        return cls(dict(DEFAULT_WORDS))

    def vocabulary(self) -> set[str]:
        return {w for forms in self.words.values() for w in forms}

    def restricted(self, allowed: set[str]) -> "Lexicon":
        """Sub-lexicon keeping only ``allowed`` words; errors if a class is
        emptied (then the vocabulary-coverage contract cannot be met)."""
        kept = {
            cls: tuple(w for w in forms if w in allowed)
            for cls, forms in self.words.items()
        }
        empty = [cls for cls, forms in kept.items() if not forms]
        if empty:
            raise ValueError(f"restriction empties lexicon classes: {empty}")
        return Lexicon(kept)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump({k: list(v) for k, v in self.words.items()}, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Lexicon":
        with open(path) as fh:
            data = json.load(fh)
        return cls({k: tuple(v) for k, v in data.items()})


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    classes: Template
    grammar_id: str
    split: str

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.classes):
            raise ValueError("token/class length mismatch")

    @property
    def length(self) -> int:
        return len(self.tokens)

    def to_json(self) -> dict:
        return {
            "grammar_id": self.grammar_id,
            "split": self.split,
            "length": self.length,
            "tokens": list(self.tokens),
            "classes": list(self.classes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Sentence":
        return cls(
            tuple(data["tokens"]),
            tuple(data["classes"]),
            data["grammar_id"],
            data["split"],
        )


def save_sentences(sentences, path) -> None:
    with open(path, "w") as fh:
        for s in sentences:
            fh.write(json.dumps(s.to_json(), sort_keys=True) + "\n")


def load_sentences(path) -> list[Sentence]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(Sentence.from_json(json.loads(line)))
    return out


def derive_seed(master_seed: int, *parts) -> int:
    key = ":".join([str(master_seed), *map(str, parts)]).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _fill(template: Template, lexicon: Lexicon, rng: random.Random) -> tuple[str, ...]:
    return tuple(rng.choice(lexicon.words[cls]) for cls in template)


def sample_split(
    grammar: Grammar,
    templates,
    lexicon: Lexicon,
    per_length_count: int,
    band: tuple[int, int],
    seed: int,
    split: str,
    avoid: set[tuple[str, ...]] | None = None,
) -> list[Sentence]:
    """Exactly ``per_length_count`` unique sentences for every length in the
    band; templates uniform within a length, lexical slots uniform."""
    if per_length_count == 0:
        return []
    lo, hi = band
    by_length: dict[int, list[Template]] = {}
    for t in templates:
        by_length.setdefault(len(t), []).append(tuple(t))
    for n in by_length:
        by_length[n].sort()
    rng = random.Random(seed)
    avoid = set(avoid or ())
    used: set[tuple[str, ...]] = set()
    out: list[Sentence] = []
    for n in range(lo, hi + 1):
        pool = by_length.get(n)
        if not pool:
            raise ValueError(f"no templates available for length {n}")
        got = 0
        attempts = 0
        limit = per_length_count * 1000
        while got < per_length_count:
            attempts += 1
            if attempts > limit:
                raise ValueError(
                    f"insufficient unique sentences for length {n} "
                    f"(found {got} of {per_length_count})"
                )
            template = rng.choice(pool)
            tokens = _fill(template, lexicon, rng)
            if tokens in used or tokens in avoid:
                continue
            used.add(tokens)
            out.append(Sentence(tokens, template, grammar.params, split))
            got += 1
    return out


def coverage_check(train, test) -> bool:
    """No token-sequence overlap and full test-vocabulary coverage."""
    train_seqs = {tuple(s.tokens) for s in train}
    train_vocab = {w for s in train for w in s.tokens}
    for s in test:
        if tuple(s.tokens) in train_seqs:
            return False
    test_vocab = {w for s in test for w in s.tokens}
    return test_vocab <= train_vocab


# --- targeted constructions -------------------------------------------------


def _order_clause(base_order: str, subj, obj, verb) -> list[str]:
    """Linearize (subject phrase, object phrase, verb tokens) for a base
    order; ``obj`` None drops the object slot (object-gap clauses)."""
    slots = {"S": subj, "O": obj, "V": verb}
    out: list[str] = []
    for slot in base_order:
        part = slots[slot]
        if part is not None:
            out.extend(part)
    return out


def _marked_np() -> list[str]:
    return ["NP", "SUBJ"]


def _rel_np(grammar: Grammar, body: list[str]) -> list[str]:
    head = _marked_np()
    if grammar.params[6] == "1":  # REL head-initial: relativizer follows head
        return head + ["REL"] + body
    return body + ["REL"] + head


def _comp_clause(grammar: Grammar, clause: list[str]) -> list[str]:
    if grammar.params[3] == "1":  # preposed complementizer
        return ["COMP"] + clause
    return clause + ["COMP"]


def targeted_skeleton(grammar: Grammar, kind: str) -> Template:
    """Class skeleton of the Recursive / Embedded construction, linearized
    for the grammar's word order."""
    order = grammar.base_order
    if kind == "Recursive":
        inner = _order_clause(order, _marked_np(), None, ["VT"])
        middle = _order_clause(order, _rel_np(grammar, inner), None, ["VT"])
        subject = _rel_np(grammar, middle)
    elif kind == "Embedded":
        gap = _order_clause(order, _marked_np(), None, ["VT"])
        body = _order_clause(order, _marked_np(), _comp_clause(grammar, gap), ["VCOMP"])
        subject = _rel_np(grammar, body)
    else:
        raise ValueError(f"unknown targeted kind: {kind!r}")
    main = _order_clause(order, subject, ["NP", "OBJ"], ["VT"])
    return tuple(main)


def gen_targeted(
    grammar: Grammar,
    kind: str,
    lexicon: Lexicon,
    n: int,
    seed: int,
    parser: ChartParser | None = None,
) -> list[Sentence]:
    if n < 1:
        raise ValueError("n must be >= 1")
    parser = parser or ChartParser(grammar.policy)
    skeleton = targeted_skeleton(grammar, kind)
    if not parser.parse(grammar.categorize(skeleton)).grammatical:
        raise RuntimeError(
            f"targeted {kind} construction does not parse under {grammar.params}"
        )
    rng = random.Random(seed)
    used: set[tuple[str, ...]] = set()
    out: list[Sentence] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > n * 1000:
            raise ValueError(f"insufficient unique {kind} sentences (got {len(out)})")
        tokens = _fill(skeleton, lexicon, rng)
        if tokens in used:
            continue
        used.add(tokens)
        out.append(Sentence(tokens, skeleton, grammar.params, kind))
    return out


# --- minimal pairs ----------------------------------------------------------

PAIR_KINDS = ("CaseType", "VerbType")


def _case_twin(sentence: Sentence, rng: random.Random):
    idxs = [i for i, c in enumerate(sentence.classes) if c in ("SUBJ", "OBJ")]
    if not idxs:
        return None
    i = rng.choice(idxs)
    classes = list(sentence.classes)
    tokens = list(sentence.tokens)
    classes[i] = "OBJ" if classes[i] == "SUBJ" else "SUBJ"
    tokens[i] = "o" if tokens[i] == "ga" else "ga"
    return tuple(tokens), tuple(classes)


def _verb_twin(sentence: Sentence, lexicon: Lexicon, rng: random.Random):
    idxs = [i for i, c in enumerate(sentence.classes) if c == "VT"]
    if not idxs:
        return None
    i = rng.choice(idxs)
    classes = list(sentence.classes)
    tokens = list(sentence.tokens)
    classes[i] = "VI"
    tokens[i] = rng.choice(lexicon.words["VI"])
    return tuple(tokens), tuple(classes)


def gen_minimal_pairs(
    grammar: Grammar,
    kind: str,
    source,
    lexicon: Lexicon,
    n: int,
    seed: int,
    parser: ChartParser | None = None,
    max_retries: int = 100,
) -> list[tuple[Sentence, Sentence]]:
    """n (grammatical, ungrammatical) pairs differing in exactly one token,
    equal lengths; the ungrammatical twin is parser-verified to fail."""
    if kind not in PAIR_KINDS:
        raise ValueError(f"unknown pair kind: {kind!r}")
    parser = parser or ChartParser(grammar.policy)
    source = list(source)
    if not source:
        raise ValueError("empty source sentence set")
    rng = random.Random(seed)
    out: list[tuple[Sentence, Sentence]] = []
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    for _ in range(n):
        for _retry in range(max_retries):
            src = rng.choice(source)
            twin = (
                _case_twin(src, rng)
                if kind == "CaseType"
                else _verb_twin(src, lexicon, rng)
            )
            if twin is None:
                continue
            bad_tokens, bad_classes = twin
            if bad_tokens == tuple(src.tokens):
                continue
            if (tuple(src.tokens), bad_tokens) in seen:
                continue
            if parser.parse(grammar.categorize(bad_classes)).grammatical:
                continue
            good = Sentence(tuple(src.tokens), tuple(src.classes), grammar.params, "PairGrammatical")
            bad = Sentence(bad_tokens, bad_classes, grammar.params, "PairUngrammatical")
            seen.add((good.tokens, bad.tokens))
            out.append((good, bad))
            break
        else:
            raise RuntimeError(
                f"could not build a {kind} pair after {max_retries} retries"
            )
    return out
