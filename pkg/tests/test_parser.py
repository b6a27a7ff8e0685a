"""Chart parser: fixtures, derivation soundness, policy behavior."""

import pytest

from alforge.categories import NP, S, parse_category
from alforge.combinators import RuleId
from alforge.grammars import grammar_by_id
from alforge.parser import (
    ChartParser,
    Derivation,
    ParserPolicy,
    derivation_check,
    derivation_rules,
    parse,
    rotations,
)

EN = grammar_by_id("0101101")

SHOWCASE_CLASSES = ("ADJ", "NP", "SUBJ", "REL", "NP", "SUBJ", "VT", "VI", "CONJ", "VI")


def en_parse(classes, **kw):
    return ChartParser(EN.policy).parse(EN.categorize(classes), **kw)


class TestFixtures:
    def test_transitive_sentence(self):
        seq = [NP, parse_category("(S\\NP)/NP"), NP]
        assert parse(seq).grammatical

    def test_composed_modifier_sentence(self):
        seq = [
            NP,
            parse_category("(NP\\NP)/NP"),
            NP,
            parse_category("S\\NP"),
        ]
        assert parse(seq).grammatical

    def test_coordinated_subjects(self):
        seq = [
            NP,
            parse_category("(var\\.,@var)/.,@var"),
            NP,
            parse_category("(S\\NP)/NP"),
            NP,
        ]
        assert parse(seq).grammatical

    def test_object_relative_noun_phrase(self):
        seq = [
            NP,
            parse_category("(NP\\NP)/(S/NP)"),
            NP,
            parse_category("(S\\NP)/NP"),
        ]
        cats = ChartParser().derivable(seq)
        assert NP in cats
        assert S not in cats

    def test_full_derivation_example(self):
        result = en_parse(SHOWCASE_CLASSES, derivations=True)
        assert result.grammatical
        used = {
            RuleId.FWD_APP,
            RuleId.BWD_APP,
            RuleId.BWD_COMP,
            RuleId.COORD,
            RuleId.PERMUTE,
        }
        assert any(used <= derivation_rules(d) for d in result.derivations)

    def test_leading_marker_fails(self):
        assert not en_parse(("SUBJ", "NP")).grammatical


class TestDerivations:
    def test_replay_soundness(self):
        result = en_parse(SHOWCASE_CLASSES, derivations=True)
        assert result.derivations
        for tree in result.derivations:
            assert derivation_check(tree)

    def test_mutated_tree_fails(self):
        tree = en_parse(("NP", "SUBJ", "VI"), derivations=True).derivations[0]

        def mutate(node):
            if not node.children:
                return Derivation(S, node.rule, ())
            return Derivation(node.category, node.rule, (mutate(node.children[0]),) + node.children[1:])

        assert not derivation_check(mutate(tree))

    def test_malformed_tree_raises(self):
        with pytest.raises(ValueError):
            derivation_check("not a tree")

    def test_extraction_cap(self):
        result = en_parse(SHOWCASE_CLASSES, derivations=True, max_derivations=3)
        assert 0 < len(result.derivations) <= 3


class TestPolicy:
    def test_permutation_needed(self):
        seq = EN.categorize(("NP", "SUBJ", "REL", "NP", "SUBJ", "VT", "VI"))
        assert ChartParser(EN.policy).parse(seq).grammatical
        frozen = ParserPolicy(allow_permutation=False)
        assert not ChartParser(frozen).parse(seq).grammatical

    def test_disabling_never_adds(self):
        sov = grammar_by_id("0000000")
        on = ChartParser(ParserPolicy(allow_permutation=True))
        off = ChartParser(ParserPolicy(allow_permutation=False))
        from itertools import product

        for classes in product(("NP", "SUBJ", "VT", "VI"), repeat=3):
            seq = sov.categorize(classes)
            if off.parse(seq).grammatical:
                assert on.parse(seq).grammatical

    def test_rel_conditional_policy(self):
        sov = grammar_by_id("0000000")
        with_rel = sov.categorize(("NP", "SUBJ", "REL"))
        without = sov.categorize(("NP", "SUBJ", "VI"))
        assert sov.policy.permutation_active(with_rel)
        assert not sov.policy.permutation_active(without)

    def test_rotation_eligibility(self):
        vt = parse_category("(S\\NP_SUBJ)/NP_OBJ")
        assert rotations(vt) == [parse_category("(S/NP_OBJ)\\NP_SUBJ")]
        assert rotations(parse_category("NP/NP")) == []
        assert rotations(parse_category("(S\\NP_SUBJ)/@NP_OBJ")) == []


class TestRecognizer:
    def test_empty_sequence(self):
        with pytest.raises(ValueError):
            ChartParser().parse(())

    def test_determinism(self):
        first = en_parse(SHOWCASE_CLASSES).grammatical
        second = en_parse(SHOWCASE_CLASSES).grammatical
        assert first == second

    def test_parser_reuse(self):
        p = ChartParser(EN.policy)
        assert p.parse(EN.categorize(("NP", "SUBJ", "VI"))).grammatical
        assert not p.parse(EN.categorize(("VI", "NP", "SUBJ"))).grammatical
        assert p.parse(EN.categorize(("NP", "SUBJ", "VT", "NP", "OBJ"))).grammatical
