import pytest
from hypothesis import given, strategies as st

from rightsrisk.model import (AndExpr, FeatureLiteral, KnowledgeBase,
                              FundamentalRight, ModelError, RightRef,
                              Scenario, expand_right, logically_incompatible,
                              satisfies, validate_kb, NotExpr)


def lit(s: str) -> FeatureLiteral:
    return FeatureLiteral(s.lstrip("!"), not s.startswith("!"))


def lits(*specs: str) -> frozenset:
    return frozenset(lit(s) for s in specs)


class TestSatisfies:
    def test_pandemic_body(self):
        assert satisfies(lits("pandemic", "!consent"), lits("pandemic", "!consent"))

    def test_empty_body_always_true(self):
        assert satisfies(lits("pandemic"), [])
        assert satisfies(frozenset(), [])

    def test_unknown_atom_does_not_satisfy(self):
        # absent atoms are unknown, not false
        assert not satisfies(lits("pandemic"), lits("!consent"))

    def test_wrong_polarity(self):
        assert not satisfies(lits("consent"), lits("!consent"))

    @given(st.sets(st.sampled_from([lit(s) for s in
                                    ["a", "b", "!c", "d", "!e"]])),
           st.sets(st.sampled_from([lit(s) for s in
                                    ["a", "b", "!c", "d", "!e"]])),
           st.sets(st.sampled_from([lit(s) for s in ["f", "!g", "h"]])))
    def test_monotone_in_features(self, features, body, extra):
        if satisfies(features, body):
            assert satisfies(features | extra, body)


class TestExpandRight:
    def test_privacy_conjunction(self, privacy_kb):
        expanded = expand_right(privacy_kb, "privacy")
        assert expanded == AndExpr(tuple(
            RightRef(n) for n in ("data_protection", "autonomy",
                                  "confidentiality", "dignity", "control")))

    def test_atomic_right_is_self_leaf(self, pandemic_kb):
        assert expand_right(pandemic_kb, "public_health") == RightRef("public_health")

    def test_cycle_detected(self):
        kb = KnowledgeBase(rights=[
            FundamentalRight("A", RightRef("B")),
            FundamentalRight("B", RightRef("A")),
        ])
        with pytest.raises(ModelError, match="recursive right definition"):
            expand_right(kb, "A")

    def test_unknown_right(self, pandemic_kb):
        with pytest.raises(KeyError):
            expand_right(pandemic_kb, "nope")


class TestIncompatibility:
    def test_negated_definitions_collide(self):
        kb = KnowledgeBase(rights=[
            FundamentalRight("A", RightRef("x")),
            FundamentalRight("B", NotExpr(RightRef("x"))),
        ])
        assert logically_incompatible(kb, "A", "B")

    def test_distinct_atomics_compatible(self, pandemic_kb):
        assert not logically_incompatible(pandemic_kb, "privacy", "public_health")


class TestValidateKb:
    def test_scholarship_is_clean(self, scholarship_kb):
        assert validate_kb(scholarship_kb) == []

    def test_triage_is_clean(self, triage_kb):
        assert validate_kb(triage_kb) == []

    def test_unknown_right_reference(self, scholarship_kb):
        from rightsrisk.model import AssertStmt, PredHead
        scholarship_kb.assertions.append(
            AssertStmt("S_d", PredHead("promotes", ("made_up",))))
        diags = validate_kb(scholarship_kb)
        assert any("unknown right" in d.message for d in diags)

    def test_polarity_conflict(self):
        kb = KnowledgeBase(scenarios=[Scenario("S", lits("consent", "!consent"))])
        diags = validate_kb(kb)
        assert any(d.code == "polarity-conflict" for d in diags)

    def test_order_insensitive(self, triage_kb):
        baseline = sorted(str(d) for d in validate_kb(triage_kb))
        triage_kb.assertions.reverse()
        triage_kb.rules.reverse()
        triage_kb.scenarios.reverse()
        assert sorted(str(d) for d in validate_kb(triage_kb)) == baseline

    def test_idempotent(self, scholarship_kb):
        first = validate_kb(scholarship_kb)
        assert validate_kb(scholarship_kb) == first
