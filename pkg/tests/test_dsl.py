import random

import pytest

from rightsrisk.dsl import ParseError, parse_kb, print_kb, tokenize
from rightsrisk.model import ChainHead, PredHead

from kb_random import random_kb


class TestTokenize:
    def test_scenario_decl(self):
        kinds = [t.kind for t in tokenize("scenario S_d { student_consent }")]
        assert kinds == ["kw_scenario", "ident", "lbrace", "ident", "rbrace", "eof"]

    def test_chain_tokens(self):
        kinds = [t.kind for t in tokenize("privacy > public_health")]
        assert kinds == ["ident", "gt", "ident", "eof"]

    def test_illegal_character(self):
        with pytest.raises(ParseError) as exc:
            tokenize("§")
        assert exc.value.span.start_line == 1
        assert exc.value.span.start_col == 1

    def test_comments_skipped(self):
        kinds = [t.kind for t in tokenize("// note\nbasic a; // tail")]
        assert kinds == ["kw_basic", "ident", "semi", "eof"]

    def test_spans_inside_input(self):
        toks = tokenize("basic a;\nbasic b;")
        assert toks[3].span.start_line == 2


class TestParse:
    def test_scholarship_counts(self, scholarship_kb):
        assert len(scholarship_kb.scenarios) == 3
        assert len(scholarship_kb.rights) == 5
        assert len(scholarship_kb.assertions) == 7

    def test_empty_file(self):
        kb = parse_kb("")
        assert kb.scenarios == [] and kb.rules == []

    def test_pandemic_counts(self, pandemic_kb):
        chains = [a for a in pandemic_kb.assertions
                  if isinstance(a.head, ChainHead)]
        preds = [a for a in pandemic_kb.assertions
                 if isinstance(a.head, PredHead)]
        assert len(pandemic_kb.scenarios) == 1
        assert len(chains) == 1
        assert len(preds) == 2

    def test_rule_strength(self, triage_kb):
        rule = next(r for r in triage_kb.rules if r.id == "r_mass")
        assert rule.strength == 2

    def test_syntax_error_has_span_and_expected(self):
        with pytest.raises(ParseError) as exc:
            parse_kb("scenario { }")
        assert exc.value.expected
        assert exc.value.span.start_line == 1

    def test_negative_strength(self):
        kb = parse_kb("right a;\nrule r [-3]: => promotes(a);")
        assert kb.rules[0].strength == -3


class TestPrint:
    def test_round_trip_fixtures(self, pandemic_kb, scholarship_kb,
                                 privacy_kb, triage_kb):
        for kb in (pandemic_kb, scholarship_kb, privacy_kb, triage_kb):
            assert parse_kb(print_kb(kb)) == kb

    def test_empty_kb_prints_empty(self):
        assert print_kb(parse_kb("")) == ""

    def test_chain_canonical_form(self):
        kb = parse_kb("right A; right B; right C;\nrule r: => A > B > C;")
        assert "rule r: => A > B > C;" in print_kb(kb)

    def test_round_trip_randomized(self):
        rng = random.Random(20260825)
        for _ in range(50):
            kb = random_kb(rng, with_extras=True)
            assert parse_kb(print_kb(kb)) == kb
