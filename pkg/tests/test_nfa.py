"""Automaton construction, the subset-construction oracle, and coverage."""

import itertools
import random

import pytest

from regexpassport.dialects import Dialect
from regexpassport.nfa import (
    BudgetExceeded,
    CHAR,
    TAG,
    Unsupported,
    compile_nfa,
    dump,
    edge_coverage,
    subset_construct,
)
from regexpassport.parser import parse
from regexpassport.syntax import ParseError

from helpers import gen_pattern
from oracle import oracle_accepts

CORE = Dialect.PORTABLE_CORE


def all_strings(alphabet, max_len):
    for length in range(max_len + 1):
        for chars in itertools.product(alphabet, repeat=length):
            yield "".join(chars)


class TestCompile:
    def test_single_literal(self):
        nfa = compile_nfa(parse("a", CORE))
        assert nfa.char_edge_count() == 1

    def test_duplicate_alternative_keeps_two_paths(self):
        nfa = compile_nfa(parse("(a|a)", CORE))
        assert nfa.char_edge_count() == 2

    def test_nested_loops_compile(self):
        nfa = compile_nfa(parse("(a+)+$", CORE))
        assert len(nfa.loop_heads) == 2

    def test_backref_unsupported(self):
        with pytest.raises(Unsupported):
            compile_nfa(parse(r"(a)\1", Dialect.PERL))

    def test_lookaround_unsupported(self):
        with pytest.raises(Unsupported):
            compile_nfa(parse("(?=a)b", Dialect.PERL))

    def test_possessive_unsupported(self):
        with pytest.raises(Unsupported):
            compile_nfa(parse("a++", Dialect.PERL))

    def test_expansion_budget(self):
        with pytest.raises(BudgetExceeded):
            compile_nfa(parse("(a{1,1000}){1,1000}$", CORE))

    def test_tags_do_not_affect_language(self):
        # stripping capture groups preserves acceptance
        with_groups = parse("(a)((b|c))d", CORE)
        without = parse("(?:a)(?:(?:b|c))d", CORE)
        d1 = subset_construct(compile_nfa(with_groups), {"a", "b", "c", "d"})
        d2 = subset_construct(compile_nfa(without), {"a", "b", "c", "d"})
        for w in all_strings("abcd", 4):
            assert d1.accepts_input(w) == d2.accepts_input(w), w


class TestSubsetConstruct:
    def test_star_loop(self):
        dfa = subset_construct(compile_nfa(parse("a*", CORE)), {"a"})
        assert all(dfa.accepts_input("a" * k) for k in range(5))

    def test_alternation_language(self):
        dfa = subset_construct(compile_nfa(parse("(a|b)c", CORE)), {"a", "b", "c"})
        accepted = [w for w in all_strings("abc", 3) if dfa.accepts_input(w)]
        assert accepted == ["ac", "bc"]

    def test_counted(self):
        dfa = subset_construct(compile_nfa(parse("a{2}", CORE)), {"a"})
        assert [dfa.accepts_input("a" * k) for k in range(4)] == [
            False, False, True, False]

    def test_guard_on_alphabet(self):
        nfa = compile_nfa(parse("a", CORE))
        with pytest.raises(ValueError):
            subset_construct(nfa, set("abcdefghi"))

    def test_state_budget(self):
        # the k-th-symbol-from-the-end language needs ~2^k subsets
        nfa = compile_nfa(parse("(a|b)*a(a|b){13}", CORE))
        with pytest.raises(BudgetExceeded):
            subset_construct(nfa, {"a", "b"})

    def test_anchors_and_word_boundary(self):
        dfa = subset_construct(compile_nfa(parse(r"a\b", CORE)), {"a", "-"})
        assert dfa.accepts_input("a")
        assert not dfa.accepts_input("a-")  # full match consumes everything

    def test_nfa_dfa_oracle_agreement_random(self):
        rng = random.Random(47)
        checked = 0
        while checked < 120:
            pattern = gen_pattern(rng, 3)
            try:
                ast = parse(pattern, CORE)
                nfa = compile_nfa(ast)
                dfa = subset_construct(nfa, {"a", "b", "c"})
            except (ParseError, Unsupported, BudgetExceeded):
                continue
            checked += 1
            for w in all_strings("abc", 4):
                assert dfa.accepts_input(w) == oracle_accepts(ast, w), (pattern, w)


class TestEdgeCoverage:
    def test_full_coverage(self):
        assert edge_coverage(compile_nfa(parse("ab", CORE)), ["ab"]) == 1.0

    def test_half_coverage_of_alternation(self):
        # two char edges; only the 'a' edge is traversed
        assert edge_coverage(compile_nfa(parse("a|b", CORE)), ["a"]) == 0.5

    def test_no_inputs(self):
        assert edge_coverage(compile_nfa(parse("ab", CORE)), []) == 0.0


def test_dump_golden():
    text = dump(compile_nfa(parse("a|b", CORE)))
    assert text == (
        "states=6 start=0 accept=2\n"
        "0 -> 3 tag open0\n"
        "1 -> 2 tag close0\n"
        "3 -> 4 eps -\n"
        "3 -> 5 eps -\n"
        "4 -> 1 char 0x0061\n"
        "5 -> 1 char 0x0062\n"
    )
