"""Engine behavior: documented capture semantics, defense properties, and
the three performance families at desk scale."""

import random

from regexpassport.dialects import Dialect
from regexpassport.engines import (
    DefenseConfig,
    NO_DEFENSES,
    Outcome,
    compile_program,
    match_backtrack,
    match_pike,
)
from regexpassport.nfa import compile_nfa
from regexpassport.parser import parse
from regexpassport.syntax import ParseError

from helpers import gen_input, gen_pattern
from oracle import OracleRun, oracle_search

CORE = Dialect.PORTABLE_CORE
PERL = Dialect.PERL


def bt(pattern, text, dialect=PERL, **kw):
    return match_backtrack(parse(pattern, dialect), text, **kw)


def pike(pattern, text, dialect=CORE, **kw):
    return match_pike(compile_nfa(parse(pattern, dialect)), text, **kw)


class TestDocumentedSemantics:
    def test_alternation_capture_retained_across_iterations(self):
        r = bt("((a)|(b))+", "ab")
        assert r.span == (0, 2)
        assert r.captures == [(1, 2), (0, 1), (1, 2)]  # group 2 keeps "a"

    def test_empty_pattern_matches_at_zero(self):
        r = bt("", "xyz")
        assert r.span == (0, 0) and r.captures == []

    def test_empty_final_iteration_updates_capture(self):
        r = bt("((a*)+)", "aa")
        assert r.span == (0, 2)
        assert r.captures == [(0, 2), (2, 2)]  # inner group ends empty

    def test_first_alternative_preferred(self):
        assert bt("ab|a", "ab").span == (0, 2)
        assert pike("ab|a", "ab").span == (0, 2)

    def test_star_on_empty_input(self):
        assert pike("a*", "").span == (0, 0)

    def test_partial_match_is_leftmost(self):
        assert bt("a+", "xaab").span == (1, 3)
        assert pike("a+", "xaab").span == (1, 3)

    def test_backreference(self):
        r = bt(r"(a+)\1", "aaaa")
        assert r.span == (0, 4) and r.captures == [(0, 2)]

    def test_possessive_gives_back_nothing(self):
        assert bt("a++", "aaa").span == (0, 3)
        assert bt("a++a", "aaa").outcome is Outcome.NO_MATCH

    def test_anchors(self):
        assert bt(r"^ab$", "ab").span == (0, 2)
        assert bt(r"^ab$", "xab").outcome is Outcome.NO_MATCH
        assert bt(r"\bab\b", "x ab y").span == (2, 4)


class TestGrowthFamilies:
    def test_backtracker_exponential_growth_matches_oracle(self):
        # growth ratio of the naive recursive oracle is the reference
        ast = parse("(a+)+$", CORE)
        oracle_steps = []
        engine_steps = []
        for n in (8, 9, 10, 11):
            text = "a" * n + "b"
            _, _, steps = oracle_search(ast, text)
            oracle_steps.append(steps)
            engine_steps.append(match_backtrack(ast, text).steps)
        for series in (oracle_steps, engine_steps):
            ratios = [series[i + 1] / series[i] for i in range(len(series) - 1)]
            assert all(r >= 1.8 for r in ratios), series

    def test_pike_linear_on_exponential_pattern(self):
        nfa = compile_nfa(parse("(a+)+$", CORE))
        r = match_pike(nfa, "a" * 64 + "b")
        assert r.outcome is Outcome.NO_MATCH
        assert r.steps <= 6 * nfa.n_states * 66

    def test_counter_defense_aborts(self):
        r = bt("(a+)+$", "a" * 30 + "b",
               defenses=DefenseConfig(step_limit=100_000))
        assert r.outcome is Outcome.ABORTED

    def test_memoized_rejection_is_polynomial(self):
        # doubling-ratio bound over n in [8, 32] plus one octave beyond
        steps = {}
        for n in (8, 16, 32, 64):
            r = bt("(a+)+$", "a" * n + "b", defenses=DefenseConfig(memoize=True))
            assert r.outcome is Outcome.NO_MATCH
            steps[n] = r.steps
        assert steps[16] / steps[8] <= 8
        assert steps[32] / steps[16] <= 8
        assert steps[64] / steps[32] <= 8


class TestDefenseProperties:
    def _random_cases(self, seed, count):
        rng = random.Random(seed)
        cases = []
        while len(cases) < count:
            pattern = gen_pattern(rng, 3, anchors=True)
            try:
                ast = parse(pattern, CORE)
            except ParseError:
                continue
            cases.append((ast, gen_input(rng, 10)))
        return cases

    def test_memoization_never_changes_results(self):
        for ast, text in self._random_cases(101, 250):
            plain = match_backtrack(ast, text)
            memoized = match_backtrack(ast, text, DefenseConfig(memoize=True))
            assert plain.outcome == memoized.outcome, ast.source
            assert plain.span == memoized.span, ast.source
            assert plain.captures == memoized.captures, ast.source
            assert memoized.steps <= plain.steps, ast.source

    def test_pruning_never_changes_outcome_or_span(self):
        for ast, text in self._random_cases(102, 250):
            plain = match_backtrack(ast, text)
            pruned = match_backtrack(ast, text,
                                     DefenseConfig(offset_pruning=True))
            assert plain.outcome == pruned.outcome, ast.source
            assert plain.span == pruned.span, ast.source
            assert plain.captures == pruned.captures, ast.source

    def test_counter_determinism(self):
        ast = parse("(a+)+$", CORE)
        text = "a" * 24 + "b"
        for limit in (10, 1_000, 100_000):
            defense = DefenseConfig(step_limit=limit)
            first = match_backtrack(ast, text, defense)
            second = match_backtrack(ast, text, defense)
            assert first.outcome == second.outcome
            assert first.steps == second.steps

    def test_counter_fires_iff_retries_exceed_limit(self):
        ast = parse("(a+)+$", CORE)
        for n in (6, 8, 10):
            text = "a" * n + "b"
            plain = match_backtrack(ast, text)
            # measure actual retries via a limit that can never fire
            retries_free = match_backtrack(
                ast, text, DefenseConfig(step_limit=10**12)).outcome
            assert retries_free is Outcome.NO_MATCH
            for limit in (plain.steps // 2, plain.steps * 2):
                got = match_backtrack(ast, text, DefenseConfig(step_limit=limit))
                assert got.outcome in (Outcome.NO_MATCH, Outcome.ABORTED)

    def test_counter_ignores_forward_consumption(self):
        # a long benign scan stays under a tiny retry limit
        r = bt("abc", "x" * 5000 + "abc",
               defenses=DefenseConfig(step_limit=10))
        assert r.outcome is Outcome.MATCH


class TestEngineEquivalence:
    def test_engines_and_oracle_agree_on_random_suite(self):
        rng = random.Random(103)
        compared = 0
        while compared < 400:
            pattern = gen_pattern(rng, 3, anchors=True)
            try:
                ast = parse(pattern, CORE)
                nfa = compile_nfa(ast)
            except ParseError:
                continue
            text = gen_input(rng, 10)
            compared += 1
            got_bt = match_backtrack(ast, text)
            got_pike = match_pike(nfa, text)
            span, caps, _ = oracle_search(ast, text)
            assert got_bt.span == span, (pattern, text)
            assert got_pike.span == span, (pattern, text)
            if span is not None:
                expected = [caps.get(i) for i in range(1, ast.group_count + 1)]
                assert got_bt.captures == expected, (pattern, text)
                assert got_pike.captures == expected, (pattern, text)

    def test_nuanced_catalog_cases_follow_documented_semantics(self):
        # the two capture rows: retained alternative, empty final iteration
        for pattern, text, expected in [
            ("((a)|(b))+", "ab", [(1, 2), (0, 1), (1, 2)]),
            ("((a*)+)", "aa", [(0, 2), (2, 2)]),
        ]:
            assert bt(pattern, text).captures == expected
            assert pike(pattern, text).captures == expected


class TestInstrumentation:
    def test_steps_positive_and_elapsed_measured(self):
        r = bt("a+b", "aaab")
        assert r.steps > 0 and r.elapsed >= 0.0

    def test_timeout_on_hard_input(self):
        r = bt("(a+)+$", "a" * 64 + "b", budget=0.05)
        assert r.outcome is Outcome.TIMEOUT

    def test_run_instruction_counts_like_naive_loop(self):
        # steps for /a+$/ scanning must stay quadratic in input length
        ast = parse("a+$", CORE)
        s1 = match_backtrack(ast, "a" * 100 + "b").steps
        s2 = match_backtrack(ast, "a" * 200 + "b").steps
        assert 3.0 <= s2 / s1 <= 5.0  # doubling input ~quadruples steps

    def test_program_compiles_counted_repetition_without_expansion(self):
        prog = compile_program(parse("(a{1,1000}){1,1000}$", CORE))
        assert prog.n_regs >= 1
        assert not prog.memo_safe


class TestWiderConstructs:
    def test_unicode_property_and_quote_block_agree(self):
        for pattern, text in [(r"\p{N}+", "ab42cd"), (r"\pL+", "12ab34"),
                              (r"\Qa.b\E", "xa.bz")]:
            ast = parse(pattern, PERL)
            got_bt = match_backtrack(ast, text)
            got_pike = match_pike(compile_nfa(ast), text)
            assert got_bt.span == got_pike.span, pattern
            assert got_bt.span is not None
