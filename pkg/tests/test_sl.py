"""Super-linear detection, attack synthesis, and dynamic validation."""

import math

import pytest

from regexpassport.dialects import Dialect
from regexpassport.engines import DefenseConfig, match_backtrack
from regexpassport.nfa import CHAR, compile_nfa
from regexpassport.parser import parse
from regexpassport.sl import (
    AttackString,
    FAMILY_DEFENDED,
    FAMILY_EXP,
    FAMILY_LINEAR,
    FAMILY_POLY,
    SynthesisFailed,
    Thresholds,
    VIA_ANCHORED,
    VIA_NONE,
    VIA_UNBOUNDED,
    attack_from_bytes,
    attack_to_bytes,
    detect,
    synthesize_attack,
    validate_attack,
)

CORE = Dialect.PORTABLE_CORE


def D(pattern):
    return detect(parse(pattern, CORE))


class TestDetect:
    def test_nested_plus_is_exponential_directly(self):
        p = D("(a+)+$")
        assert p.verdict == "exponential" and p.via_variant == VIA_NONE
        assert p.attack == AttackString("", "a", "b", 100)

    def test_trailing_anchor_polynomial_via_anchored_variant(self):
        p = D("a+$")
        assert p.direct_verdict == "linear"
        assert p.verdict == "polynomial" and p.via_variant == VIA_ANCHORED
        assert p.attack == AttackString("", "a", "b", 100_000)

    def test_bounded_nesting_exponential_via_unbounded_variant(self):
        p = D("(a{1,1000}){1,1000}$")
        assert p.direct_verdict == "unknown"  # state budget exceeded
        assert p.verdict == "exponential" and p.via_variant == VIA_UNBOUNDED

    def test_plain_pattern_is_linear(self):
        p = D("abc")
        assert p.verdict == "linear" and p.attack is None

    def test_attack_present_iff_superlinear(self):
        for pattern in ("(a+)+$", "a+$", "abc", "^abc$"):
            p = D(pattern)
            assert (p.attack is not None) == (p.verdict in
                                              ("exponential", "polynomial"))


class TestSynthesize:
    def test_suffix_outside_transitive_follow_set(self):
        # a^n b would still match (a|ab)+$; the suffix must escape the
        # pattern's whole future alphabet
        p = D("(a|ab)+$")
        assert p.attack.suffix not in ("a", "b")

    def test_universal_follow_set_fails_synthesis(self):
        ast = parse(r"([\s\S]+)+", CORE)
        nfa = compile_nfa(ast)
        from regexpassport.sl import _find_exponential, _positions
        import time

        pos = _positions(nfa, 400)
        witness = _find_exponential(pos, time.monotonic() + 5)
        assert witness is not None
        with pytest.raises(SynthesisFailed):
            synthesize_attack(nfa, witness)
        # detect degrades to unknown instead of a bogus attack
        assert D(r"([\s\S]+)+").verdict == "unknown"


class TestValidate:
    def test_exponential_confirmed_without_defenses(self):
        p = D("(a+)+$")
        v = validate_attack(parse("(a+)+$", CORE), p.attack)
        assert v.family == FAMILY_EXP
        assert len(v.measurements) >= 3

    def test_counter_defense_reports_defended(self):
        p = D("(a+)+$")
        v = validate_attack(parse("(a+)+$", CORE), p.attack,
                            DefenseConfig(step_limit=2_000))
        assert v.family == FAMILY_DEFENDED

    def test_fast_engine_reports_linear(self):
        p = D("(a+)+$")
        v = validate_attack(parse("(a+)+$", CORE), p.attack, engine="pike")
        assert v.family == FAMILY_LINEAR

    def test_quadratic_slope_on_original(self):
        p = D("a+$")
        v = validate_attack(parse("a+$", CORE), p.attack)
        assert v.family == FAMILY_POLY
        assert v.degree == pytest.approx(2.0, abs=0.5)
        # the configured ladder tops out at the desk pump cap
        assert max(m[0] for m in v.measurements) == 10_000

    def test_refuted_prediction_reports_linear(self):
        # the widened variant of a{3}b is quadratic, the original is not;
        # validation on the original refutes the static prediction
        p = D("a{3}b")
        assert p.verdict == "polynomial"
        v = validate_attack(parse("a{3}b", CORE), p.attack)
        assert v.family == FAMILY_LINEAR

    def test_thresholds_config_exposed(self):
        # raising the polynomial window floor reclassifies a quadratic
        p = D("a+$")
        strict = Thresholds(poly_slope_lo=2.5)
        v = validate_attack(parse("a+$", CORE), p.attack, thresholds=strict)
        assert v.family == FAMILY_LINEAR
        assert v.degree == pytest.approx(2.0, abs=0.5)


class TestSerialization:
    def test_golden_bytes(self):
        attack = AttackString("pre\nfix", "ab", "!", 100)
        assert attack_to_bytes(attack) == b"7\npre\nfix\nab\n!\n100\n"

    def test_round_trip(self):
        for attack in (AttackString("", "a", "b", 100),
                       AttackString("x\ny", "pq", "\x00", 100_000),
                       AttackString("é", "a", "z", 7)):
            assert attack_from_bytes(attack_to_bytes(attack)) == attack

    def test_newline_pump_rejected(self):
        with pytest.raises(ValueError):
            attack_to_bytes(AttackString("", "a\n", "b", 1))


# ---------------------------------------------------------------------------
# Brute-force cross-check. Expected classes were computed by the exhaustive
# oracle below (undefended backtracker steps over pump ladders for every
# small attack triple) and frozen; the oracle re-runs live on a sample.
# ---------------------------------------------------------------------------

FROZEN_CLASSES = {
    "(a+)+$": "exponential",
    "(a|a)+$": "exponential",
    "([ab]+)+$": "exponential",
    "(a+)*$": "exponential",
    "(aa|aa)+$": "exponential",
    "^(a+)+$": "exponential",
    "(\\d+)+$": "exponential",
    "(a+b?)+$": "exponential",
    "a+$": "polynomial",
    "(a|ab)+$": "polynomial",
    "(a|b)+c$": "polynomial",
    "a*b": "polynomial",
    "(ab)+$": "polynomial",
    "[ab]+c$": "polynomial",
    "a+b+$": "polynomial",
    "abc": "linear",
    "^a+$": "linear",
    "^abc$": "linear",
    "x(a|b)y": "linear",
    "a{3}b": "linear",
}


def brute_force_class(ast) -> str:
    """Exhaustive oracle: measure undefended backtracker steps over pump
    ladders for every small (prefix, pump, suffix) candidate."""
    nfa = compile_nfa(ast)
    chars = sorted({chr(data[0][0]) for edges in nfa.edges
                    for kind, data, _ in edges if kind == CHAR and data})[:2] or ["a"]
    best = "linear"
    for pump in [*chars, *(a + b for a in chars for b in chars)]:
        for prefix in ["", chars[0]]:
            for suffix in ["\x00", "!"]:
                steps = []
                for n in (5, 7, 9):
                    r = match_backtrack(ast, prefix + pump * n + suffix, budget=0.5)
                    steps.append(max(r.steps, 1))
                if (steps[1] / steps[0] >= 3.0 and steps[2] / steps[1] >= 3.0
                        and steps[2] > 400):
                    return "exponential"
                s = []
                for n in (40, 80, 160):
                    r = match_backtrack(ast, prefix + pump * n + suffix, budget=0.5)
                    s.append(max(r.steps, 1))
                if math.log(s[2] / s[0]) / math.log(4) >= 1.5:
                    best = "polynomial"
    return best


def confirmed_class(ast) -> str:
    """The pipeline's end-to-end verdict: static prediction, then dynamic
    confirmation on the original pattern."""
    prediction = detect(ast)
    if prediction.verdict not in ("exponential", "polynomial"):
        return "linear"
    verdict = validate_attack(ast, prediction.attack)
    return {FAMILY_EXP: "exponential", FAMILY_POLY: "polynomial",
            FAMILY_LINEAR: "linear", FAMILY_DEFENDED: "defended"}[verdict.family]


def test_pipeline_matches_frozen_oracle_classes():
    for pattern, expected in FROZEN_CLASSES.items():
        assert confirmed_class(parse(pattern, CORE)) == expected, pattern


def test_live_oracle_sample_agrees_with_frozen_table():
    for pattern in ("(a+)+$", "a+$", "(ab)+$", "abc", "a{3}b"):
        ast = parse(pattern, CORE)
        assert brute_force_class(ast) == FROZEN_CLASSES[pattern], pattern


def test_no_false_positives_end_to_end():
    # every super-linear claim carries a dynamic confirmation on the original
    for pattern, expected in FROZEN_CLASSES.items():
        prediction = detect(parse(pattern, CORE))
        if prediction.verdict in ("exponential", "polynomial"):
            family = validate_attack(parse(pattern, CORE), prediction.attack).family
            if expected == "linear":
                assert family == FAMILY_LINEAR, pattern
            else:
                assert family in (FAMILY_EXP, FAMILY_POLY), pattern
