"""Input generation: coverage, validity of positives, determinism."""

from regexpassport.dialects import Dialect
from regexpassport.engines import match_pike
from regexpassport.inputs import generate, inputs_from_bytes, inputs_to_bytes
from regexpassport.nfa import compile_nfa
from regexpassport.parser import parse

CORE = Dialect.PORTABLE_CORE


def test_forced_examples():
    generated = generate(parse("ab", CORE), 40, seed=5)
    assert "ab" in generated.positives
    assert any(n and n != "ab" for n in generated.negatives)


def test_coverage_on_alternation_loop():
    generated = generate(parse("(a|b)+c", CORE), 100, seed=7)
    assert generated.coverage >= 0.9


def test_hundred_inputs_clear_the_half_coverage_reference():
    # reference point: 100 generated inputs should reach at least half of
    # the character edges on a moderately complex pattern
    moderate = parse("(ab|cd[0-9]+)+(x|yz)?[efg]{2,4}$", CORE)
    generated = generate(moderate, 100, seed=11)
    assert generated.coverage >= 0.5


def test_walk_positives_accepted_by_pike():
    ast = parse("(a|b)+c?[xy]$", CORE)
    nfa = compile_nfa(ast)
    generated = generate(ast, 120, seed=9)
    assert generated.positives
    for text in generated.positives:
        assert match_pike(nfa, text).matched, text


def test_determinism():
    a = generate(parse("(a|b)+c", CORE), 200, seed=123)
    b = generate(parse("(a|b)+c", CORE), 200, seed=123)
    assert inputs_to_bytes(a) == inputs_to_bytes(b)
    c = generate(parse("(a|b)+c", CORE), 200, seed=124)
    assert inputs_to_bytes(a) != inputs_to_bytes(c)


def test_backref_pattern_gets_skeleton_inputs():
    ast = parse(r"(ab)\1", Dialect.PERL)
    generated = generate(ast, 30, seed=3)
    assert "ab" in generated.positives[0]
    assert generated.coverage == 0.0  # no automaton to measure against


def test_serialization_binary_safe():
    generated = generate(parse("a", CORE), 10, seed=1)
    generated.positives.append("line\nbreak")
    generated.negatives.append("\x00\x01")
    data = inputs_to_bytes(generated)
    back = inputs_from_bytes(data)
    assert back.positives == generated.positives
    assert back.negatives == generated.negatives
    assert back.seed == generated.seed


def test_budget_expiry_returns_partial_set():
    generated = generate(parse("(a|b|c)(d|e|f)(g|h)+x?", CORE), 100_000,
                         budget=0.05, seed=2)
    total = len(generated.positives) + len(generated.negatives)
    assert 0 < total < 100_000
