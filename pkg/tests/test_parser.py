"""Dialect-aware parsing: per-dialect readings, errors, and tree invariants."""

import random

import pytest

from regexpassport.dialects import CONCRETE_DIALECTS, Dialect
from regexpassport.emitter import emit
from regexpassport.parser import parse
from regexpassport.syntax import (
    Anchor,
    Backreference,
    CharClass,
    Concat,
    Group,
    Literal,
    ParseError,
    Quantifier,
    QuoteBlock,
    UnicodeProperty,
    feature_inventory,
    walk,
)

from helpers import gen_pattern

JS = Dialect.JAVASCRIPT
JAVA = Dialect.JAVA
PHP = Dialect.PHP
PY = Dialect.PYTHON
RUBY = Dialect.RUBY
GO = Dialect.GO
PERL = Dialect.PERL
RUST = Dialect.RUST
CORE = Dialect.PORTABLE_CORE


def nodes_of(ast, cls):
    return [n for n in walk(ast.root) if isinstance(n, cls)]


class TestDialectReadings:
    def test_numeric_backref_is_backref_in_perl(self):
        ast = parse(r"(a)\1", PERL)
        backrefs = nodes_of(ast, Backreference)
        assert len(backrefs) == 1 and backrefs[0].index == 1

    def test_numeric_backref_is_octal_in_rust(self):
        ast = parse(r"(a)\1", RUST)
        assert not nodes_of(ast, Backreference)
        assert any(n.char == "\x01" for n in nodes_of(ast, Literal))

    def test_numeric_backref_rejected_in_go(self):
        with pytest.raises(ParseError):
            parse(r"(a)\1", GO)

    def test_string_anchors_by_dialect(self):
        assert len(nodes_of(parse(r"\Ab\Z", JAVA), Anchor)) == 2
        ast = parse(r"\Ab\Z", JS)
        assert not nodes_of(ast, Anchor)
        assert [n.char for n in nodes_of(ast, Literal)] == ["A", "b", "Z"]
        with pytest.raises(ParseError):
            parse(r"\Ab\Z", GO)

    def test_posix_class_by_dialect(self):
        go = parse("[[:digit:]]", GO)
        assert nodes_of(go, CharClass)[0].items == ((0x30, 0x39),)
        js = parse("[[:digit:]]", JS)
        cls = nodes_of(js, CharClass)[0]
        assert (0x5B, 0x5B) in cls.items  # '[' read as a plain member
        assert isinstance(js.root, Concat)  # trailing ']' is a literal

    def test_possessive_by_dialect(self):
        assert nodes_of(parse("a++", PERL), Quantifier)[0].mode == "possessive"
        rust = parse("a++", RUST)
        quants = nodes_of(rust, Quantifier)
        assert len(quants) == 2 and all(q.mode == "greedy" for q in quants)
        for d in (JS, PY, GO, CORE):
            with pytest.raises(ParseError):
                parse("a++", d)

    def test_quote_block_by_dialect(self):
        assert nodes_of(parse(r"\Qa.b\E", JAVA), QuoteBlock)[0].text == "a.b"
        js = parse(r"\Qa\E", JS)
        assert [n.char for n in nodes_of(js, Literal)] == ["Q", "a", "E"]
        with pytest.raises(ParseError):
            parse(r"\Qa\E", RUST)

    def test_hex_brace_by_dialect(self):
        assert nodes_of(parse(r"\x{41}", JAVA), Literal)[0].char == "A"
        js = parse(r"\x{41}", JS)
        quant = nodes_of(js, Quantifier)[0]
        assert (quant.min, quant.max) == (41, 41)
        assert quant.child == Literal("x")
        for d in (PY, RUBY):
            with pytest.raises(ParseError):
                parse(r"\x{41}", d)

    def test_unicode_property_by_dialect(self):
        assert nodes_of(parse(r"\p{N}", GO), UnicodeProperty)[0].braced
        assert not nodes_of(parse(r"\pN", PERL), UnicodeProperty)[0].braced
        js = parse(r"\pN", JS)
        assert [n.char for n in nodes_of(js, Literal)] == ["p", "N"]

    def test_g_backref_notations(self):
        assert nodes_of(parse(r"(a)\g1", PHP), Backreference)[0].index == 1
        assert nodes_of(parse(r"(a)\g<1>", RUBY), Backreference)[0].index == 1
        js = parse(r"(a)\g<1>", JS)
        assert [n.char for n in nodes_of(js, Literal)] == ["a", "g", "<", "1", ">"]
        with pytest.raises(ParseError):
            parse(r"(a)\g<1>", PERL)

    def test_control_escape(self):
        assert nodes_of(parse(r"\cC", JAVA), Literal)[0].char == "\x03"
        py = parse(r"\cC", PY)
        assert [n.char for n in nodes_of(py, Literal)] == ["c", "C"]

    def test_named_groups(self):
        assert nodes_of(parse("(?<x>a)", JS), Group)[0].name == "x"
        assert nodes_of(parse("(?P<x>a)", PY), Group)[0].name == "x"
        with pytest.raises(ParseError):
            parse("(?<x>a)", PY)
        with pytest.raises(ParseError):
            parse("(?P<x>a)", JS)

    def test_leading_bracket_class(self):
        py = parse("[]]", PY)
        assert nodes_of(py, CharClass)[0].items == ((0x5D, 0x5D),)
        js = parse("[]]", JS)
        cls = nodes_of(js, CharClass)[0]
        assert cls.items == () and not cls.negated
        with pytest.raises(ParseError):
            parse("[]]", CORE)


class TestErrors:
    def test_quantifier_min_gt_max(self):
        for d in (CORE, JS, PY):
            with pytest.raises(ParseError, match="min 3 > max 2"):
                parse("a{3,2}", d)

    def test_empty_pattern_is_empty_concat(self, portable):
        ast = parse("", portable)
        assert ast.root == Concat(())

    def test_nothing_to_repeat(self, portable):
        for bad in ("*a", "+", "^*", "(?:)*{2}"):
            with pytest.raises(ParseError):
                parse(bad, portable)

    def test_unbalanced(self, portable):
        for bad in ("(a", "a)", "[ab", r"a\\".rstrip("\\") + "\\"):
            with pytest.raises(ParseError):
                parse(bad, portable)

    def test_backref_index_validated_against_total_captures(self):
        with pytest.raises(ParseError):
            parse(r"(a)\2", PERL)
        # forward reference to an existing group is allowed
        assert parse(r"\1(a)", PERL).group_count == 1

    def test_inline_flags(self):
        assert feature_inventory(parse("(?i)a", JAVA)) == {"inline-flags"}
        with pytest.raises(ParseError):
            parse("(?i)a", CORE)

    def test_lookaround_flagged_or_rejected(self):
        assert feature_inventory(parse("(?=a)b", PERL)) == {"lookaround"}
        for d in (GO, RUST, CORE):
            with pytest.raises(ParseError):
                parse("(?=a)b", d)


class TestInventory:
    def test_anchor_inventory(self):
        assert feature_inventory(parse(r"\Ab\Z", JAVA)) == {"anchor-\\A", "anchor-\\Z"}
        # the degraded reading keeps the same surface inventory
        assert feature_inventory(parse(r"\Ab\Z", JS)) == {"anchor-\\A", "anchor-\\Z"}

    def test_core_pattern_has_empty_inventory(self, portable):
        assert feature_inventory(parse("a(bc|d)*[ef]", portable)) == frozenset()

    def test_possessive_inventory(self):
        assert feature_inventory(parse("a++", PERL)) == {"possessive-quantifier"}
        assert feature_inventory(parse("a++", RUST)) == {"possessive-quantifier"}

    def test_structural_capture_shapes(self, portable):
        assert "capture-unmatched-alternative" in feature_inventory(
            parse("((a)|(b))+", portable))
        assert "capture-empty-iteration" in feature_inventory(
            parse("((a*)+)", portable))
        assert feature_inventory(parse("(a)(b)", portable)) == frozenset()


class TestInvariants:
    def test_capture_indices_dense_on_random_patterns(self, portable):
        rng = random.Random(11)
        for _ in range(300):
            pattern = gen_pattern(rng, 4)
            try:
                ast = parse(pattern, portable)
            except ParseError:
                continue
            indices = sorted(g.index for g in walk(ast.root) if isinstance(g, Group))
            assert indices == list(range(1, len(indices) + 1)), pattern
            assert ast.group_count == len(indices)

    def test_round_trip_random_patterns_all_dialects(self):
        rng = random.Random(13)
        for _ in range(250):
            pattern = gen_pattern(rng, 3, anchors=True)
            for dialect in (*CONCRETE_DIALECTS, CORE):
                try:
                    ast = parse(pattern, dialect)
                except ParseError:
                    continue
                text = emit(ast)
                again = parse(text, dialect)
                assert again.root == ast.root, (pattern, text, dialect)

    def test_round_trip_table_constructs(self):
        cases = [
            (r"\Qa.b\E", JAVA), (r"\G a", PERL), (r"\Ab\Z", PY), (r"a\z", RUBY),
            (r"\K", PHP), (r"\e", JAVA), (r"\cC", JAVA), (r"\x{41}", GO),
            (r"(a)\g1", PHP), (r"(a)\g<1>", RUBY), (r"\p{N}", RUST),
            (r"\pN", GO), ("[[:digit:]]", PHP), ("^a", RUBY), ("a++", RUBY),
            (r"(a)\1", JS), (r"\h", JAVA), (r"\h", RUBY), ("(?<n>a)(b)", JS),
            ("[]]", PY), ("((a*)+)", JS), ("((a)|(b))+", GO),
        ]
        for pattern, dialect in cases:
            ast = parse(pattern, dialect)
            assert parse(emit(ast), dialect).root == ast.root, pattern
