"""Syntax tree for dialect-aware regexes.

Nodes compare structurally; `span` (source location) and `notation` (the
surface syntax that produced the node, recorded for constructs that read
differently across dialects) are metadata and excluded from equality, so
parse(emit(ast)) round-trips to an equal tree.

Character model: Unicode scalar values. Character classes store sorted,
disjoint, inclusive codepoint ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .dialects import Dialect

MAX_CODEPOINT = 0x10FFFF

CharRange = tuple[int, int]


class ParseError(ValueError):
    def __init__(self, position: int, reason: str):
        super().__init__(f"at {position}: {reason}")
        self.position = position
        self.reason = reason


@dataclass(frozen=True, kw_only=True)
class _Meta:
    span: Optional[tuple[int, int]] = field(default=None, compare=False)
    notation: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Literal(_Meta):
    char: str


@dataclass(frozen=True)
class CharClass(_Meta):
    items: tuple[CharRange, ...]
    negated: bool = False
    # surface feature ids observed while reading the class body (posix names,
    # escape-class shorthands, leading-bracket member); metadata only
    marks: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Dot(_Meta):
    pass


@dataclass(frozen=True)
class Concat(_Meta):
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Alternation(_Meta):
    options: tuple["Node", ...]


GREEDY = "greedy"
LAZY = "lazy"
POSSESSIVE = "possessive"


@dataclass(frozen=True)
class Quantifier(_Meta):
    child: "Node"
    min: int
    max: Optional[int]  # None = unbounded
    mode: str = GREEDY


@dataclass(frozen=True)
class Group(_Meta):
    """A capturing group. Pure (?:...) grouping is structural and not a node."""

    child: "Node"
    index: int
    name: Optional[str] = None


@dataclass(frozen=True)
class Backreference(_Meta):
    index: int


# Anchor kinds use the escape letter; '^' and '$' use themselves.
ANCHOR_KINDS = ("^", "$", "A", "Z", "z", "b", "B", "G", "K")


@dataclass(frozen=True)
class Anchor(_Meta):
    kind: str


# EscapeClass kinds: d D w W s S, 'h'/'H' horizontal whitespace,
# 'xdigit'/'XDIGIT' the hex-digit reading of \h in dialects that use it.
@dataclass(frozen=True)
class EscapeClass(_Meta):
    kind: str


@dataclass(frozen=True)
class QuoteBlock(_Meta):
    text: str


@dataclass(frozen=True)
class UnicodeProperty(_Meta):
    name: str
    braced: bool
    negated: bool = False


@dataclass(frozen=True)
class Lookaround(_Meta):
    child: "Node"
    kind: str  # '=', '!', '<=', '<!'


@dataclass(frozen=True)
class InlineFlags(_Meta):
    flags: str
    child: Optional["Node"] = None


Node = Union[
    Literal, CharClass, Dot, Concat, Alternation, Quantifier, Group,
    Backreference, Anchor, EscapeClass, QuoteBlock, UnicodeProperty,
    Lookaround, InlineFlags,
]


@dataclass(frozen=True)
class Ast:
    root: Node
    dialect: Dialect
    source: str = field(compare=False)
    group_count: int = 0


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    yield node
    for child in children(node):
        yield from walk(child)


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, Concat):
        return node.parts
    if isinstance(node, Alternation):
        return node.options
    if isinstance(node, (Quantifier, Group, Lookaround)):
        return (node.child,)
    if isinstance(node, InlineFlags) and node.child is not None:
        return (node.child,)
    return ()


def nullable(node: Node) -> bool:
    """Whether the node can match the empty string."""
    if isinstance(node, (Literal, CharClass, Dot, EscapeClass, UnicodeProperty)):
        return False
    if isinstance(node, (Anchor, Lookaround)):
        return True
    if isinstance(node, InlineFlags):
        return node.child is None or nullable(node.child)
    if isinstance(node, QuoteBlock):
        return node.text == ""
    if isinstance(node, Concat):
        return all(nullable(p) for p in node.parts)
    if isinstance(node, Alternation):
        return any(nullable(o) for o in node.options)
    if isinstance(node, Quantifier):
        return node.min == 0 or nullable(node.child)
    if isinstance(node, Group):
        return nullable(node.child)
    if isinstance(node, Backreference):
        return True  # referenced group may have captured ""
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# Feature inventory
# ---------------------------------------------------------------------------
#
# Feature ids name the *surface* construct, so patterns carry the same
# inventory regardless of which dialect parsed them; the per-dialect reading
# is the catalog's job. Core constructs (plain literals, classes, greedy/lazy
# quantifiers, capturing groups, alternation, ^ excluded below) contribute
# nothing except where a construct is catalog-relevant.

F_QUOTE_BLOCK = "quote-block-\\Q"
F_ANCHOR_G = "anchor-\\G"
F_ANCHOR_A = "anchor-\\A"
F_ANCHOR_ZU = "anchor-\\Z"
F_ANCHOR_ZL = "anchor-\\z"
F_MATCH_RESET = "match-reset-\\K"
F_ESCAPE_E = "escape-\\e"
F_CONTROL_ESCAPE = "control-escape-\\c"
F_HEX_BRACE = "hex-brace-\\x{}"
F_BACKREF_G = "backref-\\g"
F_BACKREF_G_ANGLE = "backref-\\g<>"
F_UPROP_BRACED = "unicode-prop-\\p{}"
F_UPROP_BARE = "unicode-prop-\\p"
F_POSIX_CLASS = "posix-class"
F_ANCHOR_CARET = "anchor-caret"
F_POSSESSIVE = "possessive-quantifier"
F_BACKREF_NUMERIC = "backref-numeric"
F_ESCAPE_H = "escape-\\h"
F_NAMED_GROUP = "named-group"
F_CLASS_LEADING_BRACKET = "class-leading-bracket"
F_CAPTURE_EMPTY_ITERATION = "capture-empty-iteration"
F_CAPTURE_UNMATCHED_ALT = "capture-unmatched-alternative"
F_LOOKAROUND = "lookaround"
F_INLINE_FLAGS = "inline-flags"

# notation prefix -> feature id, for nodes that degraded to literals
_NOTATION_FEATURES = (
    ("++", F_POSSESSIVE),  # possessive syntax read as a plain quantifier
    ("\\Q", F_QUOTE_BLOCK),
    ("\\E", None),  # the closer never counts on its own
    ("\\G", F_ANCHOR_G),
    ("\\A", F_ANCHOR_A),
    ("\\Z", F_ANCHOR_ZU),
    ("\\z", F_ANCHOR_ZL),
    ("\\K", F_MATCH_RESET),
    ("\\e", F_ESCAPE_E),
    ("\\c", F_CONTROL_ESCAPE),
    ("\\x{", F_HEX_BRACE),
    ("\\g<", F_BACKREF_G_ANGLE),
    ("\\g", F_BACKREF_G),
    ("\\p{", F_UPROP_BRACED),
    ("\\P{", F_UPROP_BRACED),
    ("\\p", F_UPROP_BARE),
    ("\\P", F_UPROP_BARE),
    ("\\h", F_ESCAPE_H),
    ("\\", F_BACKREF_NUMERIC),  # \1 octal/backref notations: digits follow
)


def _notation_feature(notation: str) -> Optional[str]:
    for prefix, fid in _NOTATION_FEATURES:
        if notation.startswith(prefix):
            if prefix == "\\" and not notation[1:2].isdigit():
                continue
            return fid
    return None


def feature_occurrences(ast: Ast) -> list[tuple[str, tuple[int, int]]]:
    """Every catalog-relevant construct occurrence with its source span."""
    out: list[tuple[str, tuple[int, int]]] = []

    def spot(fid: str, node: Node) -> None:
        out.append((fid, node.span or (0, 0)))

    for node in walk(ast.root):
        if node.notation is not None:
            fid = _notation_feature(node.notation)
            if fid is not None:
                spot(fid, node)
        if isinstance(node, QuoteBlock) and node.notation is None:
            spot(F_QUOTE_BLOCK, node)
        elif isinstance(node, Anchor):
            if node.kind == "^":
                spot(F_ANCHOR_CARET, node)
            elif node.kind in ("A", "Z", "z", "G", "K") and node.notation is None:
                spot({"A": F_ANCHOR_A, "Z": F_ANCHOR_ZU, "z": F_ANCHOR_ZL,
                      "G": F_ANCHOR_G, "K": F_MATCH_RESET}[node.kind], node)
        elif isinstance(node, Backreference) and node.notation is None:
            spot(F_BACKREF_NUMERIC, node)
        elif isinstance(node, EscapeClass):
            if node.kind in ("h", "H", "xdigit", "XDIGIT") and node.notation is None:
                spot(F_ESCAPE_H, node)
        elif isinstance(node, UnicodeProperty) and node.notation is None:
            spot(F_UPROP_BRACED if node.braced else F_UPROP_BARE, node)
        elif isinstance(node, Quantifier) and node.mode == POSSESSIVE:
            spot(F_POSSESSIVE, node)
        elif isinstance(node, Group) and node.name is not None:
            spot(F_NAMED_GROUP, node)
        elif isinstance(node, Lookaround):
            spot(F_LOOKAROUND, node)
        elif isinstance(node, InlineFlags):
            spot(F_INLINE_FLAGS, node)
        if isinstance(node, CharClass):
            for mark in node.marks:
                spot(mark, node)

    out.extend(_structural_occurrences(ast))
    return out


def _structural_occurrences(ast: Ast) -> list[tuple[str, tuple[int, int]]]:
    """Capture-under-repetition shapes whose observable captures differ
    between engines even though every dialect parses them identically."""
    out = []
    for node in walk(ast.root):
        if not isinstance(node, Quantifier):
            continue
        if node.max is not None and node.max <= 1:
            continue
        span = node.span or (0, 0)
        empty_iter = False
        unmatched_alt = False
        for sub in walk(node.child):
            if isinstance(sub, Group) and nullable(sub.child):
                empty_iter = True
            if isinstance(sub, Alternation) and any(
                isinstance(g, Group)
                for opt in sub.options
                for g in walk(opt)
            ):
                unmatched_alt = True
        if empty_iter:
            out.append((F_CAPTURE_EMPTY_ITERATION, span))
        if unmatched_alt:
            out.append((F_CAPTURE_UNMATCHED_ALT, span))
    return out


def feature_inventory(ast: Ast) -> frozenset[str]:
    """The FeatureSet: one id per catalog construct present in the tree."""
    return frozenset(fid for fid, _ in feature_occurrences(ast))


# ---------------------------------------------------------------------------
# Range helpers shared by parser / compiler
# ---------------------------------------------------------------------------

def normalize_ranges(ranges: list[CharRange]) -> tuple[CharRange, ...]:
    """Sort and merge into disjoint inclusive ranges."""
    if not ranges:
        return ()
    ranges = sorted(ranges)
    merged = [ranges[0]]
    for lo, hi in ranges[1:]:
        plo, phi = merged[-1]
        if lo <= phi + 1:
            merged[-1] = (plo, max(phi, hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


def complement_ranges(ranges: tuple[CharRange, ...]) -> tuple[CharRange, ...]:
    out: list[CharRange] = []
    prev = 0
    for lo, hi in ranges:
        if lo > prev:
            out.append((prev, lo - 1))
        prev = hi + 1
    if prev <= MAX_CODEPOINT:
        out.append((prev, MAX_CODEPOINT))
    return tuple(out)


def ranges_contain(ranges: tuple[CharRange, ...], cp: int) -> bool:
    lo, hi = 0, len(ranges)
    while lo < hi:
        mid = (lo + hi) // 2
        a, b = ranges[mid]
        if cp < a:
            hi = mid
        elif cp > b:
            lo = mid + 1
        else:
            return True
    return False


FULL_RANGE: tuple[CharRange, ...] = ((0, MAX_CODEPOINT),)

# Portable single-letter class semantics (ASCII; documented internal model).
DIGIT_RANGES = normalize_ranges([(0x30, 0x39)])
WORD_RANGES = normalize_ranges([(0x30, 0x39), (0x41, 0x5A), (0x5F, 0x5F), (0x61, 0x7A)])
SPACE_RANGES = normalize_ranges([(0x09, 0x0D), (0x20, 0x20)])
HORIZ_RANGES = normalize_ranges([(0x09, 0x09), (0x20, 0x20)])
XDIGIT_RANGES = normalize_ranges([(0x30, 0x39), (0x41, 0x46), (0x61, 0x66)])
DOT_RANGES = complement_ranges(((0x0A, 0x0A),))  # any char but newline

ESCAPE_CLASS_RANGES: dict[str, tuple[CharRange, ...]] = {
    "d": DIGIT_RANGES, "D": complement_ranges(DIGIT_RANGES),
    "w": WORD_RANGES, "W": complement_ranges(WORD_RANGES),
    "s": SPACE_RANGES, "S": complement_ranges(SPACE_RANGES),
    "h": HORIZ_RANGES, "H": complement_ranges(HORIZ_RANGES),
    "xdigit": XDIGIT_RANGES, "XDIGIT": complement_ranges(XDIGIT_RANGES),
}

POSIX_CLASS_RANGES: dict[str, tuple[CharRange, ...]] = {
    "digit": DIGIT_RANGES,
    "alpha": normalize_ranges([(0x41, 0x5A), (0x61, 0x7A)]),
    "alnum": normalize_ranges([(0x30, 0x39), (0x41, 0x5A), (0x61, 0x7A)]),
    "upper": ((0x41, 0x5A),),
    "lower": ((0x61, 0x7A),),
    "space": SPACE_RANGES,
    "blank": HORIZ_RANGES,
    "word": WORD_RANGES,
    "xdigit": XDIGIT_RANGES,
    "punct": normalize_ranges([(0x21, 0x2F), (0x3A, 0x40), (0x5B, 0x60), (0x7B, 0x7E)]),
    "cntrl": normalize_ranges([(0x00, 0x1F), (0x7F, 0x7F)]),
    "print": ((0x20, 0x7E),),
    "graph": ((0x21, 0x7E),),
    "ascii": ((0x00, 0x7F),),
}
