"""Dialect-aware regex parser.

The same pattern text can parse to different trees under different dialects:
a notation may be a feature in one dialect, degrade to literal characters in
another, and be a syntax error in a third. The notation profile for the
dialect decides; nodes produced by a degraded reading keep the surface
notation as metadata so the feature inventory still sees the construct.

Grammar scope is the portable core (literals, classes, alternation,
quantifiers, groups, anchors) plus the cross-dialect constructs the catalog
tracks. Lookaround and inline flags parse where the dialect allows them but
are flagged as unsupported for analysis. Full fidelity to any one real-world
grammar is a non-goal.
"""

from __future__ import annotations

from .dialects import ALT, ERROR, FEATURE, LITERAL, Dialect, profile
from .syntax import (
    Alternation,
    Anchor,
    Ast,
    Backreference,
    CharClass,
    Concat,
    Dot,
    EscapeClass,
    GREEDY,
    Group,
    InlineFlags,
    LAZY,
    Literal,
    Lookaround,
    Node,
    ParseError,
    POSSESSIVE,
    QuoteBlock,
    Quantifier,
    UnicodeProperty,
    F_CLASS_LEADING_BRACKET,
    F_ESCAPE_H,
    F_HEX_BRACE,
    F_POSIX_CLASS,
    POSIX_CLASS_RANGES,
    ESCAPE_CLASS_RANGES,
    CharRange,
    normalize_ranges,
)

_META = set(".^$*+?()[]{}|\\")
_CONTROL_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", "f": "\f", "v": "\v"}


def parse(source: str, dialect: Dialect) -> Ast:
    """Parse pattern text under the given dialect's interpretation."""
    p = _Parser(source, dialect)
    root = p.parse_alternation()
    if p.i < p.n:
        raise ParseError(p.i, "unbalanced ')'" if p.src[p.i] == ")" else "trailing input")
    for index, pos in p.backrefs:
        if index > p.group_count:
            raise ParseError(pos, f"backreference to undefined group {index}")
    return Ast(root=root, dialect=dialect, source=source, group_count=p.group_count)


def concat_of(parts: list[Node]) -> Node:
    """Concat constructor that flattens nested concats and unwraps singletons."""
    flat: list[Node] = []
    for part in parts:
        if isinstance(part, Concat) and part.notation is None:
            flat.extend(part.parts)
        else:
            flat.append(part)
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


class _Parser:
    def __init__(self, source: str, dialect: Dialect):
        self.src = source
        self.n = len(source)
        self.i = 0
        self.dialect = dialect
        self.prof = profile(dialect)
        self.group_count = 0
        self.backrefs: list[tuple[int, int]] = []

    # -- low-level helpers --------------------------------------------------

    def peek(self, ahead: int = 0) -> str:
        j = self.i + ahead
        return self.src[j] if j < self.n else ""

    def take(self) -> str:
        ch = self.src[self.i]
        self.i += 1
        return ch

    def expect(self, ch: str, what: str) -> None:
        if self.peek() != ch:
            raise ParseError(self.i, f"expected {what}")
        self.i += 1

    def err(self, reason: str, pos: int | None = None) -> ParseError:
        return ParseError(self.i if pos is None else pos, reason)

    # -- productions ---------------------------------------------------------

    def parse_alternation(self) -> Node:
        start = self.i
        options = [self.parse_concat()]
        while self.peek() == "|":
            self.i += 1
            options.append(self.parse_concat())
        if len(options) == 1:
            return options[0]
        return Alternation(tuple(options), span=(start, self.i))

    def parse_concat(self) -> Node:
        start = self.i
        parts: list[Node] = []
        while self.i < self.n and self.peek() not in ")|":
            self.parse_repeat(parts)
        node = concat_of(parts)
        if isinstance(node, Concat) and node.span is None:
            node = Concat(node.parts, span=(start, self.i))
        return node

    def parse_repeat(self, parts: list[Node]) -> None:
        start = self.i
        atoms = self.parse_atom()
        if not atoms:
            return  # zero-width no-op such as a stray \E
        parts.extend(atoms[:-1])
        last = atoms[-1]
        quantified = False
        while self.i < self.n:
            q = self.try_quantifier(last, start, quantified)
            if q is None:
                break
            last = q
            quantified = True
        parts.append(last)

    def try_quantifier(self, child: Node, start: int, already: bool) -> Node | None:
        ch = self.peek()
        if ch == "{":
            bounds = self.scan_bounds()
            if bounds is None:
                return None
            lo, hi = bounds
        elif ch == "*":
            self.i += 1
            lo, hi = 0, None
        elif ch == "+":
            if already:
                return self.possessive_suffix(child, start)
            self.i += 1
            lo, hi = 1, None
        elif ch == "?":
            if already:
                return None  # handled as a laziness modifier below
            self.i += 1
            lo, hi = 0, 1
        else:
            return None
        if already:
            raise self.err("multiple repeat")
        if not self.quantifiable(child):
            raise self.err("nothing to repeat", start)
        mode = GREEDY
        if self.peek() == "?":
            self.i += 1
            mode = LAZY
        elif self.peek() == "+":
            return self.possessive_base(child, lo, hi, start)
        return Quantifier(child, lo, hi, mode, span=(start, self.i))

    def possessive_base(self, child: Node, lo: int, hi: int | None, start: int) -> Node:
        reading = self.prof.possessive
        if reading == ERROR:
            raise self.err("possessive quantifier not supported")
        self.i += 1
        if reading == FEATURE:
            return Quantifier(child, lo, hi, POSSESSIVE, span=(start, self.i))
        # ALT: the trailing + reads as an ordinary quantifier on the quantifier
        inner = Quantifier(child, lo, hi, GREEDY, span=(start, self.i - 1))
        return Quantifier(inner, 1, None, GREEDY, span=(start, self.i), notation="++")

    def possessive_suffix(self, child: Node, start: int) -> Node | None:
        # child is already a Quantifier and another '+' follows
        if not isinstance(child, Quantifier) or child.mode != GREEDY:
            return None
        reading = self.prof.possessive
        if reading == ERROR:
            raise self.err("possessive quantifier not supported")
        self.i += 1
        if reading == FEATURE:
            return Quantifier(child.child, child.min, child.max, POSSESSIVE,
                              span=(start, self.i))
        return Quantifier(child, 1, None, GREEDY, span=(start, self.i), notation="++")

    @staticmethod
    def quantifiable(node: Node) -> bool:
        if isinstance(node, (Anchor, Lookaround)):
            return False
        if isinstance(node, InlineFlags) and node.child is None:
            return False
        return True

    def scan_bounds(self) -> tuple[int, int | None] | None:
        """Parse {m} / {m,} / {m,n}; None when the braces are not a quantifier."""
        save = self.i
        self.i += 1  # '{'
        lo_digits = self.scan_digits()
        if lo_digits is None:
            self.i = save
            return None
        if self.peek() == "}":
            self.i += 1
            return lo_digits, lo_digits
        if self.peek() != ",":
            self.i = save
            return None
        self.i += 1
        hi_digits = self.scan_digits()
        if self.peek() != "}":
            self.i = save
            return None
        self.i += 1
        if hi_digits is None:
            return lo_digits, None
        if lo_digits > hi_digits:
            raise ParseError(save, f"quantifier min {lo_digits} > max {hi_digits}")
        return lo_digits, hi_digits

    def scan_digits(self) -> int | None:
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if self.i == j:
            return None
        return int(self.src[j:self.i])

    def parse_atom(self) -> list[Node]:
        start = self.i
        ch = self.peek()
        if ch == "(":
            return self.parse_group()
        if ch == "[":
            return [self.parse_class()]
        if ch == "\\":
            return self.parse_escape()
        if ch == ".":
            self.i += 1
            return [Dot(span=(start, self.i))]
        if ch == "^":
            self.i += 1
            return [Anchor("^", span=(start, self.i))]
        if ch == "$":
            self.i += 1
            return [Anchor("$", span=(start, self.i))]
        if ch in "*+?":
            raise self.err("nothing to repeat")
        if ch == "{":
            if self.dialect is Dialect.PORTABLE_CORE:
                raise self.err("unescaped '{' is not portable")
            self.i += 1
            return [Literal("{", span=(start, self.i))]
        self.i += 1
        return [Literal(ch, span=(start, self.i))]

    # -- groups ---------------------------------------------------------------

    def parse_group(self) -> list[Node]:
        start = self.i
        self.i += 1  # '('
        if self.peek() != "?":
            self.group_count += 1
            index = self.group_count
            body = self.parse_alternation()
            self.expect(")", "')'")
            return [Group(body, index, span=(start, self.i))]

        self.i += 1  # '?'
        ch = self.peek()
        if ch == ":":
            # pure grouping: no node of its own
            self.i += 1
            body = self.parse_alternation()
            self.expect(")", "')'")
            return [body]
        if ch in "=!":
            return [self.parse_lookaround(start, ch)]
        if ch == "<":
            nxt = self.peek(1)
            if nxt in "=!":
                self.i += 1
                return [self.parse_lookaround(start, "<" + nxt)]
            return [self.parse_named_group(start, angle=True)]
        if ch == "P":
            if self.peek(1) == "<":
                self.i += 1
                return [self.parse_named_group(start, angle=False)]
            raise self.err("unsupported (?P...) construct")
        if ch.isalpha() or ch == "-":
            return [self.parse_inline_flags(start)]
        raise self.err(f"unsupported group syntax (?{ch}")

    def parse_lookaround(self, start: int, kind: str) -> Node:
        if self.prof.lookaround == ERROR:
            raise self.err("lookaround not supported")
        self.i += 1
        body = self.parse_alternation()
        self.expect(")", "')'")
        return Lookaround(body, kind, span=(start, self.i))

    def parse_named_group(self, start: int, angle: bool) -> Node:
        reading = self.prof.named_group if angle else self.prof.named_group_p
        if reading == ERROR:
            raise self.err("named group syntax not supported")
        self.i += 1  # '<'
        j = self.i
        while self.peek().isalnum() or self.peek() == "_":
            self.i += 1
        name = self.src[j:self.i]
        if not name or name[0].isdigit():
            raise self.err("bad group name")
        self.expect(">", "'>'")
        self.group_count += 1
        index = self.group_count
        body = self.parse_alternation()
        self.expect(")", "')'")
        return Group(body, index, name,
                     span=(start, self.i),
                     notation=None if angle else "(?P<")

    def parse_inline_flags(self, start: int) -> Node:
        if self.prof.inline_flags == ERROR:
            raise self.err("inline flags not supported")
        j = self.i
        while self.peek().isalpha() or self.peek() == "-":
            self.i += 1
        flags = self.src[j:self.i]
        if self.peek() == ")":
            self.i += 1
            return InlineFlags(flags, None, span=(start, self.i))
        if self.peek() == ":":
            self.i += 1
            body = self.parse_alternation()
            self.expect(")", "')'")
            return InlineFlags(flags, body, span=(start, self.i))
        raise self.err("bad inline flag group")

    # -- escapes ---------------------------------------------------------------

    def parse_escape(self) -> list[Node]:
        start = self.i
        self.i += 1  # backslash
        if self.i >= self.n:
            raise self.err("trailing backslash")
        ch = self.take()

        def lit(c: str, notation: str | None = None) -> Literal:
            return Literal(c, span=(start, self.i), notation=notation)

        if not ch.isalnum():
            return [lit(ch)]
        if ch in _CONTROL_ESCAPES:
            return [lit(_CONTROL_ESCAPES[ch])]
        if ch in "dDwWsS":
            return [EscapeClass(ch, span=(start, self.i))]
        if ch in "bB":
            return [Anchor(ch, span=(start, self.i))]
        if ch in "hH":
            reading = self.prof.escape_h
            if reading == ERROR:
                raise self.err(f"\\{ch} not supported", start)
            if reading == LITERAL:
                return [lit(ch, f"\\{ch}")]
            kind = ("xdigit" if ch == "h" else "XDIGIT") if reading == ALT else ch
            return [EscapeClass(kind, span=(start, self.i))]

        if ch in "AZ":
            return self.notational(self.prof.string_anchors, ch, f"\\{ch}",
                                   lambda: Anchor(ch, span=(start, self.i)))
        if ch == "z":
            return self.notational(self.prof.end_anchor_z, "z", "\\z",
                                   lambda: Anchor("z", span=(start, self.i)))
        if ch == "G":
            return self.notational(self.prof.match_anchor_g, "G", "\\G",
                                   lambda: Anchor("G", span=(start, self.i)))
        if ch == "K":
            return self.notational(self.prof.match_reset, "K", "\\K",
                                   lambda: Anchor("K", span=(start, self.i)))
        if ch == "e":
            return self.notational(self.prof.escape_e, "e", "\\e",
                                   lambda: lit("\x1b", "\\e"))
        if ch == "Q":
            return self.parse_quote_block(start)
        if ch == "E":
            if self.prof.quote_block == FEATURE:
                return []  # stray quote closer is a no-op
            if self.prof.quote_block == LITERAL:
                return [lit("E", "\\E")]
            raise self.err("\\E not supported")
        if ch == "c":
            return self.parse_control(start)
        if ch == "x":
            return self.parse_hex(start)
        if ch == "u":
            return self.parse_u16(start)
        if ch in "pP":
            return self.parse_property(start, negated=ch == "P")
        if ch == "g":
            return self.parse_g_backref(start)
        if ch == "a":
            if self.dialect is Dialect.PORTABLE_CORE:
                raise self.err("\\a is not portable")
            if self.dialect is Dialect.JAVASCRIPT:
                return [lit("a")]
            return [lit("\x07")]
        if ch == "0":
            if self.dialect is Dialect.PORTABLE_CORE:
                raise self.err("\\0 is not portable")
            return [lit("\x00", "\\0")]
        if ch.isdigit():
            return self.parse_numeric_backref(start, ch)

        if self.prof.unknown_letter_escape == LITERAL:
            return [lit(ch)]
        raise self.err(f"unknown escape \\{ch}", start)

    def notational(self, reading, literal_char: str, notation: str, make) -> list[Node]:
        """Dispatch a notation that is feature / literal / error by dialect."""
        if reading == FEATURE:
            return [make()]
        if reading == LITERAL:
            return [Literal(literal_char, span=(self.i - len(notation), self.i),
                            notation=notation)]
        raise self.err(f"{notation} not supported", self.i - len(notation))

    def parse_quote_block(self, start: int) -> list[Node]:
        reading = self.prof.quote_block
        if reading == ERROR:
            raise self.err("\\Q not supported", start)
        if reading == LITERAL:
            return [Literal("Q", span=(start, self.i), notation="\\Q")]
        end = self.src.find("\\E", self.i)
        if end == -1:
            text, self.i = self.src[self.i:], self.n
        else:
            text, self.i = self.src[self.i:end], end + 2
        return [QuoteBlock(text, span=(start, self.i), notation="\\Q")]

    def parse_control(self, start: int) -> list[Node]:
        reading = self.prof.control_escape
        if reading == ERROR:
            raise self.err("\\c escape not supported", start)
        if self.i >= self.n:
            raise self.err("dangling \\c")
        ch = self.take()
        notation = f"\\c{ch}"
        if reading == FEATURE:
            return [Literal(chr(ord(ch.upper()) ^ 0x40), span=(start, self.i),
                            notation=notation)]
        # literal reading: 'c' then the named character
        return [Literal("c", span=(start, start + 2), notation=notation),
                Literal(ch, span=(start + 2, self.i))]

    def parse_hex(self, start: int) -> list[Node]:
        if self.peek() == "{":
            reading = self.prof.hex_brace
            if reading == ERROR:
                raise self.err("\\x{...} not supported", start)
            if reading == LITERAL:
                # legacy reading: a literal 'x'; any {n} that follows becomes
                # an ordinary counted quantifier on it
                close = self.src.find("}", self.i)
                notation = "\\x" + self.src[self.i:close + 1 if close != -1 else self.n]
                return [Literal("x", span=(start, self.i), notation=notation)]
            j = self.i + 1
            close = self.src.find("}", j)
            if close == -1:
                raise self.err("unterminated \\x{")
            digits = self.src[j:close]
            if not digits or any(c not in "0123456789abcdefABCDEF" for c in digits):
                raise self.err("bad hex escape")
            value = int(digits, 16)
            if value > 0x10FFFF:
                raise self.err("codepoint out of range")
            self.i = close + 1
            return [Literal(chr(value), span=(start, self.i),
                            notation=self.src[start:self.i])]
        digits = self.src[self.i:self.i + 2]
        if len(digits) == 2 and all(c in "0123456789abcdefABCDEF" for c in digits):
            self.i += 2
            return [Literal(chr(int(digits, 16)), span=(start, self.i))]
        if self.dialect is Dialect.JAVASCRIPT:
            return [Literal("x", span=(start, self.i))]
        raise self.err("incomplete \\x escape", start)

    def parse_u16(self, start: int) -> list[Node]:
        if self.dialect in (Dialect.JAVASCRIPT, Dialect.JAVA, Dialect.PYTHON, Dialect.RUBY):
            digits = self.src[self.i:self.i + 4]
            if len(digits) == 4 and all(c in "0123456789abcdefABCDEF" for c in digits):
                self.i += 4
                return [Literal(chr(int(digits, 16)), span=(start, self.i))]
            raise self.err("incomplete \\u escape", start)
        raise self.err("\\u escape not supported", start)

    def parse_property(self, start: int, negated: bool) -> list[Node]:
        braced = self.peek() == "{"
        reading = self.prof.uprop_braced if braced else self.prof.uprop_bare
        if reading == ERROR:
            raise self.err("unicode property not supported", start)
        p = "P" if negated else "p"
        if braced:
            close = self.src.find("}", self.i)
            if close == -1:
                raise self.err("unterminated \\p{")
            name = self.src[self.i + 1:close]
            notation = f"\\{p}{{{name}}}"
            if reading == LITERAL:
                return [Literal(p, span=(start, self.i), notation=notation)]
            if not name:
                raise self.err("empty property name")
            self.i = close + 1
            return [UnicodeProperty(name, True, negated, span=(start, self.i))]
        if self.i >= self.n or not self.peek().isalpha():
            raise self.err("missing property letter")
        if reading == LITERAL:
            return [Literal(p, span=(start, self.i), notation=f"\\{p}{self.peek()}")]
        name = self.take()
        return [UnicodeProperty(name, False, negated, span=(start, self.i))]

    def parse_g_backref(self, start: int) -> list[Node]:
        angle = self.peek() == "<"
        braced = self.peek() == "{"
        reading = self.prof.backref_g_angle if angle else self.prof.backref_g
        if reading == ERROR:
            raise self.err("\\g backreference not supported", start)

        if angle or braced:
            open_ch, close_ch = ("<", ">") if angle else ("{", "}")
            close = self.src.find(close_ch, self.i)
            digits = self.src[self.i + 1:close] if close != -1 else ""
            if reading == FEATURE:
                if close == -1 or not digits.isdigit():
                    raise self.err("bad \\g reference")
                self.i = close + 1
                index = int(digits)
                self.backrefs.append((index, start))
                return [Backreference(index, span=(start, self.i),
                                      notation=f"\\g{open_ch}{digits}{close_ch}")]
            # literal reading: 'g' then '<1>' as plain characters
            notation = f"\\g{open_ch}{digits}{close_ch}" if close != -1 else "\\g"
            return [Literal("g", span=(start, self.i), notation=notation)]

        j = self.i
        while self.peek().isdigit():
            self.i += 1
        digits = self.src[j:self.i]
        if reading == FEATURE:
            if not digits:
                raise self.err("bad \\g reference")
            index = int(digits)
            self.backrefs.append((index, start))
            return [Backreference(index, span=(start, self.i), notation=f"\\g{digits}")]
        # literal: 'g' followed by the digits as plain characters
        self.i = j
        return [Literal("g", span=(start, self.i), notation=f"\\g{digits}")]

    def parse_numeric_backref(self, start: int, first: str) -> list[Node]:
        reading = self.prof.backref_numeric
        if reading == ERROR:
            raise self.err("backreferences not supported", start)
        if reading == ALT:
            # octal escape reading: up to three octal digits
            digits = first
            while len(digits) < 3 and self.peek() in set("01234567"):
                digits += self.take()
            return [Literal(chr(int(digits, 8)), span=(start, self.i),
                            notation="\\" + digits)]
        digits = first
        while self.peek().isdigit():
            digits += self.take()
        index = int(digits)
        self.backrefs.append((index, start))
        return [Backreference(index, span=(start, self.i), notation="\\" + digits)]

    # -- character classes ------------------------------------------------------

    def parse_class(self) -> Node:
        start = self.i
        self.i += 1  # '['
        negated = False
        if self.peek() == "^":
            negated = True
            self.i += 1
        ranges: list[CharRange] = []
        marks: list[str] = []

        if self.peek() == "]":
            if self.dialect is Dialect.PORTABLE_CORE:
                raise self.err("leading ']' in class is not portable")
            marks.append(F_CLASS_LEADING_BRACKET)
            if self.prof.empty_class:
                self.i += 1
                return CharClass((), negated, span=(start, self.i),
                                 marks=tuple(marks), notation="[]")
            self.i += 1
            ranges.append((0x5D, 0x5D))  # ']' is the first member

        while True:
            if self.i >= self.n:
                raise self.err("unterminated character class", start)
            if self.peek() == "]":
                self.i += 1
                break
            self.parse_class_item(ranges, marks)

        return CharClass(normalize_ranges(ranges), negated,
                         span=(start, self.i), marks=tuple(marks))

    def parse_class_item(self, ranges: list[CharRange], marks: list[str]) -> None:
        if self.peek() == "[" and self.peek(1) == ":":
            if self.parse_posix_item(ranges, marks):
                return
        lo = self.parse_class_char(ranges, marks)
        if lo is None:
            # shorthand set consumed; a following '-' is a literal member
            if self.peek() == "-" and self.peek(1) not in ("]", ""):
                self.i += 1
                ranges.append((0x2D, 0x2D))
            return
        if self.peek() == "-" and self.peek(1) not in ("]", ""):
            self.i += 1
            hi = self.parse_class_char(ranges, marks)
            if hi is None:
                raise self.err("bad class range endpoint")
            if lo > hi:
                raise self.err("reversed class range")
            ranges.append((lo, hi))
        else:
            ranges.append((lo, lo))

    def parse_posix_item(self, ranges: list[CharRange], marks: list[str]) -> bool:
        close = self.src.find(":]", self.i + 2)
        if close == -1:
            return False
        name = self.src[self.i + 2:close]
        if not name.isalpha():
            return False
        marks.append(F_POSIX_CLASS)
        if self.prof.posix_class == FEATURE:
            if name not in POSIX_CLASS_RANGES:
                raise self.err(f"unknown posix class [:{name}:]")
            ranges.extend(POSIX_CLASS_RANGES[name])
            self.i = close + 2
            return True
        # naive reading: '[' and ':' are ordinary members; leave the rest
        # of the text to the normal item loop (the first ']' closes the class)
        ranges.append((0x5B, 0x5B))
        self.i += 1
        return True

    def parse_class_char(self, ranges: list[CharRange], marks: list[str]) -> int | None:
        """One endpoint. Returns its codepoint, or None for shorthand sets."""
        ch = self.take()
        if ch != "\\":
            return ord(ch)
        if self.i >= self.n:
            raise self.err("trailing backslash in class")
        esc = self.take()
        if esc in "dDwWsS":
            ranges.extend(ESCAPE_CLASS_RANGES[esc])
            return None
        if esc == "h" or esc == "H":
            reading = self.prof.escape_h
            if reading == ERROR:
                raise self.err("\\h not supported", self.i - 2)
            marks.append(F_ESCAPE_H)
            if reading == LITERAL:
                return ord(esc)
            kind = ("xdigit" if esc == "h" else "XDIGIT") if reading == ALT else esc
            ranges.extend(ESCAPE_CLASS_RANGES[kind])
            return None
        if esc == "b":
            return 0x08  # backspace inside a class
        if esc in _CONTROL_ESCAPES:
            return ord(_CONTROL_ESCAPES[esc])
        if esc == "x":
            if self.peek() == "{":
                reading = self.prof.hex_brace
                if reading == ERROR:
                    raise self.err("\\x{...} not supported")
                marks.append(F_HEX_BRACE)
                if reading == LITERAL:
                    return ord("x")
                close = self.src.find("}", self.i)
                if close == -1:
                    raise self.err("unterminated \\x{")
                digits = self.src[self.i + 1:close]
                if not digits or any(c not in "0123456789abcdefABCDEF" for c in digits):
                    raise self.err("bad hex escape")
                self.i = close + 1
                return int(digits, 16)
            digits = self.src[self.i:self.i + 2]
            if len(digits) == 2 and all(c in "0123456789abcdefABCDEF" for c in digits):
                self.i += 2
                return int(digits, 16)
            if self.dialect is Dialect.JAVASCRIPT:
                return ord("x")
            raise self.err("incomplete \\x escape")
        if esc == "0":
            return 0
        if esc == "e":
            reading = self.prof.escape_e
            if reading == ERROR:
                raise self.err("\\e not supported")
            return 0x1B if reading == FEATURE else ord("e")
        if not esc.isalnum():
            return ord(esc)
        if self.prof.unknown_letter_escape == LITERAL:
            return ord(esc)
        raise self.err(f"unknown escape \\{esc} in class")
