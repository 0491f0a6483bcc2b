"""Canonical pattern emission.

emit(parse(p, d)) re-parses under d to a structurally equal tree. The output
is canonical, not source-preserving: counted bounds collapse ({2,2} -> {2}),
metacharacters in literal positions are escaped, degraded notations are
re-emitted in their plain form, and grouping parentheses appear exactly where
precedence requires them.
"""

from __future__ import annotations

from .syntax import (
    Alternation,
    Anchor,
    Ast,
    Backreference,
    CharClass,
    Concat,
    Dot,
    EscapeClass,
    FULL_RANGE,
    Group,
    InlineFlags,
    LAZY,
    Literal,
    Lookaround,
    Node,
    POSSESSIVE,
    QuoteBlock,
    Quantifier,
    UnicodeProperty,
)

_METACHARS = set(".^$*+?()[]{}|\\")
_NAMED_CONTROLS = {"\n": "\\n", "\r": "\\r", "\t": "\\t", "\f": "\\f", "\v": "\\v"}
_CLASS_SPECIALS = set("]\\^-[")

_ESCAPE_CLASS_TEXT = {
    "d": "\\d", "D": "\\D", "w": "\\w", "W": "\\W", "s": "\\s", "S": "\\S",
    "h": "\\h", "H": "\\H", "xdigit": "\\h", "XDIGIT": "\\H",
}

_ANCHOR_TEXT = {
    "^": "^", "$": "$", "A": "\\A", "Z": "\\Z", "z": "\\z",
    "b": "\\b", "B": "\\B", "G": "\\G", "K": "\\K",
}


def emit(ast: Ast | Node) -> str:
    node = ast.root if isinstance(ast, Ast) else ast
    return _emit(node)


def _literal_char(ch: str) -> str:
    if ch in _METACHARS:
        return "\\" + ch
    if ch in _NAMED_CONTROLS:
        return _NAMED_CONTROLS[ch]
    cp = ord(ch)
    if cp < 0x20 or cp == 0x7F:
        return f"\\x{cp:02x}"
    return ch


def _class_char(cp: int) -> str:
    ch = chr(cp)
    if ch in _CLASS_SPECIALS:
        return "\\" + ch
    if ch in _NAMED_CONTROLS:
        return _NAMED_CONTROLS[ch]
    if cp < 0x20 or cp == 0x7F:
        return f"\\x{cp:02x}"
    return ch


def _atom(node: Node) -> str:
    """Render a node so a quantifier may directly follow it."""
    text = _emit(node)
    if isinstance(node, (Literal, CharClass, Dot, EscapeClass, UnicodeProperty, Group)):
        return text
    return f"(?:{text})"


def _emit(node: Node) -> str:
    if isinstance(node, Literal):
        return _literal_char(node.char)
    if isinstance(node, Dot):
        return "."
    if isinstance(node, Anchor):
        return _ANCHOR_TEXT[node.kind]
    if isinstance(node, EscapeClass):
        return _ESCAPE_CLASS_TEXT[node.kind]
    if isinstance(node, UnicodeProperty):
        p = "P" if node.negated else "p"
        return f"\\{p}{{{node.name}}}" if node.braced else f"\\{p}{node.name}"
    if isinstance(node, Backreference):
        return f"\\{node.index}"
    if isinstance(node, QuoteBlock):
        return f"\\Q{node.text}\\E"
    if isinstance(node, CharClass):
        return _emit_class(node)
    if isinstance(node, Quantifier):
        return _emit_quantifier(node)
    if isinstance(node, Group):
        if node.name is None:
            return f"({_emit(node.child)})"
        opener = "(?P<" if node.notation == "(?P<" else "(?<"
        return f"{opener}{node.name}>{_emit(node.child)})"
    if isinstance(node, Lookaround):
        return f"(?{node.kind}{_emit(node.child)})"
    if isinstance(node, InlineFlags):
        if node.child is None:
            return f"(?{node.flags})"
        return f"(?{node.flags}:{_emit(node.child)})"
    if isinstance(node, Concat):
        out = []
        for part in node.parts:
            text = _emit(part)
            if isinstance(part, (Alternation, Concat)):
                text = f"(?:{text})"
            out.append(text)
        return "".join(out)
    if isinstance(node, Alternation):
        return "|".join(
            f"(?:{_emit(o)})" if isinstance(o, Alternation) else _emit(o)
            for o in node.options
        )
    raise TypeError(f"cannot emit {node!r}")


def _emit_class(node: CharClass) -> str:
    if node.items == FULL_RANGE and not node.negated:
        return "[\\s\\S]"
    body = []
    for lo, hi in node.items:
        if lo == hi:
            body.append(_class_char(lo))
        else:
            body.append(f"{_class_char(lo)}-{_class_char(hi)}")
    return "[" + ("^" if node.negated else "") + "".join(body) + "]"


def _emit_quantifier(node: Quantifier) -> str:
    lo, hi = node.min, node.max
    if (lo, hi) == (0, None):
        suffix = "*"
    elif (lo, hi) == (1, None):
        suffix = "+"
    elif (lo, hi) == (0, 1):
        suffix = "?"
    elif hi is None:
        suffix = f"{{{lo},}}"
    elif lo == hi:
        suffix = f"{{{lo}}}"
    else:
        suffix = f"{{{lo},{hi}}}"
    if node.mode == LAZY:
        suffix += "?"
    elif node.mode == POSSESSIVE:
        suffix += "+"
    return _atom(node.child) + suffix
