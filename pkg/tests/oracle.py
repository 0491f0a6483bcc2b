"""Independent naive recursive matcher used as a test oracle.

Continuation-passing over the syntax tree, trying alternatives in leftmost-
greedy order, retaining captures across loop iterations, and allowing a loop
one final empty iteration before it must exit. Deliberately shares no code
with the engines under test; clarity over speed.
"""

from __future__ import annotations

from regexpassport.nfa import node_ranges
from regexpassport.syntax import (
    Alternation,
    Anchor,
    Backreference,
    CharClass,
    Concat,
    Dot,
    EscapeClass,
    Group,
    LAZY,
    Literal,
    QuoteBlock,
    Quantifier,
    UnicodeProperty,
    WORD_RANGES,
    ranges_contain,
)

_CHAR_NODES = (Literal, CharClass, Dot, EscapeClass, UnicodeProperty)


class OracleRun:
    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.steps = 0

    def _is_word(self, i: int) -> bool:
        return 0 <= i < self.n and ranges_contain(WORD_RANGES, ord(self.text[i]))

    def match_node(self, node, pos, caps, k):
        """k(pos, caps) -> result-or-None; returns first success."""
        self.steps += 1
        text, n = self.text, self.n

        if isinstance(node, _CHAR_NODES):
            if pos < n and ranges_contain(node_ranges(node), ord(text[pos])):
                return k(pos + 1, caps)
            return None
        if isinstance(node, QuoteBlock):
            end = pos + len(node.text)
            if text.startswith(node.text, pos) and end <= n:
                return k(end, caps)
            return None
        if isinstance(node, Anchor):
            kind = node.kind
            if kind in ("^", "A"):
                ok = pos == 0
            elif kind in ("$", "Z", "z"):
                ok = pos == n
            elif kind == "b":
                ok = self._is_word(pos - 1) != self._is_word(pos)
            elif kind == "B":
                ok = self._is_word(pos - 1) == self._is_word(pos)
            else:
                raise ValueError(f"oracle cannot handle anchor {kind}")
            return k(pos, caps) if ok else None
        if isinstance(node, Concat):
            def chain(i):
                def step(p, c):
                    if i == len(node.parts):
                        return k(p, c)
                    return self.match_node(node.parts[i], p, c, chain(i + 1))
                return step
            return chain(0)(pos, caps)
        if isinstance(node, Alternation):
            for option in node.options:
                r = self.match_node(option, pos, caps, k)
                if r is not None:
                    return r
            return None
        if isinstance(node, Group):
            opened = pos
            return self.match_node(
                node.child, pos, caps,
                lambda p, c: k(p, {**c, node.index: (opened, p)}),
            )
        if isinstance(node, Backreference):
            got = caps.get(node.index)
            ref = text[got[0]:got[1]] if got else ""
            if text.startswith(ref, pos):
                return k(pos + len(ref), caps)
            return None
        if isinstance(node, Quantifier):
            return self.match_quantifier(node, pos, caps, k)
        raise TypeError(f"oracle cannot handle {node!r}")

    def match_quantifier(self, node, pos, caps, k):
        lazy = node.mode == LAZY
        lo = node.min
        hi = node.max

        def rec(count, p, c, entered_at):
            self.steps += 1
            # an empty iteration ends the loop, except while the required
            # minimum is still unmet
            can_more = (hi is None or count < hi) and (p != entered_at or count < lo)
            can_stop = count >= lo

            def more():
                return self.match_node(node.child, p, c,
                                        lambda p2, c2: rec(count + 1, p2, c2, p))

            if lazy:
                if can_stop:
                    r = k(p, c)
                    if r is not None:
                        return r
                if can_more:
                    return more()
                return None
            if can_more:
                r = more()
                if r is not None:
                    return r
            if can_stop:
                return k(p, c)
            return None

        return rec(0, pos, caps, -1)

    def search(self, ast, full: bool = False):
        """Leftmost-greedy partial match (or anchored full match).

        Returns (span, {group: span}) or None.
        """
        starts = [0] if full else range(self.n + 1)
        for start in starts:
            hit = self.match_node(
                ast.root, start, {},
                (lambda p, c: ((start, p), c) if p == self.n else None) if full
                else (lambda p, c: ((start, p), c)),
            )
            if hit is not None:
                return hit
        return None


def oracle_search(ast, text: str):
    """(span, captures dict, steps) for the leftmost partial match, or None."""
    run = OracleRun(text)
    hit = run.search(ast)
    if hit is None:
        return None, None, run.steps
    span, caps = hit
    return span, caps, run.steps


def oracle_accepts(ast, text: str) -> bool:
    """Full-match membership."""
    return OracleRun(text).search(ast, full=True) is not None
