"""Thompson-construction NFA with tagged (capture) transitions.

States are integers; each state's out-edges are priority-ordered (greedy
choice first), which is how the linear engine reproduces leftmost-greedy
selection. Tag edges record capture-slot writes and never affect language
membership. Loop-head states carry an empty-iteration guard: within one input
position a head may be entered twice, the second entry skipping the loop-body
edge, so a loop takes at most one empty iteration before exiting (captures
written by that final empty pass are retained, matching the documented
internal capture semantics).

Bounded quantifiers are expanded structurally by duplication, capped at
MAX_EXPANSION_STATES; beyond the cap compilation reports BudgetExceeded and
callers fall back to the unbounded variant.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import (
    Alternation,
    Anchor,
    Ast,
    Backreference,
    CharClass,
    Concat,
    DOT_RANGES,
    Dot,
    ESCAPE_CLASS_RANGES,
    EscapeClass,
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
    CharRange,
    complement_ranges,
    normalize_ranges,
    ranges_contain,
)

MAX_EXPANSION_STATES = 10_000

# edge kinds
CHAR = 0
EPS = 1
TAG = 2
ASSERT = 3

Edge = tuple[int, object, int]  # (kind, data, target)


class Unsupported(ValueError):
    """Construct outside the automaton-analyzable subset."""


class BudgetExceeded(RuntimeError):
    """State or work budget blown; caller should fall back or give up."""


@dataclass
class Nfa:
    edges: list[list[Edge]]
    start: int
    accept: int
    # loop head -> index of the loop-body (re-entry) edge in its edge list
    loop_heads: dict[int, int] = field(default_factory=dict)
    group_count: int = 0
    # per-state closure visit allowance: 1 + loop-nesting depth, so the
    # exit cascade of each enclosing loop's final empty iteration can
    # re-traverse the tag chain once per nesting level
    visit_limits: list[int] = field(default_factory=list)

    @property
    def n_states(self) -> int:
        return len(self.edges)

    @property
    def nslots(self) -> int:
        return 2 * (self.group_count + 1)

    def char_edge_count(self) -> int:
        return sum(1 for es in self.edges for k, _, _ in es if k == CHAR)


@lru_cache(maxsize=64)
def property_ranges(name: str, negated: bool) -> tuple[CharRange, ...]:
    """Ranges for a unicode property; resolved over the BMP only."""
    key = name.strip()
    if not (len(key) in (1, 2) and key[0].isalpha()):
        raise Unsupported(f"unicode property {name!r}")
    key = key[0].upper() + key[1:].lower()
    ranges: list[CharRange] = []
    run_start = None
    for cp in range(0x10000):
        cat = unicodedata.category(chr(cp))
        ok = cat.startswith(key) if len(key) == 1 else cat == key
        if ok and run_start is None:
            run_start = cp
        elif not ok and run_start is not None:
            ranges.append((run_start, cp - 1))
            run_start = None
    if run_start is not None:
        ranges.append((run_start, 0xFFFF))
    if not ranges:
        raise Unsupported(f"unicode property {name!r}")
    out = normalize_ranges(ranges)
    return complement_ranges(out) if negated else out


def node_ranges(node: Node) -> tuple[CharRange, ...]:
    """Character set of a single-character node."""
    if isinstance(node, Literal):
        cp = ord(node.char)
        return ((cp, cp),)
    if isinstance(node, Dot):
        return DOT_RANGES
    if isinstance(node, EscapeClass):
        return ESCAPE_CLASS_RANGES[node.kind]
    if isinstance(node, CharClass):
        return complement_ranges(node.items) if node.negated else node.items
    if isinstance(node, UnicodeProperty):
        return property_ranges(node.name, node.negated)
    raise TypeError(f"not a character node: {node!r}")


class _Builder:
    def __init__(self, max_states: int):
        self.edges: list[list[Edge]] = []
        self.loop_heads: dict[int, int] = {}
        self.visit_limits: list[int] = []
        self.max_states = max_states
        self.loop_depth = 0

    def state(self) -> int:
        if len(self.edges) >= self.max_states:
            raise BudgetExceeded(f"NFA exceeds {self.max_states} states")
        self.edges.append([])
        self.visit_limits.append(1 + self.loop_depth)
        return len(self.edges) - 1

    def edge(self, s: int, kind: int, data: object, t: int) -> None:
        self.edges[s].append((kind, data, t))


def compile_nfa(ast: Ast, max_states: int = MAX_EXPANSION_STATES) -> Nfa:
    """Compile to an NFA accepting exactly the tree's language.

    Raises Unsupported for backreferences, lookaround, possessive
    quantifiers, inline flags, and the match-position anchors; raises
    BudgetExceeded when bounded-quantifier expansion blows the state cap.
    """
    b = _Builder(max_states)
    start = b.state()
    accept_entry = b.state()
    accept = b.state()
    # group 0 wraps the whole pattern so the match span rides the tag slots
    b.edge(start, TAG, 0, inner_start := b.state())
    _compile(b, ast.root, inner_start, accept_entry)
    b.edge(accept_entry, TAG, 1, accept)
    return Nfa(edges=b.edges, start=start, accept=accept,
               loop_heads=b.loop_heads, group_count=ast.group_count,
               visit_limits=b.visit_limits)


def _compile(b: _Builder, node: Node, entry: int, exit_: int) -> None:
    if isinstance(node, (Literal, CharClass, Dot, EscapeClass, UnicodeProperty)):
        b.edge(entry, CHAR, node_ranges(node), exit_)
    elif isinstance(node, QuoteBlock):
        cur = entry
        for ch in node.text:
            nxt = b.state()
            b.edge(cur, CHAR, ((ord(ch), ord(ch)),), nxt)
            cur = nxt
        b.edge(cur, EPS, None, exit_)
    elif isinstance(node, Anchor):
        if node.kind in ("G", "K"):
            raise Unsupported(f"anchor \\{node.kind} has no automaton model")
        b.edge(entry, ASSERT, node.kind, exit_)
    elif isinstance(node, Concat):
        cur = entry
        for part in node.parts:
            nxt = b.state()
            _compile(b, part, cur, nxt)
            cur = nxt
        b.edge(cur, EPS, None, exit_)
    elif isinstance(node, Alternation):
        for option in node.options:
            o_entry = b.state()
            b.edge(entry, EPS, None, o_entry)
            _compile(b, option, o_entry, exit_)
    elif isinstance(node, Group):
        open_s = b.state()
        close_s = b.state()
        b.edge(entry, TAG, 2 * node.index, open_s)
        _compile(b, node.child, open_s, close_s)
        b.edge(close_s, TAG, 2 * node.index + 1, exit_)
    elif isinstance(node, Quantifier):
        _compile_quantifier(b, node, entry, exit_)
    elif isinstance(node, Backreference):
        raise Unsupported("backreference")
    elif isinstance(node, Lookaround):
        raise Unsupported("lookaround")
    elif isinstance(node, InlineFlags):
        raise Unsupported("inline flags")
    else:
        raise TypeError(f"cannot compile {node!r}")


def _compile_quantifier(b: _Builder, node: Quantifier, entry: int, exit_: int) -> None:
    if node.mode == POSSESSIVE:
        raise Unsupported("possessive quantifier")
    lazy = node.mode == LAZY
    lo, hi = node.min, node.max

    def loop(entry: int, exit_: int, at_least_one: bool) -> None:
        b.loop_depth += 1
        head = b.state()
        body_entry = b.state()
        if at_least_one:
            b.edge(entry, EPS, None, body_entry)
        else:
            b.edge(entry, EPS, None, head)
        _compile(b, node.child, body_entry, head)
        b.loop_depth -= 1
        if lazy:
            b.edge(head, EPS, None, exit_)
            b.edge(head, EPS, None, body_entry)
            b.loop_heads[head] = 1
        else:
            b.edge(head, EPS, None, body_entry)
            b.edge(head, EPS, None, exit_)
            b.loop_heads[head] = 0

    if (lo, hi) == (0, None):
        loop(entry, exit_, at_least_one=False)
        return
    if (lo, hi) == (1, None):
        loop(entry, exit_, at_least_one=True)
        return

    cur = entry
    for _ in range(lo):
        nxt = b.state()
        _compile(b, node.child, cur, nxt)
        cur = nxt
    if hi is None:
        # {m,}: m mandatory copies then a star loop
        loop(cur, exit_, at_least_one=False)
        return
    # {m,n}: n-m optional nested copies; greedy prefers entering
    for _ in range(hi - lo):
        enter = b.state()
        if lazy:
            b.edge(cur, EPS, None, exit_)
            b.edge(cur, EPS, None, enter)
        else:
            b.edge(cur, EPS, None, enter)
            b.edge(cur, EPS, None, exit_)
        nxt = b.state()
        _compile(b, node.child, enter, nxt)
        cur = nxt
    b.edge(cur, EPS, None, exit_)


# ---------------------------------------------------------------------------
# Subset construction (small-case oracle)
# ---------------------------------------------------------------------------

_BOF = 0
_WORD = 1
_NONWORD = 2

_WORD_RANGES = ESCAPE_CLASS_RANGES["w"]


def _is_word(ch: str | None) -> bool:
    return ch is not None and ranges_contain(_WORD_RANGES, ord(ch))


def _assert_holds(kind: str, prev_class: int, next_char: str | None) -> bool:
    if kind in ("^", "A"):
        return prev_class == _BOF
    if kind in ("$", "Z", "z"):
        return next_char is None
    prev_word = prev_class == _WORD
    next_word = _is_word(next_char)
    if kind == "b":
        return prev_word != next_word
    if kind == "B":
        return prev_word == next_word
    raise Unsupported(f"assert {kind!r} in subset construction")


def _closure(nfa: Nfa, states: frozenset[int], prev_class: int,
             next_char: str | None) -> frozenset[int]:
    seen = set(states)
    stack = list(states)
    while stack:
        s = stack.pop()
        for kind, data, t in nfa.edges[s]:
            if kind == CHAR:
                continue
            if kind == ASSERT and not _assert_holds(data, prev_class, next_char):
                continue
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


@dataclass
class Dfa:
    alphabet: tuple[str, ...]
    start: int
    trans: dict[tuple[int, str], int]
    accepts: frozenset[int]
    n_states: int

    def accepts_input(self, text: str) -> bool:
        s = self.start
        for ch in text:
            if ch not in self.alphabet:
                raise ValueError(f"char {ch!r} outside DFA alphabet")
            s = self.trans[(s, ch)]
        return s in self.accepts


def subset_construct(nfa: Nfa, alphabet: set[str], max_states: int = 4096) -> Dfa:
    """Language-equivalent DFA over a small alphabet (membership oracle).

    Anchors and word boundaries are honored by tracking the class of the
    previously consumed character in the DFA state.
    """
    if len(alphabet) > 8:
        raise ValueError("alphabet too large for the oracle (max 8 chars)")
    if nfa.n_states > 64 * 16:
        raise ValueError("NFA too large for the oracle")
    alpha = tuple(sorted(alphabet))

    start_key = (frozenset([nfa.start]), _BOF)
    ids: dict[tuple[frozenset[int], int], int] = {start_key: 0}
    work = [start_key]
    trans: dict[tuple[int, str], int] = {}
    accepts: set[int] = set()

    while work:
        key = work.pop()
        raw, prev_class = key
        sid = ids[key]
        if nfa.accept in _closure(nfa, raw, prev_class, None):
            accepts.add(sid)
        for ch in alpha:
            closed = _closure(nfa, raw, prev_class, ch)
            cp = ord(ch)
            moved = frozenset(
                t for s in closed for kind, data, t in nfa.edges[s]
                if kind == CHAR and ranges_contain(data, cp)
            )
            nkey = (moved, _WORD if _is_word(ch) else _NONWORD)
            if nkey not in ids:
                if len(ids) >= max_states:
                    raise BudgetExceeded("DFA state budget exceeded")
                ids[nkey] = len(ids)
                work.append(nkey)
            trans[(sid, ch)] = ids[nkey]

    return Dfa(alphabet=alpha, start=0, trans=trans,
               accepts=frozenset(accepts), n_states=len(ids))


# ---------------------------------------------------------------------------
# Edge coverage
# ---------------------------------------------------------------------------

def edge_coverage(nfa: Nfa, inputs: list[str]) -> float:
    """Fraction of character edges traversed while evaluating the inputs
    with a full partial-match scan (all start offsets, no early stop)."""
    total = nfa.char_edge_count()
    if not inputs:
        return 0.0
    if total == 0:
        return 1.0
    covered: set[tuple[int, int]] = set()
    for text in inputs:
        _cover_one(nfa, text, covered)
        if len(covered) == total:
            break
    return len(covered) / total


def _cover_one(nfa: Nfa, text: str, covered: set[tuple[int, int]]) -> None:
    n = len(text)
    current: set[int] = set()
    for pos in range(n + 1):
        current.add(nfa.start)  # partial match: every offset is a start
        prev_class = (_BOF if pos == 0
                      else _WORD if _is_word(text[pos - 1]) else _NONWORD)
        next_char = text[pos] if pos < n else None
        closed = _closure(nfa, frozenset(current), prev_class, next_char)
        if next_char is None:
            break
        cp = ord(next_char)
        nxt: set[int] = set()
        for s in closed:
            for i, (kind, data, t) in enumerate(nfa.edges[s]):
                if kind == CHAR and ranges_contain(data, cp):
                    covered.add((s, i))
                    nxt.add(t)
        current = nxt


# ---------------------------------------------------------------------------
# Debug dump (stable format, golden-tested)
# ---------------------------------------------------------------------------

_KIND_NAMES = {CHAR: "char", EPS: "eps", TAG: "tag", ASSERT: "assert"}


def _format_ranges(ranges: tuple[CharRange, ...]) -> str:
    parts = []
    for lo, hi in ranges:
        if lo == hi:
            parts.append(f"{lo:#06x}")
        else:
            parts.append(f"{lo:#06x}-{hi:#06x}")
    return ",".join(parts)


def dump(nfa: Nfa) -> str:
    """One line per edge in priority order: `state -> target kind detail`."""
    lines = [f"states={nfa.n_states} start={nfa.start} accept={nfa.accept}"]
    for s, es in enumerate(nfa.edges):
        for kind, data, t in es:
            if kind == CHAR:
                detail = _format_ranges(data)
            elif kind == TAG:
                slot = int(data)
                detail = f"{'open' if slot % 2 == 0 else 'close'}{slot // 2}"
            elif kind == ASSERT:
                detail = str(data)
            else:
                detail = "-"
            head = " head" if s in nfa.loop_heads else ""
            lines.append(f"{s} -> {t} {_KIND_NAMES[kind]} {detail}{head}")
    return "\n".join(lines) + "\n"
