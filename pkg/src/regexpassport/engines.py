"""Two instrumented reference matchers.

match_backtrack is a Spencer-style depth-first backtracker (the slow engine
family) with three toggleable defenses modeled on the medium family:

* step_limit: a work counter that counts backtrack retries, not forward
  consumption, so exponential searches trip it while plain long scans do not;
  overrun returns aborted-by-counter.
* memoize: a cache of failed (instruction, offset) pairs that short-circuits
  redundant exploration. It is sound only when failure at an offset is a pure
  function of the instruction and offset, so it is silently inert for programs
  with backreferences, runtime repetition counters, atomic regions, or loops
  whose body can match empty (there the empty-iteration guard makes outcomes
  history-dependent).
* offset_pruning: skips start offsets that cannot begin a match (first-set)
  and rejects inputs lacking a required literal substring.

match_pike is a priority-threaded breadth-first NFA simulation (the fast
family): linear in states x input length, with capture tags.

Both engines implement one internal semantics: leftmost-greedy selection,
captures retained across loop iterations, a repeated group allowed one final
empty iteration (so /((a*)+)/ on "aa" leaves the inner group empty). `steps`
counts backtracker node expansions / Pike thread insertions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .nfa import (
    ASSERT,
    CHAR,
    Nfa,
    TAG,
    Unsupported,
    node_ranges,
)
from .syntax import (
    Alternation,
    Anchor,
    Ast,
    Backreference,
    CharClass,
    Concat,
    Dot,
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
    WORD_RANGES,
    nullable,
    ranges_contain,
)

DEFAULT_BUDGET = 10.0  # seconds; desk-scale tests override to 1.0
DEFAULT_STEP_LIMIT = 1_000_000
_CLOCK_MASK = 4095  # cooperative budget check cadence


class Outcome(Enum):
    MATCH = "match"
    NO_MATCH = "no-match"
    TIMEOUT = "timeout"
    ABORTED = "aborted-by-counter"


@dataclass(frozen=True)
class DefenseConfig:
    step_limit: Optional[int] = None
    memoize: bool = False
    offset_pruning: bool = False

    def __post_init__(self):
        if self.step_limit is not None and self.step_limit <= 0:
            raise ValueError("step_limit must be positive")


NO_DEFENSES = DefenseConfig()
COUNTER_DEFENSES = DefenseConfig(step_limit=DEFAULT_STEP_LIMIT, offset_pruning=True)
FULL_DEFENSES = DefenseConfig(step_limit=DEFAULT_STEP_LIMIT, memoize=True,
                              offset_pruning=True)


@dataclass
class MatchResult:
    outcome: Outcome
    span: Optional[tuple[int, int]] = None
    captures: list[Optional[tuple[int, int]]] = field(default_factory=list)
    steps: int = 0
    elapsed: float = 0.0

    @property
    def matched(self) -> bool:
        return self.outcome is Outcome.MATCH


# ---------------------------------------------------------------------------
# Bytecode for the backtracker
# ---------------------------------------------------------------------------
#
# Unlike the NFA (whose bounded quantifiers must expand structurally), the
# backtracker interprets large counted repetitions with runtime counters, so
# it can evaluate the original form of patterns whose expansion would blow
# the state budget.

OP_CHAR1 = 0      # (op, lo, hi)
OP_CHARN = 1      # (op, ranges)
OP_RUN = 2        # (op, ranges, min_count, run_id): greedy single-set run
OP_SPLIT = 3      # (op, first_pc, second_pc)
OP_JMP = 4        # (op, pc)
OP_SAVE = 5       # (op, slot)
OP_ASSERT = 6     # (op, kind)
OP_BACKREF = 7    # (op, group_index)
OP_LOOP = 8       # (op, head_id, body_pc, exit_pc, greedy)
OP_REPINIT = 9    # (op, reg)
OP_REPEAT = 10    # (op, reg, min, max, body_pc, exit_pc, greedy)
OP_ATOMIC_OPEN = 11
OP_ATOMIC_CLOSE = 12
OP_MATCH = 13

_SINGLE_CHAR_NODES = (Literal, CharClass, Dot, EscapeClass, UnicodeProperty)
_DEFAULT_EXPAND_LIMIT = 10_000


@dataclass
class Program:
    instrs: tuple
    group_count: int
    n_heads: int
    n_regs: int
    n_runs: int
    start_anchored: bool
    memo_safe: bool
    first_ranges: Optional[tuple]   # None = no pruning possible
    required_literal: str
    # run_pc -> (literal_tail, requires_end) for closed-form retries
    run_tails: dict[int, tuple[str, bool]] = field(default_factory=dict)

    @property
    def nslots(self) -> int:
        return 2 * (self.group_count + 1)


def _estimate(node: Node) -> int:
    total = 1
    if isinstance(node, Concat):
        total += sum(_estimate(p) for p in node.parts)
    elif isinstance(node, Alternation):
        total += sum(_estimate(o) for o in node.options)
    elif isinstance(node, (Group, Lookaround)):
        total += _estimate(node.child)
    elif isinstance(node, Quantifier):
        inner = _estimate(node.child)
        reps = node.max if node.max is not None else max(node.min, 1)
        total += inner * max(reps, 1) + reps
    elif isinstance(node, QuoteBlock):
        total += len(node.text)
    return total


class _ProgramBuilder:
    def __init__(self, expand_limit: int):
        self.instrs: list = []
        self.n_heads = 0
        self.n_regs = 0
        self.n_runs = 0
        self.expand_limit = expand_limit
        self.has_backref = False
        self.has_counter = False
        self.has_atomic = False
        self.has_nullable_loop = False

    def emit(self, *instr) -> int:
        self.instrs.append(instr)
        return len(self.instrs) - 1

    def here(self) -> int:
        return len(self.instrs)

    def patch(self, pc: int, *instr) -> None:
        self.instrs[pc] = instr


def compile_program(ast: Ast, expand_limit: int = _DEFAULT_EXPAND_LIMIT) -> Program:
    b = _ProgramBuilder(expand_limit)
    b.emit(OP_SAVE, 0)
    _emit_node(b, ast.root)
    b.emit(OP_SAVE, 1)
    b.emit(OP_MATCH)
    from .variants import is_start_anchored

    first = _first_ranges(ast.root)
    prog = Program(
        instrs=tuple(b.instrs),
        group_count=ast.group_count,
        n_heads=b.n_heads,
        n_regs=b.n_regs,
        n_runs=b.n_runs,
        start_anchored=is_start_anchored(ast.root),
        memo_safe=not (b.has_backref or b.has_counter or b.has_atomic
                       or b.has_nullable_loop),
        first_ranges=first,
        required_literal=_required_literal(ast.root),
    )
    _analyze_run_tails(prog)
    return prog


def _emit_node(b: _ProgramBuilder, node: Node) -> None:
    if isinstance(node, _SINGLE_CHAR_NODES):
        _emit_char(b, node_ranges(node))
    elif isinstance(node, QuoteBlock):
        for ch in node.text:
            cp = ord(ch)
            b.emit(OP_CHAR1, cp, cp)
    elif isinstance(node, Anchor):
        if node.kind in ("G", "K"):
            raise Unsupported(f"anchor \\{node.kind} not supported for matching")
        b.emit(OP_ASSERT, node.kind)
    elif isinstance(node, Concat):
        for part in node.parts:
            _emit_node(b, part)
    elif isinstance(node, Alternation):
        _emit_alternation(b, node)
    elif isinstance(node, Group):
        b.emit(OP_SAVE, 2 * node.index)
        _emit_node(b, node.child)
        b.emit(OP_SAVE, 2 * node.index + 1)
    elif isinstance(node, Quantifier):
        _emit_quantifier(b, node)
    elif isinstance(node, Backreference):
        b.has_backref = True
        b.emit(OP_BACKREF, node.index)
    elif isinstance(node, (Lookaround, InlineFlags)):
        raise Unsupported("lookaround / inline flags not supported for matching")
    else:
        raise TypeError(f"cannot compile {node!r}")


def _emit_char(b: _ProgramBuilder, ranges: tuple) -> None:
    if len(ranges) == 1:
        b.emit(OP_CHAR1, ranges[0][0], ranges[0][1])
    else:
        b.emit(OP_CHARN, ranges)


def _emit_alternation(b: _ProgramBuilder, node: Alternation) -> None:
    jumps = []
    last = len(node.options) - 1
    for i, option in enumerate(node.options):
        if i < last:
            split_pc = b.emit(OP_SPLIT, 0, 0)
            _emit_node(b, option)
            jumps.append(b.emit(OP_JMP, 0))
            b.patch(split_pc, OP_SPLIT, split_pc + 1, b.here())
        else:
            _emit_node(b, option)
    end = b.here()
    for pc in jumps:
        b.patch(pc, OP_JMP, end)


def _emit_quantifier(b: _ProgramBuilder, node: Quantifier) -> None:
    possessive = node.mode == POSSESSIVE
    if possessive:
        b.has_atomic = True
        b.emit(OP_ATOMIC_OPEN)
    lazy = node.mode == LAZY
    lo, hi = node.min, node.max

    if hi is None and not lazy and isinstance(node.child, _SINGLE_CHAR_NODES):
        b.emit(OP_RUN, node_ranges(node.child), lo, b.n_runs)
        b.n_runs += 1
        if possessive:
            b.emit(OP_ATOMIC_CLOSE)
        return

    def emit_loop(at_least_one: bool) -> None:
        head = b.n_heads
        b.n_heads += 1
        if nullable(node.child):
            b.has_nullable_loop = True
        if at_least_one:
            body = b.here()
            _emit_node(b, node.child)
            loop_pc = b.emit(OP_LOOP, head, body, 0, not lazy)
            b.patch(loop_pc, OP_LOOP, head, body, b.here(), not lazy)
        else:
            jmp_pc = b.emit(OP_JMP, 0)
            body = b.here()
            _emit_node(b, node.child)
            loop_pc = b.emit(OP_LOOP, head, body, 0, not lazy)
            b.patch(jmp_pc, OP_JMP, loop_pc)
            b.patch(loop_pc, OP_LOOP, head, body, b.here(), not lazy)

    if (lo, hi) == (0, None):
        emit_loop(at_least_one=False)
    elif (lo, hi) == (1, None):
        emit_loop(at_least_one=True)
    elif hi is None:
        # {m,}: m mandatory copies then a star loop
        if _estimate(node.child) * lo <= b.expand_limit:
            for _ in range(lo):
                _emit_node(b, node.child)
            emit_loop(at_least_one=False)
        else:
            _emit_counted(b, node, lo, lo, lazy)
            emit_loop(at_least_one=False)
    else:
        if _estimate(node.child) * hi <= b.expand_limit:
            _emit_expanded(b, node, lo, hi, lazy)
        else:
            _emit_counted(b, node, lo, hi, lazy)

    if possessive:
        b.emit(OP_ATOMIC_CLOSE)


def _emit_expanded(b: _ProgramBuilder, node: Quantifier, lo: int, hi: int,
                   lazy: bool) -> None:
    for _ in range(lo):
        _emit_node(b, node.child)
    splits = []
    for _ in range(hi - lo):
        splits.append(b.emit(OP_SPLIT, 0, 0))
        _emit_node(b, node.child)
    end = b.here()
    for pc in splits:
        enter = pc + 1
        if lazy:
            b.patch(pc, OP_SPLIT, end, enter)
        else:
            b.patch(pc, OP_SPLIT, enter, end)


def _emit_counted(b: _ProgramBuilder, node: Quantifier, lo: int, hi: int,
                  lazy: bool) -> None:
    b.has_counter = True
    reg = b.n_regs
    b.n_regs += 1
    b.emit(OP_REPINIT, reg)
    rep_pc = b.emit(OP_REPEAT, reg, lo, hi, 0, 0, not lazy)
    body = b.here()
    _emit_node(b, node.child)
    b.emit(OP_JMP, rep_pc)
    b.patch(rep_pc, OP_REPEAT, reg, lo, hi, body, b.here(), not lazy)


# -- static pattern facts used by pruning ------------------------------------

def _first_ranges(node: Node) -> Optional[tuple]:
    """Characters that can begin a match, or None when unknowable/nullable."""
    ranges, nullable = _first_walk(node)
    if nullable or ranges is None:
        return None
    from .syntax import normalize_ranges

    return normalize_ranges(list(ranges))


def _first_walk(node: Node) -> tuple[Optional[list], bool]:
    if isinstance(node, _SINGLE_CHAR_NODES):
        return list(node_ranges(node)), False
    if isinstance(node, QuoteBlock):
        if not node.text:
            return [], True
        cp = ord(node.text[0])
        return [(cp, cp)], False
    if isinstance(node, Anchor):
        return [], True
    if isinstance(node, (Lookaround, InlineFlags, Backreference)):
        return None, True  # unknown: disables pruning
    if isinstance(node, Group):
        return _first_walk(node.child)
    if isinstance(node, Quantifier):
        ranges, nullable = _first_walk(node.child)
        return ranges, nullable or node.min == 0
    if isinstance(node, Alternation):
        out: Optional[list] = []
        nullable = False
        for option in node.options:
            r, n = _first_walk(option)
            nullable = nullable or n
            if r is None or out is None:
                out = None
            else:
                out.extend(r)
        return out, nullable
    if isinstance(node, Concat):
        out: Optional[list] = []
        for part in node.parts:
            r, n = _first_walk(part)
            if r is None or out is None:
                out = None
            else:
                out.extend(r)
            if not n:
                return out, False
        return out, True
    raise TypeError(f"unknown node {node!r}")


def _required_literal(node: Node) -> str:
    """The longest literal substring every match must contain ("" if none)."""
    best, run = _required_walk(node)
    return best if len(best) >= len(run) else run


def _required_walk(node: Node) -> tuple[str, str]:
    # returns (best_interior, trailing_run): runs broken by anything non-literal
    if isinstance(node, Literal):
        return "", node.char
    if isinstance(node, QuoteBlock):
        return "", node.text
    if isinstance(node, Group):
        return _required_walk(node.child)
    if isinstance(node, Quantifier):
        if node.min >= 1:
            best, run = _required_walk(node.child)
            # the child occurs at least once; its runs do not extend outward
            inner = best if len(best) >= len(run) else run
            return inner, ""
        return "", ""
    if isinstance(node, Concat):
        best = ""
        run = ""
        for part in node.parts:
            if isinstance(part, (Literal, QuoteBlock)):
                run += part.char if isinstance(part, Literal) else part.text
                continue
            p_best, p_run = _required_walk(part)
            if len(run) > len(best):
                best = run
            if len(p_best) > len(best):
                best = p_best
            run = p_run if isinstance(part, Group) else ""
        return best, run
    return "", ""


def _analyze_run_tails(prog: Program) -> None:
    """Classify each RUN's continuation as a closed-form tail when it is a
    straight line of saves, literal chars, and end anchors into MATCH."""
    for pc, instr in enumerate(prog.instrs):
        if instr[0] != OP_RUN:
            continue
        chars: list[str] = []
        requires_end = False
        cur = pc + 1
        hops = 0
        tail = None
        while hops < 64:
            hops += 1
            op = prog.instrs[cur]
            kind = op[0]
            if kind == OP_JMP:
                cur = op[1]
            elif kind == OP_SAVE:
                cur += 1
            elif kind == OP_ASSERT and op[1] in ("$", "Z", "z"):
                requires_end = True
                cur += 1
            elif kind == OP_CHAR1 and op[1] == op[2] and not requires_end:
                chars.append(chr(op[1]))
                cur += 1
            elif kind == OP_MATCH:
                tail = ("".join(chars), requires_end)
                break
            else:
                break
        if tail is not None:
            prog.run_tails[pc] = tail


# ---------------------------------------------------------------------------
# Backtracking VM
# ---------------------------------------------------------------------------

_T_SAVE = 0
_T_COUNTER = 1
_T_LOOPPOS = 2
_T_REPPOS = 3
_T_AOPEN = 4
_T_ACLOSE = 5

_F_SPLIT = 0
_F_RUN = 1


def match_backtrack(
    ast: Ast,
    text: str,
    defenses: DefenseConfig = NO_DEFENSES,
    budget: float = DEFAULT_BUDGET,
    program: Optional[Program] = None,
) -> MatchResult:
    """Leftmost-greedy partial match by depth-first backtracking."""
    start_time = time.monotonic()
    prog = program if program is not None else compile_program(ast)
    vm = _BtVm(prog, text, defenses, start_time + budget)

    n = len(text)
    offsets = range(1) if prog.start_anchored else range(n + 1)
    if defenses.offset_pruning:
        req = prog.required_literal
        if len(req) >= 2 and req not in text:
            return MatchResult(Outcome.NO_MATCH, steps=vm.steps,
                               elapsed=time.monotonic() - start_time)

    for off in offsets:
        if (defenses.offset_pruning and prog.first_ranges is not None
                and off < n and not ranges_contain(prog.first_ranges, ord(text[off]))):
            continue
        if defenses.offset_pruning and prog.first_ranges is not None and off == n:
            # a non-nullable pattern cannot start at end of input
            continue
        status = vm.attempt(off)
        if status == "match":
            saves = vm.saves
            captures = []
            for g in range(1, prog.group_count + 1):
                s, e = saves[2 * g], saves[2 * g + 1]
                captures.append((s, e) if s >= 0 and e >= 0 else None)
            return MatchResult(Outcome.MATCH, span=(saves[0], saves[1]),
                               captures=captures, steps=vm.steps,
                               elapsed=time.monotonic() - start_time)
        if status == "timeout":
            return MatchResult(Outcome.TIMEOUT, steps=vm.steps,
                               elapsed=time.monotonic() - start_time)
        if status == "aborted":
            return MatchResult(Outcome.ABORTED, steps=vm.steps,
                               elapsed=time.monotonic() - start_time)
    return MatchResult(Outcome.NO_MATCH, steps=vm.steps,
                       elapsed=time.monotonic() - start_time)


class _BtVm:
    def __init__(self, prog: Program, text: str, defenses: DefenseConfig,
                 deadline: float):
        self.prog = prog
        self.text = text
        self.n = len(text)
        self.deadline = deadline
        self.step_limit = defenses.step_limit
        self.memo: Optional[set] = set() if (defenses.memoize and prog.memo_safe) else None
        self.steps = 0
        self.retries = 0
        self.saves = [-1] * prog.nslots
        self.counters = [0] * prog.n_regs
        self.loop_pos = [-1] * prog.n_heads
        self.rep_pos = [-1] * prog.n_regs
        self.run_tables: list = [None] * prog.n_runs
        # per-pc run tail lookup (list indexing beats dict gets in the loop)
        self.tails_by_pc: list = [None] * len(prog.instrs)
        for pc, tail in prog.run_tails.items():
            self.tails_by_pc[pc] = tail

    def _run_table(self, run_id: int, ranges: tuple) -> list[int]:
        table = self.run_tables[run_id]
        if table is None:
            n = self.n
            text = self.text
            table = [0] * (n + 1)
            table[n] = n
            for i in range(n - 1, -1, -1):
                table[i] = table[i + 1] if ranges_contain(ranges, ord(text[i])) else i
            self.run_tables[run_id] = table
        return table

    def attempt(self, start_pos: int) -> str:
        """One anchored attempt. Returns match | fail | timeout | aborted.

        Frames live in one list as mutable 7-slot records:
        split/loop: [0, origin_pc, origin_pos, alt_pc, trail_len, pos, 0]
        run:        [1, pc, origin_pos, end, trail_len, min_end, cont_pc]
        an origin_pc of -1 suppresses memo marking (guarded loop entries).
        """
        prog = self.prog
        instrs = prog.instrs
        tails_by_pc = self.tails_by_pc
        text = self.text
        n = self.n
        memo = self.memo
        saves = self.saves
        counters = self.counters
        loop_pos = self.loop_pos
        rep_pos = self.rep_pos
        trail: list = []
        trail_append = trail.append
        trail_pop = trail.pop
        tlen = 0
        frames: list = []
        frames_append = frames.append
        atomic_marks: list[int] = []
        word = WORD_RANGES
        deadline = self.deadline
        mono = time.monotonic
        limit = self.step_limit
        limit_num = limit if limit is not None else (1 << 62)

        for i in range(len(saves)):
            saves[i] = -1
        for i in range(len(loop_pos)):
            loop_pos[i] = -1
        for i in range(len(rep_pos)):
            rep_pos[i] = -1

        pos = start_pos
        pc = 0
        steps = self.steps
        retries = self.retries
        failed = False

        while True:
            if failed:
                failed = False
                while frames:
                    fr = frames[-1]
                    mark = fr[4]
                    while tlen > mark:
                        tk, a, old = trail_pop()
                        tlen -= 1
                        if tk == 0:
                            saves[a] = old
                        elif tk == 2:
                            loop_pos[a] = old
                        elif tk == 1:
                            counters[a] = old
                        elif tk == 3:
                            rep_pos[a] = old
                        elif tk == 4:
                            atomic_marks.pop()
                        else:
                            atomic_marks.append(old)
                    if fr[0] == 0:
                        alt = fr[3]
                        if alt >= 0:
                            fr[3] = -1
                            pc = alt
                            pos = fr[5]
                            retries += 1
                            steps += 1
                            break
                        frames.pop()
                        if memo is not None and fr[1] >= 0:
                            memo.add((fr[1], fr[2]))
                    else:
                        end = fr[3] - 1
                        if end >= fr[5]:
                            fr[3] = end
                            pos = end
                            pc = fr[6]
                            retries += 1
                            steps += 1
                            break
                        frames.pop()
                        if memo is not None:
                            memo.add((fr[1], fr[2]))
                else:
                    self.steps = steps
                    self.retries = retries
                    return "fail"
                if retries > limit_num:
                    self.steps = steps
                    self.retries = retries
                    return "aborted"
                if steps & _CLOCK_MASK < 2 and mono() > deadline:
                    self.steps = steps
                    self.retries = retries
                    return "timeout"
                continue

            steps += 1
            op = instrs[pc]
            kind = op[0]

            if kind == OP_SAVE:
                slot = op[1]
                trail_append((0, slot, saves[slot]))
                tlen += 1
                saves[slot] = pos
                pc += 1
            elif kind == OP_RUN:
                if memo is not None and (pc, pos) in memo:
                    failed = True
                    continue
                table = self.run_tables[op[3]]
                if table is None:
                    table = self._run_table(op[3], op[1])
                end = table[pos]
                k = end - pos
                steps += k
                min_end = pos + op[2]
                if end < min_end:
                    if memo is not None:
                        memo.add((pc, pos))
                    failed = True
                    continue
                tail = tails_by_pc[pc]
                if tail is None:
                    frames_append([1, pc, pos, end, tlen, min_end, pc + 1])
                    pos = end
                    pc += 1
                else:
                    lit, requires_end = tail
                    if requires_end:
                        target = n - len(lit)
                        ok = (min_end <= target <= end
                              and text.startswith(lit, target))
                        e = target if ok else -1
                    elif lit:
                        e = text.rfind(lit, min_end, end + len(lit))
                    else:
                        e = end
                    if e < 0:
                        skipped = end - min_end + 1
                        steps += skipped
                        retries += skipped
                        if memo is not None:
                            memo.add((pc, pos))
                        if retries > limit_num:
                            self.steps = steps
                            self.retries = retries
                            return "aborted"
                        failed = True
                        continue
                    skipped = end - e
                    steps += skipped
                    retries += skipped
                    if retries > limit_num:
                        self.steps = steps
                        self.retries = retries
                        return "aborted"
                    pos = e
                    pc += 1
            elif kind == OP_LOOP:
                head = op[1]
                if memo is not None and (pc, pos) in memo:
                    failed = True
                    continue
                if loop_pos[head] == pos:
                    # previous iteration was empty: the loop must exit
                    pc = op[3]
                else:
                    trail_append((2, head, loop_pos[head]))
                    tlen += 1
                    loop_pos[head] = pos
                    if op[4]:
                        frames_append([0, pc, pos, op[3], tlen, pos, 0])
                        pc = op[2]
                    else:
                        frames_append([0, pc, pos, op[2], tlen, pos, 0])
                        pc = op[3]
            elif kind == OP_CHAR1:
                if pos < n and op[1] <= ord(text[pos]) <= op[2]:
                    pos += 1
                    pc += 1
                else:
                    failed = True
            elif kind == OP_CHARN:
                if pos < n and ranges_contain(op[1], ord(text[pos])):
                    pos += 1
                    pc += 1
                else:
                    failed = True
            elif kind == OP_SPLIT:
                if memo is not None and (pc, pos) in memo:
                    failed = True
                else:
                    frames_append([0, pc, pos, op[2], tlen, pos, 0])
                    pc = op[1]
            elif kind == OP_JMP:
                pc = op[1]
            elif kind == OP_ASSERT:
                akind = op[1]
                if akind == "$" or akind == "Z" or akind == "z":
                    ok = pos == n
                elif akind == "^" or akind == "A":
                    ok = pos == 0
                else:
                    prev_w = pos > 0 and ranges_contain(word, ord(text[pos - 1]))
                    next_w = pos < n and ranges_contain(word, ord(text[pos]))
                    ok = (prev_w != next_w) if akind == "b" else (prev_w == next_w)
                if ok:
                    pc += 1
                else:
                    failed = True
            elif kind == OP_REPINIT:
                reg = op[1]
                trail_append((1, reg, counters[reg]))
                trail_append((3, reg, rep_pos[reg]))
                tlen += 2
                counters[reg] = 0
                rep_pos[reg] = -1
                pc += 1
            elif kind == OP_REPEAT:
                reg = op[1]
                lo = op[2]
                hi = op[3]
                count = counters[reg]
                # empty iterations end the loop only once the minimum is met
                can_enter = count < hi and (rep_pos[reg] != pos or count < lo)
                can_exit = count >= lo
                if can_enter:
                    trail_append((1, reg, count))
                    trail_append((3, reg, rep_pos[reg]))
                    tlen += 2
                    counters[reg] = count + 1
                    rep_pos[reg] = pos
                    if can_exit:
                        if op[6]:
                            frames_append([0, -1, 0, op[5], tlen, pos, 0])
                            pc = op[4]
                        else:
                            frames_append([0, -1, 0, op[4], tlen, pos, 0])
                            pc = op[5]
                    else:
                        pc = op[4]
                elif can_exit:
                    pc = op[5]
                else:
                    failed = True
            elif kind == OP_BACKREF:
                g = op[1]
                s, e = saves[2 * g], saves[2 * g + 1]
                if s < 0 or e < 0:
                    pc += 1  # unset group matches empty
                else:
                    length = e - s
                    if pos + length <= n and text.startswith(text[s:e], pos):
                        pos += length
                        pc += 1
                    else:
                        failed = True
            elif kind == OP_ATOMIC_OPEN:
                trail_append((4, 0, 0))
                tlen += 1
                atomic_marks.append(len(frames))
                pc += 1
            elif kind == OP_ATOMIC_CLOSE:
                mark = atomic_marks.pop()
                trail_append((5, 0, mark))
                tlen += 1
                del frames[mark:]
                pc += 1
            elif kind == OP_MATCH:
                self.steps = steps
                self.retries = retries
                return "match"
            else:
                raise AssertionError(f"bad opcode {kind}")

            if steps & _CLOCK_MASK < 2 and mono() > deadline:
                self.steps = steps
                self.retries = retries
                return "timeout"


# ---------------------------------------------------------------------------
# Pike VM (priority-threaded NFA simulation)
# ---------------------------------------------------------------------------

def match_pike(nfa: Nfa, text: str, budget: float = DEFAULT_BUDGET) -> MatchResult:
    """Leftmost-greedy partial match in time O(states x input length).

    A timeout here indicates an engine defect, not input hardness.
    """
    start_time = time.monotonic()
    deadline = start_time + budget
    n = len(text)
    edges = nfa.edges
    accept = nfa.accept
    loop_heads = nfa.loop_heads
    word = WORD_RANGES
    steps = 0

    fresh_caps = (-1,) * nfa.nslots
    matched: Optional[tuple] = None

    limits = nfa.visit_limits

    def add_thread(lst: list, state: int, caps: tuple, pos: int, visited: dict) -> int:
        nonlocal steps
        stack = [(state, caps)]
        while stack:
            s, c = stack.pop()
            s_edges = edges[s]
            resting = s == accept or (s_edges and s_edges[0][0] == CHAR)
            if resting:
                if s not in visited:
                    visited[s] = 1
                    steps += 1
                    lst.append((s, c))
                continue
            body_edge = loop_heads.get(s)
            count = visited.get(s, 0)
            if count >= limits[s]:
                continue
            visited[s] = count + 1
            steps += 1
            children = []
            for i, (kind, data, t) in enumerate(s_edges):
                if body_edge is not None and count >= 1 and i == body_edge:
                    continue  # re-entry after an empty iteration: exit only
                if kind == ASSERT:
                    if data in ("$", "Z", "z"):
                        ok = pos == n
                    elif data in ("^", "A"):
                        ok = pos == 0
                    else:
                        prev_w = pos > 0 and ranges_contain(word, ord(text[pos - 1]))
                        next_w = pos < n and ranges_contain(word, ord(text[pos]))
                        ok = (prev_w != next_w) if data == "b" else (prev_w == next_w)
                    if not ok:
                        continue
                    children.append((t, c))
                elif kind == TAG:
                    slot = data
                    children.append((t, c[:slot] + (pos,) + c[slot + 1:]))
                else:
                    children.append((t, c))
            stack.extend(reversed(children))
        return steps

    clist: list = []
    visited: dict = {}
    pos = 0
    while True:
        if matched is None:
            add_thread(clist, nfa.start, fresh_caps, pos, visited)
        if not clist and matched is not None:
            break
        nlist: list = []
        nvisited: dict = {}
        ch = text[pos] if pos < n else None
        cp = ord(ch) if ch is not None else -1
        for idx in range(len(clist)):
            s, caps = clist[idx]
            if s == accept:
                matched = caps
                break  # lower-priority threads cannot improve the match
            if ch is None:
                continue
            for kind, data, t in edges[s]:
                if kind == CHAR and ranges_contain(data, cp):
                    add_thread(nlist, t, caps, pos + 1, nvisited)
        if steps & _CLOCK_MASK < 8 and time.monotonic() > deadline:
            return MatchResult(Outcome.TIMEOUT, steps=steps,
                               elapsed=time.monotonic() - start_time)
        if pos >= n:
            break
        clist = nlist
        visited = nvisited
        pos += 1

    elapsed = time.monotonic() - start_time
    if matched is None:
        return MatchResult(Outcome.NO_MATCH, steps=steps, elapsed=elapsed)
    captures = []
    for g in range(1, nfa.group_count + 1):
        s, e = matched[2 * g], matched[2 * g + 1]
        captures.append((s, e) if s >= 0 and e >= 0 else None)
    return MatchResult(Outcome.MATCH, span=(matched[0], matched[1]),
                       captures=captures, steps=steps, elapsed=elapsed)
