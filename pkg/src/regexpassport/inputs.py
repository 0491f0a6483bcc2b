"""Matching and mismatching input generation for differential testing.

Positives come from random priority-biased walks over the pattern's
automaton (every emitted positive is re-checked against the linear engine);
negatives are single-edit mutations of positives plus boundary inputs.
Candidates are labels only: the differential harness trusts engine outcomes,
never these labels. Generation is deterministic for a fixed seed.

Desk-scale defaults (500 inputs / 1 s); the reference experiment scale is
10,000 inputs with a 10 s budget per pattern.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

from .engines import match_pike
from .nfa import (
    ASSERT,
    BudgetExceeded,
    CHAR,
    Nfa,
    Unsupported,
    compile_nfa,
    edge_coverage,
)
from .syntax import Ast, Literal, QuoteBlock, walk

DESK_TARGET = 500
DESK_BUDGET = 1.0
PAPER_TARGET = 10_000
PAPER_BUDGET = 10.0

_WALK_PRIORITY_BIAS = 0.7  # chance of taking the highest-priority edge


@dataclass
class InputSet:
    positives: list[str]
    negatives: list[str]
    coverage: float
    seed: int


def _sample_alphabet(nfa: Nfa) -> list[str]:
    chars: set[str] = set()
    for edges in nfa.edges:
        for kind, data, _ in edges:
            if kind == CHAR:
                for lo, hi in data:
                    chars.add(chr(lo))
                    if hi - lo <= 4:
                        chars.update(chr(c) for c in range(lo, hi + 1))
    return sorted(chars)[:16] or ["a"]


def _walk(nfa: Nfa, rng: random.Random, cap: int) -> str | None:
    """One random priority-respecting walk from start to accept."""
    out: list[str] = []
    state = nfa.start
    ended = False
    for _ in range(cap * 3):
        if state == nfa.accept:
            return "".join(out)
        edges = nfa.edges[state]
        if not edges:
            return None
        order = list(range(len(edges)))
        if len(order) > 1 and rng.random() > _WALK_PRIORITY_BIAS:
            rng.shuffle(order)
        progressed = False
        for i in order:
            kind, data, target = edges[i]
            if kind == CHAR:
                if ended or len(out) >= cap or not data:
                    continue
                lo, hi = data[rng.randrange(len(data))]
                out.append(chr(rng.randint(lo, min(hi, lo + 64))))
                state = target
                progressed = True
                break
            if kind == ASSERT:
                if data in ("^", "A") and out:
                    continue
                if data in ("$", "Z", "z"):
                    ended = True  # nothing may be consumed afterwards
                state = target
                progressed = True
                break
            state = target  # eps / tag
            progressed = True
            break
        if not progressed:
            return None
    return None


def _mutate(text: str, rng: random.Random, alphabet: list[str]) -> str:
    kind = rng.randrange(4)
    if not text:
        return rng.choice(alphabet)
    i = rng.randrange(len(text))
    if kind == 0:  # substitute
        return text[:i] + rng.choice(alphabet) + text[i + 1:]
    if kind == 1:  # insert
        return text[:i] + rng.choice(alphabet) + text[i:]
    if kind == 2:  # delete
        return text[:i] + text[i + 1:]
    if len(text) < 2:  # transpose needs two chars
        return text + rng.choice(alphabet)
    i = rng.randrange(len(text) - 1)
    return text[:i] + text[i + 1] + text[i] + text[i + 2:]


def _literal_skeleton(ast: Ast) -> str:
    parts = []
    for node in walk(ast.root):
        if isinstance(node, Literal):
            parts.append(node.char)
        elif isinstance(node, QuoteBlock):
            parts.append(node.text)
    return "".join(parts)


def generate(ast: Ast, target_count: int = DESK_TARGET,
             budget: float = DESK_BUDGET, seed: int = 0) -> InputSet:
    """Deterministic input set; on budget expiry the partial set is returned
    with the coverage measured so far."""
    rng = random.Random(seed)
    deadline = time.monotonic() + budget
    try:
        nfa = compile_nfa(ast)
    except (Unsupported, BudgetExceeded):
        nfa = None

    positives: dict[str, None] = {}
    negatives: dict[str, None] = {}
    half = max(1, target_count // 2)

    if nfa is not None:
        alphabet = _sample_alphabet(nfa)
        cap = 4 * nfa.n_states
        attempts = 0
        while len(positives) < half and attempts < half * 20:
            if time.monotonic() > deadline:
                break
            attempts += 1
            candidate = _walk(nfa, rng, cap)
            if candidate is None or candidate in positives:
                continue
            if match_pike(nfa, candidate, budget=0.2).matched:
                positives[candidate] = None
    else:
        alphabet = sorted(set(_literal_skeleton(ast))) or ["a"]
        positives[_literal_skeleton(ast)] = None

    # boundary negatives: empty, single chars, pump-like runs
    for boundary in ["", *(c for c in alphabet[:4]),
                     *(c * 12 for c in alphabet[:2])]:
        if boundary not in positives:
            negatives[boundary] = None

    pool = list(positives) or [""]
    idx = 0
    while len(positives) + len(negatives) < target_count:
        if time.monotonic() > deadline:
            break
        base = pool[idx % len(pool)]
        idx += 1
        mutant = _mutate(base, rng, alphabet)
        if mutant not in positives and mutant not in negatives:
            negatives[mutant] = None
        if idx > target_count * 30:
            break

    pos_list = list(positives)
    neg_list = list(negatives)
    coverage = edge_coverage(nfa, pos_list + neg_list) if nfa is not None else 0.0
    return InputSet(pos_list, neg_list, coverage, seed)


# ---------------------------------------------------------------------------
# Serialization: length-prefixed UTF-8 records (inputs may contain newlines)
# ---------------------------------------------------------------------------

def inputs_to_bytes(inputs: InputSet) -> bytes:
    header = json.dumps(
        {"positives": len(inputs.positives), "negatives": len(inputs.negatives),
         "seed": inputs.seed, "coverage": round(inputs.coverage, 6)},
        separators=(",", ":"),
    ).encode() + b"\n"
    chunks = [header]
    for text in [*inputs.positives, *inputs.negatives]:
        raw = text.encode("utf-8")
        chunks.append(str(len(raw)).encode() + b"\n" + raw + b"\n")
    return b"".join(chunks)


def inputs_from_bytes(data: bytes) -> InputSet:
    nl = data.index(b"\n")
    header = json.loads(data[:nl])
    offset = nl + 1
    records: list[str] = []
    total = header["positives"] + header["negatives"]
    for _ in range(total):
        nl = data.index(b"\n", offset)
        length = int(data[offset:nl])
        start = nl + 1
        records.append(data[start:start + length].decode("utf-8"))
        if data[start + length:start + length + 1] != b"\n":
            raise ValueError("malformed input record")
        offset = start + length + 1
    if data[offset:]:
        raise ValueError("trailing bytes in input set")
    n_pos = header["positives"]
    return InputSet(records[:n_pos], records[n_pos:],
                    header["coverage"], header["seed"])
