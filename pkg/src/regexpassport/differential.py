"""Differential evaluation across match subjects and witness classification.

A disagreement between subjects on one (pattern, input) pair becomes a
witness of exactly one kind, checked in a fixed disjoint order:

* match: subjects disagree on whether anything matched;
* substring: all matched, but the matched spans differ;
* capture: match and span agree, the capture spans differ.

Subjects that reject the pattern as a syntax error (or fail/time out) are
excluded from kind computation; syntax disagreement is the linter's
territory. Cause attribution intersects the constructs present in the
pattern with catalog entries whose readings differ between the disagreeing
subjects' dialects; no intersection means the witness is unexplained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .catalog import load_catalog
from .dialects import Dialect
from .engines import MatchResult, Outcome, match_backtrack, match_pike
from .nfa import BudgetExceeded, Unsupported, compile_nfa
from .parser import parse
from .syntax import Ast, ParseError, feature_inventory

OBS_OK = "ok"
OBS_SYNTAX_ERROR = "syntax-error"
OBS_FAILURE = "subject-failure"

KIND_MATCH = "match"
KIND_SUBSTRING = "substring"
KIND_CAPTURE = "capture"

# the internal engines parse with the widest dialect profile
INTERNAL_DIALECT = Dialect.PERL


class InsufficientSubjects(ValueError):
    pass


@dataclass(frozen=True)
class Observation:
    subject: str
    status: str  # ok | syntax-error | subject-failure
    matched: bool = False
    span: Optional[tuple[int, int]] = None
    captures: tuple = ()
    elapsed: float = 0.0
    dialect: Optional[Dialect] = None
    detail: str = ""

    def comparable(self) -> bool:
        return self.status == OBS_OK

    def behavior(self) -> tuple:
        return (self.matched, self.span, self.captures)


@dataclass
class Witness:
    regex: str
    input: str
    kind: str
    observations: list[Observation]
    causes: list[str] = field(default_factory=list)

    @property
    def unexplained(self) -> bool:
        return not self.causes


class Subject(Protocol):
    name: str
    dialect: Optional[Dialect]

    def evaluate(self, pattern: str, text: str, timeout: float) -> Observation: ...


class InternalSubject:
    """One of the two in-process engines as a differential subject."""

    def __init__(self, engine: str):
        if engine not in ("backtrack", "pike"):
            raise ValueError(engine)
        self.engine = engine
        self.name = "internal-bt" if engine == "backtrack" else "internal-pike"
        self.dialect: Optional[Dialect] = None  # not a catalog column

    def evaluate(self, pattern: str, text: str, timeout: float) -> Observation:
        try:
            ast = parse(pattern, INTERNAL_DIALECT)
        except ParseError as exc:
            return Observation(self.name, OBS_SYNTAX_ERROR, detail=str(exc))
        try:
            if self.engine == "backtrack":
                result = match_backtrack(ast, text, budget=timeout)
            else:
                result = match_pike(compile_nfa(ast), text, budget=timeout)
        except (Unsupported, BudgetExceeded) as exc:
            return Observation(self.name, OBS_FAILURE, detail=str(exc))
        return observation_from_result(self.name, result, dialect=self.dialect)


def observation_from_result(name: str, result: MatchResult,
                            dialect: Optional[Dialect] = None) -> Observation:
    if result.outcome is Outcome.MATCH:
        return Observation(name, OBS_OK, True, result.span,
                           tuple(result.captures), result.elapsed, dialect)
    if result.outcome is Outcome.NO_MATCH:
        return Observation(name, OBS_OK, False, None, (), result.elapsed, dialect)
    return Observation(name, OBS_FAILURE, elapsed=result.elapsed,
                       dialect=dialect, detail=result.outcome.value)


DEFAULT_SUBJECT_TIMEOUT = 2.0  # semantic testing must not become a timing one


def evaluate_all(pattern: str, text: str, subjects: list[Subject],
                 timeout: float = DEFAULT_SUBJECT_TIMEOUT) -> list[Observation]:
    """One observation per subject; a subject timeout is a failure
    observation, never a witness."""
    return [s.evaluate(pattern, text, timeout) for s in subjects]


def _pairwise_kind(a: Observation, b: Observation) -> Optional[str]:
    if a.matched != b.matched:
        return KIND_MATCH
    if not a.matched:
        return None
    if a.span != b.span:
        return KIND_SUBSTRING
    if a.captures != b.captures:
        return KIND_CAPTURE
    return None


def classify_witness(regex: str, text: str,
                     observations: list[Observation]) -> Optional[Witness]:
    """The disjoint hierarchy: match, else substring, else capture, else none."""
    comparable = [o for o in observations if o.comparable()]
    if len(comparable) < 2:
        raise InsufficientSubjects(
            f"need at least 2 comparable observations, got {len(comparable)}")
    if len({o.matched for o in comparable}) > 1:
        kind = KIND_MATCH
    elif not comparable[0].matched:
        return None
    elif len({o.span for o in comparable}) > 1:
        kind = KIND_SUBSTRING
    elif len({o.captures for o in comparable}) > 1:
        kind = KIND_CAPTURE
    else:
        return None
    return Witness(regex, text, kind, observations)


def attribute_cause(witness: Witness,
                    asts_per_dialect: dict[Dialect, Optional[Ast]]) -> list[str]:
    """Catalog entries whose construct appears in the pattern and whose
    readings differ between some pair of disagreeing subjects."""
    present: set[str] = set()
    for ast in asts_per_dialect.values():
        if ast is not None:
            present |= feature_inventory(ast)
    if not present:
        witness.causes = []
        return []

    comparable = [o for o in witness.observations if o.comparable()]
    disagreeing_dialects: set[tuple[Dialect, Dialect]] = set()
    for i, a in enumerate(comparable):
        for b in comparable[i + 1:]:
            if _pairwise_kind(a, b) is not None and a.dialect and b.dialect:
                disagreeing_dialects.add((a.dialect, b.dialect))
    # a subject that rejected the pattern still disagrees with one that ran it
    for a in witness.observations:
        if a.status == OBS_SYNTAX_ERROR and a.dialect:
            for b in comparable:
                if b.dialect:
                    disagreeing_dialects.add((a.dialect, b.dialect))

    causes: list[str] = []
    for entry in load_catalog():
        if not (entry.constructs & present):
            continue
        for d1, d2 in disagreeing_dialects:
            if entry.per_dialect.get(d1) != entry.per_dialect.get(d2):
                causes.append(entry.id)
                break
    witness.causes = causes
    return causes


# ---------------------------------------------------------------------------
# Pairwise summary (distinct regexes per subject pair and kind)
# ---------------------------------------------------------------------------

def summarize(witnesses: list[Witness]) -> dict[tuple[str, str], dict[str, int]]:
    """Counts are of distinct regexes, not witness instances."""
    seen: dict[tuple[str, str, str], set[str]] = {}
    names: set[str] = set()
    for w in witnesses:
        comparable = [o for o in w.observations if o.comparable()]
        names.update(o.subject for o in w.observations)
        for i, a in enumerate(comparable):
            for b in comparable[i + 1:]:
                kind = _pairwise_kind(a, b)
                if kind is None:
                    continue
                pair = tuple(sorted((a.subject, b.subject)))
                seen.setdefault((pair[0], pair[1], kind), set()).add(w.regex)
    out: dict[tuple[str, str], dict[str, int]] = {}
    ordered = sorted(names)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            out[(a, b)] = {
                kind: len(seen.get((a, b, kind), ()))
                for kind in (KIND_MATCH, KIND_SUBSTRING, KIND_CAPTURE)
            }
    return out


def summary_to_csv(summary: dict[tuple[str, str], dict[str, int]]) -> str:
    lines = ["subject_a,subject_b,match,substring,capture"]
    for (a, b), counts in sorted(summary.items()):
        lines.append(f"{a},{b},{counts[KIND_MATCH]},{counts[KIND_SUBSTRING]},"
                     f"{counts[KIND_CAPTURE]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Witness log (one JSON object per line)
# ---------------------------------------------------------------------------

def witness_to_json(witness: Witness) -> str:
    subjects = {}
    for o in witness.observations:
        if o.status == OBS_OK:
            subjects[o.subject] = {
                "matched": o.matched,
                "span": list(o.span) if o.span else None,
                "captures": [list(c) if c else None for c in o.captures],
            }
        else:
            subjects[o.subject] = {"status": o.status}
    record = {
        "regex": witness.regex,
        "input": witness.input,
        "kind": witness.kind,
        "subjects": subjects,
        "causes": witness.causes,
    }
    return json.dumps(record, ensure_ascii=True, separators=(",", ":"))


def run_differential(pattern: str, inputs: list[str], subjects: list[Subject],
                     timeout: float = DEFAULT_SUBJECT_TIMEOUT,
                     slow_flags: Optional[list] = None) -> list[Witness]:
    """Evaluate one pattern over many inputs; observations merge in a
    deterministic (input, subject) order so output is order-independent.

    Per-subject timeouts never become witnesses; when `slow_flags` is given,
    the offending (pattern, input, subject) triples are appended there so the
    super-linear pipeline can pick them up.
    """
    witnesses = []
    for text in inputs:
        observations = evaluate_all(pattern, text, subjects, timeout)
        if slow_flags is not None:
            for o in observations:
                if o.status == OBS_FAILURE and "timeout" in o.detail:
                    slow_flags.append((pattern, text, o.subject))
        comparable = [o for o in observations if o.comparable()]
        if len(comparable) < 2:
            continue
        witness = classify_witness(pattern, text, observations)
        if witness is not None:
            witnesses.append(witness)
    return witnesses
