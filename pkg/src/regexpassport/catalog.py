"""Dialect behavior catalog and the false-friend linter.

The catalog is a versioned data file (``data/catalog.txt``) mapping each
cross-dialect construct to its reading in all eight dialects, grouped by how
the readings relate (feature-vs-nothing, feature-vs-other-feature, nuanced
behavior, engine-bug notes). Grey-cell behavior that manuals do not describe
carries ``documented=False`` and is called out in lint messages: testing, not
the manual, established it.

Linting compares the source dialect's reading of each construct occurrence
against the target dialect's; engine-bug notes never lint.
"""

from __future__ import annotations

import urllib.parse
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .dialects import CONCRETE_DIALECTS, Dialect
from .syntax import Ast, feature_occurrences

GROUPS = ("false-friend-1", "false-friend-2", "nuanced", "engine-bug-note")

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"
SEVERITY_INFO = "info"


class CatalogFormatError(ValueError):
    pass


class UnknownConstruct(KeyError):
    pass


@dataclass(frozen=True)
class Interpretation:
    kind: str  # 'feature' | 'literal-fallback' | 'syntax-error' | 'alternate-feature'
    detail: str = ""

    def describe(self) -> str:
        if self.kind == "syntax-error":
            return "a syntax error"
        if self.kind == "literal-fallback":
            return f'literal text "{self.detail}"'
        if self.kind == "alternate-feature":
            return f"the different feature '{self.detail}'"
        return f"'{self.detail}'"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    group: str
    constructs: frozenset[str]
    per_dialect: dict[Dialect, Interpretation]
    documented: dict[Dialect, bool]


@dataclass(frozen=True)
class Finding:
    entry_id: str
    location: tuple[int, int]
    target: Dialect
    severity: str
    message: str


_KIND_BY_TAG = {
    "feature": "feature",
    "literal": "literal-fallback",
    "alt": "alternate-feature",
    "error": "syntax-error",
}


def _parse_interp(token: str, line_no: int) -> tuple[Interpretation, bool]:
    documented = True
    if token.endswith(",!doc"):
        documented = False
        token = token[: -len(",!doc")]
    tag, _, detail = token.partition(":")
    if tag not in _KIND_BY_TAG or (tag != "error" and not detail):
        raise CatalogFormatError(f"line {line_no}: bad interpretation {token!r}")
    return Interpretation(_KIND_BY_TAG[tag], urllib.parse.unquote(detail)), documented


def parse_catalog(text: str) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 4:
            raise CatalogFormatError(f"line {line_no}: expected 4 fields")
        entry_id, group, constructs_field, cells_field = fields
        if group not in GROUPS:
            raise CatalogFormatError(f"line {line_no}: unknown group {group!r}")
        constructs = frozenset(
            c for c in constructs_field.split() if c != "-"
        )
        per_dialect: dict[Dialect, Interpretation] = {}
        documented: dict[Dialect, bool] = {}
        for cell in cells_field.split():
            name, _, token = cell.partition("=")
            dialect = Dialect.from_name(name)
            interp, doc = _parse_interp(token, line_no)
            per_dialect[dialect] = interp
            documented[dialect] = doc
        missing = [d for d in CONCRETE_DIALECTS if d not in per_dialect]
        if missing:
            raise CatalogFormatError(
                f"line {line_no}: missing dialects {[d.value for d in missing]}"
            )
        entries.append(CatalogEntry(entry_id, group, constructs, per_dialect, documented))
    return entries


_catalog_cache: Optional[list[CatalogEntry]] = None


def load_catalog() -> list[CatalogEntry]:
    global _catalog_cache
    if _catalog_cache is None:
        text = resources.files("regexpassport").joinpath("data/catalog.txt").read_text("utf-8")
        _catalog_cache = parse_catalog(text)
    return _catalog_cache


def catalog_by_id() -> dict[str, CatalogEntry]:
    return {e.id: e for e in load_catalog()}


def interpretation(construct: str, dialect: Dialect) -> Interpretation:
    """The catalog cell for a construct (feature id or entry id) in a dialect."""
    for entry in load_catalog():
        if construct == entry.id or construct in entry.constructs:
            return entry.per_dialect[dialect]
    raise UnknownConstruct(construct)


def _severity(entry: CatalogEntry, target: Interpretation) -> str:
    if target.kind == "syntax-error":
        return SEVERITY_ERROR
    if entry.group == "nuanced":
        return SEVERITY_INFO
    return SEVERITY_WARNING


def lint(ast: Ast, source_dialect: Dialect, target_dialect: Dialect) -> list[Finding]:
    """One finding per construct occurrence whose reading changes between
    source and target dialects; engine-bug notes are skipped."""
    if source_dialect == target_dialect:
        return []
    findings: list[Finding] = []
    by_construct: dict[str, CatalogEntry] = {}
    for entry in load_catalog():
        if entry.group == "engine-bug-note":
            continue
        for construct in entry.constructs:
            by_construct[construct] = entry
    for fid, span in feature_occurrences(ast):
        entry = by_construct.get(fid)
        if entry is None:
            continue
        src = entry.per_dialect.get(source_dialect)
        tgt = entry.per_dialect.get(target_dialect)
        if src is None or tgt is None or src == tgt:
            continue
        message = (
            f"{fid}: {target_dialect.value} reads this as {tgt.describe()}, "
            f"{source_dialect.value} as {src.describe()}"
        )
        if not entry.documented.get(target_dialect, True) or not entry.documented.get(
            source_dialect, True
        ):
            message += " (behavior verified experimentally, not documented)"
        findings.append(
            Finding(entry.id, span, target_dialect, _severity(entry, tgt), message)
        )
    return findings


def portability_matrix(ast: Ast) -> dict[Dialect, list[Finding]]:
    """Lint against every concrete dialect with the tree's own dialect as source."""
    return {d: lint(ast, ast.dialect, d) for d in CONCRETE_DIALECTS}
