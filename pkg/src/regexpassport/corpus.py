"""Statically-declared regex extraction and re-use metrics.

Extraction is lexical scanning with string/comment awareness, not host
language parsing: slash-delimited literals for the two literal-syntax rule
sets, constant first arguments of compile/match-style calls for the
call-syntax rule set, and a pass-through list format. Dynamically composed
patterns (concatenation, interpolation, formatting) are skipped.

Re-use is exact string equality on the raw source-level pattern text, and
only patterns of at least `min_length` characters count, which screens out
trivially identical patterns such as a lone whitespace class.
"""

from __future__ import annotations

import base64
import csv
import io
import re
from dataclasses import dataclass, field

SUPPORTED_LANGUAGES = ("js-like", "ruby-like", "python-like", "list")

DEFAULT_MIN_LENGTH = 15

# characters after which a '/' starts a regex literal rather than a division
_REGEX_PRECEDERS = set("=([{,;:!&|?+-*%~^<>")
_CALL_RE = re.compile(
    r"\b(?:re\s*\.\s*)?(?:compile|fullmatch|match|search|sub|subn|finditer|findall|split)"
    r"\s*\("
)
_STRING_PREFIX_RE = re.compile(r"[rbuRBU]{0,2}$")


class UnsupportedLanguage(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    pattern: str  # raw source-level pattern text, unmodified
    registry: str
    module: str
    file: str
    line: int


@dataclass
class ReuseReport:
    min_length: int
    # (registry, module) -> subset of {"intra", "inter", "internet"}
    module_flags: dict[tuple[str, str], set[str]] = field(default_factory=dict)
    pattern_counts: dict[str, int] = field(default_factory=dict)

    def flags(self, registry: str, module: str) -> set[str]:
        return self.module_flags.get((registry, module), set())


def extract_regexes(contents: str, language: str, *, registry: str = "",
                    module: str = "", file: str = "") -> list[CorpusEntry]:
    if language == "js-like":
        found = _extract_slash_literals(contents, dynamic_marker=None)
    elif language == "ruby-like":
        found = _extract_slash_literals(contents, dynamic_marker="#{")
    elif language == "python-like":
        found = _extract_call_patterns(contents)
    elif language == "list":
        found = [(i, line) for i, line in enumerate(contents.splitlines(), 1) if line]
    else:
        raise UnsupportedLanguage(language)
    return [CorpusEntry(pattern, registry, module, file, line)
            for line, pattern in found]


def _extract_slash_literals(text: str, dynamic_marker: str | None) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    i = 0
    n = len(text)
    line = 1
    prev_significant = ""
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in "\"'`":
            i = _skip_string(text, i, ch, allow_newline=ch == "`")
            prev_significant = '"'
            continue
        if ch == "/" and text[i + 1:i + 2] == "/":
            i = text.find("\n", i)
            i = n if i == -1 else i
            continue
        if ch == "/" and text[i + 1:i + 2] == "*":
            end = text.find("*/", i + 2)
            chunk_end = n if end == -1 else end + 2
            line += text.count("\n", i, chunk_end)
            i = chunk_end
            continue
        if ch == "#" and dynamic_marker is not None:
            i = text.find("\n", i)
            i = n if i == -1 else i
            continue
        if ch == "/":
            if prev_significant and prev_significant not in _REGEX_PRECEDERS:
                prev_significant = "/"
                i += 1
                continue
            end = _scan_regex_body(text, i + 1)
            if end is None:
                i += 1
                continue
            body = text[i + 1:end]
            if "\n" not in body and body:
                if dynamic_marker is None or dynamic_marker not in body:
                    out.append((line, body))
            i = end + 1
            while i < n and text[i].isalpha():  # trailing flags
                i += 1
            prev_significant = ")"
            continue
        if not ch.isspace():
            prev_significant = ch
        i += 1
    return out


def _scan_regex_body(text: str, start: int) -> int | None:
    i = start
    n = len(text)
    in_class = False
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "\n":
            return None
        if in_class:
            if ch == "]":
                in_class = False
        elif ch == "[":
            in_class = True
        elif ch == "/":
            return i
        i += 1
    return None


def _skip_string(text: str, start: int, quote: str, allow_newline: bool) -> int:
    i = start + 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == quote:
            return i + 1
        if ch == "\n" and not allow_newline:
            return i
        i += 1
    return n


def _extract_call_patterns(text: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    for m in _CALL_RE.finditer(text):
        arg_start = m.end()
        j = arg_start
        n = len(text)
        while j < n and text[j].isspace():
            j += 1
        # optional r/b string prefix (an f-prefix means interpolation: skip)
        k = j
        while k < n and text[k].isalpha():
            k += 1
        prefix = text[j:k]
        if k >= n or text[k] not in "\"'":
            continue
        if not _STRING_PREFIX_RE.fullmatch(prefix):
            continue
        quote = text[k]
        if text[k:k + 3] in ('"""', "'''"):
            quote = text[k:k + 3]
            k += 3
        else:
            k += 1
        body_start = k
        while k < n:
            if text[k] == "\\":
                k += 2
                continue
            if text.startswith(quote, k):
                break
            k += 1
        if k >= n:
            continue
        pattern = text[body_start:k]
        after = k + len(quote)
        while after < n and text[after].isspace():
            after += 1
        # a constant argument ends here; '+', '%', '.' mean dynamic assembly
        if after < n and text[after] not in "),":
            continue
        line = text.count("\n", 0, m.start()) + 1
        if pattern:
            out.append((line, pattern))
    return out


# ---------------------------------------------------------------------------
# Re-use metrics
# ---------------------------------------------------------------------------

def reuse_report(corpus: list[CorpusEntry], min_length: int = DEFAULT_MIN_LENGTH,
                 internet_sources: list[str] | None = None) -> ReuseReport:
    """Exact-duplicate detection: a pattern shared by two modules of one
    registry flags them intra; shared across registries flags inter;
    membership in the internet snippet list flags internet."""
    report = ReuseReport(min_length=min_length)
    by_pattern: dict[str, set[tuple[str, str]]] = {}
    for entry in corpus:
        report.pattern_counts[entry.pattern] = (
            report.pattern_counts.get(entry.pattern, 0) + 1
        )
        by_pattern.setdefault(entry.pattern, set()).add(
            (entry.registry, entry.module)
        )
        report.module_flags.setdefault((entry.registry, entry.module), set())

    internet = {p for p in (internet_sources or []) if len(p) >= min_length}
    for pattern, modules in sorted(by_pattern.items()):
        if len(pattern) < min_length:
            continue
        registries = {registry for registry, _ in modules}
        by_registry: dict[str, int] = {}
        for registry, _ in modules:
            by_registry[registry] = by_registry.get(registry, 0) + 1
        for registry, module in modules:
            flags = report.module_flags[(registry, module)]
            if by_registry[registry] >= 2:
                flags.add("intra")
            if len(registries) >= 2:
                flags.add("inter")
            if pattern in internet:
                flags.add("internet")
    return report


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def corpus_to_csv(corpus: list[CorpusEntry]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["registry", "module", "file", "line", "pattern_b64"])
    for e in corpus:
        writer.writerow([
            e.registry, e.module, e.file, e.line,
            base64.b64encode(e.pattern.encode("utf-8")).decode("ascii"),
        ])
    return buf.getvalue()


def corpus_from_csv(text: str) -> list[CorpusEntry]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["registry", "module", "file", "line", "pattern_b64"]:
        raise ValueError("not a corpus CSV")
    out = []
    for row in reader:
        registry, module, file, line, pattern_b64 = row
        pattern = base64.b64decode(pattern_b64).decode("utf-8")
        out.append(CorpusEntry(pattern, registry, module, file, int(line)))
    return out


def load_internet_sources(text: str) -> list[str]:
    """Newline-delimited base64 snippet list."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            out.append(base64.b64decode(line).decode("utf-8"))
    return out
