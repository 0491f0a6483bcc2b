"""Command-line interface.

Configuration precedence: command-line flags, then REGEXPASSPORT_* environment
variables, then a JSON config file named by REGEXPASSPORT_CONFIG. Desk-scale
defaults are used everywhere; the reference experiment scale (10,000 inputs,
60 s detector budget, 10 s super-linear wall threshold, 100/100,000 pumps) is
documented in the README.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import catalog as catalog_mod
from . import corpus as corpus_mod
from . import differential as diff_mod
from . import inputs as inputs_mod
from . import sl as sl_mod
from .dialects import CONCRETE_DIALECTS, Dialect
from .engines import (
    COUNTER_DEFENSES,
    FULL_DEFENSES,
    NO_DEFENSES,
    DefenseConfig,
)
from .parser import parse
from .syntax import ParseError
from .testers import Orchestrator

ENV_PREFIX = "REGEXPASSPORT_"

ENGINE_PRESETS = {
    "slow": ("backtrack", NO_DEFENSES),
    "medium": ("backtrack", COUNTER_DEFENSES),
    "medium+cache": ("backtrack", FULL_DEFENSES),
    "fast": ("pike", NO_DEFENSES),
}


def _config_file() -> dict:
    path = os.environ.get(ENV_PREFIX + "CONFIG")
    if not path or not os.path.exists(path):
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return {}


def setting(args_value, name: str, default, cast=str):
    """flags > env (REGEXPASSPORT_<NAME>) > config file > default."""
    if args_value is not None:
        return args_value
    env = os.environ.get(ENV_PREFIX + name.upper())
    if env is not None:
        return cast(env)
    conf = _config_file().get(name.lower())
    if conf is not None:
        return cast(conf)
    return default


def _patterns_from(source: str) -> list[tuple[str, str]]:
    """(label, pattern) pairs from an inline pattern, a pattern file, or a
    corpus CSV."""
    path = Path(source)
    if path.is_file():
        text = path.read_text("utf-8")
        if source.endswith(".csv"):
            return [(f"{e.registry}/{e.module}", e.pattern)
                    for e in corpus_mod.corpus_from_csv(text)]
        return [(f"{source}:{i}", line)
                for i, line in enumerate(text.splitlines(), 1) if line]
    return [("<inline>", source)]


def _out(args) -> "object":
    if getattr(args, "output", None) and args.output != "-":
        return open(args.output, "w", encoding="utf-8")
    return sys.stdout


# -- commands -----------------------------------------------------------------

def cmd_lint(args) -> int:
    source = Dialect.from_name(args.source_dialect)
    targets = (list(CONCRETE_DIALECTS) if args.target_dialect == "all"
               else [Dialect.from_name(args.target_dialect)])
    exit_code = 0
    for label, pattern in _patterns_from(args.pattern):
        try:
            ast = parse(pattern, source)
        except ParseError as exc:
            print(f"{label}: parse error in {source.value}: {exc}")
            exit_code = 1
            continue
        for target in targets:
            for f in catalog_mod.lint(ast, source, target):
                print(f"{label}: {f.severity} [{f.entry_id}] -> {target.value} "
                      f"@{f.location[0]}..{f.location[1]}: {f.message}")
                if f.severity == catalog_mod.SEVERITY_ERROR:
                    exit_code = 1
    return exit_code


def _detect_one(task: tuple) -> dict:
    label, pattern, dialect_name, budget_s, validate, engine = task
    try:
        ast = parse(pattern, Dialect.from_name(dialect_name))
    except ParseError as exc:
        return {"pattern": pattern, "error": str(exc)}
    prediction = sl_mod.detect(ast, sl_mod.Budget(seconds=budget_s))
    record = {
        "pattern": pattern,
        "label": label,
        "verdict": prediction.verdict,
        "via_variant": prediction.via_variant,
        "direct_verdict": prediction.direct_verdict,
    }
    if prediction.attack is not None:
        record["attack"] = asdict(prediction.attack)
        if validate:
            engine_name, defenses = ENGINE_PRESETS[engine]
            verdict = sl_mod.validate_attack(
                ast, prediction.attack, defenses, engine=engine_name)
            record["validation"] = {
                "family": verdict.family,
                "degree": verdict.degree,
                "engine": engine,
                "measurements": verdict.measurements,
            }
    return record


def cmd_detect(args) -> int:
    budget_s = float(setting(args.budget, "budget", 60.0, float))
    jobs = int(setting(args.jobs, "jobs", os.cpu_count() or 1, int))
    tasks = [(label, pattern, args.dialect, budget_s, args.validate, args.engine)
             for label, pattern in _patterns_from(args.pattern)]
    out = _out(args)
    if jobs > 1 and len(tasks) > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = pool.map(_detect_one, tasks)
            for record in records:
                out.write(json.dumps(record) + "\n")
    else:
        for task in tasks:
            out.write(json.dumps(_detect_one(task)) + "\n")
    if out is not sys.stdout:
        out.close()
    return 0


def cmd_gen_inputs(args) -> int:
    count = int(setting(args.count, "count", inputs_mod.DESK_TARGET, int))
    seed = int(setting(args.seed, "seed", 0, int))
    ast = parse(args.pattern, Dialect.from_name(args.dialect))
    generated = inputs_mod.generate(ast, count, args.budget, seed)
    data = inputs_mod.inputs_to_bytes(generated)
    if args.output and args.output != "-":
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _build_subjects(spec_text: str, orchestrator: Orchestrator) -> list:
    from .testers import TesterSubject

    subjects = []
    for part in spec_text.split(","):
        part = part.strip()
        if part == "internal-bt":
            subjects.append(diff_mod.InternalSubject("backtrack"))
        elif part == "internal-pike":
            subjects.append(diff_mod.InternalSubject("pike"))
        elif part.startswith("tester:"):
            rest = part[len("tester:"):]
            dialect = Dialect.JAVASCRIPT
            if "=" in rest:
                dialect_name, rest = rest.split("=", 1)
                dialect = Dialect.from_name(dialect_name)
            handle = orchestrator.add_tester(dialect, rest.split())
            subjects.append(TesterSubject(handle))
        else:
            raise SystemExit(f"unknown subject {part!r}")
    return subjects


def cmd_difftest(args) -> int:
    seed = int(setting(args.seed, "seed", 0, int))
    jobs = int(setting(args.jobs, "jobs", os.cpu_count() or 1, int))
    orchestrator = Orchestrator()
    try:
        subjects = _build_subjects(args.subjects, orchestrator)
        out = _out(args)
        all_witnesses = []

        def diff_one(pattern: str) -> list:
            try:
                ast = parse(pattern, diff_mod.INTERNAL_DIALECT)
                generated = inputs_mod.generate(ast, args.count, seed=seed)
                texts = generated.positives + generated.negatives
            except ParseError:
                texts = ["", "a", "aa"]
            return diff_mod.run_differential(pattern, texts, subjects)

        patterns = [pattern for _, pattern in _patterns_from(args.pattern)]
        if jobs > 1 and len(patterns) > 1:
            import concurrent.futures

            with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
                batches = list(pool.map(diff_one, patterns))
        else:
            batches = [diff_one(p) for p in patterns]
        for pattern, witnesses in zip(patterns, batches):
            for w in witnesses:
                asts = {}
                for d in CONCRETE_DIALECTS:
                    try:
                        asts[d] = parse(pattern, d)
                    except ParseError:
                        asts[d] = None
                diff_mod.attribute_cause(w, asts)
                out.write(diff_mod.witness_to_json(w) + "\n")
            all_witnesses.extend(witnesses)
        if args.summary:
            Path(args.summary).write_text(
                diff_mod.summary_to_csv(diff_mod.summarize(all_witnesses)),
                encoding="utf-8",
            )
        if out is not sys.stdout:
            out.close()
    finally:
        orchestrator.shutdown()
    return 0


def cmd_extract(args) -> int:
    root = Path(args.directory)
    entries = []
    if root.is_file():
        files = [root]
    else:
        files = sorted(p for p in root.rglob("*") if p.is_file())
    for path in files:
        try:
            text = path.read_text("utf-8")
        except (OSError, UnicodeDecodeError):
            continue
        entries.extend(corpus_mod.extract_regexes(
            text, args.lang, registry=args.registry,
            module=args.module or path.stem, file=str(path),
        ))
    output = corpus_mod.corpus_to_csv(entries)
    if args.output and args.output != "-":
        Path(args.output).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def cmd_reuse_report(args) -> int:
    corpus = corpus_mod.corpus_from_csv(Path(args.corpus).read_text("utf-8"))
    internet = None
    if args.internet:
        internet = corpus_mod.load_internet_sources(
            Path(args.internet).read_text("utf-8"))
    report = corpus_mod.reuse_report(corpus, args.min_len, internet)
    record = {
        "min_length": report.min_length,
        "modules": {
            f"{registry}/{module}": sorted(flags)
            for (registry, module), flags in sorted(report.module_flags.items())
        },
        "patterns_with_duplicates": sum(
            1 for p, n in report.pattern_counts.items()
            if n > 1 and len(p) >= report.min_length
        ),
    }
    print(json.dumps(record, indent=2 if args.format == "json" else None)
          if args.format == "json" else _reuse_text(record))
    return 0


def _reuse_text(record: dict) -> str:
    lines = [f"min pattern length: {record['min_length']}",
             f"duplicated patterns: {record['patterns_with_duplicates']}"]
    for module, flags in record["modules"].items():
        lines.append(f"{module}: {','.join(flags) if flags else '-'}")
    return "\n".join(lines)


def cmd_report(args) -> int:
    text = Path(args.input).read_text("utf-8")
    records = [json.loads(line) for line in text.splitlines() if line.strip()]
    if records and "kind" in records[0]:
        return _report_witnesses(records, args)
    return _report_verdicts(records, args)


def _report_witnesses(records: list[dict], args) -> int:
    pairs: dict[tuple[str, str], dict[str, set]] = {}
    names = set()
    for r in records:
        subjects = [s for s, v in r["subjects"].items() if "matched" in v]
        names.update(subjects)
        for i, a in enumerate(subjects):
            for b in subjects[i + 1:]:
                key = tuple(sorted((a, b)))
                pairs.setdefault(key, {"match": set(), "substring": set(),
                                       "capture": set()})
                pairs[key][r["kind"]].add(r["regex"])
    if args.format == "json":
        out = {f"{a}|{b}": {k: len(v) for k, v in kinds.items()}
               for (a, b), kinds in sorted(pairs.items())}
        print(json.dumps(out, indent=2))
    else:
        print("subject_a,subject_b,match,substring,capture")
        for (a, b), kinds in sorted(pairs.items()):
            print(f"{a},{b},{len(kinds['match'])},{len(kinds['substring'])},"
                  f"{len(kinds['capture'])}")
    return 0


def _report_verdicts(records: list[dict], args) -> int:
    counts: dict[str, int] = {}
    families: dict[str, int] = {}
    for r in records:
        counts[r.get("verdict", "error")] = counts.get(r.get("verdict", "error"), 0) + 1
        validation = r.get("validation")
        if validation:
            families[validation["family"]] = families.get(validation["family"], 0) + 1
    if args.format == "json":
        print(json.dumps({"verdicts": counts, "confirmed": families}, indent=2))
    else:
        print("kind,value,count")
        for k, v in sorted(counts.items()):
            print(f"verdict,{k},{v}")
        for k, v in sorted(families.items()):
            print(f"confirmed,{k},{v}")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regexpassport",
        description="Cross-dialect regex portability toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lint", help="cross-dialect false-friend lint")
    p.add_argument("pattern", help="pattern text or file of patterns")
    p.add_argument("--from", dest="source_dialect", required=True)
    p.add_argument("--to", dest="target_dialect", default="all")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("detect", help="super-linear detection")
    p.add_argument("pattern", help="pattern text, pattern file, or corpus.csv")
    p.add_argument("--dialect", default="portable-core")
    p.add_argument("--budget", type=float, default=None,
                   help="static analysis budget in seconds (default 60)")
    p.add_argument("--validate", action="store_true",
                   help="dynamically validate predicted attacks")
    p.add_argument("--engine", choices=sorted(ENGINE_PRESETS), default="slow")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("gen-inputs", help="generate matching/mismatching inputs")
    p.add_argument("pattern")
    p.add_argument("--dialect", default="portable-core")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=float, default=inputs_mod.DESK_BUDGET)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen_inputs)

    p = sub.add_parser("difftest", help="differential testing across subjects")
    p.add_argument("pattern", help="pattern text, pattern file, or corpus.csv")
    p.add_argument("--subjects", default="internal-bt,internal-pike",
                   help="comma list: internal-bt, internal-pike, "
                        "tester:<dialect>=<command>")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    p.add_argument("--summary", default=None, help="write pairwise CSV here")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_difftest)

    p = sub.add_parser("extract", help="extract statically-declared regexes")
    p.add_argument("directory")
    p.add_argument("--lang", required=True, choices=corpus_mod.SUPPORTED_LANGUAGES)
    p.add_argument("--registry", required=True)
    p.add_argument("--module", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("reuse-report", help="duplicate/re-use metrics")
    p.add_argument("corpus", help="corpus CSV")
    p.add_argument("--internet", default=None,
                   help="newline-delimited base64 snippet file")
    p.add_argument("--min-len", type=int, default=corpus_mod.DEFAULT_MIN_LENGTH)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_reuse_report)

    p = sub.add_parser("report", help="plot-ready tables from logs")
    p.add_argument("input", help="witness log or detect output (JSON lines)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
