"""Command-line surface: exit codes, outputs, determinism."""

import json

import pytest

from regexpassport.cli import main
from regexpassport.corpus import CorpusEntry, corpus_to_csv


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


class TestLint:
    def test_two_warnings_exit_zero(self, capsys):
        code, out = run(capsys, ["lint", r"\Ab\Z", "--from", "java",
                                 "--to", "javascript"])
        assert code == 0
        assert out.count("warning") == 2

    def test_error_severity_exits_one(self, capsys):
        code, out = run(capsys, ["lint", r"\x{41}", "--from", "java",
                                 "--to", "python"])
        assert code == 1
        assert "error" in out

    def test_lint_all_targets(self, capsys):
        code, out = run(capsys, ["lint", r"\G", "--from", "java", "--to", "all"])
        assert code == 1  # go and rust reject the construct
        assert "javascript" in out and "go" in out

    def test_pattern_file(self, tmp_path, capsys):
        f = tmp_path / "patterns.txt"
        f.write_text("abc\n\\Ab\\Z\n")
        code, out = run(capsys, ["lint", str(f), "--from", "java",
                                 "--to", "javascript"])
        assert code == 0
        assert out.count("warning") == 2
        assert all(line.startswith(f"{f}:2:") for line in out.splitlines())


class TestDetect:
    def test_validated_exponential(self, capsys):
        code, out = run(capsys, ["detect", "(a+)+$", "--validate",
                                 "--engine", "slow"])
        assert code == 0
        record = json.loads(out.splitlines()[0])
        assert record["verdict"] == "exponential"
        assert record["validation"]["family"] == "exponential-confirmed"

    def test_fast_engine(self, capsys):
        code, out = run(capsys, ["detect", "(a+)+$", "--validate",
                                 "--engine", "fast"])
        record = json.loads(out.splitlines()[0])
        assert record["validation"]["family"] == "linear-observed"

    def test_medium_engine_defended(self, capsys):
        code, out = run(capsys, ["detect", "(a+)+$", "--validate",
                                 "--engine", "medium"])
        record = json.loads(out.splitlines()[0])
        assert record["validation"]["family"] in ("defended",
                                                  "exponential-confirmed")

    def test_parse_error_reported(self, capsys):
        code, out = run(capsys, ["detect", "a{3,2}"])
        assert code == 0
        assert "error" in json.loads(out.splitlines()[0])


class TestGenInputs:
    def test_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.bin"
        b = tmp_path / "b.bin"
        main(["gen-inputs", "(a|b)+c", "--count", "50", "--seed", "9",
              "-o", str(a)])
        main(["gen-inputs", "(a|b)+c", "--count", "50", "--seed", "9",
              "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()
        header = json.loads(a.read_bytes().split(b"\n", 1)[0])
        assert header["seed"] == 9


class TestDifftest:
    def test_internal_subjects_no_witnesses(self, tmp_path, capsys):
        summary = tmp_path / "summary.csv"
        code, out = run(capsys, ["difftest", "(a|b)+c", "--count", "30",
                                 "--seed", "3", "--summary", str(summary)])
        assert code == 0
        assert out.strip() == ""  # internal engines agree by design
        assert summary.read_text().splitlines()[0] == (
            "subject_a,subject_b,match,substring,capture")


class TestCorpusCommands:
    def test_extract_then_reuse(self, tmp_path, capsys):
        src = tmp_path / "mod-a"
        src.mkdir()
        (src / "one.js").write_text("var a = /[\\w\\-]+\\@([^:]+):/;")
        code, out = run(capsys, ["extract", str(src), "--lang", "js-like",
                                 "--registry", "npm-like"])
        assert code == 0
        assert out.splitlines()[0] == "registry,module,file,line,pattern_b64"
        assert len(out.splitlines()) == 2

    def test_reuse_report_fixture(self, tmp_path, capsys):
        shared = r"[\w\-]+\@([^:]+):"
        corpus = [
            CorpusEntry(shared, "npm-like", "m1", "f1", 1),
            CorpusEntry(shared, "pypi-like", "m2", "f2", 1),
            CorpusEntry(r"\s", "npm-like", "m1", "f1", 2),
        ]
        path = tmp_path / "corpus.csv"
        path.write_text(corpus_to_csv(corpus))
        code, out = run(capsys, ["reuse-report", str(path), "--min-len", "15",
                                 "--format", "json"])
        assert code == 0
        record = json.loads(out)
        assert record["modules"]["npm-like/m1"] == ["inter"]
        assert record["modules"]["pypi-like/m2"] == ["inter"]


class TestReport:
    def test_witness_report_csv(self, tmp_path, capsys):
        log = tmp_path / "witnesses.jsonl"
        log.write_text(json.dumps({
            "regex": "r", "input": "i", "kind": "match",
            "subjects": {"x": {"matched": True, "span": [0, 1], "captures": []},
                         "y": {"matched": False, "span": None, "captures": []}},
            "causes": [],
        }) + "\n")
        code, out = run(capsys, ["report", str(log)])
        assert code == 0
        assert "x,y,1,0,0" in out

    def test_verdict_report(self, tmp_path, capsys):
        log = tmp_path / "verdicts.jsonl"
        log.write_text(json.dumps({"pattern": "(a+)+$", "verdict": "exponential",
                                   "validation": {"family": "exponential-confirmed"}})
                       + "\n")
        code, out = run(capsys, ["report", str(log), "--format", "json"])
        record = json.loads(out)
        assert record["verdicts"]["exponential"] == 1
        assert record["confirmed"]["exponential-confirmed"] == 1


def test_env_var_precedence(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("REGEXPASSPORT_SEED", "77")
    out1 = tmp_path / "x.bin"
    main(["gen-inputs", "ab", "-o", str(out1)])
    header = json.loads(out1.read_bytes().split(b"\n", 1)[0])
    assert header["seed"] == 77
    # an explicit flag beats the environment
    out2 = tmp_path / "y.bin"
    main(["gen-inputs", "ab", "--seed", "5", "-o", str(out2)])
    header = json.loads(out2.read_bytes().split(b"\n", 1)[0])
    assert header["seed"] == 5
