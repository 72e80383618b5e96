"""Command-line entry points."""

import pytest

from src.cli.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

TAMPERED = '{"N": 37, "a": 27, "type": "II", "m": 3, "n": 4, "g": 10, "gamma": [0, 1, 4, 24]}\n'


def test_census(capsys):
    assert main(["census", "3", "10", "12"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "total: 104175" in out
    assert "cycles of length 10: 90360" in out


def test_census_tracking(capsys):
    assert main(["census", "--tracking"]) == EXIT_OK
    assert "T(C4):" in capsys.readouterr().out


def test_census_needs_all_dimensions():
    assert main(["census", "3", "10"]) == EXIT_USAGE


def test_bound(capsys):
    assert main(["bound", "4", "7"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "classic:   253" in out
    assert "corrected: 233" in out
    assert "N=247 is below the classic bound" in out


def test_estimate(capsys):
    assert main(["estimate", "3", "10", "10", "301"]) == EXIT_OK
    assert "13815 constraints" in capsys.readouterr().out


def test_sieve(capsys):
    assert main(["sieve", "--N", "37", "--m", "3"]) == EXIT_OK
    assert "a=11 type=II qualified" in capsys.readouterr().out
    assert main(["sieve", "--N", "36", "--m", "3"]) == EXIT_FAIL


def test_search_appends_record(tmp_path, capsys):
    out = tmp_path / "found.jsonl"
    argv = ["search", "--m", "3", "--n", "4", "--N", "37", "--girth", "10", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert '"status": "found"' in capsys.readouterr().out
    assert '"N": 37' in out.read_text(encoding="utf-8")


def test_search_not_found():
    argv = ["search", "--m", "3", "--n", "4", "--N", "13", "--girth", "10"]
    assert main(argv) == EXIT_FAIL


def test_search_rejects_bad_effort_vector():
    argv = ["search", "--m", "3", "--n", "4", "--N", "37", "--girth", "10", "--G", "1,2"]
    assert main(argv) == EXIT_USAGE


def test_missing_arguments_exit_with_usage():
    with pytest.raises(SystemExit) as excinfo:
        main(["search"])
    assert excinfo.value.code == EXIT_USAGE


def test_verify(capsys):
    assert main(["verify", "--m", "3", "--n", "4", "--girth", "10"]) == EXIT_OK
    assert "1 passed, 0 failed" in capsys.readouterr().out


def test_verify_tampered_corpus(tmp_path, capsys):
    corpus = tmp_path / "tampered.jsonl"
    corpus.write_text(TAMPERED, encoding="utf-8")
    assert main(["--corpus", str(corpus), "verify"]) == EXIT_FAIL
    assert "FAIL" in capsys.readouterr().out


def test_verify_bad_corpus(tmp_path):
    corpus = tmp_path / "bad.jsonl"
    corpus.write_text("not json\n", encoding="utf-8")
    assert main(["--corpus", str(corpus), "verify"]) == EXIT_USAGE
    assert main(["--corpus", str(tmp_path / "missing.jsonl"), "verify"]) == EXIT_USAGE


def test_export_toy(tmp_path):
    out = tmp_path / "toy.alist"
    assert main(["export", "--N", "3", "--toy", "1", "1", "--out", str(out)]) == EXIT_OK
    assert out.read_bytes().splitlines()[0] == b"12 12"


def test_export_record(capsys):
    argv = ["export", "--m", "3", "--N", "37", "--a", "27", "--gamma", "0,1,3,24"]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "148 111"


def test_export_needs_multipliers():
    assert main(["export", "--N", "37", "--a", "27"]) == EXIT_USAGE


def test_sievemap(tmp_path):
    out = tmp_path / "map.pgm"
    argv = ["--workers", "1", "sievemap", "--m", "3", "--to", "250", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert out.read_text(encoding="ascii").startswith("P2\n100 3\n255\n")
