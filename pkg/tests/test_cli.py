import filecmp
import subprocess
import sys

import pytest

from docrec.cli import run

GEN = ["--n-docs", "60", "--n-topics", "6", "--n-sessions", "600", "--n-users", "50"]


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def corpus(tmp_path):
    out = tmp_path / "corpus"
    assert run(["gen", "--seed", "7", "--out", str(out), "--burst", *GEN]) == 0
    return out


def test_gen_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run(["gen", "--seed", "7", "--out", str(tmp_path / d), *GEN]) == 0
    cmp = filecmp.dircmp(tmp_path / "a", tmp_path / "b")
    assert sorted(cmp.common_files) == ["access.log", "citations.tsv", "meta.tsv", "oracle.tsv"]
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", cmp.common_files, shallow=False)
    assert mismatch == [] and errors == []


def test_count_missing_metadata(tmp_path, capsys):
    log = write(tmp_path / "log", "1000\tc1\tpaperA\n1010\tc1\tghostDoc\n")
    meta = write(tmp_path / "meta", "paperA\t1969-12-01\n")
    out = tmp_path / "idx"
    assert run(["count", "--log", log, "--meta", meta, "--out", str(out)]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "ghostDoc" in err[0]
    assert not out.exists()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["log", "meta"]


def test_recommend_two_partners(tmp_path, capsys):
    idx = write(tmp_path / "idx", "#coindex\tkind=codownload\nX\tpaperA\t1\npaperA\tpaperB\t4\npaperC\tpaperD\t2\n")
    out = tmp_path / "recs.tsv"
    assert run(["recommend", "--index", idx, "--doc", "paperA", "--k", "100", "--out", str(out)]) == 0
    assert out.read_text() == "paperA\t1\tpaperB\t4\npaperA\t2\tX\t1\n"
    assert run(["recommend", "--index", idx, "--doc", "paperA"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_corrupt_index_exit_1(tmp_path, capsys):
    idx = write(tmp_path / "idx", "#coindex\tkind=codownload\nA\tB\t0\n")
    assert run(["recommend", "--index", idx, "--doc", "A"]) == 1
    assert "count must be a positive integer" in capsys.readouterr().err


def test_bad_log_line_no_partial_output(tmp_path, capsys):
    log = write(tmp_path / "log", "1000\tc1\tA\nbroken\n")
    out = tmp_path / "sessions.tsv"
    assert run(["ingest", "--log", log, "--out", str(out)]) == 1
    assert "line 2" in capsys.readouterr().err
    assert sorted(p.name for p in tmp_path.iterdir()) == ["log"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["recommend", "--index", "x"],
        ["count", "--out", "x", "--k", "3"],
        ["count", "--out", "x", "--cutoff", "2005-13-01"],
        ["recommend", "--index", "x", "--doc", "A", "--k", "0"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2


def test_missing_role_is_usage_error(tmp_path):
    assert run(["count", "--out", str(tmp_path / "i")]) == 2
    assert run(["count", "--mode", "cocitation", "--out", str(tmp_path / "i")]) == 2
    assert not (tmp_path / "i").exists()


def test_missing_input_file_exit_1(tmp_path):
    assert run(["recommend", "--index", str(tmp_path / "nope"), "--doc", "A"]) == 1


def test_ingest_session_dump(tmp_path):
    log = write(tmp_path / "log", "0\tc2\tB\n0\tc1\tZ\n10\tc1\tA\n5000\tc1\tB\n")
    out = tmp_path / "s"
    assert run(["ingest", "--log", log, "--out", str(out)]) == 0
    assert out.read_text() == "c1\t0\t10\tA,Z\nc1\t5000\t5000\tB\nc2\t0\t0\tB\n"


def test_count_respects_flags(tmp_path, corpus):
    base = ["count", "--log", str(corpus / "access.log"), "--meta", str(corpus / "meta.tsv")]
    assert run([*base, "--out", str(tmp_path / "deb")]) == 0
    assert run([*base, "--no-debias", "--out", str(tmp_path / "raw")]) == 0
    assert run([*base, "--no-debias", "--cutoff", "none", "--out", str(tmp_path / "all")]) == 0
    sizes = [len((tmp_path / n).read_text().splitlines()) for n in ("deb", "raw", "all")]
    assert sizes[0] <= sizes[1] <= sizes[2]
    assert (tmp_path / "deb").read_text().startswith("#coindex\tkind=codownload\n")


def test_evaluate_outputs(tmp_path, corpus):
    idx = tmp_path / "cd.idx"
    cidx = tmp_path / "cc.idx"
    assert run(["count", "--log", str(corpus / "access.log"), "--meta", str(corpus / "meta.tsv"), "--out", str(idx)]) == 0
    assert run(["count", "--mode", "cocitation", "--cite", str(corpus / "citations.tsv"), "--out", str(cidx)]) == 0
    ev = tmp_path / "ev"
    argv = ["evaluate", "--index", str(idx), "--meta", str(corpus / "meta.tsv"), "--cite", str(corpus / "citations.tsv"),
            "--log", str(corpus / "access.log"), "--out", str(ev)]
    assert run(argv) == 0
    assert sorted(p.name for p in ev.iterdir()) == ["coverage.csv", "map_over_age.csv", "recs_over_age.csv"]
    assert (ev / "map_over_age.csv").read_text().startswith("bin,value,n\n")
    cov = (ev / "coverage.csv").read_text().splitlines()
    assert cov[0] == "rank,max_count" and len(cov) == 61
    ev2 = tmp_path / "ev2"
    assert run(["evaluate", "--index", str(cidx), "--meta", str(corpus / "meta.tsv"), "--cite",
                str(corpus / "citations.tsv"), "--out", str(ev2)]) == 0
    assert (ev2 / "recs_over_age.csv").exists()
    assert run(["evaluate", "--index", str(cidx), "--mode", "codownload", "--meta", str(corpus / "meta.tsv"),
                "--out", str(tmp_path / "ev3")]) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "docrec", "recommend", "--index", str(tmp_path / "none"), "--doc", "A"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stderr.count("\n") == 1
