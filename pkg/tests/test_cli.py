import json
import subprocess
import sys

import pytest

from zra import root_atlas as ra
from zra import tables
from zra.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, run_cli

HEADER = b"t0,gamma_lo,gamma_hi,Q,m,K,rhs_bound,residual_eighth_pi,scaled_residual\n"


@pytest.fixture(scope="module")
def small_cache(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "cache.jsonl"
    assert run_cli(["zeros", "--from", "10", "--to", "300", "--tol", "1e-9", "--out", str(path)]) == EXIT_OK
    assert run_cli(["critical", "--cache", str(path), "--to", "40"]) == EXIT_OK
    return path


def test_zeros_to_100(tmp_path, capsys):
    out = tmp_path / "z.jsonl"
    assert run_cli(["zeros", "--from", "10", "--to", "100", "--tol", "1e-8", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("29 zeros")
    data = tables.read_cache(out)
    assert len(data.zeros) == 29 and data.height == 100.0


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for p in (a, b):
        assert run_cli(["zeros", "--to", "120", "--out", str(p)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_parallel_scan_matches_serial(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run_cli(["zeros", "--from", "50", "--to", "400", "--out", str(a)]) == EXIT_OK
    assert run_cli(["zeros", "--from", "50", "--to", "400", "--jobs", "3", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert tables.read_cache(a).zeros[0].index == 11


def test_window_cache_is_rejected_for_sums(tmp_path):
    out = tmp_path / "w.jsonl"
    assert run_cli(["zeros", "--from", "100", "--to", "150", "--out", str(out)]) == EXIT_OK
    assert run_cli(["sums", "--t0", "120", "--cutoff", "10", "--cache", str(out)]) == EXIT_DATA


def test_cache_dir_env_is_honoured(tmp_path, monkeypatch):
    monkeypatch.setenv("ZRA_CACHE_DIR", str(tmp_path / "cachedir"))
    assert run_cli(["zeros", "--to", "30"]) == EXIT_OK
    assert len(tables.read_cache(tmp_path / "cachedir" / "cache.jsonl").zeros) == 3


def test_report_csv(small_cache, tmp_path):
    out = tmp_path / "r.csv"
    assert run_cli(["report", "--format", "csv", "--cache", str(small_cache), "--out", str(out)]) == EXIT_OK
    raw = out.read_bytes()
    assert raw.startswith(HEADER)
    rows = raw.decode().splitlines()[1:]
    assert len(rows) == len(tables.read_cache(small_cache).critical_points) == 5
    first = rows[0].split(",")
    assert float(first[0]) == pytest.approx(17.88258, abs=1e-5)
    assert float(first[6]) == pytest.approx(9.047, abs=1e-3)
    assert float(first[7]) >= 0  # covered: 17.9 + 54.6 < 300
    again = tmp_path / "r2.csv"
    run_cli(["report", "--cache", str(small_cache), "--out", str(again)])
    assert again.read_bytes() == raw


def test_report_requires_critical_points(tmp_path):
    out = tmp_path / "z.jsonl"
    run_cli(["zeros", "--to", "30", "--out", str(out)])
    assert run_cli(["report", "--cache", str(out)]) == EXIT_DATA


def test_sums(small_cache, capsys):
    assert run_cli(["sums", "--t0", "17.882582076977066", "--cache", str(small_cache)]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["cutoff"] == pytest.approx(54.619, abs=1e-3)
    assert payload["value"] > 0
    assert run_cli(["sums", "--t0", "200", "--cache", str(small_cache)]) == EXIT_DATA


def test_verify_small_cache(small_cache, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run_cli(["verify", "--cache", str(small_cache), "--json", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert report["checks"]["interlacing"] is True
    assert report["checks"]["riemann_constant"] is None
    assert "SKIP riemann_constant" in capsys.readouterr().err


def test_verify_from_plain_table(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("14.134725142\n21.022039639\n25.010857580\n30.424876126\n32.935061588\n")
    assert run_cli(["verify", "--table", str(f), "--critical-to", "30"]) == EXIT_OK


def test_verify_failure_exit_code(tmp_path):
    path = tmp_path / "bad.jsonl"
    zeros = ra.find_zeros(10, 60)
    lopsided = ra.CriticalPoint(40.0, 39.99, 4.0e4, 1e-9, 1.0, "max")
    tables.write_cache(zeros, [lopsided], path, height=60)
    assert run_cli(["verify", "--cache", str(path)]) == EXIT_VERIFY


def test_data_errors(tmp_path):
    assert run_cli(["verify", "--cache", str(tmp_path / "missing.jsonl")]) == EXIT_DATA
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"schema_version": 99}\n')
    assert run_cli(["verify", "--cache", str(bad)]) == EXIT_DATA
    empty = tmp_path / "empty.jsonl"
    tables.write_cache([], [], empty)
    assert run_cli(["verify", "--cache", str(empty)]) == EXIT_DATA


def test_usage_errors():
    assert run_cli(["bogus"]) == EXIT_USAGE
    assert run_cli([]) == EXIT_USAGE
    assert run_cli(["zeros", "--from", "50", "--to", "20"]) == EXIT_USAGE
    assert run_cli(["zeros", "--to", "50", "--jobs", "0"]) == EXIT_USAGE
    assert run_cli(["--rs-terms", "9", "zeros", "--to", "50"]) == EXIT_USAGE
    assert run_cli(["report", "--format", "xml"]) == EXIT_USAGE


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "zra.cli", "zeros", "--to", "30", "--out", str(tmp_path / "c.jsonl")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("3 zeros")
    proc = subprocess.run([sys.executable, "-m", "zra.cli", "nope"], capture_output=True, text=True)
    assert proc.returncode == 1
