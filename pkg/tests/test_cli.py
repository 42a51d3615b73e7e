import subprocess
import sys
from pathlib import Path

import pytest

from chaoscope.bss import shipped_machines
from chaoscope.cli import main


def run_cli(args):
    return main(list(args))


def test_decide_output_format(capsys):
    assert run_cli(["decide", "--a", "1.5"]) == 0
    out = capsys.readouterr().out
    assert out == "POSITIVE c=1.4011552 margin=0.0001\n"
    assert run_cli(["decide", "--a", "1.3"]) == 0
    assert capsys.readouterr().out.startswith("ZERO c=1.4011552")


def test_scan_csv_columns_and_golden_stability(tmp_path, capsys):
    out1 = tmp_path / "scan1.csv"
    out2 = tmp_path / "scan2.csv"
    base = ["scan", "--family", "quadratic", "--interval", "1.4", "2.0",
            "--grid", "120", "--budget", "2000", "--cycles-budget", "8000"]
    assert run_cli(base + ["--out", str(out1)]) == 0
    assert run_cli(base + ["--out", str(out2)]) == 0
    data1 = out1.read_bytes()
    assert data1 == out2.read_bytes()
    header = data1.decode().splitlines()[0]
    assert header == "a,exp_estimate,class,cycle_period,entropy_lap"
    assert len(data1.decode().strip().splitlines()) == 121


def test_scan_matches_across_thread_counts(tmp_path):
    out1 = tmp_path / "t1.csv"
    out2 = tmp_path / "t2.csv"
    base = ["scan", "--interval", "1.5", "1.9", "--grid", "64",
            "--budget", "2000", "--cycles-budget", "5000"]
    assert run_cli(["--threads", "1"] + base + ["--out", str(out1)]) == 0
    assert run_cli(["--threads", "2"] + base + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_scan_raster_and_fragmentation(tmp_path):
    out = tmp_path / "scan.csv"
    ppm = tmp_path / "bif.ppm"
    frag = tmp_path / "frag.txt"
    assert run_cli([
        "scan", "--interval", "1.4", "2.0", "--grid", "200", "--budget", "2000",
        "--cycles-budget", "5000", "--out", str(out), "--raster", str(ppm),
        "--frag-resolutions", "100", "1000", "--frag-out", str(frag),
    ]) == 0
    head = ppm.read_text().splitlines()
    assert head[0] == "P3"
    cols, rows = map(int, head[1].split())
    assert cols == 200 and rows == 400
    report = frag.read_text()
    assert "positive runs" in report
    for name in shipped_machines():
        assert f"machine {name}:" in report


def test_henon_scan(tmp_path):
    out = tmp_path / "h.csv"
    assert run_cli([
        "scan", "--family", "henon", "--interval", "1.0", "1.4", "--grid", "5",
        "--b", "0.3", "--budget", "2000", "--out", str(out),
    ]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "a,b,exp_estimate,class"
    assert len(lines) == 6


def test_srb_csv(tmp_path, capsys):
    out = tmp_path / "hist.csv"
    assert run_cli(["srb", "--a", "2.0", "--iterations", "100000", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "bin_lo,bin_hi,mass"
    assert len(lines) == 101
    assert "birkhoff_identity=" in capsys.readouterr().out


def test_cascade_command(capsys, tmp_path):
    out = tmp_path / "cascade.csv"
    assert run_cli(["cascade", "--k-max", "6", "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "c_estimate=" in stdout
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "k,period,a"
    assert lines[1] == "1,2,1"


def test_bss_paths_command(capsys):
    path = shipped_machines()["positive"]
    assert run_cli(["bss", "paths", str(path), "--depth", "8"]) == 0
    out = capsys.readouterr().out
    assert "-x < 0" in out
    assert "components: 1" in out


def test_bss_run_command(capsys):
    path = shipped_machines()["square"]
    assert run_cli(["bss", "run", str(path), "--input", "3"]) == 0
    assert "outputs=9" in capsys.readouterr().out


def test_bss_components_command(capsys):
    path = shipped_machines()["two_interval"]
    assert run_cli(["bss", "components", str(path), "--depth", "10"]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_entropy_commands(capsys, tmp_path):
    assert run_cli(["entropy", "--a", "2.0", "--n-max", "20"]) == 0
    assert "value=0.69" in capsys.readouterr().out
    pl = tmp_path / "tent.txt"
    pl.write_text("0 0.5 2 0\n0.5 1 -2 2\n")
    assert run_cli(["entropy", "--pl-file", str(pl)]) == 0
    assert "method=markov_spectral" in capsys.readouterr().out


def test_lyapunov_command(capsys):
    assert run_cli(["lyapunov", "--a", "2.0", "--n", "2000"]) == 0
    out = capsys.readouterr().out
    assert "class=POSITIVE" in out


def test_computation_error_exit_code(capsys):
    assert run_cli(["bss", "run", "/nonexistent/machine.bss"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "chaoscope", "no-such-command"],
        capture_output=True,
    )
    assert proc.returncode == 2


def test_no_partial_files_on_failure(tmp_path, monkeypatch):
    # force the final rename to fail and confirm nothing is left behind
    import chaoscope.cli as cli_mod

    target = tmp_path / "out.csv"

    def boom(src, dst):
        raise OSError("simulated rename failure")

    monkeypatch.setattr(cli_mod.os, "replace", boom)
    rc = run_cli(["cascade", "--k-max", "4", "--out", str(target)])
    assert rc == 1
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []
