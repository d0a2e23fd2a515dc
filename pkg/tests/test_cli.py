import numpy as np

from gfdec.bench import CSV_HEADER
from gfdec.cli import main

from conftest import code_path


def test_ber_requires_seed(capsys, tmp_path):
    rc = main(["ber", "--code", code_path("repetition2.alist"), "--trials", "4"])
    assert rc == 2
    assert "--seed is required" in capsys.readouterr().err


def test_ber_writes_csv_to_stdout(capsys):
    rc = main([
        "ber", "--code", code_path("96.33.964.alist"), "--decoder", "gdbf",
        "--snr", "3,5", "--trials", "200", "--seed", "7",
    ])
    assert rc == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("gdbf,3,200,")
    assert lines[2].startswith("gdbf,5,200,")
    assert "snr=3" in captured.err


def test_ber_flags_override_config_file(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        f"code={code_path('96.33.964.alist')}\n"
        "decoder=gdbf\nsnr_db=3\ntrials=100\nseed=1\n"
    )
    out = tmp_path / "r.csv"
    rc = main(["ber", "--config", str(cfg), "--seed", "9", "--output", str(out)])
    assert rc == 0
    text = out.read_text()
    assert text.startswith(CSV_HEADER + "\n")
    assert "\ngdbf,3,100," in text
    # same sweep via flags alone reproduces the file byte for byte
    main([
        "ber", "--code", code_path("96.33.964.alist"), "--decoder", "gdbf",
        "--snr", "3", "--trials", "100", "--seed", "9",
    ])
    assert capsys.readouterr().out == text


def test_ber_rejects_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("code=x\nbogus=1\n")
    rc = main(["ber", "--config", str(cfg), "--seed", "1"])
    assert rc == 2
    assert "line 2: unknown key 'bogus'" in capsys.readouterr().err


def test_diag_writes_tables(capsys, tmp_path):
    rc = main([
        "diag", "--code", code_path("repetition2.alist"), "--seed", "3",
        "--snr", "4", "--alpha", "1", "--beta", "1",
        "--outdir", str(tmp_path), "--times", "0.1,1",
    ])
    assert rc == 0
    captured = capsys.readouterr()
    printed = captured.out.splitlines()
    assert len(printed) == 4
    for p in printed:
        assert p.startswith(str(tmp_path))
    assert (tmp_path / "energy.tsv").exists()
    assert (tmp_path / "trajectory.tsv").exists()
    assert "transmitted word: " in captured.err


def test_circuit_dot_to_stdout_matches_library(capsys, worked_3x6):
    rc = main(["circuit", "--code", code_path("example_3x6.alist")])
    assert rc == 0
    out = capsys.readouterr().out
    from gfdec.circuit import build_circuit_graph, emit_dot

    assert out == emit_dot(build_circuit_graph(worked_3x6))


def test_circuit_netlist_to_file(capsys, tmp_path):
    target = tmp_path / "net.txt"
    rc = main([
        "circuit", "--code", code_path("repetition2.alist"),
        "--format", "netlist", "--output", str(target),
    ])
    assert rc == 0
    assert "integrator INT_2 V_2" in target.read_text()


def test_validate_reports_code_stats(capsys):
    rc = main(["validate", "--code", code_path("96.33.964.alist")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "n=96 m=48 edges=288 rank=48 k=48 rate=0.5" in out


def test_validate_reports_config(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("code=c.alist\nsnr_db=2,4\n")
    rc = main(["validate", "--config", str(cfg)])
    assert rc == 0
    out = capsys.readouterr().out
    assert f"{cfg}: ok" in out
    assert "snr_db=2,4" in out


def test_validate_needs_an_argument(capsys):
    rc = main(["validate"])
    assert rc == 2
    assert "nothing to validate" in capsys.readouterr().err


def test_missing_alist_file_is_reported(capsys):
    rc = main(["validate", "--code", "/no/such/file.alist"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
