import json
import subprocess
import sys

import pytest

from simpell import cli


def _strip(rec):
    rec = dict(rec)
    rec.pop("timings_ms")
    return rec


def _run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_verify_b24_json(capsys):
    code, out = _run(capsys, "verify", "--b", "24")
    rec = json.loads(out.out)
    assert code == 0
    assert rec["schema"] == 1 and rec["status"] == "unique_certified"
    assert rec["epsilon"] == {"u": "5", "v": "1", "denom": 1, "norm": 1}
    assert abs(int(rec["c_m"]) / 3.345e14 - 1) < 0.05
    xs = [c["x"] for c in rec["candidates"] if c["skipped"] is None]
    assert xs[:2] == ["10", "99"]
    for r in rec["reductions"]:
        assert isinstance(r["q_k"], str) and isinstance(r["kappa"], str)
        assert isinstance(r["bound"], int)


def test_verify_square_and_text(capsys):
    code, out = _run(capsys, "verify", "--b", "4", "--json")
    assert code == 0 and "square radicand" in json.loads(out.out)["reason"]
    code, out = _run(capsys, "verify", "--b", "2", "--text")
    assert code == 0 and "unique_certified" in out.out and "kept x: 2, 12, 70" in out.out


def test_verify_not_certified_exit(capsys):
    code, out = _run(capsys, "--precision-bits", "64", "--precision-ceiling-bits", "64",
                     "verify", "--b", "24")
    assert code == 3
    assert json.loads(out.out)["status"] == "not_certified"


def test_usage_errors(capsys):
    assert cli.main(["verify"]) == 1
    assert cli.main(["verify", "--b", "0"]) == 1
    assert cli.main(["verify", "--b", "x"]) == 1
    assert cli.main(["sweep", "--from", "5", "--to", "2"]) == 1
    assert cli.main(["frobnicate"]) == 1


def test_global_flags_either_side(capsys):
    a = cli.main(["--seed", "3", "verify", "--b", "3"])
    ra = json.loads(capsys.readouterr().out)
    b = cli.main(["verify", "--b", "3", "--seed", "3"])
    rb = json.loads(capsys.readouterr().out)
    assert a == b == 0 and _strip(ra) == _strip(rb)


def test_singleton_sweep_equals_verify(tmp_path, capsys):
    out = tmp_path / "one.jsonl"
    assert cli.main(["sweep", "--from", "2", "--to", "2", "--out", str(out)]) == 0
    swept = json.loads(out.read_text())
    capsys.readouterr()
    cli.main(["verify", "--b", "2"])
    assert _strip(swept) == _strip(json.loads(capsys.readouterr().out))


def test_sweep_summary_and_squares(tmp_path, capsys):
    out = tmp_path / "s.jsonl"
    code = cli.main(["sweep", "--from", "1", "--to", "10", "--out", str(out)])
    summary = json.loads(capsys.readouterr().out)
    assert code == 0
    assert summary["records"] == 10 and summary["counts"]["unique_certified"] == 10
    assert summary["max_ms"] >= summary["mean_ms"] > 0
    statuses = {json.loads(line)["b"]: json.loads(line) for line in out.read_text().splitlines()}
    assert set(statuses) == set(range(1, 11))
    assert "square" in statuses[9]["reason"] and "square" in statuses[4]["reason"]


def _sorted_records(path):
    recs = [_strip(json.loads(line)) for line in path.read_text().splitlines()]
    return sorted(recs, key=lambda r: r["b"])


def test_resume_after_interruption(tmp_path, capsys):
    full = tmp_path / "full.jsonl"
    cli.main(["sweep", "--from", "2", "--to", "14", "--out", str(full)])

    part = tmp_path / "part.jsonl"
    ckpt = tmp_path / "part.ckpt"
    cli.main(["sweep", "--from", "2", "--to", "14", "--out", str(part), "--checkpoint", str(ckpt)])
    # simulate a kill: keep five whole records plus a torn sixth line, and
    # a checkpoint that lags behind the JSONL
    lines = part.read_text().splitlines(keepends=True)
    part.write_text("".join(lines[:5]) + lines[5][:17])
    state = json.loads(ckpt.read_text())
    state["completed"] = state["completed"][:3]
    ckpt.write_text(json.dumps(state))

    code = cli.main(["sweep", "--from", "2", "--to", "14", "--out", str(part), "--checkpoint", str(ckpt)])
    assert code == 0
    assert _sorted_records(part) == _sorted_records(full)
    assert len(part.read_text().splitlines()) == 13
    assert json.loads(ckpt.read_text())["completed"] == list(range(2, 15))


def test_resume_rejects_other_config(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    assert cli.main(["sweep", "--from", "2", "--to", "3", "--out", str(out)]) == 0
    assert cli.main(["--seed", "9", "sweep", "--from", "2", "--to", "3", "--out", str(out)]) == 1
    assert cli.main(["sweep", "--from", "2", "--to", "4", "--out", str(out)]) == 1
    assert "different configuration" in capsys.readouterr().err


def test_existing_output_without_checkpoint(tmp_path, capsys):
    out = tmp_path / "x.jsonl"
    out.write_text("{}\n")
    assert cli.main(["sweep", "--from", "2", "--to", "3", "--out", str(out)]) == 1


def test_parallel_matches_serial(tmp_path, capsys):
    serial, parallel = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert cli.main(["sweep", "--from", "2", "--to", "16", "--out", str(serial)]) == 0
    assert cli.main(["sweep", "--from", "2", "--to", "16", "--jobs", "3", "--out", str(parallel)]) == 0
    assert _sorted_records(serial) == _sorted_records(parallel)


def test_sweep_not_certified_exit(tmp_path, capsys):
    out = tmp_path / "n.jsonl"
    code = cli.main(["--precision-bits", "64", "--precision-ceiling-bits", "64",
                     "sweep", "--from", "2", "--to", "3", "--out", str(out)])
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simpell", "verify", "--b", "3"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["b"] == 3


@pytest.mark.parametrize("argv", [["--help"], ["verify", "--help"]])
def test_help_exits_zero(argv, capsys):
    assert cli.main(argv) == 0
