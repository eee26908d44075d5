import json
import subprocess
import sys
from pathlib import Path

import pytest

from djkm.cli import main, parse_ring_input
from djkm.ring import RingElement

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_families_csv(capsys):
    code, out, _ = run(capsys, "families", "--which", "-4", "--kmax", "10", "--format", "csv")
    assert code == 0
    rows = {line.split(",")[0]: line for line in out.splitlines()}
    assert rows["k"].startswith("k,c0,c1")
    assert rows["2"].split(",")[1:3] == ["0", "4/5"]


def test_families_json(capsys):
    code, out, _ = run(capsys, "families", "--which", "-2", "--kmax", "4", "--format", "json")
    assert code == 0 and json.loads(out)["entries"]["2"] == [[1, 5]]


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "t^1 u dt")
    assert code == 0 and json.loads(out) == {"w-3": "1/2", "w-1": "c/2"}
    code, out, _ = run(capsys, "reduce", "t^2,u", "--c", "5")
    assert json.loads(out) == {"w-2": "1/5", "w-4": "4"}


def test_reduce_json_input(capsys):
    f = RingElement.tu(1).to_json()
    code, out, _ = run(capsys, "reduce", json.dumps(f))
    assert json.loads(out) == {"w-3": "1/2", "w-1": "c/2"}


def test_parse_ring_input():
    assert parse_ring_input("t^-3") == RingElement.t(-3)
    assert parse_ring_input("u") == RingElement.tu(0)
    assert parse_ring_input("t u dt") == RingElement.tu(1)


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "h1:0", "e1:0")
    assert code == 0 and json.loads(out) == {"e:0": "2", "e:2": "-4c", "e:4": "2"}


@pytest.mark.parametrize(
    "argv",
    [
        ("bracket", "q:1", "e:0"),
        ("reduce", "nonsense"),
        ("verify-algebra", "--window", "0"),
        ("verify-fock", "--c0", "1"),
        ("verify-fock", "--params", "1,2"),
        ("snapshot", "families", "--golden", "/nonexistent/x.json"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["families", "--which", "7"])
    assert exc.value.code == 2


def test_verify_algebra_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify-algebra", "--window", "2", "--report", str(report))
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == 1 and doc["counts"]["failed"] == 0 and doc["violations"] == []
    assert doc["counts"]["checked"] == doc["counts"]["passed"] > 0
    assert json.loads(report.read_text())["counts"] == doc["counts"]


def test_verify_fock_failure_exit_1(capsys, monkeypatch):
    import djkm.realization as real

    original = real.tau_field

    def broken(gen, params, conventions=None):
        f = original(gen, params, conventions)
        return real.ScalarMul(2, f) if gen == "f" else f

    monkeypatch.setattr(real, "tau_field", broken)
    code, out, _ = run(capsys, "verify-fock", "--window", "1", "--c0", "2", "--kappa0", "1", "--r", "0")
    doc = json.loads(out)
    assert code == 1
    assert doc["counts"]["failed"] == len(doc["violations"]) > 0


def test_verify_fock_deterministic(capsys):
    argv = ("verify-fock", "--window", "1", "--c0", "3/5", "--kappa0", "-4", "--params", "5,1,2,3", "--seed", "3")
    docs = []
    for _ in range(2):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        doc = json.loads(out)
        doc.pop("wall_time_s")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_states_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps([{"monomial": [["x", -2, 1]], "v": 1, "coeff": [3, 2]}]))
    code, out, _ = run(capsys, "verify-fock", "--window", "1", "--c0", "2", "--kappa0", "0", "--states", str(path))
    assert code == 0 and json.loads(out)["counts"]["checked"] == 21 * 9 * 4


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "djkm.cfg"
    cfg.write_text("window = 1\nsuites = antisymmetry\n")
    code, out, _ = run(capsys, "verify-algebra", "--config", str(cfg))
    assert json.loads(out)["task"]["window"] == 1
    code, out, _ = run(capsys, "verify-algebra", "--config", str(cfg), "--window", "2")
    assert json.loads(out)["task"]["window"] == 2


@pytest.mark.parametrize(
    "golden,argv",
    [
        ("families_m3_k20.json", ("families", "--which", "-3", "--kmax", "20")),
        ("families_m4_k20.json", ("families", "--which", "-4", "--kmax", "20")),
        ("psi_k30.json", ("psi", "--kmax", "30")),
        ("brackets_w2.json", ("brackets", "--window", "2")),
    ],
)
def test_snapshots_match(capsys, golden, argv):
    code, out, _ = run(capsys, "snapshot", argv[0], "--golden", str(GOLDEN / golden), *argv[1:])
    assert code == 0 and out.startswith("match")


def test_snapshot_mismatch(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text((GOLDEN / "families_m3_k20.json").read_text().replace("35", "36", 1))
    code, out, _ = run(capsys, "snapshot", "families", "--golden", str(bad))
    assert code == 1 and out.startswith("mismatch")


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "djkm.cli", "reduce", "t^1 u dt"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout) == {"w-3": "1/2", "w-1": "c/2"}
