import json

import pytest

from pppkit.cli import run

KINDS = ["pigeonhole", "collision", "blichfeldt", "csis", "weakcsis", "minkowski", "dlog"]


def gen(tmp_path, kind, seed=0, *extra):
    path = tmp_path / f"{kind}-{seed}.json"
    assert run(["gen", "--problem", kind, "--seed", str(seed), "--out", str(path), *extra]) == 0
    return path


@pytest.mark.parametrize("kind", KINDS)
def test_gen_solve_verify(tmp_path, kind, capsys):
    extra = ["--max-prime", "61"] if kind == "dlog" else []
    inst = gen(tmp_path, kind, 3, *extra)
    sol = tmp_path / "sol.json"
    assert run(["solve", "--in", str(inst), "--out", str(sol)]) == 0
    assert run(["verify", "--in", str(inst), "--solution", str(sol)]) == 0
    assert capsys.readouterr().out.strip().endswith("accept")


def test_gen_is_deterministic(tmp_path):
    a = gen(tmp_path, "csis", 7).read_text()
    b = (tmp_path / "again.json")
    assert run(["gen", "--problem", "csis", "--seed", "7", "--out", str(b)]) == 0
    assert a == b.read_text()


def test_tampered_solution_is_rejected(tmp_path, capsys):
    inst = gen(tmp_path, "pigeonhole", 1, "--n", "3")
    sol = tmp_path / "sol.json"
    run(["solve", "--in", str(inst), "--out", str(sol)])
    data = json.loads(sol.read_text())
    if data["solution"] == "preimage":
        data["x"][0] ^= 1
    else:
        data["y"] = data["x"]
    sol.write_text(json.dumps(data))
    assert run(["verify", "--in", str(inst), "--solution", str(sol)]) == 1
    assert "reject" in capsys.readouterr().out


def test_bundle_closure(tmp_path):
    inst = gen(tmp_path, "pigeonhole", 2, "--n", "3")
    bundle = tmp_path / "bundle.json"
    assert run(["reduce", "--in", str(inst), "--from", "pigeonhole", "--to", "csis", "--ell", "3", "--out", str(bundle)]) == 0
    data = json.loads(bundle.read_text())
    assert set(data) == {"reduction", "source", "target", "layout"}
    assert data["target"]["problem"] == "csis"
    sol = tmp_path / "sol.json"
    assert run(["solve", "--in", str(bundle), "--out", str(sol)]) == 0
    assert run(["verify", "--in", str(bundle), "--solution", str(sol)]) == 0
    target = tmp_path / "target.json"
    target.write_text(json.dumps(data["target"]))
    assert run(["solve", "--in", str(target), "--out", str(tmp_path / "tsol.json")]) == 0
    assert run(["verify", "--in", str(target), "--solution", str(tmp_path / "tsol.json")]) == 0


@pytest.mark.parametrize(
    "reduction",
    [
        "pigeonhole_to_csis",
        "csis_to_pigeonhole",
        "pigeonhole_to_blichfeldt",
        "blichfeldt_to_pigeonhole",
        "collision_shrink",
        "collision_to_weakcsis",
        "weakcsis_to_collision",
        "minkowski_to_blichfeldt",
        "dlog_to_pigeonhole",
    ],
)
def test_roundtrip_command(reduction, capsys, tmp_path):
    out = tmp_path / "rt.json"
    assert run(["roundtrip", "--reduction", reduction, "--seed", "4", "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == f"{reduction}: accept"
    assert json.loads(out.read_text())["accepted"] is True


def test_malformed_input_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["solve", "--in", str(bad)]) == 2
    bad.write_text(json.dumps({"problem": "pigeonhole", "payload": {}}))
    assert run(["solve", "--in", str(bad)]) == 2
    assert run(["gen", "--problem", "collision", "--n", "2", "--m", "5"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["solve"]) == 2


def test_budget_exit_code(tmp_path):
    inst = gen(tmp_path, "pigeonhole", 0, "--n", "12", "--gates", "20")
    assert run(["solve", "--in", str(inst), "--budget", "1024"]) == 3


def test_hash_commands(tmp_path, capsys):
    assert run(["hash", "eval", "--example", "--x", "101"]) == 0
    assert capsys.readouterr().out.strip() == "10"
    key = tmp_path / "key.json"
    assert run(["hash", "keygen", "--k", "9", "--ell", "2", "--d", "2", "--r", "3", "--seed", "5", "--out", str(key)]) == 0
    out = tmp_path / "attack.json"
    assert run(["hash", "attack", "--key", str(key), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["valid"] is True
    assert run(["hash", "keygen", "--k", "4", "--ell", "2", "--r", "2"]) == 2
    assert run(["hash", "eval", "--example", "--x", "12"]) == 2
