import json

import pytest

from bsfe import cli


def run(args, tmp_path, name="out.jsonl"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--out", str(out)])
    lines = out.read_text().splitlines() if out.exists() else []
    return code, [json.loads(x) for x in lines], out


def results(recs):
    return [r for r in recs if r.get("ev") == "result"]


def test_run_ot_reference(tmp_path):
    code, recs, _ = run(["run-ot", "--l", "8", "--s", "32", "--seed", "7"], tmp_path)
    assert code == 0
    assert any(r.get("qubits") == 384 or r.get("m") == 384 for r in recs)


def test_every_line_is_an_event(tmp_path):
    _, recs, _ = run(["run-otp", "--circuit", "mux", "--x", "011"], tmp_path)
    assert recs and all({"v", "t", "ev"} <= r.keys() for r in recs)
    assert all(r["correct"] for r in results(recs))


@pytest.mark.parametrize("args", [
    ["run-bqs-fe", "--circuit", "and", "--x", "11"],
    ["run-cbqs-fe", "--x", "1011"],
    ["run-bcs-fe", "--circuit", "xor", "--x", "10"],
    ["run-wgb", "--circuit", "and"],
])
def test_scenarios_succeed(args, tmp_path):
    code, recs, _ = run(args, tmp_path)
    assert code == 0 and results(recs) and all(r["correct"] for r in results(recs))


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nl = 4\ns=8  # trailing\nseed=3\n")
    _, a, _ = run(["run-ot", "--config", str(cfg)], tmp_path, "a")
    _, b, _ = run(["run-ot", "--l", "4", "--s", "8", "--seed", "3"], tmp_path, "b")
    _, c, _ = run(["run-ot", "--config", str(cfg), "--l", "6"], tmp_path, "c")
    assert a == b and a != c


def test_unknown_key_is_usage_error(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("bogus=1\n")
    assert run(["run-ot", "--config", str(cfg)], tmp_path)[0] == 1
    assert cli.main(["run-ot", "--nope", "1"]) == 1
    assert cli.main(["attack"]) == 1
    assert cli.main(["run-ot", "--l", "x"]) == 1


def test_violation_exit_code(tmp_path):
    code, _, _ = run(["attack", "ot-sender", "--strategy", "full-storage", "--trials", "50",
                      "--ledger", "enforce"], tmp_path)
    assert code == 2


def test_same_seed_same_bytes(tmp_path):
    args = ["attack", "bcs-forget", "--trials", "5", "--seed", "9"]
    _, _, a = run(args, tmp_path, "a")
    _, _, b = run(args, tmp_path, "b")
    assert a.read_bytes() == b.read_bytes()


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BSFE_SEED", "5")
    _, _, a = run(["run-ot"], tmp_path, "a")
    _, _, b = run(["run-ot", "--seed", "5"], tmp_path, "b")
    assert a.read_bytes() == b.read_bytes()


def test_help_exits_cleanly(capsys):
    assert cli.main(["--help"]) == 0
    assert "selftest" in capsys.readouterr().out
