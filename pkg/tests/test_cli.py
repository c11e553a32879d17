import io
import json

import pytest

from qoshor.cli import EXIT_ERROR, EXIT_NO_FACTORS, EXIT_OK, read_config, run
from qoshor.pipelines import FactoringResult


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_factor_json_three_bit_layout():
    code, out, _ = call("factor", "15", "--method", "shor", "--seed", "7", "--first-register-bits", "3", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["factors"] == [3, 5]
    assert FactoringResult.loads(out).dumps() == out.strip()


def test_gcd_trace_table():
    code, out, _ = call("gcd", "110", "129", "--trace")
    assert code == EXIT_OK
    lines = out.splitlines()
    rows = [line.split() for line in lines[1:9]]
    assert len(rows) == 8 and rows[-1] == ["8", "1", "0"]
    assert lines[-1] == "1"


def test_gcd_json():
    code, out, _ = call("gcd", "110", "129", "--trace", "--json")
    data = json.loads(out)
    assert data["gcd"] == 1 and len(data["trace"]) == 8


def test_order():
    code, out, _ = call("order", "7", "15")
    assert (code, out.strip()) == (EXIT_OK, "4")


def test_classical_prime_is_no_factors():
    code, out, _ = call("factor", "13", "--method", "classical")
    assert code == EXIT_NO_FACTORS
    assert "prime" in out


def test_budget_exhausted_exit_code():
    code, out, _ = call("factor", "33", "--method", "qo", "--idealized", "--max-attempts", "2", "--json")
    assert code == EXIT_NO_FACTORS
    assert json.loads(out)["factors"] is None


def test_domain_errors_exit_one():
    assert call("factor", "9")[0] == EXIT_ERROR
    assert call("order", "6", "15")[0] == EXIT_ERROR
    assert call("gcd", "0", "0")[0] == EXIT_ERROR


def test_usage_error_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["factor", "fifteen"])
    assert exc.value.code == EXIT_ERROR


def test_qo_trace_goes_to_stderr_in_json_mode():
    code, out, err = call("factor", "15", "--method", "qo", "--json", "--trace", "--seed", "1")
    assert code == EXIT_OK
    assert json.loads(out)["method"] == "qo"
    sel = [json.loads(line)["selection"] for line in err.splitlines()]
    assert sel and all(rec["accepted"] for s in sel for rec in s["trace"])


def test_shor_trace_human():
    code, out, _ = call("factor", "15", "--seed", "7", "--first-register-bits", "3", "--trace")
    assert code == EXIT_OK
    assert "gcd_trace" in out and "#" in out


def test_seed_from_env(monkeypatch):
    monkeypatch.setenv("QSHOR_SEED", "5")
    _, out, _ = call("factor", "21", "--json")
    assert json.loads(out)["seed"] == 5
    _, out, _ = call("factor", "21", "--json", "--seed", "6")
    assert json.loads(out)["seed"] == 6


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# example\nmethod = \"qo\"\nseed = 3\nh_cap = 1\n")
    assert read_config(str(cfg)) == {"method": "qo", "seed": 3, "h_cap": 1}
    _, out, _ = call("factor", "15", "--config", str(cfg), "--json")
    assert json.loads(out)["method"] == "qo"
    _, out, _ = call("factor", "15", "--config", str(cfg), "--method", "classical", "--json")
    assert json.loads(out)["method"] == "classical"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert call("factor", "15", "--config", str(bad))[0] == EXIT_ERROR


def test_simulate_state():
    code, out, _ = call("simulate-state", "15", "7", "--first-register-bits", "3", "--json")
    assert code == EXIT_OK
    dist = json.loads(out)["distribution"]
    assert set(dist) == {"0", "2", "4", "6"}
    code, out, _ = call("simulate-state", "15", "11", "--first-register-bits", "3", "--dump")
    assert len(out.splitlines()) == 128
