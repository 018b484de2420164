import json
import os

import pytest

from nonabtensor.catalog import build
from nonabtensor.cli import EXIT_INPUT, EXIT_LIMIT, EXIT_OK, Config, main
from nonabtensor.group import save


def run(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_info_and_series(capsys):
    code, out = run(capsys, "info", "S3")
    assert code == EXIT_OK and out["order"] == 6 and out["abelian_invariants"] == [2]
    code, out = run(capsys, "series", "S4", "--type", "derived", "-n", "4")
    assert out["orders"] == [24, 12, 4, 1]


def test_tensor_commands(capsys):
    code, out = run(capsys, "tensor-square", "C1")
    assert code == EXIT_OK and out["tensor"]["order"] == 1
    code, out = run(capsys, "tensor-square", "D4", "--strategy", "nu")
    assert out["tensor"]["order"] == 32 and out["tensor"]["abelian_invariants"] == [2, 2, 2, 4]
    code, out = run(capsys, "exterior-square", "C2xC2")
    assert out["exterior"]["order"] == 2
    code, out = run(capsys, "schur", "C2xC2")
    assert out["multiplier"]["order"] == 2
    code, out = run(capsys, "tensor-power", "S3", "-n", "3")
    assert [lv["order"] for lv in out["levels"]] == [6, 6, 6]


def test_multiplier_variants(capsys):
    code, out = run(capsys, "multiplier", "D4", "-k", "1")
    assert out["multiplier"]["variant"] == "solvable-exact" and out["multiplier"]["order"] == 2
    code, out = run(capsys, "multiplier", "C5", "--variant", "nilpotent")
    assert out["multiplier"]["variant"] == "nilpotent-bound" and out["multiplier"]["order"] == 5


def test_derivative_and_frakd(capsys):
    code, out = run(capsys, "derivative", "S4", "-k", "2")
    # D^2 under conjugation is gamma_3(S4) = A4
    assert out["derivative"]["order"] == 12
    code, out = run(capsys, "frakd", "D4", "-n", "1")
    assert out["frakd"]["order"] == 2


def test_file_input(tmp_path, capsys):
    p = tmp_path / "q8.json"
    save(build("Q8"), p)
    code, out = run(capsys, "info", "--file", str(p))
    assert code == EXIT_OK and out["order"] == 8


def test_errors(capsys):
    assert main(["info", "Z9"]) == EXIT_INPUT
    assert main(["info"]) == EXIT_INPUT
    assert main(["tensor-power", "E2^3", "-n", "3", "--order-cap", "100"]) == EXIT_LIMIT
    assert main(["tensor-square", "Q8", "--coset-limit", "10"]) == EXIT_LIMIT
    with pytest.raises(SystemExit):
        main(["tensor-square", "S3", "--coset-limit", "0"])


def test_over_cap_square_reports_summary(capsys, monkeypatch):
    monkeypatch.delenv("TENSOR_ORDER_CAP", raising=False)
    code, out = run(capsys, "tensor-square", "C2xC2xC4", "--order-cap", "100")
    assert code == EXIT_OK and out["tensor"]["order"] == 1024
    assert out["tensor"]["abelian_invariants"] == [2] * 8 + [4]


def test_verify(tmp_path, capsys):
    report = tmp_path / "rep.jsonl"
    code, out = run(capsys, "verify", "--thm1", "--bjr", "--max-order", "6", "--report", str(report))
    assert code == EXIT_OK and out["bjr_reading"] == "left-second"
    lines = [json.loads(x) for x in report.read_text().splitlines()]
    assert lines and all(x["status"] == "pass" for x in lines)
    assert main(["verify"]) == EXIT_INPUT


def test_order_cap_flag_does_not_leak(monkeypatch):
    monkeypatch.delenv("TENSOR_ORDER_CAP", raising=False)
    main(["info", "S3", "--order-cap", "50"])
    assert "TENSOR_ORDER_CAP" not in os.environ


def test_bench(capsys):
    code, out = run(capsys, "bench", "S3", "C4")
    assert code == EXIT_OK and len(out["results"]) == len(out["timings_ms"]) == 4
    main(["bench", "S3"])
    text = capsys.readouterr().out
    assert "S3" in text and "ms=" in text


def test_config_validation():
    with pytest.raises(ValueError):
        Config(coset_limit=0)
    with pytest.raises(ValueError):
        Config(output_format="xml")
