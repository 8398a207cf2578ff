"""End-to-end checks of the command line front end at desk scale."""

import json

import pytest

from qloop.cli import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    JobConfig,
    UsageError,
    _parse_twists,
    _parse_weights,
    main,
    report_exit,
)


class TestJobConfig:
    def test_verify_defaults(self):
        cfg = JobConfig("verify").resolved()
        assert (cfg.algebra, cfg.representation) == ("sl2", "jimbo")
        assert (cfg.truncation, cfg.order) == (8, 2)
        assert cfg.twist_exponents == (0, 0)

    def test_lweights_defaults_rank_two(self):
        cfg = JobConfig("lweights", algebra="sl3").resolved()
        assert (cfg.truncation, cfg.order) == (12, 4)
        assert cfg.twist_exponents == (0, 0, 0)

    def test_oscillator_defaults(self):
        cfg = JobConfig("verify", representation="theta1").resolved()
        assert (cfg.truncation, cfg.order) == (8, 3)
        assert cfg.height == 1

    def test_factorize_defaults(self):
        cfg = JobConfig("factorize", algebra="sl3").resolved()
        assert (cfg.truncation, cfg.order) == (5, 3)
        assert cfg.twist_exponents == (1, 0, 0)
        assert cfg.height == 1

    def test_evaluation_height(self):
        assert JobConfig("verify").height == 2
        assert JobConfig("verify", algebra="sl3").height == 2

    def test_truncation_floor(self):
        with pytest.raises(UsageError):
            JobConfig("verify", truncation=5, order=2).resolved()
        JobConfig("verify", truncation=6, order=2).resolved()

    @pytest.mark.parametrize(
        "fields",
        [
            dict(algebra="sl4"),
            dict(representation="weyl"),
            dict(algebra="sl3", representation="finite"),
            dict(order=0),
            dict(format="yaml"),
            dict(weights=(3,)),
            dict(weights=("a", "b")),
            dict(twist_exponents=(0,)),
            dict(representation="finite"),
            dict(representation="finite", weights=(0, 3)),
            dict(perturb=2),
        ],
    )
    def test_rejected_combinations(self, fields):
        with pytest.raises(UsageError):
            JobConfig("verify", **fields).resolved()

    def test_factorize_needs_rank_two(self):
        with pytest.raises(UsageError):
            JobConfig("factorize", algebra="sl2").resolved()

    def test_factorize_needs_a_nonzero_twist(self):
        assert main(["factorize", "--twist", "0,0,0"]) == EXIT_USAGE

    def test_parsers(self):
        assert _parse_weights("symbolic") == "symbolic"
        assert _parse_weights("3,0") == (3, 0)
        assert _parse_twists("1,0,-1") == (1, 0, -1)
        with pytest.raises(UsageError):
            _parse_weights("3,half")
        with pytest.raises(UsageError):
            _parse_twists("one")


def test_report_exit_ignores_documented_discrepancies():
    assert report_exit([{"status": "pass"}]) == EXIT_PASS
    assert report_exit([{"status": "pass"}, {"status": "documented-discrepancy"}]) == EXIT_PASS
    assert report_exit([{"status": "pass"}, {"status": "fail"}]) == EXIT_FAIL


def run_json(argv, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main(argv + ["--format", "json", "--out", str(out)])
    return code, json.loads(out.read_text())


def test_verify_oscillator_notes_discrepancies(tmp_path):
    code, doc = run_json(
        ["verify", "--representation", "theta2", "--truncation", "6", "--order", "3"],
        tmp_path,
    )
    assert code == EXIT_PASS
    assert doc["schema"] == "qloop-report/1"
    assert doc["config"]["truncation"] == 6
    statuses = {c["id"]: c["status"] for c in doc["checks"]}
    assert all(v == "pass" for k, v in statuses.items() if k.startswith("defining:"))
    cat = {k: v for k, v in statuses.items() if k.startswith("catalog:")}
    assert cat
    assert all(v == "documented-discrepancy" for v in cat.values())
    noted = next(c for c in doc["checks"] if c["status"] == "documented-discrepancy")
    assert "printed" in noted["detail"] and "computed" in noted["detail"]


def test_verify_evaluation_battery(tmp_path):
    code, doc = run_json(
        ["verify", "--truncation", "6", "--order", "2"], tmp_path
    )
    assert code == EXIT_PASS
    ids = [c["id"] for c in doc["checks"]]
    assert any(i.startswith("defining:") for i in ids)
    assert any(i.startswith("drinfeld:") for i in ids)
    assert "route:node1:plus:order2" in ids
    assert "route:node1:minus:order2" in ids
    assert "catalog:eval-a1:m=0" in ids
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_verify_rank_two_oscillator(tmp_path):
    code, doc = run_json(
        ["verify", "--algebra", "sl3", "--representation", "theta3",
         "--truncation", "6", "--order", "3"],
        tmp_path,
    )
    assert code == EXIT_PASS
    ids = [c["id"] for c in doc["checks"]]
    assert "catalog:osc-a2-theta3:m=0,0" in ids
    # a raising-only realization has no descending route to compare
    assert not any(i.startswith("route:") for i in ids)


def test_lweights_table_rank_one(tmp_path):
    code, doc = run_json(
        ["lweights", "--truncation", "12", "--order", "5"], tmp_path
    )
    assert code == EXIT_PASS
    rows = doc["tables"]["lweights"]
    assert [r["m"] for r in rows] == ["0", "1", "2", "3"]
    top = rows[0]
    assert top["node"] == 1
    assert top["w_coeffs"] == ["1"]
    # the fit lands on the reduced ratio, so the top row is degree one
    assert top["plus"] == {
        "constant": "z1*z2^-1",
        "num_zeros": ["z2^2"],
        "den_zeros": ["z1^2"],
    }
    assert top["minus"]["constant"] == "z1^-1*z2"
    assert rows[1]["plus"]["num_zeros"] == ["q^2*z1^2", "z2^2"]
    assert rows[1]["plus"]["den_zeros"] == ["q^-2*z1^2", "z1^2"]
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_lweights_oscillator_is_one_sided(tmp_path):
    code, doc = run_json(
        ["lweights", "--representation", "theta2", "--truncation", "9",
         "--order", "5"],
        tmp_path,
    )
    assert code == EXIT_PASS
    rows = doc["tables"]["lweights"]
    assert rows and all("minus" not in r for r in rows)
    assert all(c["status"] == "documented-discrepancy" for c in doc["checks"])


def test_lweights_order_floor(capsys):
    code = main(["lweights", "--truncation", "12", "--order", "4"])
    assert code == EXIT_USAGE
    assert "cannot resolve the catalog degrees" in capsys.readouterr().err


def test_factorize_identity_and_perturbation(tmp_path):
    code, doc = run_json(["factorize"], tmp_path)
    assert code == EXIT_PASS
    table = doc["tables"]["factorization"]
    assert table["shift_exponents"] == ["q^-2*z1^-1*z2", "q^-2*z2^-1*z3"]
    assert {c["status"] for c in doc["checks"]} == {"pass"}

    code, doc = run_json(["factorize", "--perturb", "2"], tmp_path, "perturbed.json")
    assert code == EXIT_FAIL
    by_id = {c["id"]: c["status"] for c in doc["checks"]}
    assert by_id["factorize:triple-top"] == "pass"
    assert by_id["factorize:substitution"] == "fail"


def test_text_format_shape(capsys):
    code = main(["verify", "--representation", "theta2", "--truncation", "6",
                 "--order", "3"])
    out = capsys.readouterr().out
    assert code == EXIT_PASS
    lines = out.splitlines()
    assert lines[0].startswith("# ") and "truncation=6" in lines[0]
    assert any(line.startswith("NOTED catalog:") for line in lines)
    assert lines[-1].startswith("# result: pass")


def test_csv_format_shape(capsys):
    code = main(["verify", "--representation", "theta2", "--truncation", "6",
                 "--order", "3", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == EXIT_PASS
    lines = out.splitlines()
    assert lines[0] == "id,catalog_id,status,detail"
    assert len(lines) > 1 and all(line.count(",") >= 3 for line in lines[1:])


def test_reports_are_byte_identical(tmp_path):
    argv = ["verify", "--representation", "theta1", "--truncation", "6",
            "--order", "3", "--format", "json"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == EXIT_PASS
    assert main(argv + ["--out", str(b)]) == EXIT_PASS
    assert a.read_bytes() == b.read_bytes()


def test_truncation_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("QLOOP_TRUNCATION", "7")
    code, doc = run_json(
        ["verify", "--representation", "theta2", "--order", "3"], tmp_path
    )
    assert code == EXIT_PASS
    assert doc["config"]["truncation"] == 7

    # an explicit flag still wins
    code, doc = run_json(
        ["verify", "--representation", "theta2", "--order", "3",
         "--truncation", "6"],
        tmp_path,
        "explicit.json",
    )
    assert doc["config"]["truncation"] == 6


def test_truncation_env_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("QLOOP_TRUNCATION", "eight")
    code = main(["verify", "--representation", "theta2", "--order", "3"])
    assert code == EXIT_USAGE
    assert "QLOOP_TRUNCATION" in capsys.readouterr().err


def test_config_file_round_trip(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({
        "representation": "theta2",
        "truncation": 6,
        "order": 3,
    }))
    code, doc = run_json(["verify", "--config", str(cfg)], tmp_path)
    assert code == EXIT_PASS
    assert doc["config"]["representation"] == "theta2"
    assert doc["config"]["truncation"] == 6

    # flags layer on top of the file
    code, doc = run_json(
        ["verify", "--config", str(cfg), "--truncation", "7"], tmp_path, "o.json"
    )
    assert doc["config"]["truncation"] == 7


@pytest.mark.parametrize(
    "content",
    ["{\"representation\": \"theta2\", \"colour\": 3}", "[1, 2]", "not json"],
)
def test_config_file_rejections(tmp_path, capsys, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    assert main(["verify", "--config", str(cfg)]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("usage error:")


def test_missing_config_file(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "absent.json")]) == EXIT_USAGE


def test_usage_errors_exit_two(capsys):
    assert main(["verify", "--representation", "weyl"]) == EXIT_USAGE
    assert main(["factorize", "--algebra", "sl2"]) == EXIT_USAGE
    assert main(["verify", "--weights", "3,half"]) == EXIT_USAGE
    assert main(["verify", "--format", "yaml"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    capsys.readouterr()


def test_finite_window_needs_dominant_integer_weights(tmp_path):
    code = main(["verify", "--representation", "finite"])
    assert code == EXIT_USAGE
    code = main(["verify", "--representation", "finite", "--weights", "0,3"])
    assert code == EXIT_USAGE
    code, doc = run_json(
        ["verify", "--representation", "finite", "--weights", "3,0",
         "--truncation", "6", "--order", "2"],
        tmp_path,
    )
    assert code == EXIT_PASS
    assert doc["config"]["weights"] == [3, 0]
