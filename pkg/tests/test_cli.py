import json
import os

import pytest

from singercensus.cli import (
    RunConfig,
    UsageError,
    build_parser,
    config_from_args,
    main,
    run,
)
from singercensus.report import (
    STATUS_COUNTEREXAMPLE,
    STATUS_IMPL_ERROR,
    STATUS_UNVERIFIED,
    parse_report,
    serialize,
)


def test_fibers_run_matches():
    report, code = run(RunConfig(command="fibers", q=2, m=2, n=2))
    assert code == 0
    assert all(rec.status == "match" for rec in report.checks)
    fibers = [r for r in report.checks if r.name.startswith("fiber(")]
    assert len(fibers) == 3
    assert all(r.formula_value == 8 for r in fibers)
    assert report.config["command"] == "fibers"


def test_all_small_commands_exit_zero():
    configs = [
        RunConfig(command="coprime", q=2, r=2, n=2),
        RunConfig(command="sigma", q=3, n=2),
        RunConfig(command="toeplitz", q=2, n=2),
        RunConfig(command="splitting", q=2, m=2, n=2),
        RunConfig(command="pointed", q=2, m=2, n=2),
        RunConfig(command="bounds", q=3, m=2, n=2),
        RunConfig(command="binomial", q=3, d=2),
        RunConfig(command="trinomial", q=2, n=2),
        RunConfig(command="nilpotent", q=2, m=2),
    ]
    for config in configs:
        report, code = run(config)
        assert code == 0, (config.command, [r for r in report.checks if r.status != "match"])
        assert report.checks


def test_splitting_checks_values():
    report, _ = run(RunConfig(command="splitting", q=2, m=2, n=2))
    by_name = {r.name: r for r in report.checks}
    assert by_name["splitting_count(q=2,m=2,n=2)"].observed_value == 20
    assert by_name["bases_closed_form(q=2,m=2,n=2)"].observed_value == 120
    assert by_name["fiber_via_bases(q=2,m=2,n=2)"].observed_value == 8


def test_pointed_checks_values():
    report, _ = run(RunConfig(command="pointed", q=2, m=2, n=2))
    by_name = {r.name: r for r in report.checks}
    assert by_name["pointed_count(q=2,m=2,n=2)"].observed_value == 4
    assert by_name["pointed_identity(q=2,m=2,n=2)"].observed_value is True


def test_binomial_single_b():
    report, code = run(RunConfig(command="binomial", q=5, d=4, b=2))
    assert code == 0 and len(report.checks) == 1
    assert report.checks[0].formula_value is True


def test_usage_errors():
    with pytest.raises(UsageError):
        RunConfig(command="fibers", q=2, m=2).validate()  # n missing
    with pytest.raises(UsageError):
        RunConfig(command="fibers", q=6, m=2, n=2).validate()  # not a prime power
    with pytest.raises(UsageError):
        RunConfig(command="splitting", q=2, m=2, n=2, mode="sample").validate()
    with pytest.raises(UsageError):
        RunConfig(command="binomial", q=3, d=2, b=0).validate()
    with pytest.raises(UsageError):
        RunConfig(command="fibers", q=2, m=2, n=2, workers=0).validate()
    with pytest.raises(UsageError):
        RunConfig(command="fibers", q=2, m=2, n=2, format="yaml").validate()
    with pytest.raises(UsageError):
        RunConfig(command="wat").validate()


def test_main_usage_error_exit_1(capsys):
    assert main(["fibers", "--q", "2", "--m", "2"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_main_writes_stdout_and_exit_0(capsys):
    code = main(["toeplitz", "--q", "2", "--n", "2"])
    out = capsys.readouterr().out
    assert code == 0
    report = parse_report(out)
    assert report.config["command"] == "toeplitz"


def test_main_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["nilpotent", "--q", "2", "--m", "2", "--out", str(target)])
    assert code == 0
    report = parse_report(target.read_text())
    assert report.checks[0].name == "nilpotent_count(q=2,m=2)"
    assert capsys.readouterr().out == ""


def test_ceiling_exceeded_exit_4():
    report, code = run(RunConfig(command="fibers", q=2, m=3, n=3))
    assert code == 4
    assert report.checks[0].status == STATUS_UNVERIFIED
    assert "rerun with --mode sample" in report.checks[0].detail


def test_ceiling_flag_and_env(monkeypatch):
    report, code = run(RunConfig(command="fibers", q=2, m=2, n=2, ceiling=10))
    assert code == 4
    monkeypatch.setenv("SINGERCENSUS_CEILING", "10")
    report, code = run(RunConfig(command="fibers", q=2, m=2, n=2))
    assert code == 4
    assert report.config["ceiling"] == 10
    monkeypatch.delenv("SINGERCENSUS_CEILING")
    _, code = run(RunConfig(command="fibers", q=2, m=2, n=2))
    assert code == 0


def test_sample_mode_exit_4():
    report, code = run(
        RunConfig(command="fibers", q=2, m=2, n=2, mode="sample", sample_size=500)
    )
    assert code == 4
    assert all(r.status == STATUS_UNVERIFIED for r in report.checks)
    assert any("sampled, not exact" in (r.detail or "") for r in report.checks)


def test_sample_mode_seeded_determinism():
    config = dict(command="fibers", q=2, m=2, n=2, mode="sample", sample_size=500, seed=9)
    a, _ = run(RunConfig(**config))
    b, _ = run(RunConfig(**config))
    assert serialize(a, "json") == serialize(b, "json")


def test_formula_override_exit_codes():
    # a conjectured mismatch is a counterexample candidate (exit 2)
    report, code = run(
        RunConfig(command="fibers", q=2, m=3, n=2, ceiling=2**18),
        formula_overrides={"fiber_uniformity(q=2,m=3,n=2)": 2},
    )
    assert code == 2
    broken = [r for r in report.checks if r.status == STATUS_COUNTEREXAMPLE]
    assert len(broken) == 1
    # a proven mismatch is an implementation error (exit 3)
    report, code = run(
        RunConfig(command="toeplitz", q=2, n=2),
        formula_overrides={"toeplitz_count(q=2,n=2)": 5},
    )
    assert code == 3
    assert any(r.status == STATUS_IMPL_ERROR for r in report.checks)


def test_workers_do_not_change_output():
    one, _ = run(RunConfig(command="fibers", q=2, m=2, n=2, workers=1))
    two, _ = run(RunConfig(command="fibers", q=2, m=2, n=2, workers=2))
    assert serialize(one, "json") == serialize(two, "json")


def test_parser_roundtrip():
    parser = build_parser()
    ns = parser.parse_args(
        ["fibers", "--q", "2", "--m", "2", "--n", "3", "--workers", "4", "--format", "csv"]
    )
    config = config_from_args(ns)
    assert (config.q, config.m, config.n, config.workers, config.format) == (2, 2, 3, 4, "csv")
    with pytest.raises(UsageError):
        parser.parse_args(["fibers", "--q", "2", "--r", "2", "--n", "2"])


def test_report_echoes_stable_config_keys():
    report, _ = run(RunConfig(command="sigma", q=2, n=1))
    assert sorted(report.config) == [
        "b", "ceiling", "command", "d", "m", "mode", "n", "q", "r",
        "sample_size", "seed",
    ]
