import json
import subprocess
import sys

import pytest

from zeckprimes.cli import run
from zeckprimes.config import Settings, parse_config
from zeckprimes.report import ExperimentReport, parse_csv


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sz(capsys):
    assert call(capsys, "sz", "100") == (0, "3\n", "")


def test_expand(capsys):
    code, out, _ = call(capsys, "expand", "100")
    assert code == 0 and out.splitlines() == ["1000010100", "11 6 4"]
    code, out, _ = call(capsys, "expand", "0")
    assert code == 0 and out.strip() == ""


def test_expand_json(capsys):
    code, out, _ = call(capsys, "expand", "12", "--format", "json", "--no-timing")
    data = json.loads(out)
    assert code == 0 and [r["index"] for r in data["rows"]] == [6, 4, 2]


def test_residue_json(capsys):
    code, out, _ = call(capsys, "primes", "residue", "--x", "1000000", "--m", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) >= {"experiment", "params", "seed", "rows", "summary", "version"}
    assert len(data["rows"]) == 2
    assert sum(r["count"] for r in data["rows"]) == 78498


def test_csv_header_contract(capsys):
    code, out, _ = call(capsys, "primes", "hist", "--x", "1000")
    lines = out.splitlines()
    assert code == 0
    first_plain = next(i for i, line in enumerate(lines) if not line.startswith("#"))
    assert lines[first_plain] == "k,count"
    meta, rows = parse_csv(out)
    assert meta["experiment"] == "primes hist"
    assert sum(int(r["count"]) for r in rows) == 168


def test_usage_errors(capsys):
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "sz", "7", "--bogus")[0] == 1
    assert call(capsys, "sz", "-3")[0] == 1
    assert call(capsys, "detect", "--n", "5")[0] == 1
    assert call(capsys, "markov", "joint", "--positions", "3,5", "--values", "1")[0] == 1
    code, out, err = call(capsys, "primes", "residue", "--x", "100", "--m", "0")
    assert code == 1 and out == "" and err


def test_resource_limit(capsys):
    code, _, err = call(capsys, "lod", "--x", "200000")
    assert code == 3 and "resource" in err


def test_violation_exit_code(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "tol.cfg"
    cfg.write_text("# strict\nresidue_tol = 0\n")
    monkeypatch.setenv("ZECKPRIMES_CONFIG", str(cfg))
    code, out, err = call(capsys, "primes", "residue", "--x", "10000", "--m", "3", "--check")
    assert code == 2
    # the report is still written, with observed and threshold values
    meta, _ = parse_csv(out)
    summary = json.loads(meta["summary"])
    assert summary["deviation_threshold"] == 0 and summary["deviation_pass"] is False
    # without --check the run reports but succeeds
    assert call(capsys, "primes", "residue", "--x", "10000", "--m", "3")[0] == 0


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("threads = 3\n")
    code, out, _ = call(capsys, "primes", "hist", "--x", "1000", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["params"]["threads"] == 3
    code, out, _ = call(capsys, "primes", "hist", "--x", "1000", "--config", str(cfg), "--threads", "2",
                        "--format", "json")
    assert json.loads(out)["params"]["threads"] == 2


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("nonsense\n")
    assert call(capsys, "sz", "3", "--config", str(cfg))[0] == 1
    cfg.write_text("unknown_key = 1\n")
    assert call(capsys, "sz", "3", "--config", str(cfg))[0] == 1


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = call(capsys, "discrepancy", "--N", "1000", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["rows"][0]["holds"] is True


def test_progress_goes_to_stderr(capsys):
    code, out, err = call(capsys, "primes", "hist", "--x", "100000", "--format", "json")
    assert code == 0 and "[zeckprimes]" in err
    json.loads(out)
    code, out, err = call(capsys, "primes", "hist", "--x", "100000", "--quiet")
    assert err == ""


DETERMINISM_CASES = [
    ["primes", "hist", "--x", "3000000"],
    ["primes", "expsum", "--x", "3000000", "--theta", "0.5,0.1234", "--kind", "p"],
    ["primes", "expsum", "--x", "3000000", "--theta", "0.3", "--kind", "mangoldt"],
    ["primes", "charfn", "--x", "3000000", "--nu", "0.3"],
    ["primes", "local-clt", "--x", "3000000"],
    ["markov", "empirical", "--x", "3000000", "--positions", "10,12", "--values", "1,0", "--source", "primes"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: " ".join(a[:2]))
def test_thread_count_does_not_change_output(capsys, argv):
    from zeckprimes.primes import experiments

    experiments._HIST_CACHE.clear()
    _, one, _ = call(capsys, *argv, "--threads", "1", "--format", "json", "--no-timing")
    experiments._HIST_CACHE.clear()
    _, many, _ = call(capsys, *argv, "--threads", "4", "--format", "json", "--no-timing")
    a, b = json.loads(one), json.loads(many)
    a["params"].pop("threads")
    b["params"].pop("threads")
    assert a == b


@pytest.mark.parametrize("argv", [
    ["gowers", "u3", "--lambda", "6", "--samples", "32", "--seed", "5"],
    ["markov", "empirical", "--positions", "4,6", "--values", "0,1", "--source", "chain", "--seed", "9"],
])
def test_same_seed_same_bytes(capsys, argv):
    _, first, _ = call(capsys, *argv, "--no-timing", "--format", "csv")
    _, second, _ = call(capsys, *argv, "--no-timing", "--format", "csv")
    assert first == second


def test_every_subcommand_runs(capsys):
    invocations = [
        ["detect", "--n", "100", "--lambda", "9", "--method", "interval", "--count", "50"],
        ["detect", "--n", "100", "--lambda", "9", "--method", "parallelogram", "--count", "50"],
        ["detect", "--n", "100", "--lambda", "9", "--method", "tiling", "--count", "50"],
        ["markov", "pgf", "--n", "6", "--v", "0.5"],
        ["markov", "joint", "--positions", "3,5", "--values", "1,0"],
        ["markov", "empirical", "--x", "100000", "--positions", "10", "--values", "1"],
        ["fourier", "gtilde", "--lambda", "8", "--beta", "0.2"],
        ["fourier", "gtilde", "--lambda", "5", "--lambda-max", "7", "--grid", "64"],
        ["fourier", "G", "--lambda", "7"],
        ["fourier", "G", "--lambda", "7", "--h", "3"],
        ["fourier", "omega", "--lambda", "9", "--t", "2", "--N", "1000"],
        ["gowers", "u2", "--lambda", "6"],
        ["gowers", "decay", "--lambda", "4", "--lambda-max", "6"],
        ["discrepancy", "--N", "100,1000"],
        ["vaaler", "--alpha", "0.2", "--beta", "0.5", "--H", "4"],
        ["primes", "min-sz", "--k-max", "6"],
        ["primes", "fib-scan", "--max-index", "60"],
        ["primes", "charfn", "--x", "100000"],
        ["lod", "--x", "2000", "--eps", "0.5"],
    ]
    for argv in invocations:
        for fmt in ("csv", "json"):
            code, out, err = call(capsys, *argv, "--format", fmt, "--quiet")
            assert code == 0, (argv, err)
            if fmt == "json":
                json.loads(out)


def test_detect_text_output(capsys):
    code, out, _ = call(capsys, "detect", "--n", "1000", "--lambda", "10", "--count", "3")
    assert code == 0 and out.split() == ["13", "14", "15"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zeckprimes", "sz", "100"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "3\n"


def test_report_roundtrip():
    report = ExperimentReport("demo", {"x": 1}, 7, [{"k": 1, "v": 0.25}, {"k": 2, "w": "a"}], {"s": 1.5}, 0.1)
    data = json.loads(report.to_json())
    assert data["seed"] == 7 and data["rows"][1]["w"] == "a"
    meta, rows = parse_csv(report.to_csv())
    assert meta["seed"] == "7" and rows[0]["k"] == "1" and rows[1]["w"] == "a"
    assert "wall_clock" not in report.to_json(timing=False)
    with pytest.raises(ValueError):
        report.render("xml")


def test_config_parsing():
    assert parse_config("a = 1\n# c\n\n b=2 ") == {"a": "1", "b": "2"}
    settings = Settings()
    settings.update({"clt_sup_tol": "0.02", "memory_budget": "1024"})
    assert settings.clt_sup_tol == 0.02 and settings.memory_budget == 1024


def test_memory_budget_from_config(capsys, tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("memory_budget = 100000\n")
    code, _, err = call(capsys, "primes", "hist", "--x", "1234567", "--config", str(cfg))
    assert code == 3 and "budget" in err
    # the budget is restored afterwards
    assert call(capsys, "primes", "hist", "--x", "1000000", "--quiet")[0] == 0
