"""Command-line interface: wiring, outputs, and exit codes."""

import json

import pytest

from peerpressure import read_edge_list
from peerpressure.cli import main
from peerpressure.suites import InstanceOutcome


def run_cli(*argv):
    return main(list(argv))


def test_generate_torus(tmp_path, capsys):
    out = tmp_path / "torus.edges"
    assert run_cli("generate", "--torus", "6", "6", "--out", str(out)) == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("effective-config: {")
    assert json.loads(stdout.splitlines()[0].split(": ", 1)[1])["network"] == "torus:6x6"
    assert ("generated torus:6x6: n=36 m=72 min_degree=4 diameter=6 "
            "bipartite=true odd_girth=-") in stdout
    g = read_edge_list(str(out))
    assert g.vertex_count == 36


def test_generate_regular_requires_seed(tmp_path, capsys):
    out = tmp_path / "g.edges"
    assert run_cli("generate", "--regular", "20", "3", "--out", str(out)) == 2
    assert "--seed is required" in capsys.readouterr().err


def test_generate_regular(tmp_path, capsys):
    out = tmp_path / "g.edges"
    assert run_cli("generate", "--regular", "20", "3", "--seed", "4",
                   "--out", str(out)) == 0
    g = read_edge_list(str(out))
    assert set(g.degrees.tolist()) == {3}
    assert "odd_girth=" in capsys.readouterr().out


def test_generate_impossible_regular_exits_one(tmp_path, capsys):
    out = tmp_path / "g.edges"
    assert run_cli("generate", "--regular", "4", "1", "--seed", "0",
                   "--out", str(out)) == 1
    assert "error:" in capsys.readouterr().err


def test_simulate_torus_with_flags(tmp_path, capsys):
    trace_path = tmp_path / "trace.csv"
    code = run_cli("simulate", "--torus", "10", "10", "--e-h", "0.1",
                   "--rho-h", "0.23", "--rho-d", "0.45", "--epsilon", "0.05",
                   "--rounds", "40", "--early-stop", "--seed", "0",
                   "--out", str(trace_path))
    assert code == 0
    stdout = capsys.readouterr().out
    assert "effective-config:" in stdout
    summary = stdout.splitlines()[-1]
    assert summary.startswith("rounds=")
    assert "conditions=satisfied" in summary
    header = trace_path.read_text().splitlines()[0]
    assert header == "round,defectors,hypocritical,cooperators"


def test_simulate_missing_params_is_usage_error(capsys):
    assert run_cli("simulate", "--torus", "5", "5", "--seed", "0",
                   "--e-h", "0.1", "--rho-h", "0.2") == 2
    assert "missing parameter" in capsys.readouterr().err


def test_simulate_flag_overrides_config_file(tmp_path, capsys):
    cfg = tmp_path / "params.json"
    cfg.write_text(json.dumps({"e_h": 0.5, "rho_h": 0.23, "rho_d": 0.45}))
    code = run_cli("simulate", "--torus", "5", "5", "--config", str(cfg),
                   "--e-h", "0.1", "--rounds", "3", "--seed", "1")
    assert code == 0
    effective = capsys.readouterr().out.splitlines()[0]
    record = json.loads(effective.split(": ", 1)[1])
    assert record["e_h"] == 0.1
    assert record["rho_h"] == 0.23


def test_simulate_from_edge_list(tmp_path, capsys):
    edges = tmp_path / "g.edges"
    assert run_cli("generate", "--torus", "5", "5", "--out", str(edges)) == 0
    code = run_cli("simulate", "--graph", str(edges), "--e-h", "0.1",
                   "--rho-h", "0.3", "--rho-d", "0.6", "--rounds", "15",
                   "--seed", "2")
    assert code == 0
    assert "final_counts=" in capsys.readouterr().out


def test_simulate_missing_graph_file_is_usage_error(capsys):
    assert run_cli("simulate", "--graph", "/nonexistent/g.edges", "--e-h", "0.1",
                   "--rho-h", "0.3", "--rho-d", "0.6", "--seed", "0") == 2
    assert "error:" in capsys.readouterr().err


def test_simulate_two_order(capsys):
    code = run_cli("simulate", "--torus", "5", "5", "--two-order",
                   "--alpha1", "0.9", "--alpha2", "0.1", "--beta1", "0.23",
                   "--beta2", "0.22", "--rounds", "10", "--seed", "3")
    assert code == 0
    assert "conditions=satisfied" in capsys.readouterr().out


def test_simulate_noisy_reports_p_greedy(capsys):
    code = run_cli("simulate", "--torus", "5", "5", "--noisy", "0.9",
                   "--e-h", "0.1", "--rho-h", "0.23", "--rho-d", "0.45",
                   "--rounds", "5", "--seed", "4")
    assert code == 0
    record = json.loads(capsys.readouterr().out.splitlines()[0].split(": ", 1)[1])
    assert record["p_greedy"] == 0.9
    assert record["rule"] == "main-noisy"


def test_simulate_regime_note_printed(capsys):
    code = run_cli("simulate", "--torus", "5", "5", "--e-h", "0.0",
                   "--rho-h", "0.23", "--rho-d", "0.45", "--rounds", "2",
                   "--seed", "5")
    assert code == 0
    assert "note: e_h=0.0 is on the regime boundary" in capsys.readouterr().out


def test_sweep_round_trip(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({
        "network": "torus", "width": 5, "height": 5,
        "e_h_count": 2, "rho_h_count": 2, "rho_d": 0.5, "epsilon": 0.2,
        "rounds": 4, "repetitions": 2, "master_seed": 9,
    }))
    prefix = str(tmp_path / "phase")
    assert run_cli("sweep", str(cfg), "--out-prefix", prefix) == 0
    stdout = capsys.readouterr().out
    assert f"wrote {prefix}.csv and {prefix}.ppm" in stdout
    csv_lines = open(prefix + ".csv").read().splitlines()
    assert csv_lines[0] == "e_h,rho_h,frac_defector,frac_hypocritical,frac_cooperator"
    assert len(csv_lines) == 5
    assert open(prefix + ".ppm").readline() == "P3\n"


def test_sweep_invalid_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"network": "torus", "width": 5, "height": 5,
                               "e_h_count": 2, "rho_h_count": 2, "rho_d": 0.5,
                               "epsilon": 0.2, "rounds": 4, "repetitions": 2,
                               "master_seed": 9, "bogus_key": 1}))
    assert run_cli("sweep", str(cfg), "--out-prefix", str(tmp_path / "p")) == 2
    assert "invalid sweep config" in capsys.readouterr().err


def test_verify_single_suite(tmp_path, capsys):
    report = tmp_path / "report.txt"
    code = run_cli("verify", "oracle", "--seed", "23", "--instances", "40",
                   "--out", str(report))
    assert code == 0
    assert "suite oracle: 40/40 passed" in capsys.readouterr().out
    lines = report.read_text().splitlines()
    assert len(lines) == 40
    assert lines[0].startswith("oracle,0,pass,")


def test_verify_failure_exits_one(monkeypatch, capsys):
    import peerpressure.cli as cli

    fake = {"oracle": lambda seed, instances: [InstanceOutcome(0, False, "rigged")]}
    monkeypatch.setattr(cli, "SUITES", fake)
    assert run_cli("verify", "oracle", "--seed", "0") == 1
    captured = capsys.readouterr()
    assert "suite oracle: 0/1 passed" in captured.out
    assert "verification FAILED" in captured.err


def test_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit):
        run_cli("verify", "nonsense", "--seed", "0")


def test_effective_config_is_sorted_json(capsys):
    run_cli("generate", "--torus", "3", "3", "--out", "/dev/null")
    line = capsys.readouterr().out.splitlines()[0]
    payload = line.split(": ", 1)[1]
    record = json.loads(payload)
    assert json.dumps(record, sort_keys=True) == payload
