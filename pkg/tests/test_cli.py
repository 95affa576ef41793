import json

import hashmac.cli as cli
import hashmac.slack as slack
import hashmac.verify as verify
from hashmac.verify import LemmaReport

NOISY_ADDER = {
    "inputs": [2, 2], "output": 3,
    "table": [[[0.875, 0.0625, 0.0625], [0.0625, 0.875, 0.0625]],
              [[0.0625, 0.875, 0.0625], [0.0625, 0.0625, 0.875]]],
}


def write_cfg(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def sim_cfg(**overrides):
    block = {
        "scenario": "private",
        "channel": NOISY_ADDER,
        "inputs": [[0.5, 0.5], [0.5, 0.5]],
        "rates": [0.25, 0.25], "eps": [0.05, 0.05],
        "n_ladder": [4, 6], "candidates": 2, "pilot_trials": 10, "trials": 20,
    }
    block.update(overrides)
    return {"seed": 20250811, "simulate": block}


def strip_walltime(text: str) -> str:
    lines = text.strip().splitlines()
    return "\n".join(",".join(line.split(",")[:-1]) for line in lines)


def test_region_command_prints_verdicts(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"region": {
        "scenario": "private", "channel": NOISY_ADDER,
        "inputs": [[0.5, 0.5], [0.5, 0.5]],
        "points": [[0.1, 0.1], [1.0, 1.0]],
    }})
    out = tmp_path / "r.csv"
    assert cli.main(["region", "--config", cfg, "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "inside" in printed and "outside" in printed
    header = out.read_text().splitlines()[0]
    assert header == "point,inside,witness,split_point,split_moved"


def test_region_empty_point_list(tmp_path):
    cfg = write_cfg(tmp_path, {"region": {
        "scenario": "private", "channel": NOISY_ADDER,
        "inputs": [[0.5, 0.5], [0.5, 0.5]], "points": [],
    }})
    assert cli.main(["region", "--config", cfg]) == 0


def test_simulate_ladder_rows_and_schema(tmp_path):
    cfg = write_cfg(tmp_path, sim_cfg())
    out = tmp_path / "s.csv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == ("scenario,n,rates,ensemble,seed,trials,block_error,"
                        "ci_half_width,encoder_atypical,empirical_mi,"
                        "channel_atypical,decoder_collision,empty_coset,"
                        "wall_time_s")
    assert len(lines) == 3  # header + one row per ladder point


def test_simulate_reproducible_modulo_walltime(tmp_path):
    cfg = write_cfg(tmp_path, sim_cfg())
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(a)]) == 0
    assert cli.main(["simulate", "--config", cfg, "--out", str(b)]) == 0
    assert strip_walltime(a.read_text()) == strip_walltime(b.read_text())
    assert a.read_text() != "" and "block_error" in a.read_text()


def test_simulate_seed_override_changes_results(tmp_path):
    cfg = write_cfg(tmp_path, sim_cfg())
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(a)]) == 0
    assert cli.main(["simulate", "--config", cfg, "--seed", "1", "--out", str(b)]) == 0
    assert strip_walltime(a.read_text()) != strip_walltime(b.read_text())


def test_simulate_infeasible_needs_force(tmp_path, capsys):
    cfg = write_cfg(tmp_path, sim_cfg(rates=[0.9, 0.9], n_ladder=[6],
                                      candidates=1, pilot_trials=0, trials=10))
    assert cli.main(["simulate", "--config", cfg]) == 1
    assert "force" in capsys.readouterr().err
    out = tmp_path / "f.csv"
    assert cli.main(["simulate", "--config", cfg, "--force", "--out", str(out)]) == 0
    assert "0.9|0.9" in out.read_text()


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"simulate": {')
    assert cli.main(["simulate", "--config", str(bad)]) == 2
    assert "line" in capsys.readouterr().err

    cfg = write_cfg(tmp_path, {"simulate": {"scenario": "private"}})
    assert cli.main(["simulate", "--config", cfg]) == 2
    assert "simulate.channel" in capsys.readouterr().err

    cfg = write_cfg(tmp_path, sim_cfg(n_ladder=[6, 4]))
    assert cli.main(["simulate", "--config", cfg]) == 2
    assert "n_ladder" in capsys.readouterr().err

    cfg = write_cfg(tmp_path, sim_cfg(rates=[0.25]))
    assert cli.main(["simulate", "--config", cfg]) != 0


def test_missing_config_for_simulate():
    assert cli.main(["simulate"]) == 2


def test_verify_exit_codes(monkeypatch, capsys):
    ok = [LemmaReport("demo", 3, 0)]
    monkeypatch.setattr(cli, "run_suite", lambda name: ok)
    assert cli.main(["verify", "--suite", "types"]) == 0
    assert "PASS demo" in capsys.readouterr().out
    bad = [LemmaReport("demo", 3, 1)]
    monkeypatch.setattr(cli, "run_suite", lambda name: bad)
    assert cli.main(["verify", "--suite", "types"]) == 1
    assert "FAIL demo" in capsys.readouterr().out


def test_fault_injection_breaks_types_suite(monkeypatch):
    # A wrong-signed type-count penalty must be caught by the lemma checks.
    good = verify.types_suite(ns=(4,), gammas=(0.05,), pair_ns=(4,))
    assert all(r.violations == 0 for r in good)
    monkeypatch.setattr(slack, "type_count_penalty",
                        lambda n, m: -(m * __import__("math").log2(n + 1) / n))
    faulty = verify.types_suite(ns=(4,), gammas=(0.05,), pair_ns=(4,))
    assert any(r.violations > 0 for r in faulty)


def test_ensemble_stats_csv(tmp_path):
    cfg = write_cfg(tmp_path, {"seed": 7, "ensemble_stats": {
        "field": 2, "ladder": [4, 8], "mode": "exact",
        "ensembles": [{"kind": "uniform-all-linear", "rows_per_n": 0.5},
                      {"kind": "sparse-linear", "rows_per_n": 0.5,
                       "degree_coeff": 0.5}],
    }})
    out = tmp_path / "e.csv"
    assert cli.main(["ensemble-stats", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,kind,rows,alpha,beta,provenance,half_width"
    uniform_rows = [l for l in lines[1:] if "uniform-all-linear" in l]
    for row in uniform_rows:
        fields = row.split(",")
        assert fields[3] == "1.0" and fields[4] == "0.0" and fields[5] == "exact"


def test_ensemble_stats_mc_mode(tmp_path):
    cfg = write_cfg(tmp_path, {"seed": 7, "ensemble_stats": {
        "field": 2, "ladder": [4], "mode": "mc", "trials": 200,
        "ensembles": [{"kind": "sparse-linear", "rows_per_n": 0.5,
                       "column_degree": 1}],
    }})
    out = tmp_path / "m.csv"
    assert cli.main(["ensemble-stats", "--config", cfg, "--out", str(out)]) == 0
    row = out.read_text().strip().splitlines()[1]
    assert "estimated" in row


def test_verify_all_runtime_budget(tmp_path):
    import time
    start = time.perf_counter()
    rc = cli.main(["verify", "--suite", "all"])
    elapsed = time.perf_counter() - start
    assert rc == 0
    assert elapsed < 600  # well under the ten-minute budget


def test_simulate_stage_counts_sum_to_errors(tmp_path):
    cfg = write_cfg(tmp_path, sim_cfg(n_ladder=[6], trials=40))
    out = tmp_path / "c.csv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    header, row = out.read_text().strip().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    stage_total = sum(int(rec[k]) for k in ("encoder_atypical", "empirical_mi",
                                            "channel_atypical", "decoder_collision",
                                            "empty_coset"))
    errors = round(float(rec["block_error"]) * int(rec["trials"]))
    assert stage_total == errors


def test_simulate_sparse_ensemble_config(tmp_path):
    cfg = write_cfg(tmp_path, sim_cfg(n_ladder=[6], trials=20, candidates=2,
                                      pilot_trials=5,
                                      ensemble={"kind": "sparse-linear",
                                                "column_degree": 2}))
    out = tmp_path / "sp.csv"
    assert cli.main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert "sparse-linear" in out.read_text()


def test_shipped_configs_are_valid():
    import pathlib
    root = pathlib.Path(__file__).resolve().parent.parent / "demos" / "configs"
    # Light commands run end to end; simulate configs are validated structurally
    # (their full workloads run in the acceptance suite).
    assert cli.main(["region", "--config", str(root / "region_adder.json")]) == 0
    assert cli.main(["ensemble-stats", "--config", str(root / "ensemble_stats.json")]) == 0
    for name in ("simulate_private.json", "simulate_time_sharing.json",
                 "simulate_superposition.json"):
        payload = json.loads((root / name).read_text())
        block = payload["simulate"]
        for field in ("scenario", "channel", "rates", "eps", "n_ladder"):
            assert field in block, f"{name} missing {field}"
        assert block["n_ladder"] == sorted(block["n_ladder"])
