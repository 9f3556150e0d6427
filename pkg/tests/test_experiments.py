import math

import numpy as np
import pytest

from graphspace import ER, SpecError, entropy
from graphspace.experiments import (PRESETS, ExperimentConfig, Table, cfmd_arith, density_grid,
                                    even_odd, fig2_models, fig7_models, read_csv, run_experiment,
                                    sbm0, single_pair, two_communities, write_csv)
from graphspace.rng import RngStream

SMALL = {"fig2": dict(samples=5), "fig3": dict(samples=4), "fig4": dict(graphs=2, q=5),
         "fig5": dict(graphs=2, q=5, samples=5), "fig6": dict(graphs=2, q=5),
         "fig7": dict(graphs=1, q=5)}


def test_model_zoo():
    models = fig2_models()
    assert list(models) == ["ER", "CFM cst", "CFM arith", "SBM hom", "SBM het"]
    assert all(spec.n == 50 and spec.m == 1000 for name, spec in models.items()
               if name != "CFM arith")
    assert models["CFM arith"].k_out.tolist() == list(range(1, 51))
    assert cfmd_arith().k_out.tolist() == list(range(50))
    assert even_odd(4).block_of.tolist() == [0, 1, 0, 1]
    assert sbm0().M.tolist() == [[500, 0], [0, 500]]
    fig7 = fig7_models()
    assert len(fig7) == 8 and all(spec.n == 100 for spec in fig7.values())


def test_density_grid_endpoints():
    grid = density_grid(15)
    assert grid[0] == 100 and grid[-1] == 500_000 and len(grid) == 15
    assert grid == sorted(set(grid))


def test_probe_graphs():
    G2 = two_communities(10, 41, RngStream(0))
    assert G2.m == 41 and G2.W[:5, 5:].sum() == 0 and G2.W[5:, :5].sum() == 0
    G3 = single_pair(10, 7)
    assert G3.W[0, 1] == 7 and G3.m == 7


def test_config_counts():
    cfg = ExperimentConfig("fig4", "out", scale=0.1, q=7)
    assert cfg.count(100) == 10
    assert cfg.count(100, cfg.q) == 7
    assert ExperimentConfig("fig2", "out", scale=0.001).count(100) == 1
    with pytest.raises(SpecError):
        ExperimentConfig("fig9", "out")
    with pytest.raises(SpecError):
        ExperimentConfig("fig2", "out", scale=0)


def test_csv_round_trip(tmp_path):
    t = Table("t", ["a", "b", "c", "d"], [[1, 0.1 + 0.2, True, "x y"], [2, 1e-300, False, ""]])
    write_csv(t, tmp_path / "t.csv")
    rows = read_csv(tmp_path / "t.csv")
    assert float(rows[0]["b"]) == 0.1 + 0.2
    assert float(rows[1]["b"]) == 1e-300
    assert rows[0]["c"] == "true" and rows[1]["c"] == "false"
    assert rows[0]["d"] == "x y"


@pytest.mark.parametrize("preset", PRESETS)
def test_preset_outputs_parse_back(tmp_path, preset):
    cfg = ExperimentConfig(preset, tmp_path, seed=3, **SMALL[preset])
    written = run_experiment(cfg)
    csvs = [p for name, p in written.items() if p.suffix == ".csv"]
    svgs = [p for name, p in written.items() if p.suffix == ".svg"]
    assert csvs and len(svgs) == 1
    for path in csvs:
        rows = read_csv(path)
        assert rows
        for row in rows:
            for key, value in row.items():
                if key in ("model", "role", "block_sizes", "reject", "entropy_approximate"):
                    continue
                if value != "":
                    assert math.isfinite(float(value))


def test_fig7_grid_shape(tmp_path):
    cfg = ExperimentConfig("fig7", tmp_path, seed=0, graphs=2, q=5, figures=False)
    rows = read_csv(run_experiment(cfg)["fig7"])
    assert len(rows) == 16
    assert {r["model"] for r in rows} == {f"M{i}" for i in range(8)}
    assert all(sum(int(s) for s in r["block_sizes"].split("/")) == 100 for r in rows)


def test_fig3_columns(tmp_path):
    rows = read_csv(run_experiment(ExperimentConfig("fig3", tmp_path, samples=3,
                                                    figures=False))["fig3"])
    assert [int(r["m"]) for r in rows] == density_grid(3)
    for r in rows:
        assert float(r["entropy"]) == pytest.approx(
            entropy(ER(100, int(r["m"]))).nats)


@pytest.mark.parametrize("preset", ["fig2", "fig4"])
def test_presets_are_byte_identical(tmp_path, preset):
    a = run_experiment(ExperimentConfig(preset, tmp_path / "a", seed=1, **SMALL[preset]))
    b = run_experiment(ExperimentConfig(preset, tmp_path / "b", seed=1, **SMALL[preset]))
    for name in a:
        assert a[name].read_bytes() == b[name].read_bytes(), name


def test_seed_changes_output(tmp_path):
    a = run_experiment(ExperimentConfig("fig2", tmp_path / "a", seed=1, samples=5, figures=False))
    b = run_experiment(ExperimentConfig("fig2", tmp_path / "b", seed=2, samples=5, figures=False))
    assert a["fig2_samples"].read_bytes() != b["fig2_samples"].read_bytes()
