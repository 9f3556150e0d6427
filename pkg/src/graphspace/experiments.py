"""Figure presets: regenerate each experiment as CSV tables (plus figures).

Every preset computes all of its rows first and only then writes files, in
a fixed order, so outputs are byte-identical for a fixed seed.

CSV layouts
-----------
fig2.csv          model,n_samples,min,q1,median,q3,max,mean,entropy_nats,entropy_approximate
fig2_samples.csv  model,sample,ned
fig3.csv          m,density,entropy,edev_g1,edev_g2,edev_g3
figN.csv          graph,role,sample,edev          (N = 4, 5, 6; role observed|reference)
figN_tests.csv    graph,model,y,mean_x,theta,p_value,reject,q,delta,inner_samples
fig7.csv          row,col,model,p_value,reject,theta,y,mean_x,q,delta,block_sizes
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .ensembles import entropy, sample
from .errors import SpecError
from .geometry import distance_to_barycenter, edev_exact
from .graph import Multigraph, Partition
from .inference import (fit_cfmd, fit_sbm, greedy_min_entropy_partition, permutation_test)
from .models import CFMD, ER, SBM, Waxman
from .rng import RngStream, pmap

log = logging.getLogger(__name__)

PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")
_PRESET_ID = {name: i for i, name in enumerate(PRESETS)}


@dataclass
class ExperimentConfig:
    """Preset name, output directory, seed and size overrides.

    ``scale`` multiplies every default count (samples, observed graphs,
    q, grid points); ``samples``, ``q`` and ``graphs`` override single
    counts after scaling.
    """

    preset: str
    out_dir: Path
    seed: int = 0
    scale: float = 1.0
    samples: Optional[int] = None
    q: Optional[int] = None
    graphs: Optional[int] = None
    figures: bool = True

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise SpecError(f"unknown preset {self.preset!r}; choose from {', '.join(PRESETS)}")
        if not self.scale > 0:
            raise SpecError("scale must be positive")
        for name in ("samples", "q", "graphs"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise SpecError(f"{name} must be >= 1")
        self.out_dir = Path(self.out_dir)

    def count(self, default: int, override: Optional[int] = None) -> int:
        if override is not None:
            return int(override)
        return max(1, int(round(default * self.scale)))

    @property
    def stream(self) -> RngStream:
        return RngStream(self.seed, _PRESET_ID[self.preset])


@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[list] = field(default_factory=list)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def write_csv(table: Table, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.header)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# Model zoo ------------------------------------------------------------------

def _blocks(sizes) -> Partition:
    return Partition(np.repeat(np.arange(len(sizes)), sizes))


def fig2_models() -> dict:
    """The five ensembles of the distance-to-barycenter experiment (n = 50)."""
    n = 50
    part = _blocks([10] * 5)
    hom = np.full((5, 5), 20)
    np.fill_diagonal(hom, 120)
    het = np.full((5, 5), 20)
    np.fill_diagonal(het, [40, 80, 120, 160, 200])
    return {
        "ER": ER(n, 1000),
        "CFM cst": CFMD.from_degrees(np.full(n, 20)),
        "CFM arith": CFMD.from_degrees(np.arange(1, n + 1)),
        "SBM hom": SBM(part, hom),
        "SBM het": SBM(part, het),
    }


def sbm0() -> SBM:
    """Two blocks of 25 nodes, 500 edges inside each, none between."""
    return SBM(_blocks([25, 25]), [[500, 0], [0, 500]])


def cfmd_arith(n: int = 50) -> CFMD:
    return CFMD.from_degrees(np.arange(n))


def even_odd(n: int = 50) -> Partition:
    return Partition(np.arange(n) % 2)


def fig7_models() -> dict:
    part = _blocks([25] * 4)
    models = {}
    for i, (m_int, m_ext) in enumerate([(90, 0), (75, 5), (60, 10), (45, 15)]):
        M = np.full((4, 4), m_ext)
        np.fill_diagonal(M, m_int)
        models[f"M{i}"] = SBM(part, M)
    for i, (alpha, beta) in enumerate([(0.1, 1.0), (0.08, 1.6), (0.06, 2.7), (0.04, 8.5)], start=4):
        models[f"M{i}"] = Waxman(100, alpha, beta)
    return models


def density_grid(points: int, n: int = 100, m_min: int = 100, m_max: int = 500_000) -> list[int]:
    grid = np.unique(np.round(np.geomspace(m_min, m_max, max(2, points))).astype(np.int64))
    return grid.tolist()


# Presets ---------------------------------------------------------------------

def run_fig2(cfg: ExperimentConfig):
    n_samples = cfg.count(100, cfg.samples)
    summary = Table("fig2", ["model", "n_samples", "min", "q1", "median", "q3", "max", "mean",
                             "entropy_nats", "entropy_approximate"])
    samples = Table("fig2_samples", ["model", "sample", "ned"])
    for idx, (name, spec) in enumerate(fig2_models().items()):
        dist = distance_to_barycenter(spec, n_samples, cfg.stream.child(idx))
        s = dist.summary
        ent = entropy(spec)
        summary.rows.append([name, n_samples, s["min"], s["q1"], s["median"], s["q3"], s["max"],
                             s["mean"], ent.nats, ent.approximate])
        samples.rows.extend([name, t, v] for t, v in enumerate(dist.values))
    return [summary, samples]


def two_communities(n: int, m: int, stream: RngStream) -> Multigraph:
    """Two perfectly separated halves, half of the edges placed uniformly in each."""
    h = n // 2
    W = np.zeros((n, n), dtype=np.int64)
    W[:h, :h] = sample(ER(h, m // 2), stream.child(0)).W
    W[h:, h:] = sample(ER(n - h, m - m // 2), stream.child(1)).W
    return Multigraph(W)


def single_pair(n: int, m: int) -> Multigraph:
    W = np.zeros((n, n), dtype=np.int64)
    W[0, 1] = m
    return Multigraph(W)


def run_fig3(cfg: ExperimentConfig, n: int = 100):
    grid = density_grid(cfg.count(15, cfg.samples), n)
    table = Table("fig3", ["m", "density", "entropy", "edev_g1", "edev_g2", "edev_g3"])

    def row(item):
        idx, m = item
        spec = ER(n, m)
        sub = cfg.stream.child(idx)
        g1 = sample(spec, sub.child(0))
        g2 = two_communities(n, m, sub.child(1))
        g3 = single_pair(n, m)
        return [m, m / (n * n), entropy(spec).nats,
                edev_exact(g1, spec), edev_exact(g2, spec), edev_exact(g3, spec)]

    table.rows = pmap(row, list(enumerate(grid)))
    return [table]


def _cross_model(cfg: ExperimentConfig, generator, fit: Callable, q_default: int, fig: str):
    n_graphs = cfg.count(5, cfg.graphs)
    q = cfg.count(q_default, cfg.q)
    inner = cfg.count(100, cfg.samples)
    dist = Table(fig, ["graph", "role", "sample", "edev"])
    tests = Table(f"{fig}_tests", ["graph", "model", "y", "mean_x", "theta", "p_value", "reject",
                                   "q", "delta", "inner_samples"])
    base = cfg.stream
    for g in range(n_graphs):
        G = sample(generator, base.child(0).child(g))
        candidate = fit(G)
        rep = permutation_test(G, candidate, q, 0.01, base.child(1).child(g), inner_samples=inner)
        dist.rows.append([g, "observed", 0, rep.y])
        dist.rows.extend([g, "reference", i, x] for i, x in enumerate(rep.x))
        tests.rows.append([g, rep.model, rep.y, float(rep.x.mean()), rep.theta, rep.p_value,
                           rep.reject, rep.q, rep.delta, rep.inner_samples])
    return [dist, tests]


def run_fig4(cfg: ExperimentConfig):
    part = even_odd(50)
    return _cross_model(cfg, cfmd_arith(50), lambda G: fit_sbm(G, part), 100, "fig4")


def run_fig5(cfg: ExperimentConfig):
    return _cross_model(cfg, sbm0(), fit_cfmd, 100, "fig5")


def run_fig6(cfg: ExperimentConfig):
    spec = sbm0()
    return _cross_model(cfg, spec, lambda G: spec, 200, "fig6")


def run_fig7(cfg: ExperimentConfig, p_blocks: int = 4, restarts: int = 10):
    n_graphs = cfg.count(8, cfg.graphs)
    q = cfg.count(200, cfg.q)
    table = Table("fig7", ["row", "col", "model", "p_value", "reject", "theta", "y", "mean_x",
                           "q", "delta", "block_sizes"])
    models = list(fig7_models().items())
    cells = [(r, c) for r in range(len(models)) for c in range(n_graphs)]
    base = cfg.stream

    def cell(rc):
        r, c = rc
        name, spec = models[r]
        G = sample(spec, base.child(0).child(r).child(c))
        part = greedy_min_entropy_partition(G, p_blocks, restarts, base.child(1).child(r).child(c))
        rep = permutation_test(G, fit_sbm(G, part), q, 0.01, base.child(2).child(r).child(c))
        sizes = "/".join(str(s) for s in part.sizes)
        return [r, c, name, rep.p_value, rep.reject, rep.theta, rep.y, float(rep.x.mean()),
                rep.q, rep.delta, sizes]

    table.rows = pmap(cell, cells)
    return [table]


RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4, "fig5": run_fig5,
           "fig6": run_fig6, "fig7": run_fig7}


def run_experiment(cfg: ExperimentConfig) -> dict[str, Path]:
    """Run a preset and write its CSVs (and figures) into ``cfg.out_dir``."""
    log.info("running %s (seed=%d, scale=%g)", cfg.preset, cfg.seed, cfg.scale)
    tables = RUNNERS[cfg.preset](cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for table in tables:
        path = cfg.out_dir / f"{table.name}.csv"
        write_csv(table, path)
        written[table.name] = path
    if cfg.figures:
        from .plotting import render
        for name, path in render(cfg.preset, tables, cfg.out_dir).items():
            written[name] = path
    return written
