"""Matplotlib renderings of the experiment tables.

CSV files are the normative output; figures are written next to them as SVG
with fixed metadata so reruns produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "graphspace",
    "svg.fonttype": "none",
}

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def figsize(width=6.0, ratio=GOLDEN):
    return (width, width * ratio)


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return path


def distance_boxplot(summary, samples, path):
    names = [row[0] for row in summary.rows]
    data = [[r[2] for r in samples.rows if r[0] == name] for name in names]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(6, 0.5))
        ax.boxplot(data, orientation="horizontal", widths=0.6, showfliers=True)
        ax.set_yticks(range(1, len(names) + 1))
        ax.set_yticklabels(names)
        ax.set_xlabel("ned(G, barycenter)")
        ax.invert_yaxis()
        return _save(fig, path)


def density_sweep(table, path):
    cols = {h: i for i, h in enumerate(table.header)}
    rows = np.array([[float(v) for v in r] for r in table.rows])
    dens = rows[:, cols["density"]]
    with plt.rc_context(STYLE):
        fig, (top, bottom) = plt.subplots(2, 1, figsize=figsize(5, 1.1), sharex=True)
        top.plot(dens, rows[:, cols["entropy"]], "k.-")
        top.set_ylabel("entropy (nats)")
        for key, label in (("edev_g1", "G1 random"), ("edev_g2", "G2 two communities"),
                           ("edev_g3", "G3 single pair")):
            bottom.plot(dens, rows[:, cols[key]], ".-", label=label)
        bottom.set_xscale("log")
        bottom.set_xlabel("density m / n^2")
        bottom.set_ylabel("EDEV")
        bottom.set_ylim(0, 1.05)
        bottom.legend(frameon=False)
        return _save(fig, path)


def reference_strip(dist, path, title=""):
    graphs = sorted({r[0] for r in dist.rows})
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize(6, 0.55))
        ref = [[r[3] for r in dist.rows if r[0] == g and r[1] == "reference"] for g in graphs]
        ax.boxplot(ref, orientation="horizontal", positions=range(len(graphs)), widths=0.5, showfliers=False)
        rng = np.random.default_rng(0)
        for g, vals in enumerate(ref):
            ax.plot(vals, g + rng.uniform(-0.15, 0.15, len(vals)), ".", color="0.6", ms=2)
        obs = [next(r[3] for r in dist.rows if r[0] == g and r[1] == "observed") for g in graphs]
        ax.plot(obs, range(len(graphs)), "D", color="C3", label="observed")
        ax.set_yticks(range(len(graphs)))
        ax.set_yticklabels([f"G{g}" for g in graphs])
        ax.set_xlabel("EDEV to candidate model")
        ax.set_title(title)
        ax.legend(frameon=False, loc="best")
        return _save(fig, path)


def pvalue_heatmap(table, path, delta=0.01):
    rows = max(r[0] for r in table.rows) + 1
    cols = max(r[1] for r in table.rows) + 1
    grid = np.full((rows, cols), np.nan)
    names = {}
    for r in table.rows:
        grid[r[0], r[1]] = r[3]
        names[r[0]] = r[2]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(0.5 * cols + 2, 0.4 * rows + 1))
        im = ax.imshow(np.log10(np.maximum(grid, 1e-4)), cmap="viridis", aspect="auto",
                       vmin=np.log10(1.0 / 500), vmax=0)
        for (i, j), p in np.ndenumerate(grid):
            ax.text(j, i, f"{p:.3f}", ha="center", va="center", fontsize=6,
                    color="w" if p <= delta else "k")
        ax.set_yticks(range(rows))
        ax.set_yticklabels([names[i] for i in range(rows)])
        ax.set_xticks(range(cols))
        ax.set_xlabel("graph")
        fig.colorbar(im, ax=ax, label="log10 p")
        return _save(fig, path)


def render(preset: str, tables, out_dir: Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    by_name = {t.name: t for t in tables}
    if preset == "fig2":
        return {"fig2_svg": distance_boxplot(by_name["fig2"], by_name["fig2_samples"],
                                             out_dir / "fig2.svg")}
    if preset == "fig3":
        return {"fig3_svg": density_sweep(by_name["fig3"], out_dir / "fig3.svg")}
    if preset in ("fig4", "fig5", "fig6"):
        return {f"{preset}_svg": reference_strip(by_name[preset], out_dir / f"{preset}.svg",
                                                 title=preset)}
    if preset == "fig7":
        return {"fig7_svg": pvalue_heatmap(by_name["fig7"], out_dir / "fig7.svg")}
    return {}
