"""Edit distance expected value (EDEV) and related geometric quantities.

``EDEV(G, M)`` is the mean normalized edit distance between a fixed graph
``G`` and a random member of the ensemble of ``M``. It is estimated by
Monte-Carlo for every samplable model, and computed exactly for ER and SBM,
where each entry of a random member is binomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln

from .ensembles import barycenter, sample, scale_sbm
from .errors import (DimensionError, DomainError, NormalizationError, UndefinedError,
                     UnsupportedModelError)
from .graph import Multigraph, Partition, degrees, normalized_edit_distance
from .models import CFMD, ER, SBM, ModelSpec, Waxman, model_name
from .rng import RngStream, as_stream, pmap

_TAIL_MASS = 1e-12


@dataclass(frozen=True, eq=False)
class EdevEstimate:
    mean: float
    std_error: float
    n_samples: int
    per_sample: np.ndarray

    @classmethod
    def from_values(cls, values) -> EdevEstimate:
        v = np.asarray(values, dtype=float)
        sd = float(v.std(ddof=1)) if v.size > 1 else 0.0
        return cls(float(v.mean()), sd / math.sqrt(v.size), int(v.size), v)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error, "n_samples": self.n_samples}


def quartiles(values) -> tuple[float, float, float]:
    """Tukey hinges: medians of the halves below/above the median, excluding
    the median itself when the count is odd."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("no values")
    if v.size == 1:
        return float(v[0]), float(v[0]), float(v[0])
    half = v.size // 2
    lower = v[:half]
    upper = v[half + (v.size % 2):]
    return float(np.median(lower)), float(np.median(v)), float(np.median(upper))


@dataclass(frozen=True, eq=False)
class DistanceDistribution:
    values: np.ndarray

    @property
    def summary(self) -> dict:
        q1, med, q3 = quartiles(self.values)
        return {"min": float(self.values.min()), "q1": q1, "median": med, "q3": q3,
                "max": float(self.values.max()), "mean": float(self.values.mean())}


def reference_weight(G: Multigraph, spec: ModelSpec) -> float:
    """Normalization constant used when comparing ``G`` to ``spec``.

    Microcanonical models fix the edge count, and ``G`` must carry exactly
    that weight. Waxman graphs have no fixed count; the observed weight is
    used instead.
    """
    if G.n != spec.n:
        raise DimensionError(f"graph has {G.n} nodes, model has {spec.n}")
    if isinstance(spec, (ER, CFMD, SBM)):
        if G.m != spec.m:
            raise NormalizationError(
                f"graph total weight {G.m} differs from model edge count {spec.m}")
        m = spec.m
    elif isinstance(spec, Waxman):
        m = G.m
    else:
        raise UnsupportedModelError(f"sampler unsupported for {model_name(spec)} model")
    if m <= 0:
        raise DomainError("normalized edit distance undefined for graphs without edges")
    return float(m)


def edev_mc(G: Multigraph, spec: ModelSpec, n_samples: int, stream) -> EdevEstimate:
    """Monte-Carlo EDEV; sample ``t`` is drawn on ``stream.child(t)``."""
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    m = reference_weight(G, spec)
    stream = as_stream(stream)
    values = pmap(lambda t: normalized_edit_distance(G, sample(spec, stream.child(t)), m),
                  range(int(n_samples)))
    return EdevEstimate.from_values(values)


def _binomial_pmf_window(N: int, p: float):
    mean = N * p
    sd = math.sqrt(N * p * (1 - p))
    half = int(math.ceil(12 * sd + 12))
    while True:
        lo = max(0, int(math.floor(mean)) - half)
        hi = min(N, int(math.ceil(mean)) + half)
        x = np.arange(lo, hi + 1, dtype=float)
        logpmf = (gammaln(N + 1) - gammaln(x + 1) - gammaln(N - x + 1)
                  + x * math.log(p) + (N - x) * math.log1p(-p))
        pmf = np.exp(logpmf)
        if (lo == 0 and hi == N) or 1.0 - pmf.sum() < _TAIL_MASS:
            return x, pmf
        half *= 2


def binomial_abs_devs(a, N: int, p: float) -> np.ndarray:
    """``E|a - X|`` for ``X ~ Binomial(N, p)``, vectorized over ``a``.

    The pmf is summed over a window around the mean that holds all but
    ``1e-12`` of the probability mass.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    if N < 0:
        raise DomainError("N must be non-negative")
    a = np.asarray(a, dtype=float)
    if N == 0 or p == 0.0:
        return np.abs(a)
    if p == 1.0:
        return np.abs(a - N)
    x, pmf = _binomial_pmf_window(int(N), float(p))
    return np.abs(a.reshape(-1, 1) - x).dot(pmf).reshape(a.shape)


def binomial_abs_dev(a: int, N: int, p: float) -> float:
    """``E|a - X|`` for ``X ~ Binomial(N, p)``."""
    return float(binomial_abs_devs(a, N, p))


def _abs_dev_total(W_cells: np.ndarray, N: int, p: float) -> float:
    vals, counts = np.unique(W_cells, return_counts=True)
    return float(np.dot(counts, binomial_abs_devs(vals, N, p)))


def edev_exact(G: Multigraph, spec: ModelSpec) -> float:
    """Exact EDEV for ER and SBM ensembles.

    Each entry of a random member is Binomial(m, 1/n^2) for ER and
    Binomial(M[r, s], 1/(|b_r||b_s|)) for an SBM cell in block pair
    ``(r, s)``; the expectation of the entrywise absolute difference is
    summed cell by cell.
    """
    if not isinstance(spec, (ER, SBM)):
        raise UnsupportedModelError(
            f"exact EDEV unsupported for {model_name(spec)} model (marginals not binomial)")
    m = reference_weight(G, spec)
    W = G.W
    if isinstance(spec, ER):
        total = _abs_dev_total(W.ravel(), spec.m, 1.0 / (spec.n * spec.n))
    else:
        part = spec.partition
        members = [part.members(r) for r in range(part.p)]
        total = 0.0
        for r, rows in enumerate(members):
            block_rows = W[rows]
            for s, cols in enumerate(members):
                cells = block_rows[:, cols]
                N = int(spec.M[r, s])
                if N == 0:
                    total += float(cells.sum())
                else:
                    total += _abs_dev_total(cells.ravel(), N, 1.0 / (rows.size * cols.size))
    return total / (2.0 * m)


def edev(G: Multigraph, spec: ModelSpec, n_samples: int = 100, stream=None) -> float:
    """Exact EDEV when available, Monte-Carlo mean otherwise."""
    if isinstance(spec, (ER, SBM)):
        return edev_exact(G, spec)
    return edev_mc(G, spec, n_samples, stream).mean


def distance_to_barycenter(spec: ModelSpec, n_samples: int, stream) -> DistanceDistribution:
    """Normalized edit distance from ``n_samples`` ensemble draws to the barycenter."""
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    stream = as_stream(stream)
    center = barycenter(spec)

    def one(t):
        G = sample(spec, stream.child(t))
        m = spec.m if isinstance(spec, (ER, CFMD, SBM)) else center.m
        return normalized_edit_distance(G, center, m)

    return DistanceDistribution(np.asarray(pmap(one, range(int(n_samples))), dtype=float))


def modularity(G: Multigraph, B: Partition) -> float:
    """Directed modularity: observed minus configuration-model weight inside blocks, over 2m."""
    if B.n != G.n:
        raise DimensionError(f"partition covers {B.n} nodes, graph has {G.n}")
    if G.m == 0:
        raise UndefinedError("modularity undefined for a graph without edges")
    m = float(G.m)
    b = B.block_of
    p = B.p
    deg = degrees(G)
    inside = np.bincount((b[:, None] * p + b[None, :]).ravel(), weights=G.W.ravel(),
                         minlength=p * p)
    inside = inside.reshape(p, p).diagonal().sum()
    out_r = np.bincount(b, weights=deg.k_out, minlength=p)
    in_r = np.bincount(b, weights=deg.k_in, minlength=p)
    return float((inside - np.dot(out_r, in_r) / m) / (2.0 * m))


def sbm_barycenter_distance(S1: SBM, S2: SBM) -> float:
    """Normalized edit distance between two SBM barycenters.

    Computed in rational arithmetic over the overlap of the two partitions,
    so the value is bit-identical after scaling both block matrices by the
    same factor.
    """
    if not isinstance(S1, SBM) or not isinstance(S2, SBM):
        raise UnsupportedModelError("sbm_barycenter_distance expects two SBM specs")
    if S1.n != S2.n:
        raise DomainError(f"node counts differ: {S1.n} vs {S2.n}")
    if S1.m != S2.m:
        raise DomainError(f"edge counts differ: {S1.m} vs {S2.m}")
    if S1.m == 0:
        raise DomainError("normalized edit distance undefined for empty models")
    b1, b2 = S1.partition, S2.partition
    n1, n2 = b1.sizes, b2.sizes
    overlap = np.zeros((b1.p, b2.p), dtype=np.int64)
    np.add.at(overlap, (b1.block_of, b2.block_of), 1)
    groups = [(int(r1), int(r2), int(overlap[r1, r2])) for r1, r2 in zip(*np.nonzero(overlap))]
    total = Fraction(0)
    for r1, r2, c_i in groups:
        for s1, s2, c_j in groups:
            w1 = Fraction(int(S1.M[r1, s1]), int(n1[r1] * n1[s1]))
            w2 = Fraction(int(S2.M[r2, s2]), int(n2[r2] * n2[s2]))
            total += c_i * c_j * abs(w1 - w2)
    return float(total / (2 * S1.m))


class ProbeRow(NamedTuple):
    k: int
    ned_to_barycenter: float
    edev: float


def convergence_probe(S1: SBM, S2: SBM, k_schedule: Sequence[int], n_samples: int,
                      stream) -> list[ProbeRow]:
    """Track concentration of scaled SBMs.

    For each ``k`` draws graphs from ``S1`` scaled by ``k`` and averages
    their distance to that model's own barycenter and their exact EDEV
    against ``S2`` scaled by ``k``.
    """
    ks = [int(k) for k in k_schedule]
    if not ks or any(k < 1 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError("k_schedule must be a non-empty strictly increasing list of positive integers")
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    if S1.n != S2.n or S1.m != S2.m:
        raise DomainError("S1 and S2 must share node count and edge count")
    stream = as_stream(stream)
    rows = []
    for idx, k in enumerate(ks):
        s1k, s2k = scale_sbm(S1, k), scale_sbm(S2, k)
        center = barycenter(s1k)
        sub = stream.child(idx)

        def one(t):
            G = sample(s1k, sub.child(t))
            return normalized_edit_distance(G, center, s1k.m), edev_exact(G, s2k)

        vals = np.asarray(pmap(one, range(int(n_samples))))
        rows.append(ProbeRow(k, float(vals[:, 0].mean()), float(vals[:, 1].mean())))
    return rows
