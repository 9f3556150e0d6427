"""Model fitting and the bootstrapped permutation test for model relevance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ensembles import entropy, is_samplable, log_multiset, sample
from .errors import DegenerateModelError, DimensionError, DomainError, UnsupportedModelError
from .geometry import edev_exact, edev_mc, reference_weight
from .graph import Multigraph, Partition, degrees
from .models import CFMD, ER, SBM, ModelSpec, model_name, spec_to_dict
from .rng import as_stream, pmap

# Ties in |theta*| >= |theta| are decided with this absolute slack so that
# exactly equal rationals are not split by float rounding.
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class FitResult:
    spec: ModelSpec
    source: str


def block_matrix(G: Multigraph, B: Partition) -> np.ndarray:
    """``M[r, s]``: total weight from nodes of block ``r`` to nodes of block ``s``."""
    if B.n != G.n:
        raise DimensionError(f"partition covers {B.n} nodes, graph has {G.n}")
    p = B.p
    b = B.block_of
    idx = (b[:, None] * p + b[None, :]).ravel()
    return np.bincount(idx, weights=G.W.ravel(), minlength=p * p).reshape(p, p).astype(np.int64)


def fit_sbm(G: Multigraph, B: Partition) -> SBM:
    """SBM whose ensemble contains ``G``: block sums read off ``G``."""
    return SBM(B, block_matrix(G, B))


def fit_cfmd(G: Multigraph) -> CFMD:
    """Configuration model with the degree sequence of ``G``."""
    if G.m < 1:
        raise DegenerateModelError("cannot fit a configuration model to a graph without edges")
    return CFMD(degrees(G))


def _initial_labels(n, p, rng):
    labels = rng.integers(0, p, size=n)
    labels[rng.permutation(n)[:p]] = np.arange(p)
    return labels


def _merge_costs(M, sizes):
    """Entropy increase from merging blocks ``r < s``; ``inf`` elsewhere."""
    B = sizes.size
    H = log_multiset(np.outer(sizes, sizes), M)
    R, C, D = H.sum(1), H.sum(0), np.diag(H)
    old = R[:, None] + R[None, :] + C[:, None] + C[None, :]
    old -= D[:, None] + D[None, :] + H + H.T
    merged = sizes[:, None] + sizes[None, :]
    other = np.ones((B, B, B), dtype=bool)
    idx = np.arange(B)
    other[idx, :, idx] = False
    other[:, idx, idx] = False
    cells = merged[:, :, None] * sizes[None, None, :]
    rows = M[:, None, :] + M[None, :, :]
    cols = M.T[:, None, :] + M.T[None, :, :]
    new = np.where(other, log_multiset(cells, rows) + log_multiset(cells, cols), 0.0).sum(-1)
    inner = np.diag(M)[:, None] + np.diag(M)[None, :] + M + M.T
    new += log_multiset(merged * merged, inner)
    cost = new - old
    cost[np.tril_indices(B)] = np.inf
    return cost


def _agglomerative_labels(W, p):
    """Merge singleton blocks down to ``p``, cheapest entropy increase first.

    Each round merges disjoint cheapest pairs, at most a quarter of the
    current blocks, then recomputes the costs.
    """
    labels = np.arange(W.shape[0])
    M = W.copy()
    sizes = np.ones(W.shape[0])
    while sizes.size > p:
        B = sizes.size
        cost = _merge_costs(M, sizes)
        budget = max(1, min(B - p, B // 4))
        target = np.arange(B)
        used = np.zeros(B, dtype=bool)
        for flat in np.argsort(cost, axis=None, kind="stable"):
            r, s = divmod(int(flat), B)
            if budget == 0 or not np.isfinite(cost[r, s]):
                break
            if used[r] or used[s]:
                continue
            used[r] = used[s] = True
            target[s] = r
            budget -= 1
        keep = np.unique(target)
        relabel = np.searchsorted(keep, target)
        P = np.zeros((keep.size, B))
        P[relabel, np.arange(B)] = 1.0
        M = P @ M @ P.T
        sizes = P @ sizes
        labels = relabel[labels]
    return labels


def _local_search(W, labels, p, rng, max_sweeps):
    n = W.shape[0]
    sizes = np.bincount(labels, minlength=p)
    M = np.bincount((labels[:, None] * p + labels[None, :]).ravel(), weights=W.ravel(),
                    minlength=p * p).reshape(p, p)
    diag = np.diagonal(W)
    eye = np.eye(p)

    def total(Ms, cells):
        return log_multiset(cells, Ms).sum(axis=(-2, -1))

    current = float(total(M, np.outer(sizes, sizes)))
    for _ in range(max_sweeps):
        moved = False
        for u in rng.permutation(n):
            a = labels[u]
            if sizes[a] == 1:
                continue
            e_out = np.bincount(labels, weights=W[u], minlength=p)
            e_in = np.bincount(labels, weights=W[:, u], minlength=p)
            e_out[a] -= diag[u]
            e_in[a] -= diag[u]
            # M with u removed from block a
            base = M.copy()
            base[a, :] -= e_out
            base[:, a] -= e_in
            base[a, a] -= diag[u]
            # candidates: u inserted into each block t
            cand = np.broadcast_to(base, (p, p, p)).copy()
            cand += eye[:, :, None] * e_out[None, None, :]
            cand += eye[:, None, :] * e_in[None, :, None]
            cand += (eye[:, :, None] * eye[:, None, :]) * diag[u]
            new_sizes = np.broadcast_to(sizes, (p, p)).copy()
            new_sizes[:, a] -= 1
            new_sizes[np.arange(p), np.arange(p)] += 1
            cells = new_sizes[:, :, None] * new_sizes[:, None, :]
            scores = total(cand, cells)
            t = int(np.argmin(scores))
            if t != a and scores[t] < current - 1e-9:
                labels[u] = t
                sizes = new_sizes[t].copy()
                M = cand[t]
                current = float(scores[t])
                moved = True
        if not moved:
            break
    return labels, current


def greedy_min_entropy_partition(G: Multigraph, p_blocks: int, restarts: int = 10,
                                 stream=None, max_sweeps: int = 100) -> Partition:
    """Partition into ``p_blocks`` non-empty blocks minimizing the fitted SBM entropy.

    Local search by single-node moves from random starts; the best local
    minimum over ``restarts`` is returned. Restart 0 starts from an
    agglomerative merge of singleton blocks, the others from random labels;
    restart ``r`` uses ``stream.child(r)``.
    """
    n = G.n
    if int(p_blocks) != p_blocks or p_blocks < 1:
        raise DomainError("p_blocks must be a positive integer")
    if p_blocks > n:
        raise DomainError(f"p_blocks={p_blocks} exceeds node count {n}")
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    if p_blocks == 1:
        return Partition(np.zeros(n, dtype=np.int64))
    if p_blocks == n:
        return Partition(np.arange(n))
    stream = as_stream(stream)
    W = G.W.astype(float)

    def run(r):
        rng = stream.child(r).generator()
        if r == 0:
            labels = _agglomerative_labels(W, p_blocks)
        else:
            labels = _initial_labels(n, p_blocks, rng)
        return _local_search(W, labels, p_blocks, rng, max_sweeps)

    results = pmap(run, range(restarts))
    best_labels, _ = min(results, key=lambda res: res[1])
    return Partition.canonical(best_labels)


def partition_entropy(G: Multigraph, B: Partition) -> float:
    return entropy(fit_sbm(G, B)).nats


def permutation_p_value(x, y: float):
    """Two-sided leave-one-out permutation test.

    Returns ``(theta, theta_stars, p)``, where ``theta = mean(x) - y``,
    ``theta_stars[0] = theta`` and ``theta_stars[j]`` swaps ``y`` with
    ``x[j-1]``; ``p`` is the fraction of the ``q + 1`` arrangements with
    ``|theta*| >= |theta|``.
    """
    x = np.asarray(x, dtype=float)
    q = x.size
    if q < 1:
        raise DomainError("need at least one reference value")
    total = x.sum()
    theta = total / q - y
    swapped = (total - x + y) / q - x
    stars = np.concatenate(([theta], swapped))
    count = 1 + int(np.count_nonzero(np.abs(swapped) >= abs(theta) - _TIE_TOL))
    return float(theta), stars, count / (q + 1)


@dataclass(frozen=True, eq=False)
class TestReport:
    y: float
    x: np.ndarray
    theta: float
    theta_stars: np.ndarray
    p_value: float
    delta: float
    reject: bool
    exact: bool = True
    inner_samples: Optional[int] = None
    model: str = ""

    __test__ = False  # not a pytest class

    @property
    def q(self) -> int:
        return int(self.x.size)

    def to_dict(self, full: bool = True) -> dict:
        d = {"model": self.model, "y": self.y, "theta": self.theta, "p_value": self.p_value,
             "delta": self.delta, "reject": self.reject, "q": self.q,
             "mean_x": float(self.x.mean()), "exact": self.exact,
             "inner_samples": self.inner_samples}
        if full:
            d["x"] = self.x.tolist()
            d["theta_stars"] = self.theta_stars.tolist()
        return d


def permutation_test(G: Multigraph, spec: ModelSpec, q: int, delta: float = 0.01,
                     stream=None, inner_samples: int = 100) -> TestReport:
    """Test whether ``G`` looks like a draw from ``spec``.

    Draws ``q`` graphs from ``spec`` (graph ``i`` on ``stream.child(0).child(i)``)
    and compares their EDEVs to that of ``G``. EDEV is exact for ER and SBM,
    otherwise a Monte-Carlo mean over ``inner_samples`` draws.
    """
    if int(q) != q or q < 1:
        raise DomainError("q must be a positive integer")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    if not is_samplable(spec):
        raise UnsupportedModelError(f"sampler unsupported for {model_name(spec)} model")
    reference_weight(G, spec)
    stream = as_stream(stream)
    exact = isinstance(spec, (ER, SBM))
    draws, inner = stream.child(0), stream.child(1)

    def score(H, t):
        if exact:
            return edev_exact(H, spec)
        return edev_mc(H, spec, inner_samples, inner.child(t)).mean

    y = score(G, 0)
    x = np.asarray(pmap(lambda i: score(sample(spec, draws.child(i)), i + 1), range(int(q))))
    theta, stars, p = permutation_p_value(x, y)
    return TestReport(y=float(y), x=x, theta=theta, theta_stars=stars, p_value=p,
                      delta=float(delta), reject=bool(p <= delta), exact=exact,
                      inner_samples=None if exact else int(inner_samples),
                      model=model_name(spec))
