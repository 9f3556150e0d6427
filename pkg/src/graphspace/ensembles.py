"""Sampling, barycenters and entropies of graph ensembles.

Sampling follows the edge-placement / stub-matching construction rather
than a uniform draw over distinct weight matrices. The two differ on
multigraphs; edge placement is the one whose marginals are binomial, which
is what every closed-form barycenter and exact EDEV here relies on.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, DomainError, SpecError, UnsupportedModelError
from .graph import Multigraph, RealGraph
from .models import CFMD, ER, SBM, Gravity, ModelSpec, Radiation, Waxman, model_name
from .rng import RngStream, as_stream


def _pairwise_distances(P: np.ndarray) -> np.ndarray:
    diff = P[:, None, :] - P[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def waxman_probabilities(positions: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Connection probability matrix of a Waxman graph (zero diagonal).

    ``L`` is the largest pairwise distance among ``positions``.
    """
    D = _pairwise_distances(np.asarray(positions, dtype=float))
    L = D.max()
    if L > 0:
        prob = beta * np.exp(-D / (alpha * L))
    else:
        prob = np.full_like(D, float(beta))
    np.minimum(prob, 1.0, out=prob)
    np.fill_diagonal(prob, 0.0)
    return prob


def _block_layout(spec: SBM):
    part = spec.partition
    order = np.argsort(part.block_of, kind="stable")
    sizes = part.sizes
    start = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    return order, sizes, start


def sample(spec: ModelSpec, stream) -> Multigraph:
    """Draw one graph from the ensemble of ``spec``.

    ``stream`` is an :class:`RngStream` (or an int seed). Identical streams
    give identical graphs.
    """
    rng = as_stream(stream).generator()

    if isinstance(spec, ER):
        n = spec.n
        cells = rng.integers(0, n * n, size=spec.m)
        return Multigraph(np.bincount(cells, minlength=n * n).reshape(n, n))

    if isinstance(spec, CFMD):
        n = spec.n
        out_stubs = np.repeat(np.arange(n), spec.k_out)
        in_stubs = rng.permutation(np.repeat(np.arange(n), spec.k_in))
        return Multigraph(np.bincount(out_stubs * n + in_stubs, minlength=n * n).reshape(n, n))

    if isinstance(spec, SBM):
        n = spec.n
        p = spec.partition.p
        order, sizes, start = _block_layout(spec)
        pair = np.repeat(np.arange(p * p), spec.M.ravel())
        r, s = pair // p, pair % p
        u = order[start[r] + rng.integers(0, sizes[r])]
        v = order[start[s] + rng.integers(0, sizes[s])]
        return Multigraph(np.bincount(u * n + v, minlength=n * n).reshape(n, n))

    if isinstance(spec, Waxman):
        n = spec.n
        pos = spec.positions if spec.positions is not None else rng.random((n, 2))
        prob = waxman_probabilities(pos, spec.alpha, spec.beta)
        iu, ju = np.triu_indices(n, k=1)
        hit = rng.random(iu.size) < prob[iu, ju]
        W = np.zeros((n, n), dtype=np.int64)
        W[iu[hit], ju[hit]] = 1
        W[ju[hit], iu[hit]] = 1
        return Multigraph(W)

    if isinstance(spec, (Gravity, Radiation)):
        raise UnsupportedModelError(f"sampler unsupported for {model_name(spec)} model")
    raise SpecError(f"not a model spec: {spec!r}")


def sample_many(spec: ModelSpec, count: int, stream) -> list[Multigraph]:
    """``count`` graphs drawn on sub-streams ``stream.child(0..count-1)``."""
    stream = as_stream(stream)
    return [sample(spec, stream.child(t)) for t in range(count)]


def _radiation_barycenter(P, k_out, k_in) -> np.ndarray:
    n = k_out.size
    D = _pairwise_distances(P)
    W = np.zeros((n, n))
    for i in range(n):
        order = np.argsort(D[i], kind="stable")
        d_sorted = D[i, order]
        csum = np.concatenate(([0.0], np.cumsum(k_in[order])))
        n_zero = np.searchsorted(d_sorted, 0.0, side="right")
        below = np.searchsorted(d_sorted, D[i], side="left")
        # C(i, j) = {u : 0 < d(i, u) < d(i, j)}
        s = csum[np.maximum(below, n_zero)] - csum[n_zero]
        num = k_out[i] * k_in[i] * k_in
        den = (k_in[i] + s) * (k_in[i] + k_in + s)
        with np.errstate(divide="ignore", invalid="ignore"):
            row = np.where(den > 0, num / den, 0.0)
        W[i] = row
    np.fill_diagonal(W, 0.0)
    return W


def barycenter(spec: ModelSpec) -> RealGraph:
    """Entrywise expected weight matrix of the ensemble."""
    if isinstance(spec, ER):
        n = spec.n
        return RealGraph(np.full((n, n), spec.m / (n * n)))

    if isinstance(spec, CFMD):
        if spec.m == 0:
            return RealGraph(np.zeros((spec.n, spec.n)))
        return RealGraph(np.outer(spec.k_out, spec.k_in) / spec.m)

    if isinstance(spec, SBM):
        sizes = spec.partition.sizes.astype(float)
        density = spec.M / np.outer(sizes, sizes)
        b = spec.partition.block_of
        return RealGraph(density[np.ix_(b, b)])

    if isinstance(spec, Waxman):
        if spec.positions is None:
            raise ConfigurationError("Waxman barycenter requires node positions")
        return RealGraph(waxman_probabilities(spec.positions, spec.alpha, spec.beta))

    if isinstance(spec, Gravity):
        if spec.positions is None:
            raise ConfigurationError("Gravity barycenter requires node positions")
        D = _pairwise_distances(spec.positions)
        return RealGraph(np.outer(spec.k_out, spec.k_in) * spec.deterrence(D))

    if isinstance(spec, Radiation):
        if spec.positions is None:
            raise ConfigurationError("Radiation barycenter requires node positions")
        return RealGraph(_radiation_barycenter(spec.positions, spec.k_out, spec.k_in))

    raise SpecError(f"not a model spec: {spec!r}")


class Entropy(NamedTuple):
    """Ensemble entropy in nats; ``approximate`` marks estimates."""

    nats: float
    approximate: bool = False

    def __float__(self):
        return float(self.nats)


def log_multiset(cells, items):
    """``ln C(cells + items - 1, items)``: ways to put ``items`` edges in ``cells`` cells."""
    cells = np.asarray(cells, dtype=float)
    items = np.asarray(items, dtype=float)
    out = gammaln(cells + items) - gammaln(items + 1) - gammaln(cells)
    return np.where(items == 0, 0.0, out)


def entropy(spec: ModelSpec) -> Entropy:
    """Log-cardinality of the microcanonical ensemble.

    The CFMD value ``ln m! - sum ln k_out! - sum ln k_in!`` counts stub
    configurations modulo stub relabelling; it ignores the overcount from
    parallel edges and is returned flagged as approximate.
    """
    if isinstance(spec, ER):
        return Entropy(float(log_multiset(spec.n * spec.n, spec.m)))
    if isinstance(spec, SBM):
        sizes = spec.partition.sizes
        cells = np.outer(sizes, sizes)
        return Entropy(float(log_multiset(cells, spec.M).sum()))
    if isinstance(spec, CFMD):
        value = gammaln(spec.m + 1) - gammaln(spec.k_out + 1).sum() - gammaln(spec.k_in + 1).sum()
        return Entropy(float(value), approximate=True)
    raise UnsupportedModelError(
        f"entropy unsupported for {model_name(spec)} model (canonical, not microcanonical)")


def scale_sbm(spec: SBM, k: int) -> SBM:
    """Same partition, block matrix multiplied by ``k``."""
    if not isinstance(spec, SBM):
        raise UnsupportedModelError("scale_sbm expects an SBM spec")
    if int(k) != k or k < 1:
        raise DomainError(f"scale factor must be a positive integer, got {k}")
    return SBM(spec.partition, spec.M * int(k))


def total_edges(spec: ModelSpec) -> int:
    """Fixed total weight of every graph in a microcanonical ensemble."""
    if isinstance(spec, (ER, CFMD, SBM)):
        return spec.m
    raise UnsupportedModelError(f"{model_name(spec)} ensemble has no fixed edge count")


def is_samplable(spec) -> bool:
    return isinstance(spec, (ER, CFMD, SBM, Waxman))
