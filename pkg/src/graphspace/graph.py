"""Dense weight-matrix graphs, edit distances and the graph text format.

Graphs are labelled directed multigraphs with self-loops, stored as a dense
``n x n`` weight matrix. Undirected graphs are represented symmetrically.

Text format (UTF-8)::

    n=<int> m=<int>
    i j w
    ...

one line per nonzero entry, 0-based indices, row-major order on save.
Real-valued graphs (barycenters) use the same layout with decimal weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionError, DomainError, ParseError, SpecError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class _WeightMatrix:
    W: np.ndarray

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def __eq__(self, other):
        if not isinstance(other, _WeightMatrix):
            return NotImplemented
        return self.W.shape == other.W.shape and bool(np.array_equal(self.W, other.W))

    def __hash__(self):
        return hash((self.W.shape, self.W.tobytes()))


@dataclass(frozen=True, eq=False)
class Multigraph(_WeightMatrix):
    """Directed multigraph with non-negative integer edge multiplicities.

    ``W[i, j]`` is the number of edges ``i -> j``; self-loops allowed.
    """

    W: np.ndarray
    m: int = field(init=False)

    def __post_init__(self):
        W = np.asarray(self.W)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] < 1:
            raise DimensionError(f"weight matrix must be square with n >= 1, got shape {W.shape}")
        if W.dtype.kind == "f":
            if not np.all(np.isfinite(W)) or np.any(W != np.round(W)):
                raise DomainError("multigraph weights must be integers")
        elif W.dtype.kind not in "iub":
            raise DomainError(f"unsupported weight dtype {W.dtype}")
        W = W.astype(np.int64)
        if np.any(W < 0):
            raise DomainError("edge weights must be non-negative")
        object.__setattr__(self, "W", _frozen(W))
        object.__setattr__(self, "m", int(W.sum()))

    @classmethod
    def empty(cls, n: int) -> Multigraph:
        return cls(np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_edges(cls, n: int, edges) -> Multigraph:
        """Build from an iterable of ``(i, j)`` or ``(i, j, w)`` tuples."""
        W = np.zeros((n, n), dtype=np.int64)
        for e in edges:
            i, j = e[0], e[1]
            W[i, j] += e[2] if len(e) > 2 else 1
        return cls(W)

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class RealGraph(_WeightMatrix):
    """Graph with non-negative real weights; used for ensemble barycenters."""

    W: np.ndarray
    m: float = field(init=False)

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] < 1:
            raise DimensionError(f"weight matrix must be square with n >= 1, got shape {W.shape}")
        if not np.all(np.isfinite(W)):
            raise DomainError("weights must be finite")
        if np.any(W < 0):
            raise DomainError("edge weights must be non-negative")
        object.__setattr__(self, "W", _frozen(W))
        object.__setattr__(self, "m", float(math.fsum(W.ravel())))

    def __repr__(self):
        return f"RealGraph(n={self.n}, m={self.m:g})"


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of ``n`` nodes to ``p`` non-empty blocks labelled ``0..p-1``."""

    block_of: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.block_of)
        if b.ndim != 1 or b.size < 1:
            raise SpecError("block_of must be a non-empty 1-d array")
        if b.dtype.kind == "f":
            if np.any(b != np.round(b)):
                raise SpecError("block indices must be integers")
        b = b.astype(np.int64)
        if b.min() < 0:
            raise SpecError("block indices must be non-negative")
        used = np.bincount(b)
        if np.any(used == 0):
            raise SpecError("every block index in [0, p) must be used by at least one node")
        object.__setattr__(self, "block_of", _frozen(b))

    @property
    def n(self) -> int:
        return self.block_of.size

    @property
    def p(self) -> int:
        return int(self.block_of.max()) + 1

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.block_of, minlength=self.p)

    def members(self, r: int) -> np.ndarray:
        return np.flatnonzero(self.block_of == r)

    @classmethod
    def from_blocks(cls, blocks) -> Partition:
        """Build from a list of node lists, e.g. ``[[0, 1], [2]]``."""
        n = sum(len(b) for b in blocks)
        block_of = np.full(n, -1, dtype=np.int64)
        for r, nodes in enumerate(blocks):
            block_of[list(nodes)] = r
        if np.any(block_of < 0):
            raise SpecError("blocks must cover nodes 0..n-1 exactly once")
        return cls(block_of)

    @classmethod
    def canonical(cls, labels) -> Partition:
        """Relabel arbitrary labels to ``0..p-1`` in order of first appearance."""
        _, first, inv = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        return cls(order[inv])

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return bool(np.array_equal(self.block_of, other.block_of))

    def __hash__(self):
        return hash(self.block_of.tobytes())

    def __repr__(self):
        return f"Partition(n={self.n}, p={self.p})"


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    k_out: np.ndarray
    k_in: np.ndarray

    def __post_init__(self):
        ko = np.asarray(self.k_out)
        ki = np.asarray(self.k_in)
        if ko.ndim != 1 or ko.shape != ki.shape or ko.size < 1:
            raise SpecError("k_out and k_in must be 1-d arrays of equal non-zero length")
        for k in (ko, ki):
            if k.dtype.kind == "f" and np.any(k != np.round(k)):
                raise SpecError("degrees must be integers")
        ko = ko.astype(np.int64)
        ki = ki.astype(np.int64)
        if np.any(ko < 0) or np.any(ki < 0):
            raise SpecError("degrees must be non-negative")
        if ko.sum() != ki.sum():
            raise SpecError(f"sum(k_out)={ko.sum()} differs from sum(k_in)={ki.sum()}")
        object.__setattr__(self, "k_out", _frozen(ko))
        object.__setattr__(self, "k_in", _frozen(ki))

    @property
    def n(self) -> int:
        return self.k_out.size

    @property
    def m(self) -> int:
        return int(self.k_out.sum())

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return bool(np.array_equal(self.k_out, other.k_out) and np.array_equal(self.k_in, other.k_in))

    def __hash__(self):
        return hash((self.k_out.tobytes(), self.k_in.tobytes()))


def degrees(G: Multigraph) -> DegreeSequence:
    """Out-degrees are row sums, in-degrees column sums."""
    return DegreeSequence(G.W.sum(axis=1), G.W.sum(axis=0))


def _weights(G) -> np.ndarray:
    if isinstance(G, _WeightMatrix):
        return G.W
    return np.asarray(G)


def edit_distance(G, H) -> float:
    """Entrywise L1 distance between the weight matrices of ``G`` and ``H``."""
    a, b = _weights(G), _weights(H)
    if a.shape != b.shape:
        raise DimensionError(f"size mismatch: {a.shape[0]} vs {b.shape[0]} nodes")
    if a.dtype.kind in "iu" and b.dtype.kind in "iu":
        return float(np.abs(a - b).sum())
    return float(math.fsum(np.abs(a - b).ravel()))


def normalized_edit_distance(G, H, m_ref: float) -> float:
    """Edit distance divided by ``2 * m_ref``.

    Lies in ``[0, 1]`` whenever both graphs carry total weight ``m_ref``.
    """
    if not m_ref > 0:
        raise DomainError(f"m_ref must be positive, got {m_ref}")
    return edit_distance(G, H) / (2.0 * m_ref)


def _format_weight(w) -> str:
    if isinstance(w, (int, np.integer)):
        return str(int(w))
    return repr(float(w))


def save_graph(G, path) -> None:
    """Write ``G`` in the graph text format."""
    W = G.W
    lines = [f"n={G.n} m={_format_weight(G.m)}"]
    rows, cols = np.nonzero(W)
    for i, j in zip(rows.tolist(), cols.tolist()):
        lines.append(f"{i} {j} {_format_weight(W[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse(text: str, real: bool):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = lines[0].split()
    fields = {}
    for tok in header:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "m") or key in fields:
            raise ParseError(f"bad header {lines[0]!r}, expected 'n=<int> m=<int>'", 1)
        fields[key] = val
    if set(fields) != {"n", "m"}:
        raise ParseError(f"bad header {lines[0]!r}, expected 'n=<int> m=<int>'", 1)
    try:
        n = int(fields["n"])
        m = float(fields["m"]) if real else int(fields["m"])
    except ValueError:
        raise ParseError(f"bad header {lines[0]!r}", 1) from None
    if n < 1:
        raise ParseError("n must be >= 1", 1)

    W = np.zeros((n, n), dtype=float if real else np.int64)
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'i j w', got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if real else int(parts[2])
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"node index out of range [0, {n}) in {line!r}", lineno)
        if w < 0 or (real and not math.isfinite(w)):
            raise ParseError(f"invalid weight in {line!r}", lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate entry ({i}, {j})", lineno)
        seen.add((i, j))
        W[i, j] = w
    return n, m, W


def load_graph(path) -> Multigraph:
    """Read a multigraph written by :func:`save_graph`."""
    _, m, W = _parse(Path(path).read_text(encoding="utf-8"), real=False)
    G = Multigraph(W)
    if G.m != m:
        raise ParseError(f"header declares m={m} but entries sum to {G.m}", 1)
    return G


def load_real_graph(path) -> RealGraph:
    _, m, W = _parse(Path(path).read_text(encoding="utf-8"), real=True)
    G = RealGraph(W)
    if not math.isclose(G.m, m, rel_tol=1e-9, abs_tol=1e-12):
        raise ParseError(f"header declares m={m} but entries sum to {G.m}", 1)
    return G
