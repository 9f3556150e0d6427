"""Model specifications for the six graph model families, plus JSON I/O.

Every spec is an immutable dataclass. The JSON layout is a flat object
tagged by ``"model"``::

    {"model": "er", "n": 50, "m": 1000}
    {"model": "cfmd", "k_out": [...], "k_in": [...]}
    {"model": "sbm", "block_of": [...], "M": [[...], ...]}
    {"model": "waxman", "n": 100, "alpha": 0.1, "beta": 1.0,
     "positions": [[x, y], ...]}                      # positions optional
    {"model": "gravity", "positions": [...], "k_out": [...], "k_in": [...],
     "deterrence": {"kind": "exp", "c": 1.0, "r": 0.1}}
                  # or {"kind": "table", "d": [...], "f": [...]}
    {"model": "radiation", "positions": [...], "k_out": [...], "k_in": [...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ParseError, SpecError
from .graph import DegreeSequence, Partition, _frozen


def _positions(pos, n=None, unit_square=False) -> Optional[np.ndarray]:
    if pos is None:
        return None
    P = np.asarray(pos, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2:
        raise SpecError("positions must be an array of [x, y] pairs")
    if n is not None and P.shape[0] != n:
        raise SpecError(f"expected {n} positions, got {P.shape[0]}")
    if not np.all(np.isfinite(P)):
        raise SpecError("positions must be finite")
    if unit_square and (np.any(P < 0) or np.any(P > 1)):
        raise SpecError("positions must lie in [0, 1]^2")
    return _frozen(P)


def _strengths(k, name) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.ndim != 1 or np.any(k < 0) or not np.all(np.isfinite(k)):
        raise SpecError(f"{name} must be a 1-d array of non-negative numbers")
    return _frozen(k)


@dataclass(frozen=True)
class ER:
    """Erdos-Renyi multigraph ensemble: ``m`` edges on ``n`` labelled nodes."""

    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise SpecError("ER: n must be a positive integer")
        if int(self.m) != self.m or self.m < 0:
            raise SpecError("ER: m must be a non-negative integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True, eq=False)
class CFMD:
    """Directed configuration model with exact in/out degree sequences."""

    degrees: DegreeSequence

    @classmethod
    def from_degrees(cls, k_out, k_in=None) -> CFMD:
        return cls(DegreeSequence(k_out, k_out if k_in is None else k_in))

    @property
    def n(self) -> int:
        return self.degrees.n

    @property
    def m(self) -> int:
        return self.degrees.m

    @property
    def k_out(self):
        return self.degrees.k_out

    @property
    def k_in(self):
        return self.degrees.k_in

    def __eq__(self, other):
        return isinstance(other, CFMD) and self.degrees == other.degrees

    def __hash__(self):
        return hash(self.degrees)


@dataclass(frozen=True, eq=False)
class SBM:
    """Microcanonical stochastic blockmodel.

    ``M[r, s]`` is the exact number of edges from block ``r`` to block ``s``.
    """

    partition: Partition
    M: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M)
        if M.dtype.kind == "f" and np.any(M != np.round(M)):
            raise SpecError("SBM: block matrix entries must be integers")
        M = M.astype(np.int64)
        p = self.partition.p
        if M.shape != (p, p):
            raise SpecError(f"SBM: block matrix shape {M.shape} does not match {p} blocks")
        if np.any(M < 0):
            raise SpecError("SBM: block matrix entries must be non-negative")
        object.__setattr__(self, "M", _frozen(M))

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def m(self) -> int:
        return int(self.M.sum())

    def __eq__(self, other):
        return (isinstance(other, SBM) and self.partition == other.partition
                and np.array_equal(self.M, other.M))

    def __hash__(self):
        return hash((self.partition, self.M.tobytes()))


@dataclass(frozen=True, eq=False)
class Waxman:
    """Waxman random geometric graph, ``P(u~v) = beta * exp(-d / (alpha * L))``.

    Probabilities above 1 (``beta > 1``) are clipped. Without ``positions``
    the nodes are scattered uniformly in the unit square at sampling time.
    """

    n: int
    alpha: float
    beta: float
    positions: Optional[np.ndarray] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise SpecError("Waxman: n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        if not self.alpha > 0:
            raise SpecError("Waxman: alpha must be > 0")
        if not self.beta > 0:
            raise SpecError("Waxman: beta must be > 0")
        object.__setattr__(self, "positions", _positions(self.positions, self.n, unit_square=True))

    def __eq__(self, other):
        if not isinstance(other, Waxman):
            return NotImplemented
        same_pos = (self.positions is None and other.positions is None) or (
            self.positions is not None and other.positions is not None
            and np.array_equal(self.positions, other.positions))
        return (self.n, self.alpha, self.beta) == (other.n, other.alpha, other.beta) and same_pos

    def __hash__(self):
        return hash((self.n, self.alpha, self.beta))


@dataclass(frozen=True, eq=False)
class Deterrence:
    """Distance deterrence function for the gravity model.

    ``kind="exp"`` evaluates ``c * exp(-d / r)``; ``kind="table"`` linearly
    interpolates the samples ``(d, f)`` and holds the end values outside.
    """

    kind: str = "exp"
    c: float = 1.0
    r: float = 1.0
    d: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == "exp":
            if not self.r > 0 or not self.c >= 0:
                raise SpecError("deterrence: need c >= 0 and r > 0")
        elif self.kind == "table":
            if self.d is None or self.f is None:
                raise SpecError("deterrence table needs 'd' and 'f'")
            d = np.asarray(self.d, dtype=float)
            f = np.asarray(self.f, dtype=float)
            if d.ndim != 1 or d.shape != f.shape or d.size < 1:
                raise SpecError("deterrence table: 'd' and 'f' must be equal-length 1-d arrays")
            if np.any(np.diff(d) <= 0):
                raise SpecError("deterrence table: 'd' must be strictly increasing")
            if np.any(f < 0):
                raise SpecError("deterrence table: 'f' must be non-negative")
            object.__setattr__(self, "d", _frozen(d))
            object.__setattr__(self, "f", _frozen(f))
        else:
            raise SpecError(f"unknown deterrence kind {self.kind!r}")

    def __call__(self, dist):
        dist = np.asarray(dist, dtype=float)
        if self.kind == "exp":
            return self.c * np.exp(-dist / self.r)
        return np.interp(dist, self.d, self.f)

    def to_dict(self) -> dict:
        if self.kind == "exp":
            return {"kind": "exp", "c": self.c, "r": self.r}
        return {"kind": "table", "d": self.d.tolist(), "f": self.f.tolist()}


@dataclass(frozen=True, eq=False)
class Gravity:
    """Gravity model; only the barycenter is available (no sampler)."""

    positions: Optional[np.ndarray]
    k_out: np.ndarray
    k_in: np.ndarray
    deterrence: Deterrence = field(default_factory=Deterrence)

    def __post_init__(self):
        object.__setattr__(self, "k_out", _strengths(self.k_out, "k_out"))
        object.__setattr__(self, "k_in", _strengths(self.k_in, "k_in"))
        if self.k_out.size != self.k_in.size:
            raise SpecError("Gravity: k_out and k_in must have the same length")
        object.__setattr__(self, "positions", _positions(self.positions, self.k_out.size))

    @property
    def n(self) -> int:
        return self.k_out.size


@dataclass(frozen=True, eq=False)
class Radiation:
    """Radiation model; only the barycenter is available (no sampler)."""

    positions: Optional[np.ndarray]
    k_out: np.ndarray
    k_in: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "k_out", _strengths(self.k_out, "k_out"))
        object.__setattr__(self, "k_in", _strengths(self.k_in, "k_in"))
        if self.k_out.size != self.k_in.size:
            raise SpecError("Radiation: k_out and k_in must have the same length")
        object.__setattr__(self, "positions", _positions(self.positions, self.k_out.size))

    @property
    def n(self) -> int:
        return self.k_out.size


ModelSpec = Union[ER, CFMD, SBM, Waxman, Gravity, Radiation]

MODEL_NAMES = {ER: "er", CFMD: "cfmd", SBM: "sbm", Waxman: "waxman",
               Gravity: "gravity", Radiation: "radiation"}


def model_name(spec) -> str:
    return MODEL_NAMES[type(spec)]


def spec_from_dict(d: dict) -> ModelSpec:
    if not isinstance(d, dict) or "model" not in d:
        raise SpecError("spec must be a JSON object with a 'model' field")
    kind = str(d["model"]).lower()

    def need(key):
        if key not in d:
            raise SpecError(f"{kind} spec is missing field {key!r}")
        return d[key]

    if kind == "er":
        return ER(need("n"), need("m"))
    if kind == "cfmd":
        return CFMD(DegreeSequence(need("k_out"), need("k_in")))
    if kind == "sbm":
        return SBM(Partition(need("block_of")), need("M"))
    if kind == "waxman":
        return Waxman(need("n"), float(need("alpha")), float(need("beta")), d.get("positions"))
    if kind == "gravity":
        det = d.get("deterrence", {"kind": "exp"})
        if not isinstance(det, dict):
            raise SpecError("deterrence must be an object")
        det = Deterrence(**{k: v for k, v in det.items() if k in ("kind", "c", "r", "d", "f")})
        return Gravity(d.get("positions"), need("k_out"), need("k_in"), det)
    if kind == "radiation":
        return Radiation(d.get("positions"), need("k_out"), need("k_in"))
    raise SpecError(f"unknown model {d['model']!r}")


def spec_to_dict(spec: ModelSpec) -> dict:
    if isinstance(spec, ER):
        return {"model": "er", "n": spec.n, "m": spec.m}
    if isinstance(spec, CFMD):
        return {"model": "cfmd", "k_out": spec.k_out.tolist(), "k_in": spec.k_in.tolist()}
    if isinstance(spec, SBM):
        return {"model": "sbm", "block_of": spec.partition.block_of.tolist(), "M": spec.M.tolist()}
    if isinstance(spec, Waxman):
        d = {"model": "waxman", "n": spec.n, "alpha": spec.alpha, "beta": spec.beta}
        if spec.positions is not None:
            d["positions"] = spec.positions.tolist()
        return d
    if isinstance(spec, (Gravity, Radiation)):
        d = {"model": model_name(spec), "k_out": spec.k_out.tolist(), "k_in": spec.k_in.tolist()}
        if spec.positions is not None:
            d["positions"] = spec.positions.tolist()
        if isinstance(spec, Gravity):
            d["deterrence"] = spec.deterrence.to_dict()
        return d
    raise SpecError(f"not a model spec: {spec!r}")


def load_spec(path) -> ModelSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return spec_from_dict(data)


def save_spec(spec: ModelSpec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n", encoding="utf-8")
