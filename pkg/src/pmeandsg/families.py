"""Deterministic generators for adversarial and illustrative graph families.

Node numbering (all contiguous, labels are the decimal indices):

* ``Lemma4(d, D)``: ``0..D-1`` is the large side of ``K_{D,d}``,
  ``D..D+d-1`` the small side, then ``D`` cliques of ``d+2`` nodes each.
* ``Banded(n, k)``: ``0..n-1``; node ``i`` links to ``i+1..min(i+k, n-1)``.
* ``Tightness(p, k, n, copies)``: the banded part on ``0..n-1``, then
  ``copies`` cliques on ``r+1`` nodes, ``r = ceil(2k / (p+1)^(1/p) + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .graph import Graph


def _positive(**kw):
    for name, val in kw.items():
        if int(val) != val or val < 1:
            raise ValueError(f"{name} must be a positive integer, got {val}")


@dataclass(frozen=True)
class Clique:
    size: int

    def __post_init__(self):
        _positive(size=self.size)


@dataclass(frozen=True)
class CompleteBipartite:
    a: int
    b: int

    def __post_init__(self):
        _positive(a=self.a, b=self.b)


@dataclass(frozen=True)
class Lemma4:
    d: int
    D: int

    def __post_init__(self):
        _positive(d=self.d, D=self.D)


@dataclass(frozen=True)
class Banded:
    n: int
    k: int

    def __post_init__(self):
        _positive(n=self.n, k=self.k)
        if not self.k < self.n / 2:
            raise ValueError(f"banded graph needs k < n/2, got n={self.n}, k={self.k}")


@dataclass(frozen=True)
class Tightness:
    p: float
    k: int
    n: int
    copies: int | None = None

    def __post_init__(self):
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ValueError("tightness family needs a finite p >= 1")
        Banded(self.n, self.k)
        if self.copies is not None:
            _positive(copies=self.copies)

    @property
    def r(self) -> int:
        return clique_order(self.p, self.k)

    @property
    def n_copies(self) -> int:
        return self.n if self.copies is None else self.copies


@dataclass(frozen=True)
class ErdosRenyi:
    n: int
    prob: float
    seed: int = 0

    def __post_init__(self):
        _positive(n=self.n)
        if not 0 <= self.prob <= 1:
            raise ValueError("prob must lie in [0, 1]")


FamilySpec = Union[Clique, CompleteBipartite, Lemma4, Banded, Tightness, ErdosRenyi]


def clique_order(p: float, k: int) -> int:
    """``r`` such that the clique ``K_{r+1}`` outlasts ``Banded(n, k)``."""
    return math.ceil(2 * k / (p + 1) ** (1 / p) + 1)


def _clique_edges(size: int, offset: int = 0) -> np.ndarray:
    iu, ju = np.triu_indices(size, k=1)
    return np.column_stack([iu, ju]) + offset


def _disjoint_cliques(size: int, copies: int, offset: int) -> np.ndarray:
    base = _clique_edges(size)
    shifts = offset + size * np.arange(copies, dtype=np.int64)
    return (base[None, :, :] + shifts[:, None, None]).reshape(-1, 2)


def _bipartite_edges(a: int, b: int, offset: int = 0) -> np.ndarray:
    i, j = np.meshgrid(np.arange(a), np.arange(a, a + b), indexing="ij")
    return np.column_stack([i.ravel(), j.ravel()]) + offset


def _banded_edges(n: int, k: int, offset: int = 0) -> np.ndarray:
    parts = [np.column_stack([np.arange(n - s), np.arange(s, n)]) for s in range(1, k + 1)]
    return np.concatenate(parts) + offset


def generate(spec: FamilySpec) -> Graph:
    if isinstance(spec, Clique):
        return Graph.from_edges(spec.size, _clique_edges(spec.size))
    if isinstance(spec, CompleteBipartite):
        return Graph.from_edges(spec.a + spec.b, _bipartite_edges(spec.a, spec.b))
    if isinstance(spec, Lemma4):
        d, D = spec.d, spec.D
        v1 = D + d
        edges = np.concatenate([_bipartite_edges(D, d), _disjoint_cliques(d + 2, D, v1)])
        return Graph.from_edges(v1 + D * (d + 2), edges)
    if isinstance(spec, Banded):
        return Graph.from_edges(spec.n, _banded_edges(spec.n, spec.k))
    if isinstance(spec, Tightness):
        size, copies = spec.r + 1, spec.n_copies
        edges = np.concatenate([_banded_edges(spec.n, spec.k),
                                _disjoint_cliques(size, copies, spec.n)])
        return Graph.from_edges(spec.n + size * copies, edges)
    if isinstance(spec, ErdosRenyi):
        rng = np.random.default_rng(spec.seed)
        n = spec.n
        chunks = []
        for i in range(n - 1):
            hit = np.flatnonzero(rng.random(n - i - 1) < spec.prob)
            if hit.size:
                chunks.append(np.column_stack([np.full(hit.size, i), hit + i + 1]))
        edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
        return Graph.from_edges(n, edges)
    raise TypeError(f"unknown family spec {spec!r}")


def lemma4_v1(spec: Lemma4) -> np.ndarray:
    """Indices of the complete bipartite part."""
    return np.arange(spec.D + spec.d)


def lemma4_v1_value(d: int, D: int, p: float) -> float:
    """Closed-form f_p of the complete bipartite part ``K_{D,d}``."""
    return (D * d ** p + d * D ** p) / (d + D)


def delta_graph(g: Graph, p: float) -> float:
    """Smallest numerator drop over single-node removals from the whole graph,
    ``min_v d_v^p + sum_{u in N(v)} d_u^p - (d_u - 1)^p``."""
    if g.n == 0:
        raise ValueError("empty graph")
    if not p >= 1:
        raise ValueError("delta_graph needs p >= 1")
    d = g.degrees.astype(np.float64)
    step = np.where(d > 0, d ** p - np.maximum(d - 1, 0) ** p, 0.0)
    around = np.bincount(g.rows, weights=step[g.indices], minlength=g.n)
    return float(np.min(d ** p + around))
