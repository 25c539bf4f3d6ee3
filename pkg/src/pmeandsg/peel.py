"""Greedy peeling: SimplePeel (minimum degree), GenPeel (minimum numerator
drop) and k-core decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .graph import Graph, NodeSet
from .metrics import UndefinedMetricError, check_p, degree_transform


@dataclass
class PeelTrace:
    """Removal order plus the objective of every prefix set.

    ``prefix_objective[i]`` scores ``S_i = V - order[:i]``: f_p for finite
    ``p > 0``, otherwise the p-mean itself (min/max degree for -inf/+inf).
    Entries where the objective is undefined are NaN.
    """

    graph: Graph
    algo: str
    p: float
    order: np.ndarray
    prefix_objective: np.ndarray
    best_index: int

    @property
    def best_value(self) -> float:
        return float(self.prefix_objective[self.best_index])

    @property
    def best_set(self) -> NodeSet:
        return prefix_set(self.graph, self.order, self.best_index)


@dataclass
class CoreDecomposition:
    core_number: np.ndarray
    degeneracy: int
    maxcore_set: NodeSet

    def k_core(self, k: int) -> NodeSet:
        return NodeSet.from_mask(self.core_number >= k)


def prefix_set(g: Graph, order, i: int) -> NodeSet:
    mask = np.ones(g.n, dtype=bool)
    mask[np.asarray(order[:i], dtype=np.int64)] = False
    return NodeSet.from_mask(mask)


def _check_graph(g: Graph):
    if g.n == 0:
        raise ValueError("empty graph")


def score_prefixes(g: Graph, order, p: float) -> np.ndarray:
    """Objective of every prefix of ``order`` under ``p`` (see PeelTrace)."""
    p = check_p(p)
    order = np.asarray(order, dtype=np.int64)
    if p == math.inf:
        mode, phi = K.MODE_MAX, np.zeros(1)
    elif p == -math.inf:
        mode, phi = K.MODE_MIN, np.zeros(1)
    else:
        phi = degree_transform(p, int(g.degrees.max(initial=0)))
        mode = K.MODE_FP if p > 0 else K.MODE_LOG if p == 0 else K.MODE_NEG
    return K.score_order(g.indptr, g.indices, order, phi, mode, p if math.isfinite(p) else 0.0)


def _best_index(values: np.ndarray) -> int:
    if np.all(np.isnan(values)):
        raise UndefinedMetricError("every prefix contains a zero-degree node")
    # first maximum, i.e. the largest set on ties
    return int(np.nanargmax(values))


def _trace(g: Graph, algo: str, p: float, order: np.ndarray) -> PeelTrace:
    values = score_prefixes(g, order, p)
    return PeelTrace(g, algo, p, order, values, _best_index(values))


def simple_peel(g: Graph, p: float = 1.0) -> PeelTrace:
    """Peel a minimum-degree node at a time; score prefixes under ``p``.

    Ties go to the smallest node index.  O(m log n).
    """
    _check_graph(g)
    p = check_p(p)
    return _trace(g, "simple", p, K.simple_peel_order(g.indptr, g.indices))


def gen_peel(g: Graph, p: float) -> PeelTrace:
    """Peel the node whose removal costs the least of ``sum d_v(S)^p``.

    For ``p >= 1`` the best prefix is within a factor ``p + 1`` of the
    optimum in f_p.  Other finite ``p`` run as a heuristic; for ``p <= 0``
    zero-degree nodes carry an infinite penalty and go first.
    """
    _check_graph(g)
    p = check_p(p)
    if math.isinf(p):
        raise ValueError("gen_peel needs a finite p (p = inf is solved by V)")
    phi = degree_transform(p, int(g.degrees.max(initial=0)))
    return _trace(g, "gen", p, K.gen_peel_order(g.indptr, g.indices, phi))


def best_prefix(trace: PeelTrace, p: float) -> tuple[NodeSet, float]:
    """Re-score an existing removal order under another ``p``."""
    values = score_prefixes(trace.graph, trace.order, p)
    i = _best_index(values)
    return prefix_set(trace.graph, trace.order, i), float(values[i])


def rescore(trace: PeelTrace, p: float) -> PeelTrace:
    values = score_prefixes(trace.graph, trace.order, p)
    return PeelTrace(trace.graph, trace.algo, check_p(p), trace.order, values,
                     _best_index(values))


def core_decomposition(g: Graph) -> CoreDecomposition:
    _check_graph(g)
    core = K.core_numbers(g.indptr, g.indices)
    k = int(core.max())
    return CoreDecomposition(core, k, NodeSet.from_mask(core == k))
