"""Generalized-mean density objectives on induced degree sequences.

``p`` is a plain float throughout; ``math.inf`` and ``-math.inf`` select the
max- and min-degree limits.  For finite ``p > 0`` the peeling and exact
solvers work with the average p-th power degree ``f_p`` (same maximizers as
the p-mean itself).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph, NodeSet, as_nodeset, induced_degree_array

#: |p| at or above this is treated as the corresponding infinity by p_density.
INFINITY_THRESHOLD = 50.0


class UndefinedMetricError(ValueError):
    """The requested mean is undefined (zero degrees with p <= 0, empty set)."""


def check_p(p) -> float:
    p = float(p)
    if math.isnan(p):
        raise ValueError("p must not be NaN")
    return p


def parse_p(text: str) -> float:
    """Parse ``"2"``, ``"-inf"``, ``"inf"``, ``"+inf"`` and friends."""
    try:
        return check_p(float(text))
    except ValueError:
        raise ValueError(f"invalid p value: {text!r}") from None


def format_p(p: float) -> str:
    if math.isinf(p):
        return "inf" if p > 0 else "-inf"
    return repr(float(p))


def generalized_mean(x, p) -> float:
    x = np.asarray(x, dtype=np.float64)
    p = check_p(p)
    if x.size == 0:
        raise ValueError("generalized mean of an empty sequence")
    if np.any(x < 0):
        raise ValueError("generalized mean needs non-negative entries")
    if p == math.inf:
        return float(x.max())
    if p == -math.inf:
        if x.min() <= 0:
            raise UndefinedMetricError("undefined mean: non-positive entry with p <= 0")
        return float(x.min())
    if p <= 0 and x.min() <= 0:
        raise UndefinedMetricError("undefined mean: non-positive entry with p <= 0")
    top = x.max()
    if top == 0:
        return 0.0
    # work with log(x / top): no overflow for large |p| and, through
    # expm1/log1p, no collapse to the max for tiny |p|
    with np.errstate(divide="ignore"):
        logs = np.log(x / top)
    if p == 0:
        return float(top * math.exp(logs.mean()))
    return float(top * math.exp(math.log1p(np.mean(np.expm1(p * logs))) / p))


def degree_transform(p: float, max_degree: int) -> np.ndarray:
    """Table ``phi[d]`` for ``d = 0..max_degree``.

    ``phi`` is ``d**p`` for ``p > 0``, ``log d`` for ``p = 0`` and
    ``-(d**p)`` for ``p < 0``, so that a larger average of ``phi`` always
    means a larger p-mean.  ``phi[0]`` is ``-inf`` when ``p <= 0``.
    Every peeling engine and ``delta_j`` read this same table, which keeps
    their floating-point values bit-identical.
    """
    d = np.arange(max_degree + 1, dtype=np.float64)
    if p > 0:
        return d ** p
    with np.errstate(divide="ignore"):
        if p == 0:
            return np.log(d)
        out = -(d ** p)
    out[0] = -math.inf
    return out


def _degrees_of(g: Graph, s: NodeSet) -> np.ndarray:
    return induced_degree_array(g, s)[s.mask]


def fp_value(g: Graph, s, p: float) -> float:
    """Average p-th power induced degree of ``s`` (``p > 0``)."""
    s = as_nodeset(g, s)
    p = check_p(p)
    if not 0 < p < math.inf:
        raise ValueError("f_p needs a finite p > 0")
    d = _degrees_of(g, s)
    if d.size == 0:
        raise UndefinedMetricError("f_p of an empty set")
    return float(np.sum(d.astype(np.float64) ** p) / d.size)


def p_density(g: Graph, s, p: float, inf_threshold: float = INFINITY_THRESHOLD) -> float:
    """Generalized mean of the induced degrees of ``s``.

    Raises UndefinedMetricError if ``p <= 0`` and some node of ``s`` has no
    neighbor inside ``s``.
    """
    s = as_nodeset(g, s)
    p = check_p(p)
    if abs(p) >= inf_threshold:
        p = math.copysign(math.inf, p)
    d = _degrees_of(g, s)
    if d.size == 0:
        raise UndefinedMetricError("p-density of an empty set")
    if p <= 0 and d.min() == 0:
        raise UndefinedMetricError("p-density undefined for zero degrees")
    return generalized_mean(d, p)


def delta_j(g: Graph, s, degrees, j: int, p: float, phi: np.ndarray | None = None) -> float:
    """Drop in ``sum_{v in S} phi(d_v(S))`` caused by removing ``j`` from ``S``.

    For ``p > 0`` this is ``d_j^p + sum_{i in N(j) & S} d_i^p - (d_i - 1)^p``.
    ``degrees`` maps node to ``d_v(S)`` (a dict or an array indexed by node).
    """
    s = as_nodeset(g, s)
    if j not in s:
        raise ValueError(f"node {j} is not in the set")
    if phi is None:
        phi = degree_transform(check_p(p), g.degrees.max(initial=0))
    total = phi[degrees[j]]
    for i in g.neighbors(j).tolist():
        if s.mask[i]:
            di = degrees[i]
            total += phi[di] - phi[di - 1]
    return float(total)


def numerator(g: Graph, s, p: float) -> float:
    """``sum_{v in S} d_v(S)^p`` for finite ``p > 0``."""
    s = as_nodeset(g, s)
    return float(np.sum(_degrees_of(g, s).astype(np.float64) ** p))


@dataclass
class DensityReport:
    set_size: int
    edge_density: float
    avg_degree: float
    avg_squared_degree: float
    avg_pth_power_degree: float | None
    max_degree: int
    min_degree: int
    m_p: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def density_report(g: Graph, s, p: float) -> DensityReport:
    """Size, edge density and degree statistics of ``s``.

    ``avg_pth_power_degree`` and ``m_p`` are None where undefined (f_p
    needs a finite ``p > 0``; ``m_p`` needs positive degrees when ``p <= 0``).
    """
    s = as_nodeset(g, s)
    p = check_p(p)
    d = _degrees_of(g, s).astype(np.float64)
    k = d.size
    if k == 0:
        raise UndefinedMetricError("report for an empty set")
    edges = d.sum() / 2
    fp = float(np.mean(d ** p)) if 0 < p < math.inf else None
    try:
        mp = p_density(g, s, p)
    except UndefinedMetricError:
        mp = None
    return DensityReport(
        set_size=k,
        edge_density=float(edges / (k * (k - 1) / 2)) if k > 1 else 0.0,
        avg_degree=float(d.mean()),
        avg_squared_degree=float(np.mean(d ** 2)),
        avg_pth_power_degree=fp,
        max_degree=int(d.max()),
        min_degree=int(d.min()),
        m_p=mp,
    )
