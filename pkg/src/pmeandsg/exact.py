"""Exact p-mean densest subgraph for ``p >= 1``.

The decision "is there S with f_p(S) >= alpha" is answered by maximizing
the supermodular ``psi(S) = sum_{v in S} d_v(S)^p - alpha |S|``, i.e.
minimizing the submodular ``-psi`` with the Fujishige-Wolfe minimum-norm
point algorithm.  A binary search on ``alpha`` drives the decisions.
A brute-force enumerator serves as the oracle for small graphs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graph import Graph, NodeSet, as_nodeset, induced_degree_array
from .metrics import UndefinedMetricError, check_p, fp_value, p_density

log = logging.getLogger(__name__)

BRUTE_FORCE_CAP = 22


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best_bound: float | None = None):
        super().__init__(message)
        self.best_bound = best_bound


@dataclass(frozen=True)
class SubmodularProblem:
    graph: Graph
    p: float
    alpha: float

    def __post_init__(self):
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ValueError("supermodularity not guaranteed for p < 1")
        if not self.alpha >= 0:
            raise ValueError("alpha must be non-negative")

    def power_table(self) -> np.ndarray:
        return np.arange(self.graph.degrees.max(initial=0) + 2, dtype=np.float64) ** self.p


@dataclass
class ExactResult:
    """``best_fp`` is f_p of ``best_set`` for finite ``p > 0`` and the
    p-mean itself otherwise (brute force only)."""

    best_set: NodeSet
    best_fp: float
    method: str
    p: float
    alpha_trace: list[tuple[float, bool, int]] = field(default_factory=list)
    iterations: int = 0


def psi_value(prob: SubmodularProblem, s) -> float:
    s = as_nodeset(prob.graph, s)
    d = induced_degree_array(prob.graph, s)[s.mask]
    return float(np.sum(d.astype(np.float64) ** prob.p) - prob.alpha * d.size)


def marginal_gain(prob: SubmodularProblem, s, degrees, v: int) -> float:
    """``psi(S + v) - psi(S)`` in O(deg v); ``degrees`` holds ``d_u(S)``."""
    g = prob.graph
    s = as_nodeset(g, s)
    if v in s:
        raise ValueError(f"node {v} is already in the set")
    p = prob.p
    gain = -prob.alpha
    c = 0
    for u in g.neighbors(v).tolist():
        if s.mask[u]:
            du = degrees[u]
            gain += (du + 1) ** p - du ** p
            c += 1
    return float(gain + c ** p)


class _Oracle:
    """Greedy linear optimization over the base polytope of ``F = -psi``."""

    def __init__(self, prob: SubmodularProblem):
        self.g = prob.graph
        self.pw = prob.power_table()
        self.alpha = float(prob.alpha)
        self.calls = 0

    def gains(self, order: np.ndarray) -> np.ndarray:
        self.calls += 1
        return K.greedy_gains(self.g.indptr, self.g.indices, order, self.pw, self.alpha)

    def vertex(self, w: np.ndarray) -> np.ndarray:
        order = np.argsort(w, kind="stable")
        q = np.empty(len(w))
        q[order] = -self.gains(order)
        return q


def _affine_minimizer(P: np.ndarray) -> np.ndarray:
    """Barycentric weights of the min-norm point of the affine hull of the
    rows of ``P``."""
    k = P.shape[0]
    M = np.empty((k + 1, k + 1))
    M[0, 0] = 0.0
    M[0, 1:] = 1.0
    M[1:, 0] = 1.0
    M[1:, 1:] = P @ P.T
    rhs = np.zeros(k + 1)
    rhs[0] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return sol[1:]


def _min_norm_point(oracle: _Oracle, n: int, start: np.ndarray, tol: float,
                    max_iter: int) -> tuple[np.ndarray, bool]:
    P = oracle.vertex(start)[None, :]
    lam = np.ones(1)
    x = P[0].copy()
    eps = 1e-12
    for _ in range(max_iter):
        q = oracle.vertex(x)
        scale = max(q @ q, float(np.max(np.einsum("ij,ij->i", P, P))), 1.0)
        if x @ x - x @ q <= tol * scale:
            return x, True
        P = np.vstack([P, q])
        lam = np.append(lam, 0.0)
        while True:
            mu = _affine_minimizer(P)
            if np.all(mu > eps):
                lam = mu
                x = mu @ P
                break
            neg = mu <= eps
            ratio = lam[neg] / np.maximum(lam[neg] - mu[neg], eps)
            theta = min(1.0, float(ratio.min()))
            lam = theta * mu + (1 - theta) * lam
            keep = lam > eps
            if keep.sum() == 0:
                keep[np.argmax(lam)] = True
            P, lam = P[keep], lam[keep]
            lam = lam / lam.sum()
            x = lam @ P
            if P.shape[0] == 1:
                break
    return x, False


def _sweep(oracle: _Oracle, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """psi of every prefix of the ascending order of ``x`` (index 0 = empty)."""
    order = np.argsort(x, kind="stable")
    psi = np.concatenate([[0.0], np.cumsum(oracle.gains(order))])
    return order, psi


def minimize_submodular(prob: SubmodularProblem, tol: float = 1e-10,
                        max_iter: int | None = None) -> tuple[NodeSet, float]:
    """Maximize ``psi`` (minimize the submodular ``-psi``).

    Candidates are the prefix sets of the sorted min-norm point, each
    evaluated directly; among near-ties the largest set wins so that a
    non-empty maximizer is preferred over the empty set.
    """
    g = prob.graph
    n = g.n
    oracle = _Oracle(prob)
    max_iter = max_iter or 10 * n * n
    x, ok = _min_norm_point(oracle, n, np.zeros(n), tol, max_iter)
    if not ok:
        log.debug("min-norm point hit %d iterations; restarting from greedy", max_iter)
        x, ok = _min_norm_point(oracle, n, x, tol, max_iter)
    order, psi = _sweep(oracle, x)
    if not ok:
        raise ConvergenceError("min-norm point did not converge", best_bound=float(psi.max()))
    band = 1e-9 * max(1.0, float(np.abs(psi).max()))
    best = float(psi.max())
    k = int(np.flatnonzero(psi >= best - band).max())
    return NodeSet(n, order[:k]), float(psi[k])


def exact_pmean(g: Graph, p: float, method: str = "submodular", tol: float | None = None,
                cap: int = BRUTE_FORCE_CAP, solver_tol: float = 1e-10) -> ExactResult:
    """Optimal f_p subgraph for ``p >= 1``.

    Binary search on ``alpha`` over ``[0, sum_v d_v^p]``.  Each probe
    maximizes psi; a non-empty maximizer with psi >= -1e-9 * hi counts as
    YES and lifts the lower bound to the f_p of the set found.  ``tol``
    defaults to ``1/n^2`` for integer ``p`` (distinct f_p values then differ
    by at least that much) and 1e-9 otherwise.
    """
    p = check_p(p)
    if method == "bruteforce":
        return brute_force_opt(g, p, cap)
    if method != "submodular":
        raise ValueError(f"unknown method {method!r}")
    if g.n == 0:
        raise ValueError("empty graph")
    if not (p >= 1 and math.isfinite(p)):
        raise ValueError("supermodularity not guaranteed for p < 1")
    n = g.n
    if tol is None:
        tol = 1.0 / (n * n) if float(p).is_integer() else 1e-9
    if tol <= 0:
        raise ValueError("tol must be positive")

    best = NodeSet.full(n)
    best_fp = fp_value(g, best, p)
    lo, hi = 0.0, float(np.sum(g.degrees.astype(np.float64) ** p))
    trace: list[tuple[float, bool, int]] = []
    band = 1e-9 * max(hi, 1.0)
    while hi - lo >= tol:
        alpha = 0.5 * (lo + hi)
        s, val = minimize_submodular(SubmodularProblem(g, p, alpha), tol=solver_tol)
        yes = s.size > 0 and val >= -band
        trace.append((alpha, yes, s.size))
        if yes:
            f = fp_value(g, s, p)
            if f > best_fp:
                best, best_fp = s, f
            lo = max(alpha, f)
        else:
            hi = alpha
    return ExactResult(best, best_fp, "submodular", p, trace, len(trace))


def brute_force_opt(g: Graph, p: float, cap: int = BRUTE_FORCE_CAP) -> ExactResult:
    """Enumerate every non-empty subset and return the p-mean maximizer.

    Ties (within 1e-12 relative) go to the smaller set, then to the
    lexicographically smaller sorted member list.
    """
    p = check_p(p)
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n > cap:
        raise ValueError(f"brute force limited to n <= {cap}, got {n}")
    A = g.adjacency_matrix().astype(np.float64)
    bit = np.arange(n, dtype=np.int64)
    finite_pos = 0 < p < math.inf
    best_val = -math.inf
    cands: list[tuple[int, float]] = []
    chunk = 1 << 15
    total = 1 << n
    for start in range(1, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        M = ((codes[:, None] >> bit) & 1).astype(np.float64)
        D = (M @ A) * M
        val = _subset_values(D, M, M.sum(axis=1), p, finite_pos)
        if np.all(np.isnan(val)):
            continue
        best_val = max(best_val, float(np.nanmax(val)))
        thresh = best_val - 1e-12 * max(1.0, abs(best_val))
        hit = val >= thresh
        cands = [c for c in cands if c[1] >= thresh]
        cands.extend(zip(codes[hit].tolist(), val[hit].tolist()))
    if best_val == -math.inf:
        raise UndefinedMetricError("every subset contains a zero-degree node")

    def members(code):
        return [i for i in range(n) if code >> i & 1]

    code = min((c for c, _ in cands), key=lambda c: (bin(c).count("1"), members(c)))
    s = NodeSet(n, members(code))
    value = fp_value(g, s, p) if finite_pos else p_density(g, s, p)
    return ExactResult(s, value, "bruteforce", p, [], total - 1)


def _subset_values(D, M, size, p, finite_pos):
    if finite_pos:
        return np.sum(D ** p, axis=1) / size
    inside = M > 0
    if p == math.inf:
        return np.where(inside, D, -np.inf).max(axis=1)
    has_zero = np.any(inside & (D == 0), axis=1)
    if p == -math.inf:
        val = np.where(inside, D, np.inf).min(axis=1)
    elif p == 0:
        with np.errstate(divide="ignore"):
            val = np.exp(np.where(inside, np.log(np.where(inside, D, 1.0)), 0.0).sum(axis=1) / size)
    else:
        with np.errstate(divide="ignore"):
            val = (np.where(inside, np.where(inside, D, 1.0) ** p, 0.0).sum(axis=1) / size) ** (1 / p)
    return np.where(has_zero, np.nan, val)
