"""Undirected simple graphs in compressed adjacency (CSR) form.

Nodes carry arbitrary string labels from the input file and are mapped to
dense indices ``0..n-1`` in first-appearance order.  All algorithms work on
indices; labels are only used when reading and writing.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, TextIO

import numpy as np

log = logging.getLogger(__name__)

_SPLIT = re.compile(r"[\s,]+")


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ParseInfo:
    lines: int = 0
    edges_read: int = 0
    self_loops: int = 0
    duplicates: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``indices[indptr[v]:indptr[v + 1]]`` are the neighbors of ``v``, sorted
    ascending and free of duplicates and self-loops.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]
    info: ParseInfo = field(default_factory=ParseInfo)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges, labels: Iterable[str] | None = None,
                   info: ParseInfo | None = None) -> "Graph":
        """Build from an ``(m, 2)`` array-like of index pairs.

        Self-loops are dropped and duplicate (or reversed) pairs collapsed.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        key = np.unique(src * n + dst)
        src, dst = key // n, key % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        labels = tuple(str(i) for i in range(n)) if labels is None else tuple(labels)
        if len(labels) != n:
            raise ValueError("need exactly one label per node")
        return cls(indptr, dst.astype(np.int64), labels, info or ParseInfo())

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @cached_property
    def rows(self) -> np.ndarray:
        """Source node of every entry of ``indices``."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array with ``u < v``, sorted ascending."""
        mask = self.rows < self.indices
        return np.column_stack([self.rows[mask], self.indices[mask]])

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        a[self.rows, self.indices] = 1
        return a

    def same_as(self, other: "Graph") -> bool:
        """Identical index structure and labels."""
        return (self.labels == other.labels
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class NodeSet:
    """Mutable subset of the nodes of a graph with ``n`` nodes."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, members: Iterable[int] = ()):
        self.n = n
        self.mask = np.zeros(n, dtype=bool)
        idx = np.fromiter((int(v) for v in members), dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= n:
                raise IndexError(f"node index out of range [0, {n})")
            self.mask[idx] = True

    @classmethod
    def from_mask(cls, mask) -> "NodeSet":
        s = cls(len(mask))
        s.mask[:] = np.asarray(mask, dtype=bool)
        return s

    @classmethod
    def full(cls, n: int) -> "NodeSet":
        return cls.from_mask(np.ones(n, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def __len__(self):
        return self.size

    def __contains__(self, v) -> bool:
        return 0 <= v < self.n and bool(self.mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(np.flatnonzero(self.mask).tolist())

    def __eq__(self, other):
        if isinstance(other, NodeSet):
            return self.n == other.n and np.array_equal(self.mask, other.mask)
        return NotImplemented

    def add(self, v: int):
        if not 0 <= v < self.n:
            raise IndexError(f"node index {v} out of range [0, {self.n})")
        self.mask[v] = True

    def discard(self, v: int):
        if 0 <= v < self.n:
            self.mask[v] = False

    def copy(self) -> "NodeSet":
        return NodeSet.from_mask(self.mask.copy())

    def to_array(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __repr__(self):
        return f"NodeSet({sorted(self)})"


def as_nodeset(g: Graph, s) -> NodeSet:
    """Coerce a NodeSet or an iterable of indices to a NodeSet of ``g``."""
    if isinstance(s, NodeSet):
        if s.n != g.n:
            raise IndexError("node set belongs to a graph of different size")
        return s
    return NodeSet(g.n, s)


def parse_edge_list(stream: TextIO | Iterable[str]) -> Graph:
    """Parse a whitespace- or comma-separated edge list.

    Lines starting with ``#`` or ``%`` are comments.  Self-loops are dropped
    and duplicates collapsed; counts are kept in ``graph.info``.
    """
    label_index: dict[str, int] = {}
    labels: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    loops = lines = 0

    def index(lab: str) -> int:
        i = label_index.get(lab)
        if i is None:
            i = label_index[lab] = len(labels)
            labels.append(lab)
        return i

    for lineno, line in enumerate(stream, 1):
        lines = lineno
        line = line.strip()
        if not line or line[0] in "#%":
            continue
        tokens = [t for t in _SPLIT.split(line) if t]
        if len(tokens) != 2:
            raise GraphFormatError(f"expected 2 tokens, got {len(tokens)}", lineno)
        u, v = index(tokens[0]), index(tokens[1])
        if u == v:
            loops += 1
            continue
        src.append(u)
        dst.append(v)

    if not src:
        raise GraphFormatError("no edges")
    n = len(labels)
    g = Graph.from_edges(n, np.column_stack([src, dst]), labels)
    info = ParseInfo(lines=lines, edges_read=len(src), self_loops=loops,
                     duplicates=len(src) - g.m)
    if loops or info.duplicates:
        log.info("dropped %d self-loops, collapsed %d duplicate edges",
                 loops, info.duplicates)
    return Graph(g.indptr, g.indices, g.labels, info)


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh)


def write_edge_list(g: Graph, out: TextIO):
    """Write the canonical edge list: one ``u v`` line per edge, ``u < v``
    by index, ascending.  Isolated nodes follow as ``x x`` lines so that a
    re-parse keeps them."""
    lab = g.labels
    for u, v in g.edges().tolist():
        out.write(f"{lab[u]} {lab[v]}\n")
    for v in np.flatnonzero(g.degrees == 0).tolist():
        out.write(f"{lab[v]} {lab[v]}\n")


def induced_degree_array(g: Graph, s: NodeSet) -> np.ndarray:
    """``d_v(S)`` for every node (zero outside ``S``)."""
    inside = s.mask[g.indices] & s.mask[g.rows]
    return np.bincount(g.rows[inside], minlength=g.n)


def induced_degrees(g: Graph, s) -> list[tuple[int, int]]:
    """``(v, d_v(S))`` for each ``v`` in ``S``, ascending by ``v``."""
    s = as_nodeset(g, s)
    deg = induced_degree_array(g, s)
    return [(v, int(deg[v])) for v in s]


def induced_edge_count(g: Graph, s) -> int:
    s = as_nodeset(g, s)
    return int(induced_degree_array(g, s).sum()) // 2
