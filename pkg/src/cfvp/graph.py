"""Undirected graphs with liveness masks, scale-free generation, and
connected-component queries.

Node and edge removal is mask-based: ids stay stable for the lifetime of a
graph, and "dead" elements are simply skipped by every traversal.  This is
what lets a failure process unfold on a fixed topology without reindexing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigurationError, EdgeListParseError

__all__ = [
    "Graph",
    "DegreeSpec",
    "generate_ba",
    "giant_component",
    "load_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True)
class DegreeSpec:
    """Size and attachment count for scale-free generation.

    ``m`` edges are attached per arriving node, so the realized average
    degree is 2m up to the seed-clique correction.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("n", f"node count must be positive, got {self.n}")
        if self.m < 1:
            raise ConfigurationError("m", f"attachment count must be positive, got {self.m}")
        if self.m >= self.n:
            raise ConfigurationError("m", f"attachment count {self.m} must be below node count {self.n}")

    @classmethod
    def from_avg_degree(cls, n: int, k: int, field: str = "average_degree") -> "DegreeSpec":
        # k = 2m, so only positive even targets are representable
        if not isinstance(k, int) or isinstance(k, bool):
            raise ConfigurationError(field, f"average degree must be an integer, got {k!r}")
        if k < 2 or k % 2 != 0:
            raise ConfigurationError(field, f"average degree must be a positive even integer, got {k}")
        return cls(n, k // 2)


class Graph:
    """Simple undirected graph over nodes 0..n-1 with kill masks.

    The edge list is fixed at construction; ``alive_node`` / ``alive_edge``
    record which parts still participate.  Adjacency is stored CSR-style
    with neighbor lists in ascending order, which fixes the traversal order
    every random-draw contract in this package relies on.
    """

    __slots__ = (
        "n",
        "edge_u",
        "edge_v",
        "alive_node",
        "alive_edge",
        "adj_off",
        "adj_nbr",
        "adj_eidx",
        "initial_degree",
        "_edge_index",
        "_labels",
        "_stack",
    )

    def __init__(self, n: int, edge_u: np.ndarray, edge_v: np.ndarray, validate: bool = True):
        edge_u = np.ascontiguousarray(edge_u, np.int32)
        edge_v = np.ascontiguousarray(edge_v, np.int32)
        if edge_u.shape != edge_v.shape or edge_u.ndim != 1:
            raise ValueError("edge endpoint arrays must be matching 1-d arrays")
        if validate and edge_u.size:
            if n < 1:
                raise ValueError("node count must be positive when edges exist")
            lo = np.minimum(edge_u, edge_v)
            hi = np.maximum(edge_u, edge_v)
            if lo.min() < 0 or hi.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (lo == hi).any():
                raise ValueError("self-loops are not allowed")
            keys = lo.astype(np.int64) * n + hi
            if np.unique(keys).size != keys.size:
                raise ValueError("duplicate edges are not allowed")
            edge_u, edge_v = lo, hi
        self.n = int(n)
        self.edge_u = edge_u
        self.edge_v = edge_v
        m = edge_u.size
        self.alive_node = np.ones(self.n, np.bool_)
        self.alive_edge = np.ones(m, np.bool_)
        self.adj_off, self.adj_nbr, self.adj_eidx = _kernels.build_csr(self.n, edge_u, edge_v)
        self.initial_degree = np.diff(self.adj_off)
        self._edge_index = None
        self._labels = np.empty(self.n, np.int32)
        self._stack = np.empty(self.n, np.int32)

    # -- queries ---------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self.edge_u.size

    def alive_node_count(self) -> int:
        return int(np.count_nonzero(self.alive_node))

    def alive_edge_count(self) -> int:
        return int(np.count_nonzero(self.alive_edge))

    def alive_degrees(self) -> np.ndarray:
        """Per-node count of alive incident edges (dead nodes report 0)."""
        mask = self.alive_edge
        return (
            np.bincount(self.edge_u[mask], minlength=self.n)
            + np.bincount(self.edge_v[mask], minlength=self.n)
        ).astype(np.int64)

    def neighbors(self, i: int) -> np.ndarray:
        """Alive neighbors of an alive node, ascending."""
        sl = slice(self.adj_off[i], self.adj_off[i + 1])
        return self.adj_nbr[sl][self.alive_edge[self.adj_eidx[sl]]]

    def _index(self) -> dict:
        if self._edge_index is None:
            self._edge_index = {
                (int(u), int(v)): e
                for e, (u, v) in enumerate(zip(self.edge_u.tolist(), self.edge_v.tolist()))
            }
        return self._edge_index

    # -- mutation --------------------------------------------------------

    def kill_node(self, i: int) -> None:
        self.kill_nodes(np.asarray([i], np.int64))

    def kill_nodes(self, ids) -> None:
        """Mark nodes dead along with every incident edge."""
        ids = np.ascontiguousarray(ids, np.int64)
        if ids.size:
            _kernels.kill(ids, self.adj_off, self.adj_eidx, self.alive_node, self.alive_edge)

    def remove_edge(self, u: int, v: int) -> "Graph":
        """Mark one alive edge dead; node masks are untouched.

        Asking for a missing or already-dead edge is a caller bug, not a
        recoverable condition, hence RuntimeError.
        """
        key = (u, v) if u < v else (v, u)
        e = self._index().get(key)
        if e is None:
            raise RuntimeError(f"no such edge: {u}-{v}")
        if not self.alive_edge[e]:
            raise RuntimeError(f"edge {u}-{v} is already removed")
        self.alive_edge[e] = False
        return self

    def copy(self) -> "Graph":
        """Independent liveness state over the shared (immutable) topology."""
        g = object.__new__(Graph)
        g.n = self.n
        g.edge_u = self.edge_u
        g.edge_v = self.edge_v
        g.alive_node = self.alive_node.copy()
        g.alive_edge = self.alive_edge.copy()
        g.adj_off = self.adj_off
        g.adj_nbr = self.adj_nbr
        g.adj_eidx = self.adj_eidx
        g.initial_degree = self.initial_degree
        g._edge_index = self._edge_index
        g._labels = np.empty(self.n, np.int32)
        g._stack = np.empty(self.n, np.int32)
        return g


def generate_ba(spec: DegreeSpec, rng: np.random.Generator) -> Graph:
    """Grow a Barabási-Albert graph by preferential attachment.

    Construction rule (the reproducibility contract, mirrored by the test
    oracle): start from a complete graph on the first m nodes, its edges
    listed lexicographically, and an urn holding both endpoints of each
    seed edge in that same order.  Each node t in m..n-1 then draws m
    distinct targets; every candidate costs exactly one
    ``rng.integers(0, urn_size)`` draw and duplicates within t's round are
    redrawn.  The urn grows by the chosen targets in draw order followed by
    m copies of t.  When m=1 the urn starts empty and node 1 attaches to
    node 0 without consuming randomness.
    """
    n, m = spec.n, spec.m
    n_edges = m * (m - 1) // 2 + m * (n - m)
    edge_u = np.empty(n_edges, np.int32)
    edge_v = np.empty(n_edges, np.int32)
    urn = np.empty(m * (m - 1) + 2 * m * (n - m), np.int32)
    pos = 0
    fill = 0
    for i in range(m):
        for j in range(i + 1, m):
            edge_u[pos] = i
            edge_v[pos] = j
            pos += 1
            urn[fill] = i
            urn[fill + 1] = j
            fill += 2
    pos = _kernels.ba_attach(n, m, urn, fill, edge_u, edge_v, pos, rng)
    assert pos == n_edges
    return Graph(n, edge_u, edge_v, validate=False)


def giant_component(g: Graph) -> np.ndarray:
    """Node ids (ascending) of the largest alive component, ties broken by
    smallest contained id.

    A single node cannot sustain network function, so components of size
    one never qualify: a graph whose alive part is all isolated nodes has
    no giant component and the result is empty.
    """
    nlab = _kernels.cc_labels(
        g.n, g.adj_off, g.adj_nbr, g.adj_eidx, g.alive_node, g.alive_edge, g._labels, g._stack
    )
    if nlab == 0:
        return np.empty(0, np.int64)
    counts = np.bincount(g._labels[g._labels >= 0], minlength=nlab)
    best = int(np.argmax(counts))
    if counts[best] < 2:
        return np.empty(0, np.int64)
    return np.flatnonzero(g._labels == best)


def load_edge_list(source) -> Graph:
    """Parse "u v" pairs into a graph over ids 0..max_id.

    Accepts a string or any iterable of lines.  Blank lines and lines
    starting with '#' are skipped.  Self-loops, duplicates, and malformed
    tokens raise with the 1-based line number.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    edges = []
    seen = set()
    max_id = -1
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, f"expected two node ids, got {len(parts)} tokens")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"non-integer node id in {line!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(line_no, f"negative node id in {line!r}")
        if u == v:
            raise EdgeListParseError(line_no, f"self-loop at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise EdgeListParseError(line_no, f"duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        edges.append(key)
        if key[1] > max_id:
            max_id = key[1]
        if key[0] > max_id:
            max_id = key[0]
    if not edges:
        return Graph(0, np.empty(0, np.int32), np.empty(0, np.int32), validate=False)
    eu = np.fromiter((e[0] for e in edges), np.int32, len(edges))
    ev = np.fromiter((e[1] for e in edges), np.int32, len(edges))
    return Graph(max_id + 1, eu, ev, validate=False)


def write_edge_list(g: Graph) -> str:
    """Canonical text form of the alive edges: sorted "u v" lines, u < v."""
    alive = np.flatnonzero(g.alive_edge)
    pairs = sorted((int(g.edge_u[e]), int(g.edge_v[e])) for e in alive)
    return "".join(f"{u} {v}\n" for u, v in pairs)
