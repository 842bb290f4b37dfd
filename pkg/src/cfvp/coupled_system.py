"""Two equally sized network layers tied node-for-node, and the mutual
cascade that prunes both down to a consistent giant component.

A node pair lives or dies together: when an A-node fails its B-partner is
removed, survivors outside a layer's giant component are removed in turn,
and the two layers keep knocking pieces off each other until nothing more
falls.  The fixed point is the functional core the robustness observable
is measured on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigurationError
from .graph import DegreeSpec, Graph, generate_ba, giant_component

__all__ = [
    "CoupledSystem",
    "CascadeReport",
    "build_system",
    "cascade",
    "giant_fraction",
]


class CoupledSystem:
    """Two graphs of equal size plus the partner permutation.

    ``coupling[i]`` is the B-partner of A-node ``i``; identity by default.
    Functional state is carried by the layers' alive masks.
    """

    __slots__ = ("layer_a", "layer_b", "coupling", "_inverse")

    def __init__(self, layer_a: Graph, layer_b: Graph, coupling=None):
        if layer_a.n != layer_b.n:
            raise ConfigurationError("n", f"layer sizes differ: {layer_a.n} vs {layer_b.n}")
        n = layer_a.n
        if coupling is None:
            coupling = np.arange(n, dtype=np.int64)
        else:
            coupling = np.asarray(coupling, np.int64)
            if coupling.shape != (n,) or np.unique(coupling).size != n or (
                n and (coupling.min() < 0 or coupling.max() >= n)
            ):
                raise ConfigurationError("coupling", "coupling must be a permutation of the node ids")
        inverse = np.empty(n, np.int64)
        inverse[coupling] = np.arange(n, dtype=np.int64)
        self.layer_a = layer_a
        self.layer_b = layer_b
        self.coupling = coupling
        self._inverse = inverse

    @property
    def n(self) -> int:
        return self.layer_a.n

    @property
    def functional(self) -> np.ndarray:
        """Alive mask of layer A; at a cascade fixed point the B side agrees
        pairwise under the coupling."""
        return self.layer_a.alive_node

    def copy(self) -> "CoupledSystem":
        return CoupledSystem(self.layer_a.copy(), self.layer_b.copy(), self.coupling)


@dataclass(frozen=True)
class CascadeReport:
    """Outcome of one cascade: pruning half-steps that removed something,
    and the node ids (sorted, per layer) newly dead.  ``removed_a``
    includes the seed failures."""

    rounds: int
    removed_a: np.ndarray
    removed_b: np.ndarray


def build_system(spec_a: DegreeSpec, spec_b: DegreeSpec, rng: np.random.Generator) -> CoupledSystem:
    """Generate both layers (A first, then B, off the same stream) with
    identity coupling; every node starts functional."""
    if spec_a.n != spec_b.n:
        raise ConfigurationError("n", f"layer sizes differ: {spec_a.n} vs {spec_b.n}")
    layer_a = generate_ba(spec_a, rng)
    layer_b = generate_ba(spec_b, rng)
    return CoupledSystem(layer_a, layer_b)


def _stranded(g: Graph) -> np.ndarray:
    """Alive nodes outside the giant component (everything alive when no
    component reaches size two)."""
    nlab = _kernels.cc_labels(
        g.n, g.adj_off, g.adj_nbr, g.adj_eidx, g.alive_node, g.alive_edge, g._labels, g._stack
    )
    if nlab == 0:
        return np.empty(0, np.int64)
    counts = np.bincount(g._labels[g._labels >= 0], minlength=nlab)
    best = int(np.argmax(counts))
    if counts[best] < 2:
        return np.flatnonzero(g.alive_node)
    return np.flatnonzero(g.alive_node & (g._labels != best))


def cascade(system: CoupledSystem, seed_failures_a) -> CascadeReport:
    """Kill the seed A-nodes and run the mutual pruning to its fixed point.

    Each sweep kills B-partners of newly dead A-nodes, strands B-nodes
    outside the B giant component, then mirrors both steps back onto A;
    sweeps repeat until one removes nothing.  ``rounds`` counts the
    direction half-steps that removed at least one node.

    A layer's giant component is only recomputed when the layer changed
    since it was last filtered; right after a filter the alive set is
    exactly one component (or empty), so a recomputation would be a no-op.
    """
    a, b = system.layer_a, system.layer_b
    pi, inv = system.coupling, system._inverse
    if isinstance(seed_failures_a, np.ndarray):
        seeds = np.unique(seed_failures_a.astype(np.int64))
    else:
        seeds = np.unique(np.fromiter(seed_failures_a, np.int64))
    if seeds.size and not a.alive_node[seeds].all():
        dead = seeds[~a.alive_node[seeds]]
        raise RuntimeError(f"seed failure on already-dead node {int(dead[0])}")

    removed_a = np.zeros(a.n, np.bool_)
    removed_b = np.zeros(b.n, np.bool_)
    a.kill_nodes(seeds)
    removed_a[seeds] = True

    rounds = 0
    pending_a = seeds
    a_dirty = True  # seeds were just applied
    b_dirty = True  # entry state is not assumed pre-filtered
    while True:
        # A -> B: dependency kills, then the B giant-component filter
        cand = pi[pending_a]
        cand = cand[b.alive_node[cand]]
        if cand.size:
            b.kill_nodes(cand)
            b_dirty = True
        if b_dirty:
            lost_b = _stranded(b)
            b.kill_nodes(lost_b)
            b_dirty = False
        else:
            lost_b = np.empty(0, np.int64)
        removed_b[cand] = True
        removed_b[lost_b] = True
        got_b = cand.size + lost_b.size
        if got_b:
            rounds += 1

        # B -> A: mirror
        pending_b = np.concatenate([cand, lost_b])
        back = inv[pending_b]
        back = back[a.alive_node[back]]
        if back.size:
            a.kill_nodes(back)
            a_dirty = True
        if a_dirty:
            lost_a = _stranded(a)
            a.kill_nodes(lost_a)
            a_dirty = False
        else:
            lost_a = np.empty(0, np.int64)
        removed_a[back] = True
        removed_a[lost_a] = True
        got_a = back.size + lost_a.size
        if got_a:
            rounds += 1

        if got_b == 0 and got_a == 0:
            break
        pending_a = np.concatenate([back, lost_a])

    return CascadeReport(rounds, np.flatnonzero(removed_a), np.flatnonzero(removed_b))


def _at_fixed_point(system: CoupledSystem) -> bool:
    a, b = system.layer_a, system.layer_b
    if not np.array_equal(a.alive_node, b.alive_node[system.coupling]):
        return False
    for g in (a, b):
        alive = g.alive_node_count()
        if alive and giant_component(g).size != alive:
            return False
    return True


def giant_fraction(system: CoupledSystem) -> float:
    """Fraction of node pairs still functional, valid only at a cascade
    fixed point (both layers agree and each alive set is one component)."""
    if not _at_fixed_point(system):
        raise RuntimeError("giant_fraction called mid-cascade: system is not at a fixed point")
    return system.layer_a.alive_node_count() / system.n
