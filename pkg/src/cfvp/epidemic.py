"""Compartment state for the virus on layer A, the synchronous spreading
substage, and the adaptive-isolation control strategies.

Every infected node transmits for exactly one stage (recovery probability
is fixed at 1), then leaves the infectious pool for good.  Nodes knocked
out by cascading failures while still susceptible or infected are tracked
separately from virus-removed nodes: both are nonfunctional, but only the
latter ever carried the virus to completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ScriptError
from .graph import Graph

__all__ = [
    "Compartment",
    "StrategyKind",
    "IsolationStrategy",
    "EpidemicState",
    "assign_q",
    "seed_infection",
    "spread_substage",
    "isolation_substage",
]


class Compartment(IntEnum):
    SUSCEPTIBLE = 0
    INFECTED = 1
    REMOVED = 2    # removed by the virus itself
    FAILED = 3     # susceptible or infected node lost to a cascade


# the jitted kernels hardcode the first two codes
assert Compartment.SUSCEPTIBLE == _kernels.SUSCEPTIBLE
assert Compartment.INFECTED == _kernels.INFECTED


class StrategyKind(str, Enum):
    """How susceptible nodes get their identification probability q_i."""

    NONE = "none"
    DETERMINISTIC = "deterministic"
    DEGREE_BASED = "degree"


@dataclass(frozen=True)
class IsolationStrategy:
    """Isolation policy: a kind, the mean identification probability q, and
    the spread sigma used only by the degree-based kind."""

    kind: StrategyKind = StrategyKind.NONE
    q: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, StrategyKind):
            try:
                object.__setattr__(self, "kind", StrategyKind(self.kind))
            except ValueError:
                tokens = ", ".join(k.value for k in StrategyKind)
                raise ConfigurationError(
                    "strategy", f"unknown strategy {self.kind!r}, expected one of: {tokens}"
                ) from None
        q = float(self.q)
        if not 0.0 <= q <= 1.0:
            raise ConfigurationError("q", f"identification probability must be in [0, 1], got {q}")
        object.__setattr__(self, "q", q)
        sigma = float(self.sigma)
        if not sigma >= 0.0:
            raise ConfigurationError("sigma", f"standard deviation must be non-negative, got {sigma}")
        object.__setattr__(self, "sigma", sigma)


class EpidemicState:
    """Per-node compartments plus the run's transmission parameters.

    ``delta`` (the recovery probability) exists for completeness but is
    fixed at 1.0; the substage logic assumes it.
    """

    __slots__ = ("comp", "lam", "delta", "q")

    def __init__(self, n: int, lam: float, q: np.ndarray | None = None):
        lam = float(lam)
        if not 0.0 <= lam <= 1.0:
            raise ConfigurationError("lambda", f"transmission probability must be in [0, 1], got {lam}")
        self.comp = np.zeros(n, np.int8)
        self.lam = lam
        self.delta = 1.0
        self.q = np.zeros(n) if q is None else np.ascontiguousarray(q, np.float64)

    @property
    def n(self) -> int:
        return self.comp.size

    def infected_ids(self) -> np.ndarray:
        return np.flatnonzero(self.comp == Compartment.INFECTED)

    def counts(self) -> np.ndarray:
        """Node counts per compartment, indexed by Compartment code."""
        return np.bincount(self.comp, minlength=4)


def assign_q(strategy: IsolationStrategy, graph: Graph, rng: np.random.Generator) -> np.ndarray:
    """Per-node identification probabilities for one realization.

    NONE yields zeros and DETERMINISTIC a constant vector.  DEGREE_BASED
    draws one block of n Normal(q, sigma) samples, sorts them ascending,
    and hands the r-th smallest to the node of degree rank r (initial
    degrees, ties broken by node id), so better-connected nodes always get
    the larger probabilities; values outside [0, 1] are clamped to the
    nearest bound afterwards.
    """
    n = graph.n
    if strategy.kind is StrategyKind.NONE:
        return np.zeros(n)
    if strategy.kind is StrategyKind.DETERMINISTIC:
        return np.full(n, strategy.q)
    samples = np.sort(rng.normal(strategy.q, strategy.sigma, n))
    order = np.argsort(graph.initial_degree, kind="stable")
    out = np.empty(n)
    out[order] = samples
    return np.clip(out, 0.0, 1.0)


def seed_infection(state: EpidemicState, rng: np.random.Generator) -> int:
    """Infect one node chosen uniformly; requires an all-susceptible state."""
    if (state.comp != Compartment.SUSCEPTIBLE).any():
        raise RuntimeError("seed_infection requires an all-susceptible population")
    i = int(rng.integers(state.n))
    state.comp[i] = Compartment.INFECTED
    return i


def spread_substage(
    state: EpidemicState,
    graph: Graph,
    rng: np.random.Generator | None,
    outcomes: dict | None = None,
    default: bool | None = None,
):
    """One synchronous round of infection attempts, then mass recovery.

    For every alive edge between an infected and a susceptible node one
    Bernoulli(lambda) trial is drawn, edges visited in ascending
    (infected id, neighbor id) order against the compartments at entry; a
    susceptible node joins the infected set if any incident trial
    succeeds.  All nodes infectious this round become removed.  Returns
    (newly_infected, newly_removed) as sorted id arrays.

    When ``outcomes`` is given, trial results are read from it (keys are
    directed (infected, susceptible) pairs) instead of the rng; pairs not
    covered fall back to ``default``, and with no default raise
    ScriptError.
    """
    inf = state.infected_ids()
    if inf.size == 0:
        raise RuntimeError("spread_substage requires at least one infected node")
    if outcomes is None:
        new_mask = np.zeros(state.n, np.bool_)
        _kernels.spread(
            inf, graph.adj_off, graph.adj_nbr, graph.adj_eidx, graph.alive_edge,
            state.comp, state.lam, new_mask, rng,
        )
        newly = np.flatnonzero(new_mask)
    else:
        hit = set()
        off, nbr, eidx = graph.adj_off, graph.adj_nbr, graph.adj_eidx
        for i in inf.tolist():
            for k in range(off[i], off[i + 1]):
                j = int(nbr[k])
                if graph.alive_edge[eidx[k]] and state.comp[j] == Compartment.SUSCEPTIBLE:
                    try:
                        success = outcomes[(i, j)]
                    except KeyError:
                        if default is None:
                            raise ScriptError(
                                f"no scripted outcome for transmission {i}->{j}"
                            ) from None
                        success = default
                    if success:
                        hit.add(j)
        newly = np.fromiter(sorted(hit), np.int64)
    state.comp[newly] = Compartment.INFECTED
    state.comp[inf] = Compartment.REMOVED
    return newly, inf


def isolation_substage(state: EpidemicState, graph: Graph, rng: np.random.Generator):
    """Let susceptible nodes sever one link each to the infected set.

    Every susceptible node with at least one alive infected neighbor is a
    candidate; candidates are processed in ascending id, each drawing
    Bernoulli(q_i) and, on success, permanently removing the edge to one
    alive infected neighbor chosen uniformly.  Removals take effect
    immediately.  Returns the pruned edges as (susceptible, infected)
    pairs in processing order.
    """
    inf = state.infected_ids()
    if inf.size == 0:
        return []
    n = state.n
    cand_mask = np.zeros(n, np.bool_)
    pruned_s = np.empty(n, np.int32)
    pruned_t = np.empty(n, np.int32)
    cnt = _kernels.isolate(
        inf, graph.adj_off, graph.adj_nbr, graph.adj_eidx, graph.alive_edge,
        state.comp, state.q, cand_mask, pruned_s, pruned_t, rng,
    )
    return [(int(pruned_s[i]), int(pruned_t[i])) for i in range(cnt)]
