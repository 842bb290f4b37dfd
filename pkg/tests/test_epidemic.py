import numpy as np
import pytest

from cfvp import (
    Compartment,
    ConfigurationError,
    DegreeSpec,
    EpidemicState,
    IsolationStrategy,
    ScriptError,
    StrategyKind,
    assign_q,
    generate_ba,
    isolation_substage,
    seed_infection,
    spread_substage,
)
from oracles import isolate_reference, spread_reference
from test_graph import graph_from_pairs


def star(k):
    """Hub 0 with k leaves."""
    return graph_from_pairs(k + 1, [(0, i) for i in range(1, k + 1)])


def adjacency_lists(g):
    return [sorted(int(j) for j in g.adj_nbr[g.adj_off[i]:g.adj_off[i + 1]]) for i in range(g.n)]


def alive_pairs(g):
    return {
        (int(g.edge_u[e]), int(g.edge_v[e]))
        for e in np.flatnonzero(g.alive_edge)
    }


class TestCompartments:
    def test_codes(self):
        assert [c.value for c in Compartment] == [0, 1, 2, 3]

    def test_state_validation(self):
        with pytest.raises(ConfigurationError) as e:
            EpidemicState(5, 1.2)
        assert e.value.field == "lambda"
        with pytest.raises(ConfigurationError):
            EpidemicState(5, -0.1)

    def test_state_counts(self):
        st = EpidemicState(4, 0.5)
        st.comp[:] = [0, 1, 2, 3]
        assert st.counts().tolist() == [1, 1, 1, 1]
        assert st.infected_ids().tolist() == [1]
        assert st.delta == 1.0

    def test_strategy_validation(self):
        s = IsolationStrategy("degree", 0.4, 0.2)
        assert s.kind is StrategyKind.DEGREE_BASED
        with pytest.raises(ConfigurationError) as e:
            IsolationStrategy("random")
        assert e.value.field == "strategy"
        with pytest.raises(ConfigurationError) as e:
            IsolationStrategy("none", q=1.5)
        assert e.value.field == "q"
        with pytest.raises(ConfigurationError) as e:
            IsolationStrategy("degree", 0.5, -1.0)
        assert e.value.field == "sigma"


class TestAssignQ:
    def test_none_is_zero(self):
        g = star(4)
        q = assign_q(IsolationStrategy(), g, np.random.default_rng(0))
        assert (q == 0.0).all()

    def test_deterministic_is_constant(self):
        g = star(4)
        q = assign_q(IsolationStrategy("deterministic", 0.37), g, np.random.default_rng(0))
        assert (q == 0.37).all()

    def test_deterministic_consumes_no_randomness(self):
        g = star(4)
        rng = np.random.default_rng(1)
        assign_q(IsolationStrategy("deterministic", 0.5), g, rng)
        assert rng.random() == np.random.default_rng(1).random()

    def test_degree_sigma_zero_degenerates(self):
        g = star(4)
        q = assign_q(IsolationStrategy("degree", 0.4, 0.0), g, np.random.default_rng(2))
        assert np.allclose(q, 0.4)

    def test_degree_orders_by_degree(self):
        # hub must receive the largest sample of the block
        g = star(6)
        for seed in range(20):
            rng = np.random.default_rng(seed)
            q = assign_q(IsolationStrategy("degree", 0.5, 0.3), g, rng)
            assert q[0] == q.max()

    def test_degree_ties_rank_by_node_id(self):
        # equal degrees: stable ranking hands ascending samples to
        # ascending node ids
        g = star(5)
        rng = np.random.default_rng(3)
        q = assign_q(IsolationStrategy("degree", 0.5, 0.3), g, rng)
        leaves = q[1:]
        assert (np.diff(leaves) >= 0).all()

    def test_degree_clamped(self):
        g = star(30)
        rng = np.random.default_rng(4)
        q = assign_q(IsolationStrategy("degree", 0.5, 5.0), g, rng)
        assert q.min() >= 0.0 and q.max() <= 1.0
        assert (q == 0.0).any() and (q == 1.0).any()

    def test_degree_draw_contract(self):
        # exactly one block of n normals, sorted and permuted by degree rank
        g = generate_ba(DegreeSpec(40, 2), np.random.default_rng(5))
        rng = np.random.default_rng(6)
        q = assign_q(IsolationStrategy("degree", 0.3, 0.2), g, rng)
        replica = np.random.default_rng(6)
        samples = np.sort(replica.normal(0.3, 0.2, 40))
        order = np.argsort(g.initial_degree, kind="stable")
        expected = np.empty(40)
        expected[order] = samples
        assert np.array_equal(q, np.clip(expected, 0.0, 1.0))
        assert rng.random() == replica.random()  # same stream position after

    def test_degree_mean_near_q(self):
        g = generate_ba(DegreeSpec(500, 2), np.random.default_rng(7))
        q = assign_q(IsolationStrategy("degree", 0.5, 0.1), g, np.random.default_rng(8))
        assert abs(q.mean() - 0.5) < 0.02

    def test_monotone_against_degree_on_random_graphs(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            g = generate_ba(DegreeSpec(int(rng.integers(5, 60)), 2), rng)
            q = assign_q(IsolationStrategy("degree", 0.5, 0.4), g, rng)
            deg = g.initial_degree
            order = np.argsort(deg, kind="stable")
            assert (np.diff(q[order]) >= 0).all()
            assert q.min() >= 0.0 and q.max() <= 1.0


class TestSeedInfection:
    def test_infects_one(self):
        st = EpidemicState(10, 0.5)
        i = seed_infection(st, np.random.default_rng(0))
        assert st.comp[i] == Compartment.INFECTED
        assert st.counts()[Compartment.INFECTED] == 1

    def test_requires_all_susceptible(self):
        st = EpidemicState(10, 0.5)
        seed_infection(st, np.random.default_rng(0))
        with pytest.raises(RuntimeError):
            seed_infection(st, np.random.default_rng(1))

    def test_uniform_choice(self):
        hits = np.zeros(8, int)
        rng = np.random.default_rng(10)
        for _ in range(4000):
            st = EpidemicState(8, 0.5)
            hits[seed_infection(st, rng)] += 1
        expected = 4000 / 8
        # 3 sigma around the binomial mean per cell
        sigma = (4000 * (1 / 8) * (7 / 8)) ** 0.5
        assert (np.abs(hits - expected) < 3.5 * sigma).all()


class TestSpread:
    def test_requires_infected(self):
        st = EpidemicState(3, 0.5)
        with pytest.raises(RuntimeError):
            spread_substage(st, graph_from_pairs(3, [(0, 1)]), np.random.default_rng(0))

    def test_lambda_zero_never_transmits(self):
        g = star(5)
        st = EpidemicState(6, 0.0)
        st.comp[0] = Compartment.INFECTED
        newly, removed = spread_substage(st, g, np.random.default_rng(0))
        assert newly.size == 0
        assert removed.tolist() == [0]
        assert st.comp[0] == Compartment.REMOVED

    def test_lambda_one_hits_all_alive_neighbors(self):
        g = star(5)
        st = EpidemicState(6, 1.0)
        st.comp[0] = Compartment.INFECTED
        newly, _ = spread_substage(st, g, np.random.default_rng(0))
        assert newly.tolist() == [1, 2, 3, 4, 5]
        assert (st.comp[1:] == Compartment.INFECTED).all()

    def test_pruned_edges_block_transmission(self):
        g = star(3)
        g.remove_edge(0, 2)
        st = EpidemicState(4, 1.0)
        st.comp[0] = Compartment.INFECTED
        newly, _ = spread_substage(st, g, np.random.default_rng(0))
        assert newly.tolist() == [1, 3]

    def test_only_susceptible_targets(self):
        g = star(3)
        st = EpidemicState(4, 1.0)
        st.comp[0] = Compartment.INFECTED
        st.comp[1] = Compartment.REMOVED
        st.comp[2] = Compartment.FAILED
        newly, _ = spread_substage(st, g, np.random.default_rng(0))
        assert newly.tolist() == [3]

    def test_synchronous_against_entry_state(self):
        # infection of node 1 this round must not let node 1 transmit to 2
        # within the same round
        g = graph_from_pairs(3, [(0, 1), (1, 2)])
        st = EpidemicState(3, 1.0)
        st.comp[0] = Compartment.INFECTED
        newly, removed = spread_substage(st, g, np.random.default_rng(0))
        assert newly.tolist() == [1]
        assert removed.tolist() == [0]
        assert st.comp[2] == Compartment.SUSCEPTIBLE

    def test_one_draw_per_alive_is_edge(self):
        # two infected sharing one susceptible: two draws, visited in
        # ascending infected order; verify via stream accounting
        g = graph_from_pairs(3, [(0, 2), (1, 2)])
        st = EpidemicState(3, 0.5)
        st.comp[0] = Compartment.INFECTED
        st.comp[1] = Compartment.INFECTED
        rng = np.random.default_rng(11)
        spread_substage(st, g, rng)
        replica = np.random.default_rng(11)
        replica.random()
        replica.random()
        assert rng.random() == replica.random()

    def test_matches_reference_stream(self):
        rng_master = np.random.default_rng(12)
        for _ in range(40):
            g = generate_ba(DegreeSpec(30, 2), rng_master)
            for e in np.flatnonzero(rng_master.random(g.edge_count) < 0.2):
                g.alive_edge[e] = False
            st = EpidemicState(30, 0.4)
            st.comp[rng_master.integers(30, size=6)] = Compartment.INFECTED
            comp_ref = st.comp.tolist()
            seed = int(rng_master.integers(2**32))
            rng = np.random.default_rng(seed)
            newly, removed = spread_substage(st, g, rng)
            ref_rng = np.random.default_rng(seed)
            exp_new, exp_rem = spread_reference(
                comp_ref, adjacency_lists(g), alive_pairs(g), 0.4, ref_rng
            )
            assert newly.tolist() == exp_new
            assert removed.tolist() == exp_rem
            assert st.comp.tolist() == comp_ref
            assert rng.random() == ref_rng.random()

    def test_star_binomial(self):
        k, lam, trials = 40, 0.3, 400
        rng = np.random.default_rng(13)
        total = 0
        for _ in range(trials):
            g = star(k)
            st = EpidemicState(k + 1, lam)
            st.comp[0] = Compartment.INFECTED
            newly, _ = spread_substage(st, g, rng)
            total += newly.size
        mean = total / trials
        se = (k * lam * (1 - lam) / trials) ** 0.5
        assert abs(mean - k * lam) < 4 * se

    def test_scripted_outcomes(self):
        g = star(3)
        st = EpidemicState(4, 1.0)
        st.comp[0] = Compartment.INFECTED
        newly, _ = spread_substage(st, g, None, outcomes={(0, 1): True, (0, 2): False, (0, 3): True})
        assert newly.tolist() == [1, 3]

    def test_script_default_fills_gaps(self):
        g = star(3)
        st = EpidemicState(4, 1.0)
        st.comp[0] = Compartment.INFECTED
        newly, _ = spread_substage(st, g, None, outcomes={(0, 2): True}, default=False)
        assert newly.tolist() == [2]

    def test_script_missing_without_default_raises(self):
        g = star(3)
        st = EpidemicState(4, 1.0)
        st.comp[0] = Compartment.INFECTED
        with pytest.raises(ScriptError):
            spread_substage(st, g, None, outcomes={(0, 1): True})

    def test_conservation(self):
        g = generate_ba(DegreeSpec(50, 3), np.random.default_rng(14))
        st = EpidemicState(50, 0.6)
        seed_infection(st, np.random.default_rng(15))
        rng = np.random.default_rng(16)
        while (st.comp == Compartment.INFECTED).any():
            spread_substage(st, g, rng)
            assert st.counts().sum() == 50


class TestIsolation:
    def make(self, q):
        # two infected (0, 1) against susceptibles 2..4 on a small mesh
        g = graph_from_pairs(5, [(0, 2), (0, 3), (1, 2), (1, 4), (2, 3), (3, 4)])
        st = EpidemicState(5, 0.5, np.full(5, q))
        st.comp[0] = Compartment.INFECTED
        st.comp[1] = Compartment.INFECTED
        return g, st

    def test_no_infected_is_noop(self):
        g, st = self.make(1.0)
        st.comp[:] = Compartment.SUSCEPTIBLE
        assert isolation_substage(st, g, np.random.default_rng(0)) == []

    def test_q_zero_prunes_nothing(self):
        g, st = self.make(0.0)
        assert isolation_substage(st, g, np.random.default_rng(0)) == []
        assert g.alive_edge_count() == 6

    def test_q_one_prunes_one_edge_per_candidate(self):
        g, st = self.make(1.0)
        pruned = isolation_substage(st, g, np.random.default_rng(0))
        # candidates are 2, 3, 4 in that order; 3 has a single infected
        # neighbor (0), 4 has only 1
        assert [s for s, _ in pruned] == [2, 3, 4]
        assert pruned[1] == (3, 0)
        assert pruned[2] == (4, 1)
        assert pruned[0][1] in (0, 1)
        assert g.alive_edge_count() == 3

    def test_only_infected_links_pruned(self):
        g, st = self.make(1.0)
        isolation_substage(st, g, np.random.default_rng(1))
        # S-S edges 2-3 and 3-4 must survive any isolation outcome
        assert (2, 3) in alive_pairs(g)
        assert (3, 4) in alive_pairs(g)

    def test_uniform_choice_among_infected_neighbors(self):
        # node 3 keeps 3 infected neighbors; each should be cut ~1/3
        pairs = [(0, 3), (1, 3), (2, 3)]
        hits = {0: 0, 1: 0, 2: 0}
        rng = np.random.default_rng(2)
        trials = 3000
        for _ in range(trials):
            g = graph_from_pairs(4, pairs)
            st = EpidemicState(4, 0.5, np.ones(4))
            st.comp[[0, 1, 2]] = Compartment.INFECTED
            pruned = isolation_substage(st, g, rng)
            assert len(pruned) == 1 and pruned[0][0] == 3
            hits[pruned[0][1]] += 1
        p = 1 / 3
        sigma = (trials * p * (1 - p)) ** 0.5
        for c in hits.values():
            assert abs(c - trials * p) < 4 * sigma

    def test_removal_is_permanent_and_immediate(self):
        g, st = self.make(1.0)
        isolation_substage(st, g, np.random.default_rng(3))
        count = g.alive_edge_count()
        # a second pass can only prune remaining I-S edges
        again = isolation_substage(st, g, np.random.default_rng(4))
        assert g.alive_edge_count() == count - len(again)

    def test_matches_reference_stream(self):
        rng_master = np.random.default_rng(20)
        for _ in range(40):
            g = generate_ba(DegreeSpec(25, 2), rng_master)
            st = EpidemicState(25, 0.5, rng_master.random(25))
            st.comp[rng_master.integers(25, size=5)] = Compartment.INFECTED
            seed = int(rng_master.integers(2**32))
            rng = np.random.default_rng(seed)
            ref_rng = np.random.default_rng(seed)
            ref_alive = alive_pairs(g)
            pruned = isolation_substage(st, g, rng)
            expected = isolate_reference(
                st.comp.tolist(), st.q.tolist(), adjacency_lists(g), ref_alive, ref_rng
            )
            assert pruned == expected
            assert alive_pairs(g) == ref_alive
            assert rng.random() == ref_rng.random()

    def test_per_candidate_bernoulli_rate(self):
        # candidate prunes with probability q
        rng = np.random.default_rng(21)
        trials, q = 3000, 0.3
        cut = 0
        for _ in range(trials):
            g = graph_from_pairs(2, [(0, 1)])
            st = EpidemicState(2, 0.5, np.full(2, q))
            st.comp[0] = Compartment.INFECTED
            cut += len(isolation_substage(st, g, rng))
        sigma = (trials * q * (1 - q)) ** 0.5
        assert abs(cut - trials * q) < 4 * sigma
