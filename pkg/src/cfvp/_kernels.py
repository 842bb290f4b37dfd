"""Numba-compiled inner loops.

Everything here operates on the flat CSR arrays owned by ``graph.Graph``
(offsets / neighbor ids / edge ids, with boolean alive masks) so that the
hot paths of a realization run at native speed on a single core.

Random-draw contracts are part of the public behavior and are documented at
the calling site in ``graph`` and ``epidemic``; a pure-Python loop issuing
the same scalar ``Generator`` calls reproduces every stream bit-for-bit.
"""

import numpy as np
from numba import njit

# Compartment codes shared with cfvp.epidemic (kept as plain ints so the
# kernels stay signature-simple).
SUSCEPTIBLE = 0
INFECTED = 1


@njit(cache=True)
def cc_labels(n, off, nbr, eidx, alive_node, alive_edge, labels, stack):
    """Label connected components of the alive subgraph.

    Dead nodes keep label -1.  Components are numbered in increasing order
    of their smallest member id (seeds are scanned ascending), which the
    giant-component tie-break relies on.  Returns the component count.
    """
    nlab = 0
    for i in range(n):
        labels[i] = -1
    for s in range(n):
        if not alive_node[s] or labels[s] >= 0:
            continue
        top = 0
        stack[top] = s
        top += 1
        labels[s] = nlab
        while top > 0:
            top -= 1
            u = stack[top]
            for k in range(off[u], off[u + 1]):
                if alive_edge[eidx[k]]:
                    v = nbr[k]
                    if labels[v] < 0:
                        labels[v] = nlab
                        stack[top] = v
                        top += 1
        nlab += 1
    return nlab


@njit(cache=True)
def build_csr(n, edge_u, edge_v):
    """Adjacency in CSR form with neighbor lists ascending per node.

    Two stable counting-sort passes over the half-edges (by neighbor,
    then by owner), so no comparison sort is needed.
    """
    m = edge_u.size
    off = np.zeros(n + 1, np.int64)
    for e in range(m):
        off[edge_u[e] + 1] += 1
        off[edge_v[e] + 1] += 1
    for i in range(n):
        off[i + 1] += off[i]
    # each node occurs as a neighbor exactly degree times, so the same
    # offsets describe the neighbor-keyed buckets of pass one
    start = off[:n].copy()
    t_owner = np.empty(2 * m, np.int32)
    t_nbr = np.empty(2 * m, np.int32)
    t_eid = np.empty(2 * m, np.int32)
    for e in range(m):
        u = edge_u[e]
        v = edge_v[e]
        p = start[v]
        start[v] += 1
        t_owner[p] = u
        t_nbr[p] = v
        t_eid[p] = e
        p = start[u]
        start[u] += 1
        t_owner[p] = v
        t_nbr[p] = u
        t_eid[p] = e
    nbr = np.empty(2 * m, np.int32)
    eidx = np.empty(2 * m, np.int32)
    cur = off[:n].copy()
    for k in range(2 * m):
        o = t_owner[k]
        p = cur[o]
        cur[o] += 1
        nbr[p] = t_nbr[k]
        eidx[p] = t_eid[k]
    return off, nbr, eidx


@njit(cache=True)
def kill(ids, off, eidx, alive_node, alive_edge):
    """Mark the given nodes dead together with every incident edge."""
    for idx in range(ids.size):
        i = ids[idx]
        alive_node[i] = False
        for k in range(off[i], off[i + 1]):
            alive_edge[eidx[k]] = False


@njit(cache=True)
def ba_attach(n, m, urn, fill, edge_u, edge_v, epos, rng):
    """Preferential-attachment loop over nodes m..n-1.

    One ``rng.integers(0, fill)`` draw per candidate; a candidate already
    chosen in the current node's round consumes its draw and is redrawn.
    After attaching, the urn grows by the chosen targets (in draw order)
    followed by m copies of the new node.  The degenerate first attachment
    with an empty urn (only when m == 1) picks node 0 without drawing.
    """
    chosen = np.empty(m, np.int32)
    for t in range(m, n):
        if fill == 0:
            chosen[0] = 0
            cnt = 1
        else:
            cnt = 0
            while cnt < m:
                c = urn[rng.integers(0, fill)]
                dup = False
                for j in range(cnt):
                    if chosen[j] == c:
                        dup = True
                        break
                if not dup:
                    chosen[cnt] = c
                    cnt += 1
        for j in range(cnt):
            edge_u[epos] = chosen[j]
            edge_v[epos] = t
            epos += 1
        for j in range(cnt):
            urn[fill] = chosen[j]
            fill += 1
        for j in range(cnt):
            urn[fill] = t
            fill += 1
    return epos


@njit(cache=True)
def spread(inf, off, nbr, eidx, alive_edge, comp, lam, new_mask, rng):
    """Synchronous infection attempts: one uniform per alive I-S edge.

    Edges are visited in ascending (infectious id, neighbor id) order; the
    S side is judged against the compartments at substage entry (``comp``
    is not mutated here).
    """
    for idx in range(inf.size):
        i = inf[idx]
        for k in range(off[i], off[i + 1]):
            if alive_edge[eidx[k]] and comp[nbr[k]] == SUSCEPTIBLE:
                if rng.random() < lam:
                    new_mask[nbr[k]] = True


@njit(cache=True)
def isolate(inf, off, nbr, eidx, alive_edge, comp, q, cand_mask, pruned_s, pruned_t, rng):
    """Adaptive isolation pass over susceptible nodes.

    Candidates are S-nodes with at least one alive infected neighbor,
    processed in ascending id with immediate effect.  Per candidate: one
    ``rng.random()`` Bernoulli(q_i) draw; on success one
    ``rng.integers(0, n_infected_neighbors)`` draw selecting the pruned
    neighbor among the alive infected neighbors in ascending order.
    Returns the number of pruned edges (pairs in pruned_s/pruned_t).
    """
    for idx in range(inf.size):
        i = inf[idx]
        for k in range(off[i], off[i + 1]):
            if alive_edge[eidx[k]] and comp[nbr[k]] == SUSCEPTIBLE:
                cand_mask[nbr[k]] = True
    cnt = 0
    for s in range(comp.size):
        if not cand_mask[s]:
            continue
        cand_mask[s] = False
        ni = 0
        for k in range(off[s], off[s + 1]):
            if alive_edge[eidx[k]] and comp[nbr[k]] == INFECTED:
                ni += 1
        if ni == 0:
            continue
        if rng.random() < q[s]:
            pick = rng.integers(0, ni)
            c = 0
            for k in range(off[s], off[s + 1]):
                if alive_edge[eidx[k]] and comp[nbr[k]] == INFECTED:
                    if c == pick:
                        alive_edge[eidx[k]] = False
                        pruned_s[cnt] = s
                        pruned_t[cnt] = nbr[k]
                        cnt += 1
                        break
                    c += 1
    return cnt
