"""Parallel building blocks executed on a :class:`PramMachine`.

Processors are numbered from 0.  Each function performs its steps with
vectorized numpy code and declares every cell each processor touched, so the
machine can audit exclusivity step by step.
"""
from __future__ import annotations

import numpy as np

from .._backend import TournamentCore
from ..keys import ABSENT
from ..twothree import TwoThree
from .machine import region_base

# cell regions
R_C = region_base(1)        # C[i, j]                     -> i * J + j
R_NODE = region_base(2)     # LSDS node z, column j        -> uid * J + j
R_BNODE = region_base(3)    # edge-counter tree node       -> uid
R_VERTEX = region_base(4)   # getEdge vertex[] array       -> k
R_ADJ = region_base(5)      # adjacency slot of a vertex   -> 4 * v + slot
R_PCID = region_base(6)     # chunk id of principal copy   -> v
R_TOUR = region_base(7)     # tournament node              -> tree * width + z
R_GAMMA = region_base(8)    # gamma / argmin inputs        -> j
R_COPY = region_base(9)     # private broadcast cells      -> k
R_MARK = region_base(10)    # membership marks             -> v
R_REG = region_base(11)     # private registers            -> processor
R_CHUNKS = region_base(12)  # chunks[] array               -> j


def private(procs):
    procs = np.asarray(procs, dtype=np.int64)
    return R_REG + procs


class EdgeCounterTree(TwoThree):
    """2-3 tree over a chunk's occurrences.  ``count`` is the number of edges
    at principal copies below a node; ``agg`` holds the number of leaves."""

    def __init__(self, edge_count):
        super().__init__()
        self.edge_count = edge_count

    def pull(self, node):
        cnt = 0
        size = 0
        for ch in node.children:
            cnt += ch.count
            size += ch.agg
        node.count = cnt
        node.agg = size

    def new_leaf(self, item):
        leaf = super().new_leaf(item)
        leaf.agg = 1
        leaf.count = self.edge_count(item)
        return leaf


class Assignment:
    """Result of getEdge: processor k holds edge ``key[k]`` leaving ``near[k]``."""

    def __init__(self, procs, near, slot, key, far, far_slot):
        self.procs = procs
        self.near = near
        self.slot = slot
        self.key = key
        self.far = far
        self.far_slot = far_slot

    def __len__(self):
        return int(self.procs.size)


def _empty_assignment():
    e = np.zeros(0, dtype=np.int64)
    return Assignment(e, e, e, e, e, e)


def get_edge(m, root, adj, ends, K3: int) -> Assignment:
    """Assign processor k to the k-th edge at principal copies under ``root``.

    Descent over the edge-counter tree with the ``vertex`` array, then the
    +1/+2 probe for edges that share a principal copy.
    """
    total = root.count
    if total == 0:
        m.step([0], [R_BNODE + root.uid])
        return _empty_assignment()
    vertex = {}
    # initialization: p_1 reads the root counter and seeds vertex[ec_root]
    m.step([0, 0], [R_BNODE + root.uid, R_VERTEX + total])
    vertex[total] = root
    frontier = [(total, root)]
    while frontier and frontier[0][1].children is not None:
        procs, cells, nxt = [], [], []
        for k, v in frontier:
            lo = k - v.count
            for ch in v.children:
                procs.append(k)
                cells.append(R_BNODE + ch.uid)
                if ch.count:
                    lo += ch.count
                    procs.append(k)
                    cells.append(R_VERTEX + lo)
                    vertex[lo] = ch
                    nxt.append((lo, ch))
        m.step(procs, cells)
        frontier = nxt
    ks = np.arange(1, total + 1, dtype=np.int64)
    owner_leaf = [None] * (total + 1)
    slot = np.full(total + 1, -1, dtype=np.int64)
    # probe vertex[k], vertex[k+1], vertex[k+2] in three steps
    pending = list(range(1, total + 1))
    for off in range(3):
        procs, cells, still = [], [], []
        for k in pending:
            r = k + off
            procs.append(k)
            cells.append(R_VERTEX + r)
            leaf = vertex.get(r) if r <= total else None
            if leaf is not None:
                procs.append(k)
                cells.append(R_BNODE + leaf.uid)
                d = leaf.count
                if r - d < k:
                    owner_leaf[k] = leaf
                    slot[k] = d - 1 - off
                    continue
            still.append(k)
        m.step(procs, cells)
        pending = still
    assert not pending, "edge rank without a principal copy"
    near = np.array([owner_leaf[k].item.vertex for k in ks], dtype=np.int64)
    slot = slot[1:]
    key = np.empty(total, dtype=np.int64)
    far = np.empty(total, dtype=np.int64)
    far_slot = np.empty(total, dtype=np.int64)
    for i in range(total):
        v = int(near[i])
        e = adj[v][int(slot[i])]
        a, b = ends[e]
        w = b if a == v else a
        key[i] = e
        far[i] = w
        far_slot[i] = adj[w].index(e)
    # each processor reads its own adjacency slot
    m.step(ks, R_ADJ + 4 * near + slot)
    return Assignment(ks, near, slot, key, far, far_slot)


def read_far(m, asg: Assignment, table: np.ndarray, region: int) -> np.ndarray:
    """Every processor reads ``table[far]``; readers of one vertex are
    staggered by the slot the edge occupies at that vertex (at most 3)."""
    out = np.empty(len(asg), dtype=table.dtype)
    for s in range(3):
        sel = asg.far_slot == s
        if not sel.any():
            continue
        out[sel] = table[asg.far[sel]]
        m.step(asg.procs[sel], region + asg.far[sel])
    return out


class Tournament:
    """Balanced binary tournament trees with timestamp-cleared nodes.

    The per-level work runs in the kernel backend, which audits exclusivity
    itself and hands the step accounting back to the machine.
    """

    def __init__(self, n_trees: int, n_leaves: int):
        self.n_trees = n_trees
        self.width = 0
        self.core = None
        self.resize(n_leaves)

    def resize(self, n_leaves):
        w = 2
        while w < n_leaves:
            w *= 2
        if w > self.width:
            self.width = w
            self.core = TournamentCore(self.n_trees, w)

    def run(self, m, procs, trees, leaves, vals):
        """Play the tournaments; returns (root value per tree, winning processor per tree).

        Processor ``procs[i]`` enters tree ``trees[i]`` at leaf ``leaves[i]``
        with value ``vals[i]``.  Ties favour the left child.
        """
        leaves = np.asarray(leaves, dtype=np.int64)
        if leaves.size and int(leaves.max()) >= self.width:
            self.resize(int(leaves.max()) + 1)
        roots, winners, steps, work, peak, violation = self.core.run(
            procs, trees, leaves, vals, ABSENT, m.audit)
        m.account(steps, work, peak, violation, base=R_TOUR)
        return roots, winners


def broadcast(m, procs, needs, source: np.ndarray, source_cells: np.ndarray):
    """Deliver ``source[needs[i]]`` to processor ``procs[i]`` without
    concurrent reads: one reader per distinct need, then doubling fan-out."""
    procs = np.asarray(procs, dtype=np.int64)
    needs = np.asarray(needs, dtype=np.int64)
    out = np.zeros(procs.size, dtype=source.dtype)
    if procs.size == 0:
        return out
    order = np.lexsort((procs, needs))
    sn = needs[order]
    start = np.r_[True, sn[1:] != sn[:-1]]
    group_start = np.maximum.accumulate(np.where(start, np.arange(sn.size), 0))
    rank = np.arange(sn.size) - group_start
    lead = order[start]
    out[lead] = source[needs[lead]]
    m.step(procs[lead], np.concatenate([source_cells[needs[lead]]]) if lead.size else [])
    have = 1
    while (rank >= have).any():
        tgt = (rank >= have) & (rank < 2 * have)
        dst = order[tgt]
        src = order[np.flatnonzero(tgt) - have]
        out[dst] = out[src]
        m.step(np.concatenate([procs[src], procs[src]]),
               np.concatenate([R_COPY + procs[src], R_COPY + procs[dst]]))
        have *= 2
    return out
