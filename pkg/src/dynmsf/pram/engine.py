"""EREW-parallel variant of the forest engine.

The parallel engine keeps exactly the same state as :class:`MsfEngine`; the
difference is how the expensive pieces are computed and charged:

* CAdj rows and pair minima come from getEdge plus tournament trees,
* the balancing split point is found by descending the edge-counter tree,
* replacement search builds gamma with J processors, picks the chunk by a
  tournament and verifies candidates through a fan-out broadcast,
* LSDS structural changes cost one J-processor step per touched node, with
  the leftmost-child sweep refreshing column ``id_c`` after a row rewrite.

Every parallel step goes through :meth:`PramMachine.step`, so audit mode
checks exclusivity of all of them.  Link-cut work runs on one processor and
is reported separately as ``linkcut_depth``.
"""
from __future__ import annotations

import numpy as np

from ..chunks import ChunkSpace
from ..engine import MsfEngine
from ..keys import ABSENT
from ..lsds import Lsds
from ..twothree import TwoThree
from .machine import PramMachine, StepReport
from .procedures import (R_C, R_CHUNKS, R_GAMMA, R_MARK, R_NODE, R_PCID, R_TOUR,
                         EdgeCounterTree, Tournament, broadcast, get_edge,
                         read_far)


def _height(node):
    h = 0
    while node.parent is not None:
        node = node.parent
        h += 1
    return h


class PramLsds(Lsds):
    """LSDS whose column trees S_1..S_J share one shape; node ``z`` of S_j is
    column ``j`` of ``z.agg``/``z.memb``."""

    def __init__(self, C, machine: PramMachine):
        super().__init__(C)
        self.m = machine

    def _pull(self, node):
        super()._pull(node)
        # processor j recomputes node z of S_j
        self.m.charge(1, self.J)

    def refresh_entry(self, leaf, j: int):
        h = _height(leaf)
        super().refresh_entry(leaf, j)
        self.m.charge(h, 1)

    def _cell(self, node, j):
        if node.children is None:
            cid = node.item.id
            return -1 if cid is None else R_C + cid * self.J + j
        return R_NODE + node.uid * self.J + j

    def update_adj(self, chunk, changed_cols=()):
        self.refresh_path(chunk.leaf)
        cid = chunk.id
        if cid is None:
            return
        self.sweep_column(cid)

    def sweep_column(self, col: int):
        """Leftmost-child sweep: processor j starts at the leaf of chunk j and
        climbs while it is the leftmost child, refreshing entry ``col``."""
        J = self.J
        colvals = self.C[:, col].tolist()
        node_base = R_NODE + col
        c_base = R_C + col
        front = []
        for c in self.owner.chunks:
            if c is not None and c.leaf.parent is not None:
                front.append((c.id, c.leaf))
        while front:
            procs, cells, nxt = [], [], []
            for j, z in front:
                p = z.parent
                if p is None or p.children[0] is not z:
                    continue
                best = ABSENT
                for k in p.children:
                    if k.children is None:
                        cid = k.item.id
                        if cid is None:
                            continue
                        v = colvals[cid]
                        cells.append(c_base + cid * J)
                    else:
                        v = int(k.agg[col])
                        cells.append(node_base + k.uid * J)
                    procs.append(j)
                    if v < best:
                        best = v
                p.agg[col] = best
                procs.append(j)
                cells.append(node_base + p.uid * J)
                nxt.append((j, p))
            self.m.step(procs, cells)
            front = nxt


class PramChunkSpace(ChunkSpace):
    def __init__(self, n, K, J, machine: PramMachine):
        self.m = machine
        self.bt = EdgeCounterTree(self._edge_count)
        self.pcid = np.full(n, -1, dtype=np.int64)
        super().__init__(n, K, J)
        self.lsds.owner = self
        self.tourn = Tournament(self.J, 3 * self.K)
        self.single = Tournament(1, max(self.J, 3 * self.K))
        self._js = np.arange(self.J, dtype=np.int64)
        self._js2 = np.concatenate((self._js, self._js))

    def make_lsds(self):
        return PramLsds(self.C, self.m)

    def _edge_count(self, o):
        return len(self.adj[o.vertex]) if o.principal else 0

    # edge-counter trees (maintained by p_1) ----------------------------
    def _bt_charge(self, before):
        self.m.charge(self.bt.touched - before, 1)

    def bt_build(self, c):
        t0 = self.bt.touched
        root, leaves = self.bt.build(c.occs)
        for o, leaf in zip(c.occs, leaves):
            o.bleaf = leaf
        c.btree = root
        self._bt_charge(t0)

    def bt_split(self, c, c2):
        t0 = self.bt.touched
        c.btree, c2.btree = self.bt.split_after(c.occs[-1].bleaf)
        self._bt_charge(t0)

    def bt_join(self, c1, c2):
        t0 = self.bt.touched
        c1.btree = self.bt.join(c1.btree, c2.btree)
        c2.btree = None
        self._bt_charge(t0)

    def bt_append(self, c, o):
        t0 = self.bt.touched
        leaf = self.bt.new_leaf(o)
        o.bleaf = leaf
        c.btree = self.bt.insert_after(TwoThree.last_leaf(c.btree), leaf)
        self._bt_charge(t0)

    def bt_remove(self, c, o):
        t0 = self.bt.touched
        c.btree = self.bt.delete(o.bleaf)
        o.bleaf = None
        self._bt_charge(t0)

    def bt_recount(self, o):
        t0 = self.bt.touched
        leaf = o.bleaf
        leaf.count = self._edge_count(o)
        x = leaf.parent
        while x is not None:
            self.bt._pull(x)
            x = x.parent
        self._bt_charge(t0)

    def ids_changed(self, c):
        v = np.array([o.vertex for o in c.occs if o.principal], dtype=np.int64)
        self.pcid[v] = -1 if c.id is None else c.id
        self.m.step(v, R_PCID + v)

    def serial(self, steps=1):
        self.m.charge(steps, 1)

    # parallel row work -------------------------------------------------
    def _assign(self, c):
        return get_edge(self.m, c.btree, self.adj, self.ends, 3 * self.K)

    def compute_row(self, c):
        self.row_rebuilds += 1
        m = self.m
        asg = self._assign(c)
        fid = read_far(m, asg, self.pcid, R_PCID)
        sel = fid >= 0
        roots, _ = self.tourn.run(m, asg.procs[sel], fid[sel], asg.procs[sel] - 1, asg.key[sel])
        J = self.J
        js = np.arange(J, dtype=np.int64)
        m.step(js, R_TOUR + js * (2 * self.tourn.width) + 1)
        return roots.astype(np.int64)

    def write_row(self, c, row):
        i = c.id
        if i is None:
            return
        J = self.J
        js = self._js
        self.m.step(self._js2, np.concatenate((R_C + i * J + js, R_C + js * J + i)))
        super().write_row(c, row)

    def write_entry(self, i, j, value):
        J = self.J
        self.m.step([0, 0], [R_C + i * J + j, R_C + j * J + i])
        super().write_entry(i, j, value)

    def pair_min(self, ci, cj):
        m = self.m
        asg = self._assign(ci)
        fid = read_far(m, asg, self.pcid, R_PCID)
        sel = fid == cj.id
        procs = asg.procs[sel]
        roots, _ = self.single.run(m, procs, np.zeros(procs.size, dtype=np.int64),
                                   procs - 1, asg.key[sel])
        m.step([0], [R_TOUR + 1])
        return int(roots[0])

    def merged_row(self, c1, c2):
        i, j = c1.id, c2.id
        J = self.J
        js = self._js
        self.m.step(self._js2, np.concatenate((R_C + i * J + js, R_C + j * J + js)))
        self.m.step([0, 0, 0], [R_C + i * J + i, R_C + j * J + j, R_C + i * J + j])
        return super().merged_row(c1, c2)

    def balance_index(self, c):
        """Descend the edge-counter tree to the point where the prefix mass
        crosses half of the chunk's mass."""
        node = c.btree
        mass = c.mass
        acc = 0
        skipped = 0
        steps = 0
        while node.children is not None:
            steps += 1
            for ch in node.children:
                w = ch.agg + ch.count
                if 2 * (acc + w) <= mass:
                    acc += w
                    skipped += ch.agg
                else:
                    node = ch
                    break
            else:
                node = node.children[-1]
                break
        self.m.charge(steps + 1, 1)
        last = len(c.occs) - 2
        i = skipped - 1
        if i < 0:
            return 0
        if i >= last:
            return last
        nxt = acc + 1 + c.occs[i + 1].bleaf.count
        return i if abs(2 * acc - mass) <= abs(2 * nxt - mass) else i + 1

    def audit(self):
        roots = super().audit()
        for v in range(self.n):
            cid = self.principal[v].chunk.id
            assert self.pcid[v] == (-1 if cid is None else cid), "pcid of %d" % v
        for c in self.live:
            TwoThree.check(c.btree)
            leaves = list(TwoThree.leaves(c.btree))
            assert [leaf.item for leaf in leaves] == c.occs, "edge-counter tree order"
            assert c.btree.count == sum(self._edge_count(o) for o in c.occs)
            assert c.btree.agg == len(c.occs)
        return roots


class PramEngine(MsfEngine):
    """Same forest, same deltas as :class:`MsfEngine`; every procedure is
    charged on a :class:`PramMachine`."""

    def __init__(self, n, K=None, J=None, audit=True, machine=None):
        self.machine = machine if machine is not None else PramMachine(audit=audit)
        if K is None:
            K = max(4, int(np.ceil(np.sqrt(max(n, 2)))))
        self.reports = []
        m = self.machine
        counters = (m.depth, m.work, m.max_processors, m.op_peak)
        super().__init__(n, K, J)
        # building the initial singleton chunks is setup, not an update
        m.depth, m.work, m.max_processors, m.op_peak = counters

    def make_space(self, n, K, J):
        return PramChunkSpace(n, K, J, self.machine)

    # p_1 bookkeeping ---------------------------------------------------
    def _root(self, o):
        self.machine.charge(_height(o.chunk.leaf) + 1, 1)
        return super()._root(o)

    def _pos(self, o):
        self.machine.charge(_height(o.chunk.leaf) + 1, 1)
        return super()._pos(o)

    def _link(self, key, a, b):
        s0 = self.lct.steps
        self.lct.link(a, b, key)
        self._charge_lct(s0)
        self.euler_join_trees(key, a, b)
        self.tree.add(key)

    def _cut(self, key):
        s0 = self.lct.steps
        self.lct.cut(key)
        self._charge_lct(s0)
        self.tree.discard(key)
        return self.euler_delete_tree_edge(key)

    def path_test(self, a, b, key):
        s0 = self.lct.steps
        try:
            return super().path_test(a, b, key)
        finally:
            self._charge_lct(s0)

    def _charge_lct(self, s0):
        d = self.lct.steps - s0
        self.machine.charge(d, 1)
        self.machine.linkcut_depth += d

    # replacement search ------------------------------------------------
    def _verify_short(self, short_root, other_root):
        """Candidates from the short side, verified against ``other_root``."""
        sp = self.space
        m = self.machine
        asg = sp._assign(short_root.item)
        if len(asg) == 0:
            return ABSENT
        if other_root.children is None and other_root.item.id is None:
            # both short: mark the other side's principal copies, then probe
            epoch = m.new_epoch()
            vs = np.array([o.vertex for o in other_root.item.occs if o.principal], dtype=np.int64)
            marks = np.full(sp.n, -1, dtype=np.int64)
            marks[vs] = epoch
            m.step(vs, R_MARK + vs)
            hit = read_far(m, asg, marks, R_MARK) == epoch
        else:
            fid = read_far(m, asg, sp.pcid, R_PCID)
            memb = sp.lsds.memb_of(other_root).astype(np.int64)
            ok = fid >= 0
            hit = np.zeros(len(asg), dtype=bool)
            bits = broadcast(m, asg.procs[ok], fid[ok], memb, self._memb_cells(other_root))
            hit[ok] = bits.astype(bool)
        return self._final_min(asg, hit)

    def _memb_cells(self, root):
        J = self.J
        js = np.arange(J, dtype=np.int64)
        if root.children is None:
            return R_C + root.item.id * J + js
        return R_NODE + root.uid * J + js

    def _final_min(self, asg, hit):
        procs = asg.procs[hit]
        roots, _ = self.space.single.run(self.machine, procs, np.zeros(procs.size, dtype=np.int64),
                                         procs - 1, asg.key[hit])
        self.machine.step([0], [R_TOUR + 1])
        return int(roots[0])

    def find_mwr(self, ra, rb):
        if not self._mwr_armed:
            raise RuntimeError("replacement search is only valid right after a tree split")
        self.mwr_calls += 1
        sp = self.space
        m = self.machine
        short_a = ra.children is None and ra.item.id is None
        short_b = rb.children is None and rb.item.id is None
        if short_a or short_b:
            best = self._verify_short(ra, rb) if short_a else self._verify_short(rb, ra)
            return None if best == ABSENT else best
        J = self.J
        js = np.arange(J, dtype=np.int64)
        lsds = sp.lsds
        gamma = np.where(lsds.memb_of(rb), lsds.agg_of(ra), ABSENT)
        m.step(np.concatenate((js, js, js)),
               np.concatenate((self._memb_cells(rb), self._memb_cells(ra), R_GAMMA + js)))
        roots, winners = sp.single.run(m, js, np.zeros(J, dtype=np.int64), js, gamma)
        m.step([0], [R_TOUR + 1])
        if roots[0] == ABSENT:
            return None
        j = int(winners[0])
        m.step([0], [R_CHUNKS + j])
        chat = sp.chunks[j]
        asg = sp._assign(chat)
        fid = read_far(m, asg, sp.pcid, R_PCID)
        ok = fid >= 0
        hit = np.zeros(len(asg), dtype=bool)
        memb_a = lsds.memb_of(ra).astype(np.int64)
        hit[ok] = broadcast(m, asg.procs[ok], fid[ok], memb_a, self._memb_cells(ra)).astype(bool)
        best = self._final_min(asg, hit)
        return None if best == ABSENT else best

    # per-operation reports ---------------------------------------------
    def insert_edge(self, key, a, b):
        snap = self.machine.snapshot()
        try:
            return super().insert_edge(key, a, b)
        finally:
            self.reports.append(self.machine.report_since(snap))

    def delete_edge(self, key):
        snap = self.machine.snapshot()
        try:
            return super().delete_edge(key)
        finally:
            self.reports.append(self.machine.report_since(snap))

    @property
    def last_report(self) -> StepReport:
        return self.reports[-1] if self.reports else StepReport()


def pram_factory(audit=True, machine=None):
    """Engine factory for :class:`dynmsf.graph.DynamicGraph`."""
    shared = machine

    def make(n_reduced, k):
        return PramEngine(n_reduced, K=k, audit=audit, machine=shared)

    return make
