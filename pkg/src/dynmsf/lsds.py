"""List-sum data structure over the chunks of Euler lists.

Each chunk is a leaf of a 2-3 tree and a list is identified by its tree's
root.  Internal nodes hold two J-length vectors: ``agg`` (entry-wise minimum
of the descendant chunks' CAdj rows) and ``memb`` (entry-wise OR of their
membership rows).  A leaf's row is read live from the shared matrix, so a
leaf never stores a copy.
"""
from __future__ import annotations

import numpy as np

from .keys import ABSENT
from .twothree import TwoThree


class Lsds(TwoThree):
    def __init__(self, C: np.ndarray):
        super().__init__()
        self.C = C
        self.J = C.shape[0]
        self._absent = np.full(self.J, ABSENT, dtype=np.int64)
        self._absent.flags.writeable = False
        self._zero = np.zeros(self.J, dtype=bool)
        self._zero.flags.writeable = False

    # leaf views --------------------------------------------------------
    def agg_of(self, node) -> np.ndarray:
        if node.children is not None:
            return node.agg
        cid = node.item.id
        return self._absent if cid is None else self.C[cid]

    def memb_of(self, node) -> np.ndarray:
        if node.children is not None:
            return node.memb
        cid = node.item.id
        if cid is None:
            return self._zero
        m = np.zeros(self.J, dtype=bool)
        m[cid] = True
        return m

    def entry_of(self, node, j: int) -> int:
        if node.children is not None:
            return int(node.agg[j])
        cid = node.item.id
        return ABSENT if cid is None else int(self.C[cid, j])

    # aggregate maintenance --------------------------------------------
    def pull(self, node):
        kids = node.children
        agg = node.agg
        if agg is None:
            agg = node.agg = np.empty(self.J, dtype=np.int64)
            node.memb = np.empty(self.J, dtype=bool)
        memb = node.memb
        np.minimum(self.agg_of(kids[0]), self.agg_of(kids[1]), out=agg)
        if len(kids) == 3:
            np.minimum(agg, self.agg_of(kids[2]), out=agg)
        memb[:] = False
        for k in kids:
            if k.children is None:
                if k.item.id is not None:
                    memb[k.item.id] = True
            else:
                memb |= k.memb

    def refresh_path(self, leaf):
        """Full recompute of every ancestor of ``leaf``."""
        x = leaf.parent
        while x is not None:
            self._pull(x)
            x = x.parent

    def refresh_entry(self, leaf, j: int):
        """Recompute entry ``j`` of the aggregates on the path above ``leaf``."""
        x = leaf.parent
        while x is not None:
            self.touched += 1
            best = ABSENT
            for k in x.children:
                v = self.entry_of(k, j)
                if v < best:
                    best = v
            x.agg[j] = best
            x = x.parent

    # list-level operations --------------------------------------------
    def ls_insert(self, chunk, after):
        if chunk.leaf is not None and chunk.leaf.parent is not None:
            raise ValueError("chunk already attached")
        leaf = chunk.leaf if chunk.leaf is not None else self.new_leaf(chunk)
        chunk.leaf = leaf
        return self.insert_after(after.leaf, leaf)

    def ls_delete(self, chunk):
        if chunk.leaf is None:
            raise ValueError("chunk not attached")
        root = self.delete(chunk.leaf)
        return root

    def ls_join(self, a, b):
        return self.join(a, b)

    def ls_split(self, chunk):
        return self.split_after(chunk.leaf)

    def update_adj(self, chunk, changed_cols=()):
        """Refresh after ``chunk``'s row and column changed.

        Ancestors of the chunk's leaf are recomputed in full; for every other
        chunk whose entry in column ``id`` changed, that entry is refreshed on
        its own leaf-to-root path (which may lie in another list).
        """
        self.refresh_path(chunk.leaf)
        cid = chunk.id
        for other in changed_cols:
            if other is not chunk and cid is not None:
                self.refresh_entry(other.leaf, cid)

    # audit -------------------------------------------------------------
    def check_tree(self, root):
        TwoThree.check(root)
        for node in TwoThree.nodes(root):
            if node.children is None:
                continue
            rows = [self.agg_of(leaf) for leaf in TwoThree.leaves(node)]
            want = np.minimum.reduce(rows) if len(rows) > 1 else rows[0]
            assert np.array_equal(node.agg, want), "stale CAdj aggregate"
            ids = [leaf.item.id for leaf in TwoThree.leaves(node) if leaf.item.id is not None]
            m = np.zeros(self.J, dtype=bool)
            m[ids] = True
            assert np.array_equal(node.memb, m), "stale Memb aggregate"
