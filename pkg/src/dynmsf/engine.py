"""Sequential dynamic minimum spanning forest over a graph of degree at most 3.

Each tree of the forest is kept twice: in a link-cut forest (connectivity and
path maxima) and as an Euler-tour list of occurrences split into chunks, which
is what the replacement-edge search runs on.  Edges are identified by their
``int64`` key throughout (see :mod:`dynmsf.keys`).

An occurrence is the tour's visit to a vertex right before it leaves along a
tree edge, so every tree edge owns exactly two occurrences: the one leaving
each endpoint along it (``edge_occ``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chunks import ChunkSpace, Occurrence
from .keys import ABSENT
from .linkcut import LinkCutForest
from .twothree import TwoThree


def default_K(n_reduced: int) -> int:
    n = max(n_reduced, 2)
    return max(4, math.ceil(math.sqrt(n * math.log2(n))))


@dataclass
class KeyDelta:
    added: list = field(default_factory=list)
    removed: list = field(default_factory=list)


@dataclass
class SurgeryCounter:
    """Split/join primitives spent by the Euler-tour operation in progress.

    ``tour_ops`` counts cyclic-tour primitives (opening a cyclic tour at a
    point counts once); ``storage_ops`` counts the split/join calls on the
    underlying linear lists.
    """
    tour_ops: int = 0
    storage_ops: int = 0
    max_tour_ops: int = 0
    max_storage_ops: int = 0
    operations: int = 0

    def begin(self):
        self.tour_ops = 0
        self.storage_ops = 0

    def end(self):
        self.operations += 1
        self.max_tour_ops = max(self.max_tour_ops, self.tour_ops)
        self.max_storage_ops = max(self.max_storage_ops, self.storage_ops)


class EngineBusy(RuntimeError):
    pass


class MsfEngine:
    """Maintains the minimum spanning forest of a dynamic graph on ``n`` vertices."""

    def __init__(self, n: int, K: int | None = None, J: int | None = None):
        self.n = n
        self.K = K if K is not None else default_K(n)
        self.space = self.make_space(n, self.K, J)
        self.lct = LinkCutForest(n)
        self.tree = set()
        self.edge_occ = {}
        self.surgery = SurgeryCounter()
        self._busy = False
        self._mwr_armed = False
        self.mwr_calls = 0

    def make_space(self, n, K, J):
        return ChunkSpace(n, K, J)

    @property
    def J(self):
        return self.space.J

    # list primitives ---------------------------------------------------
    def _root(self, o: Occurrence):
        return TwoThree.root(o.chunk.leaf)

    @staticmethod
    def _first_occ(root):
        return TwoThree.first_leaf(root).item.occs[0]

    @staticmethod
    def _last_occ(root):
        return TwoThree.last_leaf(root).item.occs[-1]

    def _pos(self, o: Occurrence):
        return (TwoThree.order_key(o.chunk.leaf), o.chunk.occs.index(o))

    def _pred(self, o: Occurrence):
        c = o.chunk
        i = c.occs.index(o)
        if i > 0:
            return c.occs[i - 1]
        prev = TwoThree.prev_leaf(c.leaf)
        return None if prev is None else prev.item.occs[-1]

    def split_list_after(self, o: Occurrence):
        """Cut the list of ``o`` right after it; returns the first occurrence
        of the right part (``None`` if ``o`` was last)."""
        sp = self.space
        self.surgery.storage_ops += 1
        c = o.chunk
        i = c.occs.index(o)
        if i < len(c.occs) - 1:
            sp._split_at(c, i)
        nxt = TwoThree.next_leaf(c.leaf)
        if nxt is None:
            sp.restore([c])
            return None
        d = nxt.item
        first_right = d.occs[0]
        sp.lsds.split_after(c.leaf)
        sp.restore([c, d])
        return first_right

    def join_lists(self, a_last: Occurrence, b_first: Occurrence):
        """Concatenate the list ending in ``a_last`` with the one starting at ``b_first``."""
        sp = self.space
        self.surgery.storage_ops += 1
        ca, cb = a_last.chunk, b_first.chunk
        sp.lsds.join(TwoThree.root(ca.leaf), TwoThree.root(cb.leaf))
        if ca.id is None:
            sp.promote(ca)
        if cb.id is None:
            sp.promote(cb)
        sp.restore([ca, cb])

    def rotate_to_front(self, o: Occurrence):
        p = self._pred(o)
        if p is None:
            return
        self.surgery.tour_ops += 1
        last = self._last_occ(self._root(o))
        first = self._first_occ(self._root(o))
        self.split_list_after(p)
        self.join_lists(last, first)

    def append_occ(self, root_occ: Occurrence, o: Occurrence):
        sp = self.space
        c = TwoThree.last_leaf(self._root(root_occ)).item
        c.occs.append(o)
        o.chunk = c
        c.mass += 1
        sp.occs[o.vertex].append(o)
        sp.bt_append(c, o)
        sp.restore([c])

    def remove_occ(self, o: Occurrence):
        sp = self.space
        assert not o.principal
        c = o.chunk
        sp.bt_remove(c, o)
        c.occs.remove(o)
        sp.occs[o.vertex].remove(o)
        c.mass -= 1
        o.chunk = None
        if c.occs:
            sp.restore([c])
            return
        nb = [TwoThree.next_leaf(c.leaf), TwoThree.prev_leaf(c.leaf)]
        if c.id is not None:
            sp.release_id(c)
        sp.lsds.delete(c.leaf)
        sp.destroy_chunk(c)
        sp.restore([leaf.item for leaf in nb if leaf is not None])

    def _coalesce(self, first: Occurrence, last: Occurrence, key: int):
        """Merge the two visits of one vertex that a cut left at the list ends."""
        if first is last:
            first.out = None
            return
        assert first.vertex == last.vertex and last.out == key
        if last.principal:
            f = first.out
            last.out = f
            pair = self.edge_occ[f]
            pair[pair.index(first)] = last
            self.remove_occ(first)
        else:
            self.remove_occ(last)

    # Euler tour surgery ------------------------------------------------
    def euler_join_trees(self, key: int, a: int, b: int):
        self.surgery.begin()
        ends = []
        for v in (a, b):
            occs = self.space.occs[v]
            o = occs[0]
            for cand in occs:
                if self._pred(cand) is None:
                    o = cand
                    break
            self.rotate_to_front(o)
            ends.append(o)
        made = []
        for o in ends:
            if o.out is None:
                o.out = key
                made.append(o)
            else:
                new = Occurrence(o.vertex, key)
                self.append_occ(o, new)
                made.append(new)
        self.edge_occ[key] = made
        oa, ob = ends
        self.surgery.tour_ops += 1
        self.join_lists(self._last_occ(self._root(oa)), self._first_occ(self._root(ob)))
        self.surgery.end()

    def euler_delete_tree_edge(self, key: int):
        """Cut the tour at both traversals of ``key``; returns one occurrence per side."""
        self.surgery.begin()
        x, y = self.edge_occ.pop(key)
        if self._pos(x) > self._pos(y):
            x, y = y, x
        self.surgery.tour_ops += 1
        mid_first = self.split_list_after(x)
        self.surgery.tour_ops += 1
        s_first = self.split_list_after(y)
        if s_first is not None:
            self.surgery.tour_ops += 1
            self.join_lists(self._last_occ(self._root(s_first)), self._first_occ(self._root(x)))
        self._coalesce(self._first_occ(self._root(x)), x, key)
        self._coalesce(mid_first, y, key)
        self.surgery.end()
        return x.vertex, y.vertex

    # replacement search ------------------------------------------------
    def _scan_short(self, chunk, other_root):
        sp = self.space
        best = ABSENT
        for o in chunk.occs:
            if not o.principal:
                continue
            v = o.vertex
            for key in sp.adj[v]:
                if key < best and TwoThree.root(sp.principal_chunk(sp.other_end(key, v)).leaf) is other_root:
                    best = key
        return best

    def find_mwr(self, ra, rb):
        """Lightest edge between the lists rooted at ``ra`` and ``rb`` (or ``None``)."""
        if not self._mwr_armed:
            raise RuntimeError("replacement search is only valid right after a tree split")
        self.mwr_calls += 1
        sp = self.space
        short_a = ra.children is None and ra.item.id is None
        short_b = rb.children is None and rb.item.id is None
        if short_a or short_b:
            best = self._scan_short(ra.item, rb) if short_a else self._scan_short(rb.item, ra)
            return None if best == ABSENT else best
        lsds = sp.lsds
        gamma = np.where(lsds.memb_of(rb), lsds.agg_of(ra), ABSENT)
        j = int(np.argmin(gamma))
        if gamma[j] == ABSENT:
            return None
        chat = sp.chunks[j]
        memb_a = lsds.memb_of(ra)
        best = ABSENT
        for o in chat.occs:
            if not o.principal:
                continue
            v = o.vertex
            for key in sp.adj[v]:
                fid = sp.principal_chunk(sp.other_end(key, v)).id
                if fid is not None and memb_a[fid] and key < best:
                    best = key
        return None if best == ABSENT else best

    # forest updates ----------------------------------------------------
    def _link(self, key, a, b):
        self.lct.link(a, b, key)
        self.euler_join_trees(key, a, b)
        self.tree.add(key)

    def _cut(self, key):
        self.lct.cut(key)
        self.tree.discard(key)
        return self.euler_delete_tree_edge(key)

    def _enter(self):
        if self._busy:
            raise EngineBusy("engine operation already in progress")
        self._busy = True

    def insert_edge(self, key: int, a: int, b: int) -> KeyDelta:
        self._enter()
        try:
            sp = self.space
            if a == b:
                raise ValueError("self-loops are not allowed")
            if key in sp.ends:
                raise ValueError("edge key %d already present" % key)
            sp.restore(sp.add_edge(key, a, b))
            delta = KeyDelta()
            if not self.lct.connected(a, b):
                self._link(key, a, b)
                delta.added.append(key)
            else:
                heavy = self.lct.path_max(a, b)
                if key < heavy:
                    self._cut(heavy)
                    self._link(key, a, b)
                    delta.added.append(key)
                    delta.removed.append(heavy)
            return delta
        finally:
            self._busy = False

    def delete_edge(self, key: int) -> KeyDelta:
        self._enter()
        try:
            sp = self.space
            if key not in sp.ends:
                raise KeyError("no such edge")
            sp.restore(sp.remove_edge(key))
            delta = KeyDelta()
            if key in self.tree:
                delta.removed.append(key)
                u, v = self._cut(key)
                ru = TwoThree.root(sp.principal_chunk(u).leaf)
                rv = TwoThree.root(sp.principal_chunk(v).leaf)
                self._mwr_armed = True
                try:
                    r = self.find_mwr(ru, rv)
                finally:
                    self._mwr_armed = False
                if r is not None:
                    a, b = sp.ends[r]
                    self._link(r, a, b)
                    delta.added.append(r)
            return delta
        finally:
            self._busy = False

    def path_test(self, a: int, b: int, key: int):
        """Would an edge ``key`` between ``a`` and ``b`` join the forest?

        Returns ``(enters, evicted_key)``; nothing is modified.
        """
        if not self.lct.connected(a, b):
            return True, None
        heavy = self.lct.path_max(a, b)
        if key < heavy:
            return True, heavy
        return False, None

    def tree_keys(self):
        return set(self.tree)

    # audit -------------------------------------------------------------
    def tour(self, v: int):
        """Occurrence vertices of the tour containing ``v``, in list order."""
        return [o.vertex for o in self.space.list_occs(self._root(self.space.principal[v]))]

    def audit(self):
        sp = self.space
        roots = sp.audit()
        assert self.lct.edges() == self.tree, "link-cut forest differs from tree set"
        assert set(self.edge_occ) == self.tree
        for key, pair in self.edge_occ.items():
            assert len(pair) == 2 and all(o.out == key and o.chunk is not None for o in pair)
            assert {pair[0].vertex, pair[1].vertex} == set(sp.ends[key])
        tdeg = [0] * self.n
        for key in self.tree:
            a, b = sp.ends[key]
            tdeg[a] += 1
            tdeg[b] += 1
        for v in range(self.n):
            assert len(sp.occs[v]) == max(1, tdeg[v]), "occurrence count of %d" % v
        for r in roots.values():
            check_tour([(o.vertex, o.out) for o in sp.list_occs(r)], sp.ends)
        return True


def check_tour(seq, ends):
    """Verify that ``seq`` of (vertex, out-key) pairs is a closed Euler tour."""
    if len(seq) == 1:
        assert seq[0][1] is None, "isolated vertex with an out edge"
        return
    start = seq[0][0]
    stack = [start]
    seen = {start}
    used = set()
    for i, (v, key) in enumerate(seq):
        assert v == stack[-1], "tour visits %d but walk is at %d" % (v, stack[-1])
        nxt = seq[(i + 1) % len(seq)][0]
        assert key is not None and set(ends[key]) == {v, nxt}, "tour step %d-%d" % (v, nxt)
        assert (key, v) not in used
        used.add((key, v))
        if len(stack) >= 2 and stack[-2] == nxt:
            stack.pop()
        else:
            assert nxt not in seen, "tour re-enters %d" % nxt
            seen.add(nxt)
            stack.append(nxt)
    assert stack == [start], "tour does not close"
