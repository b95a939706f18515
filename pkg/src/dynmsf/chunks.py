"""Euler-tour occurrences grouped into chunks, plus the chunk adjacency matrix.

Every vertex of the reduced graph owns one or more occurrences (one per tree
edge at the vertex, or a single one if it is isolated in the forest) and
exactly one of them is *principal*.  Occurrences are grouped into chunks, the
leaves of the list structure.  A chunk that takes part in a multi-chunk list
(or that is heavy enough) holds an id in ``[0, J)``; the row ``C[id]`` stores,
per other id, the key of the lightest edge joining principal copies in the
two chunks.  Freed ids always have an all-ABSENT row and column.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from ._backend import scatter_min
from .keys import ABSENT
from .lsds import Lsds
from .twothree import TwoThree


class Verdict(enum.Enum):
    OK = "OK"
    TOO_BIG = "TOO_BIG"
    TOO_SMALL = "TOO_SMALL"


class Occurrence:
    __slots__ = ("vertex", "chunk", "out", "principal", "bleaf")

    def __init__(self, vertex, out=None):
        self.vertex = vertex
        self.chunk = None
        self.out = out  # key of the tree edge the tour takes when leaving here
        self.principal = False
        self.bleaf = None

    def __repr__(self):
        return "Occ(%d%s)" % (self.vertex, "*" if self.principal else "")


class Chunk:
    __slots__ = ("id", "occs", "mass", "leaf", "alive", "btree")

    def __init__(self, occs):
        self.id = None
        self.occs = occs
        self.mass = 0
        self.leaf = None
        self.alive = True
        self.btree = None
        for o in occs:
            o.chunk = self

    @property
    def lone(self) -> bool:
        return self.leaf.parent is None

    def __repr__(self):
        return "Chunk(id=%s, mass=%d, %r)" % (self.id, self.mass, self.occs)


def check_invariant1(chunk: Chunk, K: int) -> Verdict:
    if chunk.mass > 3 * K:
        return Verdict.TOO_BIG
    if chunk.mass < K and not chunk.lone:
        return Verdict.TOO_SMALL
    return Verdict.OK


def default_J(n_reduced: int, K: int) -> int:
    return max(4, math.ceil(12 * n_reduced / K))


class ChunkSpace:
    """Chunks, ids, the CAdj matrix and the list structure over ``n`` vertices."""

    def __init__(self, n: int, K: int, J: int | None = None):
        if K < 4:
            raise ValueError("chunk size parameter K must be at least 4")
        self.n = n
        self.K = K
        self.J = J if J is not None else default_J(n, K)
        self.C = np.full((self.J, self.J), ABSENT, dtype=np.int64)
        self.absent_row = np.full(self.J, ABSENT, dtype=np.int64)
        self.lsds = self.make_lsds()
        self.chunks = [None] * self.J
        self._free_ids = list(range(self.J - 1, -1, -1))
        self.adj = [[] for _ in range(n)]
        self.ends = {}
        self.occs = [[] for _ in range(n)]
        self.principal = [None] * n
        self.live = set()
        self.row_rebuilds = 0
        for v in range(n):
            o = Occurrence(v)
            o.principal = True
            self.occs[v].append(o)
            self.principal[v] = o
            self.new_chunk([o])

    def make_lsds(self):
        return Lsds(self.C)

    # basic helpers -----------------------------------------------------
    def weight_of(self, o: Occurrence) -> int:
        return 1 + len(self.adj[o.vertex]) if o.principal else 1

    def recount_mass(self, c: Chunk) -> int:
        return sum(self.weight_of(o) for o in c.occs)

    def new_chunk(self, occs) -> Chunk:
        c = Chunk(occs)
        c.mass = self.recount_mass(c)
        c.leaf = self.lsds.new_leaf(c)
        self.live.add(c)
        self.bt_build(c)
        return c

    # hooks for the parallel variant -----------------------------------
    def bt_build(self, c):
        """Build the edge-counter tree of a fresh chunk."""

    def bt_split(self, c, c2):
        """``c``'s occurrences were split; ``c2`` holds the right part."""

    def bt_join(self, c1, c2):
        """``c2``'s occurrences were appended to ``c1``."""

    def bt_append(self, c, o):
        """Occurrence ``o`` was appended to ``c``."""

    def bt_remove(self, c, o):
        """Occurrence ``o`` was removed from ``c``."""

    def bt_recount(self, o):
        """The edge count carried by occurrence ``o`` changed."""

    def ids_changed(self, c):
        """Principal copies in ``c`` must now report ``c.id``."""

    def serial(self, steps=1):
        """Bookkeeping done by a single processor."""

    def root_of(self, c: Chunk):
        return TwoThree.root(c.leaf)

    def list_chunks(self, root):
        return [leaf.item for leaf in TwoThree.leaves(root)]

    def list_occs(self, root):
        return [o for c in self.list_chunks(root) for o in c.occs]

    def other_end(self, key: int, v: int) -> int:
        a, b = self.ends[key]
        return b if a == v else a

    def principal_chunk(self, v: int) -> Chunk:
        return self.principal[v].chunk

    # ids and rows ------------------------------------------------------
    def assign_id(self, c: Chunk):
        if not self._free_ids:
            raise RuntimeError("chunk id pool exhausted: J=%d is too small" % self.J)
        i = self._free_ids.pop()
        c.id = i
        self.chunks[i] = c
        self.serial()
        self.ids_changed(c)

    def release_id(self, c: Chunk):
        i = c.id
        self.write_row(c, self.absent_row)
        c.id = None
        self.chunks[i] = None
        self._free_ids.append(i)
        self.serial()
        self.ids_changed(c)
        self.lsds.refresh_path(c.leaf)

    def compute_row(self, c: Chunk) -> np.ndarray:
        """Brute-force CAdj row: lightest edge per far chunk id."""
        self.row_rebuilds += 1
        idx = []
        vals = []
        adj, principal, ends = self.adj, self.principal, self.ends
        for o in c.occs:
            if not o.principal:
                continue
            v = o.vertex
            for key in adj[v]:
                a, b = ends[key]
                fid = principal[b if a == v else a].chunk.id
                if fid is not None:
                    idx.append(fid)
                    vals.append(key)
        return scatter_min(self.J, idx, vals, ABSENT)

    def write_row(self, c: Chunk, row: np.ndarray):
        """Install ``row`` as row and column ``c.id`` and refresh aggregates."""
        i = c.id
        if i is None:
            return
        changed = np.flatnonzero(self.C[:, i] != row)
        self.C[i, :] = row
        self.C[:, i] = row
        others = [self.chunks[j] for j in changed.tolist() if j != i]
        self.lsds.update_adj(c, others)

    def write_entry(self, i: int, j: int, value: int):
        self.C[i, j] = value
        self.C[j, i] = value
        self.lsds.refresh_entry(self.chunks[i].leaf, j)
        if i != j:
            self.lsds.refresh_entry(self.chunks[j].leaf, i)

    def pair_min(self, ci: Chunk, cj: Chunk) -> int:
        best = ABSENT
        for o in ci.occs:
            if not o.principal:
                continue
            v = o.vertex
            for key in self.adj[v]:
                if key < best and self.principal[self.other_end(key, v)].chunk is cj:
                    best = key
        return best

    def rebuild_cadj_row(self, c: Chunk):
        if c.id is not None:
            self.write_row(c, self.compute_row(c))

    def promote(self, c: Chunk):
        self.assign_id(c)
        self.lsds.refresh_path(c.leaf)
        self.rebuild_cadj_row(c)

    def demote(self, c: Chunk):
        self.release_id(c)

    # graph edges -------------------------------------------------------
    def add_edge(self, key: int, a: int, b: int):
        self.adj[a].append(key)
        self.adj[b].append(key)
        self.ends[key] = (a, b)
        ca, cb = self.principal_chunk(a), self.principal_chunk(b)
        ca.mass += 1
        cb.mass += 1
        self.bt_recount(self.principal[a])
        self.bt_recount(self.principal[b])
        if ca.id is not None and cb.id is not None and key < self.C[ca.id, cb.id]:
            self.write_entry(ca.id, cb.id, key)
        return ca, cb

    def remove_edge(self, key: int):
        a, b = self.ends.pop(key)
        self.adj[a].remove(key)
        self.adj[b].remove(key)
        ca, cb = self.principal_chunk(a), self.principal_chunk(b)
        ca.mass -= 1
        cb.mass -= 1
        self.bt_recount(self.principal[a])
        self.bt_recount(self.principal[b])
        if ca.id is not None and cb.id is not None and self.C[ca.id, cb.id] == key:
            self.write_entry(ca.id, cb.id, self.pair_min(ca, cb))
        return ca, cb

    # principal copies --------------------------------------------------
    def set_principal(self, v: int, o: Occurrence):
        old = self.principal[v]
        if old is o:
            return ()
        if o.vertex != v:
            raise ValueError("occurrence does not belong to vertex %d" % v)
        old.principal = False
        o.principal = True
        self.principal[v] = o
        self.bt_recount(old)
        self.bt_recount(o)
        c_old, c_new = old.chunk, o.chunk
        if c_old is c_new:
            return (c_old,)
        d = len(self.adj[v])
        c_old.mass -= d
        c_new.mass += d
        self.ids_changed(c_new)
        self.rebuild_cadj_row(c_old)
        self.rebuild_cadj_row(c_new)
        return (c_old, c_new)

    # chunk split and merge ---------------------------------------------
    def chunk_split(self, c: Chunk, at: Occurrence):
        """Split ``c`` right after ``at``; the new right part is returned."""
        i = c.occs.index(at)
        if i == len(c.occs) - 1:
            raise ValueError("cannot split a chunk after its last occurrence")
        return self._split_at(c, i)

    def _split_at(self, c: Chunk, i: int) -> Chunk:
        right = c.occs[i + 1:]
        c.occs = c.occs[:i + 1]
        c2 = Chunk(right)
        c2.mass = self.recount_mass(c2)
        c.mass -= c2.mass
        c2.leaf = self.lsds.new_leaf(c2)
        self.live.add(c2)
        self.bt_split(c, c2)
        self.lsds.insert_after(c.leaf, c2.leaf)
        if c.id is not None:
            self.assign_id(c2)
            self.lsds.refresh_path(c2.leaf)
            self.rebuild_cadj_row(c)
            self.rebuild_cadj_row(c2)
        return c2

    def balance_index(self, c: Chunk) -> int:
        """Index of the last occurrence kept on the left by a balancing split."""
        best, best_i = None, 0
        pre = 0
        for i, o in enumerate(c.occs[:-1]):
            pre += self.weight_of(o)
            gap = abs(2 * pre - c.mass)
            if best is None or gap < best:
                best, best_i = gap, i
        return best_i

    def merged_row(self, c1: Chunk, c2: Chunk) -> np.ndarray:
        i, j = c1.id, c2.id
        row = np.minimum(self.C[i], self.C[j])
        row[i] = min(self.C[i, i], self.C[j, j], self.C[i, j])
        row[j] = ABSENT
        return row

    def chunk_merge(self, c1: Chunk, c2: Chunk) -> Chunk:
        """Absorb ``c2`` (the chunk right after ``c1`` in its list) into ``c1``."""
        if TwoThree.next_leaf(c1.leaf) is not c2.leaf:
            raise ValueError("chunks are not adjacent in one list")
        if c1.id is None and c2.id is not None:
            self.promote(c1)
        if c2.id is None and c1.id is not None:
            self.promote(c2)
        row = self.merged_row(c1, c2) if c1.id is not None else None
        for o in c2.occs:
            o.chunk = c1
        self.bt_join(c1, c2)
        c1.occs.extend(c2.occs)
        c1.mass += c2.mass
        if c2.id is not None:
            self.release_id(c2)
        self.ids_changed(c1)
        self.lsds.delete(c2.leaf)
        self.destroy_chunk(c2)
        if row is not None:
            self.write_row(c1, row)
        return c1

    def destroy_chunk(self, c: Chunk):
        c.alive = False
        c.occs = []
        self.live.discard(c)

    # Invariant 1 -------------------------------------------------------
    def restore(self, chunks):
        """Re-establish Invariant 1 and the id discipline around ``chunks``."""
        K = self.K
        work = [c for c in chunks if c is not None]
        while work:
            c = work.pop()
            if not c.alive:
                continue
            if c.mass > 3 * K:
                c2 = self._split_at(c, self.balance_index(c))
                work.append(c)
                work.append(c2)
                continue
            if c.lone:
                if c.id is not None and c.mass < K:
                    self.demote(c)
                elif c.id is None and c.mass >= K:
                    self.promote(c)
                continue
            if c.id is None:
                self.promote(c)
            if c.mass < K:
                nxt = TwoThree.next_leaf(c.leaf)
                if nxt is not None:
                    merged = self.chunk_merge(c, nxt.item)
                else:
                    merged = self.chunk_merge(TwoThree.prev_leaf(c.leaf).item, c)
                work.append(merged)

    def promote_list(self, root):
        """Give ids to the chunks of a list that has more than one chunk."""
        if root.children is None:
            return
        for leaf in TwoThree.leaves(root):
            if leaf.item.id is None:
                self.promote(leaf.item)

    # queries -----------------------------------------------------------
    def edge_seq(self, c: Chunk):
        for o in c.occs:
            if o.principal:
                yield from self.adj[o.vertex]

    def get_edge_seq(self, c: Chunk, k: int) -> int:
        """The ``k``-th (1-based) edge incident to principal copies in ``c``."""
        if k < 1:
            raise IndexError("edge rank must be at least 1")
        for r, key in enumerate(self.edge_seq(c), 1):
            if r == k:
                return key
        raise IndexError("chunk has fewer than %d incident edges" % k)

    def dump(self, roots=None) -> str:
        if roots is None:
            roots = self.roots()
        lines = []
        for root in roots:
            for c in self.list_chunks(root):
                ident = "-" if c.id is None else str(c.id)
                occs = ",".join(str(o.vertex) + ("*" if o.principal else "") for o in c.occs)
                lines.append("chunk %s mass=%d occs=[%s]" % (ident, c.mass, occs))
        return "\n".join(lines)

    def roots(self):
        seen = {}
        for c in self.live:
            r = self.root_of(c)
            seen[id(r)] = r
        return sorted(seen.values(), key=lambda r: min(o.vertex for o in self.list_occs(r)))

    # audit -------------------------------------------------------------
    def brute_force_C(self) -> np.ndarray:
        C = np.full((self.J, self.J), ABSENT, dtype=np.int64)
        for key, (a, b) in self.ends.items():
            i = self.principal_chunk(a).id
            j = self.principal_chunk(b).id
            if i is None or j is None:
                continue
            if key < C[i, j]:
                C[i, j] = C[j, i] = key
        return C

    def audit(self):
        K = self.K
        ids = set()
        for v in range(self.n):
            ps = [o for o in self.occs[v] if o.principal]
            assert len(ps) == 1 and ps[0] is self.principal[v], "principal copy of %d" % v
            assert len(self.adj[v]) <= 3, "vertex %d has degree %d" % (v, len(self.adj[v]))
            for o in self.occs[v]:
                assert o.chunk.alive and o in o.chunk.occs
        roots = {}
        for c in self.live:
            assert c.alive and c.occs
            assert c.mass == self.recount_mass(c), "mass of %r" % (c,)
            assert check_invariant1(c, K) is Verdict.OK, "Invariant 1 fails for %r" % (c,)
            if c.id is not None:
                assert c.id not in ids and self.chunks[c.id] is c
                ids.add(c.id)
            else:
                assert c.lone, "chunk in a multi-chunk list without an id"
            r = self.root_of(c)
            roots[id(r)] = r
        for i in range(self.J):
            if i not in ids:
                assert self.chunks[i] is None
        assert len(ids) + len(self._free_ids) == self.J
        assert np.array_equal(self.C, self.brute_force_C()), "CAdj differs from recompute"
        for r in roots.values():
            self.lsds.check_tree(r)
        return roots
