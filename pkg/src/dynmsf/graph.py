"""User-facing dynamic graph with a degree-3 reduction.

Each original vertex ``v`` owns a chain of gadget vertices ``chain[v]``; the
first one is ``v`` itself.  Consecutive gadgets are joined by phantom edges
that rank below every real weight, so they are always forest edges.  A gadget
hosts at most one real edge endpoint, giving every reduced vertex degree at
most 3.  Chains grow and shrink at the tail.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .engine import KeyDelta, MsfEngine
from .keys import MAX_EDGE_ID, TotalWeight, check_weight, is_phantom, key_edge_id, phantom_key, real_key


@dataclass(eq=False)
class EdgeRecord:
    id: int
    endpoints: tuple
    weight: TotalWeight
    is_tree: bool = False
    gadget_endpoints: tuple = (None, None)

    @property
    def key(self) -> int:
        return self.weight.key()


@dataclass
class MsfDelta:
    added: list = field(default_factory=list)
    removed: list = field(default_factory=list)

    def __len__(self):
        return len(self.added) + len(self.removed)


class NetDelta:
    """Accumulates engine deltas, cancelling edges that leave and come back."""

    def __init__(self):
        self.added = set()
        self.removed = set()

    def apply(self, d: KeyDelta):
        for k in d.removed:
            if k in self.added:
                self.added.discard(k)
            else:
                self.removed.add(k)
        for k in d.added:
            if k in self.removed:
                self.removed.discard(k)
            else:
                self.added.add(k)


def _seq_factory(n_reduced, k):
    return MsfEngine(n_reduced, K=k)


class DynamicGraph:
    """Dynamic graph on vertices ``0..n-1`` maintaining its minimum spanning forest.

    ``engine_factory(n_reduced, k)`` builds the engine over the reduced graph;
    it is called again with a larger size when the gadget pool runs out.
    ``weight_scale`` admits fixed-precision rational weights: ``w * scale``
    must be an integer.
    """

    def __init__(self, n: int, engine_factory=None, k: int | None = None,
                 edge_capacity: int | None = None, weight_scale: int = 1):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        self.k = k
        self.weight_scale = weight_scale
        self.factory = engine_factory or _seq_factory
        self.edge_capacity = max(4, edge_capacity if edge_capacity is not None else n)
        self.records = {}
        self._next_id = 0
        self.chain = [[v] for v in range(n)]
        self.host = {}          # gadget -> edge id hosted there
        self.owner = {}         # extra gadget -> original vertex
        self.last_delta = MsfDelta()
        self.rebuilds = 0
        self._alloc(n + 2 * self.edge_capacity)

    # construction ------------------------------------------------------
    def _alloc(self, n_reduced):
        self.n_reduced = n_reduced
        self.engine = self.factory(n_reduced, self.k)
        used = set(self.owner)
        self._free = [g for g in range(n_reduced - 1, self.n - 1, -1) if g not in used]

    def _grow(self):
        """Rebuild the engine with twice the gadget pool; the forest is unchanged."""
        before = self.engine.tree_keys()
        self.edge_capacity *= 2
        self._alloc(self.n + 2 * self.edge_capacity)
        self.rebuilds += 1
        for v in range(self.n):
            ch = self.chain[v]
            for prev, g in zip(ch, ch[1:]):
                self.engine.insert_edge(phantom_key(g), prev, g)
        for rec in self.records.values():
            self.engine.insert_edge(rec.key, *rec.gadget_endpoints)
        assert self.engine.tree_keys() == before

    def _new_gadget(self, v):
        if not self._free:
            self._grow()
        g = self._free.pop()
        if g > MAX_EDGE_ID:
            raise ValueError("reduced graph too large for phantom ids")
        self.owner[g] = v
        return g

    # weights -----------------------------------------------------------
    def _scaled(self, w) -> int:
        if self.weight_scale != 1 or isinstance(w, Rational) and not isinstance(w, int):
            x = Fraction(w) * self.weight_scale
            if x.denominator != 1:
                raise ValueError("weight %r is not a multiple of 1/%d" % (w, self.weight_scale))
            w = x.numerator
        return check_weight(w)

    # gadget maintenance ------------------------------------------------
    def _attach(self, v, eid, net):
        ch = self.chain[v]
        if len(ch) == 1 and ch[0] not in self.host:
            g = ch[0]
        else:
            g = self._new_gadget(v)
            net.apply(self.engine.insert_edge(phantom_key(g), ch[-1], g))
            ch.append(g)
        self.host[g] = eid
        return g

    def _detach(self, v, g, net):
        """Free gadget ``g`` of ``v``; the tail's edge moves into ``g`` if needed."""
        ch = self.chain[v]
        del self.host[g]
        tail = ch[-1]
        if g != tail:
            fid = self.host.pop(tail)
            f = self.records[fid]
            net.apply(self.engine.delete_edge(f.key))
            a, b = f.gadget_endpoints
            f.gadget_endpoints = (g if a == tail else a, g if b == tail else b)
            self.host[g] = fid
            net.apply(self.engine.insert_edge(f.key, *f.gadget_endpoints))
        if len(ch) > 1:
            ch.pop()
            net.apply(self.engine.delete_edge(phantom_key(tail)))
            del self.owner[tail]
            self._free.append(tail)

    def _finish(self, net: NetDelta) -> MsfDelta:
        added = sorted(key_edge_id(k) for k in net.added if not is_phantom(k))
        removed = sorted(key_edge_id(k) for k in net.removed if not is_phantom(k))
        for i in removed:
            if i in self.records:
                self.records[i].is_tree = False
        for i in added:
            self.records[i].is_tree = True
        self.last_delta = MsfDelta(added, removed)
        return self.last_delta

    # public operations -------------------------------------------------
    def graph_insert(self, u: int, v: int, w, eid: int | None = None) -> EdgeRecord:
        for x in (u, v):
            if not 0 <= x < self.n:
                raise ValueError("vertex %d out of range" % x)
        if u == v:
            raise ValueError("loop rejected: endpoints must differ")
        ws = self._scaled(w)
        if eid is None:
            eid = self._next_id
        elif eid in self.records:
            raise ValueError("edge id %d already live" % eid)
        self._next_id = max(self._next_id, eid + 1)
        rec = EdgeRecord(eid, (u, v), TotalWeight(ws, eid))
        key = real_key(ws, eid)
        net = NetDelta()
        gu = self._attach(u, eid, net)
        gv = self._attach(v, eid, net)
        rec.gadget_endpoints = (gu, gv)
        self.records[eid] = rec
        net.apply(self.engine.insert_edge(key, gu, gv))
        self._finish(net)
        return rec

    def graph_delete(self, eid: int) -> MsfDelta:
        rec = self.records.get(eid)
        if rec is None:
            raise KeyError("no such edge")
        net = NetDelta()
        net.apply(self.engine.delete_edge(rec.key))
        del self.records[eid]
        for x, g in zip(rec.endpoints, rec.gadget_endpoints):
            # the first detach may have moved the edge hosted at the other end
            self._detach(x, g, net)
        rec.is_tree = False
        return self._finish(net)

    def msf_test(self, u: int, v: int, w, eid: int):
        """Would edge ``eid = (u, v, w)`` enter the forest if inserted now?

        Returns ``(enters, evicted_id)`` without touching the graph.
        """
        key = real_key(self._scaled(w), eid)
        enters, heavy = self.engine.path_test(self.chain[u][0], self.chain[v][0], key)
        return enters, (None if heavy is None else key_edge_id(heavy))

    insert = graph_insert
    delete = graph_delete

    def msf_edges(self):
        return {r for r in self.records.values() if r.is_tree}

    def msf_ids(self):
        return {r.id for r in self.records.values() if r.is_tree}

    def msf_weight(self):
        return sum(r.weight.weight for r in self.records.values() if r.is_tree)

    def edges(self):
        return list(self.records.values())

    def degree(self, v: int) -> int:
        return sum(1 for g in self.chain[v] if g in self.host)

    # audit -------------------------------------------------------------
    def reduced_degrees(self):
        deg = [0] * self.n_reduced
        for v in range(self.n):
            ch = self.chain[v]
            for a, b in zip(ch, ch[1:]):
                deg[a] += 1
                deg[b] += 1
        for rec in self.records.values():
            a, b = rec.gadget_endpoints
            deg[a] += 1
            deg[b] += 1
        return deg

    def audit(self, deep: bool = True):
        assert max(self.reduced_degrees(), default=0) <= 3
        for v in range(self.n):
            assert len(self.chain[v]) == max(1, self.degree(v))
            assert all(g in self.host for g in self.chain[v][1:])
        tree = self.engine.tree_keys()
        for v in range(self.n):
            for g in self.chain[v][1:]:
                assert phantom_key(g) in tree, "phantom edge left the forest"
        real = {key_edge_id(k) for k in tree if not is_phantom(k)}
        assert real == self.msf_ids()
        for rec in self.records.values():
            a, b = rec.gadget_endpoints
            assert self.host.get(a) == rec.id and self.host.get(b) == rec.id
        if deep:
            self.engine.audit()
        return True
