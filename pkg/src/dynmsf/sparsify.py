"""Sparsification tree: dynamic MSF on dense graphs through sparse local graphs.

Vertices ``0..N-1`` (``n`` padded to a power of two) are halved recursively.
Level 0 holds singleton intervals and level ``H = log2 N`` the whole vertex
set.  A node ``(i, a, b)`` with ``a <= b`` stands for all edges between
interval ``a`` and interval ``b`` of level ``i``; its local graph is the union
of its children's forest edges (a leaf holds the real edges of its vertex
pair).  The root's forest is the forest of the whole graph.

Every level's work is computed from tests on the state before the update, so
the per-level mutations are independent and can run concurrently:

* insertion: level ``i`` inserts ``e`` when ``e`` enters the forest of level
  ``i-1`` and deletes the edge that ``e`` evicts there;
* deletion: every level holding ``e`` deletes it and records its own
  replacement in ``REdges[i]``; level ``i`` then inserts the lightest of
  ``REdges[0..i-1]`` (replacements found strictly deeper).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

from .graph import DynamicGraph, MsfDelta
from .pram.engine import pram_factory
from .pram.machine import PramMachine, StepReport


def _ceil_pow2(n):
    N, H = 1, 0
    while N < n:
        N *= 2
        H += 1
    return N, H


@dataclass
class SparseNode:
    level: int
    a: int
    b: int
    graph: DynamicGraph

    def local(self, x: int) -> int:
        """Index of the copy of graph vertex ``x`` in this node's local graph."""
        i = self.level
        if x >> i == self.a:
            return x - (self.a << i)
        return (1 << i) + x - (self.b << i)

    def global_vertex(self, lx: int) -> int:
        i = self.level
        if lx < (1 << i):
            return (self.a << i) + lx
        return (self.b << i) + lx - (1 << i)

    def interval(self, which):
        lo = which << self.level
        return lo, lo + (1 << self.level) - 1


@dataclass
class LevelCounters:
    updates: list = field(default_factory=list)
    max_per_level: int = 0


class SparsificationTree:
    """Dynamic MSF over ``n`` vertices through a sparsification tree.

    With ``parallel=True`` every level's engines are PRAM engines on a
    machine of their own, and each update also yields a :class:`StepReport`
    (``last_report``) combining the levels as concurrent work.
    """

    def __init__(self, n: int, parallel: bool = False, audit: bool = True,
                 k: int | None = None, weight_scale: int = 1):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        self.N, self.H = _ceil_pow2(n)
        self.parallel = parallel
        self.audit_mode = audit
        self.k = k
        self.weight_scale = weight_scale
        self.nodes = {}
        self.edges = {}
        self.top = {}
        self._next_id = 0
        self.counters = LevelCounters()
        self.last_delta = MsfDelta()
        self.last_report = StepReport()
        self.last_redges = []
        self.reports = []
        if parallel:
            self.machines = [PramMachine(audit=audit) for _ in range(self.H + 1)]
            self.preamble = PramMachine(audit=audit)

    # structure ---------------------------------------------------------
    def key(self, i: int, u: int, v: int):
        a, b = u >> i, v >> i
        return (i, a, b) if a <= b else (i, b, a)

    @staticmethod
    def children(key):
        """Conceptual children of node ``key`` (3 when both intervals coincide)."""
        i, a, b = key
        if i == 0:
            return []
        out = []
        for x in (2 * a, 2 * a + 1):
            for y in (2 * b, 2 * b + 1):
                k = (i - 1, min(x, y), max(x, y))
                if k not in out:
                    out.append(k)
        return out

    @staticmethod
    def parent(key):
        i, a, b = key
        return (i + 1, a >> 1, b >> 1)

    def _factory(self, level):
        if not self.parallel:
            return None
        return pram_factory(audit=self.audit_mode, machine=self.machines[level])

    def _node(self, key, create=False):
        node = self.nodes.get(key)
        if node is None and create:
            i, a, b = key
            size = (1 << i) if a == b else (2 << i)
            g = DynamicGraph(size, engine_factory=self._factory(i), k=self.k,
                             weight_scale=self.weight_scale)
            node = self.nodes[key] = SparseNode(i, a, b, g)
        return node

    def path(self, u, v, create=False):
        return [self._node(self.key(i, u, v), create) for i in range(self.H + 1)]

    def vcopy(self, u, v):
        """Per level, the local copies ``(u_ab, v_ba)`` along the path of ``(u, v)``."""
        return [(nd.local(u), nd.local(v)) for nd in self.path(u, v, create=False) if nd is not None]

    def level_engine(self, i: int):
        """Read-only view of the local graphs materialized at level ``i``."""
        return MappingProxyType({k: nd.graph for k, nd in self.nodes.items() if k[0] == i})

    # updates -----------------------------------------------------------
    def _begin(self):
        self.counters.updates = [0] * (self.H + 1)
        if self.parallel:
            self._phases = []
            self._pre = self.preamble.snapshot()

    def _phase(self):
        """Start a phase in which every level runs concurrently."""
        if self.parallel:
            self._phases.append([m.snapshot() for m in self.machines])

    def _phase_end(self):
        if self.parallel:
            snaps = self._phases.pop()
            self._phases.append([m.report_since(s) for m, s in zip(self.machines, snaps)])

    def _finish(self, root_net, net_levels):
        c = self.counters
        c.max_per_level = max(c.max_per_level, max(c.updates, default=0))
        added = sorted(root_net[0])
        removed = sorted(root_net[1])
        self.last_delta = MsfDelta(added, removed)
        if self.parallel:
            pre = self.preamble.report_since(self._pre)
            rep = StepReport(pre.depth, pre.work, pre.max_processors, list(pre.violations), 0)
            for reports in self._phases:
                rep.depth += max(r.depth for r in reports)
                rep.work += sum(r.work for r in reports)
                rep.max_processors = max(rep.max_processors, sum(r.max_processors for r in reports))
                rep.linkcut_depth += max(r.linkcut_depth for r in reports)
                for r in reports:
                    rep.violations.extend(r.violations)
            self.last_report = rep
            self.reports.append(rep)
        return self.last_delta

    def _serial(self, steps):
        if self.parallel:
            self.preamble.charge(steps, 1)

    def _apply(self, node, op, *args, net):
        self.counters.updates[node.level] += 1
        g = node.graph
        if op == "ins":
            x, u, v, w = args
            g.insert(node.local(u), node.local(v), w, eid=x)
            self.top[x] = max(self.top.get(x, -1), node.level)
        else:
            (x,) = args
            g.delete(x)
        d = g.last_delta
        for y in d.removed:
            if y in net[0]:
                net[0].discard(y)
            else:
                net[1].add(y)
        for y in d.added:
            if y in net[1]:
                net[1].discard(y)
            else:
                net[0].add(y)
        return d

    def sp_insert(self, u: int, v: int, w, eid: int | None = None) -> MsfDelta:
        for x in (u, v):
            if not 0 <= x < self.n:
                raise ValueError("vertex %d out of range" % x)
        if u == v:
            raise ValueError("loop rejected: endpoints must differ")
        if eid is None:
            eid = self._next_id
        elif eid in self.edges:
            raise ValueError("edge id %d already live" % eid)
        self._next_id = max(self._next_id, eid + 1)
        self._begin()
        # preamble: two descents (materialize the path, collect vertex copies)
        path = self.path(u, v, create=True)
        self._serial(2 * (self.H + 1))
        self.edges[eid] = (u, v, w)
        # phase 1: every level tests whether e would enter its forest
        self._phase()
        tests = [nd.graph.msf_test(nd.local(u), nd.local(v), w, eid) for nd in path]
        self._phase_end()
        # phase 2: level i applies what the test at level i-1 decided
        self._phase()
        nets = [(set(), set()) for _ in path]
        reached = 0
        for i, nd in enumerate(path):
            if i == 0:
                self._apply(nd, "ins", eid, u, v, w, net=nets[0])
                continue
            enters, evicted = tests[i - 1]
            if not enters:
                break
            self._apply(nd, "ins", eid, u, v, w, net=nets[i])
            if evicted is not None:
                self._apply(nd, "del", evicted, net=nets[i])
                self.top[evicted] = min(self.top[evicted], i - 1)
            reached = i
        self._phase_end()
        if self.audit_mode:
            self._check_insert(nets[:reached + 1], tests, eid)
        self._serial(self.H + 1)
        return self._finish(nets[self.H], nets)

    @staticmethod
    def _check_insert(nets, tests, eid):
        """Each touched level must change by exactly the swap its test predicted."""
        for i, (added, removed) in enumerate(nets):
            enters, evicted = tests[i]
            assert added == ({eid} if enters else set()), "level %d added %r" % (i, added)
            want = {evicted} if enters and evicted is not None else set()
            assert removed == want, "level %d removed %r" % (i, removed)

    def _check_delete(self, nets, redges, eid, top):
        """Level ``i`` gains the lightest of ``REdges[0..i]`` exactly when it
        loses ``e`` from its forest."""
        best = None
        for i in range(top + 1):
            r = redges[i]
            if r is not None and (best is None or self._rank(r) < self._rank(best)):
                best = r
            added, removed = nets[i]
            assert removed <= {eid}, "level %d removed %r" % (i, removed)
            if removed:
                assert added == ({best} if best is not None else set()), \
                    "level %d added %r, expected %r" % (i, added, best)
            else:
                assert not added, "level %d added %r" % (i, added)

    def sp_delete(self, eid: int) -> MsfDelta:
        if eid not in self.edges:
            raise KeyError("no such edge")
        u, v, w = self.edges.pop(eid)
        top = self.top.pop(eid)
        self._begin()
        # preamble: walk the edge-copy links up to the highest copy
        path = self.path(u, v)[:top + 1]
        self._serial(top + 1)
        nets = [(set(), set()) for _ in range(self.H + 1)]
        redges = [None] * (self.H + 1)
        self._phase()
        for i, nd in enumerate(path):
            d = self._apply(nd, "del", eid, net=nets[i])
            assert len(d.added) <= 1
            if d.added:
                redges[i] = d.added[0]
        self._phase_end()
        if top < self.H:
            assert redges[top] is None, "edge left the forest below its highest copy"
        # REdges scan on one processor, then every level inserts concurrently
        self._serial(top + 1)
        self._phase()
        best = None
        for i in range(1, top + 1):
            r = redges[i - 1]
            if r is not None and (best is None or self._rank(r) < self._rank(best)):
                best = r
            if best is not None:
                ru, rv, rw = self.edges[best]
                self._apply(path[i], "ins", best, ru, rv, rw, net=nets[i])
        self._phase_end()
        if self.audit_mode:
            self._check_delete(nets, redges, eid, top)
        self.last_redges = redges
        for i, nd in enumerate(path):
            if not nd.graph.records:
                del self.nodes[(nd.level, nd.a, nd.b)]
        return self._finish(nets[self.H], nets)

    def _rank(self, x):
        u, v, w = self.edges[x]
        return (w, x)

    insert = sp_insert
    delete = sp_delete

    def sp_update_parallel(self, op):
        """Run ``("i", u, v, w)`` / ``("d", eid)`` and return ``(MsfDelta, StepReport)``."""
        if not self.parallel:
            raise RuntimeError("structure was built without parallel engines")
        if op[0] == "i":
            delta = self.sp_insert(*op[1:])
        elif op[0] == "d":
            delta = self.sp_delete(op[1])
        else:
            raise ValueError("unknown operation %r" % (op[0],))
        return delta, self.last_report

    # queries -----------------------------------------------------------
    def root(self):
        return self.nodes.get((self.H, 0, 0))

    def sp_msf(self):
        root = self.root()
        return set() if root is None else root.graph.msf_edges()

    def msf_ids(self):
        root = self.root()
        return set() if root is None else root.graph.msf_ids()

    def msf_weight(self):
        return sum(self.edges[i][2] for i in self.msf_ids())

    def dump(self) -> str:
        lines = []
        for key in sorted(self.nodes, key=lambda k: (-k[0], k[1], k[2])):
            nd = self.nodes[key]
            alo, ahi = nd.interval(nd.a)
            blo, bhi = nd.interval(nd.b)
            ids = sorted(nd.graph.msf_ids())
            lines.append("node level=%d alpha=%d..%d beta=%d..%d edges=%d msf=%s" % (
                nd.level, alo, ahi, blo, bhi, len(nd.graph.records),
                ",".join(map(str, ids)) if ids else "-"))
        return "\n".join(lines)

    # audit -------------------------------------------------------------
    def audit(self, deep: bool = False):
        """Local-graph closure, pruning, copy links and edge bookkeeping."""
        for key, nd in self.nodes.items():
            assert nd.graph.records, "empty node %r kept" % (key,)
            i = key[0]
            have = set(nd.graph.records)
            if i == 0:
                want = {e for e, (u, v, _) in self.edges.items() if self.key(0, u, v) == key}
            else:
                want = set()
                for ck in self.children(key):
                    child = self.nodes.get(ck)
                    if child is not None:
                        want |= child.graph.msf_ids()
            assert have == want, "local graph of %r is not the union of child forests" % (key,)
            for e in have:
                u, v, _ = self.edges[e]
                assert self.key(i, u, v) == key
                assert self.top[e] >= i
            if i < self.H:
                parent = self.nodes.get(self.parent(key))
                for e in nd.graph.msf_ids():
                    assert parent is not None and e in parent.graph.records, "dangling edge copy"
            if deep:
                nd.graph.audit(deep=True)
        for e, t in self.top.items():
            u, v, _ = self.edges[e]
            assert e in self.nodes[self.key(t, u, v)].graph.records
            if t < self.H:
                up = self.nodes.get(self.key(t + 1, u, v))
                assert up is None or e not in up.graph.records
        return True
