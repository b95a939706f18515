"""Replay a trace on one engine, checking against the oracle and
collecting per-operation cost records."""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

from ..graph import DynamicGraph
from ..pram.engine import pram_factory
from ..pram.machine import PramMachine, StepReport
from ..sparsify import SparsificationTree
from .oracle import OracleGraph
from .trace import Check, Delete, Insert, Trace

ENGINES = ("seq", "pram", "sparsify-seq", "sparsify-par", "oracle")


@dataclass
class OpRecord:
    index: int
    kind: str
    wall_time: float
    depth: int | None = None
    work: int | None = None
    max_processors: int | None = None
    linkcut_depth: int | None = None
    violations: int = 0

    def to_record(self) -> str:
        parts = ["op=%d" % self.index, "kind=%s" % self.kind, "wall_time=%.6f" % self.wall_time]
        if self.depth is not None:
            parts += ["depth=%d" % self.depth, "work=%d" % self.work,
                      "max_processors=%d" % self.max_processors,
                      "linkcut_depth=%d" % self.linkcut_depth, "violations=%d" % self.violations]
        return " ".join(parts)


@dataclass
class CheckVerdict:
    op: int
    ok: bool
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)


@dataclass
class BenchReport:
    engine: str
    n: int
    ops: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    n_reduced: int | None = None
    k: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and not self.violations

    @property
    def parallel(self) -> bool:
        return any(r.depth is not None for r in self.ops)

    def _vals(self, name):
        return [getattr(r, name) for r in self.ops if getattr(r, name) is not None]

    def aggregate(self) -> dict:
        out = {"ops": len(self.ops), "wall_time": sum(r.wall_time for r in self.ops),
               "checks": len(self.checks), "failed_checks": sum(not c.ok for c in self.checks),
               "violations": len(self.violations)}
        if self.parallel:
            depth = self._vals("depth")
            out.update(
                median_depth=statistics.median(depth), max_depth=max(depth),
                median_linkcut_depth=statistics.median(self._vals("linkcut_depth")),
                median_work=statistics.median(self._vals("work")), max_work=max(self._vals("work")),
                max_processors=max(self._vals("max_processors")))
        return out


class _Adapter:
    """Uniform insert/delete/msf_ids front for every engine."""

    machine = None

    def __init__(self, obj):
        self.obj = obj

    def insert(self, u, v, w, eid):
        self.obj.insert(u, v, w, eid=eid)

    def delete(self, eid):
        self.obj.delete(eid)

    def msf_ids(self):
        return self.obj.msf_ids()

    def cost(self, snap):
        return None

    def snapshot(self):
        return None


class _PramAdapter(_Adapter):
    def __init__(self, obj, machine):
        super().__init__(obj)
        self.machine = machine

    def snapshot(self):
        return self.machine.snapshot()

    def cost(self, snap):
        return self.machine.report_since(snap)


class _SparseParAdapter(_Adapter):
    def cost(self, snap):
        return self.obj.last_report


def _capacity(trace: Trace) -> int:
    live = best = 0
    for op in trace.ops:
        if isinstance(op, Insert):
            live += 1
            best = max(best, live)
        elif isinstance(op, Delete):
            live -= 1
    return best


def make_engine(engine: str, n: int, k: int | None = None, audit: bool = True,
                edge_capacity: int | None = None):
    """Build the adapter for ``engine``; ``k`` is the chunk-size parameter."""
    if engine == "seq":
        return _Adapter(DynamicGraph(n, k=k, edge_capacity=edge_capacity))
    if engine == "pram":
        m = PramMachine(audit=audit, strict=False)
        g = DynamicGraph(n, engine_factory=pram_factory(audit=audit, machine=m), k=k,
                         edge_capacity=edge_capacity)
        return _PramAdapter(g, m)
    if engine == "sparsify-seq":
        return _Adapter(SparsificationTree(n, parallel=False, audit=audit, k=k))
    if engine == "sparsify-par":
        tree = SparsificationTree(n, parallel=True, audit=audit, k=k)
        for m in tree.machines + [tree.preamble]:
            m.strict = False
        return _SparseParAdapter(tree)
    if engine == "oracle":
        return _Adapter(OracleGraph(n))
    raise ValueError("unknown engine %r (choose from %s)" % (engine, ", ".join(ENGINES)))


def run_trace(trace: Trace, engine: str = "seq", k: int | None = None, audit: bool = True,
              on_op=None, check: bool = True):
    """Replay ``trace``; returns ``(final MSF edge ids, BenchReport)``.

    Every CHECK compares the engine's forest with Kruskal's on the live
    edges.  ``on_op(adapter, index, op)`` runs after each update (for extra
    invariant checks).  Graph capacity is sized to the trace's peak live edge
    count so the engine is never rebuilt mid-trace.
    """
    cap = max(4, _capacity(trace))
    ad = make_engine(engine, trace.n, k=k, audit=audit, edge_capacity=cap)
    oracle = OracleGraph(trace.n) if check and engine != "oracle" else None
    report = BenchReport(engine, trace.n)
    obj = ad.obj
    if isinstance(obj, DynamicGraph):
        report.n_reduced = obj.n_reduced
        report.k = obj.engine.K
    next_id = 0
    index = 0
    for op in trace.ops:
        if isinstance(op, Check):
            if not check:
                continue
            got = ad.msf_ids()
            want = ad.msf_ids() if oracle is None else oracle.msf_ids()
            report.checks.append(CheckVerdict(index, got == want, sorted(want - got),
                                              sorted(got - want)))
            continue
        snap = ad.snapshot()
        t0 = time.perf_counter()
        if isinstance(op, Insert):
            ad.insert(op.u, op.v, op.w, next_id)
            if oracle is not None:
                oracle.insert(op.u, op.v, op.w, eid=next_id)
            next_id += 1
            kind = "i"
        else:
            ad.delete(op.edge_id)
            if oracle is not None:
                oracle.delete(op.edge_id)
            kind = "d"
        wall = time.perf_counter() - t0
        rec = OpRecord(index, kind, wall)
        cost: StepReport | None = ad.cost(snap)
        if cost is not None:
            rec.depth = cost.depth
            rec.work = cost.work
            rec.max_processors = cost.max_processors
            rec.linkcut_depth = cost.linkcut_depth
            rec.violations = len(cost.violations)
            report.violations.extend(cost.violations)
        report.ops.append(rec)
        if on_op is not None:
            on_op(ad, index, op)
        index += 1
    return ad.msf_ids(), report
