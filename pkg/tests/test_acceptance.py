"""Acceptance criteria, each run at its stated tolerance.

Every test prints one ``criterion N PASS|FAIL`` line; the lines are repeated
in the terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import random
import statistics
import sys
import time

import pytest

from _support import invariant1_failures, verdict, watch_mwr
from dynmsf.graph import DynamicGraph
from dynmsf.harness.fit import fit_affine
from dynmsf.harness.oracle import OracleGraph
from dynmsf.harness.runner import ENGINES, run_trace
from dynmsf.harness.trace import gen_connected_trace, gen_trace
from dynmsf.pram.engine import pram_factory
from dynmsf.pram.machine import PramMachine

pytestmark = pytest.mark.slow

RESIDUAL_TOL = 0.15
GROWTH_TOL = 1.15


class Campaign:
    """Criterion 1 traces on every engine, with the per-op hooks that
    criteria 2, 3, 4 and 6 need."""

    def __init__(self, traces=100, n=64, ops=1000, lockstep=20):
        self.failed_checks = {e: 0 for e in ENGINES}
        self.checks = {e: 0 for e in ENGINES}
        self.deltas = {"seq": [], "pram": []}
        self.inv1_failures = 0
        self.inv1_checked = 0
        self.violations = []
        self.max_tour_ops = 0
        self.surgery_ops = 0
        self.rebuilds = 0
        self.lockstep = lockstep
        self.traces = traces
        t0 = time.perf_counter()
        for seed in range(traces):
            trace = gen_trace(n, ops, seed, mix=0.6)
            for engine in ENGINES:
                self._run(trace, engine, seed)
        self.seconds = time.perf_counter() - t0

    def _run(self, trace, engine, seed):
        stream = []
        graphs = []

        def hook(ad, index, op):
            if engine not in ("seq", "pram"):
                return
            g = ad.obj
            if not graphs:
                graphs.append(g)
            self.inv1_failures += invariant1_failures(g.engine.space)
            self.inv1_checked += 1
            if seed < self.lockstep:
                stream.append((tuple(g.last_delta.added), tuple(g.last_delta.removed)))

        _, rep = run_trace(trace, engine, on_op=hook)
        self.checks[engine] += len(rep.checks)
        self.failed_checks[engine] += sum(not c.ok for c in rep.checks)
        self.violations.extend(rep.violations)
        if graphs:
            g = graphs[0]
            self.max_tour_ops = max(self.max_tour_ops, g.engine.surgery.max_tour_ops)
            self.surgery_ops += g.engine.surgery.operations
            self.rebuilds += g.rebuilds
            if seed < self.lockstep:
                self.deltas[engine].append(stream)


@pytest.fixture(scope="module")
def campaign():
    return Campaign()


@pytest.fixture(scope="module")
def audited():
    """Criterion 5: full recompute of CAdj and every aggregate after each op."""
    out = {"ops": 0, "failures": [], "violations": [], "max_tour_ops": 0}

    def hook(ad, index, op):
        out["ops"] += 1
        try:
            ad.obj.engine.audit()
        except AssertionError as exc:
            out["failures"].append((index, str(exc)))

    for seed in range(10):
        trace = gen_trace(32, 1000, 1000 + seed, mix=0.6)
        for engine in ("seq", "pram"):
            holder = []

            def grab(ad, index, op, holder=holder):
                if not holder:
                    holder.append(ad.obj)
                hook(ad, index, op)

            _, rep = run_trace(trace, engine, on_op=grab)
            out["violations"].extend(rep.violations)
            if not rep.ok:
                out["failures"].append(("oracle", seed, engine))
            if holder:
                out["max_tour_ops"] = max(out["max_tour_ops"], holder[0].engine.surgery.max_tour_ops)
    return out


@pytest.fixture(scope="module")
def scaling():
    """Criteria 7 and 8: pram cost over growing graphs."""
    rows = []
    for n in (64, 256, 1024):
        trace = gen_connected_trace(n, 500, seed=7)
        _, rep = run_trace(trace, "pram")
        ops = rep.ops[trace.warmup:]
        rows.append({
            "n": n, "n_reduced": rep.n_reduced, "k": rep.k, "ok": rep.ok,
            "violations": rep.violations,
            "median_depth": statistics.median(r.depth for r in ops),
            "median_depth_no_lc": statistics.median(r.depth - r.linkcut_depth for r in ops),
            "median_lc": statistics.median(r.linkcut_depth for r in ops),
            "peak": max(r.max_processors for r in ops),
            "max_work": max(r.work for r in ops),
        })
    return rows


def forced_deletions(kind, n=48, target=500, seed=0):
    """Delete random tree edges, topping the graph up after each deletion."""
    rng = random.Random(seed)
    machine = PramMachine(strict=False) if kind == "pram" else None
    factory = pram_factory(machine=machine) if kind == "pram" else None
    g = DynamicGraph(n, engine_factory=factory, edge_capacity=8 * n)
    o = OracleGraph(n)
    log = []
    watch_mwr(g.engine, log)

    def add():
        u, v = rng.sample(range(n), 2)
        w = rng.randrange(1000)
        rec = g.insert(u, v, w)
        o.insert(u, v, w, eid=rec.id)

    for _ in range(3 * n):
        add()
    deletions = 0
    mismatched_forest = 0
    while deletions < target:
        tree = sorted(g.msf_ids())
        if not tree:
            add()
            continue
        e = rng.choice(tree)
        g.delete(e)
        o.delete(e)
        deletions += 1
        add()
        mismatched_forest += g.msf_ids() != o.msf_ids()
    assert g.rebuilds == 0
    return {"deletions": deletions, "log": log, "forest_mismatch": mismatched_forest,
            "violations": list(machine.violations) if machine else [],
            "max_tour_ops": g.engine.surgery.max_tour_ops}


@pytest.fixture(scope="module")
def mwr():
    return {kind: forced_deletions(kind) for kind in ("seq", "pram")}


# ---------------------------------------------------------------------------

def test_c01_oracle_equivalence(campaign):
    bad = {e: f for e, f in campaign.failed_checks.items() if f}
    detail = "%d traces x %d engines, %d checks each engine, failures=%s, runtime=%.0fs" % (
        campaign.traces, len(ENGINES), campaign.checks["seq"], bad or 0, campaign.seconds)
    assert verdict(1, not bad and all(campaign.checks.values()), detail)


def test_c02_seq_pram_lockstep(campaign):
    a, b = campaign.deltas["seq"], campaign.deltas["pram"]
    diffs = sum(x != y for x, y in zip(a, b))
    ops = sum(len(x) for x in a)
    ok = len(a) == len(b) == campaign.lockstep and diffs == 0 and ops > 0
    assert verdict(2, ok, "%d traces, %d ops, differing streams=%d" % (len(a), ops, diffs))


def test_c03_erew_soundness(campaign, audited, scaling, mwr):
    count = (len(campaign.violations) + len(audited["violations"])
             + sum(len(r["violations"]) for r in scaling) + len(mwr["pram"]["violations"]))
    assert verdict(3, count == 0, "exclusivity violations across pram traces: %d" % count)


def test_c04_invariant1(campaign):
    ok = campaign.inv1_failures == 0 and campaign.inv1_checked > 0
    assert verdict(4, ok, "%d post-op chunk sweeps, violations=%d" % (
        campaign.inv1_checked, campaign.inv1_failures))


def test_c05_cadj_lsds_recompute(audited):
    ok = not audited["failures"] and audited["ops"] > 0
    detail = "%d audited ops on 10 traces (n=32, seq+pram), failures=%d" % (
        audited["ops"], len(audited["failures"]))
    if audited["failures"]:
        detail += " first=%r" % (audited["failures"][0],)
    assert verdict(5, ok, detail)


def test_c06_surgery_budget(campaign, audited, mwr):
    worst = max(campaign.max_tour_ops, audited["max_tour_ops"],
                mwr["seq"]["max_tour_ops"], mwr["pram"]["max_tour_ops"])
    ok = worst <= 4 and campaign.surgery_ops > 0 and campaign.rebuilds == 0
    assert verdict(6, ok, "max split/join per Euler operation=%d over %d operations" % (
        worst, campaign.surgery_ops))


def test_c07_depth_scaling(scaling):
    ns = [r["n"] for r in scaling]
    xs = [math.log2(n) for n in ns]
    fit = fit_affine(xs, [r["median_depth"] for r in scaling])
    bare = fit_affine(xs, [r["median_depth_no_lc"] for r in scaling])
    ok = fit.max_rel_residual < RESIDUAL_TOL and all(r["ok"] for r in scaling)
    detail = ("median depth %s: a=%.1f b=%.1f max_rel_residual=%.3f; "
              "without link-cut steps a=%.1f residual=%.3f; median link-cut steps %s; K=%s" % (
                  [r["median_depth"] for r in scaling], fit.a, fit.b, fit.max_rel_residual,
                  bare.a, bare.max_rel_residual, [r["median_lc"] for r in scaling],
                  [r["k"] for r in scaling]))
    assert verdict(7, ok, detail)


def test_c08_processor_and_work_bounds(scaling):
    proc_ratio = [r["peak"] / math.sqrt(r["n"]) for r in scaling]
    work_ratio = [r["max_work"] / (math.sqrt(r["n"]) * math.log2(r["n"])) for r in scaling]
    c, c2 = max(proc_ratio), max(work_ratio)
    ok = (proc_ratio[-1] <= GROWTH_TOL * proc_ratio[0]
          and work_ratio[-1] <= GROWTH_TOL * work_ratio[0])
    detail = ("peak processors %s, c=%.2f (ratios %s); max work %s, c'=%.1f (ratios %s)" % (
        [r["peak"] for r in scaling], c, ["%.2f" % x for x in proc_ratio],
        [r["max_work"] for r in scaling], c2, ["%.1f" % x for x in work_ratio]))
    assert verdict(8, ok, detail)


def test_c09_sparsification():
    n = 32
    trace = gen_trace(n, 2000, 9, mix=0.75, simple=True)
    summary = []
    ok = True
    for engine in ("sparsify-seq", "sparsify-par"):
        holder = {"audits": 0, "fail": None, "tree": None}

        def hook(ad, index, op, holder=holder):
            holder["tree"] = ad.obj
            try:
                ad.obj.audit()
                holder["audits"] += 1
            except AssertionError as exc:
                holder["fail"] = holder["fail"] or (index, str(exc))

        _, rep = run_trace(trace, engine, on_op=hook)
        tree = holder["tree"]
        tree.audit(deep=True)
        per_level = tree.counters.max_per_level
        good = rep.ok and holder["fail"] is None and per_level <= 3
        ok &= good
        summary.append("%s checks=%d failed=%d max_updates_per_level=%d closure_audits=%d%s" % (
            engine, len(rep.checks), sum(not c.ok for c in rep.checks), per_level,
            holder["audits"], "" if holder["fail"] is None else " audit_fail=%r" % (holder["fail"],)))
    assert verdict(9, ok, "; ".join(summary))


def test_c10_mwr_exactness(mwr):
    parts = []
    ok = True
    for kind in ("seq", "pram"):
        r = mwr[kind]
        wrong = sum(got != want for got, want in r["log"])
        good = r["deletions"] == 500 and len(r["log"]) >= 500 and wrong == 0 \
            and r["forest_mismatch"] == 0
        ok &= good
        parts.append("%s: %d tree deletions, %d searches, mismatches=%d" % (
            kind, r["deletions"], len(r["log"]), wrong))
    assert verdict(10, ok, "; ".join(parts))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
