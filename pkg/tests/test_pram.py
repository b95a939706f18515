import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _support import chunk_list, random_bounded_ops, watch_mwr
from dynmsf import _backend, _lct_py
from dynmsf.chunks import ChunkSpace
from dynmsf.engine import MsfEngine
from dynmsf.harness.fit import fit_affine
from dynmsf.keys import ABSENT, real_key
from dynmsf.pram.engine import PramChunkSpace, PramEngine
from dynmsf.pram.machine import PramMachine
from dynmsf.pram.procedures import get_edge


def pram_space(machine, J=None):
    return lambda n, K: PramChunkSpace(n, K, J if J else max(n + 4, 4), machine)


def assignment(sp, c):
    return get_edge(sp.m, c.btree, sp.adj, sp.ends, 3 * sp.K)


def test_get_edge_on_a_chunk_with_counts_3_2_3():
    m = PramMachine()
    groups = [[0, 1, 2, 3, 4, 5, 6], [7, 8, 9], [10, 11, 12]]
    sp, (c, x, y) = chunk_list(groups, K=4, make_space=pram_space(m))
    nid = 0
    for v, targets in [(2, [7, 8, 9]), (5, [10, 11]), (6, [12, 7, 8])]:
        for t in targets:
            sp.add_edge(real_key(nid, nid), v, t)
            nid += 1
    counts = [sp._edge_count(o) for o in c.occs]
    assert [k for k in counts if k] == [3, 2, 3]
    asg = assignment(sp, c)
    assert asg.procs.tolist() == list(range(1, 9))
    assert asg.near.tolist() == [2, 2, 2, 5, 5, 6, 6, 6]
    assert asg.key.tolist() == [sp.get_edge_seq(c, k) for k in range(1, 9)]
    assert m.violations == []


def test_get_edge_on_an_edge_free_chunk():
    m = PramMachine()
    sp, (c, _) = chunk_list([[0, 1, 2], [3]], K=4, make_space=pram_space(m))
    assert len(assignment(sp, c)) == 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_get_edge_matches_sequential_order(seed):
    e = PramEngine(30, K=4)
    for op in random_bounded_ops(30, 80, seed, p_delete=0.2):
        if op[0] == "i":
            e.insert_edge(op[1], op[2], op[3])
        else:
            e.delete_edge(op[1])
    sp = e.space
    for c in sp.live:
        asg = assignment(sp, c)
        assert asg.key.tolist() == list(sp.edge_seq(c))
    assert e.machine.violations == []


def _tournament_oracle(n_trees, trees, vals):
    best = np.full(n_trees, ABSENT, dtype=np.int64)
    np.minimum.at(best, trees, vals)
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.sampled_from([2, 4, 8, 32]))
def test_tournament_twins_agree(seed, n_trees, width):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, n_trees * width + 1))
    slots = rng.choice(n_trees * width, size=k, replace=False)
    trees, leaves = slots // width, slots % width
    procs = rng.permutation(k).astype(np.int64) + 1
    vals = rng.integers(0, 50, size=k).astype(np.int64)
    vals[rng.random(k) < 0.1] = ABSENT
    outs = []
    for cls in (_lct_py.TournamentCore, _backend.TournamentCore):
        outs.append(cls(n_trees, width).run(procs, trees, leaves, vals, ABSENT, True))
    roots, winners = outs[0][0], outs[0][1]
    assert np.array_equal(roots, _tournament_oracle(n_trees, trees, vals))
    for t in range(n_trees):
        if roots[t] != ABSENT:
            w = winners[t]
            sel = (trees == t) & (vals == roots[t])
            first = procs[sel][np.argmin(leaves[sel])]
            assert w == first
    for other in outs[1:]:
        for a, b in zip(outs[0], other):
            if isinstance(a, np.ndarray):
                assert np.array_equal(a, b)
            else:
                assert a == b
    assert outs[0][5] is None


def test_balance_index_descent_equals_scan():
    rng = random.Random(8)
    e = PramEngine(60, K=6)
    checked = 0
    for op in random_bounded_ops(60, 250, 4, p_delete=0.25):
        if op[0] == "i":
            e.insert_edge(op[1], op[2], op[3])
        else:
            e.delete_edge(op[1])
        for c in rng.sample(sorted(e.space.live, key=id), 3):
            if len(c.occs) >= 2:
                assert e.space.balance_index(c) == ChunkSpace.balance_index(e.space, c)
                checked += 1
    assert checked > 100


def test_merged_row_depth_is_constant_in_J():
    depths = []
    for J in (16, 64, 256):
        m = PramMachine()
        sp = PramChunkSpace(40, 4, J, m)
        for v in range(1, 5):
            sp.lsds.join(sp.lsds.root(sp.principal_chunk(0).leaf), sp.principal_chunk(v).leaf)
        sp.promote_list(sp.lsds.root(sp.principal_chunk(0).leaf))
        d0 = m.depth
        sp.merged_row(sp.principal_chunk(0), sp.principal_chunk(1))
        depths.append(m.depth - d0)
    assert depths == [2, 2, 2]


def split_depth(K):
    m = PramMachine()
    mid = list(range(1, K + 1))
    sp, (_, c, _) = chunk_list([[0], mid, [K + 1]], n=K + 2, K=K,
                               make_space=pram_space(m))
    nid = 0
    for v in mid[:-1]:
        sp.add_edge(real_key(nid % 97, nid), v, v + 1)
        nid += 1
    sp.add_edge(real_key(5, nid), 0, mid[0])
    sp.add_edge(real_key(6, nid + 1), K + 1, mid[-1])
    d0 = m.depth
    c2 = sp.chunk_split(c, c.occs[K // 2])
    assert m.violations == []
    assert np.array_equal(sp.C, sp.brute_force_C())
    assert c2.id is not None
    return m.depth - d0


def test_chunk_split_depth_is_logarithmic_in_K():
    Ks = [16, 64, 256]
    depths = [split_depth(K) for K in Ks]
    fit = fit_affine([math.log2(K) for K in Ks], depths)
    assert fit.max_rel_residual < 0.15
    assert depths[-1] < 4 * depths[0]


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 40), st.sampled_from([4, 6, None]))
def test_lockstep_with_sequential_engine(seed, n, K):
    a = MsfEngine(n, K=K if K else None)
    b = PramEngine(n, K=K if K else None)
    logs = ([], [])
    watch_mwr(a, logs[0])
    watch_mwr(b, logs[1])
    for step, op in enumerate(random_bounded_ops(n, 150, seed)):
        if op[0] == "i":
            da, db = a.insert_edge(*op[1:]), b.insert_edge(*op[1:])
        else:
            da, db = a.delete_edge(op[1]), b.delete_edge(op[1])
        assert (da.added, da.removed) == (db.added, db.removed)
        if step % 10 == 0:
            b.audit()
    b.audit()
    for log in logs:
        assert all(got == want for got, want in log)
    assert b.machine.violations == []
    assert 0 < len(b.reports) <= 150
    assert b.surgery.max_tour_ops <= 4


def test_pram_engine_uses_sqrt_K_by_default():
    e = PramEngine(100)
    assert e.K == 10
    assert (e.machine.depth, e.machine.work) == (0, 0)


def test_strict_machine_raises_on_a_planted_conflict():
    m = PramMachine()
    with pytest.raises(Exception):
        m.step([1, 2], [5, 5])


def test_tournament_twins_report_the_same_conflict():
    procs = np.array([1, 2, 3], dtype=np.int64)
    trees = np.array([0, 0, 1], dtype=np.int64)
    leaves = np.array([2, 2, 0], dtype=np.int64)
    vals = np.array([5, 6, 7], dtype=np.int64)
    found = [cls(2, 4).run(procs, trees, leaves, vals, ABSENT, True)[5]
             for cls in (_lct_py.TournamentCore, _backend.TournamentCore)]
    assert found[0] is not None and found[0] == found[1]
    assert list(found[0][2]) == [1, 2]
