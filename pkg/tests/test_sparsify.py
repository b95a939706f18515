import random

import pytest
from hypothesis import given, settings, strategies as st

from dynmsf.harness.oracle import OracleGraph, kruskal
from dynmsf.sparsify import SparsificationTree


def local_forests_are_minimal(s):
    for nd in s.nodes.values():
        g = nd.graph
        edges = [(r.id, nd.local(s.edges[r.id][0]), nd.local(s.edges[r.id][1]), r.weight.weight)
                 for r in g.records.values()]
        assert g.msf_ids() == kruskal(g.n, edges)


def test_single_vertex():
    s = SparsificationTree(1)
    assert s.H == 0 and s.children((0, 0, 0)) == []
    assert s.sp_msf() == set() and s.dump() == ""


def test_four_vertices_root_has_three_children():
    s = SparsificationTree(4)
    assert s.H == 2
    assert s.children((2, 0, 0)) == [(1, 0, 0), (1, 0, 1), (1, 1, 1)]
    assert len(s.children((1, 0, 1))) == 4
    assert all(s.parent(k) == (2, 0, 0) for k in s.children((2, 0, 0)))


def test_local_indices_round_trip():
    s = SparsificationTree(16)
    s.insert(3, 12, 1)
    for nd in s.nodes.values():
        size = nd.graph.n
        for x in list(range(*nd.interval(nd.a))) + list(range(*nd.interval(nd.b))):
            lx = nd.local(x)
            assert 0 <= lx < size and nd.global_vertex(lx) == x


def test_first_edge_is_a_tree_edge_everywhere():
    s = SparsificationTree(8)
    d = s.insert(1, 6, 10)
    assert d.added == [0]
    assert len(s.nodes) == s.H + 1
    assert all(nd.graph.msf_ids() == {0} for nd in s.nodes.values())
    assert s.top[0] == s.H


def test_delete_sole_edge_empties_structure():
    s = SparsificationTree(8)
    s.insert(1, 6, 10)
    d = s.delete(0)
    assert d.removed == [0] and s.nodes == {} and s.top == {}


def test_non_tree_deletion_has_no_replacements():
    s = SparsificationTree(8)
    s.insert(0, 1, 1)
    s.insert(1, 2, 1)
    s.insert(0, 2, 9)
    d = s.delete(2)
    assert len(d) == 0 and s.last_redges == [None] * (s.H + 1)
    s.audit(deep=True)


def test_redundant_heavy_edge_stops_climbing():
    s = SparsificationTree(8)
    s.insert(0, 1, 1)
    s.insert(0, 1, 50)
    assert s.top[1] == 0
    assert s.nodes[(1, 0, 0)].graph.records.keys() == {0}
    local_forests_are_minimal(s)


def test_dump_format():
    s = SparsificationTree(4)
    s.insert(0, 3, 5)
    s.insert(0, 1, 2)
    assert s.dump().splitlines() == [
        "node level=2 alpha=0..3 beta=0..3 edges=2 msf=0,1",
        "node level=1 alpha=0..1 beta=0..1 edges=1 msf=1",
        "node level=1 alpha=0..1 beta=2..3 edges=1 msf=0",
        "node level=0 alpha=0..0 beta=1..1 edges=1 msf=1",
        "node level=0 alpha=0..0 beta=3..3 edges=1 msf=0",
    ]


def test_node_count_bound_and_level_census():
    rng = random.Random(5)
    s = SparsificationTree(32)
    for k in range(1, 301):
        u, v = rng.sample(range(32), 2)
        s.insert(u, v, rng.randrange(100))
        assert len(s.nodes) <= k * s.H + k
    per_level = [sum(len(g.records) for g in s.level_engine(i).values()) for i in range(s.H + 1)]
    assert per_level[0] == 300
    assert all(a >= b for a, b in zip(per_level, per_level[1:]))
    assert len(s.msf_ids()) <= 31 and per_level[-1] <= 3 * 31
    local_forests_are_minimal(s)
    s.audit(deep=True)


def test_level_engine_is_read_only():
    s = SparsificationTree(4)
    s.insert(0, 1, 1)
    view = s.level_engine(0)
    with pytest.raises(TypeError):
        view[(0, 0, 0)] = None


def test_many_inserts_match_kruskal():
    rng = random.Random(1)
    s = SparsificationTree(64)
    o = OracleGraph(64)
    for i in range(1000):
        u, v = rng.sample(range(64), 2)
        w = rng.randrange(1000)
        s.insert(u, v, w)
        o.insert(u, v, w, eid=i)
        assert s.msf_ids() == o.msf_ids()
    assert s.counters.max_per_level <= 3


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 20))
def test_mixed_trace_against_oracle(seed, n):
    rng = random.Random(seed)
    s = SparsificationTree(n)
    o = OracleGraph(n)
    live = []
    for step in range(150):
        if live and rng.random() < 0.4:
            e = live.pop(rng.randrange(len(live)))
            d = s.delete(e)
            added, removed = o.delete(e)
        else:
            u, v = rng.sample(range(n), 2)
            w = rng.randrange(20)
            e = step
            d = s.insert(u, v, w, eid=e)
            added, removed = o.insert(u, v, w, eid=e)
            live.append(e)
        assert (d.added, d.removed) == (added, removed)
        s.audit()
    local_forests_are_minimal(s)
    s.audit(deep=True)


def test_parallel_lockstep():
    rng = random.Random(2)
    seq = SparsificationTree(16)
    par = SparsificationTree(16, parallel=True)
    live = []
    next_id = 0
    for _ in range(120):
        if live and rng.random() < 0.4:
            op = ("d", live.pop(rng.randrange(len(live))))
            d1 = seq.delete(op[1])
        else:
            u, v = rng.sample(range(16), 2)
            op = ("i", u, v, rng.randrange(30))
            d1 = seq.insert(*op[1:])
            live.append(next_id)
            next_id += 1
        d2, rep = par.sp_update_parallel(op)
        assert (d1.added, d1.removed) == (d2.added, d2.removed)
        assert rep.depth > 0 and rep.work >= rep.depth and not rep.violations
    with pytest.raises(RuntimeError):
        seq.sp_update_parallel(("d", live[0]))
    with pytest.raises(ValueError):
        par.sp_update_parallel(("x",))
