import random
from dataclasses import dataclass

import numpy as np
from hypothesis import given, settings, strategies as st

from dynmsf.keys import ABSENT
from dynmsf.lsds import Lsds
from dynmsf.twothree import TwoThree

J = 24


@dataclass(eq=False)
class Item:
    id: int | None
    leaf: object = None


def make(rng, n_rows=J):
    C = np.full((J, J), ABSENT, dtype=np.int64)
    for i in range(n_rows):
        for j in range(J):
            if rng.random() < 0.3:
                C[i, j] = rng.randrange(1, 1000)
    return Lsds(C)


def leaf_for(ls, cid):
    it = Item(cid)
    it.leaf = ls.new_leaf(it)
    return it


def fold(ls, root):
    rows = [ls.agg_of(leaf) for leaf in TwoThree.leaves(root)]
    agg = np.minimum.reduce(rows)
    memb = np.zeros(J, dtype=bool)
    for leaf in TwoThree.leaves(root):
        if leaf.item.id is not None:
            memb[leaf.item.id] = True
    return agg, memb


def agrees(ls, root):
    agg, memb = fold(ls, root)
    return np.array_equal(ls.agg_of(root), agg) and np.array_equal(ls.memb_of(root), memb)


def test_two_leaf_base_case():
    ls = make(random.Random(1))
    a, b = leaf_for(ls, 0), leaf_for(ls, 1)
    root = ls.ls_insert(b, a)
    assert [leaf.item for leaf in TwoThree.leaves(root)] == [a, b]
    assert np.array_equal(ls.agg_of(root), np.minimum(ls.C[0], ls.C[1]))
    assert ls.memb_of(root).nonzero()[0].tolist() == [0, 1]


def test_absent_row_leaves_root_unchanged():
    ls = make(random.Random(2), n_rows=3)
    a, b, c = leaf_for(ls, 0), leaf_for(ls, 1), leaf_for(ls, 5)
    assert not (ls.C[5] != ABSENT).any()
    root = ls.ls_insert(b, a)
    before = ls.agg_of(root).copy()
    root = ls.ls_insert(c, b)
    assert np.array_equal(ls.agg_of(root), before)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_inserts_and_deletes_match_fold(seed):
    rng = random.Random(seed)
    ls = make(rng)
    items = [leaf_for(ls, i) for i in range(J)]
    order = [items[0]]
    root = items[0].leaf
    for it in items[1:21]:
        after = rng.choice(order)
        root = ls.ls_insert(it, after)
        order.insert(order.index(after) + 1, it)
        assert agrees(ls, root)
    assert [leaf.item for leaf in TwoThree.leaves(root)] == order
    while len(order) > 1:
        it = order.pop(rng.randrange(len(order)))
        root = ls.ls_delete(it)
        ls.check_tree(root)
        assert agrees(ls, root)
    assert ls.ls_delete(order[0]) is None


def test_delete_reinsert_round_trip():
    ls = make(random.Random(3))
    root, leaves = ls.build([Item(i) for i in range(8)])
    for leaf in leaves:
        leaf.item.leaf = leaf
    want = ls.agg_of(root).copy()
    it = leaves[4].item
    root = ls.ls_delete(it)
    root = ls.ls_insert(it, leaves[3].item)
    assert np.array_equal(ls.agg_of(root), want)


def test_split_and_join():
    ls = make(random.Random(4))
    root, leaves = ls.build([Item(i) for i in range(9)])
    for leaf in leaves:
        leaf.item.leaf = leaf
    whole = ls.agg_of(root).copy()
    a, b = ls.ls_split(leaves[-1].item)
    assert b is None
    assert [leaf.item.id for leaf in TwoThree.leaves(a)] == list(range(9))
    a, b = ls.ls_split(leaves[3].item)
    assert agrees(ls, a) and agrees(ls, b)
    assert np.array_equal(np.minimum(ls.agg_of(a), ls.agg_of(b)), whole)
    j = ls.ls_join(a, b)
    assert [leaf.item.id for leaf in TwoThree.leaves(j)] == list(range(9))
    assert np.array_equal(ls.agg_of(j), whole)
    assert ls.ls_join(j, None) is j


def test_update_adj():
    ls = make(random.Random(5))
    root, leaves = ls.build([Item(i) for i in range(6)])
    for leaf in leaves:
        leaf.item.leaf = leaf
    it = leaves[2].item
    ls.C[2, 7] = ls.C[7, 2] = 2
    ls.update_adj(it)
    assert ls.agg_of(root)[7] <= 2
    snap = ls.agg_of(root).copy()
    ls.update_adj(it)
    assert np.array_equal(ls.agg_of(root), snap)
    ls.check_tree(root)
