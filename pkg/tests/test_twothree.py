from hypothesis import given, settings, strategies as st

from dynmsf.twothree import TwoThree


class SumTree(TwoThree):
    def pull(self, node):
        node.count = sum(c.count if c.children is not None else c.item for c in node.children)


def items(t, root):
    return [leaf.item for leaf in t.leaves(root)]


def total(root):
    return root.item if root.children is None else root.count


ops = st.lists(
    st.tuples(st.sampled_from(["split", "join", "ins", "del"]), st.integers(0, 10**6)),
    max_size=60,
)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), ops)
def test_matches_list_model(n0, script):
    t = SumTree()
    root, leaves = t.build(list(range(n0)))
    forest = [(root, list(range(n0)))]
    by_item = {leaf.item: leaf for leaf in leaves}
    fresh = n0
    for op, r in script:
        k = r % len(forest)
        root, model = forest[k]
        if op == "split" and len(model) > 1:
            pos = r % (len(model) - 1)
            a, b = t.split_after(by_item[model[pos]])
            forest[k] = (a, model[:pos + 1])
            forest.append((b, model[pos + 1:]))
        elif op == "join" and len(forest) > 1:
            k2 = (k + 1) % len(forest)
            r2, m2 = forest[k2]
            joined = (t.join(root, r2), model + m2)
            forest = [f for i, f in enumerate(forest) if i not in (k, k2)] + [joined]
        elif op == "ins":
            pos = r % len(model)
            leaf = t.new_leaf(fresh)
            by_item[fresh] = leaf
            forest[k] = (t.insert_after(by_item[model[pos]], leaf),
                         model[:pos + 1] + [fresh] + model[pos + 1:])
            fresh += 1
        elif op == "del" and len(model) > 1:
            pos = r % len(model)
            x = model[pos]
            forest[k] = (t.delete(by_item.pop(x)), model[:pos] + model[pos + 1:])
        for root, model in forest:
            t.check(root)
            assert items(t, root) == model
            assert total(root) == sum(model)


def test_navigation_and_order():
    t = SumTree()
    root, leaves = t.build(list(range(17)))
    for i, leaf in enumerate(leaves):
        assert t.root(leaf) is root
        nxt = t.next_leaf(leaf)
        prv = t.prev_leaf(leaf)
        assert (nxt.item if nxt else None) == (i + 1 if i < 16 else None)
        assert (prv.item if prv else None) == (i - 1 if i > 0 else None)
    keys = [t.order_key(leaf) for leaf in leaves]
    assert keys == sorted(keys)


def test_touched_is_logarithmic():
    t = SumTree()
    root, leaves = t.build(list(range(3000)))
    t.touched = 0
    a, b = t.split_after(leaves[1234])
    t.join(a, b)
    assert t.touched < 120
