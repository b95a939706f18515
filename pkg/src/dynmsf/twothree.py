"""Leaf-ordered 2-3 trees with join, split, insert and delete.

Trees are identified by their root node.  Subclasses override :meth:`pull`
to maintain per-node aggregates; every structural change pulls the touched
internal nodes bottom-up, and ``touched`` counts those pulls.
"""
from __future__ import annotations

import itertools


class Node:
    __slots__ = ("children", "parent", "height", "item", "agg", "memb", "count", "uid")

    def __init__(self, height=0, item=None):
        self.children = None
        self.parent = None
        self.height = height
        self.item = item
        self.agg = None
        self.memb = None
        self.count = 0
        self.uid = -1

    @property
    def is_leaf(self):
        return self.children is None

    def __repr__(self):
        if self.is_leaf:
            return "Leaf(%r)" % (self.item,)
        return "Node(h=%d, %d children)" % (self.height, len(self.children))


def _index(children, x):
    for i, c in enumerate(children):
        if c is x:
            return i
    raise ValueError("node is not a child of its parent")


class TwoThree:
    def __init__(self):
        self.touched = 0
        self._uids = itertools.count()

    # hooks -------------------------------------------------------------
    def pull(self, node):
        """Recompute the aggregate of an internal node from its children."""

    def discard(self, node):
        """Called when an internal node leaves every tree."""

    # construction ------------------------------------------------------
    def new_leaf(self, item):
        leaf = Node(0, item)
        leaf.uid = next(self._uids)
        return leaf

    def _internal(self, kids):
        node = Node(kids[0].height + 1)
        node.uid = next(self._uids)
        node.children = list(kids)
        for k in kids:
            k.parent = node
        self._pull(node)
        return node

    def _pull(self, node):
        self.touched += 1
        self.pull(node)

    # navigation --------------------------------------------------------
    @staticmethod
    def root(node):
        while node.parent is not None:
            node = node.parent
        return node

    @staticmethod
    def first_leaf(node):
        while node.children is not None:
            node = node.children[0]
        return node

    @staticmethod
    def last_leaf(node):
        while node.children is not None:
            node = node.children[-1]
        return node

    @staticmethod
    def next_leaf(leaf):
        x = leaf
        while x.parent is not None:
            sibs = x.parent.children
            i = _index(sibs, x)
            if i + 1 < len(sibs):
                return TwoThree.first_leaf(sibs[i + 1])
            x = x.parent
        return None

    @staticmethod
    def prev_leaf(leaf):
        x = leaf
        while x.parent is not None:
            sibs = x.parent.children
            i = _index(sibs, x)
            if i > 0:
                return TwoThree.last_leaf(sibs[i - 1])
            x = x.parent
        return None

    @staticmethod
    def leaves(root):
        if root is None:
            return
        stack = [root]
        while stack:
            x = stack.pop()
            if x.children is None:
                yield x
            else:
                stack.extend(reversed(x.children))

    @staticmethod
    def nodes(root):
        if root is None:
            return
        stack = [root]
        while stack:
            x = stack.pop()
            yield x
            if x.children is not None:
                stack.extend(x.children)

    @staticmethod
    def order_key(leaf):
        path = []
        x = leaf
        while x.parent is not None:
            path.append(_index(x.parent.children, x))
            x = x.parent
        path.reverse()
        return path

    # structure ---------------------------------------------------------
    def _fix_up(self, x):
        while True:
            if len(x.children) > 3:
                kids = x.children
                x.children = kids[:2]
                y = Node(x.height)
                y.uid = next(self._uids)
                y.children = kids[2:]
                for k in y.children:
                    k.parent = y
                self._pull(x)
                self._pull(y)
                p = x.parent
                if p is None:
                    return self._internal([x, y])
                i = _index(p.children, x)
                p.children.insert(i + 1, y)
                y.parent = p
                x = p
            else:
                self._pull(x)
                if x.parent is None:
                    return x
                x = x.parent

    def join(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        a.parent = None
        b.parent = None
        if a.height == b.height:
            return self._internal([a, b])
        if a.height > b.height:
            x = a
            while x.height > b.height + 1:
                x = x.children[-1]
            x.children.append(b)
            b.parent = x
            return self._fix_up(x)
        x = b
        while x.height > a.height + 1:
            x = x.children[0]
        x.children.insert(0, a)
        a.parent = x
        return self._fix_up(x)

    def _group(self, sibs):
        if len(sibs) == 1:
            return sibs[0]
        return self._internal(sibs)

    def split_after(self, leaf):
        """Split the tree of ``leaf`` so that ``leaf`` ends the left part."""
        x = leaf
        p = leaf.parent
        leaf.parent = None
        left, right = leaf, None
        while p is not None:
            kids = p.children
            i = _index(kids, x)
            lefts, rights = kids[:i], kids[i + 1:]
            for s in lefts:
                s.parent = None
            for s in rights:
                s.parent = None
            gp = p.parent
            p.children = []
            p.parent = None
            self.discard(p)
            if lefts:
                left = self.join(self._group(lefts), left)
            if rights:
                right = self.join(right, self._group(rights))
            x, p = p, gp
        return left, right

    def insert_after(self, leaf, new):
        p = leaf.parent
        if p is None:
            return self._internal([leaf, new])
        i = _index(p.children, leaf)
        p.children.insert(i + 1, new)
        new.parent = p
        return self._fix_up(p)

    def delete(self, leaf):
        """Remove ``leaf``; returns the new root (``None`` if the tree empties)."""
        p = leaf.parent
        leaf.parent = None
        if p is None:
            return None
        del p.children[_index(p.children, leaf)]
        x = p
        while True:
            if x.parent is None:
                if len(x.children) == 1:
                    c = x.children[0]
                    c.parent = None
                    x.children = []
                    self.discard(x)
                    return c
                self._pull(x)
                return x
            if len(x.children) >= 2:
                self._pull(x)
                x = x.parent
                continue
            p = x.parent
            i = _index(p.children, x)
            s = p.children[i - 1] if i > 0 else p.children[i + 1]
            if len(s.children) == 3:
                if i > 0:
                    moved = s.children.pop()
                    x.children.insert(0, moved)
                else:
                    moved = s.children.pop(0)
                    x.children.append(moved)
                moved.parent = x
                self._pull(s)
                self._pull(x)
            else:
                child = x.children[0]
                if i > 0:
                    s.children.append(child)
                else:
                    s.children.insert(0, child)
                child.parent = s
                del p.children[i]
                x.children = []
                x.parent = None
                self.discard(x)
                self._pull(s)
            x = p

    def build(self, items):
        """Balanced tree over ``items`` in order; returns (root, leaves)."""
        leaves = [self.new_leaf(it) for it in items]
        level = leaves
        if not level:
            return None, leaves
        while len(level) > 1:
            nxt = []
            i = 0
            n = len(level)
            while i < n:
                rem = n - i
                take = 3 if rem == 3 or rem > 4 else 2
                nxt.append(self._internal(level[i:i + take]))
                i += take
            level = nxt
        return level[0], leaves

    @staticmethod
    def check(root):
        """Structural audit: arity 2..3, parent links, equal leaf depth."""
        if root is None:
            return
        assert root.parent is None
        depths = set()

        def walk(x, d):
            if x.children is None:
                assert x.height == 0
                depths.add(d)
                return
            assert 2 <= len(x.children) <= 3 or (x is root and len(x.children) >= 2), len(x.children)
            for c in x.children:
                assert c.parent is x
                assert c.height == x.height - 1
                walk(c, d + 1)

        walk(root, 0)
        assert len(depths) == 1
