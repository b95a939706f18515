"""Dynamic forest with connectivity and path-maximum queries.

Edges are materialized as their own nodes so the maximum on a path identifies
an edge.  The splay-based kernel lives in ``_core`` (compiled) or ``_lct_py``.
"""
from __future__ import annotations

from ._backend import LinkCutCore


class LinkCutError(Exception):
    pass


class LinkCutForest:
    """Forest over vertices ``0..n-1``; tree edges are addressed by their key."""

    def __init__(self, n_vertices: int):
        self.n = n_vertices
        self.core = LinkCutCore(max(2 * n_vertices, 4))
        for x in range(n_vertices):
            self.core.reset(x, -(1 << 62))
        self._free = []
        self._next = n_vertices
        self._edges = {}  # key -> (node, u, v)
        self._node_key = {}

    @property
    def steps(self) -> int:
        return self.core.steps

    def _alloc(self, key):
        if self._free:
            node = self._free.pop()
        else:
            node = self._next
            self._next += 1
            if node >= self.core.capacity:
                self.core.ensure(2 * self.core.capacity)
        self.core.reset(node, key)
        return node

    def connected(self, u: int, v: int) -> bool:
        return bool(self.core.connected(u, v))

    def link(self, u: int, v: int, key: int) -> int:
        if key in self._edges:
            raise LinkCutError("edge %d already linked" % key)
        if self.core.connected(u, v):
            raise LinkCutError("vertices %d and %d are already connected" % (u, v))
        node = self._alloc(key)
        self.core.link(u, node)
        self.core.link(node, v)
        self._edges[key] = (node, u, v)
        self._node_key[node] = key
        return key

    def cut(self, key: int) -> None:
        try:
            node, u, v = self._edges.pop(key)
        except KeyError:
            raise LinkCutError("stale tree-edge handle %d" % key) from None
        self.core.cut(u, node)
        self.core.cut(node, v)
        del self._node_key[node]
        self._free.append(node)

    def path_max(self, u: int, v: int) -> int:
        if u == v:
            raise LinkCutError("path_max of a vertex with itself")
        if not self.core.connected(u, v):
            raise LinkCutError("no path between %d and %d" % (u, v))
        return self._node_key[self.core.path_max(u, v)]

    def edges(self):
        return set(self._edges)

    def __contains__(self, key):
        return key in self._edges
