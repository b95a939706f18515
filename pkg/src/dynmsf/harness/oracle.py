"""Brute-force minimum spanning forest by Kruskal's algorithm."""
from __future__ import annotations


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def kruskal(n: int, edges) -> set:
    """Ids of the MSF edges; ``edges`` yields ``(id, u, v, weight)``.

    Ties on weight are broken by id, which makes the forest unique.
    """
    uf = UnionFind(n)
    out = set()
    for eid, u, v, w in sorted(edges, key=lambda e: (e[3], e[0])):
        if uf.union(u, v):
            out.add(eid)
    return out


class OracleGraph:
    """Recomputes the forest from scratch after every update."""

    def __init__(self, n: int):
        self.n = n
        self.edges = {}
        self._next_id = 0
        self.forest = set()

    def insert(self, u, v, w, eid=None):
        if u == v:
            raise ValueError("loop rejected")
        if eid is None:
            eid = self._next_id
        self._next_id = max(self._next_id, eid + 1)
        self.edges[eid] = (u, v, w)
        return self._recompute()

    def delete(self, eid):
        if eid not in self.edges:
            raise KeyError("no such edge")
        del self.edges[eid]
        return self._recompute()

    def _recompute(self):
        before = self.forest
        self.forest = kruskal(self.n, ((i, u, v, w) for i, (u, v, w) in self.edges.items()))
        return sorted(self.forest - before), sorted(before - self.forest)

    def msf_ids(self):
        return set(self.forest)

    def msf_weight(self):
        return sum(self.edges[i][2] for i in self.forest)
