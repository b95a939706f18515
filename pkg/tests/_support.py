"""Shared oracles for the test suite."""
from __future__ import annotations

import random

from dynmsf.chunks import ChunkSpace, Verdict, check_invariant1
from dynmsf.harness.oracle import kruskal
from dynmsf.twothree import TwoThree


def kruskal_keys(n, ends):
    """Forest keys by Kruskal over ``{key: (a, b)}``; keys order the edges."""
    return kruskal(n, ((k, a, b, k) for k, (a, b) in ends.items()))


def exhaustive_mwr(space, ra, rb):
    """Lightest edge with one end in each of the two lists, or ``None``."""
    side_a = {o.vertex for o in space.list_occs(ra)}
    side_b = {o.vertex for o in space.list_occs(rb)}
    best = None
    for key, (a, b) in space.ends.items():
        if (a in side_a and b in side_b) or (a in side_b and b in side_a):
            if best is None or key < best:
                best = key
    return best


def watch_mwr(engine, log):
    """Wrap ``engine.find_mwr`` so every call is checked exhaustively."""
    inner = engine.find_mwr

    def checked(ra, rb):
        want = exhaustive_mwr(engine.space, ra, rb)
        got = inner(ra, rb)
        log.append((got, want))
        return got

    engine.find_mwr = checked


def invariant1_failures(space):
    bad = 0
    for c in space.live:
        if c.mass != space.recount_mass(c) or check_invariant1(c, space.K) is not Verdict.OK:
            bad += 1
    return bad


def random_bounded_ops(n, steps, seed, max_weight=50, p_delete=0.4):
    """Updates on a degree-3-bounded graph: ``("i", key, a, b)`` / ``("d", key)``."""
    from dynmsf.keys import real_key
    rng = random.Random(seed)
    deg = [0] * n
    live = {}
    nid = 0
    for _ in range(steps):
        if live and rng.random() < p_delete:
            key = rng.choice(sorted(live))
            a, b = live.pop(key)
            deg[a] -= 1
            deg[b] -= 1
            yield ("d", key)
            continue
        cand = [v for v in range(n) if deg[v] < 3]
        if len(cand) < 2:
            continue
        a, b = rng.sample(cand, 2)
        key = real_key(rng.randrange(max_weight), nid)
        nid += 1
        live[key] = (a, b)
        deg[a] += 1
        deg[b] += 1
        yield ("i", key, a, b)


def chunk_list(groups, n=None, K=4, make_space=None):
    """A space with one list whose chunks hold the given vertex groups, in order."""
    n = n if n is not None else 1 + max(v for g in groups for v in g)
    sp = make_space(n, K) if make_space else ChunkSpace(n, K)
    root = None
    for g in groups:
        for v in g:
            root = sp.lsds.join(root, TwoThree.root(sp.principal_chunk(v).leaf))
    sp.promote_list(root)
    out = []
    for g in groups:
        c = sp.principal_chunk(g[0])
        for v in g[1:]:
            sp.chunk_merge(c, sp.principal_chunk(v))
        out.append(c)
    return sp, out


# acceptance verdict lines, printed in the terminal summary by conftest
ACCEPTANCE = []


def verdict(cid: int, passed: bool, detail: str) -> bool:
    line = "criterion %-2d %s  %s" % (cid, "PASS" if passed else "FAIL", detail)
    ACCEPTANCE.append((cid, line))
    print(line)
    return passed
