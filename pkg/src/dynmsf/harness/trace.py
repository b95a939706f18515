"""Line-oriented update traces.

::

    n 64
    seed 7
    i 3 9 120      # insert (u, v, w); edge ids are 0, 1, 2, ... in insert order
    d 0            # delete edge 0
    c              # check the forest against the oracle

``seed``, ``engine`` and ``warmup`` header lines are optional; ``#`` starts a comment.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field


class TraceError(ValueError):
    def __init__(self, lineno, msg):
        super().__init__("line %d: %s" % (lineno, msg))
        self.lineno = lineno


@dataclass(frozen=True)
class Insert:
    u: int
    v: int
    w: int


@dataclass(frozen=True)
class Delete:
    edge_id: int


@dataclass(frozen=True)
class Check:
    pass


@dataclass
class Trace:
    n: int
    ops: list = field(default_factory=list)
    seed: int | None = None
    engine: str | None = None
    warmup: int = 0   # leading updates that build the graph and are not measured

    def render(self) -> str:
        lines = ["n %d" % self.n]
        if self.seed is not None:
            lines.append("seed %d" % self.seed)
        if self.engine is not None:
            lines.append("engine %s" % self.engine)
        if self.warmup:
            lines.append("warmup %d" % self.warmup)
        for op in self.ops:
            if isinstance(op, Insert):
                lines.append("i %d %d %d" % (op.u, op.v, op.w))
            elif isinstance(op, Delete):
                lines.append("d %d" % op.edge_id)
            else:
                lines.append("c")
        return "\n".join(lines) + "\n"

    @property
    def updates(self):
        return sum(1 for op in self.ops if not isinstance(op, Check))


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise TraceError(lineno, "%s must be an integer, got %r" % (what, tok)) from None


def parse_trace(text: str) -> Trace:
    """Parse and validate a trace (vertex range, live-edge discipline)."""
    trace = None
    live = set()
    next_id = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if trace is None:
            if kind != "n" or len(tok) != 2:
                raise TraceError(lineno, "trace must start with 'n <int>'")
            n = _int(tok[1], lineno, "n")
            if n < 1:
                raise TraceError(lineno, "n must be positive")
            trace = Trace(n)
            continue
        if kind == "seed" and len(tok) == 2:
            trace.seed = _int(tok[1], lineno, "seed")
        elif kind == "engine" and len(tok) == 2:
            trace.engine = tok[1]
        elif kind == "warmup" and len(tok) == 2:
            trace.warmup = _int(tok[1], lineno, "warmup")
        elif kind == "i" and len(tok) == 4:
            u, v, w = (_int(t, lineno, name) for t, name in zip(tok[1:], "uvw"))
            for x in (u, v):
                if not 0 <= x < trace.n:
                    raise TraceError(lineno, "vertex %d out of range" % x)
            if u == v:
                raise TraceError(lineno, "self-loop %d-%d" % (u, v))
            trace.ops.append(Insert(u, v, w))
            live.add(next_id)
            next_id += 1
        elif kind == "d" and len(tok) == 2:
            e = _int(tok[1], lineno, "edge id")
            if e not in live:
                raise TraceError(lineno, "edge %d is not live" % e)
            live.discard(e)
            trace.ops.append(Delete(e))
        elif kind == "c" and len(tok) == 1:
            trace.ops.append(Check())
        else:
            raise TraceError(lineno, "malformed line %r" % raw.strip())
    if trace is None:
        raise TraceError(0, "empty trace")
    return trace


def read_trace(path) -> Trace:
    with open(path) as fh:
        return parse_trace(fh.read())


def default_check_every(n: int) -> int:
    return 1 if n <= 64 else 64


def gen_trace(n: int, ops: int, seed: int, mix: float = 0.6, max_weight: int = 1000,
              check_every: int | None = None, max_edges: int | None = None,
              simple: bool = False) -> Trace:
    """Random trace: each update inserts with probability ``mix`` (or when
    nothing is live) and otherwise deletes a uniformly chosen live edge.

    ``max_edges`` caps the live edge count (inserts then turn into deletes);
    ``simple`` only inserts between vertex pairs that have no live edge.
    A CHECK follows every ``check_every`` updates.
    """
    if n < 2:
        raise ValueError("need at least two vertices to generate edges")
    if not 0.0 <= mix <= 1.0:
        raise ValueError("mix must lie in [0, 1]")
    rng = random.Random(seed)
    every = check_every if check_every is not None else default_check_every(n)
    cap = n * (n - 1) // 2 if simple else None
    if max_edges is not None:
        cap = max_edges if cap is None else min(cap, max_edges)
    trace = Trace(n, seed=seed)
    live = []
    pair_of = {}
    used = set()
    next_id = 0
    for k in range(ops):
        insert = not live or (mix > 0 and rng.random() < mix)
        if cap is not None and len(live) >= cap:
            insert = False
        if mix == 0.0 and live:
            insert = False
        if insert:
            while True:
                u = rng.randrange(n)
                v = rng.randrange(n - 1)
                if v >= u:
                    v += 1
                pair = (min(u, v), max(u, v))
                if not simple or pair not in used:
                    break
            trace.ops.append(Insert(u, v, rng.randrange(max_weight)))
            if simple:
                used.add(pair)
                pair_of[next_id] = pair
            live.append(next_id)
            next_id += 1
        else:
            i = rng.randrange(len(live))
            live[i], live[-1] = live[-1], live[i]
            e = live.pop()
            if simple:
                used.discard(pair_of.pop(e))
            trace.ops.append(Delete(e))
        if every and (k + 1) % every == 0:
            trace.ops.append(Check())
    return trace


def gen_connected_trace(n: int, ops: int, seed: int, density: float = 1.5,
                        max_weight: int = 1000, check_every: int | None = None) -> Trace:
    """A random spanning tree plus extra edges up to ``density * n`` edges
    (the warm-up), followed by ``ops`` updates that insert or delete with
    equal probability so the edge count stays level."""
    if n < 2:
        raise ValueError("need at least two vertices to generate edges")
    rng = random.Random(seed)
    every = check_every if check_every is not None else default_check_every(n)
    labels = list(range(n))
    rng.shuffle(labels)
    pairs = [(labels[i], labels[rng.randrange(i)]) for i in range(1, n)]
    while len(pairs) < int(density * n):
        u = rng.randrange(n)
        v = rng.randrange(n - 1)
        pairs.append((u, v + (v >= u)))
    trace = Trace(n, seed=seed, warmup=len(pairs))
    trace.ops = [Insert(u, v, rng.randrange(max_weight)) for u, v in pairs]
    trace.ops.append(Check())
    live = list(range(len(pairs)))
    next_id = len(pairs)
    for k in range(ops):
        if not live or rng.random() < 0.5:
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            trace.ops.append(Insert(u, v + (v >= u), rng.randrange(max_weight)))
            live.append(next_id)
            next_id += 1
        else:
            i = rng.randrange(len(live))
            live[i], live[-1] = live[-1], live[i]
            trace.ops.append(Delete(live.pop()))
        if every and (k + 1) % every == 0:
            trace.ops.append(Check())
    return trace
