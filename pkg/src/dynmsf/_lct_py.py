"""Pure-Python link-cut kernel.

Node-indexed splay-based link-cut trees with lazy reversal and a path-maximum
aggregate.  Mirrors ``_core.pyx`` operation for operation so that both
backends report identical ``steps`` counts.
"""
import numpy as np

NONE = -1
NEG_INF = -(1 << 62)


class LinkCutCore:
    def __init__(self, capacity=16):
        self.ch0 = []
        self.ch1 = []
        self.par = []
        self.rev = []
        self.val = []
        self.mx = []
        self.steps = 0
        self.ensure(capacity)

    @property
    def capacity(self):
        return len(self.par)

    def ensure(self, capacity):
        n = len(self.par)
        if capacity <= n:
            return
        extra = capacity - n
        self.ch0.extend([NONE] * extra)
        self.ch1.extend([NONE] * extra)
        self.par.extend([NONE] * extra)
        self.rev.extend([0] * extra)
        self.val.extend([NEG_INF] * extra)
        self.mx.extend(range(n, capacity))

    def reset(self, x, value):
        self.ch0[x] = NONE
        self.ch1[x] = NONE
        self.par[x] = NONE
        self.rev[x] = 0
        self.val[x] = value
        self.mx[x] = x

    def _isroot(self, x):
        p = self.par[x]
        return p == NONE or (self.ch0[p] != x and self.ch1[p] != x)

    def _pull(self, x):
        val = self.val
        best = x
        a = self.ch0[x]
        if a != NONE and val[self.mx[a]] > val[best]:
            best = self.mx[a]
        b = self.ch1[x]
        if b != NONE and val[self.mx[b]] > val[best]:
            best = self.mx[b]
        self.mx[x] = best

    def _push(self, x):
        if self.rev[x]:
            a = self.ch0[x]
            b = self.ch1[x]
            self.ch0[x] = b
            self.ch1[x] = a
            if a != NONE:
                self.rev[a] ^= 1
            if b != NONE:
                self.rev[b] ^= 1
            self.rev[x] = 0

    def _rotate(self, x):
        p = self.par[x]
        g = self.par[p]
        ch0, ch1, par = self.ch0, self.ch1, self.par
        if not self._isroot(p):
            if ch0[g] == p:
                ch0[g] = x
            else:
                ch1[g] = x
        par[x] = g
        if ch0[p] == x:
            b = ch1[x]
            ch0[p] = b
            ch1[x] = p
        else:
            b = ch0[x]
            ch1[p] = b
            ch0[x] = p
        if b != NONE:
            par[b] = p
        par[p] = x
        self._pull(p)
        self._pull(x)
        self.steps += 1

    def _splay(self, x):
        stack = [x]
        y = x
        while not self._isroot(y):
            y = self.par[y]
            stack.append(y)
        for y in reversed(stack):
            self._push(y)
        while not self._isroot(x):
            p = self.par[x]
            if not self._isroot(p):
                g = self.par[p]
                if (self.ch0[g] == p) == (self.ch0[p] == x):
                    self._rotate(p)
                else:
                    self._rotate(x)
            self._rotate(x)

    def _access(self, x):
        last = NONE
        y = x
        while y != NONE:
            self._splay(y)
            self.ch1[y] = last
            self._pull(y)
            last = y
            y = self.par[y]
            self.steps += 1
        self._splay(x)

    def _makeroot(self, x):
        self._access(x)
        self.rev[x] ^= 1
        self._push(x)

    def findroot(self, x):
        self._access(x)
        while True:
            self._push(x)
            a = self.ch0[x]
            if a == NONE:
                break
            x = a
            self.steps += 1
        self._splay(x)
        return x

    def connected(self, x, y):
        if x == y:
            return True
        return self.findroot(x) == self.findroot(y)

    def link(self, x, y):
        self._makeroot(x)
        self.par[x] = y

    def cut(self, x, y):
        self._makeroot(x)
        self._access(y)
        if self.ch0[y] == x:
            self._push(x)
        if self.ch0[y] != x or self.ch1[x] != NONE:
            raise ValueError("nodes %d and %d are not adjacent" % (x, y))
        self.ch0[y] = NONE
        self.par[x] = NONE
        self._pull(y)

    def path_max(self, x, y):
        self._makeroot(x)
        self._access(y)
        return self.mx[y]


def scatter_min(size, index, values, fill):
    """Row of length ``size`` holding, per slot, the minimum of ``values``
    routed there by ``index`` (``fill`` where nothing lands)."""
    row = np.full(size, fill, dtype=np.int64)
    if len(index):
        np.minimum.at(row, np.asarray(index, dtype=np.int64), np.asarray(values, dtype=np.int64))
    return row


class TournamentCore:
    """Timestamp-cleared tournament trees (pure-Python twin of the compiled core).

    ``run`` plays one round of tournaments and returns
    ``(roots, winners, steps, work, peak, violation)``.  Steps follow the four
    phases per level: left children claim the parent, right children challenge,
    left losers drop out, survivors move up.  Ties favour the left child.
    ``violation`` is ``None`` or ``(step, cell, procs)`` for the first step in
    which two processors touched one node.
    """

    def __init__(self, n_trees, width):
        self.n_trees = n_trees
        self.width = width
        self.A = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self.W = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self.stamp = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self.epoch = 0

    def run(self, procs, trees, leaves, vals, absent, audit=True):
        self.epoch += 1
        ep = self.epoch
        width = self.width
        A, W, S = self.A, self.W, self.stamp
        procs = np.asarray(procs, dtype=np.int64)
        t = np.asarray(trees, dtype=np.int64)
        z = np.asarray(leaves, dtype=np.int64) + width
        w = np.asarray(vals, dtype=np.int64)
        acct = [0, 0, 0, None]

        def step(sel_t, sel_z, sel_p, private=False):
            k = sel_p.size
            if k == 0:
                return
            acct[0] += 1
            acct[1] += k
            acct[2] = max(acct[2], k)
            if audit and not private and acct[3] is None:
                cells = sel_t * (2 * width) + sel_z
                u, first, counts = np.unique(cells, return_index=True, return_counts=True)
                if (counts > 1).any():
                    cell = int(u[np.argmax(counts > 1)])
                    acct[3] = (acct[0] - 1, cell, sorted(sel_p[cells == cell].tolist()))

        def read(tt, zz):
            return np.where(S[tt, zz] == ep, A[tt, zz], absent)

        def write(tt, zz, vv, pp):
            A[tt, zz] = vv
            W[tt, zz] = pp
            S[tt, zz] = ep

        if procs.size:
            write(t, z, w, procs)
            step(t, z, procs)
        active = np.ones(procs.size, dtype=bool)
        level = width
        while level > 1 and active.any():
            idx = np.flatnonzero(active)
            par = z[idx] // 2
            left = (z[idx] % 2) == 0
            li = idx[left]
            write(t[li], par[left], w[li], procs[li])
            step(t[li], par[left], procs[li])
            ri = idx[~left]
            rp = par[~left]
            win = read(t[ri], rp) > w[ri]
            write(t[ri[win]], rp[win], w[ri[win]], procs[ri[win]])
            active[ri[~win]] = False
            step(t[ri], rp, procs[ri])
            lost = read(t[li], par[left]) < w[li]
            active[li[lost]] = False
            step(t[li], par[left], procs[li])
            z[idx] = par
            step(t[idx], z[idx], procs[idx], private=True)
            level //= 2
        rt = np.arange(self.n_trees)
        live = S[rt, 1] == ep
        roots = np.where(live, A[rt, 1], absent)
        winners = np.where(live, W[rt, 1], -1)
        return roots, winners, acct[0], acct[1], acct[2], acct[3]
