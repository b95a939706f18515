# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: link-cut trees with path maximum, and row scatter-min.

Operation-for-operation twin of ``_lct_py``; ``steps`` counts must agree.
"""
import numpy as np
cimport numpy as cnp

cdef long long NONE = -1
cdef long long NEG_INF = -(1LL << 62)


cdef class LinkCutCore:
    cdef object _ch0, _ch1, _par, _rev, _val, _mx
    cdef long long[:] ch0
    cdef long long[:] ch1
    cdef long long[:] par
    cdef long long[:] rev
    cdef long long[:] val
    cdef long long[:] mx
    cdef public long long steps
    cdef Py_ssize_t cap

    def __init__(self, capacity=16):
        self.cap = 0
        self.steps = 0
        self._ch0 = np.empty(0, dtype=np.int64)
        self._ch1 = np.empty(0, dtype=np.int64)
        self._par = np.empty(0, dtype=np.int64)
        self._rev = np.empty(0, dtype=np.int64)
        self._val = np.empty(0, dtype=np.int64)
        self._mx = np.empty(0, dtype=np.int64)
        self.ensure(capacity)

    @property
    def capacity(self):
        return self.cap

    def ensure(self, Py_ssize_t capacity):
        cdef Py_ssize_t n = self.cap
        if capacity <= n:
            return
        extra = capacity - n
        self._ch0 = np.concatenate([self._ch0, np.full(extra, NONE, dtype=np.int64)])
        self._ch1 = np.concatenate([self._ch1, np.full(extra, NONE, dtype=np.int64)])
        self._par = np.concatenate([self._par, np.full(extra, NONE, dtype=np.int64)])
        self._rev = np.concatenate([self._rev, np.zeros(extra, dtype=np.int64)])
        self._val = np.concatenate([self._val, np.full(extra, NEG_INF, dtype=np.int64)])
        self._mx = np.concatenate([self._mx, np.arange(n, capacity, dtype=np.int64)])
        self.ch0 = self._ch0
        self.ch1 = self._ch1
        self.par = self._par
        self.rev = self._rev
        self.val = self._val
        self.mx = self._mx
        self.cap = capacity

    def reset(self, long long x, long long value):
        self.ch0[x] = NONE
        self.ch1[x] = NONE
        self.par[x] = NONE
        self.rev[x] = 0
        self.val[x] = value
        self.mx[x] = x

    cdef inline bint _isroot(self, long long x):
        cdef long long p = self.par[x]
        return p == NONE or (self.ch0[p] != x and self.ch1[p] != x)

    cdef inline void _pull(self, long long x):
        cdef long long best = x
        cdef long long a = self.ch0[x]
        cdef long long b = self.ch1[x]
        if a != NONE and self.val[self.mx[a]] > self.val[best]:
            best = self.mx[a]
        if b != NONE and self.val[self.mx[b]] > self.val[best]:
            best = self.mx[b]
        self.mx[x] = best

    cdef inline void _push(self, long long x):
        cdef long long a, b
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

    cdef void _rotate(self, long long x):
        cdef long long p = self.par[x]
        cdef long long g = self.par[p]
        cdef long long b
        if not self._isroot(p):
            if self.ch0[g] == p:
                self.ch0[g] = x
            else:
                self.ch1[g] = x
        self.par[x] = g
        if self.ch0[p] == x:
            b = self.ch1[x]
            self.ch0[p] = b
            self.ch1[x] = p
        else:
            b = self.ch0[x]
            self.ch1[p] = b
            self.ch0[x] = p
        if b != NONE:
            self.par[b] = p
        self.par[p] = x
        self._pull(p)
        self._pull(x)
        self.steps += 1

    cdef void _splay(self, long long x):
        cdef list stack = [x]
        cdef long long y = x
        cdef long long p, g
        while not self._isroot(y):
            y = self.par[y]
            stack.append(y)
        for i in range(len(stack) - 1, -1, -1):
            self._push(stack[i])
        while not self._isroot(x):
            p = self.par[x]
            if not self._isroot(p):
                g = self.par[p]
                if (self.ch0[g] == p) == (self.ch0[p] == x):
                    self._rotate(p)
                else:
                    self._rotate(x)
            self._rotate(x)

    cdef void _access(self, long long x):
        cdef long long last = NONE
        cdef long long y = x
        while y != NONE:
            self._splay(y)
            self.ch1[y] = last
            self._pull(y)
            last = y
            y = self.par[y]
            self.steps += 1
        self._splay(x)

    cdef void _makeroot(self, long long x):
        self._access(x)
        self.rev[x] ^= 1
        self._push(x)

    def findroot(self, long long x):
        cdef long long a
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

    def connected(self, long long x, long long y):
        if x == y:
            return True
        return self.findroot(x) == self.findroot(y)

    def link(self, long long x, long long y):
        self._makeroot(x)
        self.par[x] = y

    def cut(self, long long x, long long y):
        self._makeroot(x)
        self._access(y)
        if self.ch0[y] == x:
            self._push(x)
        if self.ch0[y] != x or self.ch1[x] != NONE:
            raise ValueError("nodes %d and %d are not adjacent" % (x, y))
        self.ch0[y] = NONE
        self.par[x] = NONE
        self._pull(y)

    def path_max(self, long long x, long long y):
        self._makeroot(x)
        self._access(y)
        return self.mx[y]


def scatter_min(Py_ssize_t size, index, values, long long fill):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] row = np.full(size, fill, dtype=np.int64)
    cdef const long long[:] idx = np.ascontiguousarray(index, dtype=np.int64)
    cdef const long long[:] val = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t i, n = idx.shape[0]
    cdef long long j, v
    for i in range(n):
        j = idx[i]
        v = val[i]
        if v < row[j]:
            row[j] = v
    return row


cdef class TournamentCore:
    """Timestamp-cleared tournament trees; see the pure-Python twin for the
    phase structure.  Step, work and peak accounting must agree with it."""
    cdef public Py_ssize_t n_trees
    cdef public Py_ssize_t width
    cdef public long long epoch
    cdef object _A, _W, _S, _mark, _owner
    cdef long long[:, :] A
    cdef long long[:, :] W
    cdef long long[:, :] S
    cdef long long[:] mark
    cdef long long[:] owner
    cdef long long mark_epoch

    def __init__(self, n_trees, width):
        self.n_trees = n_trees
        self.width = width
        self._A = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self._W = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self._S = np.zeros((n_trees, 2 * width), dtype=np.int64)
        self._mark = np.zeros(n_trees * 2 * width, dtype=np.int64)
        self._owner = np.zeros(n_trees * 2 * width, dtype=np.int64)
        self.A = self._A
        self.W = self._W
        self.S = self._S
        self.mark = self._mark
        self.owner = self._owner
        self.epoch = 0
        self.mark_epoch = 0

    cdef inline long long _touch(self, long long t, long long z, long long p):
        """Audit one access; returns the clashing processor or -1."""
        cdef long long cell = t * 2 * self.width + z
        if self.mark[cell] == self.mark_epoch and self.owner[cell] != p:
            return self.owner[cell]
        self.mark[cell] = self.mark_epoch
        self.owner[cell] = p
        return -1

    def run(self, procs, trees, leaves, vals, long long absent, bint audit=True):
        cdef long long[:] P = np.ascontiguousarray(procs, dtype=np.int64)
        cdef long long[:] T = np.ascontiguousarray(trees, dtype=np.int64)
        cdef long long[:] Z = np.array(leaves, dtype=np.int64, copy=True)
        cdef long long[:] V = np.ascontiguousarray(vals, dtype=np.int64)
        cdef Py_ssize_t n = P.shape[0]
        cdef long long width = self.width
        cdef long long[:] act = np.arange(n, dtype=np.int64)
        cdef long long[:] dead = np.zeros(n, dtype=np.int64)
        cdef Py_ssize_t nact = n, a, i, cnt, keep
        cdef long long par, cur, ep, steps = 0, work = 0, peak = 0, level, clash
        violation = None
        self.epoch += 1
        ep = self.epoch
        for i in range(n):
            Z[i] += width
        if n:
            self.mark_epoch += 1
            for i in range(n):
                self.A[T[i], Z[i]] = V[i]
                self.W[T[i], Z[i]] = P[i]
                self.S[T[i], Z[i]] = ep
                if audit and violation is None:
                    clash = self._touch(T[i], Z[i], P[i])
                    if clash >= 0:
                        violation = (steps, int(T[i] * 2 * width + Z[i]), sorted([int(clash), int(P[i])]))
            steps += 1
            work += n
            peak = n
        level = width
        while level > 1 and nact > 0:
            # phase 1: left children claim the parent
            cnt = 0
            self.mark_epoch += 1
            for a in range(nact):
                i = act[a]
                if Z[i] % 2 == 0:
                    par = Z[i] // 2
                    self.A[T[i], par] = V[i]
                    self.W[T[i], par] = P[i]
                    self.S[T[i], par] = ep
                    cnt += 1
                    if audit and violation is None:
                        clash = self._touch(T[i], par, P[i])
                        if clash >= 0:
                            violation = (steps, int(T[i] * 2 * width + par), sorted([int(clash), int(P[i])]))
            if cnt:
                steps += 1
                work += cnt
                peak = max(peak, cnt)
            # phase 2: right children challenge
            cnt = 0
            self.mark_epoch += 1
            for a in range(nact):
                i = act[a]
                if Z[i] % 2 == 1:
                    par = Z[i] // 2
                    cur = self.A[T[i], par] if self.S[T[i], par] == ep else absent
                    if cur > V[i]:
                        self.A[T[i], par] = V[i]
                        self.W[T[i], par] = P[i]
                        self.S[T[i], par] = ep
                    else:
                        dead[i] = 1
                    cnt += 1
                    if audit and violation is None:
                        clash = self._touch(T[i], par, P[i])
                        if clash >= 0:
                            violation = (steps, int(T[i] * 2 * width + par), sorted([int(clash), int(P[i])]))
            if cnt:
                steps += 1
                work += cnt
                peak = max(peak, cnt)
            # phase 3: left children that lost step down
            cnt = 0
            self.mark_epoch += 1
            for a in range(nact):
                i = act[a]
                if Z[i] % 2 == 0:
                    par = Z[i] // 2
                    cur = self.A[T[i], par] if self.S[T[i], par] == ep else absent
                    if cur < V[i]:
                        dead[i] = 1
                    cnt += 1
                    if audit and violation is None:
                        clash = self._touch(T[i], par, P[i])
                        if clash >= 0:
                            violation = (steps, int(T[i] * 2 * width + par), sorted([int(clash), int(P[i])]))
            if cnt:
                steps += 1
                work += cnt
                peak = max(peak, cnt)
            # phase 4: survivors move up (private registers only)
            steps += 1
            work += nact
            peak = max(peak, nact)
            keep = 0
            for a in range(nact):
                i = act[a]
                Z[i] //= 2
                if not dead[i]:
                    act[keep] = i
                    keep += 1
            nact = keep
            level //= 2
        roots = np.full(self.n_trees, absent, dtype=np.int64)
        winners = np.full(self.n_trees, -1, dtype=np.int64)
        for i in range(self.n_trees):
            if self.S[i, 1] == ep:
                roots[i] = self.A[i, 1]
                winners[i] = self.W[i, 1]
        return roots, winners, int(steps), int(work), int(peak), violation
