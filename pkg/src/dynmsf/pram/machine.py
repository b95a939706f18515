"""Phase-synchronous EREW PRAM simulator.

Two ways to drive the machine:

* :meth:`PramMachine.step` takes the accesses of one lockstep step as flat
  ``(processor, cell)`` arrays.  The parallel procedures compute their values
  with vectorized code and declare what each processor touched; the machine
  counts depth, work and peak processors and, in audit mode, checks that no
  cell was touched by two different processors within the step.
* :meth:`PramMachine.run_phases` executes per-processor closures against a
  :class:`SharedMemory`, one barrier-separated phase at a time.  Within a
  phase every read sees the memory as it was before the phase.

A step may bundle a constant number of accesses per processor; exclusivity
is only required across processors.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np


class ErewViolation(RuntimeError):
    def __init__(self, step, cell, procs):
        super().__init__("EREW violation at step %d: cell %d accessed by processors %s"
                         % (step, cell, procs))
        self.step = step
        self.cell = cell
        self.procs = procs


UNINITIALIZED = object()

# steps with at most this many accesses are audited with plain Python sets
_SMALL = 48

# Region tags for the cell address space: cell = (region << 48) | offset.
REGION_BITS = 48


def region_base(tag: int) -> int:
    return tag << REGION_BITS


@dataclass
class StepReport:
    depth: int = 0
    work: int = 0
    max_processors: int = 0
    violations: list = field(default_factory=list)
    linkcut_depth: int = 0

    def to_record(self) -> str:
        """One line of ``key=value`` fields; violations as compact JSON."""
        return "depth=%d work=%d max_processors=%d linkcut_depth=%d violations=%s" % (
            self.depth, self.work, self.max_processors, self.linkcut_depth,
            json.dumps(self.violations, separators=(",", ":")))

    @classmethod
    def from_record(cls, line: str) -> "StepReport":
        fields = dict(tok.split("=", 1) for tok in line.split())
        return cls(int(fields["depth"]), int(fields["work"]), int(fields["max_processors"]),
                   json.loads(fields["violations"]), int(fields["linkcut_depth"]))

    def as_dict(self):
        return asdict(self)


class Scratch:
    """Timestamped scratch array: cells not written in the current epoch read
    as ``cleared``."""

    def __init__(self, shape, cleared, dtype=np.int64):
        self.values = np.full(shape, cleared, dtype=dtype)
        self.stamp = np.full(shape, -1, dtype=np.int64)
        self.cleared = cleared

    def ensure(self, shape):
        if any(s > t for s, t in zip(shape, self.values.shape)):
            new = tuple(max(s, t) for s, t in zip(shape, self.values.shape))
            self.values = np.full(new, self.cleared, dtype=self.values.dtype)
            self.stamp = np.full(new, -1, dtype=np.int64)

    def read(self, epoch, idx):
        v = self.values[idx]
        return np.where(self.stamp[idx] == epoch, v, self.cleared)

    def write(self, epoch, idx, vals):
        self.values[idx] = vals
        self.stamp[idx] = epoch


class PramMachine:
    def __init__(self, audit: bool = True, strict: bool = True):
        self.audit = audit
        self.strict = strict
        self.depth = 0
        self.work = 0
        self.max_processors = 0
        self.violations = []
        self.epoch = 0
        self.linkcut_depth = 0
        self.op_peak = 0

    def new_epoch(self) -> int:
        self.epoch += 1
        return self.epoch

    # accounting --------------------------------------------------------
    def step(self, procs, cells):
        """Account one lockstep step; ``procs[i]`` accessed ``cells[i]``."""
        if isinstance(procs, np.ndarray):
            size = procs.size
            small = size <= _SMALL
            if small:
                procs = procs.tolist()
                cells = cells.tolist() if isinstance(cells, np.ndarray) else list(cells)
        else:
            size = len(procs)
            small = size <= _SMALL
            if not small:
                procs = np.asarray(procs, dtype=np.int64)
        if size == 0:
            return
        self.depth += 1
        if small:
            active = len(set(procs))
            if self.audit:
                if not isinstance(cells, list):
                    cells = list(cells)
                if len(set(cells)) != size:
                    self._check_small(procs, cells)
        else:
            s = np.sort(procs)
            active = int(np.count_nonzero(s[1:] != s[:-1])) + 1
            if self.audit:
                self._check(procs, np.asarray(cells, dtype=np.int64))
        self.work += active
        self._peak(active)

    def charge(self, steps: int, procs: int):
        """Account ``steps`` steps of ``procs`` processors whose accesses are
        disjoint by construction (one processor per column)."""
        if steps <= 0 or procs <= 0:
            return
        self.depth += steps
        self.work += steps * procs
        self._peak(procs)

    def account(self, steps: int, work: int, peak: int, violation=None, base: int = 0):
        """Account a block of steps audited by a compiled kernel.

        ``violation`` is ``None`` or ``(step offset, cell offset, procs)``;
        ``base`` is added to the cell offset.
        """
        if violation is not None:
            off, cell, procs = violation
            v = {"step": self.depth + off + 1, "cell": base + cell, "procs": procs}
            self.violations.append(v)
            if self.strict:
                raise ErewViolation(v["step"], v["cell"], procs)
        self.depth += steps
        self.work += work
        if steps:
            self._peak(peak)

    def _peak(self, active):
        if active > self.max_processors:
            self.max_processors = active
        if active > self.op_peak:
            self.op_peak = active

    def _check_small(self, procs, cells):
        owner = {}
        for p, c in zip(procs, cells):
            q = owner.setdefault(c, p)
            if q != p:
                self._check(np.asarray(procs, dtype=np.int64), np.asarray(cells, dtype=np.int64))
                return

    def _check(self, procs, cells):
        order = np.lexsort((procs, cells))
        c = cells[order]
        p = procs[order]
        same_cell = c[1:] == c[:-1]
        clash = same_cell & (p[1:] != p[:-1])
        if not clash.any():
            return
        for i in np.flatnonzero(clash)[:8]:
            cell = int(c[i])
            who = sorted(set(p[c == cell].tolist()))
            v = {"step": self.depth, "cell": cell, "procs": who}
            self.violations.append(v)
            if self.strict:
                raise ErewViolation(self.depth, cell, who)

    def snapshot(self):
        """Start measuring an operation; pass the result to :meth:`report_since`."""
        snap = (self.depth, self.work, len(self.violations), self.linkcut_depth, self.op_peak)
        self.op_peak = 0
        return snap

    def report_since(self, snap) -> StepReport:
        d, w, nv, lc, outer_peak = snap
        peak = self.op_peak
        self.op_peak = max(outer_peak, peak)
        return StepReport(self.depth - d, self.work - w, peak, list(self.violations[nv:]),
                          self.linkcut_depth - lc)

    # closure-driven execution -------------------------------------------
    def run_phases(self, program, memory: "SharedMemory | None" = None) -> StepReport:
        """Run ``program``: a list of phases, each a mapping processor -> closure.

        A closure receives a :class:`ProcessorView` and may read and write
        cells.  Writes become visible after the phase's barrier.
        """
        memory = memory if memory is not None else SharedMemory()
        snap = self.snapshot()
        for phase in program:
            if not phase:
                continue
            procs, cells, pending = [], [], []
            for pid in sorted(phase):
                view = ProcessorView(memory, pid)
                phase[pid](view)
                for cell in view.touched:
                    procs.append(pid)
                    cells.append(cell)
                pending.extend(view.writes)
                if not view.touched:
                    procs.append(pid)
                    cells.append(-1 - pid)
            self.step(procs, cells)
            for cell, value in pending:
                memory.store(cell, value, self.epoch)
        return self.report_since(snap)


class SharedMemory:
    """Sparse cell memory; every cell carries the epoch of its last write."""

    def __init__(self):
        self.cells = {}

    def store(self, cell, value, epoch):
        self.cells[cell] = (value, epoch)

    def load(self, cell, epoch=None):
        try:
            value, stamp = self.cells[cell]
        except KeyError:
            return UNINITIALIZED
        if epoch is not None and stamp != epoch:
            return UNINITIALIZED
        return value


class ProcessorView:
    def __init__(self, memory, pid):
        self.memory = memory
        self.pid = pid
        self.touched = []
        self.writes = []
        self.registers = {}

    def read(self, cell, epoch=None):
        self.touched.append(cell)
        return self.memory.load(cell, epoch)

    def write(self, cell, value):
        self.touched.append(cell)
        self.writes.append((cell, value))
