"""Worst-case dynamic minimum spanning forest.

* :class:`DynamicGraph` keeps the forest of a general graph through a
  degree-3 reduction over the chunked Euler-tour engine.
* :func:`pram_factory` swaps in the engine whose procedures run on a
  simulated EREW PRAM (:class:`PramMachine`).
* :class:`SparsificationTree` layers the engines over a sparsification tree.
"""
from ._backend import BACKEND
from .engine import MsfEngine, SurgeryCounter
from .graph import DynamicGraph, EdgeRecord, MsfDelta
from .keys import TotalWeight
from .pram.engine import PramEngine, pram_factory
from .pram.machine import ErewViolation, PramMachine, StepReport
from .sparsify import SparsificationTree

__all__ = [
    "BACKEND", "DynamicGraph", "EdgeRecord", "ErewViolation", "MsfDelta", "MsfEngine",
    "PramEngine", "PramMachine", "SparsificationTree", "StepReport", "SurgeryCounter",
    "TotalWeight", "pram_factory",
]
