"""Strict total order on edge weights.

Every edge of the reduced graph is identified inside the engines by a single
``int64`` *key* whose natural order is the total order used for the forest:
phantom (degree-gadget) edges first, then real edges by ``(weight, edge_id)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral

import numpy as np

ID_BITS = 22
MAX_EDGE_ID = (1 << ID_BITS) - 1
WEIGHT_LIMIT = 1 << 39
ABSENT = int(np.iinfo(np.int64).max)


@dataclass(frozen=True, order=False)
class TotalWeight:
    weight: int
    edge_id: int
    phantom: bool = False

    def sort_tuple(self):
        return (0 if self.phantom else 1, self.weight, self.edge_id)

    def __lt__(self, other):
        return self.sort_tuple() < other.sort_tuple()

    def __le__(self, other):
        return self.sort_tuple() <= other.sort_tuple()

    def __gt__(self, other):
        return self.sort_tuple() > other.sort_tuple()

    def __ge__(self, other):
        return self.sort_tuple() >= other.sort_tuple()

    def key(self) -> int:
        if self.phantom:
            return phantom_key(self.edge_id)
        return real_key(self.weight, self.edge_id)


def check_weight(w) -> int:
    if isinstance(w, bool) or not isinstance(w, Integral):
        raise TypeError("edge weights must be exact integers, got %r" % (w,))
    w = int(w)
    if not -WEIGHT_LIMIT < w < WEIGHT_LIMIT:
        raise ValueError("weight %d outside (-2**39, 2**39)" % w)
    return w


def real_key(weight: int, edge_id: int) -> int:
    if not 0 <= edge_id <= MAX_EDGE_ID:
        raise ValueError("edge id %d out of range" % edge_id)
    return ((weight + WEIGHT_LIMIT) << ID_BITS) | edge_id


def phantom_key(phantom_id: int) -> int:
    if not 0 <= phantom_id <= MAX_EDGE_ID:
        raise ValueError("phantom id %d out of range" % phantom_id)
    return phantom_id


def is_phantom(key: int) -> bool:
    return key <= MAX_EDGE_ID


def key_edge_id(key: int) -> int:
    return key & MAX_EDGE_ID


def key_weight(key: int) -> int:
    return (key >> ID_BITS) - WEIGHT_LIMIT


def decode(key: int) -> TotalWeight:
    if is_phantom(key):
        return TotalWeight(0, key, phantom=True)
    return TotalWeight(key_weight(key), key_edge_id(key))


def compare(a: TotalWeight, b: TotalWeight) -> int:
    """-1, 0 or 1 as ``a`` sorts before, equal to, or after ``b``."""
    ta, tb = a.sort_tuple(), b.sort_tuple()
    return (ta > tb) - (ta < tb)
