"""Least-squares scaling fits for benchmark results."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class Fit:
    """``y ~ a * x + b`` over the points; residuals are relative to ``y``."""

    a: float
    b: float
    xs: list
    ys: list
    residuals: list

    @property
    def max_rel_residual(self) -> float:
        return max(abs(r) for r in self.residuals)

    def predict(self, x):
        return self.a * x + self.b


def fit_affine(xs, ys, intercept: bool = True) -> Fit:
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    if len(set(xs)) < 3:
        raise ValueError("need at least three distinct sizes to fit a scaling law")
    if any(not math.isfinite(v) for v in xs + ys):
        raise ValueError("non-finite input")
    if intercept:
        A = np.column_stack([xs, np.ones(len(xs))])
        (a, b), *_ = np.linalg.lstsq(A, np.array(ys), rcond=None)
    else:
        a = float(np.dot(xs, ys) / np.dot(xs, xs))
        b = 0.0
    res = []
    for x, y in zip(xs, ys):
        if y == 0:
            raise ValueError("relative residual undefined for a zero observation")
        res.append((a * x + b - y) / y)
    return Fit(float(a), float(b), xs, ys, res)


@dataclass
class ScalingFit:
    depth: Fit        # median depth against log2 n
    processors: Fit   # peak processors against sqrt n (through the origin)


def fit_scaling(sizes, median_depths, peak_processors) -> ScalingFit:
    """Fit ``depth = a log2 n + b`` and ``processors = c sqrt n``."""
    if len(sizes) < 3:
        raise ValueError("need at least three sizes")
    lg = [math.log2(n) for n in sizes]
    sq = [math.sqrt(n) for n in sizes]
    return ScalingFit(fit_affine(lg, median_depths), fit_affine(sq, peak_processors, intercept=False))
