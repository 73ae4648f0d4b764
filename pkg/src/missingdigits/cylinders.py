"""Rigorous cylinder-counting enclosures for missing-digits measures.

A depth-m cylinder of a product spec is a closed box whose factor-f side
is p_f^-m; the measure gives every depth-m cylinder the same mass
prod_f (#D_f)^-m.  For a closed region G the mass lambda(G) is bracketed
by classifying cylinders against G:

    lower = sum of masses of cylinders contained in G,
    upper = sum of masses of cylinders meeting G,

with boundary-touching cylinders counting toward the upper bound only.
Refinement is breadth-first: boxes decided at a coarse depth leave the
frontier early, so work concentrates on the boundary of G.

Regions are axis-aligned boxes or two-dimensional tubes (rotated
rectangles); classification is exact separating-axis arithmetic, fully
vectorized over the frontier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budget import EvalBudget, ensure_budget
from .measure import Spec, as_product

OUTSIDE, INSIDE, STRADDLE = 0, 1, 2


@dataclass(frozen=True)
class AxisBox:
    """Closed axis-aligned box prod [lo_i, hi_i]."""

    lo: tuple
    hi: tuple

    def __init__(self, lo, hi):
        lo = tuple(float(v) for v in np.atleast_1d(lo))
        hi = tuple(float(v) for v in np.atleast_1d(hi))
        if len(lo) != len(hi):
            raise ValueError("box corners must share a dimension")
        if any(h < l for l, h in zip(lo, hi)):
            raise ValueError("box has negative side")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def classify(self, lows: np.ndarray, sides: np.ndarray) -> np.ndarray:
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        highs = lows + sides
        inside = np.logical_and(lows >= lo, highs <= hi).all(axis=1)
        outside = np.logical_or(lows > hi, highs < lo).any(axis=1)
        out = np.full(lows.shape[0], STRADDLE, dtype=np.int8)
        out[outside] = OUTSIDE
        out[inside] = INSIDE
        return out


@dataclass(frozen=True)
class TubeSpec:
    """Closed tube {y : |(y-x).theta| <= half_length, |(y-x).perp| <=
    half_width} in the plane: a rectangle of half-sides (half_length,
    half_width) rotated to direction theta and centered at the viewpoint
    x.  half_length defaults to |x| + sqrt(2), long enough to cover the
    unit square from any outside viewpoint."""

    x: tuple
    theta: tuple
    half_width: float
    half_length: float

    def __init__(self, x, theta, half_width, half_length=None):
        x = tuple(float(v) for v in np.atleast_1d(x))
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if len(x) != 2 or theta.shape != (2,):
            raise ValueError("tubes are two-dimensional")
        norm = float(np.hypot(theta[0], theta[1]))
        if norm == 0.0:
            raise ValueError("tube direction must be nonzero")
        if half_length is None:
            half_length = float(np.hypot(x[0], x[1])) + math.sqrt(2.0)
        if half_width <= 0 or half_length <= 0:
            raise ValueError("tube half-width and half-length must be positive")
        if half_width > half_length:
            raise ValueError("tube half-width cannot exceed its half-length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "theta", (theta[0] / norm, theta[1] / norm))
        object.__setattr__(self, "half_width", float(half_width))
        object.__setattr__(self, "half_length", float(half_length))

    @property
    def dim(self) -> int:
        return 2

    def perp(self) -> tuple:
        return (-self.theta[1], self.theta[0])

    def classify(self, lows: np.ndarray, sides: np.ndarray) -> np.ndarray:
        t = np.asarray(self.theta)
        w = np.asarray(self.perp())
        x = np.asarray(self.x)
        L, d = self.half_length, self.half_width
        half = sides / 2.0
        centers = lows + half - x

        proj_t = centers @ t
        proj_w = centers @ w
        rad_t = half @ np.abs(t)
        rad_w = half @ np.abs(w)

        inside = (np.abs(proj_t) + rad_t <= L) & (np.abs(proj_w) + rad_w <= d)
        # Separating axes: the tube's own two axes and the box axes.
        sep = (np.abs(proj_t) - rad_t > L) | (np.abs(proj_w) - rad_w > d)
        tube_ext = L * np.abs(t) + d * np.abs(w)
        sep |= (np.abs(centers) - half > tube_ext).any(axis=1)

        out = np.full(lows.shape[0], STRADDLE, dtype=np.int8)
        out[sep] = OUTSIDE
        out[inside] = INSIDE
        return out


Region = AxisBox | TubeSpec


def cylinder_mass(
    spec: Spec,
    region: Region,
    depth: int,
    budget: EvalBudget | None = None,
) -> tuple[float, float]:
    """Enclosure [lower, upper] of lambda(region) from depth-`depth`
    cylinder counting.

    The enclosure is exact for the stated depth: lower counts cylinders
    whose closed box lies in the region, upper additionally counts every
    straddling box.  Enclosures at greater depth are nested within
    shallower ones.
    """
    prod = as_product(spec)
    n = prod.total_dim
    if region.dim != n:
        raise ValueError(f"region dimension {region.dim} != spec dimension {n}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    bud = ensure_budget(budget)

    mats = [f.digit_matrix().astype(np.float64) for f in prod.factors]
    bases = [float(f.p_int()) for f in prod.factors]
    counts = [m.shape[0] for m in mats]
    slices = prod.factor_slices()

    lows = np.zeros((1, n), dtype=np.float64)
    lower = 0.0
    upper = 0.0
    for level in range(depth + 1):
        sides = np.empty(n, dtype=np.float64)
        for base, sl in zip(bases, slices):
            sides[sl] = base ** -level
        bud.charge(lows.shape[0], "cylinder classifications")
        codes = region.classify(lows, sides)
        mass = 1.0
        for c in counts:
            mass *= float(c) ** -level
        n_inside = int((codes == INSIDE).sum())
        lower += n_inside * mass
        upper += n_inside * mass
        undecided = lows[codes == STRADDLE]
        if level == depth or undecided.shape[0] == 0:
            upper += undecided.shape[0] * mass
            break
        # Expand straddling boxes into their digit children.
        offsets = np.zeros((1, n), dtype=np.float64)
        for mat, base, sl in zip(mats, bases, slices):
            step = base ** -(level + 1)
            block = mat * step
            reps = offsets.shape[0]
            offsets = np.repeat(offsets, block.shape[0], axis=0)
            offsets[:, sl] += np.tile(block, (reps, 1))
        bud.charge(undecided.shape[0] * offsets.shape[0], "cylinder expansions")
        lows = (undecided[:, None, :] + offsets[None, :, :]).reshape(-1, n)
    return lower, upper
