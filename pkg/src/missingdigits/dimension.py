"""Lower bounds for the l1-average Fourier dimension.

The l1 dimension of a measure is the largest s such that shifted
lattice sums of |lambda_hat| over balls of radius R grow like
R^(n - s).  For missing-digits measures everything reduces to the
periodized digit symbol

    f(theta) = sum_{i in {0..p-1}^n} |g((i + theta) / p)|,

because a window of p^k consecutive lattice residues telescopes through
k digit levels:

    sup_theta sum_{|xi|_inf < p^k} |lambda_hat(xi + theta)|
        <= 2 * (sup f)^k

(the symmetric window covers two length-p^k periods, each bounded by
(sup f)^k).  Consequently

    dim_l1 >= n - log(sup f) / log p,

and any certified upper bound for sup f gives a rigorous dimension
bound.  Since sum_i |g((i+theta)/p)|^2 = p^n / #D pointwise, f >= 1 and
the bound never exceeds log(#D)/log(p), the Hausdorff dimension.

Two closed-form relatives need no grid: for #D = p^n - t,

    crude:     n - log[(t p^n + (2 p log p)^n) / (p^n - t)] / log p,

valid for p >= 4, and for digit sets that are products of integer
intervals the sharper

    rectangle: dim_H - n * log(2 log p) / log p.

Both are pure log-arithmetic, so they apply to symbolic bases like
10^10000.  All logs are natural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .budget import EvalBudget, ensure_budget
from .errors import SymbolicBaseError
from .fourier import digit_symbol, fourier_transform_batch
from .measure import (
    MissingDigitsSpec,
    ProductMeasureSpec,
    Spec,
    as_product,
    log_int,
)


class BoundKind(enum.Enum):
    GRID_SUP = "GridSup"
    CRUDE = "Crude"
    RECTANGLE = "Rectangle"
    PRODUCT_SUM = "ProductSum"
    L2_EXACT = "L2Exact"


@dataclass(frozen=True)
class DimensionBound:
    """A dimension value with provenance: how it was computed and
    whether it is backed by a certificate (rigorous) or is merely an
    estimate."""

    value: float
    kind: BoundKind
    rigorous: bool
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("dimension bound must be finite")


def _clamp(value: float, ambient: float) -> tuple[float, bool]:
    if value < 0.0:
        return 0.0, True
    if value > ambient:
        return float(ambient), True
    return value, False


# ---------------------------------------------------------------- f(theta)


def f_theta(factor: MissingDigitsSpec, thetas, budget: EvalBudget | None = None) -> np.ndarray:
    """f(theta) = sum_i |g((i+theta)/p)| over the full residue grid
    i in {0..p-1}^n; thetas has shape (K, n) (or (K,) when n = 1)."""
    if not factor.is_enumerable():
        raise SymbolicBaseError("f(theta) needs an enumerable factor")
    thetas = np.asarray(thetas, dtype=np.float64)
    n = factor.ambient_dim
    if n == 1 and (thetas.ndim < 2 or thetas.shape[-1] != 1):
        thetas = thetas.reshape(-1, 1)
    elif thetas.ndim == 1:
        thetas = thetas[None, :]
    p = factor.p_int()
    grid = _residue_grid(p, n)
    bud = ensure_budget(budget)
    bud.charge(thetas.shape[0] * grid.shape[0], "f(theta) residues")
    out = np.zeros(thetas.shape[0], dtype=np.float64)
    # Chunk the residue axis so K x p^n never materializes at once.
    chunk = max(1, 8_000_000 // max(thetas.shape[0], 1))
    for start in range(0, grid.shape[0], chunk):
        part = grid[start: start + chunk]
        eta = (thetas[:, None, :] + part[None, :, :]) / p
        out += np.abs(digit_symbol(factor, eta)).sum(axis=1)
    return out


def _residue_grid(p: int, n: int) -> np.ndarray:
    if p ** n > 100_000_000:
        raise SymbolicBaseError(f"residue grid {p}^{n} is too large")
    axes = [np.arange(p, dtype=np.float64)] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def lipschitz_f(factor: MissingDigitsSpec) -> float:
    """Upper bound for the Lipschitz constant of f: each of the p^n
    terms moves at most 2 pi M / p per unit of theta."""
    p = factor.p_int()
    return p ** factor.ambient_dim * 2.0 * math.pi * factor.max_digit_norm() / p


@dataclass(frozen=True)
class SupF:
    """Grid estimate of sup f with a Lipschitz-certified upper bound."""

    sup_estimate: float
    certified_upper: float
    argmax: tuple
    grid_step: float
    lipschitz: float


def sup_f(
    factor: MissingDigitsSpec,
    h: float = 1e-4,
    budget: EvalBudget | None = None,
) -> SupF:
    """Maximize f over the period cube [0,1]^n on a step-h grid.

    certified_upper = grid max + L * h * sqrt(n) / 2 dominates the true
    sup because no point of the cube is farther than h sqrt(n)/2 from
    the grid.  In one dimension a golden-section pass around the ten
    best cells sharpens sup_estimate (never the certificate, which only
    relies on the grid and L).
    """
    if not (0 < h <= 0.5):
        raise ValueError("grid step must be in (0, 1/2]")
    n = factor.ambient_dim
    bud = ensure_budget(budget)
    axis = np.arange(0.0, 1.0 + h / 2, h)
    if n == 1:
        thetas = axis.reshape(-1, 1)
    else:
        mesh = np.meshgrid(*([axis] * n), indexing="ij")
        thetas = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = f_theta(factor, thetas, bud)
    order = np.argsort(vals)
    best = float(vals[order[-1]])
    arg = thetas[order[-1]]
    estimate = best
    if n == 1:
        for idx in order[-10:]:
            t0 = float(thetas[idx, 0])
            t, v = _golden_max(
                lambda s: float(f_theta(factor, np.array([s]), bud)[0]),
                max(0.0, t0 - h),
                min(1.0, t0 + h),
            )
            if v > estimate:
                estimate, arg = v, np.array([t])
    lip = lipschitz_f(factor)
    certified = best + lip * h * math.sqrt(n) / 2.0
    return SupF(
        sup_estimate=float(estimate),
        certified_upper=float(certified),
        argmax=tuple(float(a) for a in np.atleast_1d(arg)),
        grid_step=float(h),
        lipschitz=float(lip),
    )


def _golden_max(fun, a: float, b: float, iters: int = 60) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


# ---------------------------------------------------------------- bounds


def grid_lower_bound(
    spec: Spec,
    h: float = 1e-4,
    budget: EvalBudget | None = None,
) -> DimensionBound:
    """dim_l1 >= sum over factors of n_f - log(certified sup f)/log p_f."""
    prod = as_product(spec)
    bud = ensure_budget(budget)
    parts = []
    for factor in prod.factors:
        sup = sup_f(factor, h, bud)
        raw = factor.ambient_dim - math.log(sup.certified_upper) / factor.log_base()
        value, clamped = _clamp(raw, factor.ambient_dim)
        parts.append(
            DimensionBound(
                value=value,
                kind=BoundKind.GRID_SUP,
                rigorous=True,
                details={
                    "sup_estimate": sup.sup_estimate,
                    "certified_upper": sup.certified_upper,
                    "grid_step": sup.grid_step,
                    "lipschitz": sup.lipschitz,
                    "argmax": sup.argmax,
                    "clamped": clamped,
                },
            )
        )
    return product_bound(parts) if len(parts) > 1 else parts[0]


def crude_bound(spec: Spec) -> DimensionBound:
    """Closed-form bound from #D = p^n - t; needs p >= 4.  Pure
    log-arithmetic, hence available for symbolic bases."""
    prod = as_product(spec)
    parts = []
    for factor in prod.factors:
        parts.append(_crude_factor(factor))
    return product_bound(parts) if len(parts) > 1 else parts[0]


def _crude_factor(factor: MissingDigitsSpec) -> DimensionBound:
    log_p = factor.log_base()
    if log_p < math.log(4.0) - 1e-12:
        raise ValueError("crude bound requires base >= 4")
    n = factor.ambient_dim
    log_card = factor.log_digit_count()
    log_pn = n * log_p
    # t = p^n - #D in log space; ratio < 1 unless the digit set is full.
    ratio = math.exp(min(log_card - log_pn, 0.0))
    if ratio >= 1.0 - 1e-15:
        log_t = -math.inf  # full digit set, t = 0
    else:
        log_t = log_pn + math.log1p(-ratio)
    term_a = log_t + log_pn
    term_b = n * (math.log(2.0) + log_p + math.log(log_p))
    log_num = np.logaddexp(term_a, term_b)
    raw = n - (log_num - log_card) / log_p
    value, clamped = _clamp(raw, n)
    return DimensionBound(
        value=value,
        kind=BoundKind.CRUDE,
        rigorous=True,
        details={"log_t": log_t, "log_card": log_card, "clamped": clamped},
    )


def rectangle_bound(spec: Spec) -> DimensionBound:
    """dim_H - n log(2 log p)/log p for digit sets that are products of
    integer intervals; needs p >= 4.  Pure log-arithmetic."""
    prod = as_product(spec)
    parts = []
    for factor in prod.factors:
        if not factor.digits.is_rectangle():
            raise ValueError("rectangle bound needs a rectangle digit set")
        log_p = factor.log_base()
        if log_p < math.log(4.0) - 1e-12:
            raise ValueError("rectangle bound requires base >= 4")
        n = factor.ambient_dim
        penalty = n * math.log(2.0 * log_p) / log_p
        raw = factor.hausdorff_dim() - penalty
        value, clamped = _clamp(raw, n)
        parts.append(
            DimensionBound(
                value=value,
                kind=BoundKind.RECTANGLE,
                rigorous=True,
                details={"penalty": penalty, "clamped": clamped},
            )
        )
    return product_bound(parts) if len(parts) > 1 else parts[0]


def product_bound(parts) -> DimensionBound:
    """Sum of factor bounds; rigorous only when every part is."""
    parts = list(parts)
    if not parts:
        raise ValueError("product bound needs at least one part")
    return DimensionBound(
        value=sum(p.value for p in parts),
        kind=BoundKind.PRODUCT_SUM,
        rigorous=all(p.rigorous for p in parts),
        details={"parts": parts},
    )


def l2_dimension(spec: Spec) -> DimensionBound:
    """The L2-average dimension equals the Hausdorff dimension for
    these measures (they are Ahlfors-David regular)."""
    prod = as_product(spec)
    return DimensionBound(
        value=prod.hausdorff_dim(),
        kind=BoundKind.L2_EXACT,
        rigorous=True,
        details={},
    )


_METHOD_FUNS = {
    "grid": lambda spec, h, bud: grid_lower_bound(spec, h, bud),
    "crude": lambda spec, h, bud: crude_bound(spec),
    "rectangle": lambda spec, h, bud: rectangle_bound(spec),
}


def best_lower_bound(
    spec: Spec,
    h: float = 1e-4,
    budget: EvalBudget | None = None,
    methods: tuple = ("grid", "crude", "rectangle"),
) -> DimensionBound:
    """Best rigorous l1 lower bound per factor (max over applicable
    methods), summed over factors."""
    prod = as_product(spec)
    bud = ensure_budget(budget)
    parts = []
    for factor in prod.factors:
        candidates = []
        for name in methods:
            try:
                candidates.append(_METHOD_FUNS[name](factor, h, bud))
            except (ValueError, SymbolicBaseError):
                continue
        if not candidates:
            raise ValueError(f"no dimension bound applies to factor {factor}")
        candidates.sort(key=lambda b: b.value)
        parts.append(candidates[-1])
    return product_bound(parts) if len(parts) > 1 else parts[0]


# ---------------------------------------------------------------- S_k sums


def partial_sum_S_k(
    spec: Spec,
    theta,
    k: int,
    tol: float = 1e-9,
    budget: EvalBudget | None = None,
) -> float:
    """S_k(theta) = sum over integer xi with |xi|_inf < p^k of
    |lambda_hat(xi + theta)|.

    All factors must share one base p so the window is well defined.
    The symmetric window spans two length-p^k residue periods, so
    S_k <= 2 (sup f)^k; one-sided windows obey the bare (sup f)^k.
    """
    prod = as_product(spec)
    bases = {f.p_int() for f in prod.factors}
    if len(bases) != 1:
        raise ValueError("S_k needs a single common base across factors")
    if k < 0:
        raise ValueError("k must be >= 0")
    p = bases.pop()
    n = prod.total_dim
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if theta.shape != (n,):
        raise ValueError(f"theta must have shape ({n},)")
    half = p ** k
    axis = np.arange(-half + 1, half, dtype=np.float64)
    if n == 1:
        lattice = axis.reshape(-1, 1)
    else:
        if len(axis) ** n > 50_000_000:
            raise ValueError("S_k lattice too large")
        mesh = np.meshgrid(*([axis] * n), indexing="ij")
        lattice = np.stack([m.ravel() for m in mesh], axis=-1)
    bud = ensure_budget(budget)
    values, _ = fourier_transform_batch(spec, lattice + theta[None, :], tol, bud)
    return float(np.abs(values).sum())
