"""Projections of missing-digits measures and their convergence diagnostics.

Two projection families are estimated for planar (total dimension 2)
measures.  The radial projection from a viewpoint x outside the unit
square pushes the measure onto the circle of directions; its density is
the weak limit of tube densities

    f_delta(theta) = lambda(T) / delta^(n-1),

where T is the tube of transverse half-width delta around the ray from
x in direction theta.  Tube masses come from cylinder enclosures, so
f_delta is computed as a rigorous interval and reported at the
midpoint.  The linear projection onto a unit direction theta has
Fourier transform t -> lambda_hat(t * theta); its density is recovered
by the inverse transform

    density(u) = integral_{-T}^{T} lambda_hat(t theta) e^{2 pi i u t} dt

whenever that integral converges absolutely.  For singular measures it
may not: the one-dimensional ray integral of |lambda_hat| can keep
growing (coordinate directions of product measures are the canonical
offenders), and every estimator here therefore carries a shell-growth
diagnosis.  Shell totals of the relevant |lambda_hat| sums are reported
together with their log-slopes; when the last three slopes are all
nonnegative the result is flagged NonConvergent rather than silently
averaged.

Monte-Carlo estimators (seeded, chunked, reproducible independent of
worker count) provide cross-checks for both families, and annulus
stripe sums detect the exceptional directions along which the lattice
mass of |lambda_hat| refuses to decay.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .budget import EvalBudget, ensure_budget
from .cylinders import TubeSpec, cylinder_mass
from .errors import ConfigError
from .fourier import fourier_transform_batch
from .measure import Spec, as_product, sample, total_dim

# Fixed step for the inverse-transform quadrature along a ray.  The
# quadrature aliases the density with period 1/step; the projected
# support of a measure on [0,1]^2 spans at most sqrt(2), so 1/4 leaves
# a comfortable guard band around any sensible u-grid.
LINEAR_QUADRATURE_STEP = 0.25

# Fraction of a tube half-width (or bandwidth) that sampling-depth
# truncation is allowed to perturb a Monte-Carlo point by.
_MC_DEPTH_SLACK = 8.0

_UNIT_SQUARE_CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])

_MC_CHUNK = 1 << 17


class ProfileAxis(enum.Enum):
    ANGLE_ON_SPHERE = "AngleOnSphere"
    OFFSET_ON_LINE = "OffsetOnLine"


class ProfileMethod(enum.Enum):
    TUBE_COUNT = "TubeCount"
    MONTE_CARLO = "MonteCarlo"
    FOURIER_INVERSION = "FourierInversion"


@dataclass(frozen=True)
class DensityProfile:
    """A sampled density on a 1-D grid: angles on the circle for radial
    projections, offsets along a line for linear ones.

    `values` are nonnegative for counting estimators; Fourier inversion
    may dip below zero (truncation ripple), which is permitted and the
    minimum recorded by the producer in `metadata`.  `metadata` also
    carries resolution, truncation, seed and diagnostic information and
    never participates in equality."""

    axis: ProfileAxis
    grid: np.ndarray
    values: np.ndarray
    method: ProfileMethod
    metadata: dict = field(default_factory=dict, compare=False)

    def __init__(self, axis, grid, values, method, metadata=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ConfigError("profile grid and values must be equal-length 1-D")
        if not np.all(np.diff(grid) > 0):
            raise ConfigError("profile grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ConfigError("profile values must be finite")
        if method is not ProfileMethod.FOURIER_INVERSION and values.min() < 0:
            raise ConfigError("counting profiles cannot be negative")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "method", method)
        object.__setattr__(self, "metadata", dict(metadata or {}))

    @property
    def mass(self) -> float:
        """Trapezoidal integral of the profile over its grid."""
        return float(np.trapezoid(self.values, self.grid))

    @property
    def flags(self) -> tuple:
        return tuple(self.metadata.get("flags", ()))


def profile_l1_distance(a: DensityProfile, b: DensityProfile) -> float:
    """L1 distance between two profiles on a's grid (b is linearly
    interpolated, zero outside its own grid)."""
    other = np.interp(a.grid, b.grid, b.values, left=0.0, right=0.0)
    return float(np.trapezoid(np.abs(a.values - other), a.grid))


# ------------------------------------------------------------ shell slopes


@dataclass(frozen=True)
class LatticeDiagnostics:
    """A partial sum of |lambda_hat| weights together with its
    geometric-shell decomposition.  Shell k collects radii in
    (base^(k-1), base^k] (shell 0 takes [0, 1]); `dyadic_slopes` are the
    base-log ratios of consecutive shell totals.  Nonnegative slopes
    across the last three shells mean the partial sums are still
    growing: `non_convergent` is then set."""

    partial: float
    shell_totals: tuple
    dyadic_slopes: tuple
    shell_base: int = 2

    @property
    def non_convergent(self) -> bool:
        return _still_growing(self.shell_totals, self.dyadic_slopes)


def _still_growing(totals, slopes) -> bool:
    """Nonnegative slopes across the last three shells, with a last
    shell that actually carries weight: exactly-vanishing tail shells
    (their slopes are floored to 0) mean the sum has converged, not
    that it keeps growing."""
    tail = tuple(slopes)[-3:]
    if len(tail) < 3 or any(s < 0.0 for s in tail):
        return False
    totals = tuple(totals)
    top = max(totals) if totals else 0.0
    return totals[-1] > 1e-12 * top


def _shell_diagnostics(radii, weights, base=2, n_shells=None):
    radii = np.asarray(radii, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if n_shells is None:
        top = float(radii.max(initial=0.0))
        n_shells = 1 + max(0, math.ceil(math.log(max(top, 1.0)) / math.log(base) - 1e-12))
    edges = float(base) ** np.arange(n_shells)
    idx = np.searchsorted(edges, radii, side="left")
    totals = np.bincount(idx, weights=weights, minlength=n_shells)[:n_shells]
    # Slopes of exactly-vanishing shells (e.g. Lebesgue off the zero
    # frequency) are floored instead of -inf so they serialize cleanly.
    floor = max(totals.max(initial=0.0), 1.0) * 1e-30
    logs = np.log(np.maximum(totals, floor)) / math.log(base)
    slopes = np.diff(logs)
    return tuple(float(t) for t in totals), tuple(float(s) for s in slopes)


# -------------------------------------------------------------- radial side


def _viewing_sector(x: np.ndarray) -> tuple:
    """Angular interval (a span < pi) subtended by the unit square from
    the outside viewpoint x, unwrapped so lo < hi even across the +-pi
    cut."""
    angles = np.arctan2(_UNIT_SQUARE_CORNERS[:, 1] - x[1], _UNIT_SQUARE_CORNERS[:, 0] - x[0])
    if angles.max() - angles.min() > math.pi:
        angles = np.where(angles < 0, angles + 2 * math.pi, angles)
    return float(angles.min()), float(angles.max())


def _square_clearance(x: np.ndarray) -> float:
    gaps = np.maximum(np.maximum(-x, x - 1.0), 0.0)
    return float(np.hypot(gaps[0], gaps[1]))


def _corner_distances(x: np.ndarray) -> np.ndarray:
    return np.hypot(*(_UNIT_SQUARE_CORNERS - x).T)


def _require_plane(spec: Spec, what: str):
    if total_dim(spec) != 2:
        raise ConfigError(f"{what} requires a measure of total dimension 2")


def _enumeration_depth(spec: Spec, scale: float) -> int:
    """Smallest cylinder depth whose cells are finer than scale/4 in
    every factor."""
    prod = as_product(spec)
    return max(
        math.ceil(math.log(4.0 / scale) / math.log(f.p_int())) for f in prod.factors
    )


def radial_tube_density(spec: Spec, tube: TubeSpec, depth: int,
                        budget: EvalBudget | None = None) -> tuple:
    """Enclosure [lower, upper] of f_delta(theta) = lambda(tube)/delta
    for one tube of transverse half-width delta = tube.half_width.

    The viewpoint must clear the unit square by at least delta, so the
    tube meets the support only forward along the ray."""
    _require_plane(spec, "radial_tube_density")
    x = np.asarray(tube.x, dtype=float)
    if _square_clearance(x) < tube.half_width:
        raise ConfigError(
            "viewpoint must clear the unit square by at least the tube half-width"
        )
    lo, hi = cylinder_mass(spec, tube, depth, budget)
    norm = tube.half_width ** (total_dim(spec) - 1)
    return lo / norm, hi / norm


def radial_tube_profile(spec: Spec, x, delta: float, angle_grid_count: int,
                        depth: int | None = None,
                        budget: EvalBudget | None = None,
                        workers: int = 1) -> DensityProfile:
    """Tube-density profile theta -> f_delta(theta) at enclosure
    midpoints, over the viewing sector of the unit square padded by two
    tube windows.  Lower/upper enclosure curves ride along in the
    metadata."""
    _require_plane(spec, "radial_tube_profile")
    x = np.asarray(x, dtype=float)
    if delta <= 0:
        raise ConfigError("tube half-width must be positive")
    if angle_grid_count < 2:
        raise ConfigError("angle grid needs at least two points")
    if depth is None:
        depth = _enumeration_depth(spec, delta)
    bud = ensure_budget(budget)
    lo_a, hi_a = _viewing_sector(x)
    r_min = _corner_distances(x).min()
    pad = 2.0 * delta / r_min
    grid = np.linspace(lo_a - pad, hi_a + pad, angle_grid_count)

    def block(indices):
        out = np.empty((len(indices), 2))
        for row, i in enumerate(indices):
            tube = TubeSpec(x, (math.cos(grid[i]), math.sin(grid[i])), delta)
            out[row] = cylinder_mass(spec, tube, depth, bud)
        return out

    chunks = [range(s, min(s + 64, angle_grid_count)) for s in range(0, angle_grid_count, 64)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, chunks))
    else:
        parts = [block(c) for c in chunks]
    bounds = np.concatenate(parts, axis=0) / delta
    mid = bounds.mean(axis=1)
    meta = {
        "delta": delta,
        "depth": depth,
        "sector": (lo_a, hi_a),
        "viewpoint": tuple(x),
        "lower": bounds[:, 0],
        "upper": bounds[:, 1],
    }
    return DensityProfile(ProfileAxis.ANGLE_ON_SPHERE, grid, mid,
                          ProfileMethod.TUBE_COUNT, meta)


def radial_l2_norm(spec: Spec, x, delta: float, angle_grid_count: int,
                   depth: int | None = None,
                   budget: EvalBudget | None = None,
                   workers: int = 1) -> float:
    """Trapezoidal quadrature of f_delta(theta)^2 over the viewing
    sector, f_delta taken at tube-enclosure midpoints.  Bounded in
    delta exactly when the radial pushforward has an L^2 density;
    diverging like 1/delta for an atom."""
    profile = radial_tube_profile(spec, x, delta, angle_grid_count, depth, budget, workers)
    return float(np.trapezoid(profile.values ** 2, profile.grid))


def tube_mass_mc(spec: Spec, tube: TubeSpec, samples: int, seed: int = 0,
                 depth: int | None = None,
                 budget: EvalBudget | None = None) -> tuple:
    """Monte-Carlo estimate of lambda(tube) with its binomial standard
    error; the seeded cross-check for cylinder enclosures.

    Sampled points are depth-m digit truncations, displaced from the
    law by up to the cylinder diameter; four levels beyond the tube
    scale keep that bias below the standard error at typical sample
    counts."""
    _require_plane(spec, "tube_mass_mc")
    if depth is None:
        depth = _enumeration_depth(spec, tube.half_width) + 4
    pts = sample(spec, depth, samples, seed=seed, budget=budget)
    v = pts - np.asarray(tube.x, dtype=float)
    along = v @ np.asarray(tube.theta)
    across = v @ np.asarray(tube.perp())
    inside = (np.abs(along) <= tube.half_length) & (np.abs(across) <= tube.half_width)
    p_hat = float(inside.mean())
    sigma = math.sqrt(max(p_hat * (1.0 - p_hat), 1.0 / samples) / samples)
    return p_hat, sigma


def _mc_offsets(spec: Spec, depth: int, samples: int, seed, project, budget,
                workers: int = 1):
    """Chunked, seed-stable sampling: chunk i always draws with seed
    (seed, i) regardless of how chunks are scheduled across workers, so
    results do not depend on worker count."""
    starts = list(range(0, samples, _MC_CHUNK))

    def draw(i):
        count = min(_MC_CHUNK, samples - starts[i])
        pts = sample(spec, depth, count, seed=(seed, i), budget=budget)
        return project(pts)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(draw, range(len(starts))))
    else:
        outs = [draw(i) for i in range(len(starts))]
    return np.concatenate(outs)


def _histogram_profile(offsets, window, bandwidth, samples):
    nbins = max(2, math.ceil((window[1] - window[0]) / bandwidth))
    edges = np.linspace(window[0], window[1], nbins + 1)
    counts, _ = np.histogram(offsets, bins=edges)
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    values = counts / (samples * width)
    coverage = counts.sum() / samples
    return centers, values, float(coverage), width


def radial_density_mc(spec: Spec, x, samples: int, bandwidth: float, seed: int = 0,
                      budget: EvalBudget | None = None,
                      workers: int = 1) -> DensityProfile:
    """Histogram estimate of the radial pushforward density on the
    circle: sampled points y are mapped to the angle of (y - x) and
    binned at the given angular bandwidth.  Values integrate to one
    over the window (exactly, as a step function) whenever the window
    covers the image; the covered fraction is recorded."""
    _require_plane(spec, "radial_density_mc")
    x = np.asarray(x, dtype=float)
    if _square_clearance(x) <= 0.0:
        raise ConfigError("viewpoint must lie outside the unit square")
    if bandwidth <= 0:
        raise ConfigError("bandwidth must be positive")
    r_min = _corner_distances(x).min()
    depth = _enumeration_depth(spec, bandwidth * r_min * 4.0 / _MC_DEPTH_SLACK)
    lo_a, hi_a = _viewing_sector(x)
    window = (lo_a - 3 * bandwidth, hi_a + 3 * bandwidth)

    def project(pts):
        v = pts - x
        ang = np.arctan2(v[:, 1], v[:, 0])
        if window[1] > math.pi:  # sector was unwrapped across the cut
            ang = np.where(ang < 0, ang + 2 * math.pi, ang)
        return ang

    offsets = _mc_offsets(spec, depth, samples, seed, project, budget, workers)
    grid, values, coverage, width = _histogram_profile(offsets, window, bandwidth, samples)
    meta = {
        "samples": samples,
        "bandwidth": bandwidth,
        "bin_width": width,
        "seed": seed,
        "depth": depth,
        "rng": "PCG64",
        "window": window,
        "coverage": coverage,
        "viewpoint": tuple(x),
        "flags": [] if coverage >= 1.0 else ["WindowClipped"],
    }
    return DensityProfile(ProfileAxis.ANGLE_ON_SPHERE, grid, values,
                          ProfileMethod.MONTE_CARLO, meta)


def linear_density_mc(spec: Spec, theta, samples: int, bandwidth: float, seed: int = 0,
                      budget: EvalBudget | None = None,
                      workers: int = 1) -> DensityProfile:
    """Histogram estimate of the density of the projection
    y -> (y, theta): the Monte-Carlo cross-check for linear_density."""
    _require_plane(spec, "linear_density_mc")
    theta = _unit_direction(theta)
    if bandwidth <= 0:
        raise ConfigError("bandwidth must be positive")
    depth = _enumeration_depth(spec, bandwidth * 4.0 / _MC_DEPTH_SLACK)
    proj_corners = _UNIT_SQUARE_CORNERS @ theta
    window = (float(proj_corners.min()) - 3 * bandwidth,
              float(proj_corners.max()) + 3 * bandwidth)
    offsets = _mc_offsets(spec, depth, samples, seed,
                          lambda pts: pts @ theta, budget, workers)
    grid, values, coverage, width = _histogram_profile(offsets, window, bandwidth, samples)
    meta = {
        "samples": samples,
        "bandwidth": bandwidth,
        "bin_width": width,
        "seed": seed,
        "depth": depth,
        "rng": "PCG64",
        "window": window,
        "coverage": coverage,
        "direction": tuple(theta),
        "flags": [] if coverage >= 1.0 else ["WindowClipped"],
    }
    return DensityProfile(ProfileAxis.OFFSET_ON_LINE, grid, values,
                          ProfileMethod.MONTE_CARLO, meta)


# -------------------------------------------------------------- linear side


def _unit_direction(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (2,):
        raise ConfigError("direction must be a 2-vector")
    norm = float(np.hypot(theta[0], theta[1]))
    if norm == 0.0:
        raise ConfigError("direction must be nonzero")
    return theta / norm


def _common_shell_base(spec: Spec) -> int:
    """Shells aligned with the measure's own base stay in phase with
    its self-similarity lambda_hat(p xi) = g(xi) lambda_hat(xi); mixed
    bases fall back to dyadic shells."""
    bases = {f.p_int() for f in as_product(spec).factors}
    return bases.pop() if len(bases) == 1 else 2


def linear_density(spec: Spec, theta, u_grid, T_max: float, tol: float = 1e-9,
                   budget: EvalBudget | None = None) -> DensityProfile:
    """Density of the projection y -> (y, theta) by inverse-transform
    quadrature over t in [-T_max, T_max] at step LINEAR_QUADRATURE_STEP.

    The real part is returned on u_grid; the imaginary part must cancel
    by conjugate symmetry and its trapezoidal L1 residue is recorded
    (flag ImagResidue past 10*tol).  Shell totals of |lambda_hat(t
    theta)| dt diagnose absolute convergence: nonnegative slopes over
    the last three shells flag the profile NonConvergent (coordinate
    directions of product measures are the canonical case)."""
    _require_plane(spec, "linear_density")
    theta = _unit_direction(theta)
    u_grid = np.asarray(u_grid, dtype=float)
    if T_max <= 1:
        raise ConfigError("T_max must exceed 1")
    dt = LINEAR_QUADRATURE_STEP
    steps = int(round(T_max / dt))
    t = np.arange(-steps, steps + 1) * dt
    values, _ = fourier_transform_batch(spec, t[:, None] * theta[None, :], tol, budget)

    density = np.empty(u_grid.shape, dtype=complex)
    weighted = values * dt
    for s in range(0, u_grid.size, 512):
        block = u_grid[s:s + 512]
        density[s:s + 512] = np.exp(2j * math.pi * np.outer(block, t)) @ weighted
    real = density.real
    imag_l1 = float(np.trapezoid(np.abs(density.imag), u_grid))
    mass = float(np.trapezoid(real, u_grid))

    base = _common_shell_base(spec)
    totals, slopes = _shell_diagnostics(np.abs(t), np.abs(values) * dt, base=base)
    flags = []
    if _still_growing(totals, slopes):
        flags.append("NonConvergent")
    if imag_l1 > 10.0 * tol:
        flags.append("ImagResidue")
    meta = {
        "direction": tuple(theta),
        "T_max": T_max,
        "quadrature_step": dt,
        "tol": tol,
        "mass": mass,
        "imag_l1": imag_l1,
        "shell_base": base,
        "shell_totals": totals,
        "shell_slopes": slopes,
        "min_value": float(real.min()),
        "flags": flags,
    }
    return DensityProfile(ProfileAxis.OFFSET_ON_LINE, u_grid, real,
                          ProfileMethod.FOURIER_INVERSION, meta)


# ------------------------------------------------------------ lattice sums


def _lattice_ball_diagnostics(spec, weight_of, R_max, tol, budget, base=2):
    """Shared accumulation of weight_of(|lambda_hat|, |xi|) over the
    lattice points with |xi| <= R_max, in row chunks."""
    bud = ensure_budget(budget)
    n = total_dim(spec)
    n_shells = 1 + math.ceil(math.log(R_max) / math.log(base))
    totals = np.zeros(n_shells)
    R = int(math.floor(R_max))
    if n == 1:
        chunks = [np.arange(-R, R + 1)[:, None].astype(float)]
    else:
        axis = np.arange(-R, R + 1)

        def rows():
            for s in range(0, axis.size, 256):
                a = axis[s:s + 256]
                block = np.stack(np.meshgrid(a, axis, indexing="ij"), axis=-1).reshape(-1, 2)
                keep = (block ** 2).sum(axis=1) <= R_max * R_max
                yield block[keep].astype(float)

        chunks = rows()
    partial = 0.0
    for block in chunks:
        if block.size == 0:
            continue
        values, _ = fourier_transform_batch(spec, block, tol, bud)
        norms = np.sqrt((block ** 2).sum(axis=1))
        w = weight_of(np.abs(values), norms)
        partial += float(w.sum())
        t, _ = _shell_diagnostics(norms, w, base=base, n_shells=n_shells)
        totals += np.asarray(t)
    floor = max(totals.max(initial=0.0), 1.0) * 1e-30
    logs = np.log(np.maximum(totals, floor)) / math.log(base)
    slopes = tuple(float(s) for s in np.diff(logs))
    return LatticeDiagnostics(partial, tuple(float(v) for v in totals), slopes, base)


def lp_criterion_integral(spec: Spec, p_exp: int, R_max: int, tol: float = 1e-9,
                          budget: EvalBudget | None = None) -> LatticeDiagnostics:
    """Unit-lattice quadrature of |lambda_hat(xi)| |xi|^(-1/p_exp) over
    |xi| <= R_max, with dyadic shell totals and slopes.

    Convergence of this sum as R_max grows is the L^p criterion for the
    projected densities; negative slopes across the last shells signal
    the geometric decay that makes it converge.  The singular weight is
    capped at 1 inside the unit ball (the origin cell's exact integral
    is finite and the same for every probability measure)."""
    if int(p_exp) != p_exp or p_exp < 1:
        raise ConfigError("p_exp must be an integer >= 1")
    R_max = int(R_max)
    if R_max < 2 or R_max & (R_max - 1):
        raise ConfigError("R_max must be a power of 2")
    return _lattice_ball_diagnostics(
        spec, lambda a, r: a * np.maximum(r, 1.0) ** (-1.0 / p_exp), R_max, tol, budget
    )


def stripe_integral(spec: Spec, theta, R: float, tol: float = 1e-9,
                    budget: EvalBudget | None = None) -> float:
    """Sum of |lambda_hat| over the lattice points of the annulus
    R <= |xi| <= 2R whose directions are nearly orthogonal to theta:
    |(theta, xi/|xi|)| <= 1/R."""
    _require_plane(spec, "stripe_integral")
    if R < 2:
        raise ConfigError("stripe annulus needs R >= 2")
    theta = _unit_direction(theta)
    pts, norms = _annulus_points(R)
    keep = np.abs(pts @ theta) <= norms / R
    if not keep.any():
        return 0.0
    values, _ = fourier_transform_batch(spec, pts[keep], tol, budget)
    return float(np.abs(values).sum())


def _annulus_points(R: float):
    top = int(math.floor(2 * R))
    axis = np.arange(-top, top + 1)
    grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    norms = np.hypot(grid[:, 0], grid[:, 1])
    keep = (norms >= R) & (norms <= 2 * R)
    return grid[keep].astype(float), norms[keep]


def stripe_scan(spec: Spec, R: float, angle_count: int, tol: float = 1e-9,
                budget: EvalBudget | None = None, workers: int = 1):
    """stripe_integral at angle_count directions spread over a half
    turn (stripes are symmetric under theta -> -theta), evaluating
    |lambda_hat| once over the whole annulus.  Returns (angles,
    values)."""
    _require_plane(spec, "stripe_scan")
    if R < 2:
        raise ConfigError("stripe annulus needs R >= 2")
    if angle_count < 1:
        raise ConfigError("angle_count must be positive")
    pts, norms = _annulus_points(R)
    values, _ = fourier_transform_batch(spec, pts, tol, budget)
    mags = np.abs(values)
    angles = np.arange(angle_count) * math.pi / angle_count
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)

    def block(rows):
        # |(theta_i, xi)| <= |xi|/R for each direction in the block
        inner = np.abs(pts @ dirs[rows].T)
        return (mags[:, None] * (inner <= (norms / R)[:, None])).sum(axis=0)

    chunks = [slice(s, min(s + 32, angle_count)) for s in range(0, angle_count, 32)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, chunks))
    else:
        parts = [block(c) for c in chunks]
    return angles, np.concatenate(parts)


def exceptional_directions(spec: Spec, R: float, eps: float, s1: float,
                           angle_count: int, tol: float = 1e-9,
                           budget: EvalBudget | None = None,
                           workers: int = 1) -> list:
    """Grid directions whose annulus-stripe sum reaches the exceptional
    threshold R^(n - 1 - s1 + 2 eps), s1 being a certified l1-dimension
    lower bound.  For measures with decaying generic directions this
    isolates the coordinate-like rays along which |lambda_hat| keeps
    its mass."""
    if eps <= 0:
        raise ConfigError("eps must be positive")
    n = total_dim(spec)
    angles, values = stripe_scan(spec, R, angle_count, tol, budget, workers)
    threshold = float(R) ** (n - 1 - s1 + 2 * eps)
    out = []
    for a, v in zip(angles, values):
        if v >= threshold:
            out.append((math.cos(a), math.sin(a)))
    return out


def slab_integral(spec: Spec, theta, T_max: float, tol: float = 1e-9,
                  budget: EvalBudget | None = None) -> LatticeDiagnostics:
    """Lattice sum of |lambda_hat| over the slab of frequencies nearly
    orthogonal to theta, {|(theta, xi)| <= 1/200, |xi| <= T_max}, with
    dyadic growth diagnosis.  The slab is the frequency support
    relevant to the projection onto theta: a convergent slab sum gives
    the projected density a continuous version, while coordinate
    directions of product measures make it diverge."""
    _require_plane(spec, "slab_integral")
    theta = _unit_direction(theta)
    if T_max < 2:
        raise ConfigError("T_max must be at least 2")
    T = int(math.floor(T_max))
    # The slab half-width 1/200 is < 1/2, so along the thicker axis each
    # column holds at most one candidate lattice row.
    if abs(theta[1]) >= abs(theta[0]):
        lead, other = 0, 1
    else:
        lead, other = 1, 0
    cols = np.arange(-T, T + 1)
    rows = np.round(-theta[lead] * cols / theta[other]).astype(np.int64)
    pts = np.empty((cols.size, 2))
    pts[:, lead] = cols
    pts[:, other] = rows
    keep = (np.abs(pts @ theta) <= 1.0 / 200.0) & ((pts ** 2).sum(axis=1) <= T_max * T_max)
    pts = pts[keep]
    values, _ = fourier_transform_batch(spec, pts, tol, budget)
    mags = np.abs(values)
    norms = np.hypot(pts[:, 0], pts[:, 1])
    n_shells = 1 + max(1, math.ceil(math.log(max(T_max, 2.0)) / math.log(2)))
    totals, slopes = _shell_diagnostics(norms, mags, base=2, n_shells=n_shells)
    return LatticeDiagnostics(float(mags.sum()), totals, slopes, 2)
