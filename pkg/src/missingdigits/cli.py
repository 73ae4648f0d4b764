"""Command-line front end: one binary, subcommands for every operation.

Output discipline: each run prints exactly one JSON document to stdout
holding a run manifest (subcommand, resolved configuration, seed,
versions, wall time, output paths) plus the result; `--csv PATH`
additionally writes tabular rows to PATH with comment headers naming
the method and units of every column.  Identical argv and seed produce
identical bytes apart from the wall-time field.

Exit codes: 0 success (or verdict Certified), 1 NotCertified or an
empty result set, 2 Inconclusive, 64 usage/config errors, 65 budget
exhaustion.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .budget import DEFAULT_BUDGET, EvalBudget
from .certify import CertificateReport, Verdict, certify_linear, certify_radial_Lp, preset
from .dimension import (best_lower_bound, crude_bound, grid_lower_bound,
                        rectangle_bound)
from .errors import BudgetExceededError, ConfigError
from .fourier import fourier_transform_batch
from .graham import density_report, enumerate_restricted, enumerate_scaled, parse_system
from .measure import as_product, hausdorff_dim, parse_spec, total_dim
from .projection import (exceptional_directions, linear_density,
                         linear_density_mc, lp_criterion_integral,
                         radial_density_mc, radial_tube_profile, slab_integral,
                         stripe_scan)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_BUDGET = 65

_VERDICT_EXIT = {
    Verdict.CERTIFIED: EXIT_OK,
    Verdict.NOT_CERTIFIED: EXIT_NEGATIVE,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    """argparse that exits 64 on usage problems instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclasses.dataclass
class RunManifest:
    subcommand: str
    config: dict
    seed: int
    workers: int
    budget: int
    versions: dict
    wall_time_s: float
    outputs: list

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


# -------------------------------------------------------------- plumbing


def _add_common(sub: argparse.ArgumentParser, with_seed: bool = True):
    sub.add_argument("--config", metavar="FILE",
                     help="JSON file of defaults (spec text, seed, workers, budget)")
    sub.add_argument("--spec", metavar="TEXT",
                     help="measure config, e.g. \"factor { base = 3; digits = {0,2}; n = 2; }\"")
    if with_seed:
        sub.add_argument("--seed", type=int, default=None, metavar="U64")
    sub.add_argument("--workers", type=int, default=None, metavar="K")
    sub.add_argument("--json", action="store_true",
                     help="force tabular rows inline in the JSON result")
    sub.add_argument("--csv", metavar="PATH", help="write tabular rows to PATH")
    sub.add_argument("--budget", type=float, default=None, metavar="CELLS",
                     help=f"max lattice/cylinder evaluations (default {DEFAULT_BUDGET:g})")


_CONFIG_KEYS = {"spec", "seed", "workers", "budget"}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(loaded) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return loaded


class _Run:
    """Resolved common options plus manifest bookkeeping."""

    def __init__(self, args):
        self.t0 = time.monotonic()
        self.args = args
        file_cfg = _load_config(getattr(args, "config", None))
        self.spec_text = args.spec if args.spec is not None else file_cfg.get("spec")
        seed = getattr(args, "seed", None)
        if seed is None:
            seed = file_cfg.get("seed", 0)
        if not 0 <= int(seed) < 2 ** 64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        self.seed = int(seed)
        workers = args.workers if args.workers is not None else file_cfg.get("workers")
        self.workers = int(workers) if workers is not None else (os.cpu_count() or 1)
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        budget_cells = args.budget if args.budget is not None else file_cfg.get("budget")
        self.budget_cells = int(budget_cells) if budget_cells is not None else DEFAULT_BUDGET
        self.budget = EvalBudget(self.budget_cells)
        self.outputs: list = []

    def spec(self):
        if self.spec_text is None:
            raise ConfigError("a measure is required: pass --spec or a --config with a spec entry")
        return parse_spec(self.spec_text)

    def want_rows_inline(self) -> bool:
        return self.args.json or self.args.csv is None

    def write_csv(self, columns: list, rows, comments: list):
        if self.args.csv is None:
            return
        lines = [f"# {c}" for c in comments]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_csv_cell(v) for v in row))
        with open(self.args.csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        self.outputs.append(self.args.csv)

    def finish(self, subcommand: str, result: dict, exit_code: int = EXIT_OK) -> int:
        manifest = RunManifest(
            subcommand=subcommand,
            config={
                "argv": getattr(self.args, "run_argv", sys.argv[1:]),
                "spec": self.spec_text,
            },
            seed=self.seed,
            workers=self.workers,
            budget=self.budget_cells,
            versions={
                "package": __version__,
                "numpy": np.__version__,
                "python": ".".join(str(v) for v in sys.version_info[:3]),
                "rng": "PCG64",
            },
            wall_time_s=round(time.monotonic() - self.t0, 6),
            outputs=self.outputs,
        )
        doc = {"manifest": manifest.as_dict(), "result": result}
        print(json.dumps(doc, sort_keys=True))
        return exit_code


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_vector(text: str, what: str) -> np.ndarray:
    try:
        vec = np.array([float(c) for c in text.split(",")], dtype=np.float64)
    except ValueError as exc:
        raise ConfigError(f"{what} must be comma-separated reals: {text!r}") from exc
    if vec.size != 2:
        raise ConfigError(f"{what} must have exactly two components")
    return vec


def _profile_payload(profile, inline: bool) -> dict:
    payload = {
        "axis": profile.axis.value,
        "method": profile.method.value,
        "mass": profile.mass,
        "flags": sorted(profile.flags),
        "metadata": _jsonable(profile.metadata),
    }
    if inline:
        payload["grid"] = [repr(g) for g in profile.grid.tolist()]
        payload["values"] = [repr(v) for v in profile.values.tolist()]
    return payload


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _bound_payload(bound) -> dict:
    return {
        "value": bound.value,
        "kind": bound.kind.value,
        "rigorous": bound.rigorous,
    }


def _report_payload(report: CertificateReport) -> dict:
    return json.loads(report.to_json())


# ---------------------------------------------------------- subcommands


def _cmd_dim_bound(args) -> int:
    run = _Run(args)
    spec = run.spec()
    best = best_lower_bound(spec, budget=run.budget)
    candidates = []
    for factor in as_product(spec).factors:
        per = {}
        for name, fun in (("grid", lambda f: grid_lower_bound(f, budget=run.budget)),
                          ("crude", crude_bound), ("rectangle", rectangle_bound)):
            try:
                per[name] = _bound_payload(fun(factor))
            except (ValueError, ConfigError):
                per[name] = None
        candidates.append(per)
    result = {
        "hausdorff_dim": hausdorff_dim(spec),
        "ambient_dim": total_dim(spec),
        "best": _bound_payload(best),
        "per_factor_candidates": candidates,
    }
    return run.finish("dim-bound", result)


def _cmd_certify(args) -> int:
    run = _Run(args)
    if (args.radial_lp is None) == (not args.linear):
        raise ConfigError("choose exactly one of --radial-lp P or --linear")
    spec = run.spec()
    if args.linear:
        report = certify_linear(spec, run.budget)
    else:
        report = certify_radial_Lp(spec, args.radial_lp, run.budget)
    return run.finish("certify", _report_payload(report), _VERDICT_EXIT[report.verdict])


def _cmd_preset(args) -> int:
    run = _Run(args)
    names = [args.name]
    if args.name == "theorem-b":
        names.append("theorem-b-homogeneous")
    reports = []
    for name in names:
        _, report = preset(name, run.budget)
        reports.append({"preset": name, "report": _report_payload(report)})
    codes = [_VERDICT_EXIT[Verdict(e["report"]["verdict"])] for e in reports]
    exit_code = (EXIT_NEGATIVE if EXIT_NEGATIVE in codes
                 else EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_OK)
    return run.finish("preset", {"reports": reports}, exit_code)


def _cmd_fourier_eval(args) -> int:
    run = _Run(args)
    spec = run.spec()
    n = total_dim(spec)
    if args.xi:
        pts = []
        for text in args.xi:
            row = [float(c) for c in text.split(",")]
            if len(row) != n:
                raise ConfigError(f"xi {text!r} needs {n} components")
            pts.append(row)
        xis = np.array(pts, dtype=np.float64)
    elif args.grid is not None:
        if n != 1:
            raise ConfigError("--grid applies to one-dimensional measures; use --xi")
        rmax_text, _, count_text = args.grid.partition(",")
        rmax, count = float(rmax_text), int(count_text or "201")
        xis = np.linspace(-rmax, rmax, count)[:, None]
    else:
        raise ConfigError("pass --xi (repeatable) or --grid RMAX,COUNT")
    values, errs = fourier_transform_batch(spec, xis, tol=args.tol, budget=run.budget)
    columns = [f"xi_{i + 1}" for i in range(n)] + [
        "transform_re", "transform_im", "transform_abs", "truncation_error_bound"]
    rows = [list(map(float, xis[i])) + [values[i].real, values[i].imag,
                                        abs(values[i]), float(errs[i])]
            for i in range(len(xis))]
    run.write_csv(columns, rows, [
        "fourier transform of the digit measure (dimensionless, |value| <= 1)",
        f"method: self-similar infinite product, tail bound <= {args.tol!r}",
    ])
    result = {"count": len(rows), "tol": args.tol,
              "max_abs": max(abs(v) for v in values),
              "max_error_bound": float(np.max(errs))}
    if run.want_rows_inline():
        result["columns"] = columns
        result["rows"] = [[repr(float(v)) for v in row] for row in rows]
    return run.finish("fourier-eval", result)


def _cmd_radial_density(args) -> int:
    run = _Run(args)
    spec = run.spec()
    x = _parse_vector(args.viewpoint, "--viewpoint")
    if args.mc is None and args.delta is None:
        raise ConfigError("radial-density needs --delta W (tube counts) or --mc SAMPLES")
    if args.mc is not None:
        profile = radial_density_mc(spec, x, args.mc, args.bandwidth,
                                    seed=run.seed, budget=run.budget,
                                    workers=run.workers)
        comments = [
            "radial density on the viewing circle: mass per radian of direction",
            f"method: Monte Carlo histogram, {args.mc} samples, "
            f"bandwidth {args.bandwidth!r} rad, seed {run.seed}",
        ]
    else:
        profile = radial_tube_profile(spec, x, args.delta, args.angles,
                                      budget=run.budget, workers=run.workers)
        comments = [
            "radial density on the viewing circle: tube mass / (2 * half-width)",
            f"method: cylinder tube counts at half-width {args.delta!r}",
        ]
    values_sq = profile.values.astype(np.float64) ** 2
    l2_sq = float(np.trapezoid(values_sq, profile.grid))
    run.write_csv(["angle_rad", "density_mass_per_rad"],
                  list(zip(profile.grid.tolist(), profile.values.tolist())),
                  comments)
    result = {"profile": _profile_payload(profile, run.want_rows_inline()),
              "l2_norm_squared": l2_sq}
    return run.finish("radial-density", result)


def _cmd_linear_density(args) -> int:
    run = _Run(args)
    spec = run.spec()
    theta = _parse_vector(args.direction, "--direction")
    unit = theta / float(np.hypot(theta[0], theta[1]))
    if args.mc is not None:
        profile = linear_density_mc(spec, theta, args.mc, args.bandwidth,
                                    seed=run.seed, budget=run.budget,
                                    workers=run.workers)
        comments = [
            "density of the projection onto the line through the origin with the given direction",
            f"method: Monte Carlo histogram, {args.mc} samples, "
            f"bandwidth {args.bandwidth!r}, seed {run.seed}",
        ]
    else:
        corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.float64) @ unit
        lo, hi = float(corners.min()) - 0.05, float(corners.max()) + 0.05
        if args.grid is not None:
            lo_t, hi_t, count_t = args.grid.split(",")
            lo, hi, count = float(lo_t), float(hi_t), int(count_t)
        else:
            count = 501
        u_grid = np.linspace(lo, hi, count)
        profile = linear_density(spec, theta, u_grid, args.tmax,
                                 tol=args.tol, budget=run.budget)
        comments = [
            "density of the projection onto the line through the origin with the given direction",
            f"method: Fourier inversion, frequency cutoff {args.tmax!r}, "
            f"quadrature step 0.25",
        ]
    run.write_csv(["offset_along_direction", "density_mass_per_unit_offset"],
                  list(zip(profile.grid.tolist(), profile.values.tolist())),
                  comments)
    exit_code = EXIT_OK
    return run.finish(
        "linear-density",
        {"direction": [float(unit[0]), float(unit[1])],
         "profile": _profile_payload(profile, run.want_rows_inline())},
        exit_code)


def _cmd_stripe_scan(args) -> int:
    run = _Run(args)
    spec = run.spec()
    angles, integrals = stripe_scan(spec, args.radius, args.angles,
                                    tol=args.tol, budget=run.budget,
                                    workers=run.workers)
    threshold = args.radius ** (total_dim(spec) - 1 - args.s1 + 2 * args.eps)
    exceptional = exceptional_directions(spec, args.radius, args.eps, args.s1,
                                         angle_count=args.angles, tol=args.tol,
                                         budget=run.budget, workers=run.workers)
    run.write_csv(
        ["direction_angle_rad", "stripe_weighted_l1_sum"],
        list(zip(angles.tolist(), integrals.tolist())),
        ["stripe sums: |transform| summed over lattice points of the annulus "
         f"R <= |xi| <= 2R nearly orthogonal to the direction, R = {args.radius!r}",
         f"method: exact lattice scan; exceptional threshold R^(n-1-s1+2eps) = {threshold!r}"],
    )
    result = {
        "radius": args.radius,
        "threshold": threshold,
        "s1": args.s1,
        "eps": args.eps,
        "exceptional_count": len(exceptional),
        "exceptional_directions": [[float(c) for c in d] for d in exceptional],
    }
    if run.want_rows_inline():
        result["angles"] = [repr(float(a)) for a in angles]
        result["integrals"] = [repr(float(v)) for v in integrals]
    return run.finish("stripe-scan", result)


def _cmd_graham(args) -> int:
    run = _Run(args)
    system_ = parse_system(args.system, args.scales)
    if args.checkpoints:
        checkpoints = [int(c) for c in args.checkpoints.split(",")]
        rows = density_report(system_, checkpoints, run.budget)
        run.write_csv(["limit", "count", "exponent_log_count_over_log_limit"],
                      [[r["limit"], r["count"], r["exponent"]] for r in rows],
                      ["counts of qualifying integers up to each limit",
                       "method: digit DFS in the most selective base, "
                       "exponent = log(count)/log(limit), dimensionless"])
        result = {"rows": rows}
        empty = all(r["count"] == 0 for r in rows)
    else:
        if args.limit is None:
            raise ConfigError("graham needs --limit N (or --checkpoints)")
        if system_.unscaled:
            members = enumerate_restricted(system_, args.limit, run.budget,
                                           workers=run.workers)
        else:
            members = enumerate_scaled(system_, args.limit, run.budget)
        run.write_csv(["qualifying_integer"], [[m] for m in members],
                      ["positive integers whose scaled digit expansions "
                       "stay inside every digit set",
                       "method: exact integer scan (dimensionless)"])
        result = {"count": len(members)}
        if run.want_rows_inline():
            result["members"] = members
        empty = not members
    return run.finish("graham", result, EXIT_NEGATIVE if empty else EXIT_OK)


def _cmd_lp_integral(args) -> int:
    run = _Run(args)
    spec = run.spec()
    diag = lp_criterion_integral(spec, args.p, args.rmax, tol=args.tol,
                                 budget=run.budget)
    result = {
        "p_exp": args.p, "r_max": args.rmax,
        "partial": diag.partial,
        "shell_totals": [repr(float(v)) for v in diag.shell_totals],
        "dyadic_slopes": [repr(float(v)) for v in diag.dyadic_slopes],
        "non_convergent": diag.non_convergent,
    }
    return run.finish("lp-integral", result)


def _cmd_slab(args) -> int:
    run = _Run(args)
    spec = run.spec()
    theta = _parse_vector(args.direction, "--direction")
    diag = slab_integral(spec, theta, args.tmax, tol=args.tol, budget=run.budget)
    result = {
        "t_max": args.tmax,
        "partial": diag.partial,
        "shell_totals": [repr(float(v)) for v in diag.shell_totals],
        "dyadic_slopes": [repr(float(v)) for v in diag.dyadic_slopes],
        "non_convergent": diag.non_convergent,
    }
    return run.finish("slab-integral", result)


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="missingdigits",
                     description="Digit-restricted measures: dimension bounds, "
                                 "Fourier decay, projection densities, digit "
                                 "enumeration.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("dim-bound", parents=[], help="rigorous l1-dimension lower bounds")
    _add_common(p, with_seed=False)
    p.set_defaults(fn=_cmd_dim_bound)

    p = subs.add_parser("certify", help="certify a projection hypothesis")
    _add_common(p, with_seed=False)
    p.add_argument("--radial-lp", type=int, metavar="P", default=None,
                   help="radial L^p density hypothesis (threshold n - 1/P)")
    p.add_argument("--linear", action="store_true",
                   help="continuous linear-projection density hypothesis (threshold n - 1)")
    p.set_defaults(fn=_cmd_certify)

    p = subs.add_parser("preset", help="rebuild and certify a named flagship parameter set")
    p.add_argument("name", choices=["theorem-a", "theorem-b", "theorem-b-homogeneous"])
    _add_common(p, with_seed=False)
    p.set_defaults(fn=_cmd_preset)

    p = subs.add_parser("fourier-eval", help="evaluate the measure's Fourier transform")
    _add_common(p, with_seed=False)
    p.add_argument("--xi", action="append", metavar="C1,..",
                   help="frequency point (repeatable)")
    p.add_argument("--grid", metavar="RMAX,COUNT", help="symmetric 1-D grid")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_fourier_eval)

    p = subs.add_parser("radial-density", help="density of directions seen from a viewpoint")
    _add_common(p)
    p.add_argument("--viewpoint", required=True, metavar="X,Y")
    p.add_argument("--delta", type=float, default=None, metavar="W",
                   help="tube half-width (tube-count method)")
    p.add_argument("--angles", type=int, default=400, metavar="K")
    p.add_argument("--mc", type=int, default=None, metavar="SAMPLES",
                   help="use Monte Carlo instead of tube counts")
    p.add_argument("--bandwidth", type=float, default=0.01)
    p.set_defaults(fn=_cmd_radial_density)

    p = subs.add_parser("linear-density", help="density of the projection onto a line")
    _add_common(p)
    p.add_argument("--direction", required=True, metavar="DX,DY")
    p.add_argument("--grid", metavar="LO,HI,COUNT", default=None)
    p.add_argument("--tmax", type=float, default=729.0,
                   help="frequency cutoff for Fourier inversion")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--mc", type=int, default=None, metavar="SAMPLES")
    p.add_argument("--bandwidth", type=float, default=0.01)
    p.set_defaults(fn=_cmd_linear_density)

    p = subs.add_parser("stripe-scan", help="directional stripe sums over an annulus")
    _add_common(p, with_seed=False)
    p.add_argument("--radius", type=float, default=81.0, metavar="R")
    p.add_argument("--angles", type=int, default=256, metavar="K")
    p.add_argument("--s1", type=float, default=0.7376)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_stripe_scan)

    p = subs.add_parser("lp-integral", help="weighted transform sum deciding radial L^p")
    _add_common(p, with_seed=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rmax", type=int, default=1024)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_lp_integral)

    p = subs.add_parser("slab-integral", help="transform sum over a thin slab of frequencies")
    _add_common(p, with_seed=False)
    p.add_argument("--direction", required=True, metavar="DX,DY")
    p.add_argument("--tmax", type=float, default=2048.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_slab)

    p = subs.add_parser("graham", help="integers with digit restrictions in several bases")
    _add_common(p, with_seed=False)
    p.add_argument("--system", required=True, metavar="B:{D};B:{D}")
    p.add_argument("--limit", type=int, default=None, metavar="N")
    p.add_argument("--scales", default=None, metavar="T1,T2,..")
    p.add_argument("--checkpoints", default=None, metavar="N1,N2,..")
    p.set_defaults(fn=_cmd_graham)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.run_argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"missingdigits: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"missingdigits: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
