"""Command-line surface.

Single runs emit JSON reports of the shape
{command, inputs, values, checks: [{name, pass, measured, bound, tolerance}]};
sweeps emit CSV.  When ``--out`` is given, report-producing commands also
render a matplotlib figure next to the output file (suppress with
``--no-figures``).  Exit codes: 0 success, 1 failed check or numerical
contract violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import plots
from .analytic import (
    PROFILES,
    GridSpec,
    nehari_check,
    schwarzian,
    schwarzian_grid,
    schwarzian_norm_estimate,
)
from .errors import ExprSyntaxError, ToolkitError
from .expr import const_value, parse
from .geometry import geodesic_rectangle, hyp_dist, pseudo_disk, rectangle_count, rho
from .harmonic import (
    HarmonicMap,
    _harmonic_schwarzian_grid,
    harmonic_norm_estimate,
    harmonic_preimages,
    harmonic_schwarzian,
    lift,
    lift_criterion_report,
    lift_criterion_value,
    shear_koebe,
)
from .sturm import (
    DEFAULT_SEED,
    SegmentPath,
    disconjugacy_check,
    find_zeros,
    integrate_segment,
    legendre_lower_bound,
    modulus_convexity_residual,
    zero_separation_check,
)
from .valence import (
    breakdown_sweep,
    count_valence,
    packing_check,
    separation_bound,
    sweep_rows,
    sweep_to_csv,
    tan_zero_census,
    valence_bound_cap,
    valence_bound_const,
    valence_breakdown,
)
from .verify import format_table, run_all


def _cnum(text: str) -> complex:
    """Parse a scalar argument with the expression grammar (so 0.3+0.1i,
    -2, 1.5e-3 all work)."""
    return complex(const_value(parse(text)))


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _check(name, passed, measured, bound, tolerance):
    return {
        "name": name,
        "pass": bool(passed),
        "measured": _jsonable(measured),
        "bound": _jsonable(bound),
        "tolerance": tolerance,
    }


def _fmt_scalar(value) -> str:
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        if value["im"] == 0:
            return f"{value['re']:.10g}"
        sign = "+" if value["im"] >= 0 else "-"
        return f"{value['re']:.10g}{sign}{abs(value['im']):.10g}i"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _emit(report: dict, args) -> int:
    fmt = args.format
    if fmt == "text":
        lines = [report["command"]]
        for key, value in report["values"].items():
            lines.append(f"  {key} = {_fmt_scalar(value)}")
        for chk in report["checks"]:
            status = "PASS" if chk["pass"] else "FAIL"
            lines.append(
                f"  check {chk['name']}: {status} (measured={_fmt_scalar(chk['measured'])}, "
                f"bound={_fmt_scalar(chk['bound'])}, tol={chk['tolerance']:g})"
            )
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _report(command: str, args, values: dict, checks: list) -> dict:
    inputs = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "format", "out", "no_figures") and v is not None
    }
    return {
        "command": command,
        "inputs": _jsonable(inputs),
        "values": _jsonable(values),
        "checks": checks,
    }


# ---------------------------------------------------------------------------
# Handlers


def _cmd_schw_eval(args):
    value = schwarzian(parse(args.f), _cnum(args.z))
    return _emit(_report("schw eval", args, {"schwarzian": value}, []), args)


def _cmd_schw_norm(args):
    f = parse(args.f)
    grid = GridSpec(args.n_radial, args.n_angular)
    est = schwarzian_norm_estimate(f, grid)
    if args.out and not args.no_figures:
        plots.save_norm_heatmap(lambda z: _norm_field(f, z), est, _figure_path(args.out))
    return _emit(
        _report(
            "schw norm",
            args,
            {
                "lower_bound": est.lower_bound,
                "attaining_point": est.attaining_point,
                "grid_resolution": est.grid_resolution,
                "skipped": est.skipped,
            },
            [],
        ),
        args,
    )


def _norm_field(f, z):
    s, ok = schwarzian_grid(f, z)
    return (1.0 - np.abs(z) ** 2) ** 2 * np.abs(s), ok


def _cmd_schw_nehari(args):
    f = parse(args.f)
    profile = PROFILES[args.profile]
    spec = GridSpec(args.samples, args.samples, 0.995)
    rep = nehari_check(f, profile, spec.points())
    checks = [_check("profile_ratio", rep.passed, rep.worst_ratio, 1.0, 1e-12)]
    values = {
        "worst_ratio": rep.worst_ratio,
        "worst_point": rep.worst_point,
        "skipped": rep.skipped,
    }
    return _emit(_report("schw nehari-check", args, values, checks), args)


def _cmd_geom_rho(args):
    a, b = _cnum(args.alpha), _cnum(args.beta)
    values = {"rho": rho(a, b), "hyperbolic_distance": hyp_dist(a, b)}
    return _emit(_report("geom rho", args, values, []), args)


def _cmd_geom_disk(args):
    alpha, r = _cnum(args.alpha), float(args.r)
    disk = pseudo_disk(alpha, r)
    boundary_dev = max(abs(rho(complex(p), alpha) - r) for p in disk.boundary_points(64))
    values = {
        "euclidean_center": disk.euclidean_center,
        "euclidean_radius": disk.euclidean_radius,
    }
    checks = [_check("boundary_rho", boundary_dev <= 1e-10, boundary_dev, 0.0, 1e-10)]
    return _emit(_report("geom disk", args, values, checks), args)


def _cmd_geom_rectangles(args):
    spec = geodesic_rectangle(args.C)
    count = rectangle_count(args.C)
    values = {
        "R": spec.R,
        "R1": spec.R1,
        "y": spec.y,
        "half_angle": spec.half_angle,
        "count": count,
    }
    checks = [
        _check(
            "half_angle_floor",
            spec.meets_floor,
            spec.half_angle,
            1.0 / (5.0 * args.C),
            0.0,
        )
    ]
    return _emit(_report("geom rectangles", args, values, checks), args)


def _segment_from_args(args):
    return SegmentPath(_cnum(args.alpha), _cnum(args.beta))


def _cmd_ode_segment(args):
    sol = integrate_segment(
        parse(args.psi), _segment_from_args(args), _cnum(args.u0), _cnum(args.du0), args.steps
    )
    record = find_zeros(sol)
    values = {
        "residual": sol.residual,
        "zero_count": record.count,
        "zero_locations": record.locations,
        "min_gap": record.min_gap,
    }
    checks = [_check("refinement_residual", sol.residual <= 1e-6, sol.residual, 0.0, 1e-6)]
    if args.C is not None:
        sep = zero_separation_check(args.C, record)
        checks.append(
            _check("zero_separation", sep.passed, sep.min_gap or 0.0, sep.bound, 1e-9)
        )
    return _emit(_report("ode segment", args, values, checks), args)


def _cmd_ode_lemma1(args):
    sol = integrate_segment(
        parse(args.psi), _segment_from_args(args), _cnum(args.u0), _cnum(args.du0), args.steps
    )
    residual = modulus_convexity_residual(sol)
    checks = [_check("modulus_convexity", residual >= -1e-6, residual, -1e-6, 1e-6)]
    return _emit(_report("ode lemma1", args, {"residual": residual}, checks), args)


def _cmd_ode_legendre(args):
    record = legendre_lower_bound(args.n)
    values = {
        "zero_count": record.count,
        "zero_locations": record.locations,
        "min_gap": record.min_gap,
    }
    checks = [
        _check("count_is_n_minus_1", record.count == args.n - 1, record.count, args.n - 1, 0.0)
    ]
    return _emit(_report("ode legendre", args, values, checks), args)


def _cmd_ode_disconjugacy(args):
    rep = disconjugacy_check(PROFILES[args.profile], trials=args.trials, seed=args.seed)
    values = {
        "max_zero_count": rep.max_zero_count,
        "trials": rep.trials,
        "reached": list(rep.reached),
    }
    checks = [_check("at_most_one_zero", rep.passed, rep.max_zero_count, 1, 0.0)]
    return _emit(_report("ode disconjugacy", args, values, checks), args)


def _cmd_valence_count(args):
    rep = count_valence(parse(args.f), _cnum(args.w), args.r, args.nodes)
    values = {
        "count": rep.count,
        "winding": rep.winding,
        "n_poles": rep.n_poles,
        "winding_residual": rep.winding_residual,
        "preimages": rep.preimages,
        "min_separation": rep.min_separation,
    }
    checks = [
        _check("winding_residual", rep.winding_residual < 0.01, rep.winding_residual, 0.0, 0.01)
    ]
    return _emit(_report("valence count", args, values, checks), args)


def _cmd_valence_bound(args):
    values = {
        "valence_bound": valence_bound_const(args.C),
        "valence_cap": valence_bound_cap(args.C),
        "separation_bound": separation_bound(args.C),
    }
    return _emit(_report("valence bound", args, values, []), args)


def _cmd_valence_census(args):
    rep = tan_zero_census(args.C)
    pack = packing_check(rep, args.C)
    values = {
        "count": rep.count,
        "min_separation": rep.min_separation,
        "preimages": rep.preimages,
    }
    checks = [
        _check("separation", pack.separation_ok, rep.min_separation or 0.0, pack.separation_bound, 1e-9),
        _check("packing", pack.count_ok, rep.count, pack.count_bound, 0.0),
    ]
    return _emit(_report("valence tan-census", args, values, checks), args)


def _cmd_valence_breakdown(args):
    b = valence_breakdown(args.C)
    values = {
        "r0": b.r0,
        "epsilon": b.epsilon,
        "R": b.R,
        "R1": b.R1,
        "m": b.m,
        "radii": list(b.radii),
        "per_annulus_counts": list(b.per_annulus_counts),
        "inner_sum": b.inner_sum,
        "gap_annulus_count": b.gap_annulus_count,
        "rectangle_count": b.rectangle_count,
        "total": b.total,
        "envelope": b.envelope,
        "total_over_ClogC": b.ratio,
    }
    checks = [
        _check(
            "annulus_envelope",
            b.inner_sum <= 1.01 * (b.envelope - 1.0),
            b.inner_sum,
            b.envelope - 1.0,
            0.01,
        )
    ]
    if args.out and not args.no_figures:
        plots.save_breakdown_figure(b, _figure_path(args.out))
    return _emit(_report("valence breakdown", args, values, checks), args)


def _cmd_valence_sweep(args):
    if args.C_list:
        cs = [float(tok) for tok in args.C_list.split(",")]
    else:
        cs = list(np.geomspace(args.C_min, args.C_max, args.count))
    workers = max(1, int(os.environ.get("SCHW_THREADS", "1")))
    breakdowns = breakdown_sweep(cs, max_workers=workers)
    if args.out:
        sweep_to_csv(breakdowns, args.out)
        if not args.no_figures:
            plots.save_sweep_figure(breakdowns, _figure_path(args.out))
    else:
        from .valence import SWEEP_COLUMNS

        sys.stdout.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in sweep_rows(breakdowns):
            sys.stdout.write(",".join(str(row[c]) for c in SWEEP_COLUMNS) + "\n")
    return 0


def _map_from_args(args) -> HarmonicMap:
    return HarmonicMap(parse(args.h), parse(args.q))


def _cmd_harm_schwarzian(args):
    value = harmonic_schwarzian(_map_from_args(args), _cnum(args.z))
    return _emit(_report("harmonic schwarzian", args, {"schwarzian": value}, []), args)


def _cmd_harm_norm(args):
    hmap = _map_from_args(args)
    grid = GridSpec(args.n_radial, args.n_angular)
    est = harmonic_norm_estimate(hmap, grid)
    if args.out and not args.no_figures:
        def field(z):
            s, ok = _harmonic_schwarzian_grid(hmap, z)
            return (1.0 - np.abs(z) ** 2) ** 2 * np.abs(s), ok

        plots.save_norm_heatmap(field, est, _figure_path(args.out))
    values = {
        "lower_bound": est.lower_bound,
        "attaining_point": est.attaining_point,
        "grid_resolution": est.grid_resolution,
        "skipped": est.skipped,
    }
    return _emit(_report("harmonic norm", args, values, []), args)


def _cmd_harm_shear(args):
    hmap = shear_koebe(args.theta)
    z = _cnum(args.z)
    values = {
        "schwarzian_at_z": harmonic_schwarzian(hmap, z),
        "criterion_at_z": lift_criterion_value(hmap, z),
        "h_source": str(hmap.h),
        "q_source": str(hmap.q),
    }
    return _emit(_report("harmonic shear", args, values, []), args)


def _cmd_harm_lift(args):
    sample = lift(_map_from_args(args), _cnum(args.z))
    values = {
        "coords": list(sample.coords),
        "conformal_factor": sample.conformal_factor,
        "curvature_density": sample.curvature_density,
    }
    checks = [
        _check(
            "conformality",
            sample.conformality_residual <= 1e-6,
            sample.conformality_residual,
            0.0,
            1e-6,
        )
    ]
    return _emit(_report("harmonic lift", args, values, checks), args)


def _cmd_harm_criterion(args):
    hmap = _map_from_args(args)
    z = _cnum(args.z)
    values = {"criterion_value": lift_criterion_value(hmap, z)}
    checks = []
    if args.C is not None or args.profile:
        spec = GridSpec(32, 64, 0.9)
        rep = lift_criterion_report(
            hmap,
            spec.points(),
            C=args.C,
            profile=PROFILES[args.profile] if args.profile else None,
            growth=args.growth,
        )
        values["worst_ratio"] = rep.worst_ratio
        values["worst_point"] = rep.worst_point
        checks.append(_check("criterion_bound", rep.passed, rep.worst_ratio, 1.0, 1e-12))
    return _emit(_report("harmonic criterion", args, values, checks), args)


def _cmd_harm_preimages(args):
    hmap = _map_from_args(args)
    rep = harmonic_preimages(
        hmap, _cnum(args.w), GridSpec(args.n_radial, args.n_angular, args.r_max), C=args.C
    )
    values = {
        "count": rep.count,
        "preimages": rep.preimages,
        "min_separation": rep.min_separation,
    }
    checks = []
    if args.C is not None and rep.min_separation is not None:
        checks.append(
            _check(
                "separation",
                rep.min_separation >= separation_bound(args.C) - 1e-9,
                rep.min_separation,
                separation_bound(args.C),
                1e-9,
            )
        )
    return _emit(_report("harmonic preimages", args, values, checks), args)


def _cmd_verify_all(args):
    results = run_all(seed=args.seed)
    if args.format == "json":
        report = _report(
            "verify all",
            args,
            {"seed": args.seed},
            [
                _check(r.name, r.passed, r.measured, r.bound, r.tolerance)
                for r in results
            ],
        )
        code = _emit(report, args)
    else:
        text = format_table(results) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        code = 0 if all(r.passed for r in results) else 1
    return code


# ---------------------------------------------------------------------------
# Parser wiring


def _add_common(p):
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report to this file")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwarzian",
        description="Schwarzian derivatives, valence bounds, and lift checks on the unit disk",
    )
    top = parser.add_subparsers(dest="group", required=True)

    schw = top.add_parser("schw", help="analytic Schwarzian operations").add_subparsers(
        dest="cmd", required=True
    )
    p = schw.add_parser("eval", help="Schwarzian value at a point")
    p.add_argument("--f", required=True, help="expression, e.g. koebe or z/(1-z)^2")
    p.add_argument("--z", required=True)
    p.set_defaults(func=_cmd_schw_eval)
    _add_common(p)
    p = schw.add_parser("norm", help="Schwarzian norm lower bound")
    p.add_argument("--f", required=True)
    p.add_argument("--n-radial", type=int, default=400)
    p.add_argument("--n-angular", type=int, default=400)
    p.set_defaults(func=_cmd_schw_norm)
    _add_common(p)
    p = schw.add_parser("nehari-check", help="profile bound check over disk samples")
    p.add_argument("--f", required=True)
    p.add_argument("--profile", choices=sorted(PROFILES), required=True)
    p.add_argument("--samples", type=int, default=120, help="samples per grid axis")
    p.set_defaults(func=_cmd_schw_nehari)
    _add_common(p)

    geom = top.add_parser("geom", help="disk geometry").add_subparsers(dest="cmd", required=True)
    p = geom.add_parser("rho", help="pseudohyperbolic and hyperbolic distance")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=_cmd_geom_rho)
    _add_common(p)
    p = geom.add_parser("disk", help="pseudohyperbolic disk parameters")
    p.add_argument("--alpha", required=True)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=_cmd_geom_disk)
    _add_common(p)
    p = geom.add_parser("rectangles", help="tangent-geodesic covering data")
    p.add_argument("--C", type=float, required=True)
    p.set_defaults(func=_cmd_geom_rectangles)
    _add_common(p)

    ode = top.add_parser("ode", help="segment and interval ODE checks").add_subparsers(
        dest="cmd", required=True
    )
    p = ode.add_parser("segment", help="integrate u'' + psi u = 0 along a segment")
    p.add_argument("--psi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--u0", default="0")
    p.add_argument("--du0", default="1")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--C", type=float, help="also run the zero-separation check at this C")
    p.set_defaults(func=_cmd_ode_segment)
    _add_common(p)
    p = ode.add_parser("lemma1", help="modulus convexity residual along a segment")
    p.add_argument("--psi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--u0", default="1")
    p.add_argument("--du0", default="0.3+0.2i")
    p.add_argument("--steps", type=int, default=2000)
    p.set_defaults(func=_cmd_ode_lemma1)
    _add_common(p)
    p = ode.add_parser("legendre", help="interior zeros of (1-x^2) P_n'")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_ode_legendre)
    _add_common(p)
    p = ode.add_parser("disconjugacy", help="random-solution zero counts for a profile")
    p.add_argument("--profile", choices=sorted(PROFILES), required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_ode_disconjugacy)
    _add_common(p)

    val = top.add_parser("valence", help="valence bounds and counts").add_subparsers(
        dest="cmd", required=True
    )
    p = val.add_parser("count", help="preimage count by the argument principle")
    p.add_argument("--f", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--nodes", type=int, default=4096)
    p.set_defaults(func=_cmd_valence_count)
    _add_common(p)
    p = val.add_parser("bound", help="separation and packing bounds at constant C")
    p.add_argument("--C", type=float, required=True)
    p.set_defaults(func=_cmd_valence_bound)
    _add_common(p)
    p = val.add_parser("tan-census", help="zeros of tan(sqrt(C/2) z) in the disk")
    p.add_argument("--C", type=float, required=True)
    p.set_defaults(func=_cmd_valence_census)
    _add_common(p)
    p = val.add_parser("breakdown", help="growth-context bound ledger at one C")
    p.add_argument("--C", type=float, required=True)
    p.set_defaults(func=_cmd_valence_breakdown)
    _add_common(p)
    p = val.add_parser("sweep", help="breakdowns over a range of C (CSV)")
    p.add_argument("--C-list", help="comma-separated C values")
    p.add_argument("--C-min", type=float, default=4.0)
    p.add_argument("--C-max", type=float, default=1024.0)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=_cmd_valence_sweep)
    _add_common(p)

    harm = top.add_parser("harmonic", help="harmonic maps and lifts").add_subparsers(
        dest="cmd", required=True
    )
    p = harm.add_parser("schwarzian", help="harmonic Schwarzian at a point")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=_cmd_harm_schwarzian)
    _add_common(p)
    p = harm.add_parser("norm", help="harmonic Schwarzian norm lower bound")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--n-radial", type=int, default=400)
    p.add_argument("--n-angular", type=int, default=400)
    p.set_defaults(func=_cmd_harm_norm)
    _add_common(p)
    p = harm.add_parser("shear", help="sheared Koebe map data")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--z", default="0")
    p.set_defaults(func=_cmd_harm_shear)
    _add_common(p)
    p = harm.add_parser("lift", help="minimal-surface lift sample")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(func=_cmd_harm_lift)
    _add_common(p)
    p = harm.add_parser("criterion", help="|S f| + e^{2 sigma}|K| value and bound checks")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--z", default="0")
    p.add_argument("--C", type=float)
    p.add_argument("--growth", action="store_true", help="compare against 2C/(1-|z|^2)")
    p.add_argument("--profile", choices=sorted(PROFILES))
    p.set_defaults(func=_cmd_harm_criterion)
    _add_common(p)
    p = harm.add_parser("preimages", help="planar preimages by Newton iteration")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--r-max", type=float, default=0.9)
    p.add_argument("--n-radial", type=int, default=24)
    p.add_argument("--n-angular", type=int, default=48)
    p.add_argument("--C", type=float)
    p.set_defaults(func=_cmd_harm_preimages)
    _add_common(p)

    ver = top.add_parser("verify", help="acceptance suite").add_subparsers(
        dest="cmd", required=True
    )
    p = ver.add_parser("all", help="run every acceptance check")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_verify_all)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out")
    p.add_argument("--no-figures", action="store_true")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ExprSyntaxError as exc:
        sys.stderr.write(f"expression error: {exc}\n")
        return 2
    except ToolkitError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
