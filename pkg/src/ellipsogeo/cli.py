"""Command-line front end.

Subcommands: eval, validate, solve, factor, fit, functional, oracle,
plot-data.  All structured IO is JSON tagged with a schema field; grid
dumps are CSV.  Exit codes: 0 success, 2 validation failure (with a
machine-readable report), 1 usage or malformed input.  Outputs are
written atomically and are byte-identical across runs for equal inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import boundary, extremal_map, functionals, polyfactor, solver
from .ellipsoid import Ellipsoid
from .extremal_map import SCHEMA


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse insists on exiting 2 for usage problems; the contract here
    # reserves 2 for validation failures, so route through status 1
    def error(self, message):
        raise _UsageError(message)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "schema" in obj and obj["schema"] != SCHEMA:
        raise _UsageError(f"unsupported schema {obj['schema']!r}")
    return obj


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, obj: dict) -> None:
    obj = {"schema": SCHEMA, **obj}
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _pair(x) -> list[float]:
    return [float(np.real(x)), float(np.imag(x))]


def _unpair(v) -> complex:
    return complex(v[0], v[1])


def _params_in(obj: dict) -> extremal_map.ExtremalMapParams:
    return extremal_map.params_from_json(obj)


def _bundle_in(obj: dict):
    ellipsoid = Ellipsoid.from_json(obj["ellipsoid"])
    params = _params_in(obj["params"])
    return ellipsoid, params


def _result_json(res: solver.SolveResult) -> dict:
    return {
        "kind": res.kind,
        "scalar": res.scalar,
        "params": extremal_map.params_to_json(res.params),
        "residuals": {
            "interpolation": res.residuals.interpolation,
            "constraint": res.residuals.constraint,
            "boundary": res.residuals.boundary,
            "boundary_grid": res.residuals.boundary_grid,
        },
        "certified": res.certified,
        "label": res.label,
        "active": list(res.active),
        "dropped": list(res.dropped),
        "alternates": [
            {"pattern": list(pat), "scalar": s} for pat, s in res.alternates
        ],
        "diagnostics": {
            "pattern": list(res.diagnostics.pattern),
            "patterns_tried": res.diagnostics.patterns_tried,
            "starts_tried": res.diagnostics.starts_tried,
            "newton_iterations": res.diagnostics.newton_iterations,
        },
    }


def cmd_eval(args) -> int:
    obj = _load_json(args.input)
    ellipsoid, params = _bundle_in(obj)
    if args.boundary:
        M = args.grid
        trace = extremal_map.boundary_trace(params, ellipsoid, M)
        lines = ["index,angle," + ",".join(
            f"re_{j},im_{j}" for j in range(params.n))]
        for i in range(M):
            vals = ",".join(
                f"{float(trace[j, i].real)!r},{float(trace[j, i].imag)!r}"
                for j in range(params.n))
            lines.append(f"{i},{2 * math.pi * i / M!r},{vals}")
        text = "\n".join(lines) + "\n"
        if args.output:
            _atomic_write(args.output, text)
        else:
            sys.stdout.write(text)
        return 0
    if args.at is None:
        raise _UsageError("eval needs --at RE,IM or --boundary")
    try:
        re_s, im_s = args.at.split(",")
        lam = complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise _UsageError(f"bad --at value {args.at!r}") from exc
    vals = extremal_map.evaluate(params, ellipsoid, lam)
    _emit(args, {
        "command": "eval",
        "config": {"at": _pair(lam)},
        "values": [_pair(v) for v in vals],
        "defining_value": ellipsoid.defining_value(vals),
    })
    return 0


def cmd_validate(args) -> int:
    obj = _load_json(args.input)
    ellipsoid, params = _bundle_in(obj)
    config = {"tol": args.tol, "boundary_tol": args.boundary_tol,
              "grid": args.grid}
    failures = []
    box_ok = True
    try:
        params.check_box()
    except extremal_map.ParameterError as exc:
        box_ok = False
        failures.append({"check": "box", "detail": str(exc)})
    cres = None
    bdef = None
    excluded = None
    if box_ok:
        cres = extremal_map.constraint_residual(params, ellipsoid)
        if cres > args.tol:
            failures.append({"check": "constraint", "value": cres,
                             "tol": args.tol})
        info = extremal_map.boundary_defect_info(params, ellipsoid, args.grid)
        bdef, excluded = info.defect, info.excluded
        if bdef > args.boundary_tol:
            failures.append({"check": "boundary", "value": bdef,
                             "tol": args.boundary_tol})
    passed = not failures
    _emit(args, {
        "command": "validate",
        "config": config,
        "passed": passed,
        "box_ok": box_ok,
        "constraint_residual": cres,
        "boundary_defect": bdef,
        "excluded_samples": excluded,
        "failures": failures,
    })
    return 0 if passed else 2


def cmd_solve(args) -> int:
    obj = _load_json(args.input)
    ellipsoid = Ellipsoid.from_json(obj["ellipsoid"])
    config = solver.SolverConfig(
        seed=args.seed, starts=args.starts,
        interpolation_tol=args.tol, constraint_tol=args.tol,
        boundary_tol=args.boundary_tol, boundary_grid=args.grid,
    )
    echo = {"seed": args.seed, "starts": args.starts, "tol": args.tol,
            "boundary_tol": args.boundary_tol, "grid": args.grid,
            "r_pattern": args.r_pattern}
    try:
        if "two_point" in obj:
            spec = obj["two_point"]
            problem = solver.TwoPointProblem(
                tuple(_unpair(v) for v in spec["z"]),
                tuple(_unpair(v) for v in spec["w"]))
            res = solver.solve_two_point(ellipsoid, problem, config,
                                         r_pattern=args.r_pattern)
        elif "point_direction" in obj:
            spec = obj["point_direction"]
            problem = solver.PointDirectionProblem(
                tuple(_unpair(v) for v in spec["z"]),
                tuple(_unpair(v) for v in spec["X"]))
            res = solver.solve_point_direction(ellipsoid, problem, config,
                                               r_pattern=args.r_pattern)
        else:
            raise _UsageError(
                "input needs a two_point or point_direction section")
    except solver.SolveError as exc:
        _emit(args, {"command": "solve", "config": echo,
                     "status": "failed", "error": str(exc)})
        return 2
    _emit(args, {"command": "solve", "config": echo, "status": "ok",
                 **_result_json(res)})
    return 0


def cmd_factor(args) -> int:
    obj = _load_json(args.input)
    coeffs = tuple(_unpair(v) for v in obj["coefficients"])
    try:
        poly = polyfactor.SelfInversivePoly(coeffs, tol=max(args.tol, 1e-9))
        form = polyfactor.factor(poly, tol=args.tol)
    except (ValueError, polyfactor.FactorError) as exc:
        _emit(args, {"command": "factor", "config": {"tol": args.tol},
                     "status": "failed", "error": str(exc)})
        return 2
    _emit(args, {
        "command": "factor",
        "config": {"tol": args.tol},
        "status": "ok",
        "scale": form.scale,
        "zeros": [_pair(a) for a in form.zeros],
    })
    return 0


def cmd_fit(args) -> int:
    obj = _load_json(args.input)
    ellipsoid = Ellipsoid.from_json(obj["ellipsoid"])
    m = int(obj.get("m", args.m))
    samples = np.array([[_unpair(v) for v in row] for row in obj["samples"]])
    zeros = [[_unpair(v) for v in row] for row in obj["zeros"]]
    try:
        report = boundary.fit_extremal_family(samples, zeros, ellipsoid, m,
                                              tol=args.tol)
    except boundary.FitPreconditionError as exc:
        _emit(args, {"command": "fit", "config": {"tol": args.tol, "m": m},
                     "status": "failed", "error": str(exc)})
        return 2
    _emit(args, {
        "command": "fit",
        "config": {"tol": args.tol, "m": m},
        "status": "ok" if report.in_family else "rejected",
        "in_family": report.in_family,
        "rms_total": report.rms_total,
        "rms_by_component": list(report.rms_by_component),
        "singular_defect": report.singular_defect,
        "constraint_residual": report.constraint_residual,
        "u_defect": report.u_defect,
        "masked_samples": report.masked,
        "params": extremal_map.params_to_json(report.params),
    })
    return 0 if report.in_family else 2


def _spec_to_json(spec: functionals.ProblemSpec) -> dict:
    return {
        "functionals": [
            {
                "nu": f.nu,
                "terms": [
                    {str(s): _pair(c) for s, c in table.items()}
                    for table in f.terms
                ],
            }
            for f in spec.functionals
        ],
        "targets": list(spec.targets),
        "band_degree": spec.band_degree,
        "sigma": [_pair(s) for s in spec.sigma],
    }


def _spec_from_json(obj: dict) -> functionals.ProblemSpec:
    funcs = []
    for f in obj["functionals"]:
        terms = tuple({int(s): _unpair(c) for s, c in table.items()}
                      for table in f["terms"])
        funcs.append(functionals.BoundaryFunctional(terms, float(f["nu"])))
    return functionals.ProblemSpec(
        tuple(funcs), tuple(obj["targets"]),
        int(obj["band_degree"]),
        tuple(_unpair(s) for s in obj["sigma"]))


def cmd_functional(args) -> int:
    obj = _load_json(args.input)
    if "build" in obj:
        spec_in = obj["build"]
        kind = spec_in["kind"]
        z = tuple(_unpair(v) for v in spec_in["z"])
        if kind == "two-point":
            spec = functionals.build_two_point_problem(
                z, tuple(_unpair(v) for v in spec_in["w"]),
                float(spec_in["sigma"]))
        elif kind == "point-direction":
            spec = functionals.build_point_direction_problem(
                z, tuple(_unpair(v) for v in spec_in["X"]))
        else:
            raise _UsageError(f"unknown build kind {kind!r}")
        _emit(args, {"command": "functional", "config": {"build": kind},
                     "status": "ok", "problem": _spec_to_json(spec),
                     "rank": functionals.independence_rank(spec),
                     "type_defect": functionals.type_defect(spec)})
        return 0
    if "evaluate" in obj:
        section = obj["evaluate"]
        spec = _spec_from_json(section["problem"])
        disc = np.array([[_unpair(v) for v in row]
                         for row in section["disc"]])
        M = section.get("grid")
        values = [functionals.eval_functional(f, disc, M)
                  for f in spec.functionals]
        mism = max(abs(v - t) for v, t in zip(values, spec.targets))
        _emit(args, {"command": "functional", "config": {"grid": M},
                     "status": "ok", "values": values,
                     "targets": list(spec.targets),
                     "max_mismatch": mism})
        return 0
    raise _UsageError("input needs a build or evaluate section")


def cmd_oracle(args) -> int:
    obj = _load_json(args.input)
    ellipsoid = Ellipsoid.from_json(obj["ellipsoid"])
    if "two_point" in obj:
        spec = obj["two_point"]
        problem = solver.TwoPointProblem(
            tuple(_unpair(v) for v in spec["z"]),
            tuple(_unpair(v) for v in spec["w"]))
    elif "point_direction" in obj:
        spec = obj["point_direction"]
        problem = solver.PointDirectionProblem(
            tuple(_unpair(v) for v in spec["z"]),
            tuple(_unpair(v) for v in spec["X"]))
    else:
        raise _UsageError("input needs a two_point or point_direction section")
    kind = obj["kind"]
    config = {"kind": kind, "degree": args.degree, "seed": args.seed}
    if kind == "mobius":
        value, params = solver.mobius_oracle(problem)
        _emit(args, {"command": "oracle", "config": config, "status": "ok",
                     "value": value,
                     "params": extremal_map.params_to_json(params)})
        return 0
    if kind == "ball":
        if not isinstance(problem, solver.TwoPointProblem):
            raise _UsageError("ball oracle handles two_point problems only")
        value = solver.ball_oracle(ellipsoid, problem)
        _emit(args, {"command": "oracle", "config": config, "status": "ok",
                     "value": value})
        return 0
    if kind == "brute":
        sconf = solver.SolverConfig(seed=args.seed)
        try:
            res = solver.brute_force_disc(ellipsoid, problem, args.degree,
                                          sconf)
        except solver.BruteForceError as exc:
            _emit(args, {"command": "oracle", "config": config,
                         "status": "failed", "error": str(exc)})
            return 2
        _emit(args, {
            "command": "oracle", "config": config, "status": "ok",
            "value": res.value,
            "degree": res.degree,
            "certified_sup_u": res.certified_sup_u,
            "numerator": [[_pair(c) for c in row] for row in res.numerator],
            "denominator_zeros": [_pair(b) for b in res.denominator_zeros],
        })
        return 0
    raise _UsageError(f"unknown oracle kind {kind!r}")


def cmd_plot_data(args) -> int:
    obj = _load_json(args.input)
    ellipsoid, params = _bundle_in(obj)
    M = args.grid
    trace = extremal_map.boundary_trace(params, ellipsoid, M)
    os.makedirs(args.output, exist_ok=True)
    lines = ["index,angle," + ",".join(
        f"re_{j},im_{j}" for j in range(params.n))]
    for i in range(M):
        vals = ",".join(f"{float(trace[j, i].real)!r},"
                        f"{float(trace[j, i].imag)!r}"
                        for j in range(params.n))
        lines.append(f"{i},{2 * math.pi * i / M!r},{vals}")
    _atomic_write(os.path.join(args.output, "boundary.csv"),
                  "\n".join(lines) + "\n")
    finite = np.all(np.isfinite(trace), axis=0)
    u = np.full(M, float("nan"))
    u[finite] = ellipsoid.defining_values(trace[:, finite])
    lines = ["index,angle,u"]
    for i in range(M):
        lines.append(f"{i},{2 * math.pi * i / M!r},{float(u[i])!r}")
    _atomic_write(os.path.join(args.output, "residual.csv"),
                  "\n".join(lines) + "\n")
    manifest = {"schema": SCHEMA, "command": "plot-data",
                "config": {"grid": M},
                "files": ["boundary.csv", "residual.csv"]}
    _atomic_write(os.path.join(args.output, "manifest.json"),
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="ellipsogeo",
                     description="extremal discs in complex ellipsoids")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("--input", required=True)
        if output:
            sp.add_argument("--output", default=None)

    sp = sub.add_parser("eval", help="evaluate a parametrized map")
    common(sp)
    sp.add_argument("--at", default=None, metavar="RE,IM")
    sp.add_argument("--boundary", action="store_true")
    sp.add_argument("--grid", type=int, default=512)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("validate", help="check family invariants")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--boundary-tol", type=float, default=1e-8)
    sp.add_argument("--grid", type=int, default=512)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("solve", help="solve an extremal problem")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--boundary-tol", type=float, default=1e-8)
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--starts", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--r-pattern", default=None)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("factor", help="factor a self-inversive polynomial")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("fit", help="fit boundary data to the family")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--m", type=int, default=1)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("functional", help="build or evaluate functionals")
    common(sp)
    sp.set_defaults(func=cmd_functional)

    sp = sub.add_parser("oracle", help="closed-form and brute-force bounds")
    common(sp)
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("plot-data", help="dump boundary grids as CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.add_argument("--grid", type=int, default=512)
    sp.set_defaults(func=cmd_plot_data)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
