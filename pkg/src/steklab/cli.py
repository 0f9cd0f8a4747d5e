"""Command-line front end: ball tables, check suites, family sweeps,
convergence studies, and mesh checks, emitted as JSON/CSV/text.

Exit codes: 0 all checks pass or inconclusive; 2 at least one proven bound
fails; 3 only conjectured bounds fail (a finding); 1 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checks import CHECK_INDEX, check_ids, run_suite
from .curves import GeoSummary, format_domain, parse_domain
from .errors import SteklabError
from .explore import FamilySpec, sweep, to_csv
from .meshes import MeshSummary, icosphere, read_off
from .spectra import (
    SolverConfig,
    ball_spectrum,
    biharmonic_steklov,
    parse_rho,
    steklov_wentzell,
    tension_spectrum,
)

_SPECTRUM_ORDER = (
    "laplace",
    "steklov",
    "wentzell",
    "wentzell_weighted",
    "biharmonic",
    "biharmonic_weighted",
    "tension",
)


def _r12(x):
    return float(f"{float(x):.12g}")


def _jsonify(obj):
    """Round every float to 12 significant digits, preserving key order."""
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    return _r12(obj)


def _geometry_json(geo):
    if isinstance(geo, GeoSummary):
        return {
            "area": geo.area,
            "perimeter": geo.perimeter,
            "centroid_volume": list(geo.centroid_volume),
            "centroid_boundary": list(geo.centroid_boundary),
            "j_moments": list(geo.j_moments),
            "j0": geo.j0,
            "jprod": geo.jprod,
            "boundary_moments": list(geo.boundary_moments),
            "curvature_energy": geo.curvature_energy,
            "convex": geo.convex,
        }
    if isinstance(geo, MeshSummary):
        return {
            "area": geo.area,
            "volume": geo.volume,
            "centroid_volume": list(geo.centroid_volume),
            "centroid_boundary": list(geo.centroid_boundary),
            "curvature_energy": geo.curvature_energy,
            "h_max": geo.h_max,
        }
    raise SteklabError(f"unsupported geometry summary {type(geo).__name__}")


def _spectrum_json(res):
    return {
        "problem": res.problem,
        "domain": res.domain,
        "params": res.params,
        "eigenvalues": list(res.eigenvalues),
        "error_estimate": list(res.error_estimate),
        "diagnostics": res.diagnostics,
        "discretization": res.discretization,
    }


def _check_json(report):
    return {
        "id": report.id,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "rel_slack": report.rel_slack,
        "err": report.err,
        "status": report.status,
        "conjecture": report.conjecture,
    }


def _suite_json(suite, config_block):
    # Unit-density aliases share the unweighted solve; list each solve once.
    spectra, seen = {}, []
    for key in _SPECTRUM_ORDER:
        res = suite.spectra.get(key)
        if res is None or any(res is s for s in seen):
            continue
        seen.append(res)
        spectra[key] = _spectrum_json(res)
    return _jsonify(
        {
            "version": 1,
            "config": config_block,
            "geometry": _geometry_json(suite.geometry),
            "spectra": spectra,
            "checks": [_check_json(r) for r in suite.reports],
            "failures": [list(f) for f in suite.failures],
        }
    )


def _suite_csv(suite, label):
    lines = ["param,check_id,lhs,rhs,slack,rel_slack,err,status"]
    for r in suite.reports:
        lines.append(
            f"{label},{r.id},{r.lhs:.12g},{r.rhs:.12g},{r.slack:.12g},"
            f"{r.rel_slack:.12g},{r.err:.12g},{r.status}"
        )
    for cid, _ in suite.failures:
        lines.append(f"{label},{cid},nan,nan,nan,nan,nan,error")
    return "\n".join(lines) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(reports):
    if any(r.status == "fail" and not r.conjecture for r in reports):
        return 2
    if any(r.status == "fail" and r.conjecture for r in reports):
        return 3
    return 0


def _domain_arg(text):
    try:
        return parse_domain(text)
    except SteklabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rho_arg(text):
    try:
        return parse_rho(text)
    except SteklabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _checks_arg(text):
    ids = [t.strip() for t in text.split(",") if t.strip()]
    for cid in ids:
        if cid not in CHECK_INDEX:
            raise argparse.ArgumentTypeError(f"unknown check id {cid!r}")
    if not ids:
        raise argparse.ArgumentTypeError("empty check list")
    return ids


def _orders_arg(text):
    try:
        start, stop, step = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"orders must be START:STOP:STEP, got {text!r}"
        ) from exc
    if start < 2 or stop < start or step < 1:
        raise argparse.ArgumentTypeError("orders need 2 <= START <= STOP, STEP >= 1")
    return list(range(start, stop + 1, step))


def _family_arg(text):
    kind, _, rest = text.partition(":")
    parts = rest.split(",") if rest else []
    try:
        if kind == "ellipse" and len(parts) == 3:
            return ("ellipse", (float(parts[0]), float(parts[1]), int(parts[2])), None)
        if kind == "pdisk" and len(parts) == 4:
            return (
                "pdisk",
                (float(parts[0]), float(parts[1]), int(parts[2])),
                int(parts[3]),
            )
        if kind == "fourier" and len(parts) == 3:
            return ("fourier-random", (int(parts[0]), float(parts[1]), int(parts[2])), None)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse family {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(
        f"cannot parse family {text!r}; use ellipse:START,STOP,STEPS, "
        "pdisk:START,STOP,STEPS,M, or fourier:COUNT,BOUND,SEED"
    )


def _add_solver_knobs(p):
    p.add_argument("-K", "--k-order", type=int, default=SolverConfig.k_order)
    p.add_argument("-N", "--n-boundary", type=int, default=512)
    p.add_argument("--n-theta", type=int, default=256)
    p.add_argument("--n-r", type=int, default=24)
    p.add_argument("--eps-b", type=float, default=1e-12)
    p.add_argument("--eps-c", type=float, default=1e-8)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--rho", type=_rho_arg, default=None)


def _solver_config(args):
    return SolverConfig(
        k_order=args.k_order,
        n_boundary=args.n_boundary,
        n_theta=args.n_theta,
        n_r=args.n_r,
        eps_b=args.eps_b,
        eps_c=args.eps_c,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="steklab",
        description="Spectral checks of isoperimetric eigenvalue bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="closed-form ball spectra")
    p.add_argument("--problem", required=True,
                   choices=["laplace", "biharmonic", "steklov", "wentzell", "tension"])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None)

    p = sub.add_parser("check", help="run bound checks on a 2D domain")
    p.add_argument("--domain", type=_domain_arg, required=True)
    p.add_argument("--checks", type=_checks_arg, default=None)
    _add_solver_knobs(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("sweep", help="sweep a domain family")
    p.add_argument("--family", type=_family_arg, required=True)
    p.add_argument("--checks", type=_checks_arg, default=None)
    _add_solver_knobs(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None)

    p = sub.add_parser("converge", help="eigenvalues vs trial-space order")
    p.add_argument("--domain", type=_domain_arg, required=True)
    p.add_argument("--problem", required=True,
                   choices=["steklov", "wentzell", "biharmonic", "tension"])
    p.add_argument("--orders", type=_orders_arg, required=True)
    _add_solver_knobs(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None)

    p = sub.add_parser("mesh-check", help="run surface checks on a triangle mesh")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--mesh", default=None, help="OFF file path")
    src.add_argument("--icosphere", type=int, default=None, help="subdivision level")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--checks", type=_checks_arg, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    return parser


def _cmd_ball(args):
    rows = ball_spectrum(
        args.problem, args.dim, args.radius,
        beta=args.beta, tau=args.tau, k_max=args.kmax,
    )
    if args.format == "json":
        payload = _jsonify(
            {
                "version": 1,
                "config": {
                    "command": "ball",
                    "problem": args.problem,
                    "dim": args.dim,
                    "radius": args.radius,
                    "beta": args.beta,
                    "tau": args.tau,
                    "kmax": args.kmax,
                },
                "table": [
                    {"k": i + 1, "eigenvalue": val, "multiplicity": mult}
                    for i, (val, mult) in enumerate(rows)
                ],
            }
        )
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    lines = [f"problem={args.problem} dim={args.dim} radius={args.radius:.12g}"]
    for i, (val, mult) in enumerate(rows):
        lines.append(f"k={i + 1} eigenvalue={val:.12g} multiplicity={mult}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _config_block(args, command):
    block = {
        "command": command,
        "beta": args.beta,
        "tau": args.tau,
        "rho": args.rho.label() if args.rho else "const:1",
        "k_order": args.k_order,
        "n_boundary": args.n_boundary,
        "n_theta": args.n_theta,
        "n_r": args.n_r,
        "eps_b": args.eps_b,
        "eps_c": args.eps_c,
    }
    return block


def _cmd_check(args):
    suite = run_suite(
        args.domain,
        ids=args.checks,
        config=_solver_config(args),
        beta=args.beta,
        tau=args.tau,
        rho=args.rho,
    )
    config_block = {"domain": suite.domain, **_config_block(args, "check"),
                    "checks": [r.id for r in suite.reports]}
    if args.format == "csv":
        _emit(_suite_csv(suite, suite.domain), args.output)
    else:
        _emit(json.dumps(_suite_json(suite, config_block), indent=2) + "\n",
              args.output)
    return _exit_code(suite.reports)


def _cmd_sweep(args):
    family, grid_or_random, m = args.family
    ids = tuple(args.checks) if args.checks else tuple(check_ids(2))
    if family == "fourier-random":
        count, bound, seed = grid_or_random
        fam = FamilySpec(family=family, count=count, bound=bound, seed=seed,
                         checks=ids, beta=args.beta, tau=args.tau)
    else:
        fam = FamilySpec(family=family, grid=grid_or_random, m=m or 3,
                         checks=ids, beta=args.beta, tau=args.tau)
    table = sweep(fam, config=_solver_config(args))
    if args.format == "json":
        rows = []
        for row in table.rows:
            if row.report is None:
                rows.append({"param": row.param, "id": row.check_id,
                             "status": "error", "error": row.error})
            else:
                rows.append({"param": row.param, **_check_json(row.report)})
        payload = _jsonify({
            "version": 1,
            "config": {"family": family, **_config_block(args, "sweep"),
                       "checks": list(ids)},
            "rows": rows,
        })
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(to_csv(table), args.output)
    reports = [row.report for row in table.rows if row.report is not None]
    return _exit_code(reports)


def _cmd_converge(args):
    solver = {
        "steklov": lambda cfg: steklov_wentzell(args.domain, beta=0.0, m=2, config=cfg),
        "wentzell": lambda cfg: steklov_wentzell(
            args.domain, beta=args.beta, rho=args.rho, m=2, config=cfg
        ),
        "biharmonic": lambda cfg: biharmonic_steklov(
            args.domain, rho=args.rho, m=2, config=cfg
        ),
        "tension": lambda cfg: tension_spectrum(args.domain, args.tau, m=2, config=cfg),
    }[args.problem]
    base = _solver_config(args)
    rows = []
    for k_order in args.orders:
        cfg = SolverConfig(
            k_order=k_order,
            n_boundary=base.n_boundary,
            n_theta=base.n_theta,
            n_r=base.n_r,
            eps_b=base.eps_b,
            eps_c=base.eps_c,
            with_error=False,
        )
        res = solver(cfg)
        rows.append((k_order, list(res.eigenvalues)))
    if args.format == "json":
        payload = _jsonify({
            "version": 1,
            "config": {"domain": format_domain(args.domain),
                       **_config_block(args, "converge"),
                       "problem": args.problem},
            "table": [{"k_order": k, "eigenvalues": lam} for k, lam in rows],
        })
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [f"problem={args.problem}"]
        for k_order, lam in rows:
            vals = " ".join(f"{v:.12g}" for v in lam)
            lines.append(f"K={k_order} eigenvalues={vals}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_mesh_check(args):
    if args.mesh is not None:
        mesh = read_off(args.mesh)
    else:
        mesh = icosphere(args.icosphere, radius=args.radius)
    suite = run_suite(mesh, ids=args.checks)
    config_block = {
        "command": "mesh-check",
        "mesh": args.mesh or f"icosphere:{args.icosphere}",
        "radius": args.radius,
        "checks": [r.id for r in suite.reports],
    }
    if args.format == "csv":
        _emit(_suite_csv(suite, suite.domain), args.output)
    else:
        _emit(json.dumps(_suite_json(suite, config_block), indent=2) + "\n",
              args.output)
    return _exit_code(suite.reports)


_COMMANDS = {
    "ball": _cmd_ball,
    "check": _cmd_check,
    "sweep": _cmd_sweep,
    "converge": _cmd_converge,
    "mesh-check": _cmd_mesh_check,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except (SteklabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
