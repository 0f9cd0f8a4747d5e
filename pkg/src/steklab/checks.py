"""Registry of isoperimetric eigenvalue bounds.

Each check compares a spectral quantity (sum, product, reciprocal sum, or a
single eigenvalue) against a geometric functional of the domain.  Slack is
oriented so that slack >= 0 always means the bound holds; conjectural bounds
are flagged so a reproducible fail is reported as a finding, not an error.
"""

from __future__ import annotations

import hashlib
import json
import math
import platform
from dataclasses import dataclass

import numpy as np

from .curves import DomainSpec2D, GeoSummary, boundary_frame, format_domain, recenter
from .curves import geo_summary as curve_geo_summary
from .errors import PreconditionError, SteklabError
from .meshes import MeshSummary, TriMesh, mesh_summary
from .spectra import (
    SolverConfig,
    biharmonic_steklov,
    constant_density,
    curve_spectrum,
    steklov_wentzell,
    surface_spectrum,
    tension_spectrum,
)

GEOM_ERR_REL_2D = 1e-10
CENTERING_RTOL = 1e-6


def ball_volume(n):
    """Volume of the unit ball in n dimensions, by the two-step recursion
    omega_n = omega_{n-2} * 2 pi / n with omega_0 = 1, omega_1 = 2."""
    if n < 0:
        raise PreconditionError("ball_volume needs n >= 0")
    if n <= 1:
        return float(n + 1)
    return ball_volume(n - 2) * 2.0 * math.pi / n


@dataclass(frozen=True)
class CheckDef:
    """Static description of one bound."""

    id: str
    statement: str
    orientation: str      # 'upper': spectral side <= geometric side; 'lower': >=
    spectrum: str | None  # key into the spectra dict; None for geometry-only
    centering: str        # 'none' | 'volume' | 'boundary'
    conjecture: str       # 'never' | 'always' | 'nonconvex_high_d'
    convex_only: bool     # convexity required when n >= 3
    dims: tuple


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check on one domain."""

    id: str
    lhs: float
    rhs: float
    slack: float
    rel_slack: float
    err: float
    status: str           # 'pass' | 'fail' | 'inconclusive'
    conjecture: bool
    digest: str


@dataclass(frozen=True)
class SuiteReport:
    domain: str
    reports: tuple
    failures: tuple       # (check id, error message) pairs
    environment: dict
    params: dict
    spectra: dict         # spectrum key -> SpectrumResult
    geometry: object      # GeoSummary or MeshSummary of the input domain


@dataclass(frozen=True)
class _DomainData:
    n: int
    vol: float
    bnd: float
    curv_energy: float
    j0: float | None
    jprod: float | None
    bmoments: tuple | None
    convex: bool | None
    centroid_volume: tuple
    centroid_boundary: tuple
    geom_rel: float


def _domain_data(geo):
    if isinstance(geo, GeoSummary):
        return _DomainData(
            n=2,
            vol=geo.area,
            bnd=geo.perimeter,
            curv_energy=geo.curvature_energy,
            j0=geo.j0,
            jprod=geo.jprod,
            bmoments=tuple(geo.boundary_moments),
            convex=geo.convex,
            centroid_volume=tuple(geo.centroid_volume),
            centroid_boundary=tuple(geo.centroid_boundary),
            geom_rel=GEOM_ERR_REL_2D,
        )
    if isinstance(geo, MeshSummary):
        return _DomainData(
            n=3,
            vol=geo.volume,
            bnd=geo.area,
            curv_energy=geo.curvature_energy,
            j0=None,
            jprod=None,
            bmoments=None,
            convex=None,
            centroid_volume=tuple(geo.centroid_volume),
            centroid_boundary=tuple(geo.centroid_boundary),
            geom_rel=geo.h_max**2,
        )
    raise PreconditionError(f"unsupported geometry summary {type(geo).__name__}")


def _eig(spectra, key, n):
    if key not in spectra:
        raise PreconditionError(f"check needs the {key!r} spectrum")
    res = spectra[key]
    if len(res.eigenvalues) < n:
        raise PreconditionError(
            f"{key!r} spectrum carries {len(res.eigenvalues)} eigenvalues, need {n}"
        )
    return res.eigenvalues[:n], res.error_estimate[:n]


def _rho_integrals(params):
    """Boundary integrals of 1/rho and 1/sqrt(rho)."""
    if "rho_inv" in params and "rho_invhalf" in params:
        return float(params["rho_inv"]), float(params["rho_invhalf"])
    domain = params.get("domain")
    rho = params.get("rho")
    if not isinstance(domain, DomainSpec2D) or rho is None:
        raise PreconditionError(
            "weighted checks need rho_inv/rho_invhalf or domain and rho in params"
        )
    frame = boundary_frame(domain, int(params.get("n_boundary", 512)))
    vals = rho(frame.theta)
    return (
        float(np.sum(frame.weights / vals)),
        float(np.sum(frame.weights / np.sqrt(vals))),
    )


# Evaluators return (lhs, rhs, propagated eigenvalue error).

def _ev_reilly(d, spectra, p):
    lam, est = _eig(spectra, "laplace", 1)
    rhs = (d.n - 1) / d.n**2 * d.bnd**2 / d.vol**2
    return lam[0], rhs, est[0]


def _ev_t1_sum(d, spectra, p):
    lam, est = _eig(spectra, "laplace", d.n)
    rhs = (d.n - 1) / d.n * d.bnd**2 / d.vol**2
    return float(np.sum(lam)), rhs, float(np.sum(est))


def _ev_t1_curv(d, spectra, p):
    lam, est = _eig(spectra, "laplace", d.n)
    rhs = (d.n - 1) * math.sqrt(d.bnd) / d.vol * math.sqrt(d.curv_energy)
    return float(np.sum(lam)), rhs, float(np.sum(est))


def _ev_conj_2_1(d, spectra, p):
    lam, est = _eig(spectra, "laplace", d.n)
    rhs = (d.n - 1) * d.bnd / d.vol * (ball_volume(d.n) / d.vol) ** (1.0 / d.n)
    return float(np.sum(lam)), rhs, float(np.sum(est))


def _ev_rem_2_2(d, spectra, p):
    lam, est = _eig(spectra, "laplace", d.n)
    rhs = d.bnd**2 / (4.0 * d.vol**2)
    return lam[d.n - 1], rhs, est[d.n - 1]


def _ev_t3_recip(d, spectra, p):
    lam, est = _eig(spectra, "biharmonic", d.n)
    rhs = (
        d.n**2 * d.vol * (d.vol / ball_volume(d.n)) ** (2.0 / d.n)
        / ((d.n + 2) * d.bnd)
    )
    return float(np.sum(1.0 / lam)), rhs, float(np.sum(est / lam**2))


def _ev_weighted_prod(d, spectra, p):
    lam, est = _eig(spectra, "biharmonic_weighted", d.n)
    rho_inv, _ = _rho_integrals(p)
    lhs = float(np.prod(lam))
    rhs = (ball_volume(d.n) / d.vol) ** 2 * (
        (d.n + 2) / (d.n * d.vol) * rho_inv
    ) ** d.n
    return lhs, rhs, lhs * float(np.sum(est / lam))


def _ev_bp_recip(d, spectra, p):
    lam, est = _eig(spectra, "tension", d.n)
    rhs = d.n / p["tau"] * (d.vol / ball_volume(d.n)) ** (1.0 / d.n)
    return float(np.sum(1.0 / lam)), rhs, float(np.sum(est / lam**2))


def _ev_t4_sum(d, spectra, p):
    lam, est = _eig(spectra, "tension", d.n)
    return float(np.sum(lam)), p["tau"] * d.bnd / d.vol, float(np.sum(est))


def _ev_conj_3_2(d, spectra, p):
    lam, est = _eig(spectra, "tension", d.n)
    lhs = float(np.prod(lam))
    rhs = p["tau"] ** d.n * ball_volume(d.n) / d.vol
    return lhs, rhs, lhs * float(np.sum(est / lam))


def _ev_brock(d, spectra, p):
    lam, est = _eig(spectra, "steklov", d.n)
    rhs = d.n * (d.vol / ball_volume(d.n)) ** (1.0 / d.n)
    return float(np.sum(1.0 / lam)), rhs, float(np.sum(est / lam**2))


def _ev_stek_sum(d, spectra, p):
    lam, est = _eig(spectra, "steklov", d.n)
    return float(np.sum(lam)), d.bnd / d.vol, float(np.sum(est))


def _ev_henrot_prod(d, spectra, p):
    lam, est = _eig(spectra, "steklov", d.n)
    lhs = float(np.prod(lam))
    return lhs, ball_volume(d.n) / d.vol, lhs * float(np.sum(est / lam))


def _ev_t7_sum(d, spectra, p):
    lam, est = _eig(spectra, "wentzell", d.n)
    beta = p["beta"]
    rhs = d.bnd / d.vol + (d.n - 1) * beta / d.n * d.bnd**2 / d.vol**2
    return float(np.sum(lam)), rhs, float(np.sum(est))


def _ev_t8_prod(d, spectra, p):
    lam, est = _eig(spectra, "wentzell", d.n)
    beta = p["beta"]
    lhs = float(np.prod(lam))
    rhs = (1.0 + (d.n - 1) * beta * d.bnd / (d.n * d.vol)) ** d.n * (
        ball_volume(d.n) / d.vol
    )
    return lhs, rhs, lhs * float(np.sum(est / lam))


def _ev_t41_weighted(d, spectra, p):
    lam, est = _eig(spectra, "wentzell_weighted", d.n)
    beta = p["beta"]
    rho_inv, rho_invhalf = _rho_integrals(p)
    rhs = (
        (d.vol + beta * d.bnd) * rho_inv - beta / d.n * rho_invhalf**2
    ) / d.vol**2
    return float(np.sum(lam)), rhs, float(np.sum(est))


def _ev_j0_min(d, spectra, p):
    if d.j0 is None:
        raise PreconditionError("J0_MIN needs 2D moment data")
    r_star = (d.vol / ball_volume(d.n)) ** (1.0 / d.n)
    rhs = d.n * ball_volume(d.n) * r_star ** (d.n + 2) / (d.n + 2)
    return d.j0, rhs, 0.0


def _ev_jprod(d, spectra, p):
    if d.jprod is None:
        raise PreconditionError("JPROD needs 2D moment data")
    rhs = d.vol ** (d.n + 2) / ((d.n + 2) ** d.n * ball_volume(d.n) ** 2)
    return d.jprod, rhs, 0.0


def _ev_lemma_4_1(d, spectra, p):
    if d.bmoments is None:
        raise PreconditionError("LEMMA_4_1 needs boundary moment data")
    lhs = float(np.prod(d.bmoments))
    rhs = d.vol ** (d.n + 1) / ball_volume(d.n)
    return lhs, rhs, 0.0


def _def(id, statement, orientation, spectrum, centering="none",
         conjecture="never", convex_only=False, dims=(2,)):
    return CheckDef(id, statement, orientation, spectrum, centering,
                    conjecture, convex_only, dims)


CHECKS = (
    _def("REILLY", "lam_1 <= (n-1)/n^2 |bnd|^2/|vol|^2",
         "upper", "laplace", dims=(2, 3)),
    _def("T1_SUM", "sum_{i<=n} lam_i <= (n-1)/n |bnd|^2/|vol|^2",
         "upper", "laplace", dims=(2, 3)),
    _def("T1_CURV", "sum_{i<=n} lam_i <= (n-1) sqrt(|bnd| int H^2)/|vol|",
         "upper", "laplace", dims=(2, 3)),
    _def("CONJ_2_1", "sum_{i<=n} lam_i <= (n-1) |bnd|/|vol| (w_n/|vol|)^{1/n}",
         "upper", "laplace", conjecture="always", dims=(2, 3)),
    _def("REM_2_2", "lam_n <= |bnd|^2/(4 |vol|^2)",
         "upper", "laplace", conjecture="always", dims=(2, 3)),
    _def("T3_RECIP", "sum_{i<=n} 1/xi_i >= n^2 |vol| (|vol|/w_n)^{2/n} / ((n+2) |bnd|)",
         "lower", "biharmonic", centering="volume"),
    _def("WEIGHTED_PROD",
         "prod_{j<=n} zeta_j <= (w_n/|vol|)^2 ((n+2)/(n |vol|) int 1/rho)^n",
         "upper", "biharmonic_weighted", centering="volume"),
    _def("BP_RECIP", "sum_{i<=n} 1/lam_{i,tau} >= (n/tau) (|vol|/w_n)^{1/n}",
         "lower", "tension"),
    _def("T4_SUM", "sum_{i<=n} lam_{i,tau} <= tau |bnd|/|vol|",
         "upper", "tension"),
    _def("CONJ_3_2", "prod_{j<=n} lam_{j,tau} <= tau^n w_n/|vol|",
         "upper", "tension", conjecture="always"),
    _def("BROCK", "sum_{i<=n} 1/p_i >= n (|vol|/w_n)^{1/n}",
         "lower", "steklov"),
    _def("STEK_SUM", "sum_{i<=n} p_i <= |bnd|/|vol|",
         "upper", "steklov"),
    _def("HENROT_PROD", "prod_{i<=n} p_i <= w_n/|vol|",
         "upper", "steklov", conjecture="nonconvex_high_d"),
    _def("T7_SUM",
         "sum_{i<=n} lam_{i,beta} <= |bnd|/|vol| + (n-1)beta/n |bnd|^2/|vol|^2",
         "upper", "wentzell"),
    _def("T8_PROD",
         "prod_{i<=n} lam_{i,beta} <= (1 + (n-1)beta|bnd|/(n|vol|))^n w_n/|vol|",
         "upper", "wentzell", centering="boundary", convex_only=True),
    _def("T41_WEIGHTED",
         "sum eta_{i,beta} <= ((|vol|+beta|bnd|) int 1/rho - beta/n (int 1/sqrt(rho))^2)/|vol|^2",
         "upper", "wentzell_weighted"),
    _def("J0_MIN", "J0 >= n w_n R*^{n+2}/(n+2), R* = (|vol|/w_n)^{1/n}",
         "lower", None, centering="volume"),
    _def("JPROD", "prod_k J_k >= |vol|^{n+2}/((n+2)^n w_n^2)",
         "lower", None, centering="volume"),
    _def("LEMMA_4_1", "prod_i int_bnd x_i^2 >= |vol|^{n+1}/w_n",
         "lower", None, centering="boundary", convex_only=True),
)

CHECK_INDEX = {c.id: c for c in CHECKS}

_EVALUATORS = {
    "REILLY": _ev_reilly,
    "T1_SUM": _ev_t1_sum,
    "T1_CURV": _ev_t1_curv,
    "CONJ_2_1": _ev_conj_2_1,
    "REM_2_2": _ev_rem_2_2,
    "T3_RECIP": _ev_t3_recip,
    "WEIGHTED_PROD": _ev_weighted_prod,
    "BP_RECIP": _ev_bp_recip,
    "T4_SUM": _ev_t4_sum,
    "CONJ_3_2": _ev_conj_3_2,
    "BROCK": _ev_brock,
    "STEK_SUM": _ev_stek_sum,
    "HENROT_PROD": _ev_henrot_prod,
    "T7_SUM": _ev_t7_sum,
    "T8_PROD": _ev_t8_prod,
    "T41_WEIGHTED": _ev_t41_weighted,
    "J0_MIN": _ev_j0_min,
    "JPROD": _ev_jprod,
    "LEMMA_4_1": _ev_lemma_4_1,
}


def check_ids(dim=None):
    """Registry ids, optionally restricted to those applicable in dim."""
    if dim is None:
        return [c.id for c in CHECKS]
    return [c.id for c in CHECKS if dim in c.dims]


def _verify_centering(cdef, data):
    if cdef.centering == "none":
        return
    centroid = (
        data.centroid_volume if cdef.centering == "volume"
        else data.centroid_boundary
    )
    scale = data.vol ** (1.0 / data.n)
    if max(abs(c) for c in centroid) > CENTERING_RTOL * scale:
        raise PreconditionError(
            f"{cdef.id} needs the {cdef.centering} centroid at the origin "
            f"(found {centroid})"
        )


def _is_conjecture(cdef, data):
    if cdef.conjecture == "always":
        return True
    if cdef.conjecture == "nonconvex_high_d":
        return data.n >= 3 and not bool(data.convex)
    return False


def _digest(check_id, data, params):
    payload = {
        "id": check_id,
        "n": data.n,
        "vol": round(data.vol, 12),
        "bnd": round(data.bnd, 12),
        "beta": params.get("beta"),
        "tau": params.get("tau"),
        "rho": params["rho"].label() if params.get("rho") else None,
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def evaluate(check_id, geo, spectra, params):
    """Evaluate one bound from precomputed geometry and spectra.

    geo: GeoSummary (2D, centered per the check's declared mode) or
    MeshSummary.  spectra: dict of SpectrumResult keyed by the registry's
    spectrum names.  params: n plus beta/tau/rho and rho integrals as needed.
    """
    if check_id not in CHECK_INDEX:
        raise PreconditionError(f"unknown check id {check_id!r}")
    cdef = CHECK_INDEX[check_id]
    data = _domain_data(geo)
    if data.n != int(params.get("n", data.n)):
        raise PreconditionError("params n disagrees with the geometry summary")
    if data.n not in cdef.dims:
        raise PreconditionError(f"{check_id} does not apply in dimension {data.n}")
    _verify_centering(cdef, data)
    if cdef.convex_only and data.n >= 3 and not bool(data.convex):
        raise PreconditionError(f"{check_id} requires a convex domain for n >= 3")
    lhs, rhs, eig_err = _EVALUATORS[check_id](data, spectra, params)
    slack = rhs - lhs if cdef.orientation == "upper" else lhs - rhs
    err = eig_err + data.geom_rel * abs(rhs)
    if slack > err:
        status = "pass"
    elif slack < -err:
        status = "fail"
    else:
        status = "inconclusive"
    return CheckReport(
        id=check_id,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        rel_slack=float(slack / abs(rhs)),
        err=float(err),
        status=status,
        conjecture=_is_conjecture(cdef, data),
        digest=_digest(check_id, data, params),
    )


def _environment():
    import numpy
    import scipy

    from . import _kernels

    env = {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "kernels": "numba" if _kernels.USING_NUMBA else "numpy",
    }
    if _kernels.HAS_NUMBA:
        import numba

        env["numba"] = numba.__version__
    return env


def _spectra_for(spec, keys, config, beta, tau, rho):
    """Compute each required spectrum once; constant rho = 1 reuses the
    unweighted solves.  A failed solve is recorded, not raised, so the suite
    can complete on the remaining checks."""
    unit_rho = rho is None or (rho.kind == "const" and rho.params[0] == 1.0)
    rho = rho or constant_density(1.0)
    out, errors = {}, {}

    def attempt(key, solver):
        if key not in keys:
            return
        try:
            out[key] = solver()
        except SteklabError as exc:
            errors[key] = str(exc)

    attempt("laplace", lambda: curve_spectrum(spec, m=2, config=config))
    attempt("steklov",
            lambda: steklov_wentzell(spec, beta=0.0, m=2, config=config))
    attempt("wentzell",
            lambda: steklov_wentzell(spec, beta=beta, m=2, config=config))
    if unit_rho and "wentzell" in out and "wentzell_weighted" in keys:
        out["wentzell_weighted"] = out["wentzell"]
    else:
        attempt("wentzell_weighted",
                lambda: steklov_wentzell(spec, beta=beta, rho=rho, m=2,
                                         config=config))
    attempt("biharmonic", lambda: biharmonic_steklov(spec, m=2, config=config))
    if unit_rho and "biharmonic" in out and "biharmonic_weighted" in keys:
        out["biharmonic_weighted"] = out["biharmonic"]
    else:
        attempt("biharmonic_weighted",
                lambda: biharmonic_steklov(spec, rho=rho, m=2, config=config))
    attempt("tension", lambda: tension_spectrum(spec, tau, m=2, config=config))
    return out, errors


def _resolve_ids(ids, dim):
    if ids is None:
        selected = check_ids(dim)
    else:
        selected = list(ids)
        for cid in selected:
            if cid not in CHECK_INDEX:
                raise PreconditionError(f"unknown check id {cid!r}")
            if dim not in CHECK_INDEX[cid].dims:
                raise PreconditionError(
                    f"{cid} does not apply in dimension {dim}"
                )
    return [c.id for c in CHECKS if c.id in set(selected)]


def run_suite(target, ids=None, config=None, beta=0.5, tau=1.0, rho=None):
    """Run a set of checks on a 2D domain spec or a triangle mesh.

    Each required spectrum is computed once and shared; geometry is
    recomputed per required centering (the spectra are translation
    invariant).  Per-check errors are recorded and the suite completes.
    """
    if isinstance(target, TriMesh):
        return _run_suite_mesh(target, ids)
    if not isinstance(target, DomainSpec2D):
        raise PreconditionError(f"unsupported suite target {type(target).__name__}")
    cfg = config or SolverConfig()
    selected = _resolve_ids(ids, 2)
    defs = [CHECK_INDEX[cid] for cid in selected]
    spectra, spectrum_errors = _spectra_for(
        spec=target,
        keys={c.spectrum for c in defs if c.spectrum},
        config=cfg,
        beta=beta,
        tau=tau,
        rho=rho,
    )
    geos = {"none": curve_geo_summary(target)}
    for mode in {c.centering for c in defs} - {"none"}:
        geos[mode] = curve_geo_summary(recenter(target, mode))
    rho_fn = rho or constant_density(1.0)
    frame = boundary_frame(target, cfg.n_boundary)
    rho_vals = rho_fn(frame.theta)
    params = {
        "n": 2,
        "beta": beta,
        "tau": tau,
        "rho": rho_fn,
        "domain": target,
        "rho_inv": float(np.sum(frame.weights / rho_vals)),
        "rho_invhalf": float(np.sum(frame.weights / np.sqrt(rho_vals))),
    }
    reports, failures = [], []
    for cdef in defs:
        if cdef.spectrum in spectrum_errors:
            failures.append((cdef.id, spectrum_errors[cdef.spectrum]))
            continue
        try:
            reports.append(evaluate(cdef.id, geos[cdef.centering], spectra, params))
        except SteklabError as exc:
            failures.append((cdef.id, str(exc)))
    return SuiteReport(
        domain=format_domain(target),
        reports=tuple(reports),
        failures=tuple(failures),
        environment=_environment(),
        params={"beta": beta, "tau": tau, "rho": rho_fn.label()},
        spectra=spectra,
        geometry=geos["none"],
    )


def _run_suite_mesh(mesh, ids):
    selected = _resolve_ids(ids, 3)
    spectra = {"laplace": surface_spectrum(mesh, m=3)}
    geo = mesh_summary(mesh)
    params = {"n": 3}
    reports, failures = [], []
    for cid in selected:
        try:
            reports.append(evaluate(cid, geo, spectra, params))
        except SteklabError as exc:
            failures.append((cid, str(exc)))
    return SuiteReport(
        domain=f"mesh:{mesh.n_vertices}v",
        reports=tuple(reports),
        failures=tuple(failures),
        environment=_environment(),
        params={},
        spectra=spectra,
        geometry=geo,
    )
