"""Parameter sweeps and minimal-slack searches over domain families.

Families: ellipses of unit area (a, 1/a), cosine-perturbed disks, and seeded
random Fourier-radius domains.  Sweeps evaluate a set of checks per instance;
min_slack refines the sweep minimum by golden-section search.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .checks import CHECK_INDEX, run_suite
from .curves import (
    boundary_frame,
    ellipse,
    fourier_radius,
    perturbed_disk,
    radius_profile,
    recenter,
    validate,
)
from .errors import PreconditionError, SteklabError

CSV_HEADER = "param,check_id,lhs,rhs,slack,rel_slack,err,status"
GOLDEN_XTOL = 1e-4
MIN_RADIUS_FRACTION = 0.2
MAX_ASPECT = 5.0
_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FamilySpec:
    """One-parameter or seeded family of 2D domains.

    family 'ellipse': grid over a, domains Ellipse(a, 1/a).
    family 'pdisk': grid over eps, domains PerturbedDisk(1, eps, m).
    family 'fourier-random': count seeded random Fourier-radius domains.
    """

    family: str
    grid: tuple | None = None      # (start, stop, steps)
    m: int = 3
    count: int = 0
    bound: float = 0.0
    seed: int = 0
    checks: tuple = ()
    beta: float = 0.5
    tau: float = 1.0


@dataclass(frozen=True)
class SweepRow:
    param: float
    check_id: str
    report: object                 # CheckReport, or None when the solve failed
    error: str | None


@dataclass(frozen=True)
class SweepTable:
    family: FamilySpec
    rows: tuple


@dataclass(frozen=True)
class MinSlackResult:
    param: float
    slack: float
    report: object
    non_unimodal: bool


def _check_list(fam):
    ids = tuple(fam.checks)
    if not ids:
        raise PreconditionError("family declares no checks")
    for cid in ids:
        if cid not in CHECK_INDEX:
            raise PreconditionError(f"unknown check id {cid!r}")
    return ids


def _grid(fam):
    if fam.grid is None:
        raise PreconditionError(f"{fam.family} family needs a (start, stop, steps) grid")
    start, stop, steps = fam.grid
    if steps < 2 or stop <= start:
        raise PreconditionError("grid needs steps >= 2 and stop > start")
    return np.linspace(float(start), float(stop), int(steps))


def domain_at(fam, param):
    """Instantiate the grid family at a parameter value."""
    if fam.family == "ellipse":
        if param <= 0:
            raise PreconditionError("ellipse parameter must be positive")
        return validate(ellipse(param, 1.0 / param))
    if fam.family == "pdisk":
        return validate(perturbed_disk(1.0, param, fam.m))
    raise PreconditionError(f"{fam.family} is not a grid family")


def random_domains(count, bound, seed, n_harmonics=3):
    """Seeded random Fourier-radius domains around a0 = 1.

    Draws are rejected (and redrawn) when the radius dips below
    MIN_RADIUS_FRACTION of a0 or the recentred domain has boundary-distance
    aspect ratio above MAX_ASPECT, keeping default solver orders adequate.
    """
    if count < 1 or bound <= 0:
        raise PreconditionError("need count >= 1 and bound > 0")
    rng = np.random.default_rng(seed)
    theta = np.linspace(0.0, 2.0 * np.pi, 2048, endpoint=False)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise PreconditionError("rejection sampling failed; lower the bound")
        coeffs = rng.uniform(-bound, bound, size=2 * n_harmonics)
        spec = fourier_radius((1.0, *coeffs))
        r = radius_profile(spec, theta)[0]
        if np.min(r) <= MIN_RADIUS_FRACTION:
            continue
        frame = boundary_frame(recenter(spec, "volume"), 256)
        dist = np.hypot(frame.nodes[:, 0], frame.nodes[:, 1])
        if np.max(dist) / np.min(dist) > MAX_ASPECT:
            continue
        out.append(spec)
    return out


def instances(fam):
    """Ordered (parameter, domain) pairs for the family."""
    if fam.family in ("ellipse", "pdisk"):
        return [(float(p), domain_at(fam, float(p))) for p in _grid(fam)]
    if fam.family == "fourier-random":
        domains = random_domains(fam.count, fam.bound, fam.seed)
        return [(float(i), spec) for i, spec in enumerate(domains)]
    raise PreconditionError(f"unknown family {fam.family!r}")


def _rows_for(fam, param, spec, ids, config):
    try:
        suite = run_suite(spec, ids=ids, config=config, beta=fam.beta, tau=fam.tau)
    except SteklabError as exc:
        return [SweepRow(param, cid, None, str(exc)) for cid in ids]
    by_id = {r.id: r for r in suite.reports}
    failed = dict(suite.failures)
    return [
        SweepRow(param, cid, by_id.get(cid), failed.get(cid))
        for cid in ids
    ]


def sweep(fam, config=None):
    """One row per (instance, check), ordered by parameter then registry.

    Per-row solver failures are recorded in the row; the sweep completes.
    """
    ids = _check_list(fam)
    rows = []
    for param, spec in instances(fam):
        rows.extend(_rows_for(fam, param, spec, ids, config))
    return SweepTable(family=fam, rows=tuple(rows))


def to_csv(table):
    """Serialize a sweep with the stable header and 12 significant digits."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in table.rows:
        if row.report is None:
            buf.write(f"{row.param:.12g},{row.check_id},nan,nan,nan,nan,nan,error\n")
            continue
        r = row.report
        buf.write(
            f"{row.param:.12g},{r.id},{r.lhs:.12g},{r.rhs:.12g},"
            f"{r.slack:.12g},{r.rel_slack:.12g},{r.err:.12g},{r.status}\n"
        )
    return buf.getvalue()


def _slack_at(fam, check_id, param, config):
    spec = domain_at(fam, param)
    suite = run_suite(spec, ids=[check_id], config=config, beta=fam.beta, tau=fam.tau)
    if suite.failures:
        raise PreconditionError(
            f"{check_id} failed at param {param}: {suite.failures[0][1]}"
        )
    return suite.reports[0]


def _golden_section(f, lo, hi, xtol):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def min_slack(fam, check_id, config=None):
    """Sweep-then-refine minimizer of the check's slack over a grid family.

    Golden-section refinement to parameter tolerance GOLDEN_XTOL between the
    grid neighbors of the sweep minimum.  A slack profile with more than one
    grid-local minimum is flagged non-unimodal and the grid minimum is
    returned unrefined.
    """
    if fam.family not in ("ellipse", "pdisk"):
        raise PreconditionError("min_slack needs a single-parameter grid family")
    if check_id not in CHECK_INDEX:
        raise PreconditionError(f"unknown check id {check_id!r}")
    params = _grid(fam)
    reports = [_slack_at(fam, check_id, float(p), config) for p in params]
    slacks = np.array([r.slack for r in reports])
    i0 = int(np.argmin(slacks))

    local_minima = 0
    for i in range(len(slacks)):
        left_ok = i == 0 or slacks[i] <= slacks[i - 1]
        right_ok = i == len(slacks) - 1 or slacks[i] <= slacks[i + 1]
        if left_ok and right_ok:
            local_minima += 1
    if local_minima > 1:
        return MinSlackResult(
            param=float(params[i0]),
            slack=float(slacks[i0]),
            report=reports[i0],
            non_unimodal=True,
        )

    lo = float(params[max(i0 - 1, 0)])
    hi = float(params[min(i0 + 1, len(params) - 1)])
    best = _golden_section(
        lambda p: _slack_at(fam, check_id, p, config).slack, lo, hi, GOLDEN_XTOL
    )
    report = _slack_at(fam, check_id, best, config)
    if report.slack > slacks[i0]:
        best, report = float(params[i0]), reports[i0]
    return MinSlackResult(
        param=float(best),
        slack=float(report.slack),
        report=report,
        non_unimodal=False,
    )
