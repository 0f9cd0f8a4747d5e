"""Trefftz trial families: harmonic polynomials, their |x|^2 multiples, and
modified-Helmholtz (Bessel) functions, with exact derivatives up to second
order.

Every function is the real or imaginary part of a complex field f(z, zbar),
so values, gradients, Hessians, and Laplacians all come from the Wirtinger
derivatives (f_z, f_zbar, f_zz, f_zzbar, f_zbarzbar):

    u_x = Re/Im(f_z + f_zbar)         u_xx = Re/Im(f_zz + 2 f_zzbar + f_zbzb)
    lap = Re/Im(4 f_zzbar)            u_yy = Re/Im(-f_zz + 2 f_zzbar - f_zbzb)

Scaling by r_char (the largest domain radius) keeps |z/r_char| <= 1 on the
closure, which controls the conditioning of the resulting Gram matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import bessel_table
from .errors import PreconditionError, RangeError

BESSEL_ARG_MAX = 120.0
HELMHOLTZ_ARG_MAX = 60.0


@dataclass(frozen=True)
class BasisFn:
    """One trial function: family, angular order, parity, length scale."""

    family: str   # 'harmonic' | 'almansi' | 'modhelmholtz'
    k: int
    parity: str   # 'cos' (real part) | 'sin' (imaginary part)
    r_char: float
    tau: float = 0.0


@dataclass(frozen=True)
class EvalRecord:
    """Pointwise value and derivatives of one trial function."""

    value: float
    gradient: np.ndarray   # (2,)
    hessian: np.ndarray    # (2, 2) symmetric
    laplacian: float


def build_space(problem, k_max, r_char, tau=None):
    """Ordered trial space for one boundary-value problem.

    harmonic: 2K+1 functions; biharmonic and tension: 4K+2 (the order-0
    member of each family has cos parity only).
    """
    if k_max < 2:
        raise PreconditionError("build_space needs K >= 2")
    if r_char <= 0:
        raise PreconditionError("build_space needs r_char > 0")

    def family(name, tau_val=0.0):
        fns = [BasisFn(name, 0, "cos", r_char, tau_val)]
        for k in range(1, k_max + 1):
            fns.append(BasisFn(name, k, "cos", r_char, tau_val))
            fns.append(BasisFn(name, k, "sin", r_char, tau_val))
        return fns

    if problem == "harmonic":
        return family("harmonic")
    if problem == "biharmonic":
        return family("harmonic") + family("almansi")
    if problem == "tension":
        if tau is None or tau <= 0:
            raise PreconditionError("tension space needs tau > 0")
        return family("harmonic") + family("modhelmholtz", float(tau))
    raise PreconditionError(f"unknown trial problem {problem!r}")


def bessel_i(k, x):
    """Modified Bessel I_k(x) and derivative, by the ascending series."""
    if k < 0:
        raise RangeError("bessel_i needs k >= 0")
    if not 0.0 <= x <= BESSEL_ARG_MAX:
        raise RangeError(f"bessel_i argument {x} outside [0, {BESSEL_ARG_MAX}]")
    row = bessel_table(np.array([float(x)]), k + 1)[0]
    deriv = row[1] if k == 0 else 0.5 * (row[k - 1] + row[k + 1])
    return float(row[k]), float(deriv)


def _take(parity, arrs):
    (f, fz, fzb, fzz, fzzb, fzbzb) = arrs
    if parity == "cos":
        val = f.real
        gx = (fz + fzb).real
        gy = (fzb - fz).imag
        hxx = (fzz + 2.0 * fzzb + fzbzb).real
        hxy = (fzbzb - fzz).imag
        hyy = (-fzz + 2.0 * fzzb - fzbzb).real
        lap = 4.0 * fzzb.real
    else:
        val = f.imag
        gx = (fz + fzb).imag
        gy = (fz - fzb).real
        hxx = (fzz + 2.0 * fzzb + fzbzb).imag
        hxy = (fzz - fzbzb).real
        hyy = (-fzz + 2.0 * fzzb - fzbzb).imag
        lap = 4.0 * fzzb.imag
    return val, gx, gy, hxx, hxy, hyy, lap


def eval_block(fns, points):
    """Evaluate many trial functions at many points.

    Returns (values (F, P), gradients (F, P, 2), hessians (F, P, 2, 2),
    laplacians (F, P)).
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    z = points[:, 0] + 1j * points[:, 1]
    n_pts = z.shape[0]
    n_fns = len(fns)
    vals = np.empty((n_fns, n_pts))
    grads = np.empty((n_fns, n_pts, 2))
    hess = np.empty((n_fns, n_pts, 2, 2))
    laps = np.empty((n_fns, n_pts))

    k_top = max(fn.k for fn in fns)
    if len({fn.r_char for fn in fns}) != 1:
        raise PreconditionError("eval_block needs a single shared r_char")
    r_char = fns[0].r_char
    zeta = z / r_char
    # zp[k] = (z / r_char)^k
    zp = np.empty((k_top + 1, n_pts), dtype=np.complex128)
    zp[0] = 1.0
    for k in range(1, k_top + 1):
        zp[k] = zp[k - 1] * zeta

    zero = np.zeros(n_pts, dtype=np.complex128)
    phi = None
    phi_norm = None
    taus = {fn.tau for fn in fns if fn.family == "modhelmholtz"}
    if len(taus) > 1:
        raise PreconditionError("eval_block needs a single shared tau")
    if taus:
        (tau,) = taus
        s = np.sqrt(tau)
        radii = np.abs(z)
        if np.max(s * radii) > HELMHOLTZ_ARG_MAX:
            raise RangeError(
                f"modhelmholtz argument exceeds {HELMHOLTZ_ARG_MAX}; "
                "shrink tau or the domain"
            )
        bes = bessel_table(s * radii, k_top + 2)
        unit = np.exp(1j * np.angle(z))
        unit[radii == 0.0] = 1.0
        ang = np.empty((k_top + 3, n_pts), dtype=np.complex128)
        ang[0] = 1.0
        for k in range(1, k_top + 3):
            ang[k] = ang[k - 1] * unit
        # phi[k] = I_k(s r) e^{i k theta}; negative orders are conjugates
        table = bes.T * ang
        phi_norm = bessel_table(np.array([s * r_char]), k_top + 2)[0]

        def phi(j):
            return table[j] if j >= 0 else np.conj(table[-j])

    for i, fn in enumerate(fns):
        k = fn.k
        if fn.family == "harmonic":
            f = zp[k]
            fz = k * zp[k - 1] / r_char if k >= 1 else zero
            fzz = k * (k - 1) * zp[k - 2] / r_char**2 if k >= 2 else zero
            arrs = (f, fz, zero, fzz, zero, zero)
        elif fn.family == "almansi":
            zb = np.conj(z)
            f = z * zb * zp[k]
            fz = (k + 1) * zb * zp[k]
            fzb = z * zp[k]
            fzz = k * (k + 1) * zb * zp[k - 1] / r_char if k >= 1 else zero
            fzzb = (k + 1) * zp[k]
            arrs = (f, fz, fzb, fzz, fzzb, zero)
        elif fn.family == "modhelmholtz":
            s = np.sqrt(fn.tau)
            c1 = 0.5 * s
            c2 = 0.25 * fn.tau
            f = phi(k)
            arrs = (
                f,
                c1 * phi(k - 1),
                c1 * phi(k + 1),
                c2 * phi(k - 2),
                c2 * phi(k),
                c2 * phi(k + 2),
            )
            arrs = tuple(a / phi_norm[k] for a in arrs)
        else:
            raise PreconditionError(f"unknown basis family {fn.family!r}")
        val, gx, gy, hxx, hxy, hyy, lap = _take(fn.parity, arrs)
        vals[i] = val
        grads[i, :, 0] = gx
        grads[i, :, 1] = gy
        hess[i, :, 0, 0] = hxx
        hess[i, :, 0, 1] = hxy
        hess[i, :, 1, 0] = hxy
        hess[i, :, 1, 1] = hyy
        laps[i] = lap
    return vals, grads, hess, laps


def eval_at(fn, point):
    """Evaluate one trial function at one point."""
    point = np.asarray(point, dtype=np.float64)
    if not np.all(np.isfinite(point)):
        raise RangeError("eval_at needs a finite point")
    vals, grads, hess, laps = eval_block([fn], point[None, :])
    return EvalRecord(
        value=float(vals[0, 0]),
        gradient=grads[0, 0].copy(),
        hessian=hess[0, 0].copy(),
        laplacian=float(laps[0, 0]),
    )
