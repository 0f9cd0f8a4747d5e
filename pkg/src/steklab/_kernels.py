"""Numerical kernels with a numba fast path and a pure-numpy fallback.

Both implementations are always importable (``*_numba`` aliases fall back to
the numpy versions when numba is unavailable).  The active pair is selected
once at import time: set ``STEKLAB_NO_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("STEKLAB_NO_NUMBA", "") not in ("", "0")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

USING_NUMBA = HAS_NUMBA and not _FORCE_NUMPY

JACOBI_MAX_SWEEPS = 30
JACOBI_TOL = 1e-14
BESSEL_TERM_TOL = 1e-17
_BESSEL_MAX_TERMS = 500


def _jacobi_core_numpy(A, max_sweeps, tol):
    """Cyclic Jacobi diagonalization, vectorized row/column rotations.

    Returns (eigvals_unsorted, rotation matrix V, sweeps, off_norm).
    """
    d = A.shape[0]
    A = np.array(A, dtype=np.float64)
    V = np.eye(d)
    norm_a = np.sqrt(np.sum(A * A))
    if d < 2 or norm_a == 0.0:
        return np.diag(A).copy(), V, 0, 0.0
    skip = tol * norm_a / (d * d)
    sweeps = 0
    off = 0.0
    for sweep in range(max_sweeps):
        off2 = np.sum(A * A) - np.sum(np.diag(A) ** 2)
        off = np.sqrt(max(off2, 0.0))
        if off <= tol * norm_a:
            break
        sweeps = sweep + 1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0 / (theta - np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                v_p = V[:, p].copy()
                v_q = V[:, q].copy()
                V[:, p] = c * v_p - s * v_q
                V[:, q] = s * v_p + c * v_q
    return np.diag(A).copy(), V, sweeps, off


def _bessel_table_numpy(xs, kmax):
    """I_k(x) for k = 0..kmax at each x >= 0, by the ascending power series.

    Terms are added until a term falls below BESSEL_TERM_TOL of the running
    sum (terms grow until m ~ x/2, so the test cannot trigger early).
    """
    xs = np.asarray(xs, dtype=np.float64)
    hx = 0.5 * xs
    hx2 = hx * hx
    out = np.empty((xs.shape[0], kmax + 1))
    for k in range(kmax + 1):
        t = np.ones_like(xs)
        for i in range(1, k + 1):
            t = t * hx / i
        s = t.copy()
        for m in range(1, _BESSEL_MAX_TERMS + 1):
            t = t * hx2 / (m * (m + k))
            s += t
            if np.all(t <= BESSEL_TERM_TOL * s + 1e-300):
                break
        out[:, k] = s
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _jacobi_core_numba(A0, max_sweeps, tol):  # pragma: no cover
        d = A0.shape[0]
        A = A0.copy()
        V = np.eye(d)
        norm2 = 0.0
        for i in range(d):
            for j in range(d):
                norm2 += A[i, j] * A[i, j]
        norm_a = np.sqrt(norm2)
        if d < 2 or norm_a == 0.0:
            return np.diag(A).copy(), V, 0, 0.0
        skip = tol * norm_a / (d * d)
        sweeps = 0
        off = 0.0
        for sweep in range(max_sweeps):
            off2 = 0.0
            for i in range(d - 1):
                for j in range(i + 1, d):
                    off2 += 2.0 * A[i, j] * A[i, j]
            off = np.sqrt(off2)
            if off <= tol * norm_a:
                break
            sweeps = sweep + 1
            for p in range(d - 1):
                for q in range(p + 1, d):
                    apq = A[p, q]
                    if abs(apq) <= skip:
                        continue
                    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                    if theta >= 0.0:
                        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                    else:
                        t = 1.0 / (theta - np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(d):
                        akp = A[k, p]
                        akq = A[k, q]
                        A[k, p] = c * akp - s * akq
                        A[k, q] = s * akp + c * akq
                    for k in range(d):
                        apk = A[p, k]
                        aqk = A[q, k]
                        A[p, k] = c * apk - s * aqk
                        A[q, k] = s * apk + c * aqk
                    for k in range(d):
                        vkp = V[k, p]
                        vkq = V[k, q]
                        V[k, p] = c * vkp - s * vkq
                        V[k, q] = s * vkp + c * vkq
        return np.diag(A).copy(), V, sweeps, off

    @njit(cache=True)
    def _bessel_table_numba(xs, kmax):  # pragma: no cover
        n = xs.shape[0]
        out = np.empty((n, kmax + 1))
        for p in range(n):
            x = xs[p]
            hx = 0.5 * x
            hx2 = hx * hx
            for k in range(kmax + 1):
                if x == 0.0:
                    out[p, k] = 1.0 if k == 0 else 0.0
                    continue
                t = 1.0
                for i in range(1, k + 1):
                    t = t * hx / i
                s = t
                for m in range(1, _BESSEL_MAX_TERMS + 1):
                    t = t * hx2 / (m * (m + k))
                    s += t
                    if t <= BESSEL_TERM_TOL * s:
                        break
                out[p, k] = s
        return out

else:
    _jacobi_core_numba = _jacobi_core_numpy
    _bessel_table_numba = _bessel_table_numpy


def _finish_jacobi(w, V, sweeps, off):
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], {"sweeps": int(sweeps), "off_final": float(off)}


def jacobi_eigh_numpy(A, max_sweeps=JACOBI_MAX_SWEEPS, tol=JACOBI_TOL):
    """Symmetric eigendecomposition by cyclic Jacobi (numpy path).

    Returns (eigenvalues ascending, orthonormal eigenvector columns, info).
    """
    w, V, sweeps, off = _jacobi_core_numpy(np.asarray(A, dtype=np.float64), max_sweeps, tol)
    return _finish_jacobi(w, V, sweeps, off)


def jacobi_eigh_numba(A, max_sweeps=JACOBI_MAX_SWEEPS, tol=JACOBI_TOL):
    """Symmetric eigendecomposition by cyclic Jacobi (numba path)."""
    w, V, sweeps, off = _jacobi_core_numba(
        np.ascontiguousarray(A, dtype=np.float64), max_sweeps, tol
    )
    return _finish_jacobi(w, V, sweeps, off)


def bessel_table_numpy(xs, kmax):
    """Modified Bessel I_0..I_kmax at each x (numpy path); shape (len(xs), kmax+1)."""
    return _bessel_table_numpy(np.asarray(xs, dtype=np.float64), int(kmax))


def bessel_table_numba(xs, kmax):
    """Modified Bessel I_0..I_kmax at each x (numba path)."""
    return _bessel_table_numba(np.ascontiguousarray(xs, dtype=np.float64), int(kmax))


if USING_NUMBA:
    jacobi_eigh = jacobi_eigh_numba
    bessel_table = bessel_table_numba
else:
    jacobi_eigh = jacobi_eigh_numpy
    bessel_table = bessel_table_numpy


def warm_up():
    """Trigger JIT compilation of the active kernels on tiny inputs."""
    jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    bessel_table(np.array([0.5, 1.0]), 3)
