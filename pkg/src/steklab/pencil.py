"""Dense symmetric generalized eigenpencil solver and nullspace extraction.

Trefftz boundary Gram matrices are near-singular by design, so the pencil
(A, B) is reduced rank-revealingly instead of by Cholesky: B-directions below
a relative threshold are eliminated by static condensation of A (directions
carrying numerator energy) or dropped (directions null in both forms), and
the retained subspace is whitened.  All symmetric eigensolves use the cyclic
Jacobi kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_eigh
from .errors import DegeneratePencilError, PreconditionError

MAX_DIM = 2000
EPS_B_DEFAULT = 1e-12
EPS_C_DEFAULT = 1e-8
EPS_CONDENSE = 1e-10


@dataclass(frozen=True)
class SymPencil:
    """Quadratic-form numerator A and PSD denominator B of a Rayleigh quotient."""

    a: np.ndarray
    b: np.ndarray

    @property
    def dim(self):
        return self.a.shape[0]


def _check_symmetric(m, name):
    norm = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > 1e-12 * max(norm, 1e-300):
        raise PreconditionError(f"{name} is not symmetric")


@dataclass(frozen=True)
class EigResult:
    """Ascending eigenvalues with eigenvectors in the original coordinates."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (d, m) columns
    b_rank: int
    diagnostics: dict


def solve_pencil(pencil, eps_b=EPS_B_DEFAULT):
    """Solve A v = lambda B v for symmetric A and PSD B.

    B-directions with eigenvalue below eps_b times the largest cannot carry a
    finite Rayleigh quotient.  Those that still carry numerator energy are
    eliminated by static condensation (minimizing A over them, which leaves
    the Schur complement on the retained subspace); directions negligible in
    both forms are dropped outright.  The retained subspace is whitened and
    diagonalized, so every returned pair solves the full pencil.
    """
    a, b = np.asarray(pencil.a, float), np.asarray(pencil.b, float)
    d = a.shape[0]
    if d > MAX_DIM:
        raise PreconditionError(f"pencil dimension {d} exceeds {MAX_DIM}")
    if a.shape != b.shape or a.shape != (d, d):
        raise PreconditionError("pencil matrices must be square and same shape")
    _check_symmetric(a, "A")
    _check_symmetric(b, "B")

    wb, vb, info_b = jacobi_eigh(b)
    w_max = wb[-1] if d else 0.0
    if not np.isfinite(w_max) or w_max <= 0.0:
        raise DegeneratePencilError("denominator matrix is numerically zero")
    if wb[0] < -1e-10 * w_max:
        raise PreconditionError("denominator matrix has a negative eigenvalue")
    keep = wb > eps_b * w_max
    rank = int(np.count_nonzero(keep))
    if rank == 0:
        raise DegeneratePencilError("no B-direction survives the threshold")
    v_r = vb[:, keep]
    v_n = vb[:, ~keep]
    a_rr = v_r.T @ a @ v_r
    n_condensed = 0
    elim = None
    if v_n.shape[1]:
        a_nn = v_n.T @ a @ v_n
        a_nn = 0.5 * (a_nn + a_nn.T)
        wn, qn, _ = jacobi_eigh(a_nn)
        scale = float(np.max(np.abs(wn)))
        solid = np.abs(wn) > EPS_CONDENSE * scale if scale > 0.0 else wn != wn
        n_condensed = int(np.count_nonzero(solid))
        if n_condensed:
            a_rn = v_r.T @ a @ v_n
            coupling = a_rn @ qn[:, solid]
            a_rr = a_rr - (coupling / wn[solid]) @ coupling.T
            elim = -v_n @ (qn[:, solid] / wn[solid]) @ coupling.T
    inv_sqrt = 1.0 / np.sqrt(wb[keep])
    a_hat = a_rr * np.outer(inv_sqrt, inv_sqrt)
    a_hat = 0.5 * (a_hat + a_hat.T)
    lam, u, info_a = jacobi_eigh(a_hat)
    vectors = (v_r * inv_sqrt) @ u
    if elim is not None:
        vectors = vectors + (elim * inv_sqrt) @ u
    diagnostics = {
        "b_cond": float(w_max / np.min(wb[keep])),
        "b_sweeps": info_b["sweeps"],
        "a_sweeps": info_a["sweeps"],
        "off_final": info_a["off_final"],
        "n_condensed": n_condensed,
    }
    return EigResult(lam, vectors, rank, diagnostics)


def nullspace(gram, eps_c=EPS_C_DEFAULT):
    """Orthonormal basis of the near-null eigenspace of a symmetric PSD matrix.

    Columns span the eigenvectors with eigenvalue <= eps_c times the largest;
    the basis may be empty.
    """
    gram = np.asarray(gram, float)
    _check_symmetric(gram, "constraint Gram")
    w, v, _ = jacobi_eigh(gram)
    w_max = max(float(w[-1]), 0.0)
    if w_max == 0.0:
        return np.eye(gram.shape[0])
    mask = w <= eps_c * w_max
    return v[:, mask]
