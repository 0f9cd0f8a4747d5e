import numpy as np
import pytest

from steklab import RangeError, bessel_i, build_space, eval_at, eval_block
from steklab.basis import HELMHOLTZ_ARG_MAX

import oracles


def test_space_sizes():
    assert len(build_space("harmonic", 5, 1.0)) == 11
    assert len(build_space("biharmonic", 5, 1.0)) == 22
    assert len(build_space("tension", 5, 1.0, tau=2.0)) == 22


@pytest.mark.parametrize("problem,tau", [("harmonic", None), ("biharmonic", None), ("tension", 1.7)])
def test_derivatives_match_finite_differences(problem, tau):
    fns = build_space(problem, 4, 1.3, tau=tau)
    rng = np.random.default_rng(5)
    pts = rng.uniform(-0.8, 0.8, size=(6, 2))
    h = 1e-5
    vals, grads, hess, laps = eval_block(fns, pts)
    for d, e in ((0, np.array([h, 0.0])), (1, np.array([0.0, h]))):
        vp, gp, _, _ = eval_block(fns, pts + e)
        vm, gm, _, _ = eval_block(fns, pts - e)
        np.testing.assert_allclose(grads[:, :, d], (vp - vm) / (2 * h), atol=2e-8)
        np.testing.assert_allclose(
            hess[:, :, d, :], (gp - gm) / (2 * h), atol=2e-7
        )
    np.testing.assert_allclose(laps, hess[:, :, 0, 0] + hess[:, :, 1, 1], atol=1e-12)


def test_family_pde_identities():
    pts = np.random.default_rng(2).uniform(-0.7, 0.7, size=(8, 2))
    fns = build_space("harmonic", 5, 1.0)
    _, _, _, laps = eval_block(fns, pts)
    np.testing.assert_allclose(laps, 0.0, atol=1e-12)

    tau = 2.5
    fns = [f for f in build_space("tension", 4, 1.0, tau=tau) if f.family == "modhelmholtz"]
    vals, _, _, laps = eval_block(fns, pts)
    np.testing.assert_allclose(laps, tau * vals, rtol=1e-11, atol=1e-13)

    # The Laplacian of |x|^2 h_k is 4(k+1) h_k when h_k is degree-k harmonic.
    rc = 1.0
    alm = [f for f in build_space("biharmonic", 4, rc) if f.family == "almansi"]
    har = {(f.k, f.parity): f for f in build_space("harmonic", 5, rc)}
    for f in alm:
        _, _, _, laps = eval_block([f], pts)
        hvals, _, _, _ = eval_block([har[(f.k, f.parity)]], pts)
        np.testing.assert_allclose(laps, 4 * (f.k + 1) * hvals, rtol=1e-11)


def test_eval_at_agrees_with_eval_block():
    fns = build_space("tension", 3, 1.1, tau=0.9)
    pt = np.array([0.3, -0.5])
    vals, grads, hess, laps = eval_block(fns, pt[None, :])
    for i, fn in enumerate(fns):
        rec = eval_at(fn, pt)
        assert rec.value == pytest.approx(vals[i, 0], abs=1e-14)
        np.testing.assert_allclose(rec.gradient, grads[i, 0], atol=1e-14)
        np.testing.assert_allclose(rec.hessian, hess[i, 0], atol=1e-14)
        assert rec.laplacian == pytest.approx(laps[i, 0], abs=1e-14)


def test_bessel_scalar_matches_scipy():
    import scipy.special

    for k in range(7):
        for x in (0.0, 0.3, 2.2, 19.0):
            val, deriv = bessel_i(k, x)
            assert val == pytest.approx(
                oracles.bessel_i_scipy(k, x), rel=1e-13, abs=1e-300
            )
            assert deriv == pytest.approx(
                scipy.special.ivp(k, x), rel=1e-13, abs=1e-300
            )


def test_helmholtz_argument_guard():
    fns = build_space("tension", 2, 1.0, tau=1.0)
    big = (HELMHOLTZ_ARG_MAX + 1.0) * np.ones((1, 2)) / np.sqrt(2)
    with pytest.raises(RangeError):
        eval_block(fns, big)


def test_tension_space_requires_tau():
    from steklab import PreconditionError

    with pytest.raises(PreconditionError):
        build_space("tension", 3, 1.0)
