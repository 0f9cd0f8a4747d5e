import numpy as np
import pytest

from steklab import (
    MeshSizeError,
    PreconditionError,
    SolverConfig,
    ball_spectrum,
    biharmonic_steklov,
    constant_density,
    cosine_density,
    curve_spectrum,
    disk,
    ellipse,
    estimate_error,
    harmonic_dim,
    icosphere,
    parse_rho,
    perturbed_disk,
    steklov_wentzell,
    surface_spectrum,
    tension_spectrum,
)

import oracles


def _flat(rows, m):
    out = []
    for value, mult in rows:
        out += [value] * mult
    return np.array(out[:m])


# ---------------------------------------------------------------------------
# Closed forms on balls.


def test_harmonic_dim_matches_laplacian_corank():
    for n in range(2, 5):
        for k in range(6):
            assert harmonic_dim(n, k) == oracles.harmonic_dim_corank(n, k)


def test_ball_spectrum_closed_forms():
    # Boundary Laplacian of the circle and the 2-sphere.
    rows = ball_spectrum("laplace", 2, 2.0, k_max=3)
    np.testing.assert_allclose(_flat(rows, 5), np.array([1, 1, 4, 4, 9]) / 4.0)
    rows = ball_spectrum("laplace", 3, 1.0, k_max=2)
    assert rows[0] == (pytest.approx(2.0), 3)
    assert rows[1] == (pytest.approx(6.0), 5)
    # The boundary problems list the first n nonzero eigenvalues.
    for n in (2, 3, 4):
        rows = ball_spectrum("steklov", n, 0.5)
        assert rows == [(pytest.approx(2.0), n)]
    # Wentzell adds beta times the first boundary-Laplacian eigenvalue.
    rows = ball_spectrum("wentzell", 2, 2.0, beta=0.3)
    assert rows == [(pytest.approx(1 / 2 + 0.3 * 1 / 4), 2)]
    rows = ball_spectrum("wentzell", 3, 2.0, beta=0.3)
    assert rows == [(pytest.approx(1 / 2 + 0.3 * 2 / 4), 3)]
    # First nonzero tension and biharmonic rows.
    assert ball_spectrum("tension", 3, 2.0, tau=5.0)[0] == (pytest.approx(2.5), 3)
    assert ball_spectrum("biharmonic", 2, 1.0)[0] == (pytest.approx(4.0), 2)


def test_ball_spectrum_rejects_bad_input():
    with pytest.raises(PreconditionError):
        ball_spectrum("heat", 2, 1.0)
    with pytest.raises(PreconditionError):
        ball_spectrum("steklov", 1, 1.0)
    with pytest.raises(PreconditionError):
        ball_spectrum("steklov", 2, -1.0)


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_disk_solvers_reproduce_ball_closed_forms(radius):
    m = 5
    res = curve_spectrum(disk(radius), m=m)
    ref = _flat(ball_spectrum("laplace", 2, radius, k_max=4), m)
    np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-10)

    res = steklov_wentzell(disk(radius), m=m)
    ks = np.array([1, 1, 2, 2, 3])
    np.testing.assert_allclose(res.eigenvalues, ks / radius, rtol=1e-10)
    assert res.eigenvalues[0] == pytest.approx(
        ball_spectrum("steklov", 2, radius)[0][0], rel=1e-10
    )

    for beta in (0.3, 1.0):
        res = steklov_wentzell(disk(radius), beta=beta, m=m)
        ref = ks / radius + beta * ks**2 / radius**2
        np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-10)
        assert res.eigenvalues[0] == pytest.approx(
            ball_spectrum("wentzell", 2, radius, beta=beta)[0][0], rel=1e-10
        )

    res = biharmonic_steklov(disk(radius), m=4)
    ref = _flat(ball_spectrum("biharmonic", 2, radius, k_max=4), 4)
    np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-8)

    for tau in (0.5, 1.0, 5.0):
        res = tension_spectrum(disk(radius), tau, m=2)
        ref = ball_spectrum("tension", 2, radius, tau=tau)[0][0]
        np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-8)


# ---------------------------------------------------------------------------
# Nontrivial domains against the boundary-integral oracle.


def test_steklov_ellipse_matches_nystrom():
    res = steklov_wentzell(ellipse(1.4, 1 / 1.4), m=6)
    ref = oracles.steklov_nystrom(oracles.ellipse_curve(1.4, 1 / 1.4), m=96, count=6)
    np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-6)


def test_steklov_perturbed_disk_matches_nystrom_when_resolved():
    spec = perturbed_disk(1.0, 0.2, 3)
    ref = oracles.steklov_nystrom(
        oracles.perturbed_disk_curve(1.0, 0.2, 3), m=160, count=6
    )
    cfg = SolverConfig(k_order=40, n_boundary=1024, with_error=False)
    res = steklov_wentzell(spec, m=6, config=cfg)
    np.testing.assert_allclose(res.eigenvalues, ref, atol=5e-6)
    # At the default order the reported estimate covers the true deviation.
    res = steklov_wentzell(spec, m=6)
    true_err = np.abs(res.eigenvalues - ref)
    assert np.all(res.error_estimate >= 0.5 * true_err)


def test_curve_spectrum_depends_only_on_perimeter():
    spec = ellipse(1.3, 0.6)
    length = oracles.ellipse_perimeter(1.3, 0.6)
    res = curve_spectrum(spec, m=4)
    ref = (2 * np.pi / length) ** 2 * np.array([1, 1, 4, 4])
    np.testing.assert_allclose(res.eigenvalues, ref, rtol=1e-10)


def test_surface_spectrum_icosphere():
    res = surface_spectrum(icosphere(3, radius=2.0), m=3)
    np.testing.assert_allclose(res.eigenvalues, 2.0 / 4.0, rtol=5e-3)
    res = surface_spectrum(icosphere(3), m=8)
    np.testing.assert_allclose(res.eigenvalues[:3], 2.0, rtol=5e-3)
    np.testing.assert_allclose(res.eigenvalues[3:], 6.0, rtol=2e-2)
    assert np.all(res.error_estimate > 0)


def test_surface_spectrum_rejects_oversized_mesh():
    with pytest.raises(MeshSizeError):
        surface_spectrum(icosphere(5))


# ---------------------------------------------------------------------------
# Boundary densities.


def test_constant_density_rescales_spectra():
    spec = ellipse(1.2, 0.8)
    base = steklov_wentzell(spec, m=4)
    for c in (0.5, 2.0):
        res = steklov_wentzell(spec, rho=constant_density(c), m=4)
        np.testing.assert_allclose(res.eigenvalues, base.eigenvalues / c, rtol=1e-10)
    base = biharmonic_steklov(spec, m=3)
    res = biharmonic_steklov(spec, rho=constant_density(2.0), m=3)
    np.testing.assert_allclose(res.eigenvalues, base.eigenvalues / 2.0, rtol=1e-8)


def test_cosine_density_limits_and_positivity():
    rho = cosine_density(1.0, 0.3, 2)
    theta = np.linspace(0, 2 * np.pi, 50)
    np.testing.assert_allclose(rho(theta), 1.0 + 0.3 * np.cos(2 * theta))
    with pytest.raises(PreconditionError):
        cosine_density(1.0, 1.1, 2)
    # c1 -> 0 recovers the unweighted problem.
    spec = disk(1.0)
    res = steklov_wentzell(spec, rho=cosine_density(1.0, 0.0, 2), m=3)
    base = steklov_wentzell(spec, m=3)
    np.testing.assert_allclose(res.eigenvalues, base.eigenvalues, rtol=1e-12)


def test_weighted_steklov_monotone_under_density_bounds():
    # rho <= rho' pointwise forces p_k(rho) >= p_k(rho') (Rayleigh quotients).
    spec = disk(1.0)
    lo = steklov_wentzell(spec, rho=cosine_density(1.2, 0.2, 3), m=5)
    hi = steklov_wentzell(spec, rho=constant_density(1.0), m=5)
    assert np.all(lo.eigenvalues <= hi.eigenvalues + 1e-12)


def test_parse_rho():
    rho = parse_rho("const:2.5")
    assert rho.kind == "const"
    assert rho(np.zeros(3)) == pytest.approx(2.5)
    rho = parse_rho("cos:1,0.2,3")
    assert rho(np.array([0.0]))[0] == pytest.approx(1.2)
    for bad in ("const:-1", "cos:1,2,3", "wedge:1", "cos:1"):
        with pytest.raises((PreconditionError, ValueError)):
            parse_rho(bad)


# ---------------------------------------------------------------------------
# Diagnostics and error estimates.


def test_biharmonic_constraint_count_on_disk():
    # The normal-derivative constraint on the disk leaves one trial function
    # per angular order plus the constant: 2K + 1 dimensions at order K.
    for K in (6, 10):
        cfg = SolverConfig(k_order=K, with_error=False)
        res = biharmonic_steklov(disk(1.0), m=3, config=cfg)
        assert res.diagnostics["nullspace_dim"] == 2 * K + 1


def test_estimate_error_dispatcher():
    spec = ellipse(1.1, 0.9)
    est = estimate_error(spec, "steklov_wentzell", m=4)
    res = steklov_wentzell(spec, m=4)
    np.testing.assert_allclose(est, res.error_estimate)
    assert np.all(est >= 0)


def test_spectrum_result_metadata():
    res = steklov_wentzell(disk(1.0), beta=0.25, m=3)
    assert res.problem == "steklov_wentzell"
    assert res.params["beta"] == 0.25
    assert res.discretization["k_order"] == SolverConfig().k_order
    assert len(res.error_estimate) == len(res.eigenvalues) == 3
    res = tension_spectrum(disk(1.0), 2.0, m=2)
    assert res.problem == "tension"
    assert res.params["tau"] == 2.0


def test_tension_rejects_oversized_helmholtz_argument():
    from steklab import RangeError

    with pytest.raises(RangeError):
        tension_spectrum(disk(2.0), 1e6, m=2)


def test_biharmonic_refuses_constraint_violating_modes():
    from steklab import StarvedSpaceError
    from steklab.explore import random_domains

    # On wiggly star domains the constraint nullspace eventually admits
    # directions with nonzero normal derivative; those would surface as
    # spurious near-zero eigenvalues if returned.
    spec = random_domains(2, 0.12, seed=2026)[1]
    cfg = SolverConfig(k_order=40, with_error=False)
    with pytest.raises(StarvedSpaceError):
        biharmonic_steklov(spec, m=2, config=cfg)
    res = biharmonic_steklov(spec, m=2, config=SolverConfig(with_error=False))
    assert res.diagnostics["constraint_residual"] < 1e-2
    assert np.all(res.eigenvalues > 1.0)


@pytest.mark.parametrize("a", [1.2, 1.5])
def test_biharmonic_ellipse_matches_polynomial_oracle(a):
    spec = ellipse(a, 1 / a)
    res = biharmonic_steklov(spec, m=3)
    truth = oracles.biharmonic_steklov_poly(a, 1 / a, count=3)
    np.testing.assert_allclose(res.eigenvalues, truth, rtol=1e-5)
    assert np.all(np.abs(res.eigenvalues - truth) <= res.error_estimate + 1e-9)
