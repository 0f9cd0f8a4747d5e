import numpy as np
import pytest

from steklab import (
    CHECKS,
    PreconditionError,
    SpectrumResult,
    ball_volume,
    check_ids,
    cosine_density,
    constant_density,
    disk,
    ellipse,
    evaluate,
    fourier_radius,
    geo_summary,
    icosphere,
    perturbed_disk,
    run_suite,
)

ALL_IDS = (
    "REILLY", "T1_SUM", "T1_CURV", "CONJ_2_1", "REM_2_2", "T3_RECIP",
    "WEIGHTED_PROD", "BP_RECIP", "T4_SUM", "CONJ_3_2", "BROCK", "STEK_SUM",
    "HENROT_PROD", "T7_SUM", "T8_PROD", "T41_WEIGHTED", "J0_MIN", "JPROD",
    "LEMMA_4_1",
)
MESH_IDS = ("REILLY", "T1_SUM", "T1_CURV", "CONJ_2_1", "REM_2_2")


def test_registry_contents():
    assert tuple(c.id for c in CHECKS) == ALL_IDS
    assert tuple(check_ids(2)) == ALL_IDS
    assert tuple(check_ids(3)) == MESH_IDS
    for c in CHECKS:
        assert c.orientation in ("upper", "lower")
        assert c.statement


def test_ball_volume_closed_forms():
    assert ball_volume(1) == pytest.approx(2.0)
    assert ball_volume(2) == pytest.approx(np.pi)
    assert ball_volume(3) == pytest.approx(4 * np.pi / 3)
    assert ball_volume(4) == pytest.approx(np.pi**2 / 2)


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_disk_suite_sits_on_equality(radius):
    suite = run_suite(disk(radius))
    assert not suite.failures
    assert len(suite.reports) == len(ALL_IDS)
    for rep in suite.reports:
        assert abs(rep.rel_slack) <= 1e-6, (rep.id, rep.rel_slack)
        assert rep.status in ("pass", "inconclusive")


def test_ellipse_suite_is_strict_except_jprod():
    suite = run_suite(ellipse(1.5, 1 / 1.5))
    assert not suite.failures
    by_id = {r.id: r for r in suite.reports}
    # Every ellipse is an equality case for the moment-product bound.
    assert abs(by_id["JPROD"].rel_slack) <= 1e-8
    for rep in suite.reports:
        if rep.id == "JPROD":
            continue
        assert rep.slack > 0, (rep.id, rep.slack)
        if rep.slack > rep.err:
            assert rep.status == "pass"


def test_conjecture_flags():
    suite = run_suite(ellipse(1.2, 1 / 1.2))
    flags = {r.id: r.conjecture for r in suite.reports}
    for cid in ("CONJ_2_1", "REM_2_2", "CONJ_3_2"):
        assert flags[cid]
    # The product bound for the Steklov spectrum is settled in the plane.
    assert not flags["HENROT_PROD"]
    for cid in ("REILLY", "T1_SUM", "BROCK", "STEK_SUM", "JPROD"):
        assert not flags[cid]


def test_isoperimetric_sign_identity():
    # The slack of the eigenvalue-sum bound for closed curves is a positive
    # multiple of L^4 - 16 pi^2 A^2.
    for spec in (disk(1.0), ellipse(1.3, 0.7), perturbed_disk(1.0, 0.15, 4)):
        suite = run_suite(spec, ids=("T1_SUM",))
        rep = suite.reports[0]
        geo = suite.geometry
        iso = geo.perimeter**4 - 16 * np.pi**2 * geo.area**2
        lhs_scale = 2 * geo.area**2 * geo.perimeter**2
        assert rep.slack == pytest.approx(iso / lhs_scale, rel=1e-9, abs=1e-12)


def test_reilly_rhs_is_sum_rhs_over_n():
    suite = run_suite(ellipse(1.4, 0.8), ids=("REILLY", "T1_SUM"))
    by_id = {r.id: r for r in suite.reports}
    assert by_id["T1_SUM"].rhs == pytest.approx(2 * by_id["REILLY"].rhs, rel=1e-12)


def test_constant_density_leaves_relative_slack_invariant():
    spec = ellipse(1.3, 1 / 1.3)
    base = {r.id: r for r in run_suite(spec).reports}
    for c in (0.5, 2.0):
        suite = run_suite(spec, rho=constant_density(c))
        for rep in suite.reports:
            if rep.id in ("WEIGHTED_PROD", "T41_WEIGHTED"):
                assert rep.rel_slack == pytest.approx(
                    base[rep.id].rel_slack, rel=1e-6, abs=1e-9
                )


def test_cosine_density_keeps_weighted_checks_honest():
    suite = run_suite(disk(1.0), rho=cosine_density(1.0, 0.4, 2),
                      ids=("WEIGHTED_PROD", "T41_WEIGHTED"))
    assert not suite.failures
    for rep in suite.reports:
        assert rep.status in ("pass", "inconclusive")
        assert rep.slack >= -rep.err


def test_centering_precondition_is_enforced():
    geo = geo_summary(disk(1.0, center=(0.5, 0.0)))
    with pytest.raises(PreconditionError):
        evaluate("J0_MIN", geo, {}, {"n": 2})


def test_run_suite_recenters_automatically():
    suite = run_suite(disk(1.0, center=(0.5, 0.0)), ids=("J0_MIN", "JPROD"))
    assert not suite.failures
    for rep in suite.reports:
        assert abs(rep.rel_slack) <= 1e-6


def test_unknown_check_id():
    with pytest.raises(PreconditionError):
        evaluate("NOT_A_CHECK", geo_summary(disk(1.0)), {}, {"n": 2})
    with pytest.raises(PreconditionError):
        run_suite(disk(1.0), ids=("NOT_A_CHECK",))


def test_fabricated_violation_is_reported_as_fail():
    geo = geo_summary(disk(1.0))
    fake = SpectrumResult(
        problem="steklov_wentzell",
        domain="disk:1",
        params={"beta": 0.0},
        eigenvalues=np.array([10.0, 10.0]),
        error_estimate=np.zeros(2),
        diagnostics={},
        discretization={},
    )
    rep = evaluate("STEK_SUM", geo, {"steklov": fake}, {"n": 2})
    assert rep.status == "fail"
    assert rep.slack < 0
    assert rep.lhs == pytest.approx(20.0)


def test_digest_tracks_inputs():
    rep1 = run_suite(disk(1.0), ids=("BROCK",)).reports[0]
    rep2 = run_suite(disk(1.0), ids=("BROCK",)).reports[0]
    rep3 = run_suite(disk(2.0), ids=("BROCK",)).reports[0]
    assert rep1.digest == rep2.digest
    assert rep1.digest != rep3.digest


def test_spectrum_failure_keeps_suite_alive():
    # tau far beyond the modified-Helmholtz range: the tension solve fails,
    # its checks land in failures, everything else still reports.
    suite = run_suite(disk(2.0), tau=1e9)
    failed_ids = {cid for cid, _ in suite.failures}
    assert failed_ids == {"BP_RECIP", "T4_SUM", "CONJ_3_2"}
    reported = {r.id for r in suite.reports}
    assert reported == set(ALL_IDS) - failed_ids


def test_mesh_suite():
    suite = run_suite(icosphere(3))
    assert not suite.failures
    assert tuple(r.id for r in suite.reports) == MESH_IDS
    for rep in suite.reports:
        assert rep.status in ("pass", "inconclusive")
        assert rep.err > 0
    by_id = {r.id: r for r in suite.reports}
    # Sum of the first three sphere eigenvalues is 6 in the continuum.
    assert by_id["T1_SUM"].lhs == pytest.approx(6.0, rel=1e-3)


def test_suite_report_metadata():
    suite = run_suite(disk(1.0), ids=("BROCK", "STEK_SUM"), beta=0.7, tau=2.0)
    assert suite.domain == "disk:1"
    assert suite.params["beta"] == 0.7
    assert suite.params["tau"] == 2.0
    assert suite.environment["kernels"] in ("numba", "numpy")
    assert {r.id for r in suite.reports} == {"BROCK", "STEK_SUM"}
