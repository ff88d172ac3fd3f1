import math

import numpy as np
import pytest

from bellprocess.bohmian import GaussianPacket, bohm_dirac_trajectories, integrate_bohm
from bellprocess.errors import PreconditionError, QuadratureError
from bellprocess.models import DiracSpec, LatticeSpec, QuantumSystem, build_dirac, build_lattice_particle
from bellprocess.process import SamplerConfig, sample_ensemble
from bellprocess.quantum import RateKernel
from bellprocess.verify import (
    BoundReport,
    CheckContext,
    EnsembleStats,
    GateKind,
    additivity_check,
    binomial_stderr,
    continuum_limit_check,
    distance_functional,
    equivariance_check,
    equivariance_test,
    expected_distance_check,
    expected_jumps_check,
    hazard_lower_bound_check,
    jump_distance_check,
    log_variation,
    log_variation_check,
    mean_and_stderr,
    node_avoidance_check,
    rho_leq_mu_check,
    run_check,
    run_suite,
    speed_bound_check,
    structural_check,
    survival_ks_check,
    total_variation,
)
from bellprocess.verify.stats import integrate
from bellprocess.verify.structure import check_disjoint_supports

from .conftest import RABI_HORIZON

CHECKPOINTS = (0.3, 0.7, 1.2)


@pytest.fixture(scope="module")
def rabi_ensemble():
    from bellprocess.models import build_two_level

    return sample_ensemble(build_two_level(), 400, SamplerConfig(seed=21), horizon=RABI_HORIZON, jobs=2)


def _dirac(mass, components):
    spec = DiracSpec(L=128, eps=0.1, mass=mass)
    x = spec.x0 + spec.eps * np.arange(spec.L)
    return build_dirac(spec, np.exp(-(x**2) / 2.0)[:, None] * np.asarray(components, dtype=float)[None, :])


def test_gate_kinds():
    assert BoundReport.gate(GateKind.UPPER, 1.0, 0.9, stderr=0.05).passed
    assert not BoundReport.gate(GateKind.UPPER, 1.0, 0.9, stderr=0.01).passed
    assert BoundReport.gate(GateKind.LOWER, 0.5, 0.6, abs_tol=0.2).passed
    assert not BoundReport.gate(GateKind.IDENTITY, 0.5, 0.6, abs_tol=0.05).passed
    assert not BoundReport.gate(GateKind.UPPER, float("nan"), 1.0).passed
    report = BoundReport.gate(GateKind.IDENTITY, 1.0, 1.0, stderr=0.1, sigmas=2.0, abs_tol=0.01, note="x")
    assert report.tolerance == pytest.approx(0.21)
    assert report.details == {"note": "x"}


def test_error_bars():
    mean, stderr = mean_and_stderr([1.0, 1.0, 1.0, 1.0])
    assert mean == 1.0 and stderr == pytest.approx(0.25)
    assert binomial_stderr(0.0, 100) == pytest.approx(math.sqrt(1 / 400) / 10)
    assert total_variation(np.array([0.5, 0.5]), np.array([1.0, 0.0])) == pytest.approx(0.5)


def test_integrate_raises_on_divergence():
    assert integrate(np.cos, 0.0, math.pi / 2) == pytest.approx(1.0)
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.inf, 0.0, 1.0)


def test_ensemble_stats(rabi, rabi_ensemble):
    stats = EnsembleStats.from_trajectories(rabi_ensemble, CHECKPOINTS, rabi.D)
    assert stats.M == 400
    np.testing.assert_allclose(stats.rho_hat.sum(axis=1) + stats.lost, 1.0)
    assert stats.statuses == {"HORIZON": 400}
    assert set(stats.jump_counts) == {1}


def test_structural_identities(rabi, fock):
    assert structural_check(rabi, CHECKPOINTS).passed
    report = structural_check(fock, (0.0, 0.5, 1.7))
    assert report.passed
    assert "additivity" in report.details


def test_structural_check_sees_a_wrong_total_rate(rabi, monkeypatch):
    rates = QuantumSystem.rates

    def doubled(self, t, H=None):
        kernel = rates(self, t, H)
        return RateKernel(kernel.t, kernel.sigma, 2.0 * kernel.total, kernel.singular)

    monkeypatch.setattr(QuantumSystem, "rates", doubled)
    report = structural_check(rabi, CHECKPOINTS)
    assert not report.passed
    assert report.details["master_equation"] > 1e-3
    assert report.details["detailed_current"] <= 1e-10


def test_structural_check_compares_sampler_rates(rabi, fock):
    for system in (rabi, fock):
        report = structural_check(system, (0.2, 0.9))
        assert report.details["column_rates"] <= 1e-10


def test_additivity_needs_parts(rabi, fock):
    assert additivity_check(fock, (0.4, 1.1)) <= 1e-10
    with pytest.raises(PreconditionError):
        check_disjoint_supports(rabi)


def test_rabi_equivariance(rabi, rabi_ensemble):
    report = equivariance_check(rabi, 400, CHECKPOINTS, trajectories=rabi_ensemble)
    assert report.passed
    assert len(report.details["tv"]) == 3


def test_equivariance_needs_a_real_ensemble(rabi):
    with pytest.raises(PreconditionError):
        equivariance_check(rabi, 10, CHECKPOINTS, seed=1)


def test_rabi_expected_jumps(rabi, rabi_ensemble):
    identity, bound = expected_jumps_check(rabi, 400, 0.0, RABI_HORIZON, trajectories=rabi_ensemble)
    assert identity.empirical == 1.0
    assert identity.theoretical == pytest.approx(1.0, abs=1e-8)
    assert identity.passed and bound.passed


def test_ensemble_must_cover_the_interval(rabi, rabi_ensemble):
    with pytest.raises(PreconditionError):
        expected_jumps_check(rabi, 400, 0.0, 2.0, trajectories=rabi_ensemble)


def test_rho_leq_mu(rabi, rabi_ensemble):
    report = rho_leq_mu_check(rabi, 400, CHECKPOINTS, trajectories=rabi_ensemble)
    assert report.passed and report.empirical < 0
    assert report.details["lost_mass"] == [0.0, 0.0, 0.0]


def test_rho_leq_mu_is_vacuous_for_one_path(rabi):
    assert rho_leq_mu_check(rabi, 1, CHECKPOINTS, seed=4).passed


def test_node_avoidance(rabi, rabi_ensemble):
    report = node_avoidance_check(rabi, 400, math.pi / 2, 1, 1e-3, trajectories=rabi_ensemble)
    assert report.passed
    assert report.empirical <= 1e-4
    skipped = node_avoidance_check(rabi, 400, None, None, 1e-3)
    assert skipped.passed and skipped.details["applicable"] is False


def test_hazard_dominates_log_weight_drop(rabi, fock):
    report = hazard_lower_bound_check(rabi, 0, 0.0, 1.2)
    assert report.passed
    assert report.empirical == pytest.approx(-2 * math.log(math.cos(1.2)), rel=1e-7)
    assert hazard_lower_bound_check(fock, 0, 0.0, 2.0).passed


def test_rabi_survival_law(rabi):
    report = survival_ks_check(rabi, 400, 0, RABI_HORIZON, seed=8)
    assert report.details["pvalue"] > 1e-3
    assert report.details["censored"] == 0


def test_rabi_jump_distance_equals_jump_count(rabi, rabi_ensemble):
    assert all(distance_functional(tr, 0.0, RABI_HORIZON, rabi) == 1.0 for tr in rabi_ensemble)
    assert jump_distance_check(rabi, 400, 0.0, RABI_HORIZON, trajectories=rabi_ensemble).passed


def test_fock_ensemble_checks(fock):
    cfg = SamplerConfig(seed=5)
    trajectories = sample_ensemble(fock, 300, cfg, horizon=2.0, jobs=2)
    assert equivariance_check(fock, 300, (0.5, 1.0, 2.0), trajectories=trajectories).passed
    assert rho_leq_mu_check(fock, 300, (0.5, 1.0, 2.0), trajectories=trajectories).passed
    identity, bound = expected_jumps_check(fock, 300, 0.0, 2.0, trajectories=trajectories)
    assert identity.passed and bound.passed
    assert bound.theoretical >= identity.theoretical


def test_truncated_paths_leave_rho_below_mu():
    spec = LatticeSpec(L=9, eps=1.0)
    x = spec.sites()
    system = build_lattice_particle(spec, np.exp(-(x**2) / 4.0 + 1j * x))
    times = (1.0, 2.0, 4.0)
    trajectories = sample_ensemble(system, 200, SamplerConfig(seed=11, max_jumps=1), horizon=4.0, jobs=2)
    report = rho_leq_mu_check(system, 200, times, trajectories=trajectories)
    assert report.passed
    lost = report.details["lost_mass"]
    assert lost[-1] > 0 and lost == sorted(lost)
    assert report.details["statuses"].get("CEMETERY", 0) > 0
    stats = EnsembleStats.from_trajectories(trajectories, times, system.D)
    assert stats.rho_hat[-1].sum() < 1.0


def test_stationary_state_keeps_rho_hat_fixed():
    spec = LatticeSpec(L=5, eps=1.0)
    ground = build_lattice_particle(spec, np.ones(5)).H.eigenvectors[:, 0]
    system = build_lattice_particle(spec, ground)
    times = (0.5, 1.5, 3.0)
    trajectories = sample_ensemble(system, 200, SamplerConfig(seed=2), horizon=3.0, jobs=2)
    stats = EnsembleStats.from_trajectories(trajectories, times, system.D)
    assert set(stats.jump_counts) == {0}
    np.testing.assert_array_equal(stats.rho_hat[0], stats.rho_hat[-1])
    assert equivariance_check(system, 200, times, trajectories=trajectories).passed


@pytest.mark.slow
def test_equivariance_error_shrinks_like_inverse_sqrt_m(rabi):
    """Mean TV over disjoint blocks, scaled by sqrt(M), stays near the half-normal mean."""
    times = (0.4, 0.8, 1.2)
    trajectories = sample_ensemble(rabi, 6400, SamplerConfig(seed=17), horizon=1.2, jobs=4)
    p = np.cos(np.asarray(times)) ** 2
    expected = float(np.mean(np.sqrt(2.0 * p * (1.0 - p) / math.pi)))
    for M, band in ((100, (0.6, 1.5)), (400, (0.4, 1.8))):
        blocks = [trajectories[i : i + M] for i in range(0, len(trajectories), M)]
        tv = np.mean([equivariance_test(rabi, M, times, trajectories=block) for block in blocks])
        assert band[0] < tv * math.sqrt(M) / expected < band[1]


def test_bohmian_distance_and_log_variation():
    packet = GaussianPacket(x0=0.0, s0=0.5, u=0.0)
    path = integrate_bohm(packet, 1.0, 0.0, 1.0, t_eval=np.linspace(0.0, 1.0, 51))
    assert distance_functional(path, 0.0, 1.0) == pytest.approx(math.sqrt(5.0) - 1.0, abs=1e-7)
    assert log_variation(path, packet, 0.0, 1.0) == pytest.approx(0.5 * math.log(5.0), abs=1e-6)


def test_expected_bohmian_distance():
    packet = GaussianPacket(x0=0.0, s0=0.5, u=0.3)
    identity, bound = expected_distance_check(packet, 500, 0.0, 1.0, seed=2, n_times=101)
    assert identity.passed
    assert bound.passed


def test_dirac_speed_bound():
    assert speed_bound_check(_dirac(0.5, [1.0, 0.3]), (0.0, 0.5, 1.0)).passed


def test_massless_log_variation_vanishes():
    dirac = _dirac(0.0, [1.0, 1.0])
    report = log_variation_check(dirac, 40, 0.0, 1.0, seed=3)
    assert report.passed
    assert report.empirical == pytest.approx(0.0, abs=1e-4)
    assert report.theoretical > 0


def test_massive_log_variation_bound():
    assert log_variation_check(_dirac(0.5, [1.0, 1.0]), 40, 0.0, 1.0, seed=3).passed


def test_log_variation_catches_swings_between_samples():
    dirac = _dirac(0.5, [1.0, 0.3])
    starts = [0.3, -0.5]
    grid = np.linspace(0.0, 1.0, 2001)
    coarse = bohm_dirac_trajectories(dirac, starts, 0.0, 1.0)
    fine = bohm_dirac_trajectories(dirac, starts, 0.0, 1.0, t_eval=grid)
    variation = log_variation(coarse, dirac, 0.0, 1.0)
    np.testing.assert_allclose(log_variation(fine, dirac, 0.0, 1.0), variation, rtol=1e-8)
    log_density = np.array([np.log(dirac.density_at(fine.positions[:, i], t)) for i, t in enumerate(grid)])
    grid_sum = np.sum(np.abs(np.diff(log_density, axis=0)), axis=0)
    assert np.all(grid_sum <= variation + 1e-5)
    np.testing.assert_allclose(grid_sum, variation, rtol=1e-3, atol=1e-4)


def test_continuum_limit_check():
    report = continuum_limit_check(GaussianPacket(x0=0.1, s0=0.5, u=1.0), (0.2, 0.1, 0.05), 0.5)
    assert report.passed
    assert report.details["decreasing"]
    assert len(report.details["table"]) == 3


def _context(system, M=400, **extra):
    return CheckContext(
        system=system,
        M=M,
        t0=0.0,
        horizon=RABI_HORIZON,
        times=CHECKPOINTS,
        sampler=SamplerConfig(seed=21),
        jobs=2,
        **extra,
    )


def test_suite_on_rabi(rabi):
    ctx = _context(rabi, node_config=1, node_time=math.pi / 2)
    names = ["structural", "equivariance", "expected_jumps", "rho_leq_mu", "node_avoidance", "distance"]
    report = run_suite(ctx, names, "TWO_LEVEL")
    assert report.passed, [c.model_dump() for c in report.failed()]
    assert [c.name for c in report.checks] == names
    assert report.checks[1].M == 400 and report.checks[0].M is None
    assert report.seed == 21
    assert len(ctx._ensembles) == 1


def test_suite_reports_unrunnable_checks(rabi):
    result = run_check("continuum_limit", _context(rabi))
    assert not result.passed
    assert "packet" in result.error


def test_suite_rejects_unknown_checks(rabi):
    with pytest.raises(KeyError):
        run_suite(_context(rabi), ["nonsense"], "TWO_LEVEL")
