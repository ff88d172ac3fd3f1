import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellprocess.errors import DimensionMismatchError, ModelConfigurationError
from bellprocess.quantum import (
    ConfigSpace,
    HermitianOperator,
    Povm,
    StateVector,
    current,
    evolve,
    flux_matched_rates,
    measure,
    measure_derivative,
    minimal_rates,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def _rabi_state(t):
    return evolve(StateVector(np.array([1.0, 0.0])), HermitianOperator.from_matrix(SIGMA_X), t)


@st.composite
def random_systems(draw):
    """Random Hermitian H, normalized psi and a random partition POVM."""
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, 12))
    D = draw(st.integers(2, n))
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = HermitianOperator.from_matrix(A + A.conj().T)
    psi = StateVector.from_amplitudes(rng.normal(size=n) + 1j * rng.normal(size=n))
    owner = np.concatenate([np.arange(D), rng.integers(0, D, size=n - D)])
    rng.shuffle(owner)
    povm = Povm.partition([np.flatnonzero(owner == q) for q in range(D)], n)
    return psi, H, povm


def test_rabi_evolution_matches_closed_form():
    """Test evolve against (cos t, -i sin t)."""
    for t in (0.0, 0.3, 1.0, 2.5):
        np.testing.assert_allclose(_rabi_state(t).amps, [math.cos(t), -1j * math.sin(t)], atol=1e-12)


def test_zero_hamiltonian_keeps_state():
    psi = StateVector.from_amplitudes([1.0, 1j, 0.5])
    out = evolve(psi, HermitianOperator.zeros(3), 7.0)
    np.testing.assert_allclose(out.amps, psi.amps)


def test_norm_preserved_for_long_times():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(6, 6))
    H = HermitianOperator.from_matrix(A + A.T)
    psi = StateVector.from_amplitudes(rng.normal(size=6))
    for t in (-100.0, 13.7, 100.0):
        assert abs(evolve(psi, H, t).norm() - 1.0) < 1e-10


def test_dimension_mismatch_is_rejected():
    with pytest.raises(DimensionMismatchError):
        evolve(StateVector(np.array([1.0, 0.0, 0.0])), HermitianOperator.from_matrix(SIGMA_X), 1.0)


def test_unnormalized_state_is_rejected():
    with pytest.raises(ModelConfigurationError):
        StateVector(np.array([1.0, 1.0]))


def test_rabi_measure_current_and_rates():
    t = 0.4
    psi = _rabi_state(t)
    H = HermitianOperator.from_matrix(SIGMA_X)
    povm = Povm.singletons(2)
    np.testing.assert_allclose(measure(psi, povm), [math.cos(t) ** 2, math.sin(t) ** 2], atol=1e-12)
    J = current(psi, H, povm, t).J
    assert J[1, 0] == pytest.approx(math.sin(2 * t), abs=1e-12)
    kernel = minimal_rates(psi, H, povm, t)
    assert kernel.sigma[1, 0] == pytest.approx(2 * math.tan(t), rel=1e-12)
    assert kernel.sigma[0, 1] == 0.0
    np.testing.assert_allclose(measure_derivative(psi, H, povm, t), [-math.sin(2 * t), math.sin(2 * t)], atol=1e-12)


def test_rabi_rates_at_quarter_period():
    psi = _rabi_state(math.pi / 4)
    kernel = minimal_rates(psi, HermitianOperator.from_matrix(SIGMA_X), Povm.singletons(2), math.pi / 4)
    assert kernel.sigma[1, 0] == pytest.approx(2.0, rel=1e-12)
    assert kernel.total[0] == pytest.approx(2.0, rel=1e-12)


def test_node_column_is_flagged_not_zero():
    psi = StateVector(np.array([0.0, 1.0]))
    kernel = minimal_rates(psi, HermitianOperator.from_matrix(SIGMA_X), Povm.singletons(2), 0.0)
    assert kernel.singular[0] and not kernel.singular[1]
    assert np.isnan(kernel.sigma[1, 0])
    assert np.isnan(kernel.total[0])


def test_real_state_and_real_hamiltonian_have_no_current():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(5, 5))
    psi = StateVector.from_amplitudes(rng.normal(size=5))
    J = current(psi, HermitianOperator.from_matrix(A + A.T), Povm.singletons(5), 0.0).J
    assert np.max(np.abs(J)) == 0.0


def test_uniform_general_povm_gives_uniform_measure():
    povm = Povm.general([np.eye(3) / 3.0] * 3)
    psi = StateVector.from_amplitudes([1.0, 2.0j, -0.5])
    np.testing.assert_allclose(measure(psi, povm), [1 / 3] * 3, atol=1e-12)


def test_general_povm_must_resolve_identity():
    with pytest.raises(ModelConfigurationError):
        Povm.general([np.eye(2) * 0.4, np.eye(2) * 0.4])


def test_partition_must_be_disjoint_and_exhaustive():
    with pytest.raises(ModelConfigurationError):
        Povm.partition([[0, 1], [1]], 2)
    with pytest.raises(ModelConfigurationError):
        Povm.partition([[0]], 2)


def test_eigenvector_is_stationary():
    H = HermitianOperator.from_matrix(SIGMA_X)
    psi = StateVector(H.eigenvectors[:, 0])
    np.testing.assert_allclose(measure_derivative(psi, H, Povm.singletons(2), 0.0), 0.0, atol=1e-14)


def test_config_space_lookup():
    space = ConfigSpace(("a", (1, 2), 3))
    assert space.index_of((1, 2)) == 1
    assert space.label_of(2) == 3
    with pytest.raises(KeyError):
        space.index_of("missing")
    with pytest.raises(ModelConfigurationError):
        ConfigSpace(("a", "a"))


@settings(max_examples=60, deadline=None)
@given(random_systems())
def test_current_is_antisymmetric(system):
    psi, H, povm = system
    J = current(psi, H, povm, 0.0).J
    assert np.max(np.abs(J + J.T)) <= 1e-12
    assert np.all(np.diag(J) == 0.0)


@settings(max_examples=60, deadline=None)
@given(random_systems())
def test_minimal_rate_identities(system):
    """Test detailed current, one-directional rates and the master equation."""
    psi, H, povm = system
    J = current(psi, H, povm, 0.0).J
    mu = measure(psi, povm)
    kernel = minimal_rates(psi, H, povm, 0.0)
    regular = kernel.regular
    pair = np.outer(regular, regular)
    sigma = np.where(pair, kernel.sigma, 0.0)
    detailed = sigma * mu[None, :] - sigma.T * mu[:, None]
    np.testing.assert_allclose(detailed[pair], J[pair], atol=1e-10)
    assert np.all(sigma * sigma.T == 0.0)
    assert np.all(np.diag(kernel.sigma) == 0.0)
    if np.all(regular):
        master = sigma @ mu - kernel.total * mu
        np.testing.assert_allclose(master, measure_derivative(psi, H, povm, 0.0), atol=1e-10)
    assert abs(mu.sum() - 1.0) < 1e-10


@settings(max_examples=30, deadline=None)
@given(random_systems(), st.floats(0.0, 5.0))
def test_flux_matched_rates_dominate_minimal_rates(system, strength):
    psi, H, povm = system
    mu = measure(psi, povm)
    kernel = minimal_rates(psi, H, povm, 0.0)
    D = povm.D
    S = np.ones((D, D)) - np.eye(D)
    alt = flux_matched_rates(kernel, mu, S, strength)
    regular = kernel.regular
    pair = np.outer(regular, regular)
    np.fill_diagonal(pair, False)
    assert np.all(alt[pair] >= kernel.sigma[pair])
    net_alt = alt * mu[None, :] - alt.T * mu[:, None]
    net_min = kernel.sigma * mu[None, :] - kernel.sigma.T * mu[:, None]
    np.testing.assert_allclose(net_alt[pair], net_min[pair], atol=1e-9)


def test_flux_perturbation_must_be_symmetric(rabi):
    kernel = rabi.rates(0.3)
    with pytest.raises(ValueError):
        flux_matched_rates(kernel, rabi.measure(0.3), np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)
