import math

import numpy as np
import pytest
from pydantic import ValidationError

from bellprocess.config import set_config
from bellprocess.errors import ModelConfigurationError
from bellprocess.models import (
    DiracSpec,
    FockSpec,
    LatticeSpec,
    build_dirac,
    build_fock,
    build_lattice_particle,
    build_two_level,
    describe_system,
    fock_dimension,
)
from bellprocess.bohmian import bohm_dirac_velocity
from bellprocess.verify.structure import check_disjoint_supports


def test_two_level_closed_forms(rabi):
    for t in (0.2, 0.7, 1.3):
        np.testing.assert_allclose(rabi.measure(t), [math.cos(t) ** 2, math.sin(t) ** 2], atol=1e-12)
        assert rabi.rates(t).sigma[1, 0] == pytest.approx(2 * math.tan(t), rel=1e-10)
    assert rabi.total_rate(0, 1e-9) == pytest.approx(0.0, abs=1e-8)
    assert rabi.info["nodes"][0]["time"] == pytest.approx(math.pi / 2)


def test_two_level_rejects_non_positive_frequency():
    with pytest.raises(ModelConfigurationError):
        build_two_level(omega=0.0)


def test_three_site_laplacian_spectrum():
    system = build_lattice_particle(LatticeSpec(L=3, eps=1.0), [1.0, 0.0, 0.0])
    expected = [1 - 1 / math.sqrt(2), 1.0, 1 + 1 / math.sqrt(2)]
    np.testing.assert_allclose(system.H.eigenvalues, expected, atol=1e-12)


def test_two_site_lattice_reproduces_rabi_rates(rabi):
    """Spacing 1/sqrt(2) makes the hopping amplitude 1, matching omega = 1."""
    lattice = build_lattice_particle(LatticeSpec(L=2, eps=1 / math.sqrt(2)), [1.0, 0.0])
    assert lattice.H.matrix[0, 1].real == pytest.approx(-1.0)
    for t in (0.1, 0.5, 1.2):
        np.testing.assert_allclose(lattice.rates(t).sigma, rabi.rates(t).sigma, atol=1e-10)


def test_gaussian_profile_is_normalized():
    spec = LatticeSpec(L=21, eps=0.5)
    profile = np.exp(-spec.sites() ** 2)
    system = build_lattice_particle(spec, profile)
    mu = system.measure(0.0)
    np.testing.assert_allclose(mu, profile**2 / np.sum(profile**2), atol=1e-12)


def test_lattice_rejects_bad_profiles():
    spec = LatticeSpec(L=4, eps=1.0)
    with pytest.raises(ModelConfigurationError):
        build_lattice_particle(spec, np.zeros(4))
    with pytest.raises(ModelConfigurationError):
        build_lattice_particle(spec, np.ones(3))


def test_lattice_potential_length_is_checked():
    with pytest.raises(ValidationError):
        LatticeSpec(L=3, eps=1.0, potential=[0.0, 1.0])


def test_spinor_potential_partitions_by_site():
    potential = [[[0.0, 0.5], [0.5, 0.0]]] * 4
    spec = LatticeSpec(L=4, eps=1.0, potential=potential)
    profile = np.zeros((4, 2))
    profile[1, 0] = 1.0
    system = build_lattice_particle(spec, profile)
    assert system.D == 4
    assert system.H.dim == 8
    np.testing.assert_allclose(system.measure(0.0), [0, 1, 0, 0])


def test_fock_dimension_and_basis(fock):
    assert fock_dimension(3, 2) == 10
    assert fock.D == 10
    basis = fock.info["basis"]
    assert all(basis.lookup[q] == i for i, q in enumerate(basis.configs))
    assert len(set(basis.configs)) == len(basis)


def test_fock_parts_respect_particle_number(fock):
    basis = fock.info["basis"]
    numbers = np.array([basis.number(i) for i in range(len(basis))])
    H0 = fock.parts["H0"].matrix
    HI = fock.parts["HI"].matrix
    gap = np.abs(numbers[:, None] - numbers[None, :])
    assert np.all(H0[gap != 0] == 0)
    assert np.all(HI[gap != 1] == 0)
    np.testing.assert_allclose(HI, HI.conj().T)
    check_disjoint_supports(fock)


def test_fock_truncation_has_no_creation_edges(fock):
    basis = fock.info["basis"]
    HI = fock.parts["HI"].matrix
    numbers = np.array([basis.number(i) for i in range(len(basis))])
    assert numbers.max() == 2
    for i in np.flatnonzero(numbers == 2):
        assert set(numbers[np.flatnonzero(HI[:, i])]) <= {1}


def test_fock_creation_element_from_vacuum(fock):
    basis = fock.info["basis"]
    vacuum = basis.lookup[(0, 0, 0)]
    at_source = basis.lookup[(0, 1, 0)]
    beside = basis.lookup[(1, 0, 0)]
    HI = fock.parts["HI"].matrix
    assert HI[at_source, vacuum] == pytest.approx(0.1)
    assert HI[beside, vacuum] == pytest.approx(0.05)


def test_fock_without_coupling_matches_free_rates():
    spec = FockSpec(lattice=LatticeSpec(L=3, eps=1.0), n_max=2, coupling=0.0, initial="single")
    system = build_fock(spec)
    assert np.max(np.abs(system.parts["HI"].matrix)) == 0.0
    full = system.rates(0.4)
    free = system.rates(0.4, H=system.parts["H0"])
    regular = full.regular
    np.testing.assert_allclose(full.sigma[:, regular], free.sigma[:, regular], atol=1e-12)


def test_fock_rejects_out_of_range_sources():
    with pytest.raises(ValidationError):
        FockSpec(lattice=LatticeSpec(L=3, eps=1.0), sources=[5])


def test_fock_dimension_cap():
    set_config({"dimension_cap": 5})
    with pytest.raises(ModelConfigurationError):
        build_fock(FockSpec(lattice=LatticeSpec(L=3, eps=1.0), n_max=2))


def _gaussian_spinor(spec, components):
    x = spec.x0 + spec.eps * np.arange(spec.L)
    return np.exp(-(x**2) / 2.0)[:, None] * np.asarray(components, dtype=float)[None, :]


def test_dirac_requires_even_grid():
    with pytest.raises(ValidationError):
        DiracSpec(L=31, eps=0.1)


def test_dirac_profile_unchanged_at_zero():
    spec = DiracSpec(L=64, eps=0.2, mass=0.7)
    dirac = build_dirac(spec, _gaussian_spinor(spec, [1.0, 0.5]))
    np.testing.assert_allclose(dirac.spinor_grid(0.0), dirac.psi0, atol=1e-12)


def test_massless_spinor_translates_at_light_speed():
    spec = DiracSpec(L=128, eps=0.1, mass=0.0, c=1.0)
    dirac = build_dirac(spec, _gaussian_spinor(spec, [1.0, 1.0]))
    x = np.linspace(-3.0, 3.0, 41)
    for t in (0.3, 1.0):
        np.testing.assert_allclose(dirac.density_at(x + t, t), dirac.density_at(x, 0.0), atol=1e-10)


def test_dirac_flux_never_exceeds_density():
    spec = DiracSpec(L=64, eps=0.2, mass=1.0)
    rng = np.random.default_rng(9)
    profile = rng.normal(size=(64, 2)) + 1j * rng.normal(size=(64, 2))
    dirac = build_dirac(spec, profile)
    x = np.linspace(spec.x0, spec.x0 + spec.period, 200, endpoint=False)
    for t in (0.0, 0.4):
        assert np.all(np.abs(bohm_dirac_velocity(dirac, x, t)) <= dirac.c * (1 + 1e-12))


def test_model_cards(rabi, fock):
    assert describe_system(fock)["dimension"] == 10
    assert describe_system(fock)["parts"] == ["H0", "HI"]
    card = describe_system(rabi)
    assert card["dimension"] == 2
    assert card["spectrum"] == pytest.approx([-1.0, 1.0])
    dirac = build_dirac(DiracSpec(L=16, eps=0.5), np.ones(16))
    assert describe_system(dirac)["dimension"] == 32
