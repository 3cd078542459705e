"""Energy witness, reduced-state entropy and the Gaussian route."""
import math

import numpy as np
import pytest

from polariton.errors import ConfigurationError, DomainError
from polariton.model import (
    HilbertSpec,
    ModelParams,
    StateVector,
    build_bilinear_hamiltonian,
    expectation,
)
from polariton.spectral import ground_state
from polariton.witness import (
    DensityMatrix,
    GaussianState,
    gaussian_ground_state,
    gaussian_linear_entropy,
    linear_entropy,
    linear_entropy_predicted,
    reduced_density,
    separable_bound_scan,
    thermal_occupation,
    witness_evaluate,
)

PARAMS = ModelParams.from_collective(1.0, 1.0, 0.2)
SPEC = HilbertSpec(16, 17)


@pytest.fixture(scope="module")
def ground():
    h = build_bilinear_hamiltonian(PARAMS, SPEC)
    energy, state = ground_state(h, seed=1234)
    return h, energy, state


def test_ground_state_triggers_the_witness(ground):
    h, energy, state = ground
    verdict = witness_evaluate(h, state, PARAMS)
    assert verdict.value == pytest.approx(-0.021093687069296707, abs=1e-11)
    assert verdict.separable_floor == 0.0
    assert verdict.verdict == "entangled"


def test_product_fock_states_stay_above_the_floor(ground):
    h, _, _ = ground
    spec12 = HilbertSpec(11, 12)
    h12 = build_bilinear_hamiltonian(PARAMS, spec12)
    for n in range(12):
        for k in range(12):
            value = expectation(h12, StateVector.product_fock(spec12, n, k))
            assert value >= -1e-12


def test_coherent_scan_floor_is_zero():
    scan = separable_bound_scan(PARAMS)
    assert scan.minimum >= -1e-9
    assert scan.minimum == pytest.approx(0.0, abs=1e-12)
    assert scan.at_alpha == pytest.approx(0.0, abs=1e-12)
    # refining the grid keeps the floor non-negative
    fine = separable_bound_scan(PARAMS, radius=1.0, n_points=81)
    assert fine.minimum >= -1e-9
    # uncoupled and near-threshold cases
    assert separable_bound_scan(ModelParams.from_collective(1.0, 1.0, 0.0)).minimum == 0.0
    near = separable_bound_scan(ModelParams.from_collective(1.0, 1.0, 0.49), n_points=101)
    assert near.minimum >= -1e-9


def test_witness_requires_resonance(ground):
    h, _, state = ground
    detuned = ModelParams.from_collective(1.0, 1.3, 0.2)
    with pytest.raises(DomainError):
        witness_evaluate(h, state, detuned)
    with pytest.raises(DomainError):
        linear_entropy_predicted(detuned)
    # the coherent scan only needs stability, not resonance
    assert separable_bound_scan(detuned).minimum >= -1e-9


def test_density_matrix_validation():
    with pytest.raises(ConfigurationError):
        DensityMatrix(np.array([[0.6, 0.1], [0.3, 0.4]]))  # not hermitian
    with pytest.raises(ConfigurationError):
        DensityMatrix(np.eye(2))  # trace 2
    rho = DensityMatrix(np.diag([0.5, 0.5]))
    assert rho.purity() == pytest.approx(0.5, abs=1e-15)
    assert linear_entropy(rho) == pytest.approx(0.5, abs=1e-15)


def test_reduced_state_of_product_is_pure():
    spec = HilbertSpec(3, 4)
    s = StateVector.product_fock(spec, 2, 1)
    rho = reduced_density(s, spec, "photon")
    assert linear_entropy(rho) == pytest.approx(0.0, abs=1e-14)
    rho_m = reduced_density(s, spec, "matter")
    assert rho_m.dim == 4
    assert linear_entropy(rho_m) == pytest.approx(0.0, abs=1e-14)


def test_entropy_routes_agree(ground):
    _, _, state = ground
    fock = linear_entropy(reduced_density(state, SPEC, "photon"))
    gauss = gaussian_linear_entropy(gaussian_ground_state(PARAMS), "photon")
    assert abs(fock - gauss) < 1e-6
    assert fock == pytest.approx(0.0220228850379, abs=1e-9)
    # both subsystems of a pure state carry the same mixedness
    fock_matter = linear_entropy(reduced_density(state, SPEC, "matter"))
    assert abs(fock - fock_matter) < 1e-9


def test_quoted_entropy_value():
    assert linear_entropy_predicted(PARAMS) == pytest.approx(0.04, abs=1e-15)
    with pytest.raises(DomainError):
        linear_entropy_predicted(ModelParams.from_collective(1.0, 1.0, 1.2))


def test_entropy_ratio_approaches_one_half():
    for lam in (0.01, 0.02, 0.05):
        p = ModelParams.from_collective(1.0, 1.0, lam)
        ratio = gaussian_linear_entropy(gaussian_ground_state(p), "photon") / lam**2
        assert ratio == pytest.approx(0.5, rel=0.05)


def test_entropy_grows_toward_threshold():
    values = [
        gaussian_linear_entropy(gaussian_ground_state(ModelParams.from_collective(1.0, 1.0, lam)), "photon")
        for lam in (0.1, 0.2, 0.3, 0.4, 0.45)
    ]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_gaussian_ground_state_covariances():
    state = gaussian_ground_state(PARAMS)
    cov = state.covariance
    assert cov[0, 0] == pytest.approx(0.5340371758660804, abs=1e-12)
    assert cov[1, 1] == pytest.approx(0.48945315646535164, abs=1e-12)
    # pure global state
    assert state.purity() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(state.mean, 0.0, atol=1e-15)


def test_gaussian_state_validation():
    with pytest.raises(ConfigurationError):
        GaussianState(np.zeros(4), np.eye(4) * 0.1)  # violates uncertainty
    with pytest.raises(ConfigurationError):
        GaussianState(np.zeros(3), np.eye(4) * 0.5)
    vac = GaussianState(np.zeros(4), np.eye(4) * 0.5)
    assert vac.purity() == pytest.approx(1.0, abs=1e-14)
    assert gaussian_linear_entropy(vac, "photon") == pytest.approx(0.0, abs=1e-14)


def test_thermal_occupation_values():
    assert thermal_occupation(1.0, 0.0) == 0.0
    assert thermal_occupation(10.0, 1.0) == pytest.approx(1.0 / math.expm1(10.0), rel=1e-12)
    assert thermal_occupation(10.0, 1.0) < 5e-5
    assert thermal_occupation(1.0, 1.0) == pytest.approx(0.5819767068693265, abs=1e-12)
    with pytest.raises(DomainError):
        thermal_occupation(-1.0, 1.0)
    with pytest.raises(DomainError):
        thermal_occupation(1.0, -0.5)
