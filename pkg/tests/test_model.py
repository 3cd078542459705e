"""Operator construction and Hilbert-space bookkeeping."""
import math

import numpy as np
import pytest

from polariton.errors import ConfigurationError, DomainError, NumericalError
from polariton.model import (
    HermitianOperator,
    HilbertSpec,
    ModelParams,
    StateVector,
    annihilation_matrix,
    build_bilinear_hamiltonian,
    build_dicke_hamiltonian,
    build_jc_rwa_hamiltonian,
    expectation,
    spin_ladder_matrices,
    total_excitation_operator,
)


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(omega_a=0.0, omega_b=1.0, g=0.1, n_atoms=1)
    with pytest.raises(DomainError):
        ModelParams(omega_a=1.0, omega_b=-1.0, g=0.1, n_atoms=1)
    with pytest.raises(DomainError):
        ModelParams(omega_a=1.0, omega_b=1.0, g=-0.1, n_atoms=1)
    with pytest.raises(DomainError):
        ModelParams(omega_a=1.0, omega_b=1.0, g=0.1, n_atoms=0)


def test_collective_coupling_round_trip():
    p = ModelParams.from_collective(1.0, 1.0, 0.2, n_atoms=16)
    assert p.g == pytest.approx(0.05, abs=1e-15)
    assert p.collective_coupling == pytest.approx(0.2, abs=1e-15)
    assert p.total_spin == 8.0


def test_stability_threshold_is_strict():
    # 4 lambda^2 < omega_a omega_b, with equality rejected
    assert ModelParams.from_collective(1.0, 1.0, 0.49).bilinear_stable()
    boundary = ModelParams.from_collective(1.0, 1.0, 0.5)
    assert not boundary.bilinear_stable()
    with pytest.raises(DomainError):
        boundary.require_bilinear_stable()
    detuned = ModelParams.from_collective(1.0, 4.0, 0.99)
    assert detuned.bilinear_stable()  # threshold uses the geometric mean


def test_hilbert_index_is_photon_major():
    spec = HilbertSpec(photon_cutoff=3, matter_dim=5)
    assert spec.photon_dim == 4
    assert spec.dimension == 20
    assert spec.index(0, 0) == 0
    assert spec.index(0, 4) == 4
    assert spec.index(1, 0) == 5
    assert spec.index(2, 3) == 13
    with pytest.raises(ConfigurationError):
        spec.index(4, 0)
    with pytest.raises(ConfigurationError):
        spec.index(0, 5)


def test_annihilation_matrix_entries():
    a = annihilation_matrix(4)
    expected = np.zeros((4, 4))
    for n in range(1, 4):
        expected[n - 1, n] = math.sqrt(n)
    assert np.array_equal(a, expected)
    number = a.conj().T @ a
    assert np.allclose(np.diag(number), [0, 1, 2, 3], atol=1e-15)


def test_spin_ladder_single_atom_is_pauli():
    jp, jm, jz = spin_ladder_matrices(1)
    assert np.array_equal(jz, np.diag([-0.5, 0.5]))
    assert np.array_equal(jp, np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert np.array_equal(jm, jp.T)


def test_spin_ladder_su2_algebra():
    # [J+, J-] = 2 Jz and [Jz, J+-] = +- J+- hold exactly for small N
    for n in (1, 2, 3, 7):
        jp, jm, jz = spin_ladder_matrices(n)
        assert np.allclose(jp @ jm - jm @ jp, 2.0 * jz, atol=1e-13)
        assert np.allclose(jz @ jp - jp @ jz, jp, atol=1e-13)
        assert np.allclose(jz @ jm - jm @ jz, -jm, atol=1e-13)
        # Casimir j(j+1) on the maximal sector
        j = n / 2.0
        casimir = 0.5 * (jp @ jm + jm @ jp) + jz @ jz
        assert np.allclose(casimir, j * (j + 1.0) * np.eye(n + 1), atol=1e-12)


def test_uncoupled_dicke_is_diagonal_excitation_count():
    p = ModelParams(omega_a=1.0, omega_b=1.0, g=0.0, n_atoms=1)
    spec = HilbertSpec(photon_cutoff=2, matter_dim=2)
    h = build_dicke_hamiltonian(p, spec).to_dense()
    # vacuum-relative: E(n, k) = n + k
    expected = np.diag([0.0, 1.0, 1.0, 2.0, 2.0, 3.0])
    assert np.allclose(h, expected, atol=1e-15)


def test_dicke_matter_dimension_must_match():
    p = ModelParams(omega_a=1.0, omega_b=1.0, g=0.1, n_atoms=3)
    with pytest.raises(ConfigurationError):
        build_dicke_hamiltonian(p, HilbertSpec(photon_cutoff=2, matter_dim=3))


def test_bilinear_matches_manual_construction():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    spec = HilbertSpec(photon_cutoff=3, matter_dim=4)
    h = build_bilinear_hamiltonian(p, spec).to_dense()
    a = annihilation_matrix(4)
    ia = np.kron(a, np.eye(4))
    ib = np.kron(np.eye(4), a)
    manual = (
        ia.conj().T @ ia
        + ib.conj().T @ ib
        + 0.2 * (ia + ia.conj().T) @ (ib + ib.conj().T)
    )
    assert np.allclose(h, manual, atol=1e-14)


def test_bilinear_requires_stability():
    with pytest.raises(DomainError):
        build_bilinear_hamiltonian(
            ModelParams.from_collective(1.0, 1.0, 0.6),
            HilbertSpec(photon_cutoff=3, matter_dim=4),
        )


def test_jc_conserves_total_excitation_and_dicke_does_not():
    p = ModelParams(omega_a=1.0, omega_b=1.0, g=0.1, n_atoms=2)
    spec = HilbertSpec(photon_cutoff=4, matter_dim=3)
    n_op = total_excitation_operator(p, spec).to_dense()
    jc = build_jc_rwa_hamiltonian(p, spec).to_dense()
    assert np.linalg.norm(jc @ n_op - n_op @ jc) < 1e-13
    dicke = build_dicke_hamiltonian(p, spec).to_dense()
    assert np.linalg.norm(dicke @ n_op - n_op @ dicke) > 1e-3


def test_hermitian_storage_round_trip():
    rng = np.random.default_rng(7)
    raw = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    dense = raw + raw.conj().T
    op = HermitianOperator.from_dense(dense)
    assert np.allclose(op.to_dense(), dense, atol=1e-14)
    assert np.allclose(op.to_sparse().toarray(), dense, atol=1e-14)
    assert op.frobenius_norm() == pytest.approx(np.linalg.norm(dense), rel=1e-13)


def test_from_dense_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ConfigurationError):
        HermitianOperator.from_dense(bad)


def test_upper_triangle_storage_is_enforced():
    with pytest.raises(ConfigurationError):
        HermitianOperator(2, np.array([1]), np.array([0]), np.array([1.0 + 0j]))
    with pytest.raises(ConfigurationError):
        HermitianOperator(2, np.array([0]), np.array([0]), np.array([1.0j]))


def test_state_vector_normalization_guard():
    with pytest.raises(ConfigurationError):
        StateVector(np.array([1.0, 1.0]))
    s = StateVector.basis_state(4, 2)
    assert s.amplitudes[2] == 1.0


def test_product_fock_addressing():
    spec = HilbertSpec(photon_cutoff=2, matter_dim=3)
    s = StateVector.product_fock(spec, n_photon=1, k_matter=2)
    assert s.amplitudes[spec.index(1, 2)] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1


def test_expectation_on_fock_states():
    p = ModelParams(omega_a=1.0, omega_b=1.0, g=0.0, n_atoms=1)
    spec = HilbertSpec(photon_cutoff=3, matter_dim=2)
    h = build_dicke_hamiltonian(p, spec)
    assert expectation(h, StateVector.product_fock(spec, 0, 0)) == pytest.approx(0.0, abs=1e-15)
    assert expectation(h, StateVector.product_fock(spec, 2, 1)) == pytest.approx(3.0, abs=1e-13)
