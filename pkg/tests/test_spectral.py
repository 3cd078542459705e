"""Eigensolvers, normal modes and cutoff convergence."""
import math

import numpy as np
import pytest

from polariton.errors import ConfigurationError, DomainError
from polariton.model import HilbertSpec, ModelParams, build_bilinear_hamiltonian
from polariton.spectral import (
    cutoff_convergence,
    eigendecompose,
    ground_energy_bilinear,
    ground_state,
    jc_polariton_splitting,
    normal_modes,
)

# resonance omega=1, lambda=0.2: Omega_pm = sqrt(1 +- 0.4)
OMEGA_PLUS = 1.1832159566199232
OMEGA_MINUS = 0.7745966692414834
GROUND_ENERGY = -0.021093687069296707  # (Omega_+ + Omega_-)/2 - 1


def test_normal_modes_resonance_oracle():
    modes = normal_modes(ModelParams.from_collective(1.0, 1.0, 0.2))
    assert modes.omega_plus == pytest.approx(OMEGA_PLUS, abs=1e-14)
    assert modes.omega_minus == pytest.approx(OMEGA_MINUS, abs=1e-14)
    assert modes.splitting == pytest.approx(OMEGA_PLUS - OMEGA_MINUS, abs=1e-14)


def test_normal_modes_detuned_against_quadratic_formula():
    # eigenvalues of [[wa^2, 2 lam sqrt(wa wb)], [., wb^2]] by hand
    wa, wb, lam = 1.0, 2.0, 0.3
    off = 2.0 * lam * math.sqrt(wa * wb)
    tr, det = wa**2 + wb**2, (wa**2) * (wb**2) - off**2
    disc = math.sqrt(tr * tr - 4.0 * det)
    mu_plus, mu_minus = (tr + disc) / 2.0, (tr - disc) / 2.0
    modes = normal_modes(ModelParams.from_collective(wa, wb, lam))
    assert modes.omega_plus == pytest.approx(math.sqrt(mu_plus), rel=1e-14)
    assert modes.omega_minus == pytest.approx(math.sqrt(mu_minus), rel=1e-14)


def test_normal_modes_mode_matrix_is_orthogonal():
    modes = normal_modes(ModelParams.from_collective(1.0, 1.5, 0.25))
    r = modes.mode_matrix
    assert np.allclose(r.T @ r, np.eye(2), atol=1e-14)


def test_normal_modes_requires_stability():
    with pytest.raises(DomainError):
        normal_modes(ModelParams.from_collective(1.0, 1.0, 0.5))


def test_ground_energy_closed_form():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    assert ground_energy_bilinear(p) == pytest.approx(GROUND_ENERGY, abs=1e-14)
    # lambda = 0.05: leading order -lambda^2/2 within 5%
    weak = ground_energy_bilinear(ModelParams.from_collective(1.0, 1.0, 0.05))
    assert weak == pytest.approx(-0.00125, rel=0.05)


def test_dense_diagonalization_matches_closed_forms():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    h = build_bilinear_hamiltonian(p, HilbertSpec(12, 13))
    dec = eigendecompose(h, seed=1234)
    assert dec.count == h.dim
    assert np.all(np.diff(dec.eigenvalues) >= -1e-12)
    assert dec.eigenvalues[0] == pytest.approx(GROUND_ENERGY, abs=1e-11)
    assert dec.eigenvalues[1] - dec.eigenvalues[0] == pytest.approx(OMEGA_MINUS, abs=1e-9)
    assert dec.eigenvalues[2] - dec.eigenvalues[0] == pytest.approx(OMEGA_PLUS, abs=1e-9)


def test_krylov_agrees_with_dense():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    h = build_bilinear_hamiltonian(p, HilbertSpec(10, 11))
    dense = eigendecompose(h, seed=1234)
    sparse = eigendecompose(h, k=4, seed=1234, method="krylov")
    assert sparse.count == 4
    assert np.allclose(sparse.eigenvalues, dense.eigenvalues[:4], atol=1e-9)


def test_krylov_needs_room():
    p = ModelParams.from_collective(1.0, 1.0, 0.1)
    h = build_bilinear_hamiltonian(p, HilbertSpec(1, 2))
    with pytest.raises(ConfigurationError):
        eigendecompose(h, k=4, seed=1234, method="krylov")


def test_ground_state_phase_is_deterministic():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    h = build_bilinear_hamiltonian(p, HilbertSpec(8, 9))
    e1, s1 = ground_state(h, seed=1234)
    e2, s2 = ground_state(h, seed=99)
    assert e1 == pytest.approx(e2, abs=1e-12)
    # the same sign convention regardless of solver seed
    assert np.allclose(s1.amplitudes, s2.amplitudes, atol=1e-9)
    lead = s1.amplitudes[np.argmax(np.abs(s1.amplitudes))]
    assert lead.imag == pytest.approx(0.0, abs=1e-12)
    assert lead.real > 0


def test_coupling_strictly_lowers_ground_energy():
    energies = []
    for lam in (0.0, 0.1, 0.2, 0.3, 0.4):
        p = ModelParams.from_collective(1.0, 1.0, lam)
        h = build_bilinear_hamiltonian(p, HilbertSpec(14, 15))
        energies.append(ground_state(h, seed=1234)[0])
    assert all(b < a - 1e-12 for a, b in zip(energies, energies[1:]))


def test_cutoff_ladder_converges():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    report = cutoff_convergence("bilinear", p, (4, 6, 8, 10, 12), seed=1234)
    deltas = report.deltas
    assert all(d2 < d1 for d1, d2 in zip(deltas, deltas[1:]))
    assert report.final_delta < 1e-10
    assert report.converged


def test_cutoff_ladder_on_first_gap():
    p = ModelParams.from_collective(1.0, 1.0, 0.2)
    report = cutoff_convergence(
        "bilinear", p, (6, 8, 10), observable="first_gap", seed=1234
    )
    assert report.final_delta < 1e-9
    assert abs(report.values[-1] - OMEGA_MINUS) < 1e-9


def test_jc_splitting_is_two_g_root_n():
    for n in (1, 4, 9):
        p = ModelParams(omega_a=1.0, omega_b=1.0, g=0.05, n_atoms=n)
        split = jc_polariton_splitting(p, seed=1234)
        assert split == pytest.approx(2.0 * 0.05 * math.sqrt(n), abs=1e-12)


def test_jc_splitting_rejects_overdamped_coupling():
    with pytest.raises(DomainError):
        jc_polariton_splitting(ModelParams(1.0, 1.0, 1.1, 1), seed=1234)
