"""Closed-system dynamics: exact propagation, Rabi flopping, mean-field
evolution, and the vacuum correlation spectrum.

Quantum propagation goes through the eigendecomposition (exact up to solver
accuracy, no step-size error); the mean-field equations use a classical
fixed-step fourth-order integrator.  The factorized mean-field equations

    i d<a>/dt = wa <a> + lambda (<b> + <b>*)
    i d<b>/dt = wb <b> + lambda (<a> + <a>*)

keep <a> = <b> = 0 an exact fixed point, which is the point of the
comparison: starting from vacuum the mean field stays dark while the
quantum vacuum correlation spectrum still shows both polariton lines.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError
from .model import (
    HermitianOperator,
    HilbertSpec,
    ModelParams,
    StateVector,
    annihilation_matrix,
    build_bilinear_hamiltonian,
    build_dicke_hamiltonian,
    build_jc_rwa_hamiltonian,
)
from .series import SpectrumSeries, TimeGrid, Trajectory
from .spectral import DEFAULT_SEED, eigendecompose, normal_modes

EVOLVE_DT_FACTOR = 0.5   # require dt * max|eigenvalue| < 0.5
MEANFIELD_DT_FACTOR = 0.01  # require dt <= 0.01 / max(wa, wb)
NORM_DRIFT_TOL = 1e-9
_CHUNK = 4096


def _check_dt(grid: TimeGrid, lambda_max: float) -> None:
    if grid.dt * lambda_max >= EVOLVE_DT_FACTOR:
        raise ConfigurationError(
            f"dt = {grid.dt:.12g} too coarse for the spectral radius "
            f"{lambda_max:.12g}; require dt * max|E| < {EVOLVE_DT_FACTOR}"
        )


def evolve(
    h: HermitianOperator,
    psi0: StateVector,
    grid: TimeGrid,
    *,
    seed: int = DEFAULT_SEED,
) -> Trajectory:
    """Propagate |psi0> under H across the grid via the eigenbasis.

    Returns a trajectory with one complex channel "state" of shape
    (n_samples, dim).  Norm drift beyond 1e-9 is treated as a failure."""
    if h.dim != psi0.dim:
        raise ConfigurationError(
            f"operator dimension {h.dim} != state dimension {psi0.dim}"
        )
    dec = eigendecompose(h, seed=seed)
    _check_dt(grid, float(np.max(np.abs(dec.eigenvalues))))
    coeffs = dec.eigenvectors.conj().T @ psi0.amplitudes
    times = grid.times
    phases = np.exp(-1j * np.outer(times, dec.eigenvalues))
    states = (phases * coeffs) @ dec.eigenvectors.T
    norms = np.linalg.norm(states, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > NORM_DRIFT_TOL:
        raise ConfigurationError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL}")
    return Trajectory(times=times, channels={"state": states})


_FLOP_BUILDERS = {
    "bilinear": build_bilinear_hamiltonian,
    "dicke": build_dicke_hamiltonian,
    "jc-rwa": build_jc_rwa_hamiltonian,
}


def _default_flop_spec(model: str, params: ModelParams) -> HilbertSpec:
    if model == "bilinear":
        return HilbertSpec(photon_cutoff=12, matter_dim=13)
    return HilbertSpec(photon_cutoff=4, matter_dim=params.n_atoms + 1)


def rabi_flop_signal(
    params: ModelParams,
    grid: TimeGrid,
    *,
    model: str = "bilinear",
    spec: HilbertSpec | None = None,
    seed: int = DEFAULT_SEED,
) -> Trajectory:
    """Matter excitation number after preparing one matter excitation in an
    empty cavity.  Works for any of the quantum builders; the matter index k
    is the excitation count in all of them, so the observable is the
    diagonal weight sum_i k_i |psi_i|^2."""
    if model not in _FLOP_BUILDERS:
        raise ConfigurationError(
            f"unknown model '{model}', expected one of {sorted(_FLOP_BUILDERS)}"
        )
    if spec is None:
        spec = _default_flop_spec(model, params)
    h = _FLOP_BUILDERS[model](params, spec)
    dec = eigendecompose(h, seed=seed)
    _check_dt(grid, float(np.max(np.abs(dec.eigenvalues))))
    psi0 = StateVector.product_fock(spec, 0, 1)
    coeffs = dec.eigenvectors.conj().T @ psi0.amplitudes
    weights = np.tile(np.arange(spec.matter_dim, dtype=float), spec.photon_dim)
    times = grid.times
    signal = np.empty(times.size)
    for start in range(0, times.size, _CHUNK):
        block = times[start : start + _CHUNK]
        phases = np.exp(-1j * np.outer(block, dec.eigenvalues))
        states = (phases * coeffs) @ dec.eigenvectors.T
        signal[start : start + _CHUNK] = (np.abs(states) ** 2) @ weights
    return Trajectory(times=times, channels={"matter_excitation": signal})


def flop_spectrum(
    traj: Trajectory, *, channel: str | None = None, window: str = "none"
) -> SpectrumSeries:
    """One-sided power spectrum |DFT|^2 of a mean-subtracted real channel.

    Frequencies are angular.  The default rectangular window keeps the
    discrete Parseval identity exact; "hann" trades that for less leakage.
    """
    if channel is None:
        if len(traj.channels) != 1:
            raise ConfigurationError(
                f"trajectory has channels {sorted(traj.channels)}; pick one"
            )
        channel = next(iter(traj.channels))
    if channel not in traj.channels:
        raise ConfigurationError(f"no channel '{channel}' in trajectory")
    signal = np.asarray(traj.channels[channel])
    if signal.ndim != 1:
        raise ConfigurationError(f"channel '{channel}' is not scalar-valued")
    if np.iscomplexobj(signal):
        if np.max(np.abs(signal.imag)) > 1e-12 * max(1.0, np.max(np.abs(signal))):
            raise ConfigurationError(f"channel '{channel}' is not real")
        signal = signal.real
    n = signal.size
    if n < 16:
        raise ConfigurationError(f"need at least 16 samples, got {n}")
    centered = signal - signal.mean()
    if window == "hann":
        centered = centered * np.hanning(n)
    elif window != "none":
        raise ConfigurationError(f"unknown window '{window}'")
    amplitudes = np.fft.rfft(centered)
    freqs = 2.0 * math.pi * np.fft.rfftfreq(n, d=traj.dt)
    return SpectrumSeries(frequencies=freqs, intensities=np.abs(amplitudes) ** 2)


def semiclassical_trajectory(
    params: ModelParams, a0: complex, b0: complex, grid: TimeGrid
) -> Trajectory:
    """Integrate the factorized mean-field equations with fixed-step RK4.

    The step bound dt <= 0.01 / max(wa, wb) keeps the integrator error far
    below the 1e-6 energy-drift contract.  Channels: complex "a" and "b"
    plus the conserved mean-field energy."""
    dt_max = MEANFIELD_DT_FACTOR / max(params.omega_a, params.omega_b)
    if grid.dt > dt_max * (1.0 + 1e-12):
        raise ConfigurationError(
            f"dt = {grid.dt:.12g} exceeds the mean-field step bound {dt_max:.12g}"
        )
    lam = params.collective_coupling
    wa, wb = params.omega_a, params.omega_b
    dt = grid.dt

    def deriv(a, b):
        return (
            -1j * (wa * a + lam * 2.0 * b.real),
            -1j * (wb * b + lam * 2.0 * a.real),
        )

    n = grid.n_samples
    traj_a = np.empty(n, dtype=complex)
    traj_b = np.empty(n, dtype=complex)
    a, b = complex(a0), complex(b0)
    for i in range(n):
        traj_a[i] = a
        traj_b[i] = b
        if i == n - 1:
            break
        k1a, k1b = deriv(a, b)
        k2a, k2b = deriv(a + 0.5 * dt * k1a, b + 0.5 * dt * k1b)
        k3a, k3b = deriv(a + 0.5 * dt * k2a, b + 0.5 * dt * k2b)
        k4a, k4b = deriv(a + dt * k3a, b + dt * k3b)
        a = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    energy = (
        wa * np.abs(traj_a) ** 2
        + wb * np.abs(traj_b) ** 2
        + 4.0 * lam * traj_a.real * traj_b.real
    )
    return Trajectory(
        times=grid.times, channels={"a": traj_a, "b": traj_b, "energy": energy}
    )


def vacuum_correlation_spectrum(
    params: ModelParams,
    grid: TimeGrid,
    *,
    spec: HilbertSpec | None = None,
    seed: int = DEFAULT_SEED,
) -> SpectrumSeries:
    """Spectrum of the ground-state field correlation <X(t) X> with
    X = a + a^dag, evaluated in the Heisenberg picture.

    The correlation is a sum of lines at the transition energies E_k - E_0
    with weights |<k|X|0>|^2; the lines are accumulated onto the discrete
    frequency grid of the supplied time grid, so the summed intensity equals
    the static variance <X^2> exactly (the resolution of identity of the
    truncated eigenbasis).  No time stepping is involved."""
    params.require_bilinear_stable()
    if spec is None:
        spec = HilbertSpec(photon_cutoff=12, matter_dim=13)
    h = build_bilinear_hamiltonian(params, spec)
    dec = eigendecompose(h, seed=seed)
    ground = dec.eigenvectors[:, 0]
    a1 = annihilation_matrix(spec.photon_dim)
    x_full = np.kron(a1 + a1.T, np.eye(spec.matter_dim))
    amps = dec.eigenvectors.conj().T @ (x_full @ ground)
    weights = np.abs(amps) ** 2
    lines = dec.eigenvalues - dec.eigenvalues[0]
    total = float(weights.sum())

    n = grid.n_samples
    d_omega = 2.0 * math.pi / (n * grid.dt)
    nyquist = math.pi / grid.dt
    relevant = weights > 1e-14 * total
    top = float(lines[relevant].max()) if np.any(relevant) else 0.0
    if top >= nyquist:
        raise ConfigurationError(
            f"grid cannot represent lines up to {top:.12g}; "
            f"require dt < {math.pi / top:.12g}"
        )
    splitting = normal_modes(params).splitting
    if splitting > 0.0 and splitting < 2.0 * d_omega:
        needed = 4.0 * math.pi / splitting
        raise ConfigurationError(
            f"grid horizon {n * grid.dt:.12g} too short to resolve the "
            f"splitting {splitting:.12g}; need at least {needed:.12g}"
        )

    n_bins = n // 2 + 1
    intensities = np.zeros(n_bins)
    idx = np.rint(lines / d_omega).astype(int)
    for i, w in zip(idx, weights):
        if 0 <= i < n_bins:
            intensities[i] += w
    freqs = d_omega * np.arange(n_bins)
    return SpectrumSeries(frequencies=freqs, intensities=intensities)
