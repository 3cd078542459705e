"""Eigensolvers, normal-mode analysis, and cutoff convergence ladders."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError
from .model import (
    HermitianOperator,
    HilbertSpec,
    ModelParams,
    StateVector,
    build_bilinear_hamiltonian,
    build_dicke_hamiltonian,
    build_jc_rwa_hamiltonian,
)

DEFAULT_SEED = 1234
DENSE_DIM_LIMIT = 4096
RESIDUAL_TOL = 1e-9
ORTHONORMALITY_TOL = 1e-10
KRYLOV_MAXITER = 10000


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def count(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class NormalModes:
    """Polariton branch frequencies of the stable bilinear model."""

    omega_minus: float
    omega_plus: float
    mode_matrix: np.ndarray  # orthogonal 2x2, columns are mode coordinates

    def __post_init__(self):
        if not (self.omega_minus > 0.0):
            raise DomainError(f"lower branch must be positive, got {self.omega_minus}")
        if self.omega_plus < self.omega_minus:
            raise DomainError("branches must be ordered omega_plus >= omega_minus")

    @property
    def splitting(self) -> float:
        return self.omega_plus - self.omega_minus


def _validate_decomposition(h: HermitianOperator, values, vectors):
    scale = max(h.frobenius_norm(), 1e-300)
    dense = h.to_dense()
    resid = np.linalg.norm(dense @ vectors - vectors * values, axis=0)
    worst = float(resid.max()) if resid.size else 0.0
    if worst > RESIDUAL_TOL * scale:
        raise NumericalError(
            f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_TOL:.0e} * |H|",
            residual=worst,
        )
    gram = vectors.conj().T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(values.size))))
    if ortho > ORTHONORMALITY_TOL:
        raise NumericalError(
            f"eigenvector orthonormality defect {ortho:.3e}", residual=ortho
        )


def eigendecompose(
    h: HermitianOperator,
    k: int | None = None,
    *,
    seed: int = DEFAULT_SEED,
    method: str = "auto",
) -> EigenDecomposition:
    """Lowest part of the spectrum of a Hermitian operator.

    k = None requests the full decomposition (dense path).  With k given the
    dense path is still used up to DENSE_DIM_LIMIT and a Krylov iteration
    (ARPACK Lanczos, start vector fixed by the seed) above it; method can
    force "dense" or "krylov" explicitly.  Residual and orthonormality
    contracts are checked before returning.
    """
    if k is not None and not (1 <= k <= h.dim):
        raise ConfigurationError(f"k = {k} outside 1..{h.dim}")
    if method not in ("auto", "dense", "krylov"):
        raise ConfigurationError(f"unknown method '{method}'")
    if method == "auto":
        if k is None or h.dim <= DENSE_DIM_LIMIT:
            method = "dense"
        else:
            method = "krylov"
    if method == "krylov" and k is None:
        raise ConfigurationError(
            f"dimension {h.dim} needs the iterative path; pass the number of "
            "eigenpairs k"
        )

    if method == "dense":
        values, vectors = np.linalg.eigh(h.to_dense())
        if k is not None:
            values = values[:k]
            vectors = vectors[:, :k]
    else:
        from scipy.sparse.linalg import ArpackNoConvergence, eigsh

        if k >= h.dim - 1:
            raise ConfigurationError(
                f"iterative path needs k < dim - 1, got k={k}, dim={h.dim}"
            )
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(h.dim)
        try:
            values, vectors = eigsh(
                h.to_sparse(), k=k, which="SA", v0=v0, maxiter=KRYLOV_MAXITER
            )
        except ArpackNoConvergence as exc:
            got = np.asarray(exc.eigenvalues)
            raise NumericalError(
                f"Krylov iteration did not converge within {KRYLOV_MAXITER} "
                f"iterations ({got.size}/{k} pairs found)",
                residual=float("nan"),
            ) from exc
        order = np.argsort(values)
        values = values[order]
        vectors = vectors[:, order]

    _validate_decomposition(h, values, vectors)
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def ground_state(
    h: HermitianOperator, *, seed: int = DEFAULT_SEED
) -> tuple[float, StateVector]:
    """Lowest eigenpair.  The global phase is fixed by making the largest
    amplitude real and positive, so repeated runs agree bit for bit."""
    k = 1 if h.dim > DENSE_DIM_LIMIT else None
    dec = eigendecompose(h, k=k, seed=seed)
    energy = float(dec.eigenvalues[0])
    vec = dec.eigenvectors[:, 0].astype(complex)
    pivot = int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    vec = vec / phase
    vec = vec / np.linalg.norm(vec)
    return energy, StateVector(vec)


def normal_modes(params: ModelParams) -> NormalModes:
    """Branch frequencies of the bilinear model from the 2x2 quadratic form

        [[wa^2, 2 lambda sqrt(wa wb)], [2 lambda sqrt(wa wb), wb^2]]

    whose eigenvalues are the squared mode frequencies."""
    params.require_bilinear_stable()
    lam = params.collective_coupling
    off = 2.0 * lam * math.sqrt(params.omega_a * params.omega_b)
    form = np.array(
        [
            [params.omega_a**2, off],
            [off, params.omega_b**2],
        ]
    )
    mu, vecs = np.linalg.eigh(form)
    # deterministic column signs: largest component positive
    for col in range(2):
        piv = int(np.argmax(np.abs(vecs[:, col])))
        if vecs[piv, col] < 0.0:
            vecs[:, col] = -vecs[:, col]
    return NormalModes(
        omega_minus=float(math.sqrt(mu[0])),
        omega_plus=float(math.sqrt(mu[1])),
        mode_matrix=vecs,
    )


def ground_energy_bilinear(params: ModelParams) -> float:
    """Exact ground energy of the untruncated bilinear model relative to the
    uncoupled vacuum: (omega_plus + omega_minus)/2 - (wa + wb)/2."""
    modes = normal_modes(params)
    return 0.5 * (modes.omega_plus + modes.omega_minus) - 0.5 * (
        params.omega_a + params.omega_b
    )


_BUILDERS = {
    "bilinear": build_bilinear_hamiltonian,
    "dicke": build_dicke_hamiltonian,
    "jc-rwa": build_jc_rwa_hamiltonian,
}


def _spec_for(builder: str, params: ModelParams, cutoff: int) -> HilbertSpec:
    if builder == "bilinear":
        return HilbertSpec(photon_cutoff=cutoff, matter_dim=cutoff + 1)
    return HilbertSpec(photon_cutoff=cutoff, matter_dim=params.n_atoms + 1)


@dataclass(frozen=True)
class ConvergenceReport:
    cutoffs: tuple
    values: tuple
    deltas: tuple
    tol: float

    @property
    def final_delta(self) -> float:
        return self.deltas[-1]

    @property
    def converged(self) -> bool:
        return self.final_delta < self.tol


def cutoff_convergence(
    builder: str,
    params: ModelParams,
    cutoffs,
    *,
    observable: str = "ground_energy",
    tol: float = 1e-10,
    seed: int = DEFAULT_SEED,
) -> ConvergenceReport:
    """Track an observable along a strictly increasing ladder of photon
    cutoffs.  The bilinear matter block grows with the cutoff as well; the
    spin models keep their fixed matter ladder.  Observable is
    "ground_energy" or "first_gap"."""
    if builder not in _BUILDERS:
        raise ConfigurationError(
            f"unknown builder '{builder}', expected one of {sorted(_BUILDERS)}"
        )
    cutoffs = tuple(int(c) for c in cutoffs)
    if len(cutoffs) < 2:
        raise ConfigurationError("need at least two cutoffs to report deltas")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ConfigurationError(f"cutoffs must increase strictly, got {cutoffs}")
    if observable not in ("ground_energy", "first_gap"):
        raise ConfigurationError(f"unknown observable '{observable}'")

    values = []
    for cutoff in cutoffs:
        h = _BUILDERS[builder](params, _spec_for(builder, params, cutoff))
        dec = eigendecompose(h, seed=seed)
        if observable == "ground_energy":
            values.append(float(dec.eigenvalues[0]))
        else:
            values.append(float(dec.eigenvalues[1] - dec.eigenvalues[0]))
    deltas = tuple(abs(b - a) for a, b in zip(values, values[1:]))
    return ConvergenceReport(
        cutoffs=cutoffs, values=tuple(values), deltas=deltas, tol=tol
    )


def jc_polariton_splitting(
    params: ModelParams, *, photon_cutoff: int = 1, seed: int = DEFAULT_SEED
) -> float:
    """Separation of the two single-excitation eigenvalues of the
    rotating-wave model; equals 2 g sqrt(N) on resonance."""
    if params.collective_coupling >= min(params.omega_a, params.omega_b):
        raise DomainError(
            "single-excitation branches are no longer the lowest excited "
            "states at this coupling"
        )
    spec = HilbertSpec(photon_cutoff=photon_cutoff, matter_dim=params.n_atoms + 1)
    h = build_jc_rwa_hamiltonian(params, spec)
    dec = eigendecompose(h, seed=seed)
    return float(dec.eigenvalues[2] - dec.eigenvalues[1])
