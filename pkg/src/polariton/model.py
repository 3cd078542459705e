"""Model parameters, truncated product bases, and Hamiltonian builders.

Conventions used throughout the package (hbar = 1):

* The product basis is photon-major: basis index = n * matter_dim + k with
  photon occupation n = 0..photon_cutoff outermost and matter index k
  innermost.
* The matter index k counts excitations above the collective ground state.
  For the pseudo-spin ladder of N two-level dipoles (total spin j = N/2,
  the maximal cooperation sector) this means k = m + j, so k = 0 is the
  fully de-excited state m = -j.
* All diagonal energies are reported relative to the uncoupled vacuum
  (n = 0, k = 0); equivalently the builders normal order the free parts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-12
DENSE_DROP_TOL = 0.0  # builders store exact nonzeros, nothing is thresholded


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and coupling of the N-dipole cavity model.

    omega_a is the cavity frequency, omega_b the dipole transition
    frequency, g the single-dipole vacuum Rabi frequency and n_atoms the
    number of dipoles.  The collective coupling g * sqrt(n_atoms) is the
    quantity held fixed when comparing against the many-dipole limit.
    """

    omega_a: float
    omega_b: float
    g: float
    n_atoms: int

    def __post_init__(self):
        if not (self.omega_a > 0.0 and self.omega_b > 0.0):
            raise DomainError(
                f"mode frequencies must be positive, got omega_a={self.omega_a}, "
                f"omega_b={self.omega_b}"
            )
        if self.g < 0.0:
            raise DomainError(f"coupling g must be non-negative, got {self.g}")
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms}")

    @classmethod
    def from_collective(cls, omega_a, omega_b, collective_coupling, n_atoms=1):
        """Build params from the collective coupling lambda = g * sqrt(N)."""
        if collective_coupling < 0.0:
            raise DomainError(
                f"collective coupling must be non-negative, got {collective_coupling}"
            )
        g = collective_coupling / math.sqrt(n_atoms)
        return cls(omega_a=omega_a, omega_b=omega_b, g=g, n_atoms=n_atoms)

    @property
    def collective_coupling(self) -> float:
        return self.g * math.sqrt(self.n_atoms)

    @property
    def total_spin(self) -> float:
        return self.n_atoms / 2.0

    def bilinear_stable(self) -> bool:
        """Normal-phase condition of the bilinear model: 4 lambda^2 < wa*wb."""
        lam = self.collective_coupling
        return 4.0 * lam * lam < self.omega_a * self.omega_b

    def require_bilinear_stable(self) -> None:
        lam = self.collective_coupling
        if not self.bilinear_stable():
            raise DomainError(
                "bilinear model unstable: 4*lambda^2 = "
                f"{4.0 * lam * lam:.12g} >= omega_a*omega_b = "
                f"{self.omega_a * self.omega_b:.12g}; "
                "require 4*lambda^2 < omega_a*omega_b"
            )


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation of the product space: photon Fock levels 0..photon_cutoff
    tensor a matter block of matter_dim levels."""

    photon_cutoff: int
    matter_dim: int

    def __post_init__(self):
        if int(self.photon_cutoff) != self.photon_cutoff or self.photon_cutoff < 1:
            raise ConfigurationError(
                f"photon_cutoff must be an integer >= 1, got {self.photon_cutoff}"
            )
        if int(self.matter_dim) != self.matter_dim or self.matter_dim < 2:
            raise ConfigurationError(
                f"matter_dim must be an integer >= 2, got {self.matter_dim}"
            )

    @property
    def photon_dim(self) -> int:
        return self.photon_cutoff + 1

    @property
    def dimension(self) -> int:
        return self.photon_dim * self.matter_dim

    def index(self, n_photon: int, k_matter: int) -> int:
        """Flat index of |n_photon> tensor |k_matter> (photon-major)."""
        if not (0 <= n_photon < self.photon_dim):
            raise ConfigurationError(
                f"photon occupation {n_photon} outside 0..{self.photon_cutoff}"
            )
        if not (0 <= k_matter < self.matter_dim):
            raise ConfigurationError(
                f"matter index {k_matter} outside 0..{self.matter_dim - 1}"
            )
        return n_photon * self.matter_dim + k_matter


class HermitianOperator:
    """Hermitian matrix stored as its upper triangle.

    Only entries with row <= col are kept; the lower triangle is implied by
    conjugate transposition, so hermiticity holds by construction.  Diagonal
    entries are stored with zero imaginary part.
    """

    __slots__ = ("dim", "rows", "cols", "values")

    def __init__(self, dim, rows, cols, values):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values)
        if rows.shape != cols.shape or rows.shape != values.shape:
            raise ConfigurationError("rows, cols and values must have equal length")
        if rows.size and (rows.min() < 0 or cols.max() >= dim):
            raise ConfigurationError("entry index outside the operator dimension")
        if np.any(rows > cols):
            raise ConfigurationError("only upper-triangle entries may be stored")
        diag = rows == cols
        if np.any(np.abs(np.imag(values[diag])) > 0.0):
            raise ConfigurationError("diagonal entries must be real")
        self.dim = int(dim)
        self.rows = rows
        self.cols = cols
        self.values = values

    @classmethod
    def from_dense(cls, matrix, tol=HERMITICITY_TOL):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ConfigurationError(f"expected a square matrix, got {matrix.shape}")
        scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
        dev = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
        if dev > tol * max(1.0, scale):
            raise ConfigurationError(
                f"matrix is not Hermitian: max |H - H^dag| = {dev:.3e}"
            )
        dim = matrix.shape[0]
        # symmetrize before extraction so rounding asymmetry cannot leak in
        sym = 0.5 * (matrix + matrix.conj().T)
        iu = np.triu_indices(dim)
        vals = sym[iu]
        keep = vals != 0.0
        rows, cols = iu[0][keep], iu[1][keep]
        vals = vals[keep]
        diag = rows == cols
        if np.iscomplexobj(vals):
            vals = vals.copy()
            vals[diag] = vals[diag].real
        return cls(dim, rows, cols, vals)

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def entries(self):
        """Stored upper-triangle entries as (row, col, value) tuples."""
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def to_dense(self) -> np.ndarray:
        dtype = complex if np.iscomplexobj(self.values) else float
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        out[self.rows, self.cols] = self.values
        off = self.rows != self.cols
        out[self.cols[off], self.rows[off]] = np.conj(self.values[off])
        return out

    def to_sparse(self):
        from scipy.sparse import coo_matrix

        off = self.rows != self.cols
        rows = np.concatenate([self.rows, self.cols[off]])
        cols = np.concatenate([self.cols, self.rows[off]])
        vals = np.concatenate([self.values, np.conj(self.values[off])])
        return coo_matrix((vals, (rows, cols)), shape=(self.dim, self.dim)).tocsr()

    def frobenius_norm(self) -> float:
        off = self.rows != self.cols
        sq = np.abs(self.values) ** 2
        return float(math.sqrt(np.sum(sq) + np.sum(sq[off])))


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on a truncated basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ConfigurationError("state amplitudes must form a non-empty vector")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigurationError(
                f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3e}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "StateVector":
        if not (0 <= index < dim):
            raise ConfigurationError(f"basis index {index} outside 0..{dim - 1}")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def product_fock(cls, spec: HilbertSpec, n_photon: int, k_matter: int) -> "StateVector":
        return cls.basis_state(spec.dimension, spec.index(n_photon, k_matter))


def annihilation_matrix(dim: int) -> np.ndarray:
    """Truncated boson annihilation operator, a|n> = sqrt(n)|n-1>."""
    a = np.zeros((dim, dim))
    idx = np.arange(1, dim)
    a[idx - 1, idx] = np.sqrt(idx.astype(float))
    return a


def spin_ladder_matrices(n_atoms: int):
    """(J_plus, J_minus, J_z) for the maximal sector j = N/2.

    Basis ordering follows the package convention: index k = m + j ascending,
    so entry (k+1, k) of J_plus carries sqrt(j(j+1) - m(m+1)).  The products
    m(m+1) are dyadic rationals, so the sqrt arguments are computed exactly.
    """
    j = n_atoms / 2.0
    dim = n_atoms + 1
    m = -j + np.arange(dim)
    jp = np.zeros((dim, dim))
    amp = np.sqrt(j * (j + 1.0) - m[:-1] * (m[:-1] + 1.0))
    jp[np.arange(1, dim), np.arange(dim - 1)] = amp
    jz = np.diag(m)
    return jp, jp.T.copy(), jz


def build_dicke_hamiltonian(params: ModelParams, spec: HilbertSpec) -> HermitianOperator:
    """Cavity mode coupled to the collective pseudo-spin, counter-rotating
    terms retained:

        H = wa a^dag a + wb (J_z + j) + g (a + a^dag)(J_plus + J_minus)

    The J_z + j shift puts the uncoupled vacuum at energy zero.  Requires
    matter_dim == n_atoms + 1 (the full maximal-j ladder).
    """
    if spec.matter_dim != params.n_atoms + 1:
        raise ConfigurationError(
            f"Dicke matter block needs matter_dim = n_atoms + 1 = "
            f"{params.n_atoms + 1}, got {spec.matter_dim}"
        )
    dp = spec.photon_dim
    a = annihilation_matrix(dp)
    n_ph = a.T @ a
    jp, jm, jz = spin_ladder_matrices(params.n_atoms)
    excitation = jz + params.total_spin * np.eye(spec.matter_dim)
    h = params.omega_a * np.kron(n_ph, np.eye(spec.matter_dim))
    h += params.omega_b * np.kron(np.eye(dp), excitation)
    h += params.g * np.kron(a + a.T, jp + jm)
    return HermitianOperator.from_dense(h)


def build_bilinear_hamiltonian(params: ModelParams, spec: HilbertSpec) -> HermitianOperator:
    """Two coupled truncated oscillators, the many-dipole limit of the model:

        H = wa a^dag a + wb b^dag b + lambda (a + a^dag)(b + b^dag)

    with lambda = g sqrt(N).  Energies are relative to the uncoupled vacuum.
    Rejects parameters outside the normal-phase stability region.
    """
    params.require_bilinear_stable()
    lam = params.collective_coupling
    a = annihilation_matrix(spec.photon_dim)
    b = annihilation_matrix(spec.matter_dim)
    h = params.omega_a * np.kron(a.T @ a, np.eye(spec.matter_dim))
    h += params.omega_b * np.kron(np.eye(spec.photon_dim), b.T @ b)
    h += lam * np.kron(a + a.T, b + b.T)
    return HermitianOperator.from_dense(h)


def build_jc_rwa_hamiltonian(params: ModelParams, spec: HilbertSpec) -> HermitianOperator:
    """Rotating-wave counterpart of the Dicke builder:

        H = wa a^dag a + wb (J_z + j) + g (a^dag J_minus + a J_plus)

    Conserves the total excitation number a^dag a + J_z + j.
    """
    if spec.matter_dim != params.n_atoms + 1:
        raise ConfigurationError(
            f"matter block needs matter_dim = n_atoms + 1 = "
            f"{params.n_atoms + 1}, got {spec.matter_dim}"
        )
    dp = spec.photon_dim
    a = annihilation_matrix(dp)
    jp, jm, jz = spin_ladder_matrices(params.n_atoms)
    excitation = jz + params.total_spin * np.eye(spec.matter_dim)
    h = params.omega_a * np.kron(a.T @ a, np.eye(spec.matter_dim))
    h += params.omega_b * np.kron(np.eye(dp), excitation)
    h += params.g * (np.kron(a.T, jm) + np.kron(a, jp))
    return HermitianOperator.from_dense(h)


def total_excitation_operator(params: ModelParams, spec: HilbertSpec) -> HermitianOperator:
    """a^dag a + J_z + j, the quantity conserved by the rotating-wave model."""
    if spec.matter_dim != params.n_atoms + 1:
        raise ConfigurationError(
            f"matter block needs matter_dim = n_atoms + 1 = "
            f"{params.n_atoms + 1}, got {spec.matter_dim}"
        )
    a = annihilation_matrix(spec.photon_dim)
    _, _, jz = spin_ladder_matrices(params.n_atoms)
    excitation = jz + params.total_spin * np.eye(spec.matter_dim)
    n = np.kron(a.T @ a, np.eye(spec.matter_dim))
    n += np.kron(np.eye(spec.photon_dim), excitation)
    return HermitianOperator.from_dense(n)


def expectation(op: HermitianOperator, state: StateVector) -> float:
    """<psi|H|psi> for a Hermitian operator; the imaginary residue must be
    below 1e-12 (relative) and is discarded after the check."""
    if op.dim != state.dim:
        raise ConfigurationError(
            f"operator dimension {op.dim} != state dimension {state.dim}"
        )
    psi = state.amplitudes
    value = complex(np.vdot(psi, op.to_dense() @ psi))
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise NumericalError(
            f"expectation value has imaginary residue {value.imag:.3e}",
            residual=abs(value.imag),
        )
    return float(value.real)
