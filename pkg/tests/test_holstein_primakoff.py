"""Spin-to-boson mapping and its large-j limit."""
import math

import numpy as np
import pytest

from polariton.errors import ConfigurationError, DomainError
from polariton.holstein_primakoff import (
    SpinRep,
    commutator_residual,
    dicke_vs_bilinear_gap,
    hp_exactness_error,
    hp_operators,
    ladder_reference,
    linearization_error,
)
from polariton.model import ModelParams


def test_spin_rep_validation():
    assert SpinRep(0.5).dimension == 2
    assert SpinRep(50.0).two_j == 100
    with pytest.raises(DomainError):
        SpinRep(0.0)
    with pytest.raises(DomainError):
        SpinRep(0.3)
    with pytest.raises(DomainError):
        SpinRep(-1.0)


def test_map_reproduces_ladder_matrix_elements():
    # sqrt(2j) sqrt(1 - n/2j) sqrt(n+1) against sqrt((j-m)(j+m+1)) entry by entry
    for two_j in (1, 2, 3, 7, 40, 100):
        rep = SpinRep(two_j / 2.0)
        assert hp_exactness_error(rep) <= 1e-12


def test_su2_commutators_close_on_the_truncated_ladder():
    worst = max(commutator_residual(SpinRep(0.5 * k)) for k in range(1, 101))
    assert worst <= 1e-12


def test_reference_ladder_is_itself_su2():
    rep = SpinRep(5.0)
    jp, jm, jz = ladder_reference(rep)
    assert np.allclose(jp @ jm - jm @ jp, 2.0 * jz, atol=1e-12)
    assert np.allclose(jp, jm.conj().T, atol=1e-15)


def test_half_spin_map_is_pauli():
    jp, jm, jz = hp_operators(SpinRep(0.5))
    # j=1/2: one allowed raising element of unit size, jz = diag(1/2, -1/2)
    assert np.count_nonzero(jp) == 1
    assert np.max(np.abs(jp)) == pytest.approx(1.0, abs=1e-15)
    assert sorted(np.diag(jz).tolist()) == [-0.5, 0.5]


def test_linearization_error_closed_form():
    # retained occupation n_low: max |1 - sqrt(1 - n/2j)| over n <= n_low
    rep = SpinRep(50.0)
    assert linearization_error(rep, 0) == 0.0
    got = linearization_error(rep, 2)
    assert got == pytest.approx(1.0 - math.sqrt(1.0 - 2.0 / 100.0), abs=1e-12)
    assert got == pytest.approx(0.01005, abs=5e-6)


def test_linearization_error_shrinks_with_j():
    errs = [linearization_error(SpinRep(j), 2) for j in (2.0, 5.0, 10.0, 50.0)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_linearization_error_domain():
    # at n_low = 2j the top raising row has no linear counterpart left, so
    # the deviation saturates at the row below: 1 - sqrt(1/2j)
    edge = linearization_error(SpinRep(1.0), 2)
    assert edge == pytest.approx(1.0 - math.sqrt(0.5), abs=1e-14)
    with pytest.raises(ConfigurationError):
        linearization_error(SpinRep(1.0), 3)
    with pytest.raises(ConfigurationError):
        linearization_error(SpinRep(1.0), -1)


def test_gap_converges_to_bilinear_limit():
    p = ModelParams.from_collective(1.0, 1.0, 0.1)
    cmp = dicke_vs_bilinear_gap(p, (2, 4, 8, 16, 32), seed=1234)
    errs = cmp.relative_errors
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert cmp.final_error < 1e-3
    assert cmp.bilinear_gap == pytest.approx(math.sqrt(0.8), abs=1e-9)
