import math
from functools import partial

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.error_trace.exceptions import CriterionError, DomainError, PoleProximityError
from src.services.monopole_triplet_module.quantum_numbers import HalfInt, weights
from src.services.monopole_triplet_module.su2_wigner import (
    ladder_coefficients,
    parity_flip,
    pauli_criterion,
    pauli_J_operators,
    pauli_phi,
    pauli_phi_from_wigner,
    verify_recurrences,
    wigner_D_matrix,
    wigner_small_d,
)

mpmath.mp.dps = 40


def reference_small_d(j, mp, m, theta):
    """Factorial sum over s with (−1)^{m′−m+s}, evaluated at 40 digits."""
    j, mp, m = (mpmath.mpf(HalfInt.of(v).twice) / 2 for v in (j, mp, m))
    half = mpmath.mpf(theta) / 2
    c, s_ = mpmath.cos(half), mpmath.sin(half)
    f = mpmath.factorial
    pre = mpmath.sqrt(f(j + mp) * f(j - mp) * f(j + m) * f(j - m))
    total = mpmath.mpf(0)
    for s in range(0, int(2 * j) + 1):
        args = (j + m - s, s, mp - m + s, j - mp - s)
        if any(a < 0 for a in args):
            continue
        sign = -1 if int(mp - m + s) % 2 else 1
        total += sign * c ** (2 * j + m - mp - 2 * s) * s_ ** (mp - m + 2 * s) / (f(args[0]) * f(args[1]) * f(args[2]) * f(args[3]))
    return float(pre * total)


@pytest.mark.parametrize("twoj", [1, 2, 3, 4, 5, 7, 9])
def test_small_d_against_high_precision_sum(twoj):
    j = HalfInt(twoj)
    for theta in (0.2, 1.1, 2.5, 3.0):
        for mp in weights(j):
            for m in weights(j):
                assert wigner_small_d(j, mp, m, theta) == pytest.approx(reference_small_d(j, mp, m, theta), abs=1e-13)


def test_sign_convention():
    assert wigner_small_d("1/2", "1/2", "-1/2", math.pi) == pytest.approx(-1.0, abs=1e-15)
    assert wigner_small_d("1/2", "1/2", "-1/2", 0.8) == pytest.approx(-math.sin(0.4), abs=1e-15)


def test_small_d_vectorizes():
    theta = np.linspace(0.1, 3.0, 7)
    values = wigner_small_d("3/2", "1/2", "-3/2", theta)
    assert values.shape == theta.shape
    assert_allclose(values, [wigner_small_d("3/2", "1/2", "-3/2", t) for t in theta])


@pytest.mark.parametrize("twoj", range(1, 10))
def test_D_matrix_is_unitary(twoj):
    D = wigner_D_matrix(HalfInt(twoj), 0.7, 1.9, -2.3)
    assert_allclose(D @ D.conj().T, np.eye(twoj + 1), atol=1e-12)


def test_ladder_coefficients():
    assert ladder_coefficients("1/2").a == 1.0
    assert ladder_coefficients("1/2").b == 0.0
    assert ladder_coefficients("1/2").c is None
    coeffs = ladder_coefficients("5/2")
    assert (coeffs.a, coeffs.b, coeffs.c) == pytest.approx((3.0, math.sqrt(8.0), math.sqrt(5.0)))
    with pytest.raises(DomainError):
        ladder_coefficients(0)


@pytest.mark.parametrize("twoj, twom", [(1, 1), (3, -1), (5, 3), (7, -7), (9, 1)])
def test_first_order_recurrences(twoj, twom):
    for theta, phi in ((0.4, 0.1), (1.7, 2.8), (2.9, 5.5)):
        report = verify_recurrences(HalfInt(twoj), HalfInt(twom), theta, phi)
        assert report.max_residual < 1e-8
        assert len(report.residuals) == 2 * min(twoj + 1, 4)


def test_recurrences_refuse_the_pole():
    with pytest.raises(PoleProximityError):
        verify_recurrences("3/2", "1/2", 1e-9, 0.0)


@pytest.mark.parametrize("twoj", [1, 3, 5])
def test_parity_flip(twoj):
    for m in weights(HalfInt(twoj)):
        for sigma in weights(HalfInt(twoj)):
            reflected, mirrored = parity_flip(HalfInt(twoj), m, sigma, 1.2, 0.9)
            assert abs(reflected - mirrored) < 1e-12


def test_pauli_rules_agree_on_the_grid():
    for twolam in range(-6, 7):
        for twoj in range(-4, 7):
            verdict = pauli_criterion(HalfInt(twolam), HalfInt(twoj))
            assert verdict.rules_agree, (twolam, twoj)


def test_pauli_admissibility():
    assert pauli_criterion("1/2", "1/2").admissible
    assert pauli_criterion("1/2", "5/2").admissible
    assert not pauli_criterion("1/2", 1).admissible
    assert not pauli_criterion(0, "1/2").admissible
    assert not pauli_criterion(2, 1).admissible
    assert not pauli_criterion(0.3, 1.0).admissible


def test_pauli_functions_match_wigner_columns():
    for lam, j, m in (("1/2", "1/2", "-1/2"), ("1/2", "3/2", "1/2"), (1, 2, -1), (0, 3, 2), ("-3/2", "5/2", "5/2")):
        for theta, phi in ((0.5, 0.2), (2.1, 4.4)):
            assert abs(complex(pauli_phi(lam, j, m, theta, phi)) - complex(pauli_phi_from_wigner(lam, j, m, theta, phi))) < 1e-10


def test_pauli_function_rejects_inadmissible_weights():
    with pytest.raises(CriterionError):
        pauli_phi("1/2", 1, 0, 0.5, 0.5)


@pytest.mark.parametrize("twoj, twolam", [(1, 1), (1, -1), (3, -1), (5, 3)])
def test_pauli_ladder_operators(twoj, twolam):
    lam, j = HalfInt(twolam), HalfInt(twoj)
    ops = pauli_J_operators(lam)
    theta, phi = 1.1, 0.4
    for twom in range(-twoj, twoj + 1, 2):
        column = partial(pauli_phi_from_wigner, lam, j, HalfInt(twom))
        value = complex(column(theta, phi))
        assert abs(complex(ops["three"](column)(theta, phi)) - twom / 2 * value) < 1e-8
        raised = complex(ops["plus"](column)(theta, phi))
        if twom == twoj:
            assert abs(raised) < 1e-8
        else:
            upper = complex(pauli_phi_from_wigner(lam, j, HalfInt(twom + 2), theta, phi))
            factor = math.sqrt((twoj - twom) * (twoj + twom + 2)) / 2
            assert abs(raised) == pytest.approx(factor * abs(upper), abs=1e-8)
    lowest = partial(pauli_phi_from_wigner, lam, j, HalfInt(-twoj))
    assert abs(complex(ops["minus"](lowest)(theta, phi))) < 1e-8
