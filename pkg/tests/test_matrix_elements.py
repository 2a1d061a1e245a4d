import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.error_trace.exceptions import DomainError, PoleProximityError, UnclassifiedObservableError
from src.services.monopole_triplet_module.angular_separation import TripletState
from src.services.monopole_triplet_module.finite_differences import central_derivative, guard_pole
from src.services.monopole_triplet_module.iso_algebra import GAMMA, I3, I4
from src.services.monopole_triplet_module.matrix_elements import (
    Observable,
    classify_parity,
    expectation_expansion,
    matrix_element,
    norm_observable,
    radial_overlaps,
    random_points,
    selection_factor,
    selection_rule_check,
    state_norm,
)
from src.services.monopole_triplet_module.quadrature import sphere_rule
from src.services.monopole_triplet_module.quantum_numbers import HalfInt


def test_sphere_rule_weights():
    for in_cosine in (False, True):
        rule = sphere_rule(24, 8, in_cosine=in_cosine)
        assert rule.weight.sum() == pytest.approx(4 * math.pi)
        assert np.sum(rule.weight * np.cos(rule.theta) ** 2) == pytest.approx(4 * math.pi / 3)
        half = sphere_rule(24, 8, half_space=True, in_cosine=in_cosine)
        assert half.weight.sum() == pytest.approx(2 * math.pi)
        assert np.all(half.theta < math.pi / 2)


def test_finite_differences():
    assert_allclose(central_derivative(np.sin, 0.3), math.cos(0.3), atol=1e-10)
    with pytest.raises(PoleProximityError):
        guard_pole(math.pi - 1e-8)
    guard_pole(0.5)


def test_norm_element_is_state_norm(make_state):
    state = make_state(twoj=5, twom=-3)
    value = matrix_element(state, norm_observable(), state, 48, 8)
    assert abs(value.imag) < 1e-12
    assert value.real == pytest.approx(state_norm(state), rel=1e-12)


def test_minimal_state_norm_skips_forbidden_slots(make_state):
    state = make_state(twoj=1)
    assert matrix_element(state, norm_observable(), state, 32, 8).real == pytest.approx(state_norm(state), rel=1e-12)


def test_radial_overlaps_on_a_grid():
    r = np.linspace(0.0, 2.0, 201)
    amps = np.zeros((12, r.size), dtype=complex)
    amps[5] = np.exp(-r)
    state = TripletState(epsilon=0.1, j=HalfInt(3), m=HalfInt(1), amplitudes=amps, r_grid=r)
    overlaps = radial_overlaps(state, state)
    assert overlaps[5, 5].real == pytest.approx((1 - math.exp(-4)) / 2, rel=1e-8)
    other = TripletState(epsilon=0.1, j=HalfInt(3), m=HalfInt(1), amplitudes=amps[:, :100], r_grid=r[:100])
    with pytest.raises(DomainError):
        radial_overlaps(state, other)


def test_quadrature_doubling(make_state):
    state = make_state(twoj=3, A=0.5, delta=1)
    G = norm_observable()
    coarse = matrix_element(state, G, state, 48, 8)
    fine = matrix_element(state, G, state, 96, 16)
    assert abs(coarse - fine) < 1e-10 * abs(fine)


def test_hermiticity_residual():
    points = random_points(5)
    assert norm_observable().hermiticity_residual(points) < 1e-15
    assert Observable.constant("g1", I3, GAMMA[1]).hermiticity_residual(points) < 1e-15
    assert Observable.constant("skew", I3, 1j * I4).hermiticity_residual(points) == pytest.approx(2.0)


def test_parity_classes():
    assert classify_parity(norm_observable(), 0.4).omega == 1
    assert classify_parity(Observable.constant("identity", I3, I4), 0.4).omega == 1
    assert not classify_parity(norm_observable(), 0.4 + 0.2j).classified


def test_selection_factor():
    assert selection_factor(1, 1, -1, HalfInt(3), HalfInt(3)) == 0
    assert selection_factor(1, 1, 1, HalfInt(3), HalfInt(5)) == 0
    assert selection_factor(-1, 1, 1, HalfInt(3), HalfInt(5)) == 2
    assert abs(selection_factor(1, 1, 1, HalfInt(3), HalfInt(4)) - (1 + 1j)) < 1e-15


def test_selection_rules_for_the_norm(make_state):
    A = 0.6
    states = [make_state(twoj=twoj, A=A, delta=delta) for twoj in (3, 5) for delta in (1, -1)]
    pairs = [(bra, ket) for bra in states for ket in states]
    rows = selection_rule_check(norm_observable(), A, pairs, 32, 8)
    assert len(rows) == 16
    assert all(row.passed for row in rows)
    verdicts = {(row.J, row.J_p, row.delta, row.delta_p): row.verdict for row in rows}
    assert verdicts[("3/2", "3/2", 1, -1)] == "forbidden"
    assert verdicts[("3/2", "3/2", 1, 1)] == "doubled"
    assert verdicts[("3/2", "5/2", 1, 1)] == "forbidden"
    assert verdicts[("3/2", "5/2", 1, -1)] == "doubled"


def test_selection_rules_need_a_classified_observable(make_state):
    A = 0.3 + 0.4j
    state = make_state(twoj=3, A=A, delta=1)
    with pytest.raises(UnclassifiedObservableError):
        selection_rule_check(norm_observable(), A, [(state, state)], 16, 8)


def test_selection_rules_need_matching_sector(make_state):
    state = make_state(twoj=3, A=0.1, delta=1)
    with pytest.raises(DomainError):
        selection_rule_check(norm_observable(), 0.2, [(state, state)], 16, 8)


@pytest.mark.parametrize("A", [0.0, 0.9, 0.5 + 0.3j])
@pytest.mark.parametrize("delta", [1, -1])
def test_expectation_expansion(make_state, A, delta):
    state = make_state(twoj=3, A=A, delta=delta)
    for G in (norm_observable(), Observable.constant("g1", I3, GAMMA[1], hermitian=True)):
        breakdown = expectation_expansion(state, G, 32, 8)
        assert len(breakdown.terms) == 6
        assert breakdown.residual < 1e-9 * max(1.0, abs(breakdown.direct))


def test_expectation_expansion_without_hermiticity(make_state):
    state = make_state(twoj=3, A=0.2 + 0.1j, delta=1)
    G = Observable.constant("skew", I3, 1j * GAMMA[1] @ GAMMA[0])
    breakdown = expectation_expansion(state, G, 32, 8)
    assert breakdown.residual < 1e-9 * max(1.0, abs(breakdown.direct))
