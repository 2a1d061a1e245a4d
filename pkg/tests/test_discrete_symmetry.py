import cmath

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.error_trace.exceptions import ClassificationError, DomainError
from src.services.monopole_triplet_module.angular_separation import TripletState, field_of
from src.services.monopole_triplet_module.discrete_symmetry import (
    apply_B_freedom,
    apply_D,
    apply_Delta,
    basis_change_V,
    build_N,
    commutation_dichotomy,
    conjugation_residuals,
    default_beta,
    eigen_residual,
    frame_conjugation_residual,
    k_decompose,
    n_amplitude_matrix,
    n_eigensectors,
    pi_matrix,
    sector_projectors,
)
from src.services.monopole_triplet_module.matrix_elements import random_points
from src.services.monopole_triplet_module.monopole_gauges import builtin_profiles
from src.services.monopole_triplet_module.quantum_numbers import HalfInt


def test_pi_matrix_squares_to_beta_squared():
    for alpha, beta in ((cmath.exp(0.4j), 1), (1.0 + 0.5j, 1), (-1.0, -1)):
        pi = pi_matrix(alpha, beta)
        assert_allclose(pi @ pi, beta**2 * np.eye(3), atol=1e-15)
    with pytest.raises(DomainError):
        pi_matrix(0.0)


def test_default_beta():
    assert default_beta(-1.0) == -1
    assert default_beta(1.0) == 1
    assert default_beta(1j) == 1


@pytest.mark.parametrize("twoj", [1, 3, 5])
@pytest.mark.parametrize("A", [0.0, 0.7, 0.4 + 0.3j, np.pi])
def test_sector_states_are_eigenstates(make_state, twoj, A):
    for delta in (1, -1):
        state = make_state(twoj=twoj, A=A, delta=delta)
        scale = float(np.max(np.abs(state.amplitudes)))
        assert scale > 0
        assert eigen_residual(state) / scale < 1e-12
        plus, minus = n_eigensectors(state.j, state.alpha)
        sector = plus if delta == 1 else minus
        assert sector.violation(state.amplitudes) < 1e-12


def test_eigenvalues_of_the_two_sectors():
    j = HalfInt(3)
    plus, minus = n_eigensectors(j, 1.0)
    # e^{iπ(j+1)} = e^{iπ·5/2} = i
    assert plus.eigenvalue == pytest.approx(1j)
    assert minus.eigenvalue == pytest.approx(-1j)
    assert plus.free_slots == ("f1", "f2", "f3", "f4", "h1", "h2")
    assert n_eigensectors("1/2", 1.0)[0].free_slots == ("f2", "f4", "h1", "h2")


def test_sector_eigenvalue_for_alpha_minus_one(make_state):
    state = make_state(twoj=3, A=np.pi, delta=1)
    n_amp = n_amplitude_matrix(state.j, state.alpha)
    # β = −1 flips the operator, so the commuting one is −N̂₊₁
    assert_allclose(n_amp, -n_amplitude_matrix(state.j, 1.0, 1), atol=1e-12)


def test_dichotomy(trivial, bps):
    j = HalfInt(3)
    cases = [
        (trivial, cmath.exp(0.7j), True),
        (trivial, 1.0 + 0.5j, True),
        (bps, cmath.exp(0.7j), False),
        (bps, 1.0, True),
        (bps, -1.0, True),
    ]
    for profile, alpha, commutes in cases:
        verdict = commutation_dichotomy(profile, j, alpha)
        assert verdict.commutes is commutes
        assert verdict.consistent


def test_dichotomy_ignores_dyon_terms():
    verdict = commutation_dichotomy(builtin_profiles("bps", kappa=0.4), HalfInt(1), 1.0)
    assert verdict.commutes


@pytest.mark.parametrize("frame", ["dirac", "cartesian"])
@pytest.mark.parametrize("alpha", [cmath.exp(0.3j), -1.0, 0.8 + 0.6j])
def test_frame_conjugation(make_state, frame, alpha):
    psi = field_of(make_state(twoj=3))
    assert frame_conjugation_residual(alpha, frame, psi, random_points(4, seed=7)) < 1e-10


@pytest.mark.parametrize("frame", ["schwinger", "dirac", "cartesian"])
def test_closed_iso_factor(frame):
    operator = build_N(cmath.exp(0.9j), frame)
    for theta, phi in random_points(5, seed=3):
        assert_allclose(operator.iso_factor(theta, phi), operator.closed_iso_factor(theta, phi), atol=1e-12)
    with pytest.raises(DomainError):
        build_N(1.0, "axial")


def test_basis_change_identities():
    for A, gamma_ in ((0.0, 0.4), (0.3 + 0.1j, -0.7 + 0.2j)):
        residuals = conjugation_residuals(A, gamma_, HalfInt(5))
        assert residuals["Delta"] < 1e-11
        assert residuals["D"] < 1e-11


def test_basis_change_moves_sector(make_state):
    state = make_state(twoj=3, A=0.2, delta=-1)
    change = basis_change_V(0.2, 1.1 + 0.3j)
    moved = change.apply(state)
    assert moved.A == pytest.approx(1.1 + 0.3j)
    scale = float(np.max(np.abs(moved.amplitudes)))
    assert eigen_residual(moved) / scale < 1e-12
    assert eigen_residual(apply_Delta(state, 0.45)) / scale < 1e-10
    assert eigen_residual(apply_D(state, 0.45)) / scale < 1e-10


def test_B_freedom_only_touches_t0_block(make_state):
    state = make_state(twoj=3)
    moved = apply_B_freedom(state, 0.0, 0.6)
    assert_allclose(moved.block("f"), state.block("f"))
    assert_allclose(moved.block("h"), np.exp(0.6j) * state.block("h"))
    assert_allclose(moved.block("g"), state.block("g"))


def _h_state(twoj, delta):
    amps = np.zeros(12, dtype=complex)
    amps[4:8] = (1.0, 0.5j, delta * 0.5j, delta * 1.0)
    return TripletState(epsilon=0.0, j=HalfInt(twoj), m=HalfInt(1), amplitudes=amps, delta=delta)


@pytest.mark.parametrize("twoj", [1, 3, 5])
@pytest.mark.parametrize("delta", [1, -1])
def test_k_h_sector(twoj, delta):
    decomposition = k_decompose(_h_state(twoj, delta))
    assert decomposition.sector == "h"
    assert decomposition.expected == pytest.approx(delta * (twoj / 2 + 0.5))
    assert decomposition.residual < 1e-12
    assert decomposition.fd_residual < 1e-6


@pytest.mark.parametrize(
    "twoj, mu, eigenvalue",
    [(3, 1, np.sqrt(3.0)), (3, -1, -np.sqrt(3.0)), (5, 1, np.sqrt(8.0)), (5, -1, -np.sqrt(8.0))],
)
def test_k_f_sector(twoj, mu, eigenvalue):
    amps = np.zeros(12, dtype=complex)
    amps[0:4] = (1.0, 0.3 - 0.2j, mu * (0.3 - 0.2j), mu)
    state = TripletState(epsilon=0.0, j=HalfInt(twoj), m=HalfInt(1), amplitudes=amps)
    decomposition = k_decompose(state)
    assert decomposition.sector == "f"
    assert decomposition.mu == mu
    assert decomposition.expected == pytest.approx(eigenvalue)
    assert decomposition.eigenvalue == pytest.approx(eigenvalue)
    assert decomposition.residual < 1e-12
    assert decomposition.fd_residual < 1e-6


def test_k_f_sector_at_half():
    amps = np.zeros(12, dtype=complex)
    amps[0:4] = (0.0, 0.8, 0.0, -0.4j)
    decomposition = k_decompose(TripletState(epsilon=0.0, j=HalfInt(1), m=HalfInt(-1), amplitudes=amps))
    assert decomposition.sector == "f"
    assert decomposition.expected == 0.0
    assert decomposition.residual < 1e-12
    assert decomposition.fd_residual < 1e-6


def test_k_f_sector_rejects_unpaired_amplitudes():
    amps = np.zeros(12, dtype=complex)
    amps[0:4] = (1.0, 0.0, 0.0, 0.5)
    with pytest.raises(ClassificationError) as err:
        k_decompose(TripletState(epsilon=0.0, j=HalfInt(3), m=HalfInt(1), amplitudes=amps))
    assert err.value.projections["pairing"] == pytest.approx(0.5)
    amps[0:4] = (1.0, 0.3, 0.3, 1.0)
    with pytest.raises(ClassificationError):
        k_decompose(TripletState(epsilon=0.0, j=HalfInt(3), m=HalfInt(1), amplitudes=amps, mu=-1))


def test_k_decomposition_rejects_mixed_and_zero_states(make_state):
    with pytest.raises(ClassificationError) as err:
        k_decompose(make_state(twoj=3))
    assert set(err.value.projections) == {"f", "h"}
    zero = TripletState(epsilon=0.0, j=HalfInt(3), m=HalfInt(1), amplitudes=np.zeros(12))
    with pytest.raises(ClassificationError):
        k_decompose(zero)


@pytest.mark.parametrize("alpha", [cmath.exp(0.4j), 0.6 + 0.9j, -1.0])
def test_sector_projectors(alpha):
    plus, minus = sector_projectors(HalfInt(3), alpha)
    assert_allclose(plus + minus, np.eye(12), atol=1e-14)
    assert_allclose(plus @ plus, plus, atol=1e-12)
    assert_allclose(plus @ minus, np.zeros((12, 12)), atol=1e-12)
    small_plus, small_minus = sector_projectors(HalfInt(1), alpha)
    assert np.count_nonzero(np.abs(small_plus + small_minus) > 1e-14) == 8
