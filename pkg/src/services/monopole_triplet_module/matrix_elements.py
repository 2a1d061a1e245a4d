"""
Matrix elements ∫ Ψ̄ Ĝ Ψ′ dV of separated triplet states, N̂-parity
classification of observables and the selection rules that follow from it.

A state Ψ_k = u_k(r)/r · Y_k(θ, φ) factorizes per slot, so every element is
Σ_kl R_kl·A_kl with R_kl = ∫ρ ū_k u′_l dr and A_kl = ∫ Ȳ_k (γ⁰G)_kl Y′_l dΩ.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from src.config.settings import settings
from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import DomainError, UnclassifiedObservableError
from src.services.monopole_triplet_module.angular_separation import MINIMAL_SLOTS, TripletState, angular_basis
from src.services.monopole_triplet_module.discrete_symmetry import default_beta, pi_matrix
from src.services.monopole_triplet_module.iso_algebra import GAMMA, I3, composite, parity_kernel
from src.services.monopole_triplet_module.quadrature import sphere_rule
from src.services.monopole_triplet_module.quantum_numbers import branch_phase

logger = logging.getLogger(__name__)

_G0 = composite(I3, GAMMA[0])
IsoKernel = Callable[[float, float], np.ndarray]


@dataclass(frozen=True)
class Observable:
    """Ĝ(x) = ρ(r)·g(θ, φ) ⊗ G₀(θ, φ)."""

    name: str
    iso: IsoKernel
    bispinor: IsoKernel
    radial: Callable[[np.ndarray], np.ndarray] = lambda r: np.ones_like(np.asarray(r, dtype=float))
    hermitian: bool = False

    @classmethod
    def constant(cls, name: str, iso: np.ndarray, bispinor: np.ndarray, radial=None, hermitian: bool = False) -> "Observable":
        iso, bispinor = np.asarray(iso, dtype=complex), np.asarray(bispinor, dtype=complex)
        kwargs = {"radial": radial} if radial is not None else {}
        return cls(name=name, iso=lambda t, p: iso, bispinor=lambda t, p: bispinor, hermitian=hermitian, **kwargs)

    def angular(self, theta: float, phi: float) -> np.ndarray:
        return composite(self.iso(theta, phi), self.bispinor(theta, phi))

    def hermiticity_residual(self, points) -> float:
        """max ‖γ⁰G − (γ⁰G)†‖ at the points; zero for kernels with real Ψ̄ĜΨ."""
        worst = 0.0
        for theta, phi in points:
            k = _G0 @ self.angular(theta, phi)
            worst = max(worst, float(np.max(np.abs(k - k.conj().T))))
        return worst


def random_points(n: int, seed: int | None = None) -> list[tuple[float, float]]:
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    theta = np.arccos(rng.uniform(-0.98, 0.98, size=n))
    phi = rng.uniform(0, 2 * math.pi, size=n)
    return list(zip(theta, phi))


# === radial and angular factors ===
def _radial_profiles(state: TripletState) -> tuple[Optional[np.ndarray], np.ndarray]:
    amps = state.amplitudes
    if amps.ndim == 1:
        return None, amps[:, None]
    return np.asarray(state.r_grid, dtype=float), amps


def radial_overlaps(bra: TripletState, ket: TripletState, weight=None) -> np.ndarray:
    """R_kl = ∫ρ ū_k u′_l dr; amplitudes given as plain values are taken on a unit shell."""
    r_bra, u_bra = _radial_profiles(bra)
    r_ket, u_ket = _radial_profiles(ket)
    if r_bra is None and r_ket is None:
        return np.outer(u_bra[:, 0].conj(), u_ket[:, 0])
    if r_bra is None or r_ket is None or r_bra.shape != r_ket.shape or not np.allclose(r_bra, r_ket):
        raise DomainError("bra and ket must share the radial grid")
    rho = np.ones_like(r_bra) if weight is None else np.asarray(weight(r_bra), dtype=complex)
    integrand = u_bra.conj()[:, None, :] * u_ket[None, :, :] * rho
    return simpson(integrand, x=r_bra, axis=-1)


def angular_overlaps(bra: TripletState, G: Observable, ket: TripletState, n_theta: int, n_phi: int, half_space: bool = False) -> np.ndarray:
    rule = sphere_rule(n_theta, n_phi, half_space=half_space)
    y_bra = angular_basis(bra.j, bra.m, rule.theta, rule.phi)
    y_ket = angular_basis(ket.j, ket.m, rule.theta, rule.phi)
    kernels = np.array([_G0 @ G.angular(t, p) for t, p in zip(rule.theta, rule.phi)])
    if not np.all(np.isfinite(kernels)):
        system_logger.warning("Non-finite observable kernel", additional_info={"observable": G.name})
        raise DomainError(f"observable {G.name} has non-finite samples")
    return np.einsum("q,kq,qkl,lq->kl", rule.weight, y_bra.conj(), kernels, y_ket)


def matrix_element(
    bra: TripletState,
    G: Observable,
    ket: TripletState,
    n_theta: int | None = None,
    n_phi: int | None = None,
    half_space: bool = False,
) -> complex:
    n_theta = n_theta or settings.QUAD_THETA
    n_phi = n_phi or settings.QUAD_PHI
    radial = radial_overlaps(bra, ket, G.radial)
    angular = angular_overlaps(bra, G, ket, n_theta, n_phi, half_space)
    return complex(np.sum(radial * angular))


def state_norm(state: TripletState) -> float:
    """Σ_k ∫|u_k|² dr · 4π/(2j+1) over the slots carrying a Wigner column."""
    radial = np.real(np.diag(radial_overlaps(state, state)))
    slots = list(MINIMAL_SLOTS) if state.is_minimal else list(range(12))
    return float(np.sum(radial[slots]) * 4 * math.pi / (2 * state.j.value + 1))


def norm_observable() -> Observable:
    """I ⊗ γ⁰, so that Ψ̄ĜΨ = Ψ†Ψ."""
    return Observable.constant("norm", I3, GAMMA[0], hermitian=True)


# === N̂ parity of observables ===
@dataclass(frozen=True)
class ParityClass:
    omega: Optional[int]
    A: complex
    residual_plus: float
    residual_minus: float

    @property
    def classified(self) -> bool:
        return self.omega is not None


def parity_matrix(A: complex, beta: Optional[complex] = None) -> np.ndarray:
    alpha = cmath.exp(1j * complex(A))
    beta = default_beta(alpha) if beta is None else beta
    return composite(pi_matrix(alpha, beta), parity_kernel())


def transform_kernel(G: Observable, A: complex, theta: float, phi: float) -> np.ndarray:
    """G̃(x) = γ⁰M⁻¹†γ⁰ G(P̂x) M⁻¹ with M = π̂_α ⊗ Π."""
    M_inv = np.linalg.inv(parity_matrix(A))
    return _G0 @ M_inv.conj().T @ _G0 @ G.angular(math.pi - theta, phi + math.pi) @ M_inv


def classify_parity(G: Observable, A: complex, points=None, tol: float = 1e-10) -> ParityClass:
    points = points if points is not None else random_points(50)
    plus = minus = scale = 0.0
    for theta, phi in points:
        original = G.angular(theta, phi)
        transformed = transform_kernel(G, A, theta, phi)
        scale = max(scale, float(np.max(np.abs(original))))
        plus = max(plus, float(np.max(np.abs(transformed - original))))
        minus = max(minus, float(np.max(np.abs(transformed + original))))
    bound = tol * max(scale, 1.0)
    omega = 1 if plus < bound else -1 if minus < bound else None
    logger.debug("parity of %s at A=%s: Ω=%s (±residuals %.2e, %.2e)", G.name, A, omega, plus, minus)
    return ParityClass(omega=omega, A=complex(A), residual_plus=plus, residual_minus=minus)


# === selection rules ===
def selection_factor(omega: int, delta: int, delta_p: int, J, J_p) -> complex:
    """1 + Ω·δ·δ′·e^{iπ(J′ − J)}; equals 1 + Ωδδ′(−1)^{J+J′} when J + J′ is an integer."""
    return 1 + omega * delta * delta_p * branch_phase(J_p - J)


@dataclass
class SelectionRow:
    J: str
    J_p: str
    delta: int
    delta_p: int
    omega: int
    factor: complex
    value: complex
    half_value: complex
    verdict: str
    passed: bool


def selection_rule_check(
    G: Observable,
    A: complex,
    pairs: list[tuple[TripletState, TripletState]],
    n_theta: int | None = None,
    n_phi: int | None = None,
) -> list[SelectionRow]:
    parity = classify_parity(G, A)
    if not parity.classified:
        raise UnclassifiedObservableError(f"{G.name} has no N-parity at A={A}")
    rows = []
    for bra, ket in pairs:
        if abs(complex(bra.A) - complex(A)) > 1e-12 or abs(complex(ket.A) - complex(A)) > 1e-12:
            raise DomainError("states must belong to the N_A sectors of the classifying A")
        factor = selection_factor(parity.omega, bra.delta, ket.delta, bra.j, ket.j)
        value = matrix_element(bra, G, ket, n_theta, n_phi)
        half = matrix_element(bra, G, ket, n_theta, n_phi, half_space=True)
        scale = math.sqrt(state_norm(bra) * state_norm(ket)) or 1.0
        if not (bra.j + ket.j).is_integer:
            verdict, passed = "descriptive", True
        elif abs(factor) < settings.ZERO_FACTOR_TOL:
            verdict, passed = "forbidden", abs(value) < 1e-9 * scale
        else:
            verdict, passed = "doubled", abs(value - 2 * half) < 1e-8 * scale
        rows.append(
            SelectionRow(
                J=str(bra.j),
                J_p=str(ket.j),
                delta=bra.delta,
                delta_p=ket.delta,
                omega=parity.omega,
                factor=factor,
                value=value,
                half_value=half,
                verdict=verdict,
                passed=passed,
            )
        )
    return rows


# === expectation expansion ===
@dataclass
class ExpectationBreakdown:
    terms: dict[str, complex] = field(default_factory=dict)
    direct: complex = 0.0

    @property
    def total(self) -> complex:
        return sum(self.terms.values())

    @property
    def residual(self) -> float:
        return abs(self.total - self.direct)


def _block_state(state: TripletState, block: str, scale: complex = 1.0) -> TripletState:
    amps = np.zeros_like(state.amplitudes)
    start = "fhg".index(block) * 4
    amps[start : start + 4] = state.amplitudes[start : start + 4] / scale
    return state.with_amplitudes(amps)


def expectation_expansion(state: TripletState, G: Observable, n_theta: int | None = None, n_phi: int | None = None) -> ExpectationBreakdown:
    """
    Splits ⟨Ψ|Ĝ|Ψ⟩ for Ψ = Ψ₊ + Ψ₀ + δμe^{iA}Ψ₋ into its six pieces. Cross
    pieces are written as 2Re(·) for Hermitian kernels and as explicit sums
    otherwise.
    """
    mu = state.mu or 1
    alpha = state.alpha
    dm = state.delta * mu
    parts = {
        "+": _block_state(state, "f"),
        "0": _block_state(state, "h"),
        "-": _block_state(state, "g", dm * alpha),
    }

    def element(a: str, b: str) -> complex:
        return matrix_element(parts[a], G, parts[b], n_theta, n_phi)

    def cross(a: str, b: str, phase: complex = 1.0) -> complex:
        forward = phase * element(a, b)
        return 2 * forward.real if G.hermitian else forward + phase.conjugate() * element(b, a)

    terms = {
        "(+,+)": element("+", "+"),
        "(0,0)": element("0", "0"),
        "2Re(+,0)": cross("+", "0"),
        "e^{i(A-A*)}(-,-)": abs(alpha) ** 2 * element("-", "-"),
        "2dmuRe(e^{iA}(+,-))": dm * cross("+", "-", alpha),
        "2dmuRe(e^{iA}(0,-))": dm * cross("0", "-", alpha),
    }
    breakdown = ExpectationBreakdown(terms=terms, direct=matrix_element(state, G, state, n_theta, n_phi))
    if breakdown.residual > 1e-9 * max(1.0, abs(breakdown.direct)):
        system_logger.warning(
            "Expectation expansion does not sum to the direct value",
            additional_info={"observable": G.name, "residual": f"{breakdown.residual:.3e}"},
        )
    return breakdown
