"""
Separated isotopic-triplet wave functions in the Schwinger gauge and the action
of the angular operators on them.

A state is a 12-vector of radial amplitudes (f₁..f₄, h₁..h₄, g₁..g₄); slot
(s, k) carries the Wigner column D_σ with σ = −(s + spin_k) where s ∈ {+1, 0, −1}
is the isotopic weight and spin_k ∈ (½, −½, ½, −½) the eigenvalue of iσ¹².
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from src.config.settings import settings
from src.error_trace.exceptions import DomainError, StructuralError
from src.services.monopole_triplet_module.finite_differences import d_phi, d_theta, guard_pole
from src.services.monopole_triplet_module.iso_algebra import GAMMA, I3, I4, T1, T2, T3, composite, spin_kernel
from src.services.monopole_triplet_module.monopole_gauges import u_cartesian, u_dirac
from src.services.monopole_triplet_module.quadrature import sphere_rule
from src.services.monopole_triplet_module.quantum_numbers import HalfInt, HalfIntLike, check_projection
from src.services.monopole_triplet_module.su2_wigner import d_column, ladder_coefficients

logger = logging.getLogger(__name__)

ISO_WEIGHTS = (1, 0, -1)
SPIN_TWICE = (1, -1, 1, -1)
SLOT_NAMES = tuple(f"{b}{k}" for b in "fhg" for k in range(1, 5))
SLOT_SIGMA_TWICE = tuple(-(spin + 2 * s) for s in ISO_WEIGHTS for spin in SPIN_TWICE)
# j = 1/2 leaves f1, f3, g2, g4 without a Wigner column
MINIMAL_FORBIDDEN = tuple(i for i, t in enumerate(SLOT_SIGMA_TWICE) if abs(t) > 1)
MINIMAL_SLOTS = tuple(i for i in range(12) if i not in MINIMAL_FORBIDDEN)

# iσ¹² + t³, diagonal
LAMBDA_DIAG = np.real(np.diag(composite(I3, spin_kernel()) + composite(T3, I4)))

_K4 = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


def slot(name: str) -> int:
    return SLOT_NAMES.index(name)


@dataclass(frozen=True)
class TripletState:
    """Quantum numbers, structural parameters and radial amplitudes."""

    epsilon: float
    j: HalfInt
    m: HalfInt
    amplitudes: np.ndarray  # (12,) values or (12, N) on r_grid
    r_grid: Optional[np.ndarray] = None
    delta: int = 1
    A: complex = 0.0
    B: complex = 0.0
    mu: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        j, m = check_projection(self.j, self.m)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "m", m)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape[0] != 12:
            raise DomainError(f"expected 12 amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)
        if j.twice < 1:
            raise DomainError("the triplet ansatz needs j ≥ 1/2")

    @property
    def alpha(self) -> complex:
        return complex(np.exp(1j * complex(self.A)))

    @property
    def is_minimal(self) -> bool:
        return self.j.twice == 1

    def block(self, name: str) -> np.ndarray:
        start = "fhg".index(name) * 4
        return self.amplitudes[start : start + 4]

    def amplitudes_at(self, r: float) -> np.ndarray:
        if self.r_grid is None or self.amplitudes.ndim == 1:
            return self.amplitudes
        re = np.array([np.interp(r, self.r_grid, row.real) for row in self.amplitudes])
        im = np.array([np.interp(r, self.r_grid, row.imag) for row in self.amplitudes])
        return re + 1j * im

    def with_amplitudes(self, amplitudes: np.ndarray, **changes) -> "TripletState":
        return replace(self, amplitudes=np.asarray(amplitudes, dtype=complex), **changes)


@dataclass
class AngularCheck:
    numeric: np.ndarray
    closed_form: np.ndarray
    residual: float = field(init=False)

    def __post_init__(self):
        self.residual = float(np.max(np.abs(self.numeric - self.closed_form)))


# === assembly ===
def angular_basis(j: HalfIntLike, m: HalfIntLike, theta, phi) -> np.ndarray:
    """The 12 Wigner columns of the ansatz; shape (12, *θ.shape)."""
    j, m = check_projection(j, m)
    return np.array([d_column(j, m, HalfInt(t), theta, phi) for t in SLOT_SIGMA_TWICE], dtype=complex)


def check_structure(state: TripletState) -> None:
    if state.is_minimal:
        amps = state.amplitudes if state.amplitudes.ndim == 1 else state.amplitudes.T
        bad = [SLOT_NAMES[i] for i in MINIMAL_FORBIDDEN if np.any(np.atleast_2d(amps)[..., i] != 0)]
        if bad:
            raise StructuralError(f"j=1/2 has no Wigner column for {', '.join(bad)}")


def assemble_state(state: TripletState, r: float, theta, phi, t: float = 0.0) -> np.ndarray:
    """Ψ(t, r, θ, φ) = e^{−iεt}/r · Σ amplitude × D column."""
    check_structure(state)
    amps = state.amplitudes_at(r)
    basis = angular_basis(state.j, state.m, theta, phi)
    prefactor = np.exp(-1j * state.epsilon * t) / r
    return prefactor * (amps.reshape((12,) + (1,) * (basis.ndim - 1)) * basis)


def field_of(state: TripletState, r: float = 1.0) -> Callable[[float, float], np.ndarray]:
    return lambda theta, phi: assemble_state(state, r, theta, phi)


# === Σ_{θ,φ} ===
def sigma_amplitude_matrix(j: HalfIntLike) -> np.ndarray:
    """Closed-form action of Σ on amplitudes: blocks i·b, i·a, i·b times the K4 pattern."""
    coeffs = ladder_coefficients(j)
    return np.kron(np.diag([1j * coeffs.b, 1j * coeffs.a, 1j * coeffs.b]), _K4)


def apply_sigma_field(psi: Callable[[float, float], np.ndarray], theta: float, phi: float, step: float | None = None):
    """iγ¹∂_θ + γ²(i∂_φ + (iσ¹² + t³)cosθ)/sinθ, by finite differences."""
    guard_pole(theta)
    g1, g2 = composite(I3, GAMMA[1]), composite(I3, GAMMA[2])
    value = np.asarray(psi(theta, phi))
    angular = 1j * d_phi(psi, theta, phi, step) + math.cos(theta) * LAMBDA_DIAG * value
    return 1j * g1 @ d_theta(psi, theta, phi, step) + g2 @ angular / math.sin(theta)


def apply_sigma(state: TripletState, r: float, theta: float, phi: float, step: float | None = None) -> AngularCheck:
    numeric = apply_sigma_field(field_of(state, r), theta, phi, step)
    closed = assemble_state(state.with_amplitudes(sigma_amplitude_matrix(state.j) @ state.amplitudes_at(r), r_grid=None), r, theta, phi)
    return AngularCheck(numeric=numeric, closed_form=closed)


# === mixing term ===
def mixing_matrix() -> np.ndarray:
    """γ¹ ⊗ t² − γ² ⊗ t¹ in the iso-outer layout."""
    return composite(T2, GAMMA[1]) - composite(T1, GAMMA[2])


# (output slot, input slot, coefficient / (√2·W/r))
MIXING_PATTERN = (
    ("f2", "h3", 1j),
    ("f4", "h1", -1j),
    ("h1", "f4", -1j),
    ("h2", "g3", 1j),
    ("h3", "f2", 1j),
    ("h4", "g1", -1j),
    ("g1", "h4", -1j),
    ("g3", "h2", 1j),
)


def mixing_closed_form(w_over_r: float) -> np.ndarray:
    out = np.zeros((12, 12), dtype=complex)
    for target, source, coeff in MIXING_PATTERN:
        out[slot(target), slot(source)] = math.sqrt(2.0) * w_over_r * coeff
    return out


def apply_mixing(state: TripletState, r: float, theta: float, phi: float, w_value: float) -> AngularCheck:
    sample = assemble_state(state, r, theta, phi)
    numeric = (w_value / r) * mixing_matrix() @ sample
    closed = assemble_state(
        state.with_amplitudes(mixing_closed_form(w_value / r) @ state.amplitudes_at(r), r_grid=None), r, theta, phi
    )
    return AngularCheck(numeric=numeric, closed_form=closed)


# === total angular momentum ===
def _ladder(lam: np.ndarray, sign: int, step: float):
    def apply(f):
        def g(theta, phi):
            core = (
                sign * d_theta(f, theta, phi, step)
                + 1j * d_phi(f, theta, phi, step) / math.tan(theta)
                + lam * np.asarray(f(theta, phi)) / math.sin(theta)
            )
            return np.exp(sign * 1j * phi) * core

        return g

    return apply


def angular_momentum_operators(lam: np.ndarray, step: float | None = None) -> dict[str, Callable]:
    """J₊, J₋, J₁, J₂, J₃ for the diagonal monopole term λ (one entry per component)."""
    h = step or settings.FD_NESTED_STEP
    plus, minus = _ladder(lam, +1, h), _ladder(lam, -1, h)

    def three(f):
        return lambda theta, phi: -1j * d_phi(f, theta, phi, h)

    def one(f):
        return lambda theta, phi: 0.5 * (plus(f)(theta, phi) + minus(f)(theta, phi))

    def two(f):
        return lambda theta, phi: (plus(f)(theta, phi) - minus(f)(theta, phi)) / 2j

    return {"plus": plus, "minus": minus, "one": one, "two": two, "three": three}


@dataclass(frozen=True)
class JResidual:
    casimir: float
    projection: float
    closure: float


def _j_residuals(psi, lam, j_value: float, m_value: float, points, step) -> JResidual:
    ops = angular_momentum_operators(lam, step)
    casimir = projection = closure = 0.0
    for theta, phi in points:
        guard_pole(theta)
        value = np.asarray(psi(theta, phi))
        scale = max(float(np.max(np.abs(value))), 1e-300)
        j_sq = (
            ops["minus"](ops["plus"](psi))(theta, phi)
            + ops["three"](ops["three"](psi))(theta, phi)
            + ops["three"](psi)(theta, phi)
        )
        casimir = max(casimir, float(np.max(np.abs(j_sq - j_value * (j_value + 1) * value))) / scale)
        projection = max(projection, float(np.max(np.abs(ops["three"](psi)(theta, phi) - m_value * value))) / scale)
        comm = ops["one"](ops["two"](psi))(theta, phi) - ops["two"](ops["one"](psi))(theta, phi)
        closure = max(closure, float(np.max(np.abs(comm - 1j * ops["three"](psi)(theta, phi)))) / scale)
    return JResidual(casimir=casimir, projection=projection, closure=closure)


DEFAULT_POINTS = ((0.7, 0.3), (1.3, 2.1), (2.2, 4.0))


def total_J_check(state: TripletState, points=DEFAULT_POINTS, step: float | None = None) -> JResidual:
    """J = l + S + T with the Schwinger-gauge term (iσ¹² + t³)(cosφ, sinφ)/sinθ."""
    return _j_residuals(field_of(state), LAMBDA_DIAG, state.j.value, state.m.value, points, step)


# === Abelian contrast ===
def abelian_columns(eg: float) -> np.ndarray:
    """σ of the four components of the Abelian ansatz."""
    return np.array([eg - 0.5, eg + 0.5, eg - 0.5, eg + 0.5])


def abelian_field(j: HalfIntLike, m: HalfIntLike, eg: float, amplitudes) -> Callable[[float, float], np.ndarray]:
    j, m = check_projection(j, m)
    sigmas = [HalfInt.of(s) for s in abelian_columns(eg)]
    amps = np.asarray(amplitudes, dtype=complex)
    for s, a in zip(sigmas, amps):
        if a != 0 and (abs(s.twice) > j.twice or (j.twice - s.twice) % 2):
            raise StructuralError(f"no Wigner column D^{j}_(-m,{s})")

    def psi(theta, phi):
        return np.array([a * d_column(j, m, s, theta, phi) if a != 0 else 0.0 for s, a in zip(sigmas, amps)], dtype=complex)

    return psi


def abelian_J_check(j: HalfIntLike, m: HalfIntLike, eg: float, amplitudes, points=DEFAULT_POINTS, step=None) -> JResidual:
    """J^{eg} = l + (iσ¹² − eg)(cosφ, sinφ)/sinθ on the four-component ansatz."""
    j, m = check_projection(j, m)
    lam = np.real(np.diag(spin_kernel())) - eg
    return _j_residuals(abelian_field(j, m, eg, amplitudes), lam, j.value, m.value, points, step)


# === frames and projections ===
def cartesian_sample(sample: np.ndarray, theta: float, phi: float) -> np.ndarray:
    return composite(u_cartesian(theta, phi), I4) @ sample


def dirac_sample(sample: np.ndarray, phi: float) -> np.ndarray:
    return composite(u_dirac(phi), I4) @ sample


def project_on_slots(field_values: Callable, j: HalfIntLike, m: HalfIntLike, order: int | None = None):
    """
    Coefficients c_k = ⟨D_σ(k), ψ_k⟩/⟨D_σ(k), D_σ(k)⟩ per slot and the remainder
    max|ψ_k − c_k D_σ(k)| over the quadrature nodes.
    """
    order = order or settings.PROJECTION_ORDER
    rule = sphere_rule(order, order, in_cosine=True)
    basis = angular_basis(j, m, rule.theta, rule.phi)
    values = np.asarray(field_values(rule.theta, rule.phi))
    norms = np.sum(rule.weight * np.abs(basis) ** 2, axis=1)
    overlaps = np.sum(rule.weight * basis.conj() * values, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    coeffs = np.where(norms > 0, overlaps / safe, 0.0)
    remainder = float(np.max(np.abs(values - coeffs[:, None] * basis)))
    # energy in slots whose Wigner column is absent
    stray = float(np.max(np.abs(values[norms == 0]))) if np.any(norms == 0) else 0.0
    return coeffs, max(remainder, stray)
