"""
The discrete operator N̂_A and the structures built on it: eigen-sectors and
their amplitude constraints, commutation with the radial generator, the K̂
decomposition and the A/B basis changes.

On separated states N̂ reduces to an amplitude matrix: the point map
(θ, φ) → (π−θ, φ+π) sends D_σ to e^{iπj} D_{−σ}, and π̂ ⊗ Π sends slot (s, k)
to (−s, 5−k), whose column is D_{−σ}.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import ClassificationError, DomainError
from src.services.monopole_triplet_module.angular_separation import (
    MINIMAL_SLOTS,
    TripletState,
    apply_sigma_field,
    field_of,
    sigma_amplitude_matrix,
    slot,
)
from src.services.monopole_triplet_module.iso_algebra import (
    GAMMA,
    I3,
    I4,
    composite,
    delta_matrix,
    d_matrix,
    exp_iso_rotation,
    parity_kernel,
    t_tilde0,
    unit_radial,
)
from src.services.monopole_triplet_module.monopole_gauges import FRAMES, MonopoleProfile, u_cartesian, u_dirac
from src.services.monopole_triplet_module.quantum_numbers import HalfInt, HalfIntLike, branch_phase
from src.services.monopole_triplet_module.su2_wigner import ladder_coefficients

logger = logging.getLogger(__name__)

U0 = np.diag([-1.0, 1.0, -1.0]).astype(complex)
_REVERSE4 = np.fliplr(np.eye(4, dtype=complex))


def alpha_of(A: complex) -> complex:
    return complex(cmath.exp(1j * complex(A)))


def default_beta(alpha: complex) -> int:
    """β = −1 is used for α = −1 so that the commuting operator is −N̂₊₁."""
    return -1 if abs(complex(alpha) + 1) < 1e-12 else 1


def pi_matrix(alpha: complex, beta: complex = 1) -> np.ndarray:
    """Anti-diagonal (β²/α, β, α); squares to β²·I."""
    alpha = complex(alpha)
    if alpha == 0:
        raise DomainError("α = e^{iA} must be nonzero")
    beta = complex(beta)
    out = np.zeros((3, 3), dtype=complex)
    out[0, 2], out[1, 1], out[2, 0] = beta * beta / alpha, beta, alpha
    return out


# === N̂ on fields ===
@dataclass(frozen=True)
class NOperator:
    alpha: complex
    beta: complex = 1
    frame: str = "schwinger"

    @property
    def pi(self) -> np.ndarray:
        return pi_matrix(self.alpha, self.beta)

    def frame_map(self, theta: float, phi: float) -> np.ndarray:
        if self.frame == "dirac":
            return u_dirac(phi)
        if self.frame == "cartesian":
            return u_cartesian(theta, phi)
        return I3

    def iso_factor(self, theta: float, phi: float) -> np.ndarray:
        """U(x) π̂ U(P̂x)⁻¹ for the frame's Schwinger → frame map U."""
        return self.frame_map(theta, phi) @ self.pi @ np.linalg.inv(self.frame_map(math.pi - theta, phi + math.pi))

    def closed_iso_factor(self, theta: float, phi: float) -> np.ndarray:
        """Printed frame forms: π̂, π̂^D(φ)·U₀, and −exp(−iA t·n) for β = 1."""
        if self.frame == "schwinger":
            return self.pi
        if self.frame == "dirac":
            u = u_dirac(phi)
            return u @ self.pi @ np.linalg.inv(u) @ U0
        A = -1j * cmath.log(complex(self.alpha) / complex(self.beta))
        return -complex(self.beta) * exp_iso_rotation(-A, unit_radial(theta, phi))

    def kernel(self, theta: float, phi: float) -> np.ndarray:
        return composite(self.iso_factor(theta, phi), parity_kernel())

    def apply(self, psi: Callable[[float, float], np.ndarray], theta: float, phi: float) -> np.ndarray:
        return self.kernel(theta, phi) @ np.asarray(psi(math.pi - theta, phi + math.pi))


def build_N(alpha: complex, frame: str = "schwinger", beta: Optional[complex] = None) -> NOperator:
    if frame not in FRAMES:
        raise DomainError(f"unknown frame {frame!r}")
    beta = default_beta(alpha) if beta is None else beta
    pi_matrix(alpha, beta)  # validates α
    return NOperator(alpha=complex(alpha), beta=beta, frame=frame)


def apply_N(operator: NOperator, psi: Callable[[float, float], np.ndarray], theta: float, phi: float) -> np.ndarray:
    return operator.apply(psi, theta, phi)


def frame_conjugation_residual(alpha: complex, frame: str, psi_schwinger, points) -> float:
    """max |N̂^{frame}(Uψ)(x) − U(x)(N̂^S ψ)(x)| over the points."""
    target, source = build_N(alpha, frame), build_N(alpha, "schwinger")
    worst = 0.0
    for theta, phi in points:
        framed = lambda t, p: composite(target.frame_map(t, p), I4) @ np.asarray(psi_schwinger(t, p))
        lhs = target.apply(framed, theta, phi)
        rhs = composite(target.frame_map(theta, phi), I4) @ source.apply(psi_schwinger, theta, phi)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# === amplitude space ===
def n_amplitude_matrix(j: HalfIntLike, alpha: complex, beta: Optional[complex] = None) -> np.ndarray:
    """e^{iπj}·(π̂ ⊗ Π) acting on the 12 amplitudes."""
    beta = default_beta(alpha) if beta is None else beta
    return branch_phase(HalfInt.of(j)) * composite(pi_matrix(alpha, beta), parity_kernel())


def _involution(alpha_eff: complex) -> np.ndarray:
    return composite(pi_matrix(alpha_eff, 1), _REVERSE4)


@dataclass(frozen=True)
class SectorConstraint:
    """
    Linear relations of one N̂ eigen-sector. ``matrix`` expands the free
    amplitudes (f₁..f₄, h₁, h₂), or (f₂, f₄, h₁, h₂) for j = 1/2, into all 12.
    """

    j: HalfInt
    delta: int
    alpha: complex
    beta: complex
    eigenvalue: complex
    matrix: np.ndarray = field(repr=False)
    free_slots: tuple[str, ...] = ()

    @property
    def alpha_eff(self) -> complex:
        return complex(self.alpha) / complex(self.beta)

    def expand(self, reduced) -> np.ndarray:
        return self.matrix @ np.asarray(reduced, dtype=complex)

    def restrict(self, amplitudes) -> np.ndarray:
        return np.asarray(amplitudes, dtype=complex)[[slot(n) for n in self.free_slots]]

    def violation(self, amplitudes) -> float:
        amps = np.asarray(amplitudes, dtype=complex)
        return float(np.max(np.abs(self.expand(self.restrict(amps)) - amps)))


def constraint_matrix(j: HalfIntLike, delta: int, alpha_eff: complex) -> tuple[np.ndarray, tuple[str, ...]]:
    j = HalfInt.of(j)
    da = delta * complex(alpha_eff)
    relations = {
        "h3": ("h2", delta),
        "h4": ("h1", delta),
        "g1": ("f4", da),
        "g2": ("f3", da),
        "g3": ("f2", da),
        "g4": ("f1", da),
    }
    free = ("f2", "f4", "h1", "h2") if j.twice == 1 else ("f1", "f2", "f3", "f4", "h1", "h2")
    out = np.zeros((12, len(free)), dtype=complex)
    for col, name in enumerate(free):
        out[slot(name), col] = 1.0
    for target, (source, coeff) in relations.items():
        if source in free:
            out[slot(target), free.index(source)] = coeff
    return out, free


def n_eigensectors(j: HalfIntLike, alpha: complex, beta: Optional[complex] = None) -> tuple[SectorConstraint, SectorConstraint]:
    """(δ = +1, δ = −1) with N = β·δ·e^{iπ(j+1)}."""
    j = HalfInt.of(j)
    if j.twice < 1:
        raise DomainError("sectors need j ≥ 1/2")
    beta = default_beta(alpha) if beta is None else beta
    pi_matrix(alpha, beta)
    alpha_eff = complex(alpha) / complex(beta)
    sectors = []
    for delta in (1, -1):
        matrix, free = constraint_matrix(j, delta, alpha_eff)
        sectors.append(
            SectorConstraint(
                j=j,
                delta=delta,
                alpha=complex(alpha),
                beta=beta,
                eigenvalue=complex(beta) * delta * branch_phase(j + 1),
                matrix=matrix,
                free_slots=free,
            )
        )
    return sectors[0], sectors[1]


def sector_projectors(j: HalfIntLike, alpha: complex, beta: Optional[complex] = None) -> tuple[np.ndarray, np.ndarray]:
    """P_δ = (I + δK)/2 with K the normalized involution π̂_{α/β} ⊗ reverse."""
    beta = default_beta(alpha) if beta is None else beta
    K = _involution(complex(alpha) / complex(beta))
    eye = np.eye(12, dtype=complex)
    projectors = ((eye + K) / 2, (eye - K) / 2)
    if HalfInt.of(j).twice == 1:
        keep = np.zeros((12, 12), dtype=complex)
        keep[list(MINIMAL_SLOTS), list(MINIMAL_SLOTS)] = 1.0
        projectors = tuple(keep @ p @ keep for p in projectors)
    return projectors


def project_to_sector(state: TripletState, delta: int) -> TripletState:
    plus, minus = sector_projectors(state.j, state.alpha)
    projector = plus if delta == 1 else minus
    return state.with_amplitudes(projector @ state.amplitudes, delta=delta)


# === commutation with the radial generator ===
@dataclass(frozen=True)
class DichotomyVerdict:
    norm: float
    commutes: bool
    expected: bool

    @property
    def consistent(self) -> bool:
        return self.commutes == self.expected


def commutation_dichotomy(
    profile: MonopoleProfile,
    j: HalfIntLike,
    alpha: complex,
    r: float = 1.0,
    epsilon: float = 0.5,
    mass: float = 1.0,
) -> DichotomyVerdict:
    """‖[N̂, M(r)]‖ on amplitudes; N̂ commutes iff W ≡ 0 or α = ±1."""
    # radial_dynamics imports this module for the constraint maps
    from src.services.monopole_triplet_module.radial_dynamics import RadialSystem

    case = "full_min" if HalfInt.of(j).twice == 1 else "full_j"
    system = RadialSystem.build(case, profile.without_dyon_terms(), j=j, epsilon=epsilon, mass=mass)
    n_amp = n_amplitude_matrix(j, alpha)
    generator = system.full_generator(r)
    norm = float(np.linalg.norm(n_amp @ generator - generator @ n_amp))
    w_vanishes = profile.is_trivial or abs(float(profile.W(np.array(r)))) < 1e-14
    expected = w_vanishes or abs(complex(alpha) - 1) < 1e-12 or abs(complex(alpha) + 1) < 1e-12
    verdict = DichotomyVerdict(norm=norm, commutes=norm < 1e-10, expected=expected)
    if not verdict.consistent:
        system_logger.warning(
            "N-operator commutation disagrees with the W/alpha rule",
            additional_info={"profile": profile.name, "alpha": str(alpha), "norm": f"{norm:.3e}"},
        )
    return verdict


# === K̂ = iγ⁰γ³Σ ===
K_BISPINOR = 1j * GAMMA[0] @ GAMMA[3]


def k_operator_matrix(j: HalfIntLike) -> np.ndarray:
    return composite(I3, K_BISPINOR) @ sigma_amplitude_matrix(j)


def apply_K_field(psi, theta: float, phi: float, step: float | None = None) -> np.ndarray:
    return composite(I3, K_BISPINOR) @ apply_sigma_field(psi, theta, phi, step)


@dataclass
class KDecomposition:
    sector: str  # "h" or "f"
    eigenvalue: complex
    expected: float
    residual: float
    fd_residual: float
    mu: Optional[int] = None
    projections: dict = field(default_factory=dict)


def k_decompose(state: TripletState, r: float = 1.0, points=((0.8, 0.4), (2.0, 1.7))) -> KDecomposition:
    """
    Classify a sector state into the h-sector (λ = δa) or the f-sector
    (λ = μb with f₄ = μf₁, f₃ = μf₂).
    """

    amps = state.amplitudes_at(r)
    f_norm = float(np.linalg.norm(amps[0:4]))
    h_norm = float(np.linalg.norm(amps[4:8]))
    projections = {"f": f_norm, "h": h_norm}
    scale = max(f_norm, h_norm)
    if scale == 0:
        raise ClassificationError("zero state has no K sector", projections)
    tol = 1e-9 * scale
    if f_norm > tol and h_norm > tol:
        raise ClassificationError("state mixes the h- and f-sectors", projections)

    coeffs = ladder_coefficients(state.j)
    K = k_operator_matrix(state.j)
    if h_norm > tol:
        sector, mu, expected = "h", None, state.delta * coeffs.a
    else:
        sector = "f"
        f1, f2, f3, f4 = amps[0:4]
        if state.is_minimal:
            # b = 0 at j = 1/2, so λ = 0 whatever μ is
            mu = state.mu
        else:
            candidates = (state.mu,) if state.mu is not None else (1, -1)
            matches = [s for s in candidates if abs(f4 - s * f1) <= tol and abs(f3 - s * f2) <= tol]
            if not matches:
                projections["pairing"] = float(min(max(abs(f4 - s * f1), abs(f3 - s * f2)) for s in candidates))
                raise ClassificationError("f-sector amplitudes satisfy neither f₄ = μf₁ nor f₃ = μf₂ with μ = ±1", projections)
            mu = matches[0]
        expected = (mu or 0) * coeffs.b

    image = K @ amps
    eigenvalue = complex(np.vdot(amps, image) / np.vdot(amps, amps))
    residual = float(np.max(np.abs(image - expected * amps)))

    psi = field_of(state.with_amplitudes(amps, r_grid=None), r)
    fd_residual = 0.0
    for theta, phi in points:
        value = np.asarray(psi(theta, phi))
        fd_residual = max(fd_residual, float(np.max(np.abs(apply_K_field(psi, theta, phi) - expected * value))))
    logger.debug("K sector %s λ=%.6g residual %.2e (fd %.2e)", sector, expected, residual, fd_residual)
    return KDecomposition(
        sector=sector,
        eigenvalue=eigenvalue,
        expected=float(expected),
        residual=residual,
        fd_residual=fd_residual,
        mu=mu,
        projections=projections,
    )


# === basis changes V(A′, A) and the B freedom ===
@dataclass(frozen=True)
class BasisChange:
    gamma: complex
    V: np.ndarray
    D: np.ndarray
    Delta: np.ndarray

    def apply(self, state: TripletState) -> TripletState:
        return state.with_amplitudes(composite(self.V, I4) @ state.amplitudes, A=state.A + 2 * self.gamma)


def basis_change_V(A_from: complex, A_to: complex) -> BasisChange:
    """V = e^{iΓ}·D(Γ)·Δ(Γ), Γ = (A′ − A)/2."""
    g = (complex(A_to) - complex(A_from)) / 2
    D, Delta = d_matrix(g), delta_matrix(g)
    return BasisChange(gamma=g, V=cmath.exp(1j * g) * D @ Delta, D=D, Delta=Delta)


def apply_D(state: TripletState, gamma_: complex) -> TripletState:
    """Multiplies the T₀ block by e^{−iΓ}; A is unchanged."""
    return state.with_amplitudes(composite(d_matrix(gamma_), I4) @ state.amplitudes)


def apply_Delta(state: TripletState, gamma_: complex) -> TripletState:
    """Δ(Γ) maps the N_A sector onto the N_{A+2Γ} sector."""
    return state.with_amplitudes(composite(delta_matrix(gamma_), I4) @ state.amplitudes, A=state.A + 2 * complex(gamma_))


def conjugation_residuals(A: complex, gamma_: complex, j: HalfIntLike = HalfInt(3)) -> dict[str, float]:
    """‖ΔN̂_AΔ⁻¹ − N̂_{A+2Γ}‖ and ‖DN̂_AD⁻¹ − N̂_A‖ on amplitudes."""
    n_from = n_amplitude_matrix(j, alpha_of(A), 1)
    n_to = n_amplitude_matrix(j, alpha_of(complex(A) + 2 * complex(gamma_)), 1)
    delta = composite(delta_matrix(gamma_), I4)
    d = composite(d_matrix(gamma_), I4)
    return {
        "Delta": float(np.linalg.norm(delta @ n_from @ np.linalg.inv(delta) - n_to)),
        "D": float(np.linalg.norm(d @ n_from @ np.linalg.inv(d) - n_from)),
    }


def delta_cartesian(gamma_: complex, theta: float, phi: float) -> np.ndarray:
    """Δ in the Cartesian frame: exp(−iΓ t·n)."""
    return exp_iso_rotation(-complex(gamma_), unit_radial(theta, phi))


def d_cartesian(gamma_: complex, theta: float, phi: float) -> np.ndarray:
    """D in the Cartesian frame: I + (e^{−iΓ} − 1) t̃⁰."""
    return I3 + (cmath.exp(-1j * complex(gamma_)) - 1) * t_tilde0(theta, phi)


def v_cartesian(A_from: complex, A_to: complex, theta: float, phi: float) -> np.ndarray:
    g = (complex(A_to) - complex(A_from)) / 2
    return cmath.exp(1j * g) * d_cartesian(g, theta, phi) @ delta_cartesian(g, theta, phi)


def apply_B_freedom(state: TripletState, B_from: complex, B_to: complex) -> TripletState:
    phase = cmath.exp(1j * (complex(B_to) - complex(B_from)))
    return state.with_amplitudes(composite(np.diag([1.0, phase, 1.0]), I4) @ state.amplitudes, B=B_to)


def eigen_residual(state: TripletState, beta: Optional[complex] = None) -> float:
    """|N̂Ψ − NΨ| on amplitudes, N taken from the state's δ."""
    beta = default_beta(state.alpha) if beta is None else beta
    plus, minus = n_eigensectors(state.j, state.alpha, beta)
    sector = plus if state.delta == 1 else minus
    n_amp = n_amplitude_matrix(state.j, state.alpha, beta)
    return float(np.max(np.abs(n_amp @ state.amplitudes - sector.eigenvalue * state.amplitudes)))


