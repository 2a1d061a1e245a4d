"""
Radial systems Y′ = M(r)·Y for the separated triplet, their reductions on the
N̂ eigen-sectors, integration, Frobenius starts at the origin and the shooting
search for normalizable modes.

The full equation reads iγ³Y′ + C(r)Y = 0 on the 12 amplitudes with

    C = ε γ⁰ + F̃ t³⊗γ⁰ − m − Φ̃ t³⊗I + (Σ + W·X)/r

so M = −(I⊗iγ³)·C. Every other case is R·M·C_sector for a selection R and the
sector's constraint map.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp, trapezoid
from scipy.linalg import eig, lstsq, schur, subspace_angles
from scipy.optimize import minimize_scalar

from src.config.settings import settings
from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import ConsistencyError, DomainError, IntegrationError
from src.services.monopole_triplet_module.angular_separation import (
    MINIMAL_SLOTS,
    SLOT_NAMES,
    mixing_matrix,
    sigma_amplitude_matrix,
    slot,
)
from src.services.monopole_triplet_module.discrete_symmetry import constraint_matrix, default_beta
from src.services.monopole_triplet_module.iso_algebra import GAMMA, I3, I4, T3, composite
from src.services.monopole_triplet_module.monopole_gauges import MonopoleProfile
from src.services.monopole_triplet_module.printed_systems import PrintedParams, printed_generator
from src.services.monopole_triplet_module.quantum_numbers import HalfInt, HalfIntLike
from src.services.monopole_triplet_module.su2_wigner import ladder_coefficients

logger = logging.getLogger(__name__)

CASES = ("full_j", "full_min", "reduced_W0", "reduced_W", "reduced_min_W0", "reduced_min_W", "k_h", "k_f")
MINIMAL_CASES = ("full_min", "reduced_min_W0", "reduced_min_W")
GENERAL_CASES = ("full_j", "reduced_W0", "reduced_W")

_G0 = composite(I3, GAMMA[0])
_DERIVATIVE = composite(I3, 1j * GAMMA[3])


def _selection(names: tuple[str, ...]) -> np.ndarray:
    out = np.zeros((len(names), 12), dtype=complex)
    for row, name in enumerate(names):
        out[row, slot(name)] = 1.0
    return out


def w_vanishes(profile: MonopoleProfile) -> bool:
    if profile.is_trivial:
        return True
    radii = np.array([0.3, 1.0, 3.0])
    return bool(np.all(np.abs(profile.W(radii)) < 1e-14))


@dataclass(frozen=True)
class RadialSystem:
    case: str
    profile: MonopoleProfile
    j: HalfInt
    epsilon: float
    mass: float
    delta: int = 1
    alpha: complex = 1.0
    beta: complex = 1
    mu: Optional[int] = None
    variables: tuple[str, ...] = ()
    _lift: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    # === construction ===
    @classmethod
    def build(
        cls,
        case: str,
        profile: MonopoleProfile,
        j: HalfIntLike,
        epsilon: float,
        mass: float,
        delta: int = 1,
        alpha: complex = 1.0,
        beta: Optional[complex] = None,
        mu: Optional[int] = None,
    ) -> "RadialSystem":
        if case not in CASES:
            raise DomainError(f"unknown radial case {case!r}")
        j = HalfInt.of(j)
        if j.twice < 1:
            raise DomainError("radial systems need j ≥ 1/2")
        if j.twice == 1 and case in GENERAL_CASES:
            raise DomainError(f"{case} needs j ≥ 3/2; use the minimal case for j = 1/2")
        if j.twice > 1 and case in MINIMAL_CASES:
            raise DomainError(f"{case} is the j = 1/2 system")
        if delta not in (1, -1):
            raise DomainError("δ must be ±1")
        if case.startswith(("reduced", "k_")) and profile.has_dyon_terms:
            raise ConsistencyError("reduced systems require F = 0 and κ = 0")
        if case.endswith("W0") and not w_vanishes(profile):
            raise ConsistencyError(f"{case} is the W = 0 system but profile {profile.name} has W ≠ 0")
        if case == "k_f" and mu not in (1, -1) and j.twice > 1:
            raise DomainError("the f-sector of K needs μ = ±1")
        if case.startswith("k_") and not w_vanishes(profile):
            raise ConsistencyError("the K sectors decouple only at W = 0")

        beta = default_beta(alpha) if beta is None else beta
        lift, variables = cls._lift_for(case, j, delta, complex(alpha) / complex(beta), mu)
        return cls(
            case=case,
            profile=profile,
            j=j,
            epsilon=float(epsilon),
            mass=float(mass),
            delta=delta,
            alpha=complex(alpha),
            beta=beta,
            mu=mu,
            variables=variables,
            _lift=lift,
        )

    @staticmethod
    def _lift_for(case, j, delta, alpha_eff, mu):
        if case == "full_j":
            return np.eye(12, dtype=complex), SLOT_NAMES
        if case == "full_min":
            names = tuple(SLOT_NAMES[i] for i in MINIMAL_SLOTS)
            return _selection(names).T, names
        sector, free = constraint_matrix(j, delta, alpha_eff)
        if case.startswith("reduced"):
            return sector, free
        if case == "k_h":
            pick = np.zeros((len(free), 2), dtype=complex)
            pick[free.index("h1"), 0] = pick[free.index("h2"), 1] = 1.0
            return sector @ pick, ("h1", "h2")
        # k_f
        pick = np.zeros((len(free), 2), dtype=complex)
        if j.twice == 1:
            pick[free.index("f2"), 0] = pick[free.index("f4"), 1] = 1.0
            return sector @ pick, ("f2", "f4")
        pick[free.index("f1"), 0], pick[free.index("f4"), 0] = 1.0, mu
        pick[free.index("f2"), 1], pick[free.index("f3"), 1] = 1.0, mu
        return sector @ pick, ("f1", "f2")

    def with_energy(self, epsilon: float) -> "RadialSystem":
        return replace(self, epsilon=float(epsilon))

    # === matrices ===
    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def lift(self) -> np.ndarray:
        """12 × dim map from the system variables to all amplitudes."""
        return self._lift

    @property
    def restriction(self) -> np.ndarray:
        return _selection(self.variables)

    @property
    def alpha_eff(self) -> complex:
        return complex(self.alpha) / complex(self.beta)

    def operator_C(self, r: float) -> np.ndarray:
        p = self.profile
        r_arr = np.array(r, dtype=float)
        w, f_t, phi_t = float(p.W(r_arr)), float(p.F_tilde(r_arr)), float(p.Phi_tilde(r_arr))
        return (
            self.epsilon * _G0
            + f_t * composite(T3, GAMMA[0])
            - self.mass * np.eye(12)
            - phi_t * composite(T3, I4)
            + (sigma_amplitude_matrix(self.j) + w * mixing_matrix()) / r
        )

    def full_generator(self, r: float) -> np.ndarray:
        if r <= 0:
            raise DomainError("the radial generator is singular at r = 0")
        return -_DERIVATIVE @ self.operator_C(r)

    @cached_property
    def _pieces(self) -> tuple[np.ndarray, ...]:
        """R·M·L split by coefficient: constant, F̃, Φ̃, 1/r and W/r."""
        parts = (
            self.epsilon * _G0 - self.mass * np.eye(12),
            composite(T3, GAMMA[0]),
            -composite(T3, I4),
            sigma_amplitude_matrix(self.j),
            mixing_matrix(),
        )
        return tuple(self.restriction @ (-_DERIVATIVE @ part) @ self.lift for part in parts)

    def generator(self, r: float) -> np.ndarray:
        if r <= 0:
            raise DomainError("the radial generator is singular at r = 0")
        constant, electric, higgs, sigma, mixing = self._pieces
        p = self.profile
        r_arr = np.array(r, dtype=float)
        w, f_t, phi_t = float(p.W(r_arr)), float(p.F_tilde(r_arr)), float(p.Phi_tilde(r_arr))
        return constant + f_t * electric + phi_t * higgs + (sigma + w * mixing) / r

    def block(self, letter: str) -> "RadialSystem":
        """The f, h or g variables of a W = 0 system as a closed system of their own."""
        if not w_vanishes(self.profile):
            raise ConsistencyError("blocks decouple only at W = 0")
        idx = [i for i, v in enumerate(self.variables) if v.startswith(letter)]
        if not idx:
            raise DomainError(f"{self.case} has no {letter}-block")
        return replace(self, variables=tuple(self.variables[i] for i in idx), _lift=self.lift[:, idx])

    def full_residue(self) -> np.ndarray:
        return -_DERIVATIVE @ (sigma_amplitude_matrix(self.j) + self.profile.w_origin * mixing_matrix())

    def residue(self) -> np.ndarray:
        """M₋₁ = lim r·M(r) as r → 0."""
        return self.restriction @ self.full_residue() @ self.lift

    def blocks(self) -> list[tuple[int, ...]]:
        """Index sets of independent blocks (f and h) when W vanishes."""
        if not w_vanishes(self.profile) or self.case.startswith(("full", "k_")):
            return [tuple(range(self.dim))]
        f_idx = tuple(i for i, v in enumerate(self.variables) if v.startswith("f"))
        h_idx = tuple(i for i, v in enumerate(self.variables) if v.startswith("h"))
        return [f_idx, h_idx]

    def printed_params(self, r: float) -> PrintedParams:
        coeffs = ladder_coefficients(self.j)
        r_arr = np.array(r, dtype=float)
        return PrintedParams(
            r=r,
            epsilon=self.epsilon,
            mass=self.mass,
            a=coeffs.a,
            b=coeffs.b,
            W=float(self.profile.W(r_arr)),
            F_tilde=float(self.profile.F_tilde(r_arr)),
            Phi_tilde=float(self.profile.Phi_tilde(r_arr)),
            delta=self.delta,
        )


def assemble(case: str, profile: MonopoleProfile, j: HalfIntLike, epsilon: float, mass: float, **params) -> RadialSystem:
    return RadialSystem.build(case, profile, j, epsilon, mass, **params)


def k_sector_system(
    j: HalfIntLike, sector: str, profile: MonopoleProfile, epsilon: float, mass: float, delta: int = 1, alpha: complex = 1.0, mu: Optional[int] = None
) -> RadialSystem:
    """2×2 systems of the K̂ eigen-sectors at W = 0: ``sector`` is "h" or "f"."""
    if sector not in ("h", "f"):
        raise DomainError("K sector must be 'h' or 'f'")
    return RadialSystem.build(f"k_{sector}", profile, j, epsilon, mass, delta=delta, alpha=alpha, mu=mu)


# === sector reduction ===
@dataclass(frozen=True)
class ReductionReport:
    inconsistency: float
    match: Optional[float]
    threshold: float

    @property
    def consistent(self) -> bool:
        return self.inconsistency < self.threshold


def constraint_reduction_check(
    j: HalfIntLike,
    delta: int,
    alpha: complex,
    profile: MonopoleProfile,
    r: float = 1.0,
    epsilon: float = 0.5,
    mass: float = 1.0,
) -> ReductionReport:
    """
    Substitutes the sector constraints into the full system. The inconsistency
    ‖(I − C·R)·M·C‖ measures how far the constrained amplitudes leave the
    sector; the match compares R·M·C with the printed reduced system.
    """
    j = HalfInt.of(j)
    clean = profile.without_dyon_terms()
    minimal = j.twice == 1
    full_case = "full_min" if minimal else "full_j"
    full = RadialSystem.build(full_case, clean, j, epsilon, mass, delta=delta, alpha=alpha)
    M = full.full_generator(r)

    beta = default_beta(alpha)
    C, free = constraint_matrix(j, delta, complex(alpha) / complex(beta))
    R = _selection(free)
    inconsistency = float(np.linalg.norm((np.eye(12) - C @ R) @ M @ C))

    w_zero = w_vanishes(clean)
    prefix = "reduced_min_" if minimal else "reduced_"
    match = None
    if w_zero or abs(complex(alpha) / complex(beta) - 1) < 1e-12:
        case = prefix + ("W0" if w_zero else "W")
        printed = printed_generator(case, full.printed_params(r))
        match = float(np.linalg.norm(R @ M @ C - printed))
    report = ReductionReport(inconsistency=inconsistency, match=match, threshold=settings.INCONSISTENCY_THRESHOLD)
    logger.debug("reduction j=%s δ=%s α=%s: inconsistency %.3e match %s", j, delta, alpha, inconsistency, match)
    return report


# === conserved current ===
@dataclass(frozen=True)
class ConservedCurrent:
    matrix: np.ndarray

    def value(self, Y: np.ndarray) -> np.ndarray:
        """Y†JY along the columns of Y."""
        Y = np.asarray(Y)
        return np.real(np.einsum("i...,ij,j...->...", Y.conj(), self.matrix, Y))


def conserved_current(system: RadialSystem, radii=(0.37, 1.0, 2.9, 7.3)) -> ConservedCurrent:
    """Hermitian J with M(r)†J + J·M(r) = 0 at every sample radius."""
    n = system.dim
    eye = np.eye(n)
    rows = []
    for r in radii:
        M = system.generator(r)
        rows.append(np.kron(eye, M.conj().T) + np.kron(M.T, eye))
    _, s, vh = np.linalg.svd(np.vstack(rows))
    null = vh[s < 1e-10 * max(s[0], 1.0)]
    if len(null) == 0:
        raise ConsistencyError(f"{system.case} has no conserved quadratic form")
    J = null[-1].conj().reshape((n, n), order="F")
    hermitian = (J + J.conj().T) / 2
    if np.linalg.norm(hermitian) < 1e-12:
        hermitian = (J - J.conj().T) / 2j
    return ConservedCurrent(matrix=hermitian / np.max(np.abs(hermitian)))


# === integration ===
@dataclass
class RadialSolution:
    r: np.ndarray
    Y: np.ndarray  # (dim, N)
    variables: tuple[str, ...]
    boundary: str = ""
    dense: tuple = ()  # OdeSolution pieces covering the stored grid

    @property
    def norm(self) -> float:
        order = np.argsort(self.r)
        return float(trapezoid(np.sum(np.abs(self.Y[:, order]) ** 2, axis=0), self.r[order]))

    def at(self, r: float) -> np.ndarray:
        order = np.argsort(self.r)
        grid = self.r[order]
        return np.array([np.interp(r, grid, row.real) + 1j * np.interp(r, grid, row.imag) for row in self.Y[:, order]])

    def ode_residual(self, system: RadialSystem) -> float:
        """
        max ‖Y′ − M·Y‖ / (max(‖M‖, 1)·‖Y‖) at the step midpoints of the dense
        output. A 5-point stencil inside one step differentiates RK45's quartic
        interpolant exactly, so this is the defect of the continuous solution.
        """
        if not self.dense:
            if not np.any(self.Y):
                return 0.0
            raise IntegrationError("ode_residual needs the dense output of an integration")
        worst = 0.0
        for piece in self.dense:
            ts = np.asarray(piece.ts, dtype=float)
            mids, h = (ts[:-1] + ts[1:]) / 2, np.diff(ts) / 8
            mids, h = mids[h != 0], h[h != 0]
            if not len(mids):
                continue
            Y = piece(mids)
            dY = (piece(mids - 2 * h) - 8 * piece(mids - h) + 8 * piece(mids + h) - piece(mids + 2 * h)) / (12 * h)
            for k, r in enumerate(mids):
                M = system.generator(float(r))
                scale = max(float(np.linalg.norm(M)), 1.0) * max(float(np.linalg.norm(Y[:, k])), 1e-300)
                worst = max(worst, float(np.linalg.norm(dY[:, k] - M @ Y[:, k])) / scale)
        return worst

    def to_frame(self) -> pd.DataFrame:
        data = {"r": self.r}
        for name, row in zip(self.variables, self.Y):
            data[f"Re_{name}"] = row.real
            data[f"Im_{name}"] = row.imag
        return pd.DataFrame(data)


def integrate(
    system: RadialSystem,
    r0: float,
    r1: float,
    Y0,
    tol: float | None = None,
    t_eval: Optional[np.ndarray] = None,
) -> RadialSolution:
    """Adaptive RK45 from r0 to r1 (either direction) on the complex system, dense output kept."""
    tol = tol or settings.ODE_TOL
    if r0 <= 0 or r1 <= 0 or r0 == r1:
        raise DomainError("integration needs distinct positive end points")
    Y0 = np.asarray(Y0, dtype=complex)
    if not np.all(np.isfinite(Y0)):
        raise DomainError("initial data must be finite")
    if not np.any(Y0):
        grid = np.asarray(t_eval if t_eval is not None else [r0, r1], dtype=float)
        return RadialSolution(r=grid, Y=np.zeros((system.dim, len(grid)), dtype=complex), variables=system.variables)

    try:
        result = solve_ivp(
            lambda r, y: system.generator(r) @ y,
            (r0, r1),
            Y0,
            method="RK45",
            rtol=tol,
            atol=tol * 1e-3,
            t_eval=t_eval,
            dense_output=True,
        )
        if not result.success:
            raise IntegrationError(result.message)
    except IntegrationError as e:
        system_logger.error(e, additional_info={"case": system.case, "epsilon": system.epsilon, "span": (r0, r1)})
        raise
    except Exception as e:
        system_logger.error(e, exc_info=True)
        raise IntegrationError(f"integration of {system.case} failed") from e
    return RadialSolution(r=result.t, Y=result.y, variables=system.variables, dense=(result.sol,))


def geometric_grid(r0: float | None = None, r1: float | None = None, points: int | None = None) -> np.ndarray:
    return np.geomspace(r0 or settings.R_MIN, r1 or settings.R_MAX, points or settings.RADIAL_POINTS)


def rk4_march(system: RadialSystem, r0: float, r1: float, Y0, steps: int) -> np.ndarray:
    """Fixed-step classical Runge-Kutta; returns Y(r1)."""
    if steps < 1 or r0 <= 0 or r1 <= 0:
        raise DomainError("rk4_march needs positive end points and at least one step")
    h = (r1 - r0) / steps
    y = np.asarray(Y0, dtype=complex)
    for n in range(steps):
        r = r0 + n * h
        k1 = system.generator(r) @ y
        k2 = system.generator(r + h / 2) @ (y + h / 2 * k1)
        k3 = system.generator(r + h / 2) @ (y + h / 2 * k2)
        k4 = system.generator(r + h) @ (y + h * k3)
        y = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
    return y


def self_convergence_order(system: RadialSystem, r0: float, r1: float, Y0, steps: int = 32) -> float:
    """log₂(‖Y_n − Y_2n‖ / ‖Y_2n − Y_4n‖) for the fixed-step marcher."""
    coarse, mid, fine = (rk4_march(system, r0, r1, Y0, steps * k) for k in (1, 2, 4))
    upper, lower = float(np.linalg.norm(coarse - mid)), float(np.linalg.norm(mid - fine))
    if lower == 0.0:
        raise IntegrationError("step halving changed nothing; widen the span or use fewer steps")
    return math.log2(upper / lower)


# === Frobenius start ===
@dataclass
class FrobeniusStart:
    exponents: np.ndarray
    leading: np.ndarray  # columns v0
    first_order: np.ndarray  # columns v1
    r0: float
    degenerate: bool = False

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    def initial_vectors(self) -> np.ndarray:
        """Columns r0^λ(v0 + r0·v1), each scaled to unit length."""
        cols = (self.leading + self.r0 * self.first_order) * self.r0 ** self.exponents
        norms = np.linalg.norm(cols, axis=0)
        return cols / np.where(norms > 0, norms, 1.0)


def _regular_basis(residue: np.ndarray, tol: float):
    values, vectors = eig(residue)
    keep = values.real > tol
    if np.linalg.cond(vectors) < 1e10:
        return values[keep], vectors[:, keep], False
    system_logger.warning(
        "Degenerate indicial structure; using a Schur basis",
        additional_info={"exponents": np.array2string(values, precision=6)},
    )
    T, Z, sdim = schur(residue, output="complex", sort=lambda x: x.real > tol)
    return np.diag(T)[:sdim], Z[:, :sdim], True


def frobenius_start(system: RadialSystem, r0: float | None = None) -> FrobeniusStart:
    r0 = r0 or settings.R_MIN
    tol = settings.INDICIAL_TOL
    residue = system.residue()
    exponents, leading, degenerate = _regular_basis(residue, tol)
    analytic = system.generator(r0) - residue / r0
    eye = np.eye(system.dim)
    first = np.zeros_like(leading)
    for k, lam in enumerate(exponents):
        lhs = (lam + 1) * eye - residue
        rhs = analytic @ leading[:, k]
        try:
            first[:, k] = np.linalg.solve(lhs, rhs)
        except np.linalg.LinAlgError:
            first[:, k] = lstsq(lhs, rhs)[0]
    logger.debug("frobenius %s: exponents %s", system.case, np.round(exponents, 8))
    return FrobeniusStart(exponents=exponents, leading=leading, first_order=first, r0=r0, degenerate=degenerate)


# === shooting ===
def decaying_basis(system: RadialSystem, rmax: float) -> np.ndarray:
    values, vectors = eig(system.generator(rmax))
    return vectors[:, values.real < -settings.DECAY_TOL]


def default_rmax(system: RadialSystem) -> float:
    return settings.R_MAX / max(system.mass, system.profile.scale, 1.0)


@dataclass(frozen=True)
class MatchPoint:
    epsilon: float
    value: float
    regular_dim: int
    decaying_dim: int


def _orthonormal(columns: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(columns)
    return q


def matching_value(
    system: RadialSystem,
    epsilon: float,
    rmax: float | None = None,
    r_mid: float | None = None,
    ode_tol: float | None = None,
) -> MatchPoint:
    """Smallest principal angle between the regular and decaying solution spaces at r_mid."""
    rmax = rmax or default_rmax(system)
    r_mid = r_mid or settings.MATCH_RADIUS
    sys_e = system.with_energy(epsilon)
    start = frobenius_start(sys_e)
    outer = decaying_basis(sys_e, rmax)
    k, l = start.dimension, outer.shape[1]
    if k == 0 or l == 0 or k + l > sys_e.dim:
        return MatchPoint(epsilon, float("nan"), k, l)
    inner_cols = [integrate(sys_e, start.r0, r_mid, v, tol=ode_tol).Y[:, -1] for v in start.initial_vectors().T]
    outer_cols = [integrate(sys_e, rmax, r_mid, v, tol=ode_tol).Y[:, -1] for v in outer.T]
    angles = subspace_angles(_orthonormal(np.column_stack(inner_cols)), _orthonormal(np.column_stack(outer_cols)))
    return MatchPoint(epsilon, float(np.min(angles)), k, l)


def scan_matching(system: RadialSystem, epsilons, rmax: float | None = None, ode_tol: float | None = None) -> pd.DataFrame:
    rows = [matching_value(system, float(e), rmax, ode_tol=ode_tol) for e in epsilons]
    frame = pd.DataFrame(
        {
            "epsilon": [p.epsilon for p in rows],
            "matching": [p.value for p in rows],
            "regular_dim": [p.regular_dim for p in rows],
            "decaying_dim": [p.decaying_dim for p in rows],
        }
    )
    return frame.sort_values("epsilon", ignore_index=True)


@dataclass
class Mode:
    epsilon: float
    matching: float
    solution: RadialSolution
    residual: float  # ODE residual of the glued solution
    shift: float = 0.0  # |Δε| after refining again at a tenth of the integrator tolerance


def _mode_solution(system: RadialSystem, rmax: float, r_mid: float, ode_tol: float | None = None) -> RadialSolution:
    """Inner regular piece glued to the outer decaying piece at r_mid, unit L² norm."""
    start = frobenius_start(system)
    inner_basis, outer_basis = start.initial_vectors(), decaying_basis(system, rmax)
    A = np.column_stack([integrate(system, start.r0, r_mid, v, tol=ode_tol).Y[:, -1] for v in inner_basis.T])
    B = np.column_stack([integrate(system, rmax, r_mid, v, tol=ode_tol).Y[:, -1] for v in outer_basis.T])
    # null vector of [A, −B] gives the matching combination
    _, _, vh = np.linalg.svd(np.hstack([A, -B]))
    coeffs = vh[-1].conj()
    ca, cb = coeffs[: A.shape[1]], coeffs[A.shape[1] :]
    inner = integrate(system, start.r0, r_mid, inner_basis @ ca, tol=ode_tol, t_eval=np.geomspace(start.r0, r_mid, 200))
    outer = integrate(system, rmax, r_mid, outer_basis @ cb, tol=ode_tol, t_eval=np.linspace(rmax, r_mid, 200))
    r = np.concatenate([inner.r, outer.r[::-1][1:]])
    Y = np.hstack([inner.Y, outer.Y[:, ::-1][:, 1:]])
    scale = math.sqrt(max(trapezoid(np.sum(np.abs(Y) ** 2, axis=0), r), 1e-300))
    return RadialSolution(
        r=r,
        Y=Y / scale,
        variables=system.variables,
        boundary="regular-at-0/decaying",
        dense=inner.dense + outer.dense,
    )


def _local_minima(values: np.ndarray) -> list[int]:
    """Indices not above their neighbours, end points included; NaN never qualifies."""
    picks = []
    for k, value in enumerate(values):
        around = values[max(k - 1, 0) : k + 2]
        if not np.isnan(around).any() and value <= around.min():
            picks.append(k)
    return picks


def find_modes(
    system: RadialSystem,
    epsilon_range: tuple[float, float],
    rmax: float | None = None,
    tol: float | None = None,
    scan_points: int | None = None,
) -> list[Mode]:
    """
    Scans the matching angle over ``epsilon_range`` and refines every local
    minimum, end points included, by bounded scalar minimization to ``tol`` in ε.
    Integrations run at tol/100. A refined minimum becomes a mode when

    * its angle is below MATCH_ACCEPT,
    * refining it again at a tenth of the integrator tolerance moves ε by less than 10·tol,
    * the glued solution has a finite norm and an ODE residual below 10·tol.
    """
    rmax = rmax or default_rmax(system)
    tol = tol or 1e-8
    ode_tol = tol * 1e-2
    lo, hi = epsilon_range
    grid = np.linspace(lo, hi, scan_points or settings.SCAN_POINTS)
    if len(grid) < 2 or not hi > lo:
        raise DomainError("find_modes needs an increasing range and at least two scan points")
    values = scan_matching(system, grid, rmax, ode_tol=ode_tol)["matching"].to_numpy()
    if np.all(np.isnan(values)):
        logger.info("no admissible shooting problem for %s on %s", system.case, epsilon_range)
        return []

    def refine(bounds: tuple[float, float], integrator_tol: float):
        return minimize_scalar(
            lambda e: matching_value(system, e, rmax, ode_tol=integrator_tol).value,
            bounds=bounds,
            method="bounded",
            options={"xatol": tol},
        )

    modes: list[Mode] = []
    for k in _local_minima(values):
        result = refine((grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]), ode_tol)
        if not result.fun < settings.MATCH_ACCEPT:
            continue
        eps = float(result.x)
        if any(abs(mode.epsilon - eps) < 10 * tol for mode in modes):
            continue
        again = refine((max(lo, eps - 100 * tol), min(hi, eps + 100 * tol)), ode_tol / 10)
        shift = abs(float(again.x) - eps)
        sys_e = system.with_energy(eps)
        solution = _mode_solution(sys_e, rmax, settings.MATCH_RADIUS, ode_tol)
        residual = solution.ode_residual(sys_e)
        if shift < 10 * tol and residual < 10 * tol and np.isfinite(solution.norm) and solution.norm > 0:
            modes.append(Mode(epsilon=eps, matching=float(result.fun), solution=solution, residual=residual, shift=shift))
            continue
        system_logger.warning(
            "Rejected a shooting candidate",
            additional_info={
                "case": system.case,
                "epsilon": eps,
                "shift": shift,
                "residual": residual,
                "norm": solution.norm,
            },
        )
    logger.info("%d mode(s) found for %s on %s", len(modes), system.case, epsilon_range)
    return modes
