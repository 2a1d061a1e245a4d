"""
Wigner d/D functions, their first-order recurrences, the parity relation and
the Pauli generalized spherical functions.

Conventions
-----------
``wigner_D(j, mp, m, φ, θ, ψ) = e^{−i·mp·φ} d^j_{mp,m}(θ) e^{−i·m·ψ}`` with the
factorial-sum small-d, so that ``d^{1/2}_{1/2,−1/2}(θ) = −sin(θ/2)``. The wave
functions use the columns ``D_σ = D^j_{−m,σ}(φ, θ, 0)``; with this choice the
relations

    ∂_θ D_σ = ½ (c₋(σ) D_{σ−1} − c₊(σ) D_{σ+1})
    (i∂_φ − σ cosθ) D_σ / sinθ = −½ (c₋(σ) D_{σ−1} + c₊(σ) D_{σ+1})

hold with c₋(σ) = √((j+σ)(j−σ+1)), c₊(σ) = √((j−σ)(j+σ+1)). For |σ| ≤ 3/2 the
coefficients are the ladder numbers a, b, c below.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy
from numpy.polynomial import Polynomial
from scipy.special import gamma

from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import CriterionError, DomainError
from src.services.monopole_triplet_module.finite_differences import d_phi, d_theta, guard_pole
from src.services.monopole_triplet_module.quantum_numbers import (
    HalfInt,
    HalfIntLike,
    branch_phase,
    check_projection,
    weights,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LadderCoeffs:
    a: float
    b: float
    c: float | None  # absent below j = 3/2


@dataclass(frozen=True)
class PauliWeight:
    lam: Fraction
    j: Fraction


@dataclass(frozen=True)
class PauliVerdict:
    weight: PauliWeight
    integer_rule: bool
    derivative_rule: bool

    @property
    def admissible(self) -> bool:
        return self.integer_rule and self.derivative_rule

    @property
    def rules_agree(self) -> bool:
        return self.integer_rule == self.derivative_rule


@dataclass
class RecurrenceReport:
    j: HalfInt
    m: HalfInt
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


# === small d and D ===
def wigner_small_d(j: HalfIntLike, mp: HalfIntLike, m: HalfIntLike, theta):
    j, mp = check_projection(j, mp, "mp")
    _, m = check_projection(j, m)
    # all factorial arguments below are integers because j±m, j±mp are
    jpm, jmm = (j.twice + m.twice) // 2, (j.twice - m.twice) // 2
    jpmp, jmmp = (j.twice + mp.twice) // 2, (j.twice - mp.twice) // 2
    shift = (mp.twice - m.twice) // 2
    prefactor = math.sqrt(
        math.factorial(jpm) * math.factorial(jmm) * math.factorial(jpmp) * math.factorial(jmmp)
    )

    half_theta = np.asarray(theta, dtype=float) / 2
    cos_h, sin_h = np.cos(half_theta), np.sin(half_theta)
    total = np.zeros_like(half_theta)
    for k in range(max(0, -shift), min(jpm, jmmp) + 1):
        denom = (
            math.factorial(jpm - k)
            * math.factorial(k)
            * math.factorial(jmmp - k)
            * math.factorial(k + shift)
        )
        sign = -1.0 if (k + shift) % 2 else 1.0
        total = total + sign * (prefactor / denom) * cos_h ** (j.twice - 2 * k - shift) * sin_h ** (2 * k + shift)
    return total if total.ndim else float(total)


def wigner_D(j: HalfIntLike, mp: HalfIntLike, m: HalfIntLike, phi, theta, psi=0.0):
    mp_v, m_v = HalfInt.of(mp).value, HalfInt.of(m).value
    small = wigner_small_d(j, mp, m, theta)
    return np.exp(-1j * mp_v * np.asarray(phi)) * small * np.exp(-1j * m_v * np.asarray(psi))


def wigner_D_matrix(j: HalfIntLike, phi: float, theta: float, psi: float = 0.0) -> np.ndarray:
    labels = weights(j)
    return np.array([[wigner_D(j, mp, m, phi, theta, psi) for m in labels] for mp in labels], dtype=complex)


def d_column(j: HalfIntLike, m: HalfIntLike, sigma: HalfIntLike, theta, phi):
    """D^j_{−m,σ}(φ, θ, 0); zero when |σ| exceeds j."""
    j, sigma = HalfInt.of(j), HalfInt.of(sigma)
    if abs(sigma.twice) > j.twice:
        return np.zeros(np.broadcast(np.asarray(theta), np.asarray(phi)).shape, dtype=complex)[()]
    return wigner_D(j, -HalfInt.of(m), sigma, phi, theta, 0.0)


# === recurrences ===
def ladder_coefficients(j: HalfIntLike) -> LadderCoeffs:
    j = HalfInt.of(j)
    if j.twice < 1:
        raise DomainError(f"ladder coefficients need j ≥ 1/2, got {j}")
    jv = j.value
    c = math.sqrt((jv - 1.5) * (jv + 2.5)) if j.twice >= 3 else None
    return LadderCoeffs(a=jv + 0.5, b=math.sqrt((jv - 0.5) * (jv + 1.5)), c=c)


def _relation_table(coeffs: LadderCoeffs) -> dict[int, tuple[float, float]]:
    """Twice σ → (coefficient of D_{σ−1}, coefficient of D_{σ+1})."""
    c = coeffs.c or 0.0
    return {
        -3: (c, coeffs.b),
        -1: (coeffs.b, coeffs.a),
        1: (coeffs.a, coeffs.b),
        3: (coeffs.b, c),
    }


def verify_recurrences(
    j: HalfIntLike, m: HalfIntLike, theta: float, phi: float, step: float | None = None
) -> RecurrenceReport:
    j, m = check_projection(j, m)
    guard_pole(theta)
    table = _relation_table(ladder_coefficients(j))
    report = RecurrenceReport(j=j, m=m)

    for twice_sigma, (lower, upper) in table.items():
        if abs(twice_sigma) > j.twice:
            continue
        sigma = HalfInt(twice_sigma)

        def column(t, p, s=sigma):
            return d_column(j, m, s, t, p)

        d_lower = column(theta, phi, sigma - 1)
        d_upper = column(theta, phi, sigma + 1)
        value = column(theta, phi)

        lhs_theta = d_theta(column, theta, phi, step)
        rhs_theta = 0.5 * (lower * d_lower - upper * d_upper)
        lhs_phi = (1j * d_phi(column, theta, phi, step) - sigma.value * math.cos(theta) * value) / math.sin(theta)
        rhs_phi = -0.5 * (lower * d_lower + upper * d_upper)

        report.residuals[f"theta[{sigma}]"] = float(abs(lhs_theta - rhs_theta))
        report.residuals[f"phi[{sigma}]"] = float(abs(lhs_phi - rhs_phi))

    logger.debug("recurrences j=%s m=%s max residual %.3e", j, m, report.max_residual)
    return report


def parity_flip(j: HalfIntLike, m: HalfIntLike, sigma: HalfIntLike, theta: float, phi: float) -> tuple[complex, complex]:
    """Both sides of P̂ D^j_{−m,σ} = e^{iπj} D^j_{−m,−σ}."""
    j, m = check_projection(j, m)
    _, sigma = check_projection(j, sigma, "sigma")
    reflected = complex(d_column(j, m, sigma, np.pi - theta, phi + np.pi))
    mirrored = branch_phase(j) * complex(d_column(j, m, -sigma, theta, phi))
    return reflected, mirrored


# === Pauli functions ===
def _as_fraction(value: HalfIntLike | float) -> Fraction:
    if isinstance(value, HalfInt):
        return value.fraction
    if isinstance(value, float):
        return Fraction(value).limit_denominator(1000)
    return Fraction(value)


def _integer_rule(lam: Fraction, j: Fraction) -> bool:
    return (2 * lam).denominator == 1 and (2 * j).denominator == 1 and j >= abs(lam) and (j - abs(lam)).denominator == 1


def _derivative_rule(lam: Fraction, j: Fraction) -> bool:
    if (2 * j).denominator != 1 or 2 * j + 1 <= 0:
        return False
    x = sympy.Symbol("x")
    p, q = j + lam, j - lam
    expr = (1 + x) ** sympy.Rational(p.numerator, p.denominator) * (1 - x) ** sympy.Rational(q.numerator, q.denominator)
    derived = sympy.diff(expr, x, int(2 * j + 1))
    if p.denominator == 1 and q.denominator == 1 and p >= 0 and q >= 0:
        return sympy.expand(derived) == 0
    # a single nonzero sample settles the non-polynomial case
    sample = derived.subs(x, sympy.Rational(1, 3)).evalf(50)
    if abs(complex(sample)) > 1e-30:
        return False
    return sympy.simplify(derived) == 0


def pauli_criterion(lam: HalfIntLike | float, j: HalfIntLike | float) -> PauliVerdict:
    lam_f, j_f = _as_fraction(lam), _as_fraction(j)
    verdict = PauliVerdict(
        weight=PauliWeight(lam=lam_f, j=j_f),
        integer_rule=_integer_rule(lam_f, j_f),
        derivative_rule=_derivative_rule(lam_f, j_f),
    )
    if not verdict.rules_agree:
        system_logger.warning(
            "Pauli rules disagree", additional_info={"lambda": str(lam_f), "j": str(j_f)}
        )
    return verdict


def pauli_normalization(lam: HalfIntLike, j: HalfIntLike, m: HalfIntLike) -> float:
    lam_v, j_v, m_v = (HalfInt.of(v).value for v in (lam, j, m))
    args = (j_v + lam_v + 1, j_v - lam_v + 1)
    if any(a <= 0 and float(a).is_integer() for a in args):
        raise CriterionError(f"Γ pole in normalization for λ={lam}, j={j}")
    ratio = (2 * j_v + 1) * gamma(j_v + m_v + 1) / (2 * gamma(j_v - m_v + 1) * gamma(args[0]) * gamma(args[1]))
    return math.sqrt(ratio) / (math.sqrt(2 * math.pi) * 2**j_v)


def pauli_phi(lam: HalfIntLike, j: HalfIntLike, m: HalfIntLike, theta, phi):
    """Φ^λ_{jm}(θ, φ) from the Rodrigues-type construction."""
    lam, j = HalfInt.of(lam), HalfInt.of(j)
    if not pauli_criterion(lam, j).admissible:
        raise CriterionError(f"(λ={lam}, j={j}) is not admissible")
    _, m = check_projection(j, m)

    p, q = (j + lam).twice // 2, (j - lam).twice // 2
    poly = Polynomial([1, 1]) ** p * Polynomial([1, -1]) ** q
    derived = poly.deriv((j - m).twice // 2) if (j - m).twice else poly

    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    envelope = np.sin(theta) ** (-m.value) * (1 - x) ** (lam.value / 2) / (1 + x) ** (lam.value / 2)
    return pauli_normalization(lam, j, m) * np.exp(1j * m.value * np.asarray(phi)) * envelope * derived(x)


def pauli_phi_from_wigner(lam: HalfIntLike, j: HalfIntLike, m: HalfIntLike, theta, phi):
    """√((2j+1)/4π) (−1)^{j−m} D^j_{−m,−λ}(φ, θ, 0)."""
    j, m = check_projection(j, m)
    lam = HalfInt.of(lam)
    scale = math.sqrt((2 * j.value + 1) / (4 * math.pi))
    return scale * branch_phase(j - m) * d_column(j, m, -lam, theta, phi)


def pauli_J_operators(lam: HalfIntLike, step: float | None = None) -> dict[str, Callable]:
    """J₊, J₋, J₃ acting on scalar callables f(θ, φ); results are callables too."""
    lam_v = HalfInt.of(lam).value if not isinstance(lam, float) else lam

    def ladder(sign: int):
        def apply(f):
            def g(theta, phi):
                dt = d_theta(f, theta, phi, step)
                dp = d_phi(f, theta, phi, step)
                core = sign * dt + 1j * dp / math.tan(theta) + lam_v * np.asarray(f(theta, phi)) / math.sin(theta)
                return np.exp(sign * 1j * phi) * core

            return g

        return apply

    def third(f):
        return lambda theta, phi: -1j * d_phi(f, theta, phi, step)

    return {"plus": ladder(+1), "minus": ladder(-1), "three": third}
