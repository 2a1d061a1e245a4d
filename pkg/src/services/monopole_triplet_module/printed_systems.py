"""
Hand transcriptions of the radial equations as they are written out term by
term, kept independent of the matrix assembly in ``radial_dynamics`` so the two
can be checked against each other.

Each system is a function ``(Y, dY, p) -> residuals`` that is linear in ``Y``
and ``dY``; :func:`isolate_derivatives` turns it into ``Y′ = M·Y``.

Notation: E± = ε ± F̃, M± = m ± Φ̃, w = √2·W/r, B = b/r, A = a/r.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class PrintedParams:
    r: float
    epsilon: float
    mass: float
    a: float
    b: float
    W: float = 0.0
    F_tilde: float = 0.0
    Phi_tilde: float = 0.0
    delta: int = 1

    @property
    def w(self) -> float:
        return math.sqrt(2.0) * self.W / self.r

    @property
    def A(self) -> float:
        return self.a / self.r

    @property
    def B(self) -> float:
        return self.b / self.r


Equations = Callable[[np.ndarray, np.ndarray, PrintedParams], np.ndarray]


def full_equations(Y, dY, p: PrintedParams) -> np.ndarray:
    f1, f2, f3, f4, h1, h2, h3, h4, g1, g2, g3, g4 = Y
    d = dict(zip(("f1", "f2", "f3", "f4", "h1", "h2", "h3", "h4", "g1", "g2", "g3", "g4"), dY))
    e_p, e_m = p.epsilon + p.F_tilde, p.epsilon - p.F_tilde
    m_p, m_m = p.mass + p.Phi_tilde, p.mass - p.Phi_tilde
    eps, m, w, B, A = p.epsilon, p.mass, p.w, p.B, p.A
    return np.array(
        [
            e_p * f3 - 1j * d["f3"] - 1j * B * f4 - m_p * f1,
            e_p * f4 + 1j * d["f4"] + 1j * B * f3 + 1j * w * h3 - m_p * f2,
            e_p * f1 + 1j * d["f1"] + 1j * B * f2 - m_p * f3,
            e_p * f2 - 1j * d["f2"] - 1j * B * f1 - 1j * w * h1 - m_p * f4,
            eps * h3 - 1j * d["h3"] - 1j * A * h4 - 1j * w * f4 - m * h1,
            eps * h4 + 1j * d["h4"] + 1j * A * h3 + 1j * w * g3 - m * h2,
            eps * h1 + 1j * d["h1"] + 1j * A * h2 + 1j * w * f2 - m * h3,
            eps * h2 - 1j * d["h2"] - 1j * A * h1 - 1j * w * g1 - m * h4,
            e_m * g3 - 1j * d["g3"] - 1j * B * g4 - 1j * w * h4 - m_m * g1,
            e_m * g4 + 1j * d["g4"] + 1j * B * g3 - m_m * g2,
            e_m * g1 + 1j * d["g1"] + 1j * B * g2 + 1j * w * h2 - m_m * g3,
            e_m * g2 - 1j * d["g2"] - 1j * B * g1 - m_m * g4,
        ]
    )


# j = 1/2 keeps the variables (f2, f4, h1, h2, h3, h4, g1, g3) and the rows holding their derivatives
_MIN_SLOTS = (1, 3, 4, 5, 6, 7, 8, 10)
_MIN_ROWS = (1, 3, 4, 5, 6, 7, 8, 10)


def full_min_equations(Y, dY, p: PrintedParams) -> np.ndarray:
    big_y, big_dy = np.zeros(12, dtype=complex), np.zeros(12, dtype=complex)
    big_y[list(_MIN_SLOTS)], big_dy[list(_MIN_SLOTS)] = Y, dY
    return full_equations(big_y, big_dy, p)[list(_MIN_ROWS)]


def reduced_equations(Y, dY, p: PrintedParams) -> np.ndarray:
    """Six equations in (f₁..f₄, h₁, h₂); the w terms are the α = +1 ones."""
    f1, f2, f3, f4, h1, h2 = Y
    df1, df2, df3, df4, dh1, dh2 = dY
    eps, m, w, B, A, delta = p.epsilon, p.mass, p.w, p.B, p.A, p.delta
    return np.array(
        [
            eps * f3 - 1j * df3 - 1j * B * f4 - m * f1,
            eps * f4 + 1j * df4 + 1j * B * f3 + 1j * delta * w * h2 - m * f2,
            eps * f1 + 1j * df1 + 1j * B * f2 - m * f3,
            eps * f2 - 1j * df2 - 1j * B * f1 - 1j * w * h1 - m * f4,
            eps * h2 - 1j * dh2 - 1j * A * h1 - 1j * delta * w * f4 - delta * m * h1,
            eps * h1 + 1j * dh1 + 1j * A * h2 + 1j * w * f2 - delta * m * h2,
        ]
    )


def reduced_min_equations(Y, dY, p: PrintedParams) -> np.ndarray:
    f2, f4, h1, h2 = Y
    df2, df4, dh1, dh2 = dY
    eps, m, w, delta = p.epsilon, p.mass, p.w, p.delta
    inv_r = 1.0 / p.r
    return np.array(
        [
            eps * f4 + 1j * df4 + 1j * delta * w * h2 - m * f2,
            eps * f2 - 1j * df2 - 1j * w * h1 - m * f4,
            eps * h2 - 1j * dh2 - 1j * inv_r * h1 - 1j * delta * w * f4 - delta * m * h1,
            eps * h1 + 1j * dh1 + 1j * inv_r * h2 + 1j * w * f2 - delta * m * h2,
        ]
    )


PRINTED = {
    "full_j": (full_equations, 12),
    "full_min": (full_min_equations, 8),
    "reduced_W0": (reduced_equations, 6),
    "reduced_W": (reduced_equations, 6),
    "reduced_min_W0": (reduced_min_equations, 4),
    "reduced_min_W": (reduced_min_equations, 4),
}


def coefficient_matrices(equations: Equations, dim: int, params: PrintedParams) -> tuple[np.ndarray, np.ndarray]:
    """(P, Q) with equations(Y, dY) = P·dY + Q·Y, read off from unit inputs."""
    zero = np.zeros(dim, dtype=complex)
    eye = np.eye(dim, dtype=complex)
    P = np.column_stack([equations(zero, eye[k], params) for k in range(dim)])
    Q = np.column_stack([equations(eye[k], zero, params) for k in range(dim)])
    return P, Q


def isolate_derivatives(equations: Equations, dim: int, params: PrintedParams) -> np.ndarray:
    P, Q = coefficient_matrices(equations, dim, params)
    return -np.linalg.solve(P, Q)


def printed_generator(case: str, params: PrintedParams) -> np.ndarray:
    equations, dim = PRINTED[case]
    return isolate_derivatives(equations, dim, params)


def printed_residual(case: str, generator: np.ndarray, params: PrintedParams, rng: np.random.Generator, samples: int = 5) -> float:
    """max |eq(Y, M·Y)| over random complex Y, relative to |Y|."""
    equations, dim = PRINTED[case]
    worst = 0.0
    for _ in range(samples):
        Y = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        worst = max(worst, float(np.max(np.abs(equations(Y, generator @ Y, params)))) / float(np.linalg.norm(Y)))
    return worst
