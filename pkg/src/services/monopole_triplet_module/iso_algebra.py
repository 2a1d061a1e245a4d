"""
Matrix algebra for the isotopic triplet: cyclic and Cartesian generators,
Gibbs-vector rotations, Weyl-basis Dirac matrices, Kronecker composites and the
SU(2) spinor → SO(3) vector map.

Composite 12×12 matrices are always ``np.kron(iso, bispinor)``: the isotopic
index is the slow one and the 12-vector reads T₊₁(f₁..f₄), T₀(h₁..h₄),
T₋₁(g₁..g₄).
"""

import logging
import math
from itertools import permutations

import numpy as np
from scipy.linalg import expm

from src.error_trace.exceptions import SingularParameterError

logger = logging.getLogger(__name__)

SQ2 = math.sqrt(2.0)
I2, I3, I4 = np.eye(2, dtype=complex), np.eye(3, dtype=complex), np.eye(4, dtype=complex)

# cyclic basis generators
T1 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / SQ2
T2 = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / SQ2
T3 = np.diag([1, 0, -1]).astype(complex)

# Cartesian → cyclic change of basis; t_k = S j_k S⁻¹
S_CYCLIC = np.array(
    [[-1 / SQ2, 1j / SQ2, 0], [0, 0, 1], [1 / SQ2, 1j / SQ2, 0]],
    dtype=complex,
)
S_CYCLIC_INV = S_CYCLIC.conj().T

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

LEVI_CIVITA = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_a, _b, _c], LEVI_CIVITA[_a, _c, _b] = 1.0, -1.0


# === isotopic generators ===
def cyclic_generators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return T1.copy(), T2.copy(), T3.copy()


def cartesian_generators() -> tuple[np.ndarray, ...]:
    """(j_k)_{ab} = −i ε_{kab}."""
    return tuple(-1j * LEVI_CIVITA[k].astype(complex) for k in range(3))


def to_cyclic(matrix: np.ndarray) -> np.ndarray:
    return S_CYCLIC @ matrix @ S_CYCLIC_INV


def to_cartesian(matrix: np.ndarray) -> np.ndarray:
    return S_CYCLIC_INV @ matrix @ S_CYCLIC


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def t0_projector() -> np.ndarray:
    return np.diag([0, 1, 0]).astype(complex)


def t0_from_squares() -> np.ndarray:
    return 0.5 * (T1 @ T1 + T2 @ T2 - T3 @ T3)


def t_tilde0(theta: float, phi: float) -> np.ndarray:
    """t⁰ carried to the Cartesian isotopic gauge; a rank-one projector."""
    s, c = math.sin(theta), math.cos(theta)
    e1, e2 = np.exp(1j * phi), np.exp(2j * phi)
    return np.array(
        [
            [s * s / 2, -s * c / (SQ2 * e1), -s * s / (2 * e2)],
            [-s * c * e1 / SQ2, c * c, s * c / (SQ2 * e1)],
            [-s * s * e2 / 2, s * c * e1 / SQ2, s * s / 2],
        ],
        dtype=complex,
    )


def unit_radial(theta: float, phi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def spherical_tetrad(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(e_θ, e_φ, e_r) in Cartesian components."""
    e_theta = np.array([math.cos(theta) * math.cos(phi), math.cos(theta) * math.sin(phi), -math.sin(theta)])
    e_phi = np.array([-math.sin(phi), math.cos(phi), 0.0])
    return e_theta, e_phi, unit_radial(theta, phi)


def t_dot(n: np.ndarray) -> np.ndarray:
    return n[0] * T1 + n[1] * T2 + n[2] * T3


def exp_iso_rotation(A: complex, n: np.ndarray) -> np.ndarray:
    """exp(i·A·(t·n)) by Padé scaling and squaring."""
    n = np.asarray(n, dtype=float)
    if not math.isclose(float(np.linalg.norm(n)), 1.0, abs_tol=1e-12):
        raise ValueError(f"axis must be a unit vector, |n|={np.linalg.norm(n)}")
    return expm(1j * complex(A) * t_dot(n))


def delta_matrix(gamma_: complex) -> np.ndarray:
    """Δ(Γ) = diag(e^{−iΓ}, 1, e^{iΓ}) = exp(−iΓ t³)."""
    g = complex(gamma_)
    return np.diag([np.exp(-1j * g), 1.0, np.exp(1j * g)])


def d_matrix(gamma_: complex) -> np.ndarray:
    """D(Γ) = exp(−iΓ t⁰)."""
    return np.diag([1.0, np.exp(-1j * complex(gamma_)), 1.0])


# === Gibbs rotations ===
def cross_matrix(c: np.ndarray) -> np.ndarray:
    """(c^×)_{ac} = −ε_{acb} c_b."""
    c = np.asarray(c)
    return np.array([[0, -c[2], c[1]], [c[2], 0, -c[0]], [-c[1], c[0], 0]], dtype=complex)


def _gibbs_denominator(c: np.ndarray) -> complex:
    denom = 1 + complex(np.dot(c, c))
    if abs(denom) < 1e-14:
        raise SingularParameterError(f"1 + c·c vanishes for c={c}")
    return denom


def gibbs_rotation(c) -> np.ndarray:
    """O(c); real for real c (SO(3,R)), complex orthogonal otherwise (SO(3,C))."""
    c = np.asarray(c, dtype=complex)
    cx = cross_matrix(c)
    rotation = I3 + 2 * (cx + cx @ cx) / _gibbs_denominator(c)
    return rotation if np.any(c.imag) else rotation.real


def gibbs_inhomogeneous(c) -> np.ndarray:
    """f(c) = −2 (1 + c^×) / (1 + c·c)."""
    c = np.asarray(c, dtype=complex)
    return -2 * (I3 + cross_matrix(c)) / _gibbs_denominator(c)


def compose_gibbs(c_outer, c_inner) -> np.ndarray:
    """Parameter of O(c_outer)·O(c_inner)."""
    co, ci = np.asarray(c_outer, dtype=complex), np.asarray(c_inner, dtype=complex)
    denom = 1 - complex(np.dot(co, ci))
    if abs(denom) < 1e-14:
        raise SingularParameterError("composition passes through a half turn")
    out = (co + ci + np.cross(co, ci)) / denom
    return out.real if not np.any(out.imag) else out


def gibbs_to_pole(theta: float, phi: float) -> np.ndarray:
    """The simplest rotation sending n_{θφ} to the third axis."""
    return math.tan(theta / 2) * np.array([math.sin(phi), -math.cos(phi), 0.0])


def gibbs_about_axis3(phi: float) -> np.ndarray:
    return np.array([0.0, 0.0, -math.tan(phi / 2)])


def gibbs_to_tetrad(theta: float, phi: float) -> np.ndarray:
    """Parameter whose rotation has rows (e_θ, e_φ, e_r)."""
    tt, tp = math.tan(theta / 2), math.tan(phi / 2)
    return np.array([tt * tp, -tt, -tp])


# === Dirac matrices, Weyl basis ===
def gamma_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    zero = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[zero, I2], [I2, zero]])
    spatial = tuple(np.block([[zero, -s], [s, zero]]) for s in PAULI)
    return (g0, *spatial)


GAMMA = gamma_matrices()
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def gamma5() -> np.ndarray:
    g0, g1, g2, g3 = GAMMA
    return -1j * g0 @ g1 @ g2 @ g3


def parity_kernel() -> np.ndarray:
    """Π = −γ⁵γ¹, anti-diagonal with −1 entries."""
    return -gamma5() @ GAMMA[1]


def spin_kernel() -> np.ndarray:
    """iσ¹² = (i/2)γ¹γ²."""
    return 0.5j * GAMMA[1] @ GAMMA[2]


def anticommutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def composite(iso: np.ndarray, bispinor: np.ndarray) -> np.ndarray:
    return np.kron(iso, bispinor)


# === SU(2) spinor map ===
def sl2c_from_gibbs(c) -> np.ndarray:
    """B(c) = (I − iσ·c)/√(1 + c·c), + branch."""
    c = np.asarray(c, dtype=complex)
    denom = _gibbs_denominator(c)
    sigma_c = sum(ci * s for ci, s in zip(c, PAULI))
    return (I2 - 1j * sigma_c) / np.sqrt(denom)


def vector_map_of(b: np.ndarray) -> np.ndarray:
    """
    4×4 vector transformation L^a_b(k, k*) induced by the 2×2 matrix B,
    with B = k₀ I + k_j σ_j. The spatial block is returned by ``[1:, 1:]``.
    """
    k_lower = np.array([0.5 * np.trace(b)] + [0.5 * np.trace(s @ b) for s in PAULI])
    k_upper = METRIC @ k_lower
    kk = k_upper @ k_lower.conj()

    eps4 = np.zeros((4, 4, 4, 4))
    for perm, sign in _permutations4():
        eps4[perm] = -sign  # ε^{0123} = −1

    mixed = np.zeros((4, 4), dtype=complex)
    for c in range(4):
        for a in range(4):
            term = -(c == a) * kk + k_lower[c] * k_upper[a].conj() + k_lower[c].conj() * k_upper[a]
            term += 1j * METRIC[c, c] * np.einsum("nm,n,m->", eps4[c, a], k_lower, k_lower.conj())
            mixed[c, a] = term
    # rows index the image vector: L[a, b] = η_bb M[b, a]
    return mixed.T @ METRIC


def _permutations4():
    for perm in permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        yield perm, (-1) ** inversions
