"""Product rules on the sphere: Gauss-Legendre in θ (or cosθ) × uniform φ."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@dataclass(frozen=True)
class SphereRule:
    theta: np.ndarray  # flattened node coordinates
    phi: np.ndarray
    weight: np.ndarray  # includes the sinθ Jacobian


@lru_cache(maxsize=32)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return nodes, weights


def sphere_rule(n_theta: int, n_phi: int, half_space: bool = False, in_cosine: bool = False) -> SphereRule:
    """
    ``in_cosine`` integrates in x = cosθ (exact for polynomials in cosθ);
    otherwise nodes are placed in θ and weighted by sinθ, which also resolves
    the half-angle factors of half-integer D functions. ``half_space`` keeps
    θ ∈ (0, π/2).
    """
    x, w = _legendre(n_theta)
    upper = math.pi / 2 if half_space else math.pi
    if in_cosine:
        lower_cos = 0.0 if half_space else -1.0
        cos_nodes = lower_cos + (x + 1) * (1 - lower_cos) / 2
        theta = np.arccos(cos_nodes)
        theta_w = w * (1 - lower_cos) / 2
    else:
        theta = (x + 1) * upper / 2
        theta_w = w * upper / 2 * np.sin(theta)

    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    phi_w = np.full(n_phi, 2 * math.pi / n_phi)

    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(theta_w, phi_w)
    return SphereRule(theta=tt.ravel(), phi=pp.ravel(), weight=ww.ravel())
