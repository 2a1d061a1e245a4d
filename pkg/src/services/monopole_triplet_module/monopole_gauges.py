"""
Monopole backgrounds in the hedgehog (Cartesian), Dirac and Schwinger isotopic
gauges, the non-Abelian gauge law for Gibbs fields and the wave-function maps
between frames.

Potentials are returned with spherical coordinate components (t, r, θ, φ),
each an isotopic 3-vector in the frame's own basis.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional

import numpy as np

from src.config.settings import settings
from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import DomainError, SingularParameterError, StringSingularityError
from src.services.monopole_triplet_module.iso_algebra import (
    S_CYCLIC,
    S_CYCLIC_INV,
    gibbs_about_axis3,
    gibbs_inhomogeneous,
    gibbs_rotation,
    gibbs_to_pole,
    gibbs_to_tetrad,
    spherical_tetrad,
    unit_radial,
)

logger = logging.getLogger(__name__)

FRAMES = ("cartesian", "dirac", "schwinger")
COMPONENTS = ("t", "r", "theta", "phi")
RadialFunction = Callable[[np.ndarray], np.ndarray]


# === Profiles ===
def _x_over_sinh(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 - x * x / 6 + 7 * x**4 / 360, safe / np.sinh(safe))


@dataclass(frozen=True)
class MonopoleProfile:
    """
    Background data. ``W`` is the structure function e·r²·K(r) + 1; K is
    derived from it so that the trivial background is exactly W ≡ 0.
    """

    name: str
    W: RadialFunction
    F: RadialFunction
    Phi: RadialFunction
    e: float = 1.0
    kappa: float = 0.0
    w_origin: float = 0.0
    electric: bool = False  # F not identically zero
    scale: float = 0.0  # BPS μ; sets the core size

    def K(self, r):
        r = np.asarray(r, dtype=float)
        return (self.W(r) - 1.0) / (self.e * r * r)

    def F_tilde(self, r):
        """e·r·F(r)."""
        return self.e * np.asarray(r) * self.F(r)

    def Phi_tilde(self, r):
        """κ·r·Φ(r)."""
        return self.kappa * np.asarray(r) * self.Phi(r)

    @property
    def is_trivial(self) -> bool:
        return self.name == "trivial"

    @property
    def has_dyon_terms(self) -> bool:
        return self.kappa != 0.0 or self.electric

    def without_dyon_terms(self) -> "MonopoleProfile":
        return replace(self, F=_zero, kappa=0.0, electric=False)


def _zero(r):
    return np.zeros_like(np.asarray(r, dtype=float))


def builtin_profiles(name: str, mu: float = 1.0, e: float = 1.0, kappa: float = 0.0, tables: Optional[dict] = None):
    """trivial, bps (W = μr/sinh μr) or custom (tabulated W, F, Phi)."""
    key = name.lower()
    if key == "trivial":
        return MonopoleProfile("trivial", _zero, _zero, _zero, e=e, kappa=kappa, w_origin=0.0)
    if key == "bps":

        def higgs(r):
            r = np.asarray(r, dtype=float)
            x = mu * r
            # μ coth(μr) − 1/r, expanded near the origin
            core = np.where(np.abs(x) < 1e-4, mu * x / 3, mu / np.tanh(np.where(x == 0, 1, x)) - 1 / r)
            return core / (e * r)

        return MonopoleProfile(
            f"bps:{mu:g}", lambda r: _x_over_sinh(mu * np.asarray(r, dtype=float)), _zero, higgs,
            e=e, kappa=kappa, w_origin=1.0, scale=abs(mu),
        )
    if key == "custom":
        if not tables or "W" not in tables:
            raise DomainError("custom profile needs at least a W table")
        w = tables["W"]
        return MonopoleProfile(
            "custom",
            w,
            tables.get("F", _zero),
            tables.get("Phi", _zero),
            e=e,
            kappa=kappa,
            w_origin=float(w(np.array(0.0))),
            electric="F" in tables,
        )
    raise DomainError(f"unknown profile {name!r}")


# === Gibbs fields ===
@dataclass(frozen=True)
class GibbsField:
    """c(r, θ, φ) with optional analytic derivatives keyed by coordinate."""

    c: Callable[[float, float, float], np.ndarray]
    derivatives: Optional[Callable[[float, float, float], Dict[str, np.ndarray]]] = None
    singular: Optional[Callable[[float, float], bool]] = None
    label: str = "custom"

    def at(self, r: float, theta: float, phi: float) -> np.ndarray:
        if self.singular and self.singular(theta, phi):
            raise SingularParameterError(f"Gibbs field {self.label} is singular at θ={theta}, φ={phi}")
        return np.asarray(self.c(r, theta, phi))

    def partials(self, r: float, theta: float, phi: float) -> Dict[str, np.ndarray]:
        if self.derivatives is not None:
            return self.derivatives(r, theta, phi)
        h = settings.GAUGE_FD_STEP
        shifts = {"r": (h, 0, 0), "theta": (0, h, 0), "phi": (0, 0, h)}
        out = {"t": np.zeros(3)}
        for name, (dr, dt, dp) in shifts.items():
            forward = self.at(r + dr, theta + dt, phi + dp)
            backward = self.at(r - dr, theta - dt, phi - dp)
            out[name] = (forward - backward) / (2 * h)
        return out

    def negated(self) -> "GibbsField":
        derivs = self.derivatives
        return GibbsField(
            c=lambda r, t, p: -np.asarray(self.c(r, t, p)),
            derivatives=(lambda r, t, p: {k: -v for k, v in derivs(r, t, p).items()}) if derivs else None,
            singular=self.singular,
            label=f"-{self.label}",
        )


def hedgehog_to_dirac_field() -> GibbsField:
    def derivatives(r, theta, phi):
        sec2 = 1 / math.cos(theta / 2) ** 2
        return {
            "t": np.zeros(3),
            "r": np.zeros(3),
            "theta": 0.5 * sec2 * np.array([math.sin(phi), -math.cos(phi), 0.0]),
            "phi": math.tan(theta / 2) * np.array([math.cos(phi), math.sin(phi), 0.0]),
        }

    return GibbsField(
        c=lambda r, theta, phi: gibbs_to_pole(theta, phi),
        derivatives=derivatives,
        singular=lambda theta, phi: abs(math.pi - theta) < settings.STRING_GUARD,
        label="to-pole",
    )


def dirac_to_schwinger_field() -> GibbsField:
    def derivatives(r, theta, phi):
        return {
            "t": np.zeros(3),
            "r": np.zeros(3),
            "theta": np.zeros(3),
            "phi": np.array([0.0, 0.0, -0.5 / math.cos(phi / 2) ** 2]),
        }

    return GibbsField(
        c=lambda r, theta, phi: gibbs_about_axis3(phi),
        derivatives=derivatives,
        singular=lambda theta, phi: abs(math.cos(phi / 2)) < settings.STRING_GUARD,
        label="about-axis3",
    )


# === Potentials ===
@dataclass(frozen=True)
class GaugePotential:
    frame: str
    profile: MonopoleProfile
    components: Callable[[float, float, float], Dict[str, np.ndarray]]
    higgs: Callable[[float, float, float], np.ndarray]
    strings: tuple = field(default_factory=tuple)

    def at(self, r: float, theta: float, phi: float) -> Dict[str, np.ndarray]:
        for pole in self.strings:
            if abs(theta - pole) < settings.STRING_GUARD:
                raise StringSingularityError(f"{self.frame} potential evaluated on its string θ={pole}")
        return self.components(r, theta, phi)

    def higgs_at(self, r: float, theta: float, phi: float) -> np.ndarray:
        return self.higgs(r, theta, phi)


def hedgehog_potential(profile: MonopoleProfile) -> GaugePotential:
    """W^a_t = rF n^a, W^a_i = K ε_{aji} x_j, Φ^a = rΦ n^a."""

    def components(r, theta, phi):
        e_theta, e_phi, n = spherical_tetrad(theta, phi)
        k = float(profile.K(r))
        return {
            "t": r * float(profile.F(r)) * n,
            "r": np.zeros(3),
            "theta": r * r * k * e_phi,
            "phi": -r * r * math.sin(theta) * k * e_theta,
        }

    return GaugePotential(
        "cartesian", profile, components, lambda r, t, p: r * float(profile.Phi(r)) * unit_radial(t, p)
    )


def _third(value: float) -> np.ndarray:
    return np.array([0.0, 0.0, value])


def dirac_potential(profile: MonopoleProfile) -> GaugePotential:
    def components(r, theta, phi):
        amp = r * r * float(profile.K(r)) + 1 / profile.e
        return {
            "t": _third(r * float(profile.F(r))),
            "r": np.zeros(3),
            "theta": amp * np.array([-math.sin(phi), math.cos(phi), 0.0]),
            "phi": np.array(
                [
                    -amp * math.sin(theta) * math.cos(phi),
                    -amp * math.sin(theta) * math.sin(phi),
                    (math.cos(theta) - 1) / profile.e,
                ]
            ),
        }

    return GaugePotential(
        "dirac", profile, components, lambda r, t, p: _third(r * float(profile.Phi(r))), strings=(math.pi,)
    )


def schwinger_potential(profile: MonopoleProfile) -> GaugePotential:
    def components(r, theta, phi):
        amp = r * r * float(profile.K(r)) + 1 / profile.e
        return {
            "t": _third(r * float(profile.F(r))),
            "r": np.zeros(3),
            "theta": np.array([0.0, amp, 0.0]),
            "phi": np.array([-amp * math.sin(theta), 0.0, math.cos(theta) / profile.e]),
        }

    return GaugePotential(
        "schwinger", profile, components, lambda r, t, p: _third(r * float(profile.Phi(r))), strings=(0.0, math.pi)
    )


def frame_potential(profile: MonopoleProfile, frame: str) -> GaugePotential:
    builders = {"cartesian": hedgehog_potential, "dirac": dirac_potential, "schwinger": schwinger_potential}
    if frame not in builders:
        raise DomainError(f"unknown frame {frame!r}")
    return builders[frame](profile)


def gauge_transform(potential: GaugePotential, gibbs: GibbsField, frame_to: str | None = None) -> GaugePotential:
    """W′_α = O(c) W_α + (1/e) f(c) ∂_α c; the Higgs triplet rotates."""
    e = potential.profile.e

    def components(r, theta, phi):
        try:
            c = gibbs.at(r, theta, phi)
            rotation = gibbs_rotation(c)
            inhomogeneous = gibbs_inhomogeneous(c)
        except SingularParameterError as err:
            system_logger.error(err, additional_info={"point": (r, theta, phi), "field": gibbs.label})
            raise
        source = potential.at(r, theta, phi)
        partials = gibbs.partials(r, theta, phi)
        out = {}
        for name in COMPONENTS:
            shift = inhomogeneous @ partials.get(name, np.zeros(3)) / e
            out[name] = rotation @ source[name] + shift
        return {k: (v.real if not np.any(np.abs(v.imag) > 0) else v) for k, v in out.items()}

    def higgs(r, theta, phi):
        return gibbs_rotation(gibbs.at(r, theta, phi)) @ potential.higgs_at(r, theta, phi)

    return GaugePotential(frame_to or f"{potential.frame}→{gibbs.label}", potential.profile, components, higgs)


def potential_deviation(left: GaugePotential, right: GaugePotential, r: float, theta: float, phi: float) -> float:
    a, b = left.at(r, theta, phi), right.at(r, theta, phi)
    return max(float(np.max(np.abs(a[k] - b[k]))) for k in COMPONENTS)


# === Field strength and Abelian embedding ===
def field_strength(potential: GaugePotential, r: float, theta: float, phi: float) -> np.ndarray:
    """F_θφ = ∂_θ W_φ − ∂_φ W_θ + e W_θ × W_φ."""
    h, e = settings.GAUGE_FD_STEP, potential.profile.e
    d_w_phi = (potential.at(r, theta + h, phi)["phi"] - potential.at(r, theta - h, phi)["phi"]) / (2 * h)
    d_w_theta = (potential.at(r, theta, phi + h)["theta"] - potential.at(r, theta, phi - h)["theta"]) / (2 * h)
    here = potential.at(r, theta, phi)
    return d_w_phi - d_w_theta + e * np.cross(here["theta"], here["phi"])


def radial_magnetic_field(potential: GaugePotential, r: float, theta: float, phi: float) -> float:
    return float(np.linalg.norm(field_strength(potential, r, theta, phi))) / (r * r * math.sin(theta))


@dataclass(frozen=True)
class AbelianCheck:
    frame: str
    deviation: float
    charge: float

    @property
    def embedded(self) -> bool:
        return self.deviation < 1e-12


def abelian_embedding_check(profile: MonopoleProfile, r: float, theta: float, phi: float, frame: str = "dirac") -> AbelianCheck:
    """Deviation of the frame potential from (0, 0, A_α) with g = 1/e."""
    g = 1 / profile.e
    if frame == "dirac":
        expected_phi = g * (math.cos(theta) - 1)
    elif frame == "schwinger":
        expected_phi = g * math.cos(theta)
    else:
        raise DomainError("Abelian embedding exists in the Dirac and Schwinger frames only")
    actual = frame_potential(profile, frame).at(r, theta, phi)
    expected = {"t": np.zeros(3), "r": np.zeros(3), "theta": np.zeros(3), "phi": _third(expected_phi)}
    deviation = max(float(np.max(np.abs(actual[k] - expected[k]))) for k in COMPONENTS)
    if deviation > 1e-12:
        logger.info("profile %s is not an embedded Abelian monopole (deviation %.3e)", profile.name, deviation)
    return AbelianCheck(frame=frame, deviation=deviation, charge=g)


# === Wave-function gauge maps ===
def u_dirac(phi: float) -> np.ndarray:
    """Schwinger → Dirac map U(φ)."""
    return np.diag([np.exp(-1j * phi), 1.0, np.exp(1j * phi)])


def u_cartesian(theta: float, phi: float) -> np.ndarray:
    """Schwinger → Cartesian map U(θ, φ)."""
    s, c = math.sin(theta), math.cos(theta)
    em, ep = np.exp(-1j * phi), np.exp(1j * phi)
    sq2 = math.sqrt(2.0)
    return np.array(
        [
            [em * (1 + c) / 2, -em * s / sq2, em * (1 - c) / 2],
            [s / sq2, c, -s / sq2],
            [ep * (1 - c) / 2, ep * s / sq2, ep * (1 + c) / 2],
        ],
        dtype=complex,
    )


def u_from_rotation(rotation: np.ndarray) -> np.ndarray:
    return S_CYCLIC @ rotation @ S_CYCLIC_INV


def u_cartesian_from_gibbs(theta: float, phi: float) -> np.ndarray:
    return u_from_rotation(gibbs_rotation(gibbs_to_tetrad(theta, phi)).T)


def u_dirac_from_gibbs(phi: float) -> np.ndarray:
    return u_from_rotation(gibbs_rotation(-gibbs_about_axis3(phi)))


def wavefunction_gauge_map(frame_from: str, frame_to: str, theta: float, phi: float) -> np.ndarray:
    if frame_from == frame_to:
        raise DomainError("frames must be distinct")
    for frame in (frame_from, frame_to):
        if frame not in FRAMES:
            raise DomainError(f"unknown frame {frame!r}")
    from_schwinger = {
        "schwinger": np.eye(3, dtype=complex),
        "dirac": u_dirac(phi),
        "cartesian": u_cartesian(theta, phi),
    }
    return from_schwinger[frame_to] @ np.linalg.inv(from_schwinger[frame_from])
