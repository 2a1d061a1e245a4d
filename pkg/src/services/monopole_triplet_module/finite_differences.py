"""Five-point central stencils for fields on the sphere."""

from typing import Callable

import numpy as np

from src.config.settings import settings
from src.error_trace.exceptions import PoleProximityError

SphereField = Callable[[float, float], np.ndarray]


def central_derivative(f: Callable[[float], np.ndarray], x: float, step: float | None = None) -> np.ndarray:
    h = step or settings.FD_STEP
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def d_theta(field: SphereField, theta: float, phi: float, step: float | None = None) -> np.ndarray:
    return central_derivative(lambda t: np.asarray(field(t, phi)), theta, step)


def d_phi(field: SphereField, theta: float, phi: float, step: float | None = None) -> np.ndarray:
    return central_derivative(lambda p: np.asarray(field(theta, p)), phi, step)


def guard_pole(theta: float, guard: float | None = None) -> None:
    guard = settings.POLE_GUARD if guard is None else guard
    if min(abs(theta), abs(np.pi - theta)) < guard:
        raise PoleProximityError(f"θ={theta!r} is within {guard} of a pole")
