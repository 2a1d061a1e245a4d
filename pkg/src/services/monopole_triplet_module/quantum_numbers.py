"""Exact half-integer quantum numbers and the fixed branch for (−1)^x phases."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from src.error_trace.exceptions import DomainError

HalfIntLike = Union["HalfInt", int, float, str, Fraction]


@dataclass(frozen=True, order=True)
class HalfInt:
    """A value x stored as the integer 2x."""

    twice: int

    @classmethod
    def of(cls, value: HalfIntLike) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            text = value.strip()
            if not text:
                raise DomainError("empty half-integer")
            try:
                value = Fraction(text)
            except ValueError as e:
                raise DomainError(f"not a half-integer: {text!r}") from e
        frac = Fraction(value).limit_denominator(1000) if isinstance(value, float) else Fraction(value)
        doubled = 2 * frac
        if doubled.denominator != 1:
            raise DomainError(f"not a half-integer: {value}")
        return cls(int(doubled))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __radd__(self, other: HalfIntLike) -> "HalfInt":
        return self + other

    def __sub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt.of(other) - self

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"


def half(value: HalfIntLike) -> HalfInt:
    return HalfInt.of(value)


def weights(j: HalfIntLike) -> list[HalfInt]:
    """Projections j, j−1, ..., −j."""
    j = HalfInt.of(j)
    return [HalfInt(t) for t in range(j.twice, -j.twice - 1, -2)]


def check_projection(j: HalfIntLike, m: HalfIntLike, label: str = "m") -> tuple[HalfInt, HalfInt]:
    j, m = HalfInt.of(j), HalfInt.of(m)
    if j.twice < 0:
        raise DomainError(f"negative weight j={j}")
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise DomainError(f"{label}={m} is not a projection of j={j}")
    return j, m


def branch_phase(x: HalfIntLike | float) -> complex:
    """e^{iπx}; exact ±1, ±i on the half-integer lattice."""
    if isinstance(x, HalfInt):
        return complex((1, 1j, -1, -1j)[x.twice % 4])
    if isinstance(x, (int, Fraction, str)):
        x = Fraction(x)
        if (2 * x).denominator == 1:
            return complex((1, 1j, -1, -1j)[int(2 * x) % 4])
        return cmath.exp(1j * math.pi * float(x))
    doubled = 2 * float(x)
    if math.isclose(doubled, round(doubled), abs_tol=1e-15):
        return complex((1, 1j, -1, -1j)[int(round(doubled)) % 4])
    return cmath.exp(1j * math.pi * float(x))
