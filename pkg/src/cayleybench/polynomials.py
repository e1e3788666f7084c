"""Polynomial bounds with exact coefficient arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class PolynomialBound:
    """Coefficients in ascending degree, plus a role tag for reports."""

    coeffs: tuple
    role: str = ""

    def __call__(self, r) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * r + float(c)
        return acc

    def degree(self) -> int:
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0:
            d -= 1
        return d

    def to_payload(self) -> dict:
        return {"role": self.role, "coeffs": [float(c) for c in self.coeffs]}


def _poly_add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _poly_shift(a: Sequence, s) -> list:
    """Coefficients of p(r + s)."""
    out = [0] * len(a)
    # Horner in (r + s): p(r+s) = ((c_n (r+s) + c_{n-1}) (r+s) + ...)
    acc: list = []
    for c in reversed(a):
        acc = _poly_add(_poly_mul(acc, [s, 1]), [c]) if acc else [c]
    out[: len(acc)] = acc
    return out


def assemble_p(peripheral_bounds: Sequence[PolynomialBound], kappa: int) -> PolynomialBound:
    """Compose the global bound 1 + sum_i P_i(r + 2*kappa)^2, expanded."""
    total: list = [Fraction(1)]
    for pb in peripheral_bounds:
        coeffs = [Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**12)
                  for c in pb.coeffs]
        shifted = _poly_shift(coeffs, Fraction(2 * kappa))
        total = _poly_add(total, _poly_mul(shifted, shifted))
    return PolynomialBound(tuple(total), role="assembled")


def linear_envelope_poly(values: Sequence[float], role: str) -> PolynomialBound:
    """Degree-1 polynomial through (0, values[0]) dominating values[r] at each r.

    Used for dominating sqrt-growth style sequences: intercept values[0],
    slope the max per-step requirement.
    """
    if not values:
        return PolynomialBound((0,), role=role)
    intercept = values[0]
    slope = 0.0
    for r, v in enumerate(values):
        if r > 0:
            slope = max(slope, (v - intercept) / r)
    return PolynomialBound((intercept, slope), role=role)
