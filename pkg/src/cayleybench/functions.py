"""Finitely supported functions on a group, with exact sparse convolution.

Values are exact rationals (``fractions.Fraction`` or int) for the nonneg and
real domains, or Python complex for the complex domain.  Convolution over
rational inputs is exact; norms of rational functions have exact squares.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .errors import ModelMismatchError, WorkbenchError
from .groups import Element, GroupModel

_DOMAINS = ("nonneg", "real", "complex")


class FiniteFunction:
    """Sparse map Element -> value; zero entries are dropped."""

    __slots__ = ("model", "values", "domain")

    def __init__(self, model: GroupModel, values: Mapping[Element, object], domain: str = "nonneg"):
        if domain not in _DOMAINS:
            raise WorkbenchError(f"unknown value domain {domain!r}")
        self.model = model
        self.domain = domain
        cleaned = {}
        for el, v in values.items():
            if el.model.key != model.key:
                raise ModelMismatchError("function entry from a different model")
            if v == 0:
                continue
            if domain == "nonneg":
                if isinstance(v, complex) or v < 0:
                    raise WorkbenchError(f"negative value {v!r} in a nonneg function")
            elif domain == "real" and isinstance(v, complex):
                raise WorkbenchError("complex value in a real function")
            cleaned[el] = v
        self.values = cleaned

    # -- constructors --------------------------------------------------------

    @staticmethod
    def delta(g: Element, value=1) -> "FiniteFunction":
        domain = "nonneg" if not isinstance(value, complex) and value >= 0 else "real"
        return FiniteFunction(g.model, {g: value}, domain)

    @staticmethod
    def sphere_indicator(ball, r: int) -> "FiniteFunction":
        model = ball.model
        vals = {ball.element(i): Fraction(1) for i in ball.sphere_range(r)}
        return FiniteFunction(model, vals, "nonneg")

    # -- queries -------------------------------------------------------------

    def support(self) -> list[Element]:
        return sorted(self.values, key=lambda e: e.shortlex_key())

    def items_sorted(self):
        return [(e, self.values[e]) for e in self.support()]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, g: Element):
        return self.values.get(g, 0)

    def is_zero(self) -> bool:
        return not self.values

    def max_length(self) -> int:
        return max((e.length for e in self.values), default=0)

    def norm_sq(self):
        """Sum of squared magnitudes; exact when values are rational."""
        if self.domain == "complex":
            return sum((v.real * v.real + v.imag * v.imag) if isinstance(v, complex) else v * v
                       for v in self.values.values())
        return sum(v * v for v in self.values.values())

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))

    def l1(self):
        if self.domain == "complex":
            return sum(abs(v) for v in self.values.values())
        return sum(v if v >= 0 else -v for v in self.values.values())

    def scaled(self, c) -> "FiniteFunction":
        domain = self.domain
        if isinstance(c, complex):
            domain = "complex"
        elif c < 0 and domain == "nonneg":
            domain = "real"
        return FiniteFunction(self.model, {e: v * c for e, v in self.values.items()}, domain)

    def as_floats(self) -> "FiniteFunction":
        if self.domain == "complex":
            return self
        return FiniteFunction(self.model, {e: float(v) for e, v in self.values.items()}, self.domain)

    def __eq__(self, other):
        return (isinstance(other, FiniteFunction) and self.model.key == other.model.key
                and self.values == other.values)

    def __repr__(self):
        entries = ", ".join(f"{e}:{v}" for e, v in self.items_sorted()[:6])
        more = "..." if len(self.values) > 6 else ""
        return f"FiniteFunction({{{entries}{more}}})"


def convolve(x: FiniteFunction, y: FiniteFunction) -> FiniteFunction:
    """(x*y)(g) = sum over hk = g of x(h) y(k); exact sparse accumulation."""
    if x.model.key != y.model.key:
        raise ModelMismatchError("convolution of functions on different models")
    model = x.model
    eng = model.engine
    acc: dict = {}
    for h, xv in x.values.items():
        hv = h.value
        for k, yv in y.values.items():
            g = eng.mul(hv, k.value)
            acc[g] = acc.get(g, 0) + xv * yv
    domain = "complex" if "complex" in (x.domain, y.domain) else (
        "nonneg" if x.domain == y.domain == "nonneg" else "real")
    return FiniteFunction(model, {Element(model, v): c for v, c in acc.items() if c != 0}, domain)


def restrict_sphere(f: FiniteFunction, p: int) -> FiniteFunction:
    """The part of f supported on the sphere of radius p."""
    return FiniteFunction(f.model, {e: v for e, v in f.values.items() if e.length == p}, f.domain)
