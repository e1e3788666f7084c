"""Peripheral subgroups, their cosets, and closed-neighborhood tests.

Two kinds are built in: the trivial subgroup, and the factor subgroups of a
free product.  Both admit an exact left-coset representative: the ShortLex
least minimal-length member of gH.  Factor-subgroup representatives strip the
trailing syllable of the factor, so no ball scan is needed and coset identity
is decidable for every element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PeripheralError
from .groups import Element, FreeProduct, GroupModel


class PeripheralSubgroup:
    """One peripheral subgroup: membership, coset keys, ball sections."""

    index: int
    name: str

    def __init__(self, model: GroupModel, index: int, name: str):
        self.model = model
        self.index = index
        self.name = name

    def contains_value(self, v) -> bool:
        raise NotImplementedError

    def coset_rep_value(self, v):
        """Canonical key of the coset v*H: its ShortLex-least minimal-length member."""
        raise NotImplementedError

    def contains(self, g: Element) -> bool:
        return self.contains_value(g.value)

    def elements_in_ball(self, ball) -> list[int]:
        """Ball indices of the members of H inside the ball."""
        return [i for i, v in enumerate(ball.values) if self.contains_value(v)]

    def __repr__(self):
        return f"PeripheralSubgroup({self.name})"


class TrivialSubgroup(PeripheralSubgroup):
    def contains_value(self, v) -> bool:
        return v == self.model.engine.identity()

    def coset_rep_value(self, v):
        return v


class FreeFactorSubgroup(PeripheralSubgroup):
    """Factor number ``factor`` of a free-product model."""

    def __init__(self, model: GroupModel, index: int, factor: int):
        super().__init__(model, index, f"factor{factor}")
        self.factor = factor

    def contains_value(self, v) -> bool:
        # values of a free-product model are syllable tuples (child, child_value)
        if v == ():
            return True
        return len(v) == 1 and v[0][0] == self.factor

    def coset_rep_value(self, v):
        if v and v[-1][0] == self.factor:
            return v[:-1]
        return v


@dataclass(frozen=True)
class Coset:
    """A left coset gH_i, identified by peripheral index and canonical key."""

    peripheral: int
    key_value: object

    def key_element(self, model: GroupModel) -> Element:
        return Element(model, self.key_value)


class PeripheralStructure:
    """An ordered family of peripheral subgroups of one model."""

    def __init__(self, model: GroupModel, subgroups: list[PeripheralSubgroup], descriptor: str):
        self.model = model
        self.subgroups = tuple(subgroups)
        self.descriptor = descriptor

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> PeripheralSubgroup:
        return self.subgroups[i]

    @property
    def key(self) -> str:
        return f"{self.model.key}#{self.descriptor}"

    def coset_of(self, g: Element, i: int) -> Coset:
        return Coset(i, self.subgroups[i].coset_rep_value(g.value))

    def distance_to_coset(self, v, coset: Coset, sigma_cap: int) -> int | None:
        """Word-metric distance from value v to the coset, if <= sigma_cap."""
        model = self.model
        sub = self.subgroups[coset.peripheral]
        eng = model.engine
        for z in model.small_ball_values(sigma_cap):
            if sub.coset_rep_value(eng.mul(v, z)) == coset.key_value:
                return eng.length(z)
        return None

    def __repr__(self):
        return f"PeripheralStructure({self.descriptor} on {self.model!r})"


def peripheral_structure(model: GroupModel, descriptor: str) -> PeripheralStructure:
    """Build a peripheral structure from a descriptor.

    ``"trivial"``: the single trivial subgroup.
    ``"factors"``: one subgroup per free-product factor (free products only).
    """
    if descriptor == "trivial":
        return PeripheralStructure(model, [TrivialSubgroup(model, 0, "trivial")], descriptor)
    if descriptor == "factors":
        if not isinstance(model.family, FreeProduct):
            raise PeripheralError(
                f"'factors' peripherals need a free-product model, got {model.key}"
            )
        subs = [FreeFactorSubgroup(model, i, i) for i in range(len(model.family.factors))]
        return PeripheralStructure(model, subs, descriptor)
    raise PeripheralError(f"unknown peripheral descriptor {descriptor!r}")
