"""Breadth-first enumeration of word-metric balls.

A :class:`BallIndex` lists every element of length <= r, sphere by sphere,
ShortLex-ordered within each sphere.  Because the previous sphere is scanned
in ShortLex order and letters in ascending order, the BFS parent chain of an
element spells exactly its canonical word; ``word_of_index`` just walks
parents.
"""

from __future__ import annotations

import bisect
from array import array

import numpy as np

from .errors import GeodesicRangeError, ResourceBudgetError
from .groups import Element, GroupModel

DEFAULT_BALL_BUDGET = 5_000_000


class BallIndex:
    """Immutable index of the ball of a given radius."""

    def __init__(self, model: GroupModel, radius: int, values, parent, parent_letter, sphere_offsets):
        self.model = model
        self.radius = radius
        self.values = values
        self.parent = parent
        self.parent_letter = parent_letter
        self.sphere_offsets = sphere_offsets  # len radius+2, offsets[k] = start of sphere k
        self.index = {v: i for i, v in enumerate(values)}
        self._left_tables: dict[int, np.ndarray] = {}
        self._inverse_index = None

    # -- basic queries -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.values)

    def sphere_range(self, k: int) -> range:
        return range(self.sphere_offsets[k], self.sphere_offsets[k + 1])

    def sphere_size(self, k: int) -> int:
        return self.sphere_offsets[k + 1] - self.sphere_offsets[k]

    def sphere_sizes(self) -> list[int]:
        return [self.sphere_size(k) for k in range(self.radius + 1)]

    def growth(self, r: int) -> int:
        if r > self.radius:
            raise GeodesicRangeError(f"radius {r} exceeds enumerated radius {self.radius}")
        return self.sphere_offsets[r + 1]

    def length_of_index(self, i: int) -> int:
        return bisect.bisect_right(self.sphere_offsets, i) - 1

    def element(self, i: int) -> Element:
        return Element(self.model, self.values[i])

    def elements(self):
        return [self.element(i) for i in range(self.size)]

    def contains(self, g: Element) -> bool:
        return g.value in self.index

    def index_of(self, g: Element) -> int:
        try:
            return self.index[g.value]
        except KeyError:
            raise GeodesicRangeError(f"element {g} lies outside the enumerated ball (radius {self.radius})")

    def path_indices(self, i: int) -> list[int]:
        """Indices along the canonical geodesic from the identity to element i."""
        out = []
        while i >= 0:
            out.append(i)
            i = self.parent[i]
        out.reverse()
        return out

    def word_of_index(self, i: int) -> tuple[int, ...]:
        letters = []
        while i > 0:
            letters.append(self.parent_letter[i])
            i = self.parent[i]
        letters.reverse()
        return tuple(letters)

    def canonical_geodesic(self, g: Element) -> str:
        """ShortLex-least geodesic word from 1 to g, as a word string."""
        i = self.index_of(g)
        return self.model.word_str(self.word_of_index(i))

    # -- derived tables ------------------------------------------------------

    def inverse_index(self) -> np.ndarray:
        """index i -> index of the inverse element (inverses stay in the ball)."""
        if self._inverse_index is None:
            eng = self.model.engine
            idx = self.index
            self._inverse_index = np.fromiter(
                (idx[eng.inv(v)] for v in self.values), dtype=np.int64, count=self.size
            )
        return self._inverse_index

    def left_mult_table(self, letter: int) -> np.ndarray:
        """index i -> index of letter * v_i, or -1 if outside the ball."""
        tab = self._left_tables.get(letter)
        if tab is None:
            eng = self.model.engine
            atom = self.model.atom_of_letter(letter)
            idx = self.index
            tab = np.empty(self.size, dtype=np.int64)
            for i, v in enumerate(self.values):
                tab[i] = idx.get(eng.left_atom(atom, v), -1)
            self._left_tables[letter] = tab
        return tab

    def assert_consistent(self):
        """Structural checks used by the test-suite."""
        model = self.model
        eng = model.engine
        assert self.values[0] == eng.identity()
        for k in range(self.radius + 1):
            rng = self.sphere_range(k)
            for i in rng:
                assert eng.length(self.values[i]) == k
                word = self.word_of_index(i)
                assert word == tuple(eng.emit(self.values[i], model._letter_of_atom))
                if i > 0:
                    assert self.length_of_index(self.parent[i]) == k - 1
            words = [self.word_of_index(i) for i in rng]
            assert words == sorted(words)


def enumerate_ball(model: GroupModel, radius: int, budget: int = DEFAULT_BALL_BUDGET) -> BallIndex:
    """BFS the ball of the given radius.

    Raises :class:`ResourceBudgetError` as soon as the element count would
    exceed ``budget``.
    """
    if radius < 0:
        raise GeodesicRangeError("radius must be >= 0")
    eng = model.engine
    atoms = model._atoms_by_letter
    letter_of_atom = model._letter_of_atom
    values = [eng.identity()]
    index = {eng.identity(): 0}
    parent = array("q", [-1])
    parent_letter = array("h", [0])
    offsets = [0, 1]
    prev = range(0, 1)
    for k in range(1, radius + 1):
        found: dict = {}
        total = len(values)
        for i in prev:
            v = values[i]
            for letter, atom in enumerate(atoms):
                w = eng.right_atom(v, atom)
                if w in index or w in found:
                    continue
                found[w] = (i, letter)
                if total + len(found) > budget:
                    raise ResourceBudgetError(
                        f"ball budget exceeded: more than {budget} elements at radius {k} "
                        f"of {model.key}"
                    )
        new = sorted(
            ((tuple(eng.emit(w, letter_of_atom)), w) for w in found),
            key=lambda t: t[0],
        )
        for word, w in new:
            index[w] = len(values)
            values.append(w)
            pi, letter = found[w]
            parent.append(pi)
            parent_letter.append(letter)
        offsets.append(len(values))
        prev = range(offsets[k], offsets[k + 1])
    return BallIndex(model, radius, values, parent, parent_letter, offsets)


def growth_function(model: GroupModel, r: int, ball: BallIndex | None = None,
                    budget: int = DEFAULT_BALL_BUDGET) -> int:
    """f(r): number of elements of word length at most r."""
    if ball is not None and ball.radius >= r:
        return ball.growth(r)
    return enumerate_ball(model, r, budget=budget).size
