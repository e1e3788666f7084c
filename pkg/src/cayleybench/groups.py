"""Finitely generated group models with computable normal forms.

Supported families: free(n), free-abelian(k), cyclic(n), and free or direct
products of these.  Every element is stored in a structured canonical value
(reduced word, exponent vector, syllable list, ...) and exposes a canonical
*word*: the ShortLex-least geodesic word over the generating alphabet, with
respect to a total order on generators fixed at model construction.  Word
length therefore equals graph distance from the identity in the Cayley graph,
and the canonical word doubles as the model's chosen geodesic from 1.

Letters are small integers ordered by the generator order (0 is the least
letter).  Internally each letter maps to an "atom" +-(g+1) naming generator g
or its inverse; atoms are order-independent, letters are not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import AlphabetError, ModelMismatchError


# ---------------------------------------------------------------------------
# family descriptors


@dataclass(frozen=True)
class Free:
    rank: int


@dataclass(frozen=True)
class FreeAbelian:
    rank: int


@dataclass(frozen=True)
class Cyclic:
    order: int


@dataclass(frozen=True)
class FreeProduct:
    factors: tuple


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple


Family = Union[Free, FreeAbelian, Cyclic, FreeProduct, DirectProduct]

_ATOMIC = re.compile(r"^(free|free-abelian|cyclic)\((\d+)\)$")


def parse_family(text: str) -> Family:
    """Parse a compositional family expression.

    Examples: ``free(2)``, ``free-abelian(2)``, ``cyclic(6)``,
    ``free-product(free-abelian(1),free-abelian(1))``,
    ``direct-product(free(1),cyclic(4))``.
    """
    text = text.strip()
    m = _ATOMIC.match(text)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "free":
            if n < 1:
                raise AlphabetError("free rank must be >= 1")
            return Free(n)
        if kind == "free-abelian":
            if n < 1:
                raise AlphabetError("free-abelian rank must be >= 1")
            return FreeAbelian(n)
        if n < 1:
            raise AlphabetError("cyclic order must be >= 1")
        return Cyclic(n)
    for kind in ("free-product", "direct-product"):
        prefix = kind + "("
        if text.startswith(prefix) and text.endswith(")"):
            inner = text[len(prefix):-1]
            parts = _split_args(inner)
            if len(parts) < 2:
                raise AlphabetError(f"{kind} needs at least two factors: {text!r}")
            factors = tuple(parse_family(p) for p in parts)
            return FreeProduct(factors) if kind == "free-product" else DirectProduct(factors)
    raise AlphabetError(f"unrecognized family expression: {text!r}")


def _split_args(inner: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    parts.append(inner[start:])
    return [p.strip() for p in parts if p.strip()]


def family_str(fam: Family) -> str:
    if isinstance(fam, Free):
        return f"free({fam.rank})"
    if isinstance(fam, FreeAbelian):
        return f"free-abelian({fam.rank})"
    if isinstance(fam, Cyclic):
        return f"cyclic({fam.order})"
    sep = ",".join(family_str(f) for f in fam.factors)
    name = "free-product" if isinstance(fam, FreeProduct) else "direct-product"
    return f"{name}({sep})"


def _count_generators(fam: Family) -> int:
    if isinstance(fam, (Free, FreeAbelian)):
        return fam.rank
    if isinstance(fam, Cyclic):
        return 1
    return sum(_count_generators(f) for f in fam.factors)


# ---------------------------------------------------------------------------
# engines: canonical values and group arithmetic per family node
#
# Values are nested immutable structures; atoms are +-(g+1) for generator g.


class _FreeEngine:
    __slots__ = ()

    def identity(self):
        return ()

    def length(self, v):
        return len(v)

    def mul(self, a, b):
        i, j = len(a), 0
        nb = len(b)
        while i > 0 and j < nb and a[i - 1] == -b[j]:
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def right_atom(self, v, atom):
        if v and v[-1] == -atom:
            return v[:-1]
        return v + (atom,)

    def left_atom(self, atom, v):
        if v and v[0] == -atom:
            return v[1:]
        return (atom,) + v

    def emit(self, v, letter_of_atom):
        return [letter_of_atom[x] for x in v]


class _AbelianEngine:
    __slots__ = ("rank", "base", "pos")

    def __init__(self, rank: int, base: int):
        self.rank = rank
        self.base = base  # first generator index of this node
        self.pos = {base + i: i for i in range(rank)}

    def identity(self):
        return (0,) * self.rank

    def length(self, v):
        return sum(x if x >= 0 else -x for x in v)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def right_atom(self, v, atom):
        p = self.pos[abs(atom) - 1]
        d = 1 if atom > 0 else -1
        return v[:p] + (v[p] + d,) + v[p + 1:]

    left_atom_impl = None

    def left_atom(self, atom, v):
        return self.right_atom(v, atom)

    def emit(self, v, letter_of_atom):
        out = []
        for i, e in enumerate(v):
            if e == 0:
                continue
            g = self.base + i
            letter = letter_of_atom[g + 1] if e > 0 else letter_of_atom[-(g + 1)]
            out.append((letter, abs(e)))
        out.sort()
        word = []
        for letter, count in out:
            word.extend([letter] * count)
        return word


class _CyclicEngine:
    __slots__ = ("n", "gen")

    def __init__(self, n: int, gen: int):
        self.n = n
        self.gen = gen

    def identity(self):
        return 0

    def length(self, v):
        return min(v, self.n - v) if self.n > 1 else 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def right_atom(self, v, atom):
        return (v + (1 if atom > 0 else -1)) % self.n

    def left_atom(self, atom, v):
        return self.right_atom(v, atom)

    def emit(self, v, letter_of_atom):
        if v == 0 or self.n == 1:
            return []
        plus = letter_of_atom[self.gen + 1]
        minus = letter_of_atom[-(self.gen + 1)]
        m = self.n - v
        if v < m:
            return [plus] * v
        if m < v:
            return [minus] * m
        return [min(plus, minus)] * v


class _FreeProductEngine:
    __slots__ = ("children", "child_of_gen")

    def __init__(self, children, child_of_gen):
        self.children = children
        self.child_of_gen = child_of_gen  # generator index -> child position

    def identity(self):
        return ()

    def length(self, v):
        return sum(self.children[ci].length(cv) for ci, cv in v)

    def mul(self, a, b):
        res = list(a)
        children = self.children
        for ci, cv in b:
            if res and res[-1][0] == ci:
                merged = children[ci].mul(res[-1][1], cv)
                if merged == children[ci].identity():
                    res.pop()
                else:
                    res[-1] = (ci, merged)
            else:
                res.append((ci, cv))
        return tuple(res)

    def inv(self, a):
        return tuple((ci, self.children[ci].inv(cv)) for ci, cv in reversed(a))

    def right_atom(self, v, atom):
        ci = self.child_of_gen[abs(atom) - 1]
        child = self.children[ci]
        if v and v[-1][0] == ci:
            merged = child.right_atom(v[-1][1], atom)
            if merged == child.identity():
                return v[:-1]
            return v[:-1] + ((ci, merged),)
        cv = child.right_atom(child.identity(), atom)
        if cv == child.identity():
            return v
        return v + ((ci, cv),)

    def left_atom(self, atom, v):
        ci = self.child_of_gen[abs(atom) - 1]
        child = self.children[ci]
        if v and v[0][0] == ci:
            merged = child.left_atom(atom, v[0][1])
            if merged == child.identity():
                return v[1:]
            return ((ci, merged),) + v[1:]
        cv = child.left_atom(atom, child.identity())
        if cv == child.identity():
            return v
        return ((ci, cv),) + v

    def emit(self, v, letter_of_atom):
        word = []
        for ci, cv in v:
            word.extend(self.children[ci].emit(cv, letter_of_atom))
        return word


class _DirectProductEngine:
    __slots__ = ("children", "child_of_gen")

    def __init__(self, children, child_of_gen):
        self.children = children
        self.child_of_gen = child_of_gen

    def identity(self):
        return tuple(c.identity() for c in self.children)

    def length(self, v):
        return sum(c.length(cv) for c, cv in zip(self.children, v))

    def mul(self, a, b):
        return tuple(c.mul(x, y) for c, x, y in zip(self.children, a, b))

    def inv(self, a):
        return tuple(c.inv(x) for c, x in zip(self.children, a))

    def right_atom(self, v, atom):
        ci = self.child_of_gen[abs(atom) - 1]
        child = self.children[ci]
        return v[:ci] + (child.right_atom(v[ci], atom),) + v[ci + 1:]

    def left_atom(self, atom, v):
        ci = self.child_of_gen[abs(atom) - 1]
        child = self.children[ci]
        return v[:ci] + (child.left_atom(atom, v[ci]),) + v[ci + 1:]

    def emit(self, v, letter_of_atom):
        # ShortLex merge: factor alphabets are disjoint, so the least head
        # letter among the factor words is always the right next letter.
        queues = [c.emit(cv, letter_of_atom) for c, cv in zip(self.children, v)]
        queues = [q for q in queues if q]
        word = []
        while queues:
            k = min(range(len(queues)), key=lambda i: queues[i][0])
            word.append(queues[k].pop(0))
            if not queues[k]:
                queues.pop(k)
        return word


def _build_engine(fam: Family, base: int):
    """Build the engine tree; returns (engine, generator count)."""
    if isinstance(fam, Free):
        return _FreeEngine(), fam.rank
    if isinstance(fam, FreeAbelian):
        return _AbelianEngine(fam.rank, base), fam.rank
    if isinstance(fam, Cyclic):
        return _CyclicEngine(fam.order, base), 1
    children = []
    child_of_gen = {}
    off = base
    for pos, f in enumerate(fam.factors):
        eng, n = _build_engine(f, off)
        children.append(eng)
        for g in range(off, off + n):
            child_of_gen[g] = pos
        off += n
    cls = _FreeProductEngine if isinstance(fam, FreeProduct) else _DirectProductEngine
    return cls(tuple(children), child_of_gen), off - base


# ---------------------------------------------------------------------------
# elements and models


class Element:
    """Group element in canonical form.

    ``word`` is the ShortLex-least geodesic word as a tuple of letter ids, so
    ``len(word) == length`` is the word length.  Elements compare in ShortLex
    order and hash on (model, value).
    """

    __slots__ = ("model", "value", "word", "length")

    def __init__(self, model: "GroupModel", value):
        self.model = model
        self.value = value
        self.word = tuple(model.engine.emit(value, model._letter_of_atom))
        self.length = len(self.word)

    def shortlex_key(self):
        return (self.length, self.word)

    def inverse(self) -> "Element":
        return Element(self.model, self.model.engine.inv(self.value))

    def is_identity(self) -> bool:
        return self.length == 0

    def __mul__(self, other: "Element") -> "Element":
        return self.model.multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.model.key == other.model.key
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.model.key, self.value))

    def __lt__(self, other):
        return self.shortlex_key() < other.shortlex_key()

    def __le__(self, other):
        return self.shortlex_key() <= other.shortlex_key()

    def __str__(self):
        return self.model.word_str(self.word)

    def __repr__(self):
        return f"Element({self})"


def _default_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"g{i}" for i in range(n)]


class GroupModel:
    """A group family plus a fixed generator order.

    Immutable after construction; safe to share across threads.  The alphabet
    consists of each generator and its formal inverse.  Inverse letters are
    written in upper case (``a`` has inverse ``A``) for models with at most 26
    generators, otherwise ``gI`` / ``GI``.
    """

    def __init__(self, family: Union[Family, str], generator_order: Sequence[str] | None = None):
        if isinstance(family, str):
            family = parse_family(family)
        self.family = family
        self.engine, self.ngens = _build_engine(family, 0)
        gen_names = _default_names(self.ngens)
        inv_names = [s.upper() for s in gen_names]
        self._name_of_atom = {}
        for g in range(self.ngens):
            self._name_of_atom[g + 1] = gen_names[g]
            self._name_of_atom[-(g + 1)] = inv_names[g]
        if generator_order is None:
            ordered = []
            for g in range(self.ngens):
                ordered.extend([g + 1, -(g + 1)])
        else:
            names = list(generator_order)
            expected = sorted(self._name_of_atom.values())
            if sorted(names) != expected:
                raise AlphabetError(
                    f"generator order must be a permutation of {expected}, got {names}"
                )
            atom_of_name = {v: k for k, v in self._name_of_atom.items()}
            ordered = [atom_of_name[s] for s in names]
        self._atoms_by_letter = tuple(ordered)
        self._letter_of_atom = {a: i for i, a in enumerate(ordered)}
        self.letter_names = tuple(self._name_of_atom[a] for a in ordered)
        self.n_letters = len(ordered)
        self.key = family_str(family) + "|" + ",".join(self.letter_names)
        self.identity = Element(self, self.engine.identity())
        self._small_balls: dict[int, tuple] = {}

    # -- construction -------------------------------------------------------

    def element(self, value) -> Element:
        return Element(self, value)

    def generator(self, i: int) -> Element:
        return self.element(self.engine.right_atom(self.engine.identity(), i + 1))

    def atom_of_letter(self, letter: int) -> int:
        return self._atoms_by_letter[letter]

    def inverse_letter(self, letter: int) -> int:
        return self._letter_of_atom[-self._atoms_by_letter[letter]]

    def normalize(self, word: Union[str, Iterable]) -> Element:
        """Canonical form of a word over the alphabet.

        Accepts a compact string like ``"abA"``, a whitespace-separated
        string, a sequence of letter names, or a sequence of letter ids.
        """
        atoms = self._parse_atoms(word)
        eng = self.engine
        v = eng.identity()
        for a in atoms:
            v = eng.right_atom(v, a)
        return Element(self, v)

    def _parse_atoms(self, word) -> list[int]:
        if isinstance(word, str):
            tokens = word.split() if (" " in word or word in ("1", "")) else list(word)
            if tokens == ["1"]:
                tokens = []
        else:
            tokens = list(word)
        atom_of_name = {v: k for k, v in self._name_of_atom.items()}
        atoms = []
        for t in tokens:
            if isinstance(t, int):
                if not 0 <= t < self.n_letters:
                    raise AlphabetError(f"letter id {t} out of range")
                atoms.append(self._atoms_by_letter[t])
            elif t in atom_of_name:
                atoms.append(atom_of_name[t])
            else:
                raise AlphabetError(f"unknown letter {t!r} for model {self.key}")
        return atoms

    # -- arithmetic ---------------------------------------------------------

    def _check(self, a: Element):
        if a.model.key != self.key:
            raise ModelMismatchError(f"element of {a.model.key} used with {self.key}")

    def multiply(self, a: Element, b: Element) -> Element:
        self._check(a)
        self._check(b)
        return Element(self, self.engine.mul(a.value, b.value))

    def inverse(self, a: Element) -> Element:
        self._check(a)
        return Element(self, self.engine.inv(a.value))

    def word_length(self, a: Element) -> int:
        self._check(a)
        return a.length

    def distance(self, a: Element, b: Element) -> int:
        return self.engine.length(self.engine.mul(self.engine.inv(a.value), b.value))

    def distance_values(self, va, vb) -> int:
        return self.engine.length(self.engine.mul(self.engine.inv(va), vb))

    # -- words --------------------------------------------------------------

    def word_str(self, word: Sequence[int]) -> str:
        if not word:
            return "1"
        names = [self.letter_names[i] for i in word]
        if all(len(s) == 1 for s in names):
            return "".join(names)
        return " ".join(names)

    def path_values(self, start_value, word: Sequence[int]) -> list:
        """Vertices of the path from ``start_value`` spelling ``word``."""
        eng = self.engine
        out = [start_value]
        v = start_value
        for letter in word:
            v = eng.right_atom(v, self._atoms_by_letter[letter])
            out.append(v)
        return out

    def small_ball_values(self, radius: int) -> tuple:
        """All values of length <= radius, ShortLex sorted (tiny radii only)."""
        got = self._small_balls.get(radius)
        if got is not None:
            return got
        eng = self.engine
        seen = {eng.identity()}
        frontier = [eng.identity()]
        for _ in range(radius):
            new = []
            for v in frontier:
                for a in self._atoms_by_letter:
                    w = eng.right_atom(v, a)
                    if w not in seen:
                        seen.add(w)
                        new.append(w)
            frontier = new
        ordered = sorted(seen, key=lambda v: (eng.length(v), tuple(eng.emit(v, self._letter_of_atom))))
        result = tuple(ordered)
        self._small_balls[radius] = result
        return result

    def __repr__(self):
        return f"GroupModel({family_str(self.family)})"


# ---------------------------------------------------------------------------
# module-level operation aliases


def normalize(model: GroupModel, word) -> Element:
    return model.normalize(word)


def multiply(a: Element, b: Element) -> Element:
    return a.model.multiply(a, b)


def inverse(a: Element) -> Element:
    return a.model.inverse(a)


def word_length(a: Element) -> int:
    return a.length


def all_geodesic_words(model: GroupModel, g: Element, _memo=None) -> list[tuple[int, ...]]:
    """Every geodesic word spelling ``g``, ShortLex sorted.

    Exponential in general; intended for cross-checks at small length.
    """
    eng = model.engine
    memo: dict = {} if _memo is None else _memo

    def rec(v):
        if v in memo:
            return memo[v]
        n = eng.length(v)
        if n == 0:
            memo[v] = [()]
            return memo[v]
        out = []
        for letter in range(model.n_letters):
            atom = model._atoms_by_letter[letter]
            w = eng.left_atom(-atom, v)
            if eng.length(w) == n - 1:
                out.extend((letter,) + rest for rest in rec(w))
        # distinct letters can denote the same step in degenerate families
        out = sorted(set(out))
        memo[v] = out
        return out

    return rec(g.value)
