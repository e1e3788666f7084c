"""Versioned textual ball cache with bit-exact reload.

Format: a tab-separated header line

    cayleybench-ball 1 <family> <letters> <radius> <count>

followed by one line per element: canonical word ("1" for the identity),
length, and parent rank.  The element count in the header guards against
truncation; parent ranks and per-sphere ShortLex order are revalidated on
load.
"""

from __future__ import annotations

from array import array
from pathlib import Path

from .balls import BallIndex
from .errors import CacheIntegrityError
from .groups import GroupModel

_MAGIC = "cayleybench-ball"
_VERSION = "1"


def save_ball(ball: BallIndex, path) -> str:
    model = ball.model
    lines = ["\t".join([
        _MAGIC, _VERSION,
        model.key.split("|")[0],
        ",".join(model.letter_names),
        str(ball.radius),
        str(ball.size),
    ])]
    for i in range(ball.size):
        word = model.word_str(ball.word_of_index(i))
        lines.append(f"{word}\t{ball.length_of_index(i)}\t{ball.parent[i]}")
    Path(path).write_text("\n".join(lines) + "\n")
    return str(path)


def load_ball(path, model: GroupModel | None = None) -> BallIndex:
    """Reload a cached ball; rejects version, descriptor, or order mismatches
    and raises :class:`CacheIntegrityError` on any corruption."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise CacheIntegrityError(f"{path}: empty cache file")
    header = lines[0].split("\t")
    if len(header) != 6 or header[0] != _MAGIC:
        raise CacheIntegrityError(f"{path}: not a ball cache file")
    if header[1] != _VERSION:
        raise CacheIntegrityError(f"{path}: unsupported version {header[1]!r}")
    family, letters, radius_s, count_s = header[2], header[3], header[4], header[5]
    try:
        radius = int(radius_s)
        count = int(count_s)
    except ValueError:
        raise CacheIntegrityError(f"{path}: malformed header")
    if model is None:
        model = GroupModel(family, generator_order=letters.split(","))
    else:
        if model.key.split("|")[0] != family:
            raise CacheIntegrityError(
                f"{path}: family mismatch: file has {family!r}, model is {model.key!r}")
        if ",".join(model.letter_names) != letters:
            raise CacheIntegrityError(
                f"{path}: generator order mismatch: file has {letters!r}")
    body = lines[1:]
    if len(body) != count:
        raise CacheIntegrityError(
            f"{path}: truncated or padded: header says {count} elements, found {len(body)}")
    eng = model.engine
    letter_ids = {name: i for i, name in enumerate(model.letter_names)}
    values = []
    index = {}
    parent = array("q")
    parent_letter = array("h")
    offsets = [0]
    prev_len = -1
    prev_word: tuple = ()
    for n, line in enumerate(body):
        parts = line.split("\t")
        if len(parts) != 3:
            raise CacheIntegrityError(f"{path}: malformed line {n + 2}")
        word_s, len_s, parent_s = parts
        try:
            length = int(len_s)
            parent_rank = int(parent_s)
        except ValueError:
            raise CacheIntegrityError(f"{path}: malformed line {n + 2}")
        if word_s == "1":
            word = ()
        else:
            try:
                word = tuple(letter_ids[ch] for ch in (
                    word_s.split() if " " in word_s else word_s))
            except KeyError as exc:
                raise CacheIntegrityError(f"{path}: unknown letter {exc} on line {n + 2}")
        if len(word) != length:
            raise CacheIntegrityError(f"{path}: length mismatch on line {n + 2}")
        value = eng.identity()
        for letter in word:
            value = eng.right_atom(value, model.atom_of_letter(letter))
        if value in index:
            raise CacheIntegrityError(f"{path}: duplicate element on line {n + 2}")
        if length > prev_len:
            if length != prev_len + 1:
                raise CacheIntegrityError(f"{path}: sphere gap at line {n + 2}")
            offsets.append(n)
            prev_len = length
            prev_word = ()
        elif length < prev_len:
            raise CacheIntegrityError(f"{path}: lengths out of order at line {n + 2}")
        if length == prev_len and word <= prev_word and n > 0 and length > 0:
            raise CacheIntegrityError(f"{path}: sphere not ShortLex sorted at line {n + 2}")
        prev_word = word
        if n == 0:
            if word != () or parent_rank != -1:
                raise CacheIntegrityError(f"{path}: first element must be the identity")
            parent.append(-1)
            parent_letter.append(0)
        else:
            if not (0 <= parent_rank < n):
                raise CacheIntegrityError(f"{path}: parent rank out of range on line {n + 2}")
            if tuple(word[:-1]) != _word_of(values, parent, parent_letter, parent_rank):
                raise CacheIntegrityError(f"{path}: parent chain mismatch on line {n + 2}")
            parent.append(parent_rank)
            parent_letter.append(word[-1])
        index[value] = n
        values.append(value)
    offsets = offsets[1:] + [len(values)]
    while len(offsets) < radius + 2:
        offsets.append(len(values))  # empty outer spheres of a finite group
    if len(offsets) != radius + 2:
        raise CacheIntegrityError(f"{path}: radius {radius} does not match sphere count")
    return BallIndex(model, radius, values, parent, parent_letter, offsets)


def _word_of(values, parent, parent_letter, i) -> tuple:
    letters = []
    while i > 0:
        letters.append(parent_letter[i])
        i = parent[i]
    letters.reverse()
    return tuple(letters)


def cache_filename(model: GroupModel, radius: int) -> str:
    slug = model.key.replace("|", "_").replace("(", "").replace(")", "")
    slug = slug.replace(",", "-").replace(" ", "")
    return f"{slug}_r{radius}.ball"
