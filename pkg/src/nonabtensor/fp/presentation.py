"""Words and finite presentations.

A word is a tuple of nonzero ints: ``+(i+1)`` is generator ``i`` and
``-(i+1)`` its inverse.  Large presentations keep their relators in a
zero-padded int32 array so they never round-trip through Python tuples.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from ..errors import GroupError

Word = tuple[int, ...]


def gen(i: int) -> int:
    return i + 1


def inv_letter(i: int) -> int:
    return -(i + 1)


def word_inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_canonical(w: Iterable[int]) -> Word:
    """Least rotation of the cyclically reduced form of ``w`` or of its inverse.

    Two relators with the same canonical form are conjugates of each other
    or of each other's inverse, so they define the same normal subgroup.
    """
    r = list(free_reduce(w))
    while len(r) > 1 and r[0] == -r[-1]:
        r = r[1:-1]
    if not r:
        return ()
    best = None
    for x in (r, [-c for c in reversed(r)]):
        for i in range(len(x)):
            cand = tuple(x[i:] + x[:i])
            if best is None or cand < best:
                best = cand
    return best


def commutator_word(u: Sequence[int], v: Sequence[int]) -> Word:
    """``u v u^-1 v^-1``."""
    return tuple(u) + tuple(v) + word_inverse(u) + word_inverse(v)


def _pad(words: Sequence[Sequence[int]]) -> np.ndarray:
    width = max((len(w) for w in words), default=0)
    arr = np.zeros((len(words), max(width, 1)), dtype=np.int32)
    for r, w in enumerate(words):
        arr[r, : len(w)] = w
    return arr


class Presentation:
    """``< x_0 .. x_{k-1} | relators >``.

    ``relators`` may be a sequence of words or a padded 2-D int array.
    Empty relators are dropped.
    """

    def __init__(self, num_gens: int, relators: Sequence[Sequence[int]] | np.ndarray = ()):
        if num_gens < 0:
            raise GroupError("num_gens must be non-negative")
        self.num_gens = int(num_gens)
        if isinstance(relators, np.ndarray):
            arr = np.ascontiguousarray(relators, dtype=np.int32)
            if arr.ndim != 2:
                raise GroupError("relator array must be 2-D")
        else:
            arr = _pad([tuple(int(x) for x in w) for w in relators])
        if arr.size and (np.abs(arr).max() > self.num_gens):
            raise GroupError("relator references a generator out of range")
        arr = arr[(arr != 0).any(axis=1)] if arr.shape[0] else arr
        self.relator_array = arr
        self.relator_array.setflags(write=False)

    @property
    def relators(self) -> list[Word]:
        return [tuple(int(x) for x in row if x != 0) for row in self.relator_array]

    def __len__(self) -> int:
        return self.relator_array.shape[0]

    def __repr__(self) -> str:
        return f"Presentation(num_gens={self.num_gens}, relators={len(self)})"

    def check_word(self, w: Sequence[int]) -> Word:
        w = tuple(int(x) for x in w)
        for x in w:
            if x == 0 or abs(x) > self.num_gens:
                raise GroupError(f"malformed word {w!r} for {self.num_gens} generators")
        return w

    def with_relators(self, extra: Sequence[Sequence[int]] | np.ndarray) -> Presentation:
        ex = extra if isinstance(extra, np.ndarray) else _pad([tuple(w) for w in extra])
        a, b = self.relator_array, ex
        width = max(a.shape[1] if a.size else 1, b.shape[1] if b.size else 1)
        out = np.zeros((a.shape[0] + b.shape[0], width), dtype=np.int32)
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, : b.shape[1]] = b
        return Presentation(self.num_gens, out)


def letters_to_columns(arr: np.ndarray) -> np.ndarray:
    """Signed letters to column codes (``2i`` / ``2i+1``); padding becomes -1."""
    a = arr.astype(np.int64)
    return np.where(a > 0, 2 * (a - 1), np.where(a < 0, 2 * (-a - 1) + 1, -1)).astype(np.int32)
