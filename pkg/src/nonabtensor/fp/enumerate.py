"""Todd-Coxeter coset enumeration and realization of finite presentations."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .. import config
from ..errors import GroupError, ResourceLimitError
from ..group import FiniteGroup
from . import _kernel
from .presentation import Presentation, Word, free_reduce, letters_to_columns


@dataclass(frozen=True)
class EnumerationOutcome:
    """Result of one enumeration.

    On success ``table[c, 2*i]`` is the coset ``c . x_i`` and
    ``table[c, 2*i + 1]`` is ``c . x_i^-1``; coset 0 is the subgroup.
    """

    index: int | None
    table: np.ndarray | None = field(repr=False)
    limit: int
    defined: int
    coincidences: int

    @property
    def exceeded(self) -> bool:
        return self.index is None

    @property
    def perm_rep(self) -> list[np.ndarray]:
        if self.table is None:
            raise ResourceLimitError("enumeration did not complete", kind="cosets", limit=self.limit)
        return [self.table[:, 2 * i] for i in range(self.table.shape[1] // 2)]

    def act(self, coset: int, word: Sequence[int]) -> int:
        c = coset
        for x in word:
            c = int(self.table[c, 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1])
        return c


def _compile_relators(P: Presentation):
    """Reduce relators and index all their cyclic conjugates by first letter."""
    ncols = 2 * P.num_gens
    arr = P.relator_array
    if arr.shape[0] == 0:
        empty = np.zeros(0, dtype=np.int32)
        return (empty, np.zeros(0, np.int64), np.zeros(0, np.int64),
                np.zeros(ncols + 1, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64))
    cols = letters_to_columns(arr)
    lengths = (arr != 0).sum(axis=1)
    lens = _kernel.reduce_words(cols, lengths)
    conj_blocks, rel_blocks = [], []
    for L in np.unique(lens):
        if L == 0:
            continue
        R = np.unique(cols[lens == L, :L], axis=0)
        rel_blocks.append(R)
        Rinv = R[:, ::-1] ^ 1
        rots = [np.roll(W, -s, axis=1) for W in (R, Rinv) for s in range(L)]
        conj_blocks.append(np.unique(np.concatenate(rots), axis=0))
    letters, offs, lns, first = [], [], [], []
    pos = 0
    for B in conj_blocks:
        n, L = B.shape
        letters.append(B.ravel())
        offs.append(pos + L * np.arange(n))
        lns.append(np.full(n, L))
        first.append(B[:, 0])
        pos += n * L
    n_conj = sum(len(f) for f in first)
    rel_ids = []
    for B in rel_blocks:
        n, L = B.shape
        letters.append(B.ravel())
        offs.append(pos + L * np.arange(n))
        lns.append(np.full(n, L))
        pos += n * L
    letters = np.concatenate(letters).astype(np.int32)
    offs = np.concatenate(offs).astype(np.int64)
    lns = np.concatenate(lns).astype(np.int64)
    rel_ids = np.arange(n_conj, len(offs), dtype=np.int64)
    first = np.concatenate(first) if first else np.zeros(0, np.int32)
    order = np.argsort(first, kind="stable").astype(np.int64)
    counts = np.bincount(first, minlength=ncols)
    col_start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return letters, offs, lns, col_start, order, rel_ids


def todd_coxeter(
    P: Presentation,
    sub_gens: Sequence[Sequence[int]] = (),
    limit: int = config.DEFAULT_COSET_LIMIT,
    strategy: str = "felsch",
) -> EnumerationOutcome:
    """Enumerate the cosets of ``<sub_gens>`` in the group presented by ``P``.

    ``felsch``: each new coset fills the first undefined entry of the
    lowest live row, and every deduction is scanned against all relator
    conjugates starting with its letter.  ``hlt``: cosets are taken in
    order and every relator is scanned and filled at each; this is much
    faster for many short relators but may define more cosets.  Both are
    deterministic for identical input.
    Returns an outcome with ``index=None`` when more than ``limit`` cosets
    would be needed; ``limit`` is lowered if the table would not fit in
    ``config.TABLE_BYTES_BUDGET``.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    if strategy not in ("felsch", "hlt"):
        raise ValueError(f"unknown enumeration strategy {strategy!r}")
    subs = [free_reduce(P.check_word(w)) for w in sub_gens]
    subs = [w for w in subs if w]
    ncols = 2 * P.num_gens
    if ncols == 0:
        return EnumerationOutcome(1, np.zeros((1, 0), dtype=np.int32), limit, 1, 0)
    limit = min(limit, max(1, config.TABLE_BYTES_BUDGET // (4 * ncols)))
    letters, offs, lns, col_start, col_ids, rel_ids = _compile_relators(P)
    if subs:
        sub_cols = letters_to_columns(np.array([x for w in subs for x in w], dtype=np.int32))
        sub_lens = np.array([len(w) for w in subs], dtype=np.int64)
        sub_offs = np.concatenate([[0], np.cumsum(sub_lens)[:-1]]).astype(np.int64)
    else:
        sub_cols = np.zeros(0, dtype=np.int32)
        sub_lens = np.zeros(0, dtype=np.int64)
        sub_offs = np.zeros(0, dtype=np.int64)
    if strategy == "felsch":
        status, table, live, defined, coinc = _kernel.felsch(
            ncols, letters, offs, lns, col_start, col_ids, rel_ids,
            sub_cols, sub_offs, sub_lens, int(limit))
    else:
        status, table, live, defined, coinc = _kernel.hlt(
            ncols, letters, offs, lns, rel_ids, sub_cols, sub_offs, sub_lens, int(limit))
    if status != _kernel.OK:
        return EnumerationOutcome(None, None, limit, int(defined), int(coinc))
    return EnumerationOutcome(int(live), table, limit, int(defined), int(coinc))


def standardize(table: np.ndarray, *, with_map: bool = False):
    """Renumber cosets in breadth-first order from coset 0.

    Returns ``(table, parent, letter)`` where coset ``d > 0`` was first
    reached as ``parent[d] . column letter[d]``, plus the old-to-new
    renumbering when ``with_map`` is set.
    """
    n, ncols = table.shape
    order = [0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    i = 0
    while i < len(order):
        c = order[i]
        row = table[c]
        for x in range(ncols):
            d = int(row[x])
            if not seen[d]:
                seen[d] = True
                parent[d] = c
                letter[d] = x
                order.append(d)
        i += 1
    order = np.array(order, dtype=np.int64)
    if len(order) != n:
        raise GroupError("coset table is not transitive")
    new = np.empty(n, dtype=np.int64)
    new[order] = np.arange(n)
    t2 = new[table[order]]
    out = (t2.astype(np.int32), new[parent[order][1:]], letter[order][1:])
    return (*out, new) if with_map else out


def regular_cayley_table(table: np.ndarray, parent: np.ndarray, letter: np.ndarray) -> np.ndarray:
    """Cayley table of a group from a standardized regular coset table."""
    n = table.shape[0]
    dt = np.int16 if n < 2**15 else np.int32
    mul = np.empty((n, n), dtype=dt)
    mul[:, 0] = np.arange(n)
    for d in range(1, n):
        mul[:, d] = table[mul[:, parent[d - 1]], letter[d - 1]]
    return mul


class WordEvaluator:
    """Evaluates words of a presentation as elements of its realization."""

    def __init__(self, table: np.ndarray):
        self.table = table
        self.num_gens = table.shape[1] // 2
        self.generator_images = table[0, 0::2].astype(np.int64)

    def __call__(self, word: Sequence[int]) -> int:
        c = 0
        for x in word:
            if x == 0 or abs(x) > self.num_gens:
                raise GroupError(f"malformed letter {x}")
            c = int(self.table[c, 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1])
        return c


def realize_group(
    P: Presentation,
    limit: int = config.DEFAULT_COSET_LIMIT,
    *,
    order_cap: int | None = None,
    name: str | None = None,
) -> tuple[FiniteGroup, WordEvaluator]:
    """Build the Cayley table of the finite group presented by ``P``."""
    out = todd_coxeter(P, (), limit)
    if out.exceeded:
        raise ResourceLimitError(
            f"coset enumeration exceeded {limit} cosets", kind="cosets", limit=limit)
    return group_from_regular_table(out.table, order_cap=order_cap, name=name)


def group_from_regular_table(table: np.ndarray, *, order_cap: int | None = None,
                             name: str | None = None) -> tuple[FiniteGroup, WordEvaluator]:
    cap = config.order_cap() if order_cap is None else order_cap
    n = table.shape[0]
    if n > cap:
        raise ResourceLimitError(f"group of order {n} exceeds order cap {cap}", limit=cap)
    t, parent, letter = standardize(table)
    mul = regular_cayley_table(t, parent, letter)
    ev = WordEvaluator(t)
    gens = []
    for g in ev.generator_images:
        g = int(g)
        if g != 0 and g not in gens:
            gens.append(g)
    G = FiniteGroup(mul, gens, name=name, validate=False, order_cap=cap)
    return G, ev


def presentation_of(G: FiniteGroup) -> Presentation:
    """Multiplication-table presentation: one generator per element."""
    n = G.order
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    c = G.mul[a, b].astype(np.int64)
    rels = np.stack([a + 1, b + 1, -(c + 1)], axis=1).astype(np.int32)
    return Presentation(n, rels)


def relator_violations(out: EnumerationOutcome, P: Presentation) -> list[tuple[Word, int]]:
    """Pairs ``(relator, coset)`` where a relator fails to fix a coset."""
    bad = []
    for r in P.relators:
        for c in range(out.index):
            if out.act(c, r) != c:
                bad.append((r, c))
                break
    return bad


def first_relator_failure(table: np.ndarray, P: Presentation) -> tuple[int, int] | None:
    """First ``(relator row, coset)`` where a relator of ``P`` moves a coset."""
    arr = P.relator_array
    cols = letters_to_columns(arr)
    lengths = (arr != 0).sum(axis=1).astype(np.int64)
    r, c = _kernel.first_failure(np.ascontiguousarray(table, dtype=np.int32), cols, lengths)
    return None if r < 0 else (int(r), int(c))
