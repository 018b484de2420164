"""Deterministic constructors for the small-group test universe.

Names: ``Cn`` cyclic, ``Dn`` dihedral of order ``2n`` (``n >= 3``), ``Q8``,
``Sn`` and ``An`` for ``n <= 5``, ``Ep^k`` elementary abelian, and direct
products joined with ``x`` (``"S3xC2"``, ``"C2xC2xC4"``).  Permutation
groups are built from permutations and cyclic groups from modular
arithmetic, never through coset enumeration.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .errors import GroupError, ResourceLimitError
from .group import FiniteGroup, direct_product

Perm = tuple[int, ...]


def _compose(a: Perm, b: Perm) -> Perm:
    """``a*b`` acting as ``x -> a(b(x))``."""
    return tuple(a[i] for i in b)


def _cycles(p: Perm) -> str:
    seen, parts = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


def from_permutations(gens: Sequence[Perm], degree: int, *, name: str | None = None) -> FiniteGroup:
    """Group generated by permutations of ``range(degree)``.

    Elements are sorted lexicographically, which puts the identity first.
    """
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    cap = config.order_cap()
    if len(elems) > cap:
        raise ResourceLimitError(f"{name} has order {len(elems)} > cap {cap}", limit=cap)
    order = sorted(elems)
    index = {p: i for i, p in enumerate(order)}
    n = len(order)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            mul[i, j] = index[_compose(a, b)]
    gen_idx = []
    for g in gens:
        k = index[g]
        if k and k not in gen_idx:
            gen_idx.append(k)
    return FiniteGroup(mul, gen_idx, [_cycles(p) for p in order], name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, [1] if n > 1 else [],
                       [f"a^{k}" for k in range(n)], name=f"C{n}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise GroupError(f"{p} is not prime")
    G = cyclic(p)
    out = cyclic(1) if k == 0 else G
    for _ in range(k - 1):
        out = direct_product(out, G)
    out.name = f"E{p}^{k}"
    return out


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order ``2n``."""
    if n < 3:
        raise GroupError("dihedral Dn needs n >= 3 (use C2 or C2xC2)")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], n, name=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("Sn supported for 1 <= n <= 5")
    if n == 1:
        return from_permutations([], 1, name="S1")
    cyc = tuple((i + 1) % n for i in range(n))
    tr = (1, 0) + tuple(range(2, n))
    return from_permutations([cyc, tr], n, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("An supported for 1 <= n <= 5")
    if n < 3:
        return from_permutations([], n, name=f"A{n}")
    gens = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
        gens.append(tuple(p))
    return from_permutations(gens, n, name=f"A{n}")


def quaternion() -> FiniteGroup:
    """Q8 on the unit quaternions ``±1, ±i, ±j, ±k``."""
    basis = ["1", "i", "j", "k"]
    # unit products: (sign, index) for basis[a] * basis[b]
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, b) for s in (1, -1) for b in range(4)]
    index = {e: i for i, e in enumerate(elems)}
    mul = np.empty((8, 8), dtype=np.int64)
    for (s1, b1), i in index.items():
        for (s2, b2), j in index.items():
            s, b = table[b1, b2]
            mul[i, j] = index[(s * s1 * s2, b)]
    labels = [("" if s > 0 else "-") + basis[b] for s, b in elems]
    return FiniteGroup(mul, [index[(1, 1)], index[(1, 2)]], labels, name="Q8")


_FACTOR = re.compile(r"^(?:(C)(\d+)|(D)(\d+)|(Q)8|(S)(\d+)|(A)(\d+)|E(\d+)\^(\d+))$")


def _build_factor(tok: str) -> FiniteGroup:
    m = _FACTOR.match(tok)
    if not m:
        raise GroupError(f"unknown group name {tok!r}")
    if m.group(1):
        return cyclic(int(m.group(2)))
    if m.group(3):
        return dihedral(int(m.group(4)))
    if m.group(5):
        return quaternion()
    if m.group(6):
        return symmetric(int(m.group(7)))
    if m.group(8):
        return alternating(int(m.group(9)))
    return elementary_abelian(int(m.group(10)), int(m.group(11)))


@lru_cache(maxsize=None)
def build(name: str) -> FiniteGroup:
    """Build a catalog group by name; repeated calls return the same table."""
    parts = name.split("x")
    if not all(parts):
        raise GroupError(f"unknown group name {name!r}")
    G = _build_factor(parts[0])
    for tok in parts[1:]:
        G = direct_product(G, _build_factor(tok))
    G.name = name
    return G


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    expected_order: int
    builder: Callable[[], FiniteGroup]

    def build(self) -> FiniteGroup:
        G = self.builder()
        if G.order != self.expected_order:
            raise GroupError(f"{self.name}: built order {G.order} != {self.expected_order}")
        return G


_NAMES = [
    ("C1", 1), ("C2", 2), ("C3", 3), ("C4", 4), ("C2xC2", 4), ("C5", 5), ("C6", 6), ("S3", 6),
    ("C7", 7), ("C8", 8), ("C2xC4", 8), ("E2^3", 8), ("D4", 8), ("Q8", 8), ("C9", 9),
    ("C3xC3", 9), ("C10", 10), ("D5", 10), ("C11", 11), ("C12", 12), ("C2xC6", 12),
    ("A4", 12), ("D6", 12), ("C13", 13), ("C14", 14), ("D7", 14), ("C15", 15), ("C16", 16),
    ("C2xC8", 16), ("C4xC4", 16), ("C2xC2xC4", 16), ("E2^4", 16), ("D8", 16),
    ("C2xD4", 16), ("C2xQ8", 16), ("S3xC3", 18), ("D9", 18), ("C3xC6", 18), ("D10", 20),
    ("S4", 24), ("A4xC2", 24), ("D12", 24), ("S3xC2xC2", 24), ("A5", 60), ("S5", 120),
]

CATALOG: dict[str, CatalogEntry] = {
    n: CatalogEntry(n, o, (lambda n=n: build(n))) for n, o in _NAMES
}


def catalog_names(max_order: int | None = None, *, abelian: bool | None = None) -> list[str]:
    """Catalog names in ascending order, optionally filtered."""
    out = []
    for name, entry in CATALOG.items():
        if max_order is not None and entry.expected_order > max_order:
            continue
        if abelian is not None and build(name).is_abelian() != abelian:
            continue
        out.append(name)
    return out
