"""Finite groups as Cayley tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Everything here is immutable after construction; tables are numpy arrays
so that whole-group scans vectorize.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import config
from .errors import GroupError, ResourceLimitError


def _index_dtype(order: int):
    return np.int16 if order < 2**15 else np.int32


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the product ``a*b``.  ``gens`` must generate the group.
    Construction validates the table; pass ``validate=False`` only for
    tables that are groups by construction (e.g. regular representations
    produced by coset enumeration), in which case only cheap checks run.
    """

    def __init__(
        self,
        mul,
        gens: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
        *,
        name: str | None = None,
        validate: bool = True,
        order_cap: int | None = None,
    ):
        mul = np.asarray(mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise GroupError(f"multiplication table must be a non-empty square, got shape {mul.shape}")
        n = mul.shape[0]
        cap = config.order_cap() if order_cap is None else order_cap
        if n > cap:
            raise ResourceLimitError(f"group of order {n} exceeds order cap {cap}", limit=cap)
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("multiplication table has entries out of range")
        self.mul = np.ascontiguousarray(mul, dtype=_index_dtype(n))
        self.mul.setflags(write=False)
        self.order = n
        self.identity = 0
        self.name = name
        self.labels = None if labels is None else tuple(str(s) for s in labels)
        if self.labels is not None and len(self.labels) != n:
            raise GroupError(f"expected {n} labels, got {len(self.labels)}")
        if not (np.array_equal(self.mul[0], np.arange(n)) and np.array_equal(self.mul[:, 0], np.arange(n))):
            raise GroupError("element 0 is not a two-sided identity")
        pos = np.argwhere(self.mul == 0)
        if pos.shape[0] != n or len(np.unique(pos[:, 0])) != n:
            raise GroupError("table rows do not each contain the identity exactly once")
        inv = np.empty(n, dtype=self.mul.dtype)
        inv[pos[:, 0]] = pos[:, 1]
        if not np.array_equal(self.mul[inv, np.arange(n)], np.zeros(n)):
            raise GroupError("right inverse is not a left inverse")
        self.inv = inv
        self.inv.setflags(write=False)
        if gens is None:
            gens = range(1, n)
        self.gens = tuple(int(g) for g in gens)
        if any(g < 0 or g >= n for g in self.gens):
            raise GroupError("generator index out of range")
        if validate:
            self.validate()

    # -- validation ---------------------------------------------------------

    def validate(self, assoc_cap: int = config.ASSOC_CHECK_CAP) -> None:
        """Check the group axioms.

        Latin-square rows and columns, generation by ``gens``, and full
        associativity over all triples when ``order <= assoc_cap``.
        """
        n = self.order
        ar = np.arange(n)
        for axis in (0, 1):
            s = np.sort(self.mul, axis=axis)
            if not np.all(s == (ar[:, None] if axis == 0 else ar[None, :])):
                raise GroupError("multiplication table is not a latin square")
        if n <= assoc_cap:
            bad = find_nonassociative(self.mul)
            if bad is not None:
                raise GroupError(f"multiplication is not associative at {bad}")
        if len(_closure_mask(self, self.gens).nonzero()[0]) != n:
            raise GroupError("gens do not generate the group")

    # -- element operations -------------------------------------------------

    def _check(self, *elts: int) -> None:
        for x in elts:
            if not 0 <= x < self.order:
                raise IndexError(f"element {x} out of range for group of order {self.order}")

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        r = 0
        for _ in range(k):
            r = int(self.mul[r, a])
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, int(a)
        while x != 0:
            x = int(self.mul[x, a])
            k += 1
        return k

    def commutator_table(self) -> np.ndarray:
        """``t[g, h] = g h g^-1 h^-1`` for all pairs."""
        return self.mul[self.mul[self.mul, self.inv[:, None]], self.inv[None, :]]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    # -- convenience --------------------------------------------------------

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def whole(self) -> Subgroup:
        return Subgroup(self, range(self.order), self.gens)

    def trivial(self) -> Subgroup:
        return Subgroup(self, [0], [])

    def center(self) -> Subgroup:
        g = list(self.gens)
        if not g:
            return self.whole()
        mask = np.all(self.mul[:, g] == self.mul[g, :].T, axis=1)
        return Subgroup(self, np.nonzero(mask)[0], [])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"FiniteGroup({nm}order={self.order})"

    def same_table(self, other: FiniteGroup) -> bool:
        return self.order == other.order and np.array_equal(self.mul, other.mul)

    # -- persistence --------------------------------------------------------

    def to_json(self) -> dict:
        d = {"order": self.order, "mul": self.mul.tolist(), "gens": list(self.gens)}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_json(cls, data: dict, *, name: str | None = None) -> FiniteGroup:
        try:
            order = int(data["order"])
            mul = np.array(data["mul"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed group JSON: {exc}") from exc
        if mul.shape != (order, order):
            raise GroupError(f"table shape {mul.shape} does not match order {order}")
        g = cls(mul, data.get("gens"), data.get("labels"), name=name, validate=False)
        g.validate(assoc_cap=max(order, config.ASSOC_CHECK_CAP))
        return g


def find_nonassociative(mul: np.ndarray) -> tuple[int, int, int] | None:
    """First triple ``(a, b, c)`` with ``(ab)c != a(bc)``, or None."""
    n = mul.shape[0]
    for a in range(n):
        left = mul[mul[a]]          # left[b, c] = (a b) c
        right = mul[a][mul]         # right[b, c] = a (b c)
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def save(group: FiniteGroup, path) -> None:
    Path(path).write_text(json.dumps(group.to_json(), separators=(",", ":")) + "\n")


def load(path, *, name: str | None = None) -> FiniteGroup:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GroupError(f"malformed JSON in {path}: {exc}") from exc
    return FiniteGroup.from_json(data, name=name)


# ---------------------------------------------------------------------------
# subgroups


def _closure_mask(G: FiniteGroup, seeds) -> np.ndarray:
    gens = np.unique(np.asarray(list(seeds) if not isinstance(seeds, np.ndarray) else seeds, dtype=np.int64))
    gens = gens[gens != 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if gens.size == 0:
        return mask
    frontier = np.array([0])
    while frontier.size:
        nxt = G.mul[np.ix_(frontier, gens)].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


class Subgroup:
    """A subgroup of ``parent`` stored as its element set."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], witness_gens: Iterable[int] = ()):
        self.parent = parent
        arr = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements, dtype=np.int64))
        self.array = arr
        self.elements = frozenset(int(x) for x in arr)
        self.witness_gens = tuple(int(x) for x in witness_gens)

    @property
    def order(self) -> int:
        return len(self.array)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.array] = True
        return m

    def __contains__(self, x) -> bool:
        return int(x) in self.elements

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __le__(self, other: Subgroup) -> bool:
        return self.elements <= other.elements

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} in {self.parent!r})"

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_subgroup(self) -> bool:
        a = self.array
        if 0 not in self.elements:
            return False
        m = self.mask()
        return bool(m[self.parent.mul[np.ix_(a, a)]].all() and m[self.parent.inv[a]].all())

    def is_normal(self) -> bool:
        G = self.parent
        g = np.asarray(G.gens, dtype=np.int64)
        if g.size == 0:
            return True
        a = self.array
        conj = G.mul[G.mul[np.ix_(g, a)], G.inv[g][:, None]]
        return bool(self.mask()[conj].all())

    def is_generated_by_witness(self) -> bool:
        return bool(np.array_equal(np.nonzero(_closure_mask(self.parent, self.witness_gens))[0], self.array))

    def as_group(self, *, name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
        """Relabel as a standalone group; returns it and the embedding array."""
        a = self.array
        idx = np.full(self.parent.order, -1, dtype=np.int64)
        idx[a] = np.arange(len(a))
        mul = idx[self.parent.mul[np.ix_(a, a)]]
        gens = [int(idx[g]) for g in self.witness_gens if g != 0]
        if not gens:
            gens = list(range(1, len(a)))
        H = FiniteGroup(mul, gens, name=name, validate=False)
        return H, a.copy()


def subgroup_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``S``."""
    S = list(S)
    for s in S:
        G._check(int(s))
    return Subgroup(G, np.nonzero(_closure_mask(G, S))[0], S)


def conjugates(G: FiniteGroup, S) -> np.ndarray:
    """All ``g s g^-1`` for ``g`` in ``G`` and ``s`` in ``S``."""
    s = np.unique(np.asarray(list(S), dtype=np.int64))
    if s.size == 0:
        return s
    g = np.arange(G.order)
    return np.unique(G.mul[G.mul[np.ix_(g, s)], G.inv[g][:, None]])


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup containing ``S``."""
    S = list(S)
    for s in S:
        G._check(int(s))
    return Subgroup(G, np.nonzero(_closure_mask(G, conjugates(G, S)))[0], S)


def commutator_values(G: FiniteGroup, A, B) -> np.ndarray:
    a = np.asarray(A, dtype=np.int64)
    b = np.asarray(B, dtype=np.int64)
    ab = G.mul[np.ix_(a, b)]
    return np.unique(G.mul[G.mul[ab, G.inv[a][:, None]], G.inv[b][None, :]])


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]``, generated by all ``a b a^-1 b^-1``."""
    if A.parent is not G or B.parent is not G:
        raise GroupError("subgroups belong to a different parent group")
    vals = commutator_values(G, A.array, B.array)
    return Subgroup(G, np.nonzero(_closure_mask(G, vals))[0], vals)


def commutator(G: FiniteGroup, g: int, h: int) -> int:
    G._check(g, h)
    return int(G.mul[G.mul[G.mul[g, h], G.inv[g]], G.inv[h]])


def conjugate(G: FiniteGroup, g: int, x: int) -> int:
    G._check(g, x)
    return int(G.mul[G.mul[g, x], G.inv[g]])


def bracket(G: FiniteGroup, elts: Sequence[int]) -> int:
    """Left-normed commutator ``[...[[g1, g2], g3], ..., gn]``."""
    r = int(elts[0])
    for x in elts[1:]:
        r = commutator(G, r, int(x))
    return r


# ---------------------------------------------------------------------------
# homomorphisms, actions, quotients


class GroupHom:
    """A homomorphism given by its full image table."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, image, *, verify: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.image = np.asarray(image, dtype=np.int64)
        if self.image.shape != (domain.order,):
            raise GroupError("image table has wrong length")
        if verify:
            bad = self.violation()
            if bad is not None:
                raise GroupError(f"not a homomorphism at {bad}")

    def violation(self) -> tuple[int, int] | None:
        """A pair ``(a, s)`` with ``f(a s) != f(a) f(s)``, or None.

        Checking all ``a`` against the generators ``s`` suffices: by
        induction on word length it gives ``f(a w) = f(a) f(w)`` for all
        words ``w``.
        """
        f = self.image
        if f.min() < 0 or f.max() >= self.codomain.order:
            return (-1, -1)
        if f[0] != 0:
            return (0, 0)
        for s in self.domain.gens:
            lhs = f[self.domain.mul[:, s]]
            rhs = self.codomain.mul[f, f[s]]
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                return int(bad[0]), int(s)
        return None

    def verify_exhaustive(self) -> bool:
        f = self.image
        D, C = self.domain, self.codomain
        for a in range(D.order):
            if not np.array_equal(f[D.mul[a]], C.mul[f[a], f]):
                return False
        return True

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def kernel(self) -> Subgroup:
        k = np.nonzero(self.image == 0)[0]
        return Subgroup(self.domain, k, k)

    def image_subgroup(self) -> Subgroup:
        vals = np.unique(self.image)
        return Subgroup(self.codomain, vals, [int(self.image[g]) for g in self.domain.gens])

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.codomain.order

    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.domain.order

    def compose(self, other: GroupHom) -> GroupHom:
        """``self o other``."""
        if other.codomain is not self.domain:
            raise GroupError("cannot compose: codomain/domain mismatch")
        return GroupHom(other.domain, self.codomain, self.image[other.image], verify=False)


@dataclass(frozen=True)
class ActionTable:
    """Left action of ``actor`` on ``target`` by automorphisms.

    ``perm[h, g]`` is ``^h g``.
    """

    actor: FiniteGroup
    target: FiniteGroup
    perm: np.ndarray = field(repr=False)

    def __call__(self, h: int, g: int) -> int:
        return int(self.perm[h, g])

    def violation(self) -> str | None:
        """Describe the first failed action axiom, or None if valid."""
        A, T, P = self.actor, self.target, self.perm
        if P.shape != (A.order, T.order):
            return f"perm shape {P.shape} != ({A.order}, {T.order})"
        if not np.array_equal(P[0], np.arange(T.order)):
            return "identity does not act trivially"
        srt = np.sort(P, axis=1)
        if not np.all(srt == np.arange(T.order)[None, :]):
            return "some perm[h] is not a bijection"
        for s in T.gens:
            # perm[h] is a hom: check against target generators for every h
            lhs = P[:, T.mul[:, s]]
            rhs = T.mul[P, P[:, s][:, None]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                h, g = bad[0]
                return f"perm[{h}] not multiplicative at ({g}, {s})"
        for s in A.gens:
            lhs = P[A.mul[:, s]]          # perm[h s]
            rhs = P[:, P[s]]              # perm[h] o perm[s]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                h, g = bad[0]
                return f"action law fails for ({h}, {s}) at {g}"
        return None

    def is_trivial(self) -> bool:
        return bool(np.all(self.perm == np.arange(self.target.order)[None, :]))


def conjugation_action(G: FiniteGroup) -> ActionTable:
    g = np.arange(G.order)
    perm = G.mul[G.mul[g[:, None], g[None, :]], G.inv[:, None]]
    return ActionTable(G, G, perm)


def trivial_action(actor: FiniteGroup, target: FiniteGroup) -> ActionTable:
    perm = np.tile(np.arange(target.order), (actor.order, 1))
    return ActionTable(actor, target, perm)


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """``G/N`` on minimum-index coset representatives, with the projection."""
    if N.parent is not G:
        raise GroupError("N is not a subgroup of G")
    if not N.is_normal():
        raise GroupError("N is not normal in G")
    reps_all = G.mul[:, N.array].min(axis=1)
    reps = np.unique(reps_all)
    proj = np.searchsorted(reps, reps_all)
    qmul = proj[G.mul[np.ix_(reps, reps)]]
    seen: list[int] = []
    for g in G.gens:
        x = int(proj[g])
        if x != 0 and x not in seen:
            seen.append(x)
    Q = FiniteGroup(qmul, seen, name=f"{G.name}/N" if G.name else None, validate=False)
    return Q, GroupHom(G, Q, proj, verify=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, *, name: str | None = None) -> FiniteGroup:
    """``G x H`` with ``(g, h)`` stored at index ``g * |H| + h``."""
    n, m = G.order, H.order
    cap = config.order_cap()
    if n * m > cap:
        raise ResourceLimitError(f"direct product of order {n * m} exceeds order cap {cap}", limit=cap)
    gm = G.mul.astype(np.int64)
    hm = H.mul.astype(np.int64)
    mul = (gm[:, None, :, None] * m + hm[None, :, None, :]).reshape(n * m, n * m)
    gens = [g * m for g in G.gens if g] + [h for h in H.gens if h]
    labels = None
    if G.labels is not None or H.labels is not None:
        labels = [f"({G.label(g)},{H.label(h)})" for g in range(n) for h in range(m)]
    return FiniteGroup(mul, gens, labels, name=name, validate=False)


@dataclass(frozen=True)
class Obstruction:
    """Why a generator assignment does not extend to a homomorphism.

    ``element`` times generator ``generator`` (an element index of the
    domain) maps inconsistently; ``expected``/``found`` are codomain
    elements.
    """

    element: int
    generator: int
    expected: int
    found: int


def _generating_subset(G: FiniteGroup, candidates: np.ndarray) -> list[int]:
    """Greedy subset of ``candidates`` generating the same subgroup."""
    chosen: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for p in candidates:
        if not mask[p]:
            chosen.append(int(p))
            mask = _closure_mask(G, chosen)
    return chosen


def extend_to_hom(domain: FiniteGroup, gen_elems, gen_values, codomain: FiniteGroup) -> GroupHom | Obstruction:
    """Extend ``gen_elems[i] -> gen_values[i]`` to a homomorphism.

    The images of ``gen_elems`` must generate ``domain``.  A generating
    subset ``S`` of them is chosen greedily and the image table propagated
    breadth-first along ``S``.  Checking ``f(a s) = f(a) f(s)`` for every
    ``a`` and every ``s`` in ``S`` certifies a homomorphism; every other
    assignment is then compared pointwise.
    """
    ge = np.asarray(gen_elems, dtype=np.int64).ravel()
    gv = np.asarray(gen_values, dtype=np.int64).ravel()
    pairs = np.unique(np.stack([ge, gv], axis=1), axis=0) if ge.size else np.zeros((0, 2), np.int64)
    elems, first = np.unique(pairs[:, 0], return_index=True)
    if len(elems) != len(pairs):
        # one element assigned two different values
        dup = pairs[np.nonzero(np.diff(pairs[:, 0]) == 0)[0][0]]
        other = pairs[pairs[:, 0] == dup[0]][1]
        return Obstruction(0, int(dup[0]), int(dup[1]), int(other[1]))
    vals = pairs[first, 1]
    value_of = dict(zip(elems.tolist(), vals.tolist()))
    S = _generating_subset(domain, elems)
    image = np.full(domain.order, -1, dtype=np.int64)
    image[0] = 0
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt_all = []
        for p in S:
            nxt = domain.mul[frontier, p].astype(np.int64)
            new = image[nxt] < 0
            if new.any():
                tgt, idx = np.unique(nxt[new], return_index=True)
                image[tgt] = codomain.mul[image[frontier[new][idx]], value_of[p]]
                nxt_all.append(tgt)
        frontier = np.concatenate(nxt_all) if nxt_all else np.zeros(0, dtype=np.int64)
    if (image < 0).any():
        raise GroupError("generator images do not generate the domain")
    for p in S:
        lhs = image[domain.mul[:, p]]
        rhs = codomain.mul[image, value_of[p]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            t = int(bad[0])
            return Obstruction(t, int(p), int(rhs[t]), int(lhs[t]))
    bad = np.nonzero(image[elems] != vals)[0]
    if bad.size:
        i = int(bad[0])
        return Obstruction(0, int(elems[i]), int(vals[i]), int(image[elems[i]]))
    return GroupHom(domain, codomain, image, verify=False)
