"""Non-abelian tensor products and exterior squares of finite groups.

Two constructions are available for a pair ``(G, H)`` acting compatibly on
each other:

``direct``
    One generator ``t(g, h)`` per element pair, one relator per instance of
    the two defining relation families::

        t(g g', h) = t(^g g', ^g h) t(g, h)
        t(g, h h') = t(g, h) t(^h g, ^h h')

    and coset enumeration over the trivial subgroup.

``nu``
    Only for a group acting on itself by conjugation.  The group
    ``nu(G) = <G, G' | rels(G), rels(G'), ^x[g, h'] = [^x g, (^x h)'] = ^{x'}[g, h']>``
    contains ``[G, G']`` as a copy of ``G (x) G`` via ``g (x) h -> [g, h']``.
    ``[G, G']`` meets the copy ``G'`` trivially and is normal, so it acts
    freely on the cosets of ``G'``; its orbit through the trivial coset is
    a regular representation of it.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np

from . import config
from .abelian import abelian_invariants, regular_table_invariants
from .errors import EngineError, GroupError, IncompatibleActionsError, ResourceLimitError
from .fp.enumerate import (
    EnumerationOutcome,
    regular_cayley_table,
    standardize,
    todd_coxeter,
)
from .fp.presentation import Presentation, cyclic_canonical
from .group import (
    ActionTable,
    FiniteGroup,
    GroupHom,
    Obstruction,
    Subgroup,
    _closure_mask,
    commutator_subgroup,
    conjugation_action,
    extend_to_hom,
    quotient,
)

STRATEGIES = ("direct", "nu")

# relator counts above this are refused before any allocation
MAX_RELATORS = 12_000_000


# ---------------------------------------------------------------------------
# compatible pairs


@dataclass(frozen=True)
class CompatibilityViolation:
    """First tuple breaking a compatibility equation.

    ``equation`` 1 is ``^(^h g) h' = ^h(^g(^{h^-1} h'))`` with
    ``witness = (g, h, h')``; equation 2 is the mirror image with
    ``witness = (g, g', h)``.
    """

    equation: int
    witness: tuple[int, int, int]


@dataclass(frozen=True)
class CompatiblePair:
    G: FiniteGroup
    H: FiniteGroup
    actHG: ActionTable  # H acting on G
    actGH: ActionTable  # G acting on H
    compat_checked: bool = False
    self_conjugation: bool = False


def _conj_inverse_table(G: FiniteGroup) -> np.ndarray:
    """``t[g, x] = g^-1 x g``."""
    g = np.arange(G.order)
    return G.mul[G.mul[G.inv[:, None], g[None, :]], g[:, None]]


def _first_violation(P_outer, P_inner, X: FiniteGroup, Y: FiniteGroup):
    """Check ``^(^y x) x' = ^y(^x(^{y^-1} x'))`` in ``Y`` for x in X, y, x' in Y.

    ``P_outer`` is X acting on Y, ``P_inner`` is Y acting on X.
    Returns ``(x, y, y')`` or None.
    """
    cj = _conj_inverse_table(Y)                 # cj[y, y'] = y^-1 y' y
    ar = np.arange(Y.order)
    for x in range(X.order):
        lhs = P_outer[P_inner[:, x]]            # lhs[y, y'] = ^(^y x) y'
        mid = P_outer[x][cj]                    # ^x(y^-1 y' y)
        rhs = Y.mul[Y.mul[ar[:, None], mid], Y.inv[:, None]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            y, y2 = bad[0]
            return x, int(y), int(y2)
    return None


def check_compatibility(G: FiniteGroup, H: FiniteGroup, actHG: ActionTable, actGH: ActionTable):
    """Verify both actions and the two compatibility equations exhaustively.

    Returns a :class:`CompatiblePair` or the first
    :class:`CompatibilityViolation`.
    """
    if actHG.actor is not H or actHG.target is not G or actGH.actor is not G or actGH.target is not H:
        raise GroupError("action tables do not match the groups")
    for act in (actHG, actGH):
        bad = act.violation()
        if bad is not None:
            raise GroupError(f"invalid action: {bad}")
    w = _first_violation(actGH.perm, actHG.perm, G, H)
    if w is not None:
        return CompatibilityViolation(1, w)
    w = _first_violation(actHG.perm, actGH.perm, H, G)
    if w is not None:
        h, g, g2 = w
        return CompatibilityViolation(2, (g, g2, h))
    selfc = G is H and np.array_equal(actHG.perm, conjugation_action(G).perm) \
        and np.array_equal(actGH.perm, actHG.perm)
    return CompatiblePair(G, H, actHG, actGH, True, bool(selfc))


def require_compatible(G, H, actHG, actGH) -> CompatiblePair:
    out = check_compatibility(G, H, actHG, actGH)
    if isinstance(out, CompatibilityViolation):
        raise IncompatibleActionsError(f"actions are not compatible: {out}")
    return out


def self_pair(G: FiniteGroup) -> CompatiblePair:
    """``G`` acting on itself by conjugation on both sides."""
    c = conjugation_action(G)
    return CompatiblePair(G, G, c, c, True, True)


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class TensorGroup:
    """An enumerated tensor product with its pairing ``(g, h) -> g (x) h``.

    ``pairing[g, h]`` is an element of ``T``.
    """

    T: FiniteGroup
    pairing: np.ndarray = field(repr=False)
    origin: CompatiblePair = field(repr=False)
    strategy: str
    exterior: bool = False
    cosets_defined: int = 0

    @property
    def order(self) -> int:
        return self.T.order

    def __call__(self, g: int, h: int) -> int:
        return int(self.pairing[g, h])

    def abelian_invariants(self) -> list[int]:
        return abelian_invariants(self.T)

    def relation_violation(self) -> str | None:
        return relation_violation(self)


ExteriorGroup = TensorGroup


# ---------------------------------------------------------------------------
# presentations


def class_generators(G: FiniteGroup) -> np.ndarray:
    """A generating set of ``G`` that is a union of conjugacy classes.

    Classes are taken smallest first and kept only if they enlarge the
    subgroup generated so far.
    """
    cg = G.mul[G.mul, G.inv[:, None]]
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    classes = []
    for x in range(1, G.order):
        if not seen[x]:
            cls = np.unique(cg[:, x])
            seen[cls] = True
            classes.append(cls)
    classes.sort(key=lambda c: (len(c), int(c[0])))
    chosen: list[np.ndarray] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for cls in classes:
        if not mask[cls].all():
            chosen.append(cls)
            mask = _closure_mask(G, np.concatenate(chosen))
    # the trivial group still needs one instance to force t(1, h) = 1
    return np.sort(np.concatenate(chosen)) if chosen else np.zeros(1, dtype=np.int64)


def _closed_generators(H: FiniteGroup, act: ActionTable) -> np.ndarray:
    """Conjugation-closed generators of ``H`` closed further under ``act``."""
    U = class_generators(H)
    ch = H.mul[H.mul, H.inv[:, None]]
    while True:
        grown = np.unique(np.concatenate([U, act.perm[:, U].ravel(), ch[:, U].ravel()]))
        if len(grown) == len(U):
            return U
        U = grown


def _tree(X: FiniteGroup, letters: np.ndarray) -> list[tuple[int, int]]:
    """Breadth-first ``(parent, letter)`` with ``x = parent * letter``, root excluded."""
    seen = np.zeros(X.order, dtype=bool)
    seen[0] = True
    out = []
    frontier = [0]
    while frontier:
        nxt = []
        for p in frontier:
            for s in letters:
                x = int(X.mul[p, s])
                if not seen[x]:
                    seen[x] = True
                    out.append((x, p, int(s)))
                    nxt.append(x)
        frontier = nxt
    return out


@dataclass(frozen=True)
class DirectPresentation:
    """Presentation of ``G (x) H`` on the symbols ``t(s, u)``.

    ``symbols[i]`` is the pair ``(s, u)`` of generator ``i + 1`` and
    ``words[g][h]`` spells ``t(g, h)`` in those generators.
    """

    presentation: Presentation
    symbols: tuple[tuple[int, int], ...]
    words: list[list[tuple[int, ...]]] = field(repr=False)


def direct_presentation(pair: CompatiblePair, exterior: bool = False) -> DirectPresentation:
    """The defining presentation of ``G (x) H`` after eliminating generators.

    Relators: family one over ``(g, s, h)`` then family two over
    ``(g, h, u)`` in lexicographic order, with ``s`` in ``S`` (closed under
    conjugation in ``G``) and ``u`` in ``U`` (closed under conjugation in
    ``H`` and under ``G``); ``g ^ g`` follows for the exterior square.
    The other instances are consequences: by induction on the length of
    ``g'`` as a word in ``S``,
    ``t(g g'' s, h) = t(^(g g'') s, ^(g g'') h) t(^g g'', ^g h) t(g, h)``,
    and the first two factors combine by the instance at
    ``(^g g'', ^g s, ^g h)`` since ``^g s`` is again in ``S``; family two
    is symmetric.

    Only ``t(s, u)`` with ``s, u != 1`` stay as generators.  Along a
    breadth-first tree of ``G`` over ``S``,
    ``t(p s, u) = t(^p s, ^p u) t(p, u)`` (a family-one relator, and
    ``^p u`` is in ``U``) spells ``t(x, u)``; along a tree of ``H`` over
    ``U``, ``t(x, q u) = t(x, q) t(^q x, ^q u)`` (family two) spells
    ``t(x, h)``.  ``t(1, h) = t(g, 1) = 1`` follow from the instances at
    ``g = 1`` and ``h = 1``.  Each step removes a generator together with
    a relator it is defined by, so the group is unchanged.
    """
    G, H = pair.G, pair.H
    n, m = G.order, H.order
    S, U = class_generators(G), _closed_generators(H, pair.actGH)
    count = n * len(S) * m + n * m * len(U)
    if count > MAX_RELATORS:
        raise ResourceLimitError(
            f"direct presentation of |G|={n}, |H|={m} needs {count} relators",
            kind="relators", limit=MAX_RELATORS)
    if exterior and G is not H:
        raise GroupError("exterior relators need a self pair")
    PGH = pair.actGH.perm    # ^g h
    PHG = pair.actHG.perm    # ^h g
    cg = G.mul[G.mul, G.inv[:, None]]
    ch = H.mul[H.mul, H.inv[:, None]]
    symbols = tuple((int(a), int(b)) for a in S if a for b in U if b)
    index = {st: i + 1 for i, st in enumerate(symbols)}
    # V[x][u]: t(x, u) for u in U
    V: list[dict[int, tuple[int, ...]]] = [dict.fromkeys(map(int, U), ()) for _ in range(n)]
    for x, p, s in _tree(G, S):
        for u in V[p]:
            a, b = int(cg[p, s]), int(PGH[p, u])
            head = (index[a, b],) if a and b else ()
            V[x][u] = head + V[p][u]
    W: list[list[tuple[int, ...]]] = [[()] * m for _ in range(n)]
    for h, q, u in _tree(H, U):
        for x in range(n):
            W[x][h] = W[x][q] + V[int(PHG[q, x])][int(ch[q, u])]

    def inv(w):
        return tuple(-c for c in reversed(w))

    rels: dict[tuple[int, ...], None] = {}

    def add(w):
        r = cyclic_canonical(w)
        if r:
            rels.setdefault(r, None)

    for g in range(n):
        for s in S:
            gs, a = int(G.mul[g, s]), int(cg[g, s])
            for h in range(m):
                add(W[gs][h] + inv(W[g][h]) + inv(W[a][PGH[g, h]]))
    for g in range(n):
        for h in range(m):
            for u in U:
                add(W[g][int(H.mul[h, u])] + inv(W[PHG[h, g]][ch[h, u]]) + inv(W[g][h]))
    if exterior:
        for g in range(n):
            add(W[g][g])
    return DirectPresentation(Presentation(len(symbols), list(rels)), symbols, W)


def direct_symbol_cosets(dp: DirectPresentation, table: np.ndarray) -> np.ndarray:
    """Coset reached from coset 0 along ``t(g, h)``, for every pair."""
    n, m = len(dp.words), len(dp.words[0])
    flat = [w for row in dp.words for w in row]
    L = max((len(w) for w in flat), default=0)
    cols = np.full((n * m, L), -1, dtype=np.int64)
    for i, w in enumerate(flat):
        cols[i, :len(w)] = [2 * (c - 1) for c in w]
    cur = np.zeros(n * m, dtype=np.int64)
    for j in range(L):
        live = cols[:, j] >= 0
        cur[live] = table[cur[live], cols[live, j]]
    return cur.reshape(n, m)


def shortest_words(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Shortest word in ``G.gens`` and their inverses for every element.

    Letters are ``+(i+1)`` / ``-(i+1)`` for ``G.gens[i]``.
    """
    words: list[tuple[int, ...] | None] = [None] * G.order
    words[0] = ()
    frontier = [0]
    letters = []
    for i, s in enumerate(G.gens):
        letters.append((i + 1, s))
        letters.append((-(i + 1), int(G.inv[s])))
    while frontier:
        nxt = []
        for e in frontier:
            for lt, s in letters:
                f = int(G.mul[e, s])
                if words[f] is None:
                    words[f] = words[e] + (lt,)
                    nxt.append(f)
        frontier = nxt
    return words  # type: ignore[return-value]


def _shifted(w, shift):
    return tuple(x + shift if x > 0 else x - shift for x in w)


def _inverse(w):
    return tuple(-x for x in reversed(w))


def _cayley_relators(G: FiniteGroup, words, shift: int) -> list[tuple[int, ...]]:
    """Relators ``w(e) s w(e s)^-1`` over the Cayley graph; they present ``G``."""
    rels = []
    for e in range(G.order):
        for i, s in enumerate(G.gens):
            f = int(G.mul[e, s])
            rels.append(_shifted(words[e] + (i + 1,) + _inverse(words[f]), shift))
    return rels


NU_TIERS = ("gens", "mixed", "full")


def _nu_pairs(G: FiniteGroup, tier: str) -> list[tuple[int, int]]:
    n = G.order
    gens = set(G.gens)
    if tier == "gens":
        return [(g, h) for g in G.gens for h in G.gens]
    if tier == "mixed":
        return [(g, h) for g in range(n) for h in range(n) if g in gens or h in gens]
    return [(g, h) for g in range(n) for h in range(n)]


def nu_presentation(G: FiniteGroup, exterior: bool = False, tier: str = "full"):
    """Presentation of ``nu(G)`` plus the commutator words ``[g, h']``.

    Generators ``0..k-1`` are ``G.gens``; ``k..2k-1`` their copies.  The
    conjugation relations are imposed for ``x`` in the generators and their
    copies, and for pairs ``(g, h)`` chosen by ``tier``: both in
    ``G.gens`` (``"gens"``), at least one in ``G.gens`` (``"mixed"``), or
    all of ``G`` (``"full"``).  Dropping relations can only enlarge the
    group, which is why reduced tiers are checked against ``"full"``.
    """
    if tier not in NU_TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    k = len(G.gens)
    words = shortest_words(G)
    rels = _cayley_relators(G, words, 0) + _cayley_relators(G, words, k)
    n = G.order
    comm = {}
    for g in range(n):
        for h in range(n):
            u, v = words[g], _shifted(words[h], k)
            comm[g, h] = u + v + _inverse(u) + _inverse(v)
    cg = G.mul[G.mul[np.arange(n)[:, None], np.arange(n)[None, :]], G.inv[:, None]]
    for i, s in enumerate(G.gens):
        for g, h in _nu_pairs(G, tier):
            rhs = _inverse(comm[int(cg[s, g]), int(cg[s, h])])
            for x in (i + 1, i + 1 + k):
                rels.append((x,) + comm[g, h] + (-x,) + rhs)
    if exterior:
        rels.extend(comm[g, g] for g in range(n))
    return Presentation(2 * k, rels), comm


# ---------------------------------------------------------------------------
# construction


class _LRU:
    def __init__(self, size: int):
        self.size = size
        self.data: OrderedDict = OrderedDict()

    def get(self, key):
        if key in self.data:
            self.data.move_to_end(key)
            return self.data[key]
        return None

    def put(self, key, value):
        self.data[key] = value
        self.data.move_to_end(key)
        while len(self.data) > self.size:
            self.data.popitem(last=False)

    def clear(self):
        self.data.clear()


_cache = _LRU(64)


def clear_cache() -> None:
    _cache.clear()


def _pair_key(pair: CompatiblePair, strategy: str, exterior: bool, limit: int, cap: int):
    G, H = pair.G, pair.H
    return (G.mul.tobytes(), G.gens, H.mul.tobytes(), H.gens,
            pair.actHG.perm.tobytes(), pair.actGH.perm.tobytes(), strategy, exterior, limit, cap)


def _hlt_then_felsch(P: Presentation, sub, limit: int):
    # HLT is several times faster on these presentations; Felsch defines fewer cosets
    out = todd_coxeter(P, sub, limit, "hlt")
    return todd_coxeter(P, sub, limit, "felsch") if out.exceeded else out


def _enumerate_direct(pair: CompatiblePair, exterior: bool, limit: int):
    dp = direct_presentation(pair, exterior)
    out = _hlt_then_felsch(dp.presentation, (), limit)
    if out.exceeded:
        raise ResourceLimitError(
            f"direct enumeration exceeded {out.limit} cosets", kind="cosets", limit=out.limit)
    return out, dp


def _enumerate_nu(G: FiniteGroup, exterior: bool, limit: int):
    """Enumerate cosets of ``G'`` in ``nu(G)``, trying reduced tiers first.

    A reduced tier is accepted only if its complete table satisfies every
    relator of the full presentation.  Its group maps onto the full one,
    so its index is at least the full index, while a table satisfying all
    full relators is a transitive set for the full group with ``G'`` in the
    stabilizer, whose size is at most the full index.  The two tables are
    therefore the same.
    """
    k = len(G.gens)
    sub = [(k + i + 1,) for i in range(k)]
    for tier in NU_TIERS[:-1]:
        P, comm = nu_presentation(G, exterior, tier)
        out = _hlt_then_felsch(P, sub, limit)
        if not out.exceeded and dropped_relator_failure(out.table, G, tier, comm) is None:
            return out, comm
    full, comm = nu_presentation(G, exterior, "full")
    out = _hlt_then_felsch(full, sub, limit)
    if out.exceeded:
        raise ResourceLimitError(
            f"nu enumeration exceeded {out.limit} cosets", kind="cosets", limit=out.limit)
    return out, comm


def _word_columns(w) -> list[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w]


def dropped_relator_failure(table: np.ndarray, G: FiniteGroup, tier: str, comm) -> tuple[int, int, int] | None:
    """First conjugation relator of the full presentation that ``tier`` left
    out and that moves some coset of ``table``, as ``(s, g, h)``.

    Every other full relator is also a relator of the tier, so a complete
    table for the tier already satisfies it.  ``x [g, h'] x^-1 = [^s g, ^s h']``
    (``x`` is ``s`` or its copy) holds at every coset exactly when the
    permutations satisfy ``C[X] == X[Q]`` for ``C``, ``Q`` the two commutators.
    """
    n, k = G.order, len(G.gens)
    rows = table.shape[0]
    kept = set(_nu_pairs(G, tier))
    perms = _LRU(max(2, config.TABLE_BYTES_BUDGET // (4 * rows)))
    start = np.arange(rows, dtype=np.int32)

    def perm(g: int, h: int) -> np.ndarray:
        p = perms.get((g, h))
        if p is None:
            p = start
            for c in _word_columns(comm[g, h]):
                p = table[p, c]
            perms.put((g, h), p)
        return p

    cg = G.mul[G.mul[np.arange(n)[:, None], np.arange(n)[None, :]], G.inv[:, None]]
    X = [(s, table[:, 2 * i], table[:, 2 * (i + k)]) for i, s in enumerate(G.gens)]
    for g in range(n):
        for h in range(n):
            if (g, h) in kept:
                continue
            C = perm(g, h)
            for s, xs, xc in X:
                Q = perm(int(cg[s, g]), int(cg[s, h]))
                if not (np.array_equal(C[xs], xs[Q]) and np.array_equal(C[xc], xc[Q])):
                    return int(s), g, h
    return None


def _nu_orbit(out: EnumerationOutcome, G: FiniteGroup, comm):
    """Regular representation of ``[G, G']`` on its orbit through coset 0.

    Returns ``(table, column)``: ``table[:, j]`` is the action of the
    ``j``-th distinct commutator ``[g, h']`` on the orbit, and
    ``column[g, h]`` the column of ``[g, h']``.  The orbit is found first,
    so only orbit points are ever pushed through the commutator words.
    """
    n = G.order
    t = out.table
    words = [[2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in comm[g, h]]
             for g in range(n) for h in range(n)]

    def apply(points, w):
        for c in w:
            points = t[points, c]
        return points

    orbit = np.zeros(t.shape[0], dtype=bool)
    orbit[0] = True
    frontier = np.array([0])
    while frontier.size:
        nxt = np.unique(np.concatenate([apply(frontier, w) for w in words]))
        nxt = nxt[~orbit[nxt]]
        orbit[nxt] = True
        frontier = nxt
    members = np.nonzero(orbit)[0]
    relabel = np.full(t.shape[0], -1, dtype=np.int64)
    relabel[members] = np.arange(len(members))
    seen: dict[bytes, int] = {}
    cols = []
    column = np.empty(n * n, dtype=np.int64)
    for i, w in enumerate(words):
        p = relabel[apply(members, w)].astype(np.int32)
        key = p.tobytes()
        if key not in seen:
            seen[key] = len(cols)
            cols.append(p)
        column[i] = seen[key]
    return np.stack(cols, axis=1), column.reshape(n, n)


def _from_regular_table(table: np.ndarray, cosets: np.ndarray, cap: int) -> tuple[FiniteGroup, np.ndarray]:
    """Cayley table of a regular coset table; ``cosets[g, h]`` is the coset of ``g (x) h``."""
    n = table.shape[0]
    if n > cap:
        raise ResourceLimitError(f"tensor group of order {n} exceeds order cap {cap}", limit=cap)
    t, parent, letter, new = standardize(table, with_map=True)
    mul = regular_cayley_table(t, parent, letter)
    pairing = new[cosets]
    gens = [int(x) for x in np.unique(pairing) if x != 0]
    return FiniteGroup(mul, gens, validate=False, order_cap=cap), pairing


def _coset_precheck(pair: CompatiblePair, strategy: str, exterior: bool, limit: int) -> None:
    """Fail before enumerating when the index is known to exceed ``limit``.

    The direct index is ``|T|`` and the nu index is ``|T| |G|``.
    """
    need = tensor_order_lower_bound(pair, exterior) * (pair.G.order if strategy == "nu" else 1)
    if need > limit:
        raise ResourceLimitError(
            f"{strategy} enumeration needs at least {need} cosets, above the limit {limit}",
            kind="cosets", limit=limit)


def _regular_table(pair: CompatiblePair, strategy: str, exterior: bool, limit: int):
    """Regular table of the tensor group, generated by its columns, and the
    coset of each ``g (x) h``."""
    _coset_precheck(pair, strategy, exterior, limit)
    if strategy == "direct":
        out, dp = _enumerate_direct(pair, exterior, limit)
        return out.table[:, 0::2], direct_symbol_cosets(dp, out.table), out.defined
    out, comm = _enumerate_nu(pair.G, exterior, limit)
    table, column = _nu_orbit(out, pair.G, comm)
    return table, table[0].astype(np.int64)[column], out.defined


def tensor_product(
    pair: CompatiblePair,
    strategy: str = "direct",
    limit: int = config.DEFAULT_COSET_LIMIT,
    *,
    exterior: bool = False,
    order_cap: int | None = None,
    verify: bool = True,
) -> TensorGroup:
    """Build ``G (x) H`` (or ``G ^ G`` with ``exterior=True``) for a verified pair."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not pair.compat_checked:
        raise GroupError("pair has not been checked for compatibility")
    if strategy == "nu" and not pair.self_conjugation:
        raise GroupError("the nu strategy needs a group acting on itself by conjugation")
    cap = config.order_cap() if order_cap is None else order_cap
    key = _pair_key(pair, strategy, exterior, limit, cap)
    hit = _cache.get(key)
    if hit is not None:
        # equal tables, possibly different group objects: rebind to the caller's pair
        return hit if hit.origin is pair else replace(hit, origin=pair)
    bound = tensor_order_lower_bound(pair, exterior)
    if bound > cap:
        raise ResourceLimitError(
            f"tensor group has order at least {bound}, above order cap {cap}", limit=cap)
    table, cosets, defined = _regular_table(pair, strategy, exterior, limit)
    T, pairing = _from_regular_table(table, cosets, cap)
    result = TensorGroup(T, pairing, pair, strategy, exterior, defined)
    if verify:
        bad = relation_violation(result)
        if bad is not None:
            raise EngineError(f"{strategy} tensor construction failed verification: {bad}")
    _cache.put(key, result)
    return result


def tensor_order(pair: CompatiblePair, strategy: str = "direct",
                 limit: int = config.DEFAULT_COSET_LIMIT, *, exterior: bool = False) -> int:
    """Order of ``G (x) H`` from the enumeration alone, without a Cayley table.

    Use this when the order may exceed the order cap.
    """
    if strategy == "nu" and not pair.self_conjugation:
        raise GroupError("the nu strategy needs a group acting on itself by conjugation")
    _coset_precheck(pair, strategy, exterior, limit)
    if strategy == "direct":
        return _enumerate_direct(pair, exterior, limit)[0].index
    out, _ = _enumerate_nu(pair.G, exterior, limit)
    # |nu(G)| = |G (x) G| |G|^2 and the subgroup G' has order |G|
    return out.index // pair.G.order


def _coinvariants(A: FiniteGroup, act: ActionTable) -> list[int]:
    """Invariants of ``A / [A, A] D(A)`` for ``D(A) = <a (^b a)^-1>``."""
    a = np.arange(A.order)
    moved = A.mul[a[None, :], A.inv[act.perm]].ravel()
    N = commutator_subgroup(A, A.whole(), A.whole())
    seeds = np.unique(np.concatenate([N.array, moved]))
    Q, _ = quotient(A, Subgroup(A, np.nonzero(_closure_mask(A, seeds))[0]))
    return abelian_invariants(Q)


def tensor_order_lower_bound(pair: CompatiblePair, exterior: bool = False) -> int:
    """A divisor of ``|G (x) H|`` (or ``|G ^ G|``), computed without enumeration.

    ``g (x) h`` maps onto ``g (x) h`` in the abelian tensor product of the
    abelianized coinvariants ``G / [G, G] D_H(G)`` and ``H / [H, H] D_G(H)``;
    both relation families hold there, so the map is onto a group of
    order ``prod gcd(d_i, e_j)``.  For the exterior square the target is
    the exterior square of ``G / [G, G]``, of order ``prod_(i<j) gcd(d_i, d_j)``.
    """
    dG = _coinvariants(pair.G, pair.actHG)
    if exterior:
        return math.prod(math.gcd(a, b) for i, a in enumerate(dG) for b in dG[i + 1:])
    dH = _coinvariants(pair.H, pair.actGH)
    return math.prod(math.gcd(d, e) for d in dG for e in dH)


@dataclass(frozen=True)
class TensorSummary:
    """Order and abelian invariants of a tensor group, without a Cayley table.

    ``invariants`` is None when the group is above the order cap and not
    abelian (its abelianization is then not computed).
    """

    order: int
    invariants: list[int] | None
    abelian: bool | None
    strategy: str
    exterior: bool
    cosets_defined: int


def tensor_summary(pair: CompatiblePair, strategy: str = "direct",
                   limit: int = config.DEFAULT_COSET_LIMIT, *, exterior: bool = False,
                   order_cap: int | None = None) -> TensorSummary:
    """Order and invariants, building the full group only when it is under the cap."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "nu" and not pair.self_conjugation:
        raise GroupError("the nu strategy needs a group acting on itself by conjugation")
    cap = config.order_cap() if order_cap is None else order_cap
    table, cosets, defined = _regular_table(pair, strategy, exterior, limit)
    n = table.shape[0]
    if n <= cap:
        T, _ = _from_regular_table(table, cosets, cap)
        return TensorSummary(n, abelian_invariants(T), T.is_abelian(), strategy, exterior, defined)
    inv = regular_table_invariants(table, np.arange(table.shape[1]))
    return TensorSummary(n, inv, inv is not None, strategy, exterior, defined)


def tensor_square(G: FiniteGroup, strategy: str = "direct",
                  limit: int = config.DEFAULT_COSET_LIMIT, **kw) -> TensorGroup:
    return tensor_product(self_pair(G), strategy, limit, **kw)


def exterior_square(G: FiniteGroup, limit: int = config.DEFAULT_COSET_LIMIT,
                    strategy: str = "direct", **kw) -> TensorGroup:
    return tensor_product(self_pair(G), strategy, limit, exterior=True, **kw)


def assignment_violation(pair: CompatiblePair, values: np.ndarray, codomain: FiniteGroup,
                         exterior: bool = False) -> str | None:
    """First defining relation broken by ``t(g, h) -> values[g, h]`` in ``codomain``.

    ``None`` means the assignment extends to a homomorphism out of the
    presented tensor product (or exterior square), whether or not that
    group has been enumerated.
    """
    G, H, C = pair.G, pair.H, codomain
    V = np.asarray(values, dtype=np.int64)
    if V.shape != (G.order, H.order):
        raise GroupError("value table has the wrong shape")
    PGH, PHG = pair.actGH.perm, pair.actHG.perm
    cg = G.mul[G.mul, G.inv[:, None]]
    ch = H.mul[H.mul, H.inv[:, None]]
    for g in range(G.order):
        # t(g g', h) == t(^g g', ^g h) t(g, h)
        lhs = V[G.mul[g]]
        rhs = C.mul[V[cg[g]][:, PGH[g]], V[g][None, :]]
        if not np.array_equal(lhs, rhs):
            gp, h = np.argwhere(lhs != rhs)[0]
            return f"relation 1 fails at (g={g}, g'={gp}, h={h})"
        # t(g, h h') == t(g, h) t(^h g, ^h h')
        lhs = V[g][H.mul]
        rhs = C.mul[V[g][:, None], V[PHG[:, g][:, None], ch]]
        if not np.array_equal(lhs, rhs):
            h, hp = np.argwhere(lhs != rhs)[0]
            return f"relation 2 fails at (g={g}, h={h}, h'={hp})"
    if exterior and np.any(V[np.arange(G.order), np.arange(G.order)] != 0):
        g = int(np.nonzero(V[np.arange(G.order), np.arange(G.order)])[0][0])
        return f"g ^ g != 1 at g={g}"
    return None


def relation_violation(tg: TensorGroup) -> str | None:
    """Check every instance of the defining relations under the pairing.

    Also checks that the pairing image generates the group.
    """
    bad = assignment_violation(tg.origin, tg.pairing, tg.T, tg.exterior)
    if bad is not None:
        return bad
    if not _closure_mask(tg.T, np.unique(tg.pairing)).all():
        return "pairing image does not generate"
    return None


# ---------------------------------------------------------------------------
# homomorphisms out of tensor groups


def pairing_hom(tg: TensorGroup, values: np.ndarray, codomain: FiniteGroup) -> GroupHom | Obstruction:
    """Extend ``g (x) h -> values[g, h]`` to a homomorphism on ``tg.T``."""
    return extend_to_hom(tg.T, tg.pairing.ravel(), np.asarray(values).ravel(), codomain)


def mu_hom(E: TensorGroup) -> GroupHom:
    """``g ^ h -> [g, h]`` (also used on tensor squares, where it is λ₂)."""
    G = E.origin.G
    if not E.origin.self_conjugation:
        raise GroupError("mu is defined on squares of a group acting on itself")
    out = pairing_hom(E, G.commutator_table(), G)
    if isinstance(out, Obstruction):
        raise EngineError(f"commutator map is not a homomorphism: {out}")
    return out


def schur_multiplier(G: FiniteGroup, limit: int = config.DEFAULT_COSET_LIMIT,
                     strategy: str = "direct") -> Subgroup:
    """Kernel of ``G ^ G -> G``; its order is that of H₂(G)."""
    return mu_hom(exterior_square(G, limit, strategy)).kernel()


def exterior_projection(tsq: TensorGroup, ext: TensorGroup) -> GroupHom:
    """Canonical surjection ``G (x) G -> G ^ G``."""
    if tsq.origin.G is not ext.origin.G:
        raise GroupError("tensor and exterior squares come from different groups")
    out = pairing_hom(tsq, ext.pairing, ext.T)
    if isinstance(out, Obstruction):
        raise EngineError(f"projection onto the exterior square is not well defined: {out}")
    return out
