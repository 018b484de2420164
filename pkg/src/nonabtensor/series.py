"""Central and derived series, derivatives, and the subgroups 𝔇ₙ."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GroupError
from .group import (
    ActionTable,
    FiniteGroup,
    Subgroup,
    _closure_mask,
    commutator_subgroup,
    commutator_values,
    quotient,
)


@dataclass(frozen=True)
class SeriesChain:
    """``terms[0]`` is the first term (γ₁, Γ₁ or Z₀).

    ``stable_from`` is the index from which all further terms repeat, if
    that was observed within the computed range.
    """

    kind: str
    terms: tuple[Subgroup, ...]
    stable_from: int | None

    @property
    def stabilized(self) -> bool:
        return self.stable_from is not None

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    def __getitem__(self, i: int) -> Subgroup:
        return self.terms[i]

    def __len__(self) -> int:
        return len(self.terms)


def _chain(kind: str, first: Subgroup, step, count: int) -> SeriesChain:
    terms = [first]
    stable = None
    while len(terms) < count:
        nxt = terms[-1] if stable is not None else step(terms[-1])
        if stable is None and nxt == terms[-1]:
            stable = len(terms) - 1
        terms.append(nxt)
    return SeriesChain(kind, tuple(terms), stable)


def lower_central_series(G: FiniteGroup, n: int) -> SeriesChain:
    """γ₁ = G, γ_{k+1} = [γ_k, G]; returns ``n`` terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    W = G.whole()
    return _chain("lower-central", W, lambda T: commutator_subgroup(G, T, W), n)


def derived_series(G: FiniteGroup, n: int) -> SeriesChain:
    """Γ₁ = G, Γ_{k+1} = [Γ_k, Γ_k]; returns ``n`` terms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _chain("derived", G.whole(), lambda T: commutator_subgroup(G, T, T), n)


def _next_center(G: FiniteGroup, Z: Subgroup) -> Subgroup:
    Q, proj = quotient(G, Z)
    C = Q.center().mask()
    return Subgroup(G, np.nonzero(C[proj.image])[0])


def upper_central_series(G: FiniteGroup, n: int) -> SeriesChain:
    """Z₀ = 1, Z_{k+1}/Z_k = Z(G/Z_k); returns Z₀..Zₙ."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _chain("upper-central", G.trivial(), lambda Z: _next_center(G, Z), n + 1)


def lower_central_term(G: FiniteGroup, n: int) -> Subgroup:
    return lower_central_series(G, n)[n - 1]


def derived_term(G: FiniteGroup, n: int) -> Subgroup:
    return derived_series(G, n)[n - 1]


def upper_central_term(G: FiniteGroup, n: int) -> Subgroup:
    return upper_central_series(G, n)[n]


# ---------------------------------------------------------------------------
# derivatives


def _check_action(act: ActionTable) -> None:
    bad = act.violation()
    if bad is not None:
        raise GroupError(f"invalid action: {bad}")


def derivative_elements(act: ActionTable, within=None) -> np.ndarray:
    """All ``g (^h g)^-1`` for ``g`` in ``within`` (default: all of the target)."""
    T = act.target
    g = np.arange(T.order) if within is None else np.asarray(within, dtype=np.int64)
    moved = act.perm[:, g]
    return np.unique(T.mul[g[None, :], T.inv[moved]])


def derivative(Gt: FiniteGroup, Ht: FiniteGroup, act: ActionTable) -> Subgroup:
    """D_H(G) = < g (^h g)^-1 >."""
    if act.actor is not Ht or act.target is not Gt:
        raise GroupError("action does not match the given groups")
    _check_action(act)
    vals = derivative_elements(act)
    return Subgroup(Gt, np.nonzero(_closure_mask(Gt, vals))[0], vals)


def iterated_derivative(A: FiniteGroup, B: FiniteGroup, act: ActionTable, k: int) -> Subgroup:
    """D_B^k(A) with D_B^0(A) = A.

    Raises if some term of the chain is not stable under the action, which
    cannot happen for a genuine action by automorphisms.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if act.actor is not B or act.target is not A:
        raise GroupError("action does not match the given groups")
    _check_action(act)
    S = A.whole()
    for _ in range(k):
        if not S.mask()[act.perm[:, S.array]].all():
            raise GroupError("derivative chain is not closed under the action")
        vals = derivative_elements(act, S.array)
        S = Subgroup(A, np.nonzero(_closure_mask(A, vals))[0], vals)
    return S


def frak_D(G: FiniteGroup, n: int) -> Subgroup:
    """𝔇ₙ(G): all g with [...[[g, x1], x2], ..., xn] = 1 for all xi in Γ_i(G).

    Every tuple of full Γ_i element sets is covered; brackets are propagated
    as value sets, which is equivalent to iterating tuples because the
    condition only depends on the values reached.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gammas = [t.array for t in derived_series(G, n).terms]
    members = []
    for g in range(G.order):
        vals = np.array([g])
        for gam in gammas:
            vals = commutator_values(G, vals, gam)
            if vals.size == 1 and vals[0] == 0:
                break
        if vals.size == 1 and vals[0] == 0:
            members.append(g)
    return Subgroup(G, members)


# ---------------------------------------------------------------------------
# predicates


def _prime_power(n: int) -> int | None:
    if n < 2:
        return None
    p = 2
    while n % p:
        p += 1
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def is_p_group_order(order: int, p: int) -> bool:
    while order % p == 0:
        order //= p
    return order == 1


@dataclass(frozen=True)
class Predicates:
    order: int
    is_abelian: bool
    is_perfect: bool
    is_nilpotent: bool
    nilpotency_class: int | None
    is_solvable: bool
    derived_length: int | None
    is_p_group: bool
    prime: int | None

    # finite polycyclic groups are exactly the finite solvable groups
    @property
    def is_polycyclic(self) -> bool:
        return self.is_solvable

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.is_abelian,
            "perfect": self.is_perfect,
            "nilpotent": self.is_nilpotent,
            "nilpotency_class": self.nilpotency_class,
            "solvable": self.is_solvable,
            "polycyclic(=solvable, finite)": self.is_polycyclic,
            "derived_length": self.derived_length,
            "p_group": self.is_p_group,
            "prime": self.prime,
        }


def _descend_to_trivial(G: FiniteGroup, step) -> int | None:
    """Steps needed for a descending chain to reach 1, or None if it stalls."""
    T = G.whole()
    k = 0
    while not T.is_trivial():
        N = step(T)
        if N == T:
            return None
        T = N
        k += 1
    return k


def predicates(G: FiniteGroup) -> Predicates:
    W = G.whole()
    ncls = _descend_to_trivial(G, lambda T: commutator_subgroup(G, T, W))
    dl = _descend_to_trivial(G, lambda T: commutator_subgroup(G, T, T))
    p = _prime_power(G.order)
    return Predicates(
        order=G.order,
        is_abelian=G.is_abelian(),
        is_perfect=commutator_subgroup(G, W, W).is_whole(),
        is_nilpotent=ncls is not None,
        nilpotency_class=ncls,
        is_solvable=dl is not None,
        derived_length=dl,
        is_p_group=p is not None or G.order == 1,
        prime=p,
    )


def subgroup_predicates(S: Subgroup) -> Predicates:
    H, _ = S.as_group()
    return predicates(H)
