"""Tensor powers, iterated exterior squares and their bracket maps.

``G^(x)1 = G`` and ``G^(x)(n+1) = G^(x)n (x) G``, where ``G`` acts on
``G^(x)n`` diagonally through the pairing and ``G^(x)n`` acts on ``G`` by
conjugation through ``lambda_n``.  ``lambda_(n+1)(a (x) g) = [lambda_n(a), g]``.

``G^^1 = G`` and ``G^^(n+1) = G^^n ^ G^^n``; each step map sends
``x ^ y`` to ``[x, y]`` and ``mu_n`` is their composite down to ``G``.

Levels are built lazily.  Every induced action is extended from pairing
generators, checked as an action by automorphisms and checked for
compatibility before the next level is enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import EngineError, GroupError, ResourceLimitError
from .group import (
    ActionTable,
    FiniteGroup,
    GroupHom,
    Obstruction,
    Subgroup,
    _closure_mask,
    commutator_values,
    conjugation_action,
)
from .tensor import (
    CompatiblePair,
    TensorGroup,
    assignment_violation,
    mu_hom,
    pairing_hom,
    require_compatible,
    self_pair,
    tensor_product,
)


def _conj_table(G: FiniteGroup) -> np.ndarray:
    """``c[g, x] = g x g^-1``."""
    return G.mul[G.mul, G.inv[:, None]]


def _identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), verify=False)


def _action_from_generators(actor: FiniteGroup, target: FiniteGroup,
                            gen_perms: dict[int, np.ndarray]) -> ActionTable:
    """Action table from automorphisms for ``actor.gens``, composed along words."""
    perm = np.full((actor.order, target.order), -1, dtype=np.int64)
    perm[0] = np.arange(target.order)
    done = np.zeros(actor.order, dtype=bool)
    done[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for g in frontier:
            for s, ps in gen_perms.items():
                h = int(actor.mul[g, s])
                if not done[h]:
                    # ^(g s) x = ^g(^s x)
                    perm[h] = perm[g][ps]
                    done[h] = True
                    nxt.append(h)
        frontier = nxt
    if not done.all():
        raise GroupError("actor generators do not generate the actor")
    act = ActionTable(actor, target, perm)
    bad = act.violation()
    if bad is not None:
        raise EngineError(f"induced action is not an action by automorphisms: {bad}")
    return act


# ---------------------------------------------------------------------------
# tensor powers


@dataclass(frozen=True)
class PowerLevel:
    """``G^(x)n`` with ``lambda_n`` and the diagonal action of ``G`` on it."""

    n: int
    group: FiniteGroup
    tensor: TensorGroup | None     # None at n = 1
    lam: GroupHom                  # G^(x)n -> G
    diagonal: ActionTable          # G acting on G^(x)n

    def action_on_base(self) -> ActionTable:
        """``G^(x)n`` acting on ``G`` by conjugation through ``lambda_n``."""
        G = self.lam.codomain
        return ActionTable(self.group, G, _conj_table(G)[self.lam.image])


class TensorPowerTower:
    """Lazily built tower ``G, G (x) G, (G (x) G) (x) G, ...``.

    ``strategy`` is used for the tensor square; higher levels always use
    the direct construction since their actions are not conjugation.
    """

    def __init__(self, base: FiniteGroup, limit: int = config.DEFAULT_COSET_LIMIT,
                 strategy: str = "direct", order_cap: int | None = None):
        self.base = base
        self.limit = limit
        self.strategy = strategy
        self.order_cap = order_cap
        self._levels: list[PowerLevel] = [
            PowerLevel(1, base, None, _identity_hom(base), conjugation_action(base))]

    @property
    def built(self) -> int:
        return len(self._levels)

    def level(self, n: int) -> PowerLevel:
        if n < 1:
            raise ValueError("levels start at 1")
        while len(self._levels) < n:
            self._levels.append(self._next(self._levels[-1]))
        return self._levels[n - 1]

    def next_pair(self, n: int) -> CompatiblePair:
        """The verified pair ``(G^(x)n, G)`` whose tensor product is level ``n+1``."""
        if n == 1:
            return self_pair(self.base)
        L = self.level(n)
        return require_compatible(L.group, self.base, L.diagonal, L.action_on_base())

    def bracket_values(self, n: int) -> np.ndarray:
        """``[lambda_n(a), g]`` for every ``a`` in level ``n`` and ``g`` in ``G``."""
        L = self.level(n)
        return self.base.commutator_table()[L.lam.image]

    def _next(self, L: PowerLevel) -> PowerLevel:
        G = self.base
        pair = self.next_pair(L.n)
        strategy = self.strategy if L.n == 1 else "direct"
        tg = tensor_product(pair, strategy, self.limit, order_cap=self.order_cap)
        lam = pairing_hom(tg, self.bracket_values(L.n), G)
        if isinstance(lam, Obstruction):
            raise EngineError(f"lambda_{L.n + 1} is not well defined: {lam}")
        # ^g(a (x) h) = ^g a (x) ^g h
        cg = _conj_table(G)
        gen_perms = {}
        for s in G.gens:
            vals = tg.pairing[L.diagonal.perm[s]][:, cg[s]]
            hom = pairing_hom(tg, vals, tg.T)
            if isinstance(hom, Obstruction):
                raise EngineError(f"diagonal action of {s} is not well defined: {hom}")
            gen_perms[s] = hom.image
        diag = _action_from_generators(G, tg.T, gen_perms)
        return PowerLevel(L.n + 1, tg.T, tg, lam, diag)


def tensor_power(G: FiniteGroup, n: int, limit: int = config.DEFAULT_COSET_LIMIT,
                 strategy: str = "direct", order_cap: int | None = None) -> TensorPowerTower:
    if n < 2:
        raise ValueError("n must be >= 2")
    tower = TensorPowerTower(G, limit, strategy, order_cap)
    tower.level(n)
    return tower


def lambda_hom(tower: TensorPowerTower, n: int) -> GroupHom:
    return tower.level(n).lam


def presented_lambda_image(tower: TensorPowerTower, n: int) -> Subgroup:
    """Image of ``lambda_n`` without enumerating ``G^(x)n``.

    Needs level ``n-1`` only: the bracket assignment is checked against
    every defining relation of ``G^(x)(n-1) (x) G``, so it defines a
    homomorphism on that presented group, whose image is generated by the
    assigned values.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    pair = tower.next_pair(n - 1)
    vals = tower.bracket_values(n - 1)
    bad = assignment_violation(pair, vals, tower.base)
    if bad is not None:
        raise EngineError(f"bracket assignment breaks a relation: {bad}")
    gens = np.unique(vals)
    return Subgroup(tower.base, np.nonzero(_closure_mask(tower.base, gens))[0], gens)


def power_generator(tower: TensorPowerTower, slots) -> int:
    """Element ``(...((g1 (x) g2) (x) g3) ... ) (x) gk`` of level ``k``."""
    slots = [int(x) for x in slots]
    if len(slots) < 2:
        raise ValueError("need at least two slots")
    x = slots[0]
    for i, g in enumerate(slots[1:], start=2):
        x = int(tower.level(i).tensor.pairing[x, g])
    return x


def alpha_map(tower: TensorPowerTower, n: int) -> GroupHom | Obstruction:
    """``(a (x) g) -> alpha_(n-1)(a) (x) g`` from level ``n+1`` to level ``n``.

    ``alpha_1`` is ``lambda_2``.  Returns the obstruction if the assignment
    (or a lower alpha it relies on) does not extend.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return tower.level(2).lam
    lower = alpha_map(tower, n - 1)
    if isinstance(lower, Obstruction):
        return lower
    top = tower.level(n + 1).tensor
    vals = tower.level(n).tensor.pairing[lower.image]
    return pairing_hom(top, vals, tower.level(n).group)


def alpha_chain_matches(tower: TensorPowerTower, k: int) -> bool | Obstruction:
    """Whether ``lambda_(k+1) = alpha_1 o alpha_2 o ... o alpha_k``."""
    maps = []
    for i in range(1, k + 1):
        a = alpha_map(tower, i)
        if isinstance(a, Obstruction):
            return a
        maps.append(a)
    image = np.arange(tower.level(k + 1).group.order)
    for a in reversed(maps):
        image = a.image[image]
    return bool(np.array_equal(image, tower.level(k + 1).lam.image))


# ---------------------------------------------------------------------------
# iterated exterior squares


@dataclass(frozen=True)
class ExteriorLevel:
    n: int
    group: FiniteGroup
    exterior: TensorGroup | None   # None at n = 1
    step: GroupHom | None          # G^^n -> G^^(n-1), x ^ y -> [x, y]
    mu: GroupHom                   # G^^n -> G


class ExteriorTower:
    def __init__(self, base: FiniteGroup, limit: int = config.DEFAULT_COSET_LIMIT,
                 strategy: str = "direct", order_cap: int | None = None):
        self.base = base
        self.limit = limit
        self.strategy = strategy
        self.order_cap = order_cap
        self._levels: list[ExteriorLevel] = [ExteriorLevel(1, base, None, None, _identity_hom(base))]

    @property
    def built(self) -> int:
        return len(self._levels)

    def level(self, n: int) -> ExteriorLevel:
        if n < 1:
            raise ValueError("levels start at 1")
        while len(self._levels) < n:
            L = self._levels[-1]
            E = tensor_product(self_pair(L.group), self.strategy, self.limit,
                               exterior=True, order_cap=self.order_cap)
            step = mu_hom(E)
            self._levels.append(ExteriorLevel(L.n + 1, E.T, E, step, L.mu.compose(step)))
        return self._levels[n - 1]


def iterated_exterior(G: FiniteGroup, n: int, limit: int = config.DEFAULT_COSET_LIMIT,
                      strategy: str = "direct", order_cap: int | None = None) -> ExteriorTower:
    if n < 1:
        raise ValueError("n must be >= 1")
    tower = ExteriorTower(G, limit, strategy, order_cap)
    tower.level(n)
    return tower


def presented_mu_image(tower: ExteriorTower, n: int) -> Subgroup:
    """Image of ``mu_n`` using level ``n-1`` only.

    The commutator assignment on ``G^^(n-1) ^ G^^(n-1)`` is checked against
    every defining relation; its image is then the subgroup generated by
    all commutators, pushed down by ``mu_(n-1)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    L = tower.level(n - 1)
    E = L.group
    vals = E.commutator_table()
    bad = assignment_violation(self_pair(E), vals, E, exterior=True)
    if bad is not None:
        raise EngineError(f"commutator assignment breaks a relation: {bad}")
    step_image = np.nonzero(_closure_mask(E, np.unique(vals)))[0]
    img = np.unique(L.mu.image[step_image])
    return Subgroup(tower.base, img)


def _bracket_closure(G: FiniteGroup, A, B) -> Subgroup:
    vals = np.unique(commutator_values(G, np.asarray(A), np.asarray(B)))
    return Subgroup(G, np.nonzero(_closure_mask(G, vals))[0], vals)


def lambda_image(G: FiniteGroup, n: int, limit: int = config.DEFAULT_COSET_LIMIT) -> tuple[Subgroup, bool]:
    """``Im lambda_n`` and whether the bracket assignment was checked.

    When level ``n-1`` is above the order cap the relation check cannot
    run; the image is then generated from the generator values
    ``[lambda_(n-1)(a), g]`` and the flag is False.
    """
    if n == 1:
        return Subgroup(G, np.arange(G.order)), True
    try:
        return presented_lambda_image(TensorPowerTower(G, limit), n), True
    except ResourceLimitError as e:
        if e.kind != "order":
            raise
    lower, _ = lambda_image(G, n - 1, limit)
    return _bracket_closure(G, lower.array, np.arange(G.order)), False


def mu_image(G: FiniteGroup, n: int, limit: int = config.DEFAULT_COSET_LIMIT) -> tuple[Subgroup, bool]:
    """``Im mu_n`` with the same fallback as :func:`lambda_image`."""
    if n == 1:
        return Subgroup(G, np.arange(G.order)), True
    try:
        return presented_mu_image(ExteriorTower(G, limit), n), True
    except ResourceLimitError as e:
        if e.kind != "order":
            raise
    lower, _ = mu_image(G, n - 1, limit)
    return _bracket_closure(G, lower.array, lower.array), False


# ---------------------------------------------------------------------------
# multiplier kernels


def solvable_multiplier(G: FiniteGroup, k: int, limit: int = config.DEFAULT_COSET_LIMIT,
                        strategy: str = "direct") -> Subgroup:
    """Kernel of ``mu_(k+1)`` inside ``G^^(k+1)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return ExteriorTower(G, limit, strategy).level(k + 1).mu.kernel()


def nilpotent_multiplier_bound(G: FiniteGroup, k: int, limit: int = config.DEFAULT_COSET_LIMIT,
                               strategy: str = "direct") -> Subgroup:
    """Kernel of ``lambda_(k+1)`` inside ``G^(x)(k+1)``.

    The k-nilpotent multiplier is a quotient of this kernel, so its order
    is only an upper bound for that multiplier.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return TensorPowerTower(G, limit, strategy).level(k + 1).lam.kernel()
