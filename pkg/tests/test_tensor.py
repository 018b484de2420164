import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nonabtensor.abelian import abelian_invariants
from nonabtensor.catalog import build, catalog_names, cyclic
from nonabtensor.errors import GroupError, IncompatibleActionsError, ResourceLimitError
from nonabtensor.fp import first_relator_failure, todd_coxeter
from nonabtensor.group import ActionTable, conjugation_action, direct_product, trivial_action
from nonabtensor.tensor import (
    CompatibilityViolation,
    CompatiblePair,
    assignment_violation,
    check_compatibility,
    class_generators,
    direct_presentation,
    dropped_relator_failure,
    exterior_projection,
    exterior_square,
    mu_hom,
    nu_presentation,
    relation_violation,
    require_compatible,
    schur_multiplier,
    self_pair,
    tensor_order,
    tensor_order_lower_bound,
    tensor_product,
    tensor_square,
    tensor_summary,
)


def trivial_pair(G, H):
    return require_compatible(G, H, trivial_action(H, G), trivial_action(G, H))


def test_self_and_trivial_pairs_are_compatible():
    for name in catalog_names(12):
        G = build(name)
        c = conjugation_action(G)
        assert isinstance(check_compatibility(G, G, c, c), CompatiblePair)
    G, H = build("S3"), build("C4")
    assert isinstance(check_compatibility(G, H, trivial_action(H, G), trivial_action(G, H)), CompatiblePair)


def test_incompatible_pair_found_by_search():
    names = ["C1", "C2", "C3", "C4", "C2xC2"]
    tables = {n: oracles.table(build(n)) for n in names}
    hit = oracles.first_incompatible(list(tables.values()))
    assert hit is not None
    mulG, mulH, aHG, aGH = hit
    G = next(build(n) for n in names if tables[n] == mulG)
    H = next(build(n) for n in names if tables[n] == mulH)
    out = check_compatibility(G, H, ActionTable(H, G, np.array(aHG)), ActionTable(G, H, np.array(aGH)))
    assert isinstance(out, CompatibilityViolation) and out.equation in (1, 2)
    with pytest.raises(IncompatibleActionsError):
        require_compatible(G, H, ActionTable(H, G, np.array(aHG)), ActionTable(G, H, np.array(aGH)))


def test_compatibility_agrees_with_oracle_exhaustively():
    # all action pairs between C3 and C2xC2, compared one by one
    G, H = build("C3"), build("C2xC2")
    mG, mH = oracles.table(G), oracles.table(H)
    for aHG in oracles.actions(mH, mG):
        for aGH in oracles.actions(mG, mH):
            ok = oracles.compatible(mG, mH, aHG, aGH)
            out = check_compatibility(G, H, ActionTable(H, G, np.array(aHG)), ActionTable(G, H, np.array(aGH)))
            assert isinstance(out, CompatiblePair) == ok


def test_trivial_factor_and_small_products():
    C1 = build("C1")
    for name in ("C1", "S3", "D4"):
        H = build(name)
        assert tensor_product(trivial_pair(C1, H)).order == 1
    C2 = cyclic(2)
    assert tensor_product(trivial_pair(C2, C2)).order == 2
    assert tensor_square(build("C3")).order == 3
    assert tensor_square(build("C2xC2")).order == 16
    assert exterior_square(build("C2xC2")).order == 2
    assert exterior_square(build("C7")).order == 1
    assert tensor_square(C1).order == 1 and exterior_square(C1).order == 1


def test_trivial_actions_give_bilinear_product():
    for g, h in (("C4", "C6"), ("C2xC2", "C4"), ("C3", "C2xC6"), ("C2xC4", "C2xC2")):
        G, H = build(g), build(h)
        tg = tensor_product(trivial_pair(G, H))
        assert tg.abelian_invariants() == oracles.abelian_tensor(abelian_invariants(G), abelian_invariants(H))
    # nonabelian factors with trivial actions see only the abelianizations
    G, H = build("S3"), build("C4")
    assert tensor_product(trivial_pair(G, H)).order == 2


@pytest.mark.parametrize("name", catalog_names(16, abelian=True))
def test_abelian_squares_match_oracle(name):
    G = build(name)
    ds = oracles.elementary_divisors(oracles.table(G))
    if G.order == 16 and len(ds) == 4:
        s = tensor_summary(self_pair(G))
        assert s.order == oracles.order_of(oracles.abelian_tensor(ds, ds))
    else:
        tg = tensor_square(G)
        assert tg.abelian_invariants() == oracles.abelian_tensor(ds, ds)
    assert exterior_square(G).abelian_invariants() == oracles.abelian_exterior(ds)


# frozen engine values, each cross-checked against the nu strategy below
NONABELIAN = {
    "S3": (6, [6], 3, 1),
    "D4": (32, [2, 2, 2, 4], 4, 2),
    "Q8": (64, [2, 2, 4, 4], 2, 1),
    "A4": (24, [2, 6], 8, 2),
    "D5": (10, [10], 5, 1),
    "D6": (48, [2, 2, 2, 6], 6, 2),
    "S4": (48, [6], 24, 2),
}


@pytest.mark.parametrize("name", sorted(NONABELIAN))
def test_nonabelian_squares(name):
    G = build(name)
    order, inv, ext, mult = NONABELIAN[name]
    for strategy in ("direct", "nu"):
        tg = tensor_square(G, strategy)
        assert (tg.order, tg.abelian_invariants()) == (order, inv)
        assert relation_violation(tg) is None
        eg = exterior_square(G, strategy=strategy)
        assert eg.order == ext
        assert schur_multiplier(G, strategy=strategy).order == mult
    # |G ^ G| = |[G, G]| |M(G)|
    assert ext == mu_hom(exterior_square(G)).image_subgroup().order * mult


def test_relations_hold_exhaustively():
    for name in ("S3", "D4", "Q8", "A4", "C2xC4"):
        G = build(name)
        for tg in (tensor_square(G), exterior_square(G), tensor_square(G, "nu")):
            assert relation_violation(tg) is None
            if tg.exterior:
                assert (np.diagonal(tg.pairing) == 0).all()


def test_relation_check_catches_bad_assignment():
    G = build("S3")
    tg = tensor_square(G)
    bad = tg.pairing.copy()
    bad[1, 2], bad[2, 1] = bad[2, 1], bad[1, 2]
    assert assignment_violation(self_pair(G), bad, tg.T) is not None
    # the commutator map satisfies every relation, g ^ g = 1 included
    assert assignment_violation(self_pair(G), G.commutator_table(), G, exterior=True) is None


def test_mu_and_projection():
    for name in ("S3", "D4", "A4", "C2xC2"):
        G = build(name)
        tsq, ext = tensor_square(G), exterior_square(G)
        lam = mu_hom(tsq)
        assert lam.image_subgroup().elements == oracles.lower_central(oracles.table(G), 2)
        proj = exterior_projection(tsq, ext)
        assert proj.is_surjective()
        # the commutator map factors through the projection
        assert np.array_equal(mu_hom(ext).image[proj.image], lam.image)
    for name in catalog_names(16, abelian=True):
        assert mu_hom(exterior_square(build(name))).image_subgroup().is_trivial()


def test_perfect_collapse_a5():
    A5 = build("A5")
    assert tensor_square(A5).order == exterior_square(A5).order


def test_schur_multipliers():
    for n in range(1, 13):
        assert schur_multiplier(cyclic(n)).order == 1
    assert schur_multiplier(build("C2xC2")).order == 2
    assert schur_multiplier(build("C3xC3")).order == 3


def test_class_generators():
    for name in catalog_names(24):
        G = build(name)
        S = class_generators(G)
        assert len(S) >= 1
        closure = oracles.closure(oracles.table(G), S.tolist())
        assert len(closure) == G.order
        # a union of conjugacy classes
        conj = {int(G.mul[G.mul[g, s], G.inv[g]]) for g in range(G.order) for s in S}
        assert conj <= set(S.tolist()) or G.order == 1


def test_direct_presentation_size():
    G = build("S3")
    dp = direct_presentation(self_pair(G))
    # one generator per pair of nontrivial class generators
    S = class_generators(G)
    assert dp.presentation.num_gens == (len(S) - (S[0] == 0)) ** 2 == 25
    assert len(dp.words) == G.order and all(len(r) == G.order for r in dp.words)
    with pytest.raises(GroupError):
        direct_presentation(trivial_pair(G, build("C2")), exterior=True)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "C3xC3", "C2xC4"])
def test_dropped_relator_check_matches_full_scan(name):
    G = build(name)
    k = len(G.gens)
    full, _ = nu_presentation(G, False, "full")
    for tier in ("gens", "mixed"):
        P, comm = nu_presentation(G, False, tier)
        out = todd_coxeter(P, [(k + i + 1,) for i in range(k)], 10**6)
        assert (dropped_relator_failure(out.table, G, tier, comm) is None) == (
            first_relator_failure(out.table, full) is None)
        assert out.index == G.order * tensor_square(G).order


def test_coset_precheck_fails_fast():
    E = build("E2^4")
    with pytest.raises(ResourceLimitError) as e:
        tensor_order(self_pair(E), "nu")
    assert e.value.kind == "cosets"
    with pytest.raises(ResourceLimitError):
        tensor_summary(self_pair(E), "direct", limit=1000)


def test_order_lower_bound_divides():
    for name in catalog_names(16):
        G = build(name)
        if name == "E2^4":
            continue
        tg, eg = tensor_square(G), exterior_square(G)
        assert tg.order % tensor_order_lower_bound(self_pair(G)) == 0
        assert eg.order % tensor_order_lower_bound(self_pair(G), True) == 0


def test_order_cap():
    G = build("C2xC2xC4")
    with pytest.raises(ResourceLimitError) as e:
        tensor_square(G, order_cap=100)
    assert e.value.kind == "order"
    s = tensor_summary(self_pair(G), order_cap=100)
    ds = abelian_invariants(G)
    assert s.order == 1024 and s.invariants == oracles.abelian_tensor(ds, ds)
    assert tensor_order(self_pair(G)) == 1024
    s = tensor_summary(self_pair(build("D4")), "nu", order_cap=10)
    assert (s.order, s.invariants, s.abelian) == (32, [2, 2, 2, 4], True)


def test_argument_errors():
    G = build("S3")
    with pytest.raises(ValueError):
        tensor_square(G, "magic")
    H = build("C2")
    with pytest.raises(GroupError):
        tensor_product(trivial_pair(G, H), "nu")
    unchecked = CompatiblePair(G, H, trivial_action(H, G), trivial_action(G, H))
    with pytest.raises(GroupError):
        tensor_product(unchecked)


def test_coset_limit():
    with pytest.raises(ResourceLimitError):
        tensor_square(build("Q8"), limit=10)


def test_repeated_calls_rebind_origin():
    G = build("D4")
    p1, p2 = self_pair(G), self_pair(G)
    assert tensor_product(p1).origin is p1 and tensor_product(p2).origin is p2


@settings(max_examples=15, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=2))
def test_random_abelian_squares(orders):
    G = cyclic(orders[0])
    for n in orders[1:]:
        G = direct_product(G, cyclic(n))
    ds = oracles.elementary_divisors(oracles.table(G))
    assert tensor_square(G).abelian_invariants() == oracles.abelian_tensor(ds, ds)
    assert exterior_square(G).order == oracles.order_of(oracles.abelian_exterior(ds))
    assert schur_multiplier(G).order == oracles.order_of(oracles.abelian_exterior(ds))
