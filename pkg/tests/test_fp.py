import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonabtensor.abelian import abelian_invariants
from nonabtensor.catalog import build, catalog_names
from nonabtensor.errors import GroupError, ResourceLimitError
from nonabtensor.fp import (
    Presentation,
    WordEvaluator,
    commutator_word,
    cyclic_canonical,
    first_relator_failure,
    free_reduce,
    presentation_of,
    realize_group,
    relator_violations,
    todd_coxeter,
    word_inverse,
)

a, b = 1, 2
A, B = -1, -2


def dihedral(n):
    return Presentation(2, [(a,) * n, (b, b), (a, b) * 2])


def test_word_helpers():
    assert free_reduce((a, A, b, a, A, B)) == ()
    assert free_reduce((a, b, B, b)) == (a, b)
    assert word_inverse((a, b, A)) == (a, B, A)
    assert commutator_word((a,), (b,)) == (a, b, A, B)
    with pytest.raises(GroupError):
        Presentation(1, [(2,)])


def test_small_indices():
    assert todd_coxeter(Presentation(1, [(a,) * 5])).index == 5
    assert todd_coxeter(Presentation(2, [(a, a), (b, b), (a, b, a, b)])).index == 4
    P = dihedral(5)
    assert todd_coxeter(P, [(a,), (b,)]).index == 1
    assert todd_coxeter(P, [(a,)]).index == 2


@pytest.mark.parametrize("strategy", ["felsch", "hlt"])
def test_strategies_agree(strategy):
    out = todd_coxeter(dihedral(7), (), 1000, strategy)
    assert out.index == 14
    assert relator_violations(out, dihedral(7)) == []


def test_realize_s3():
    G, ev = realize_group(Presentation(2, [(a,) * 3, (b, b), (a, b) * 2]))
    S3 = build("S3")
    assert G.order == 6 and G.center().is_trivial()
    assert abelian_invariants(G) == abelian_invariants(S3)
    assert isinstance(ev, WordEvaluator)
    assert ev((a, a, a)) == 0 and ev((a, b, a, b)) == 0
    C3, _ = realize_group(Presentation(1, [(a,) * 3]))
    assert C3.order == 3


def test_infinite_group_hits_limit():
    out = todd_coxeter(Presentation(1, []), (), 50)
    assert out.exceeded and out.index is None
    with pytest.raises(ResourceLimitError) as e:
        realize_group(Presentation(1, []), 50)
    assert e.value.kind == "cosets"
    with pytest.raises(ValueError):
        todd_coxeter(Presentation(1, []), (), 0)


def test_determinism_and_monotonicity():
    P = dihedral(6)
    t1 = todd_coxeter(P, (), 200).table
    t2 = todd_coxeter(P, (), 200).table
    t3 = todd_coxeter(P, (), 10_000).table
    assert np.array_equal(t1, t2) and np.array_equal(t1, t3)


def test_presentation_of_examples():
    P = presentation_of(build("C1"))
    assert P.num_gens == 1
    assert realize_group(P)[0].order == 1
    assert realize_group(presentation_of(build("C2")))[0].order == 2
    assert realize_group(presentation_of(build("D4")))[0].order == 8


def test_relator_scan_finds_failure():
    out = todd_coxeter(dihedral(4))
    assert first_relator_failure(out.table, dihedral(4)) is None
    # the order-8 table does not satisfy a^2 = 1
    assert first_relator_failure(out.table, Presentation(2, [(a, a)])) is not None


@pytest.mark.parametrize("name", catalog_names(12))
def test_round_trip_small(name):
    G = build(name)
    H, _ = realize_group(presentation_of(G))
    assert H.order == G.order and abelian_invariants(H) == abelian_invariants(G)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30))
def test_cyclic_index(n):
    assert todd_coxeter(Presentation(1, [(a,) * n])).index == n


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 25))
def test_dihedral_order_and_relators(n):
    out = todd_coxeter(dihedral(n))
    assert out.index == 2 * n
    assert first_relator_failure(out.table, dihedral(n)) is None
    G, ev = realize_group(dihedral(n))
    assert ev((a,) * n) == 0 and G.element_order(ev((a,))) == n


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_abelian_presentations(m, n):
    P = Presentation(2, [(a,) * m, (b,) * n, commutator_word((a,), (b,))])
    G, _ = realize_group(P)
    assert G.order == m * n and G.is_abelian()


def test_cyclic_canonical():
    assert cyclic_canonical([1, 2, -1]) == (-2,)
    assert cyclic_canonical([1, -1]) == ()
    w = (2, 1, -3, 1)
    rotations = {w[i:] + w[:i] for i in range(len(w))}
    forms = {cyclic_canonical(r) for r in rotations}
    forms |= {cyclic_canonical(word_inverse(r)) for r in rotations}
    assert forms == {cyclic_canonical(w)}
    assert cyclic_canonical(w) == min(rotations | {word_inverse(r) for r in rotations})


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=8), st.integers(0, 7))
def test_cyclic_canonical_conjugation_invariant(w, k):
    u = tuple(w[:k])
    conj = free_reduce(u + tuple(w) + word_inverse(u))
    assert cyclic_canonical(conj) == cyclic_canonical(w)
    assert cyclic_canonical(word_inverse(tuple(w))) == cyclic_canonical(w)
