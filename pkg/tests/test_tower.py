import numpy as np
import pytest

import oracles
from nonabtensor.catalog import build, catalog_names
from nonabtensor.errors import ResourceLimitError
from nonabtensor.series import derived_term, lower_central_term, upper_central_term
from nonabtensor.tensor import schur_multiplier
from nonabtensor.tower import (
    ExteriorTower,
    TensorPowerTower,
    alpha_chain_matches,
    alpha_map,
    iterated_exterior,
    lambda_image,
    mu_image,
    nilpotent_multiplier_bound,
    power_generator,
    presented_lambda_image,
    presented_mu_image,
    solvable_multiplier,
    tensor_power,
)


def test_power_levels_of_c2_and_trivial():
    tw = tensor_power(build("C2"), 4)
    assert [tw.level(i).group.order for i in range(1, 5)] == [2, 2, 2, 2]
    tw = tensor_power(build("C1"), 3)
    assert all(tw.level(i).group.order == 1 for i in range(1, 4))
    with pytest.raises(ValueError):
        tensor_power(build("C2"), 1)


def test_abelian_power_levels_are_bilinear():
    # all induced actions are trivial, so level n is the n-fold Z-tensor power
    for name in ("C3", "C4", "C2xC2", "C6"):
        G = build(name)
        ds = oracles.elementary_divisors(oracles.table(G))
        tw = TensorPowerTower(G)
        inv = ds
        for n in range(2, 4):
            inv = oracles.abelian_tensor(inv, ds)
            assert tw.level(n).group.order == oracles.order_of(inv), (name, n)


def test_s3_tower():
    tw = tensor_power(build("S3"), 3)
    assert [tw.level(i).group.order for i in (1, 2, 3)] == [6, 6, 6]
    assert tw.level(3).lam.image_subgroup().order == 3
    assert alpha_chain_matches(tw, 2) is True


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "D5", "C2xC2"])
def test_lambda_images(name):
    G = build(name)
    tw = TensorPowerTower(G)
    for n in (2, 3):
        lam = tw.level(n).lam
        assert lam.image_subgroup() == lower_central_term(G, n)
        assert presented_lambda_image(tw, n) == lower_central_term(G, n)


def test_lambda_vanishes_on_central_slots():
    G = build("D4")
    tw = TensorPowerTower(G)
    Z1 = upper_central_term(G, 1)
    for z in Z1.array:
        for g in range(G.order):
            x = power_generator(tw, [z, g])
            y = power_generator(tw, [g, z])
            assert tw.level(2).lam(x) == 0 and tw.level(2).lam(y) == 0
    Z2 = upper_central_term(G, 2)
    for z in Z2.array:
        for g in range(0, G.order, 3):
            for h in range(0, G.order, 2):
                for slots in ([z, g, h], [g, z, h], [g, h, z]):
                    assert tw.level(3).lam(power_generator(tw, slots)) == 0


def test_alpha_maps():
    tw = TensorPowerTower(build("D4"))
    assert alpha_map(tw, 1) is tw.level(2).lam
    assert alpha_chain_matches(tw, 2) is True
    with pytest.raises(ValueError):
        alpha_map(tw, 0)


def test_exterior_towers():
    assert [iterated_exterior(build("C2"), 3).level(i).group.order for i in (1, 2, 3)] == [2, 1, 1]
    assert [iterated_exterior(build("C2xC2"), 3).level(i).group.order for i in (1, 2, 3)] == [4, 2, 1]
    for name in ("S3", "D4", "A4", "Q8"):
        G = build(name)
        et = ExteriorTower(G)
        for n in (2, 3):
            assert et.level(n).mu.image_subgroup() == derived_term(G, n)
            assert presented_mu_image(et, n) == derived_term(G, n)
        # mu_3 is the composite of the step maps
        assert np.array_equal(et.level(2).mu.image[et.level(3).step.image], et.level(3).mu.image)


def test_multiplier_kernels():
    for name in ("C4", "D4", "Q8", "A4", "S3", "C2xC2"):
        G = build(name)
        assert solvable_multiplier(G, 1).order == schur_multiplier(G).order
    for n in ("C2", "C5", "C6"):
        G = build(n)
        assert solvable_multiplier(G, 1).is_trivial()
        assert solvable_multiplier(G, 2).is_trivial()
    # abelian G, k = 2: mu_3 has trivial image, so the kernel is everything
    G = build("C2xC2")
    K = solvable_multiplier(G, 2)
    assert K.is_whole()
    # cyclic G: lambda_2 has trivial image, the bound is the whole tensor square
    K = nilpotent_multiplier_bound(build("C5"), 1)
    assert K.order == 5 and K.is_whole()
    assert nilpotent_multiplier_bound(build("C1"), 2).order == 1


def test_image_fallback_above_cap():
    G = build("E2^4")
    img, checked = lambda_image(G, 3)
    assert img.is_trivial() and not checked
    img, checked = mu_image(G, 3)
    assert img.is_trivial() and checked
    img, checked = lambda_image(build("D4"), 3)
    assert img == lower_central_term(build("D4"), 3) and checked


def test_tower_respects_order_cap():
    with pytest.raises(ResourceLimitError):
        TensorPowerTower(build("E2^3"), order_cap=100).level(3)


@pytest.mark.parametrize("name", catalog_names(8))
def test_images_small(name):
    G = build(name)
    for n in (1, 2, 3):
        assert lambda_image(G, n)[0] == lower_central_term(G, n)
        assert mu_image(G, n)[0] == derived_term(G, n)
