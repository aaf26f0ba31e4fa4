import random

import pytest

from iqgalois.discriminant import NotFundamental, NotImaginary, genus_two_rank, validate
from iqgalois.idealgen import QuadraticInteger
from iqgalois.localtest import (
    GroupTooLarge,
    NotLocalUnit,
    PhiImage,
    _build_context_two,
    _engine_subgroup,
    build_context,
    generic_membership,
    injectivity_test,
    local_unit_image,
    order_two_form,
    subgroup_index,
    two_classification,
    two_direct_check,
)
from iqgalois.quadform import QuadForm

from _oracles import random_local_unit

# one discriminant per (prime, splitting type); all verified fundamental
GRID = {
    (3, "split"): -23,
    (3, "inert"): -7,
    (3, "ramified"): -15,
    (5, "split"): -19,
    (5, "inert"): -23,
    (5, "ramified"): -20,
    (7, "split"): -47,
    (7, "inert"): -4,
    (7, "ramified"): -7,
    (11, "split"): -7,
    (11, "inert"): -15,
    (11, "ramified"): -11,
    (13, "split"): -4,
    (13, "inert"): -8,
    (13, "ramified"): -39,
}


def test_build_context_split_root():
    ctx = build_context(validate(-23), 3)
    assert ctx.splitting == "split"
    assert ctx.root in (2, 7)  # the square roots of -23 = 4 mod 9
    assert (ctx.root**2 + 23) % 9 == 0


def test_build_context_inert_has_no_root():
    ctx = build_context(validate(-23), 5)
    assert ctx.splitting == "inert" and ctx.root is None


def test_build_context_ramified_zeta_flag():
    # D/(-3) = 5 = 2 mod 3: no local cube root of unity
    ctx = build_context(validate(-15), 3)
    assert ctx.splitting == "ramified" and ctx.local_zeta is None
    # D/(-3) = 13 = 1 mod 3: the cube root exists and cubes to one
    ctx39 = build_context(validate(-39), 3)
    assert ctx39.local_zeta is not None
    ring = ctx39.ring
    assert ring.pow(ctx39.local_zeta, 3) == ring.one
    assert ctx39.local_zeta != ring.one


def test_ramified_zeta_never_set_for_p_at_least_5():
    for m in range(3, 2000):
        try:
            d = validate(-m)
        except (NotFundamental, NotImaginary):
            continue
        for p in (5, 7, 11, 13):
            if m % p == 0:
                assert build_context(d, p).local_zeta is None


def test_image_of_one_is_trivial():
    for (p, _), D in GRID.items():
        ctx = build_context(validate(D), p)
        img = local_unit_image(ctx, QuadraticInteger(2, 0, D))
        assert img.trivial
        if img.coords is not None:
            assert img.coords == (0, 0)


def test_split_coordinates_frozen_values():
    ctx = build_context(validate(-23), 3)
    img = local_unit_image(ctx, QuadraticInteger(3, 1, -23))
    conj = local_unit_image(ctx, QuadraticInteger(3, -1, -23))
    assert not img.trivial and not conj.trivial
    # the conjugate swaps the two completion coordinates
    assert {img.coords, conj.coords} == {(2, 1), (1, 2)}


def test_inert_and_ramified_frozen_values():
    inert = local_unit_image(build_context(validate(-47), 5), QuadraticInteger(9, 1, -47))
    assert inert.coords == (0, 2) and not inert.trivial
    ram = local_unit_image(build_context(validate(-15), 3), QuadraticInteger(1, 1, -15))
    assert ram.coords == (2, 2) and not ram.trivial


def test_not_local_unit_rejected():
    ctx = build_context(validate(-23), 3)
    with pytest.raises(NotLocalUnit):
        local_unit_image(ctx, QuadraticInteger(1, 1, -23))  # norm 6
    with pytest.raises(NotLocalUnit):
        generic_membership(ctx, QuadraticInteger(1, 1, -23))


def test_generic_membership_constructed_members():
    rng = random.Random(40)
    for (p, _), D in list(GRID.items())[:9]:
        ctx = build_context(validate(D), p)
        ring = ctx.ring
        for _ in range(10):
            beta = random_local_unit(rng, D, p)
            elt = ring.pow(ring.embed(beta), p)
            if ctx.local_zeta is not None:
                elt = ring.mul(elt, ctx.local_zeta)
            h = _engine_subgroup(ring, p, ctx.torsion)
            assert elt in h


def test_engines_agree_on_random_units():
    rng = random.Random(41)
    for (p, typ), D in GRID.items():
        ctx = build_context(validate(D), p)
        assert ctx.splitting == typ
        for _ in range(30):
            alpha = random_local_unit(rng, D, p)
            closed = local_unit_image(ctx, alpha)
            brute = generic_membership(ctx, alpha)
            assert closed.trivial == brute.trivial, (p, typ, D, alpha)


def test_coordinates_are_additive():
    rng = random.Random(42)
    for (p, typ), D in GRID.items():
        ctx = build_context(validate(D), p)
        if ctx.local_zeta is not None:
            continue  # no closed coordinates in the delegated case
        for _ in range(25):
            a, b = random_local_unit(rng, D, p), random_local_unit(rng, D, p)
            ia, ib = local_unit_image(ctx, a), local_unit_image(ctx, b)
            iab = local_unit_image(ctx, a.mul(b))
            expected = ((ia.coords[0] + ib.coords[0]) % p, (ia.coords[1] + ib.coords[1]) % p)
            assert iab.coords == expected


def test_group_too_large():
    d = validate(-23)
    with pytest.raises(GroupTooLarge):
        generic_membership(build_context(d, 29), QuadraticInteger(2, 0, -23))


def test_quotient_index_is_p_squared():
    cases = [(3, -23), (3, -7), (3, -15), (3, -39), (5, -19), (5, -23), (5, -20)]
    for p, D in cases:
        assert subgroup_index(build_context(validate(D), p)) == p * p
    for D in (-15, -20, -24, -35, -68):
        assert subgroup_index(_build_context_two(validate(D))) == 4


def test_injectivity_rank_one_and_determinant():
    ctx = build_context(validate(-19), 5)
    assert injectivity_test(ctx, [PhiImage(False, (1, 0))])
    assert not injectivity_test(ctx, [PhiImage(True, (0, 0))])
    assert not injectivity_test(ctx, [PhiImage(False, (1, 0)), PhiImage(False, (2, 0))])
    assert injectivity_test(ctx, [PhiImage(False, (1, 2)), PhiImage(False, (0, 3))])
    with pytest.raises(ValueError):
        injectivity_test(ctx, [])


def test_injectivity_membership_path():
    # synthetic rank-2 inputs through the enumerative engine
    ctx = build_context(validate(-39), 3)
    ring = ctx.ring
    h = _engine_subgroup(ring, 3, ctx.torsion)
    units = ring.units()
    outside = [u for u in units if u not in h]
    x1 = outside[0]
    dependent = ring.mul(x1, next(iter(h)))
    img_x1 = PhiImage(False, None, x1)
    assert not injectivity_test(ctx, [img_x1, PhiImage(False, None, dependent)])
    independent = None
    for cand in outside:
        cur, ok = cand, True
        xinv = ring.inv(x1)
        for _ in range(3):
            if cur in h:
                ok = False
                break
            cur = ring.mul(cur, xinv)
        if ok:
            independent = cand
            break
    assert independent is not None
    assert injectivity_test(ctx, [img_x1, PhiImage(False, None, independent)])


def test_two_classification_examples():
    assert two_classification(validate(-20), 1) == "injective"
    assert two_classification(validate(-35), 1) == "noninjective"
    assert two_classification(validate(-24), 1) == "injective"
    # 5 = -3 mod 8, so -40 sits in the -8p family (confirmed by the oracle)
    assert two_classification(validate(-40), 1) == "injective"
    assert two_classification(validate(-164), 1) == "noninjective"
    assert two_classification(validate(-7), 0) == "skipped"
    assert two_classification(validate(-84), 2) == "noninjective"


def test_order_two_form():
    f = order_two_form(validate(-20))
    assert f == QuadForm(2, 2, 3)
    g = order_two_form(validate(-35))
    assert g.disc == -35


def test_two_direct_check_examples():
    assert two_direct_check(validate(-20)) == "injective"
    assert two_direct_check(validate(-35)) == "noninjective"
    assert two_direct_check(validate(-40)) == "injective"
    assert two_direct_check(validate(-164)) == "noninjective"


def test_two_classification_matches_direct_check_small():
    for m in range(3, 3000):
        try:
            d = validate(-m)
        except (NotFundamental, NotImaginary):
            continue
        if d.num_prime_divisors != 2:
            continue
        assert two_classification(d, genus_two_rank(d)) == two_direct_check(d), f"D=-{m}"
