import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fintri.algebra import AlgebraMorphism
from fintri.catalog import dual_numbers, nakayama, product_field
from fintri.hochschild import CoefficientError, cohomology_space, d_prime, random_cochain, self_coefficients
from fintri.lambda_sigma import (
    build_lambda_sigma,
    check_non_singularity,
    class_product,
    cone_differential,
    cone_product,
    cone_space,
    cone_unit,
    connecting_partial,
    euler_cochain,
    euler_element,
    i_star,
    lift_to_cone,
    null_homotopy,
    random_cone_cochain,
    sigma_operator,
    sigma_prime,
    transport_to_cone,
    verify_les,
)


def _ls(images, p=3):
    a = dual_numbers(p)
    return build_lambda_sigma(a, AlgebraMorphism.from_images(a, images))


RINGS = [
    lambda: _ls({"x": "x"}),
    lambda: _ls({"x": "-x"}),
    lambda: _ls({"x": "x"}, 2),
    lambda: build_lambda_sigma(nakayama(2, 1)),
]


def test_components_of_trivial_line():
    ls = build_lambda_sigma(product_field(1))
    for q in range(-3, 4):
        assert ls.component(q).dim == 1


def test_component_twist():
    ls = _ls({"x": "-x"})
    M = ls.component(1)
    assert M.check()
    a = ls.algebra
    x = a.basis_vector(1)
    one = a.unit
    # a . m = m . sigma(a) inside Lambda(sigma) for m = iota^-1
    m = ls.iota(-1)
    lhs = ls.base_element(x) * m
    rhs = m * ls.base_element(x).sigma()
    assert lhs == rhs
    assert ls.iota(1) * ls.iota(-1) == ls.base_element(one)


def test_element_product_is_associative(rng):
    ls = _ls({"x": "-x"})
    F = ls.field
    def rnd():
        return ls.element({q: F.random(rng, 2) for q in (-1, 0, 2)})
    for _ in range(20):
        x, y, z = rnd(), rnd(), rnd()
        assert (x * y) * z == x * (y * z)


def test_non_automorphism_rejected():
    a = dual_numbers(3)
    zero = AlgebraMorphism(a, a, a.field.zeros((a.dim, a.dim)))
    with pytest.raises((ValueError, CoefficientError)):
        build_lambda_sigma(a, zero)


def test_sigma_operator_identity_cases(rng):
    ls = _ls({"x": "x"})
    for n in range(3):
        c = random_cochain(ls.family, n, 0, rng)
        assert sigma_operator(ls, c).is_zero()
        c = random_cochain(ls.family, n, 1, rng)
        assert sigma_operator(ls, c) == c.scale(2)
    ls2 = _ls({"x": "x"}, 2)
    c = random_cochain(ls2.family, 1, 1, rng)
    assert sigma_operator(ls2, c).is_zero()


def test_sigma_operator_rejects_other_coefficients(rng):
    ls = _ls({"x": "-x"})
    c = random_cochain(self_coefficients(ls.algebra), 1, 0, rng)
    with pytest.raises(CoefficientError):
        sigma_prime(ls, c)


@settings(max_examples=40)
@given(st.sampled_from(range(len(RINGS))), st.integers(0, 3), st.integers(-2, 2), st.integers(0, 2**31))
def test_operator_commutes_with_d_prime(i, n, q, seed):
    ls = RINGS[i]()
    c = random_cochain(ls.family, n, q, np.random.default_rng(seed))
    assert d_prime(sigma_operator(ls, c)) == sigma_operator(ls, d_prime(c))


@settings(max_examples=40)
@given(st.sampled_from(range(len(RINGS))), st.integers(0, 3), st.integers(-2, 2), st.integers(0, 2**31))
def test_cone_differential_squares_to_zero(i, p, q, seed):
    ls = RINGS[i]()
    c = random_cone_cochain(ls, p, q, np.random.default_rng(seed))
    assert cone_differential(cone_differential(c)).is_zero()


@settings(max_examples=40)
@given(st.sampled_from(range(len(RINGS))), st.integers(0, 2), st.integers(0, 2), st.integers(-1, 1), st.integers(-1, 1), st.integers(0, 2**31))
def test_cone_leibniz(i, p, s, q, t, seed):
    ls = RINGS[i]()
    rng = np.random.default_rng(seed)
    x = random_cone_cochain(ls, p, q, rng)
    y = random_cone_cochain(ls, s, t, rng)
    lhs = cone_differential(cone_product(x, y))
    rhs = cone_product(cone_differential(x), y)
    second = cone_product(x, cone_differential(y))
    rhs = rhs + second if (p + q) % 2 == 0 else rhs - second
    assert lhs == rhs


def test_cone_unit_and_euler_element():
    for make in RINGS[:3]:
        ls = make()
        u = cone_unit(ls)
        assert cone_differential(u).is_zero()
        e = euler_element(ls)
        assert cone_differential(e).is_zero()
        rng = np.random.default_rng(0)
        x = random_cone_cochain(ls, 2, 1, rng)
        assert cone_product(u, x) == x and cone_product(x, u) == x


def test_fixed_cocycle_lifts(rng):
    ls = _ls({"x": "x"})
    c = d_prime(random_cochain(ls.family, 1, 0, rng))
    from fintri.lambda_sigma import ConeCochain
    from fintri.hochschild import zero_cochain

    assert sigma_operator(ls, c).is_zero()
    z = ConeCochain(ls, 2, 0, c, zero_cochain(ls.family, 1, 0))
    assert cone_differential(z).is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_cone_of_trivial_line(p):
    # Lambda = k, sigma = id: Lambda(sigma) = k[iota, iota^-1] with |iota| = -1.
    # HH^0 and HH^1 are one-dimensional in each even internal degree and
    # vanish otherwise, except in characteristic 2 where odd degrees also survive.
    ls = build_lambda_sigma(product_field(1, field=p))
    for q in (-1, 0, 1):
        expected = [1, 1, 0, 0] if (q % 2 == 0 or p == 2) else [0, 0, 0, 0]
        assert [cone_space(ls, n, q).dim for n in range(4)] == expected


def test_null_homotopy_of_euler_derivation():
    ls = _ls({"x": "-x"})
    delta = euler_cochain(ls)
    h = null_homotopy(ls, delta)
    assert h() == ls.one().scale(-1)
    assert transport_to_cone(ls, delta, 1, 0) == euler_element(ls)


@pytest.mark.parametrize("images", [{"x": "x"}, {"x": "-x"}])
def test_les_exact(images):
    rep = verify_les(_ls(images), max_p=3, max_q=1)
    assert rep.exact, rep.summary()


def test_les_exact_char2():
    assert verify_les(_ls({"x": "x"}, 2), max_p=3, max_q=1).exact


@pytest.mark.parametrize("images", [{"x": "x"}, {"x": "-x"}])
def test_partial_after_restriction_is_euler_multiplication(images):
    ls = _ls(images)
    e = cone_space(ls, 1, 0).class_of(euler_element(ls))
    F = ls.field
    for p in range(3):
        for q in (-1, 0, 1):
            for c in cone_space(ls, p, q).classes():
                lhs = connecting_partial(ls, i_star(c))
                assert F.equal(lhs.coordinates, class_product(e, c).coordinates)


def test_partial_images_multiply_to_zero():
    ls = _ls({"x": "-x"})
    F = ls.field
    for p, q in [(0, 0), (1, -1), (2, 1), (1, 0)]:
        for s, t in [(0, 0), (1, 1), (2, -1)]:
            for x in cohomology_space(ls.family, p, q).classes():
                for y in cohomology_space(ls.family, s, t).classes():
                    prod = class_product(connecting_partial(ls, x), connecting_partial(ls, y))
                    assert F.is_zero(prod.coordinates)


def test_edge_unit_lifts_and_is_non_singular():
    ls = _ls({"x": "-x"})
    x = cohomology_space(ls.family, 3, -1).classes()[0]
    u = lift_to_cone(ls, x)
    assert u is not None
    rep = check_non_singularity(u, max_p=3, max_q=1)
    assert rep.ok, rep.failures


def test_non_singularity_requires_bidegree():
    ls = _ls({"x": "-x"})
    u = cone_space(ls, 0, 0).class_of(cone_unit(ls))
    with pytest.raises(ValueError):
        check_non_singularity(u)
