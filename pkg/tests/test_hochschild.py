import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fintri.algebra import AlgebraMorphism
from fintri.catalog import dual_numbers, dual_numbers_square, nakayama, product_field, truncated_poly
from fintri.hochschild import (
    CoefficientError,
    HochschildCochain,
    TwistedFamily,
    beta_cochain,
    bracket,
    bullet_along_functor,
    class_to_syzygy_map,
    cohomology_space,
    cup_product,
    d_prime,
    differential,
    dot_product,
    euler_derivation,
    gerstenhaber_square,
    hh_dimensions_via_resolution,
    is_edge_unit,
    pre_lie,
    product_cochain,
    pullback,
    pulled_back_coefficients,
    pushforward,
    random_cochain,
    self_coefficients,
    zero_cochain,
)
from fintri.modules import (
    is_stable_isomorphism,
    minimal_resolution,
    regular_bimodule,
)


def naive_differential(c):
    """Direct evaluation of d on every basis tuple, self coefficients."""
    a = c.algebra
    F = a.field
    n, q = c.bidegree
    d = a.dim
    deg = a.degree_array()
    e = [a.basis_vector(i) for i in range(d)]
    out = F.zeros((d,) + (d,) * (n + 1))
    for f in itertools.product(range(d), repeat=n + 1):
        v = F.zeros(d)
        s = (-1) ** ((q * int(deg[f[0]])) % 2)
        v = v + s * a.mul(e[f[0]], c(*f[1:]))
        for i in range(1, n + 1):
            prod = a.mul(e[f[i - 1]], e[f[i]])
            args = [e[j] for j in f[: i - 1]] + [prod] + [e[j] for j in f[i + 1:]]
            v = v + (-1) ** i * c(*args)
        v = v + (-1) ** (n + 1) * a.mul(c(*f[:n]), e[f[n]])
        out[(slice(None),) + f] = F.normalize(v)
    return F.normalize(out)


ALGEBRAS = [
    lambda: dual_numbers(3),
    lambda: dual_numbers(2, 1),
    lambda: dual_numbers(5, 1),
    lambda: dual_numbers_square(3),
    lambda: nakayama(2, 1),
]


@settings(max_examples=30)
@given(st.sampled_from(range(len(ALGEBRAS))), st.integers(0, 2), st.integers(-1, 1), st.integers(0, 2**31))
def test_differential_matches_naive(i, n, q, seed):
    a = ALGEBRAS[i]()
    C = self_coefficients(a)
    c = random_cochain(C, n, q, np.random.default_rng(seed))
    assert a.field.equal(differential(c).data, naive_differential(c))


@settings(max_examples=30)
@given(st.sampled_from(range(len(ALGEBRAS))), st.integers(0, 3), st.integers(-1, 1), st.integers(0, 2**31))
def test_d_squared_zero(i, n, q, seed):
    a = ALGEBRAS[i]()
    c = random_cochain(self_coefficients(a), n, q, np.random.default_rng(seed))
    assert differential(differential(c)).is_zero()
    assert d_prime(d_prime(c)).is_zero()


@settings(max_examples=30)
@given(st.sampled_from(range(len(ALGEBRAS))), st.integers(0, 2), st.integers(0, 2), st.integers(-1, 1), st.integers(-1, 1), st.integers(0, 2**31))
def test_leibniz(i, p, s, q, t, seed):
    a = ALGEBRAS[i]()
    C = self_coefficients(a)
    rng = np.random.default_rng(seed)
    x = random_cochain(C, p, q, rng)
    y = random_cochain(C, s, t, rng)
    lhs = d_prime(dot_product(x, y))
    rhs = dot_product(d_prime(x), y)
    rhs = rhs + dot_product(x, d_prime(y)).scale((-1) ** ((p + q) % 2))
    assert lhs == rhs


def test_d_prime_is_bracket_with_m2():
    a = dual_numbers(3, 1)
    C = self_coefficients(a)
    rng = np.random.default_rng(1)
    m2 = product_cochain(a)
    for n, q in [(1, 0), (2, 1), (1, -1)]:
        x = random_cochain(C, n, q, rng)
        assert d_prime(x) == bracket(m2, x)


def test_m2_pre_lie_square_vanishes():
    for a in (dual_numbers(3), nakayama(2, 2), dual_numbers_square(2)):
        assert gerstenhaber_square(product_cochain(a)).is_zero()


def test_pinned_cup_and_dot_signs():
    # |x| = 1, |y| = 0; phi: x -> y has bidegree (1, -1), psi = x has bidegree (0, 1)
    a = dual_numbers_square(3)
    C = self_coefficients(a)
    ix, iy = a.labels.index("x"), a.labels.index("y")
    phi_data = a.field.zeros(C.shape(1, -1))
    phi_data[iy, ix] = 1
    phi = HochschildCochain(C, 1, -1, phi_data)
    assert phi.in_mask()
    psi = HochschildCochain(C, 0, 1, a.basis_vector(ix))
    yx = a.mul(a.basis_vector(iy), a.basis_vector(ix))
    assert not a.field.is_zero(yx)
    assert a.field.equal(cup_product(phi, psi)(ix), a.field.normalize(-yx))
    assert a.field.equal(dot_product(phi, psi)(ix), yx)


def test_pinned_pre_lie_sign():
    # delta o psi for psi = x of bidegree (0, 1): delta(x) = x
    a = dual_numbers(5, 1)
    C = self_coefficients(a)
    psi = HochschildCochain(C, 0, 1, a.basis_vector(1))
    assert pre_lie(euler_derivation(a), psi) == psi
    assert bracket(euler_derivation(a), psi) == psi


def test_euler_derivation():
    a = dual_numbers(3, 1)
    delta = euler_derivation(a)
    assert a.field.equal(delta(1), a.basis_vector(1))
    assert a.field.is_zero(delta(0))
    assert differential(delta).is_zero()
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert euler_derivation(dual_numbers(3)).is_zero()
        assert w


def test_beta_coefficients():
    # |x| = -1 gives (-1)(2)/2 = -1
    a = dual_numbers(5, -1)
    b = beta_cochain(a)
    assert a.field.equal(b(1), a.field.normalize(-a.basis_vector(1)))
    assert a.field.is_zero(b(0))
    assert differential(b) == cup_product(euler_derivation(a), euler_derivation(a))


@pytest.mark.parametrize("p,expected", [(3, [2, 1, 1, 1]), (2, [2, 2, 2, 2]), (5, [2, 1, 1, 1])])
def test_hh_dual_numbers(p, expected):
    C = self_coefficients(dual_numbers(p))
    assert [cohomology_space(C, n, 0).dim for n in range(4)] == expected


def test_separable_has_no_higher_hh():
    a = product_field(3)
    C = self_coefficients(a)
    assert cohomology_space(C, 0, 0).dim == 3
    assert all(cohomology_space(C, n, 0).dim == 0 for n in (1, 2, 3))


@pytest.mark.parametrize("make", [lambda: nakayama(2, 1), lambda: truncated_poly(3), lambda: nakayama(2, 2)])
def test_bar_and_resolution_agree(make):
    a = make()
    C = self_coefficients(a)
    bar = [cohomology_space(C, n, 0).dim for n in range(4)]
    assert bar == hh_dimensions_via_resolution(regular_bimodule(a), 3)


def test_cohomology_basis_is_deterministic():
    C = self_coefficients(nakayama(2, 1))
    H = cohomology_space(C, 2, 0)
    reps = [c.representative for c in H.classes()]
    again = cohomology_space(C, 2, 0).classes()
    assert all(r == c.representative for r, c in zip(reps, again))
    for r in reps:
        assert H.is_cocycle(r) and not H.is_coboundary(r)


def test_coboundaries_are_zero_classes(rng):
    C = self_coefficients(dual_numbers(3))
    H = cohomology_space(C, 2, 0)
    b = d_prime(random_cochain(C, 1, 0, rng))
    assert H.is_coboundary(b)
    assert H.dim == 1 and not H.class_of(H.classes()[0].representative + b).is_zero()


def test_mixing_spaces_raises():
    a = dual_numbers(3)
    x = random_cochain(self_coefficients(a), 1, 0, np.random.default_rng(0))
    y = random_cochain(self_coefficients(dual_numbers(3)), 1, 0, np.random.default_rng(0))
    with pytest.raises(CoefficientError):
        x + y


def test_pullback_and_pushforward_identity(rng):
    a = dual_numbers(3, 1)
    C = self_coefficients(a)
    c = random_cochain(C, 2, 0, rng)
    ident = AlgebraMorphism.identity(a)
    assert a.field.equal(pullback(ident, c).data, c.data)
    assert pushforward(a.field.eye(a.dim), c, C) == c


def test_pullback_is_chain_map(rng):
    c_alg = dual_numbers_square(3)
    d_alg = dual_numbers(3)
    F = AlgebraMorphism.from_images(d_alg, {"x": "y"}, target=c_alg)
    C = self_coefficients(c_alg)
    P = pulled_back_coefficients(C, F)
    for n, q in [(1, 0), (2, 1), (1, -1)]:
        c = random_cochain(C, n, q, rng)
        assert pullback(F, d_prime(c), P) == d_prime(pullback(F, c, P))


def test_bullet_along_identity_is_pre_lie(rng):
    a = dual_numbers(3, 1)
    C = self_coefficients(a)
    ident = AlgebraMorphism.identity(a)
    P = pulled_back_coefficients(C, ident)
    x = random_cochain(C, 2, 0, rng)
    y = random_cochain(C, 1, 1, rng)
    lhs = bullet_along_functor(x, pullback(ident, y, P), ident)
    assert lhs.field.equal(lhs.data, pre_lie(x, y).data)
    assert bullet_along_functor(x, zero_cochain(P, 1, 0), ident).is_zero()


def test_twisted_family_components():
    a = dual_numbers(3)
    s = AlgebraMorphism.from_images(a, {"x": "-x"})
    T = TwistedFamily(a, s)
    assert T.bimodule(1).check() and T.bimodule(-1).check()
    assert T.power(2).describe() == {"x": "x"}


@pytest.mark.parametrize("images,expected", [({"x": "-x"}, True), ({"x": "x"}, False)])
def test_edge_unit_dual_numbers(images, expected):
    a = dual_numbers(3)
    s = AlgebraMorphism.from_images(a, images)
    H = cohomology_space(TwistedFamily(a, s), 3, -1)
    assert H.dim == 1
    res = minimal_resolution(regular_bimodule(a), 3)
    assert is_edge_unit(H.classes()[0], res) is expected
    zero = zero_cochain(H.coefficients, 3, -1)
    assert is_edge_unit(zero, res) is False


def test_syzygy_map_of_hh1_generator():
    a = dual_numbers(3)
    s = AlgebraMorphism.from_images(a, {"x": "-x"})
    H = cohomology_space(TwistedFamily(a, s), 1, 1)
    res = minimal_resolution(regular_bimodule(a), 1)
    gens = [c for c in H.classes()]
    assert gens
    f = class_to_syzygy_map(gens[0], res)
    assert f.is_homomorphism() and is_stable_isomorphism(f)


def test_syzygy_map_independent_of_resolution(rng):
    a = dual_numbers(3)
    s = AlgebraMorphism.from_images(a, {"x": "-x"})
    x = cohomology_space(TwistedFamily(a, s), 3, -1).classes()[0]
    lam = regular_bimodule(a)
    r1 = minimal_resolution(lam, 3)
    r2 = minimal_resolution(lam, 3, rng=rng)
    from fintri.modules import lift_chain_map

    f1 = class_to_syzygy_map(x, r1)
    f2 = class_to_syzygy_map(x, r2)
    g = lift_chain_map(r1, r2, 3)  # Omega^3 of r1 -> Omega^3 of r2
    diff = f1 - f2.compose(g)
    from fintri.modules import factors_through_projective

    assert factors_through_projective(diff)


def test_zero_class_gives_stably_zero_map():
    a = dual_numbers(3)
    H = cohomology_space(self_coefficients(a), 2, 0)
    res = minimal_resolution(regular_bimodule(a), 2)
    f = class_to_syzygy_map(zero_cochain(H.coefficients, 2, 0), res)
    from fintri.modules import factors_through_projective

    assert factors_through_projective(f)


def test_arity_zero_syzygy_map_rejected():
    a = dual_numbers(3)
    with pytest.raises(ValueError):
        class_to_syzygy_map(zero_cochain(self_coefficients(a), 0, 0), minimal_resolution(regular_bimodule(a), 1))
