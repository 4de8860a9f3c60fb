from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fintri.algebra import (
    AlgebraMorphism,
    PresentationError,
    QuiverPresentation,
    build_algebra,
    center_basis,
    check_morphism,
    enveloping_algebra,
    is_selfinjective,
    parse_linear_combination,
)
from fintri.catalog import (
    build_named_example,
    d4_deformed_preprojective,
    dual_numbers,
    nakayama,
    product_field,
    truncated_poly,
)


def test_parse_linear_combination():
    terms = parse_linear_combination("2*a*b - 1/2*c + x")
    assert terms == [(Fraction(2), ["a", "b"]), (Fraction(-1, 2), ["c"]), (Fraction(1), ["x"])]
    assert parse_linear_combination("-x") == [(Fraction(-1), ["x"])]
    with pytest.raises(PresentationError):
        parse_linear_combination("")


def test_dual_numbers_basics():
    a = dual_numbers(3)
    assert a.dim == 2 and a.check_associative() and a.check_unit()
    x = a.element("x")
    assert a.field.is_zero(a.mul(x, x))
    assert is_selfinjective(a)


def test_graded_dual_numbers_degrees():
    a = dual_numbers(5, degree=1)
    assert a.is_graded
    assert sorted(a.degree_array().tolist()) == [0, 1]


@given(st.integers(1, 3), st.integers(1, 3), st.sampled_from([2, 3, 5]))
def test_nakayama_dimension_and_frobenius(m, n, p):
    a = nakayama(m, n, field=p)
    assert a.dim == m * (n + 1)
    assert a.check_associative() and a.check_unit()
    assert is_selfinjective(a)


def test_composition_convention():
    # a*b means b first: a1*a2 in N_2^1 is the path 2 -> 1 -> 2
    a = nakayama(2, 1)
    with pytest.raises(Exception):
        a.index("a1*a2")  # length-2 paths vanish when n = 1
    b = nakayama(2, 2)
    p = b.element("a1*a2")
    assert not b.field.is_zero(p)
    i = int(np.flatnonzero(p)[0])
    assert b.corners[i] == (b.vertex_names.index("2"), b.vertex_names.index("2"))


def test_truncated_poly_is_selfinjective_and_local():
    a = truncated_poly(3)
    assert a.dim == 3 and is_selfinjective(a) and a.n_vertices == 1


def test_product_field_enveloping_dimension():
    # the enveloping algebra of k^n has dimension n^2
    for n in range(1, 5):
        assert enveloping_algebra(product_field(n)).dim == n * n


def test_enveloping_algebra_structure():
    a = dual_numbers(3)
    e = enveloping_algebra(a)
    assert e.dim == 4 and e.check_associative() and e.check_unit()


def test_center_of_commutative_algebra():
    a = truncated_poly(3)
    assert center_basis(a).dim == 3
    assert center_basis(nakayama(2, 1)).dim == 1


def test_d4_example():
    a = d4_deformed_preprojective(2)
    assert a.dim == 28
    assert a.n_vertices == 4
    assert a.check_associative()
    assert is_selfinjective(a)
    with pytest.raises(ValueError):
        d4_deformed_preprojective(3)


def test_named_examples():
    assert build_named_example("nakayama", (2, 2), field=3).dim == 6
    assert build_named_example("product_field", (3,)).dim == 3
    with pytest.raises(KeyError):
        build_named_example("nope")


def test_morphisms():
    a = dual_numbers(3)
    s = AlgebraMorphism.from_images(a, {"x": "-x"})
    assert check_morphism(s)
    assert s.compose(s).is_identity()
    assert s.power(-1).compose(s).is_identity()
    bad = AlgebraMorphism(a, a, a.field.array([[1, 0], [1, 1]]))
    assert not check_morphism(bad)


def test_vertex_permutation():
    a = nakayama(2, 1)
    swap = AlgebraMorphism.from_images(a, {"1": "e2", "2": "e1", "a1": "a2", "a2": "a1"})
    assert check_morphism(swap)
    assert swap.vertex_permutation() == (1, 0)


def test_relabeling_gives_isomorphic_structure():
    p1 = QuiverPresentation(3, ["1", "2"], [("a", "1", "2"), ("b", "2", "1")], ["b*a", "a*b"], bound=1)
    p2 = QuiverPresentation(3, ["v", "w"], [("s", "w", "v"), ("t", "v", "w")], ["t*s", "s*t"], bound=1)
    a1, a2 = build_algebra(p1), build_algebra(p2)
    assert a1.dim == a2.dim == 4
    assert sorted(a1.lengths) == sorted(a2.lengths)


def test_bad_presentations():
    with pytest.raises(PresentationError):
        build_algebra(QuiverPresentation(3, ["1"], [("x", "1", "2")], [], bound=1))
    with pytest.raises(PresentationError):
        build_algebra(QuiverPresentation(3, ["1"], [("x", "1", "1")], ["y*y"], bound=1))


def test_degree_zero_part():
    from fintri.catalog import dual_numbers_square

    c = dual_numbers_square(3, 1)
    d, inc = c.degree_zero_part()
    assert d.dim == 2 and check_morphism(inc)
