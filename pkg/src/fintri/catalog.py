"""Small library of named quiver presentations."""
from __future__ import annotations

from .algebra import Algebra, QuiverPresentation, build_algebra
from .linalg import field_from_tag


def dual_numbers(field=3, degree: int = 0) -> Algebra:
    """k[x]/(x^2); with degree != 0 the arrow x is graded."""
    return build_algebra(
        QuiverPresentation(
            field, ["1"], [("x", "1", "1", degree)], ["x*x"], bound=1,
            graded=degree != 0, name="dual-numbers",
        )
    )


def dual_numbers_square(field=3, degree: int = 1) -> Algebra:
    """k[x, y]/(x^2, y^2, xy - yx) with |x| = degree and |y| = 0."""
    return build_algebra(
        QuiverPresentation(
            field, ["1"], [("x", "1", "1", degree), ("y", "1", "1", 0)], ["x*x", "y*y", "x*y-y*x"], bound=2,
            graded=degree != 0, name="dual-numbers-square",
        )
    )


def truncated_poly(n: int, field=3) -> Algebra:
    """k[x]/(x^n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return build_algebra(
        QuiverPresentation(field, ["1"], [("x", "1", "1")], ["*".join(["x"] * n)], bound=n - 1, name=f"k[x]/x^{n}")
    )


def nakayama(m: int, n: int, field=3) -> Algebra:
    """Cyclic quiver on m vertices, all paths of length n+1 killed."""
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    verts = [str(i) for i in range(1, m + 1)]
    arrows = [(f"a{i}", str(i), str(i % m + 1)) for i in range(1, m + 1)]
    rels = []
    for start in range(1, m + 1):
        path = []
        v = start
        for _ in range(n + 1):
            path.append(f"a{v}")
            v = v % m + 1
        # composition order: later arrows on the left
        rels.append("*".join(reversed(path)))
    return build_algebra(QuiverPresentation(field, verts, arrows, rels, bound=n, name=f"nakayama({m},{n})"))


def product_field(n: int, field=3) -> Algebra:
    """k^n: n vertices, no arrows."""
    if n < 1:
        raise ValueError("need n >= 1")
    return build_algebra(QuiverPresentation(field, [str(i) for i in range(1, n + 1)], [], [], bound=1, name=f"k^{n}"))


def d4_deformed_preprojective(field=2) -> Algebra:
    """Deformed preprojective algebra of type D4 (dimension 28, characteristic 2 only)."""
    if field_from_tag(field).characteristic != 2:
        raise ValueError("d4_deformed_preprojective requires characteristic 2")
    arrows = [
        ("a0", "0", "2"), ("b0", "2", "0"),
        ("a1", "1", "2"), ("b1", "2", "1"),
        ("a2", "2", "3"), ("b2", "3", "2"),
    ]
    rels = [
        "b0*a0",
        "b1*a1",
        "a2*b2",
        "a0*b0+a1*b1+b2*a2+a1*b1*a0*b0",
        "a0*b0*a1*b1+a1*b1*a0*b0",
    ]
    return build_algebra(QuiverPresentation(field, ["0", "1", "2", "3"], arrows, rels, bound=4, name="D4"))


CATALOG = {
    "dual_numbers": dual_numbers,
    "dual_numbers_square": dual_numbers_square,
    "truncated_poly": truncated_poly,
    "nakayama": nakayama,
    "product_field": product_field,
    "d4_deformed_preprojective": d4_deformed_preprojective,
}


def build_named_example(name: str, params=(), field=None) -> Algebra:
    """Instantiate a catalog entry; params are the integer arguments in order."""
    try:
        fn = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(CATALOG)}") from None
    kwargs = {} if field is None else {"field": field}
    return fn(*[int(p) for p in params], **kwargs)
