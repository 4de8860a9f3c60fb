"""The graded algebra Lambda(sigma) and the mapping cone computing its
Hochschild cohomology.

Lambda(sigma) is Lambda<iota, iota^-1> / (iota x - sigma(x) iota) with iota in
degree -1.  Elements are stored in the normal form sum_q iota^-q y_q; the
degree q part is identified with the twisted bimodule _{sigma^q}Lambda_1 and

    (iota^-a y)(iota^-b z) = iota^-(a+b) sigma^b(y) z.

HH(Lambda(sigma)) is computed from the cone C^{p,q} = HC^{p,q} + HC^{p-1,q}
(cochains on Lambda with values in Lambda(sigma)) with differential

    D(phi, psi) = (d' phi, S phi - d' psi),     S = id - S',
    S'(phi)(f_1..f_n) = (-1)^q sigma^-1 phi(sigma f_1, .., sigma f_n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .algebra import Algebra, AlgebraMorphism
from .hochschild import (
    CoefficientError,
    CohomologyClass,
    CohomologySpace,
    HochschildCochain,
    LinearCohomology,
    TwistedFamily,
    cohomology_space,
    differential_matrix,
    dot_product,
    d_prime,
    from_masked,
    unit_cochain,
    zero_cochain,
)
from .linalg import Field

__all__ = [
    "LambdaSigmaConfig",
    "GradedLambdaSigma",
    "LambdaSigmaElement",
    "LambdaCochain",
    "ConeCochain",
    "ConeClass",
    "ConeCohomology",
    "LESReport",
    "NonSingularityReport",
    "build_lambda_sigma",
    "sigma_prime",
    "sigma_operator",
    "cone_differential",
    "cone_product",
    "cone_unit",
    "euler_element",
    "random_cone_cochain",
    "cone_space",
    "cone_cohomology",
    "i_star",
    "connecting_partial",
    "class_product",
    "verify_les",
    "lift_to_cone",
    "check_non_singularity",
    "euler_cochain",
    "null_homotopy",
    "restrict_to_base",
    "transport_to_cone",
]


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSigmaConfig:
    max_p: int = 7
    max_q: int = 3

    def check(self, p: int, q: int):
        if p > self.max_p or abs(q) > self.max_q:
            raise WindowError(f"bidegree ({p}, {q}) outside window p <= {self.max_p}, |q| <= {self.max_q}")


DEFAULT_WINDOW = LambdaSigmaConfig()


class GradedLambdaSigma:
    def __init__(self, algebra: Algebra, sigma: Optional[AlgebraMorphism] = None, config: LambdaSigmaConfig = DEFAULT_WINDOW):
        try:
            self.family = TwistedFamily(algebra, sigma)
        except CoefficientError as e:
            raise ValueError(str(e)) from None
        self.algebra = algebra
        self.sigma = self.family.sigma
        self.config = config
        self._inverse = self.sigma.inverse()
        self._spaces: dict = {}

    @property
    def field(self) -> Field:
        return self.algebra.field

    def component(self, q: int):
        """Degree q part as the bimodule _{sigma^q}Lambda_1 (via iota^-q)."""
        return self.family.bimodule(q)

    def power(self, q: int) -> AlgebraMorphism:
        return self.family.power(q)

    # elements
    def element(self, components: dict) -> "LambdaSigmaElement":
        F = self.field
        return LambdaSigmaElement(self, {int(q): F.array(v) for q, v in components.items()})

    def base_element(self, y) -> "LambdaSigmaElement":
        return self.element({0: y})

    def one(self) -> "LambdaSigmaElement":
        return self.base_element(self.algebra.unit)

    def iota(self, power: int = 1) -> "LambdaSigmaElement":
        """iota^power, which has degree -power."""
        return self.element({-power: self.algebra.unit})

    def __repr__(self):
        return f"Lambda({self.algebra.name}, {self.sigma.describe()})"


def build_lambda_sigma(a: Algebra, sigma: Optional[AlgebraMorphism] = None, config: LambdaSigmaConfig = DEFAULT_WINDOW) -> GradedLambdaSigma:
    return GradedLambdaSigma(a, sigma, config)


@dataclass(frozen=True, eq=False)
class LambdaSigmaElement:
    ring: GradedLambdaSigma
    components: dict

    def _combine(self, other, sign):
        F = self.ring.field
        out = dict(self.components)
        for q, v in other.components.items():
            out[q] = F.normalize(out[q] + sign * v) if q in out else F.normalize(sign * v)
        return LambdaSigmaElement(self.ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        F = self.ring.field
        c = F.scalar(c)
        return LambdaSigmaElement(self.ring, {q: F.normalize(v * c) for q, v in self.components.items()})

    def __mul__(self, other):
        ls = self.ring
        a = ls.algebra
        F = a.field
        out: dict = {}
        for qa, y in self.components.items():
            for qb, z in other.components.items():
                sy = F.matmul(ls.power(qb).matrix, y)
                prod = a.mul(sy, z)
                k = qa + qb
                out[k] = F.normalize(out[k] + prod) if k in out else prod
        return LambdaSigmaElement(ls, out)

    def sigma(self, power: int = 1):
        ls = self.ring
        F = ls.field
        M = ls.power(power).matrix
        return LambdaSigmaElement(ls, {q: F.matmul(M, v) for q, v in self.components.items()})

    def component(self, q: int) -> np.ndarray:
        v = self.components.get(q)
        return v if v is not None else self.ring.field.zeros(self.ring.algebra.dim)

    def degrees(self) -> list:
        F = self.ring.field
        return sorted(q for q, v in self.components.items() if not F.is_zero(v))

    def is_zero(self) -> bool:
        return not self.degrees()

    def __eq__(self, other):
        if not isinstance(other, LambdaSigmaElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        a = self.ring.algebra
        parts = [f"iota^{-q}*({a.format_element(self.components[q])})" for q in self.degrees()]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class LambdaCochain:
    """A multilinear map on Lambda(sigma), evaluated lazily on elements."""

    arity: int
    degree: int
    fn: Callable

    def __call__(self, *xs):
        if len(xs) != self.arity:
            raise TypeError(f"expected {self.arity} arguments")
        return self.fn(*xs)


def euler_cochain(ls: GradedLambdaSigma) -> LambdaCochain:
    """delta(f) = |f| f on Lambda(sigma)."""

    def fn(x):
        F = ls.field
        return LambdaSigmaElement(ls, {q: F.normalize(v * F.scalar(q)) for q, v in x.components.items()})

    return LambdaCochain(1, 0, fn)


def null_homotopy(ls: GradedLambdaSigma, phi: LambdaCochain) -> LambdaCochain:
    """h(phi)(f_1..f_{n-1}) = sum_i (-1)^i iota^-1 phi(sigma f_1..sigma f_i, iota, f_{i+1}..f_{n-1})."""
    n = phi.arity
    if n < 1:
        raise ValueError("h needs arity >= 1")
    inv_iota = ls.iota(-1)
    iota = ls.iota(1)

    def fn(*fs):
        total = ls.element({})
        for i in range(n):
            args = [f.sigma() for f in fs[:i]] + [iota] + list(fs[i:])
            term = inv_iota * phi(*args)
            total = total + term if i % 2 == 0 else total - term
        return total

    return LambdaCochain(n - 1, phi.degree + 1, fn)


def restrict_to_base(ls: GradedLambdaSigma, phi: LambdaCochain, q: int) -> HochschildCochain:
    """The degree-q part of phi on inputs from Lambda, as a cochain in HC^{n,q}(Lambda, Lambda(sigma))."""
    import itertools

    a = ls.algebra
    F = ls.field
    n = phi.arity
    fam = ls.family
    data = F.zeros(fam.shape(n, q))
    basis = [ls.base_element(a.basis_vector(i)) for i in range(a.dim)]
    for idx in itertools.product(range(a.dim), repeat=n):
        val = phi(*[basis[i] for i in idx]).component(q)
        data[(slice(None),) + idx] = val
    return HochschildCochain(fam, n, q, data)


def transport_to_cone(ls: GradedLambdaSigma, phi: LambdaCochain, p: int, q: int) -> "ConeCochain":
    """(phi restricted to Lambda, h(phi) restricted to Lambda) in C^{p,q}."""
    if phi.arity != p:
        raise ValueError("arity mismatch")
    first = restrict_to_base(ls, phi, q)
    second = restrict_to_base(ls, null_homotopy(ls, phi), q) if p > 0 else None
    return ConeCochain(ls, p, q, first, second)


# ---------------------------------------------------------------------------
# the operator S and the cone


def _check_family(ls: GradedLambdaSigma, c: HochschildCochain):
    if c.coefficients is not ls.family:
        raise CoefficientError("cochain does not take values in this Lambda(sigma)")


def _sigma_prime_data(ls: GradedLambdaSigma, data: np.ndarray, n: int, q: int) -> np.ndarray:
    F = ls.field
    X = data
    M = ls.sigma.matrix
    for _ in range(n):
        X = F.tensordot(X, M, axes=([1], [0]))
    X = F.tensordot(ls._inverse.matrix, X, axes=([1], [0]))
    return F.normalize(-X) if q % 2 else X


def sigma_prime(ls: GradedLambdaSigma, c: HochschildCochain) -> HochschildCochain:
    """S'(phi) = (-1)^q sigma^-1 phi(sigma -, .., sigma -)."""
    _check_family(ls, c)
    return HochschildCochain(c.coefficients, c.arity, c.degree, _sigma_prime_data(ls, c.data, c.arity, c.degree))


def sigma_operator(ls: GradedLambdaSigma, c: HochschildCochain) -> HochschildCochain:
    """id - S'."""
    return c - sigma_prime(ls, c)


@dataclass(frozen=True, eq=False)
class ConeCochain:
    ring: GradedLambdaSigma
    p: int
    q: int
    phi: HochschildCochain
    psi: Optional[HochschildCochain]  # None when p == 0

    def __post_init__(self):
        if self.phi.bidegree != (self.p, self.q):
            raise ValueError("first component has the wrong bidegree")
        if self.p == 0:
            if self.psi is not None:
                raise ValueError("C^{0,q} has no second component")
        elif self.psi is None or self.psi.bidegree != (self.p - 1, self.q):
            raise ValueError("second component has the wrong bidegree")

    @property
    def bidegree(self) -> tuple:
        return (self.p, self.q)

    @property
    def total_degree(self) -> int:
        return self.p + self.q

    def _map2(self, other, op):
        if other.bidegree != self.bidegree:
            raise ValueError("bidegrees differ")
        psi = None if self.psi is None else op(self.psi, other.psi)
        return ConeCochain(self.ring, self.p, self.q, op(self.phi, other.phi), psi)

    def __add__(self, other):
        return self._map2(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._map2(other, lambda x, y: x - y)

    def __neg__(self):
        return ConeCochain(self.ring, self.p, self.q, -self.phi, None if self.psi is None else -self.psi)

    def scale(self, c):
        return ConeCochain(self.ring, self.p, self.q, self.phi.scale(c), None if self.psi is None else self.psi.scale(c))

    def is_zero(self) -> bool:
        return self.phi.is_zero() and (self.psi is None or self.psi.is_zero())

    def __eq__(self, other):
        if not isinstance(other, ConeCochain):
            return NotImplemented
        return other.bidegree == self.bidegree and (self - other).is_zero()

    __hash__ = None

    def vector(self) -> np.ndarray:
        parts = [self.phi.masked()]
        if self.psi is not None:
            parts.append(self.psi.masked())
        return np.concatenate(parts)

    def __repr__(self):
        return f"ConeCochain{self.bidegree}"


def _zero(ls, n, q):
    return zero_cochain(ls.family, n, q)


def cone_from_vector(ls: GradedLambdaSigma, p: int, q: int, v) -> ConeCochain:
    fam = ls.family
    m = len(fam.mask_index(p, q))
    phi = from_masked(fam, p, q, v[:m])
    psi = from_masked(fam, p - 1, q, v[m:]) if p > 0 else None
    return ConeCochain(ls, p, q, phi, psi)


def cone_differential(c: ConeCochain) -> ConeCochain:
    ls = c.ring
    first = d_prime(c.phi)
    second = sigma_operator(ls, c.phi)
    if c.psi is not None:
        second = second - d_prime(c.psi)
    return ConeCochain(ls, c.p + 1, c.q, first, second)


def cone_product(x: ConeCochain, y: ConeCochain) -> ConeCochain:
    """(phi, phi')(psi, psi') = (phi.psi, phi'.psi + (-1)^|phi| S'(phi).psi')."""
    ls = x.ring
    p, q = x.bidegree
    s, t = y.bidegree
    first = dot_product(x.phi, y.phi)
    if p + s == 0:
        return ConeCochain(ls, 0, q + t, first, None)
    second = _zero(ls, p + s - 1, q + t)
    if x.psi is not None:
        second = second + dot_product(x.psi, y.phi)
    if y.psi is not None:
        term = dot_product(sigma_prime(ls, x.phi), y.psi)
        second = second + term if (p + q) % 2 == 0 else second - term
    return ConeCochain(ls, p + s, q + t, first, second)


def cone_unit(ls: GradedLambdaSigma) -> ConeCochain:
    return ConeCochain(ls, 0, 0, unit_cochain(ls.algebra, ls.family), None)


def euler_element(ls: GradedLambdaSigma) -> ConeCochain:
    """(0, -1) in C^{1,0}: the image of the Euler derivation."""
    return ConeCochain(ls, 1, 0, _zero(ls, 1, 0), -unit_cochain(ls.algebra, ls.family))


def random_cone_cochain(ls: GradedLambdaSigma, p: int, q: int, rng) -> ConeCochain:
    from .hochschild import random_cochain

    phi = random_cochain(ls.family, p, q, rng)
    psi = random_cochain(ls.family, p - 1, q, rng) if p > 0 else None
    return ConeCochain(ls, p, q, phi, psi)


def _operator_matrix(ls: GradedLambdaSigma, n: int, q: int) -> np.ndarray:
    """Matrix of S on masked coordinates of HC^{n,q}."""
    fam = ls.family
    key = ("S", n, q)
    cache = fam._cache()
    if key in cache:
        return cache[key]
    F = ls.field
    idx = fam.mask_index(n, q)
    shape = fam.shape(n, q)
    size = int(np.prod(shape))
    batch = F.zeros((len(idx), size))
    batch[np.arange(len(idx)), idx] = 1
    batch = batch.reshape((len(idx),) + shape)
    img = F.zeros(batch.shape)
    for b in range(len(idx)):
        img[b] = _sigma_prime_data(ls, batch[b], n, q)
    img = img.reshape(len(idx), -1)
    full = img[:, idx]
    # S' must preserve the masked subcomplex
    rest = np.ones(size, dtype=bool)
    rest[idx] = False
    if not F.is_zero(img[:, rest]):
        raise ArithmeticError("sigma does not preserve the cochain mask")
    M = F.normalize(F.eye(len(idx)) - full.T)
    cache[key] = M
    return M


def _cone_matrix(ls: GradedLambdaSigma, p: int, q: int) -> np.ndarray:
    """D : C^{p,q} -> C^{p+1,q} on masked coordinates."""
    fam = ls.family
    F = ls.field
    m_p1 = len(fam.mask_index(p + 1, q))
    m_pm = len(fam.mask_index(p - 1, q)) if p > 0 else 0
    top = np.concatenate([differential_matrix(fam, p, q), F.zeros((m_p1, m_pm))], axis=1)
    if p > 0:
        bottom = np.concatenate([_operator_matrix(ls, p, q), F.normalize(-differential_matrix(fam, p - 1, q))], axis=1)
    else:
        bottom = _operator_matrix(ls, p, q)
    return np.concatenate([top, bottom], axis=0)


@dataclass(frozen=True, eq=False)
class ConeClass:
    space: "ConeCohomology"
    representative: ConeCochain
    coordinates: np.ndarray

    @property
    def bidegree(self) -> tuple:
        return self.representative.bidegree

    def is_zero(self) -> bool:
        return self.space.field.is_zero(self.coordinates)


class ConeCohomology(LinearCohomology):
    """H^{p,q} of the cone, i.e. HH^{p,q}(Lambda(sigma), Lambda(sigma))."""

    def __init__(self, ls: GradedLambdaSigma, p: int, q: int):
        ls.config.check(p, q)
        self.ring = ls
        self.p = p
        self.q = q
        fam = ls.family
        m = len(fam.mask_index(p, q)) + (len(fam.mask_index(p - 1, q)) if p > 0 else 0)
        d_in = _cone_matrix(ls, p - 1, q) if p > 0 else None
        super().__init__(ls.field, m, _cone_matrix(ls, p, q), d_in)

    def representative(self, coords) -> ConeCochain:
        return cone_from_vector(self.ring, self.p, self.q, self.combination(coords))

    def classes(self) -> list:
        F = self.field
        out = []
        for k in range(self.dim):
            e = F.zeros(self.dim)
            e[k] = 1
            out.append(ConeClass(self, cone_from_vector(self.ring, self.p, self.q, self.rep_vectors[k]), e))
        return out

    def coordinates(self, c: ConeCochain) -> np.ndarray:
        if c.bidegree != (self.p, self.q) or c.ring is not self.ring:
            raise ValueError("cochain is not in this cone degree")
        if not cone_differential(c).is_zero():
            raise ValueError("not a cone cocycle")
        return self.vector_coordinates(c.vector())

    def class_of(self, c: ConeCochain) -> ConeClass:
        return ConeClass(self, c, self.coordinates(c))

    def is_coboundary(self, c: ConeCochain) -> bool:
        return self.vector_is_boundary(c.vector())


def cone_space(ls: GradedLambdaSigma, p: int, q: int) -> ConeCohomology:
    key = (p, q)
    if key not in ls._spaces:
        ls._spaces[key] = ConeCohomology(ls, p, q)
    return ls._spaces[key]


def cone_cohomology(ls: GradedLambdaSigma, p: int, q: int) -> list:
    return cone_space(ls, p, q).classes()


def _downstairs(ls: GradedLambdaSigma, p: int, q: int) -> CohomologySpace:
    return cohomology_space(ls.family, p, q)


def i_star(x: ConeClass) -> CohomologyClass:
    ls = x.space.ring
    return _downstairs(ls, x.space.p, x.space.q).class_of(x.representative.phi)


def connecting_partial(ls: GradedLambdaSigma, x) -> ConeClass:
    """[y] in HH^{p-1,q}(Lambda, Lambda(sigma)) -> [(0, -y)] in H^{p,q}."""
    y = x.representative if isinstance(x, CohomologyClass) else x
    _check_family(ls, y)
    p, q = y.arity + 1, y.degree
    c = ConeCochain(ls, p, q, _zero(ls, p, q), -y)
    return cone_space(ls, p, q).class_of(c)


def class_product(x: ConeClass, y: ConeClass) -> ConeClass:
    ls = x.space.ring
    c = cone_product(x.representative, y.representative)
    return cone_space(ls, *c.bidegree).class_of(c)


# ---------------------------------------------------------------------------
# the long exact sequence


@dataclass
class LESReport:
    """Exactness of ... -> H^{p,q}(C) -i*-> HH^{p,q} -S-> HH^{p,q} -d-> H^{p+1,q}(C) -> ..."""

    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.exact:
            return f"exact at {len(self.checked)} nodes"
        return "not exact at " + ", ".join(f"{node}{bideg}" for node, bideg in self.failures)


def _class_matrix(cols: list, rows: int, F) -> np.ndarray:
    if not cols:
        return F.zeros((rows, 0))
    return np.stack(cols, axis=1)


def les_maps(ls: GradedLambdaSigma, p: int, q: int) -> dict:
    """i*_p : H^{p,q}(C) -> HH^{p,q}, S_p on HH^{p,q} and d_p : HH^{p,q} -> H^{p+1,q}(C)
    as matrices in the chosen class bases."""
    F = ls.field
    H = _downstairs(ls, p, q)
    Cp = cone_space(ls, p, q)
    Cn = cone_space(ls, p + 1, q)
    istar = _class_matrix([H.coordinates(c.representative.phi) for c in Cp.classes()], H.dim, F)
    S = _class_matrix([H.coordinates(sigma_operator(ls, c.representative)) for c in H.classes()], H.dim, F)
    dd = _class_matrix([connecting_partial(ls, c).coordinates for c in H.classes()], Cn.dim, F)
    return {"i_star": istar, "S": S, "partial": dd, "dims": (Cp.dim, H.dim, Cn.dim)}


def _rank(F, M):
    return F.rank(M) if M.size else 0


def verify_les(ls: GradedLambdaSigma, max_p: int = 4, max_q: int = 2) -> LESReport:
    F = ls.field
    report = LESReport()
    for q in range(-max_q, max_q + 1):
        maps = [les_maps(ls, p, q) for p in range(max_p + 1)]
        for p in range(max_p + 1):
            m = maps[p]
            dim_c, dim_h, _ = m["dims"]
            prev_partial = maps[p - 1]["partial"] if p > 0 else F.zeros((dim_c, 0))
            # node H^{p,q}(C): image of d_{p-1} = kernel of i*_p
            ok = _rank(F, prev_partial) + _rank(F, m["i_star"]) == dim_c
            if prev_partial.size and m["i_star"].size:
                ok &= F.is_zero(F.matmul(m["i_star"], prev_partial))
            report.checked.append(("cone", (p, q)))
            if not ok:
                report.failures.append(("cone", (p, q)))
            # node HH^{p,q} (source of S): image of i* = kernel of S
            ok = _rank(F, m["i_star"]) + _rank(F, m["S"]) == dim_h
            if m["i_star"].size and m["S"].size:
                ok &= F.is_zero(F.matmul(m["S"], m["i_star"]))
            report.checked.append(("restriction", (p, q)))
            if not ok:
                report.failures.append(("restriction", (p, q)))
            # node HH^{p,q} (target of S): image of S = kernel of d
            ok = _rank(F, m["S"]) + _rank(F, m["partial"]) == dim_h
            if m["S"].size and m["partial"].size:
                ok &= F.is_zero(F.matmul(m["partial"], m["S"]))
            report.checked.append(("operator", (p, q)))
            if not ok:
                report.failures.append(("operator", (p, q)))
    return report


def lift_to_cone(ls: GradedLambdaSigma, x: CohomologyClass) -> Optional[ConeClass]:
    """A cone class u with i*(u) = x, or None when x is not in the image."""
    p, q = x.bidegree
    Cp = cone_space(ls, p, q)
    m = les_maps(ls, p, q)["i_star"]
    F = ls.field
    if m.shape[1] == 0:
        return Cp.class_of(cone_from_vector(ls, p, q, F.zeros(Cp.ambient_dim))) if x.is_zero() else None
    sol = F.solve(m, x.coordinates)
    if sol is None:
        return None
    return ConeClass(Cp, Cp.representative(sol), np.array(sol))


@dataclass
class NonSingularityReport:
    ranks: dict = field(default_factory=dict)  # (p, q) -> (rank, dim source, dim target)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_non_singularity(u: ConeClass, max_p: int = 4, max_q: int = 2) -> NonSingularityReport:
    """u . - : H^{p,q} -> H^{p+3,q-1} is an isomorphism for p >= 2 and onto for p = 1."""
    ls = u.space.ring
    F = ls.field
    if u.bidegree != (3, -1):
        raise ValueError("expected a class of bidegree (3, -1)")
    rep = NonSingularityReport()
    for q in range(-max_q, max_q + 1):
        if abs(q - 1) > ls.config.max_q:
            continue
        for p in range(1, max_p + 1):
            src = cone_space(ls, p, q)
            tgt = cone_space(ls, p + 3, q - 1)
            cols = [class_product(u, c).coordinates for c in src.classes()]
            M = _class_matrix(cols, tgt.dim, F)
            r = _rank(F, M)
            rep.ranks[(p, q)] = (r, src.dim, tgt.dim)
            onto = r == tgt.dim
            iso = onto and r == src.dim
            if not (iso if p >= 2 else onto):
                rep.failures.append((p, q))
    return rep
