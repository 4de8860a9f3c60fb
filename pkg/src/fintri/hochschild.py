"""Hochschild cochains with graded coefficients.

A cochain of arity n and internal degree q is stored as a dense array of
shape (D, d, ..., d): the first axis indexes the coefficient basis, the next
n axes the algebra basis of the inputs f_1, ..., f_n.  Cochains vanishing on
non-composable tuples and respecting the grading form a subcomplex with the
same cohomology; cohomology computations only use coordinates in it (the
"mask").

Signs (|f| is the degree of f, a cochain phi has bidegree (p, q), psi (s, t)):

    d(phi)(f_1..f_{n+1}) = (-1)^(q|f_1|) f_1 phi(f_2..) + sum_i (-1)^i phi(..f_i f_{i+1}..)
                           + (-1)^(n+1) phi(f_1..f_n) f_{n+1}
    d'(phi)              = (-1)^q d(phi)
    (phi cup psi)(f)     = (-1)^(t sum_{i<=p}|f_i|) phi(f_1..f_p) psi(f_{p+1}..)
    phi . psi            = (-1)^(tp) phi cup psi
    phi o psi            = sum_i (-1)^((s-1)(p-i) + t(p-1+sum_{j<i}|f_j|)) phi(.., psi(f_i..), ..)
    [phi, psi]           = phi o psi - (-1)^((p+q-1)(s+t-1)) psi o phi
    Sq(phi)              = phi o phi
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .algebra import Algebra, AlgebraMorphism, check_morphism
from .linalg import Field
from .modules import (
    Bimodule,
    ModuleMap,
    Resolution,
    generator_columns,
    twisted_bimodule,
)

__all__ = [
    "CoefficientSpace",
    "Coefficients",
    "SelfCoefficients",
    "self_coefficients",
    "BimoduleCoefficients",
    "TwistedFamily",
    "PulledBackCoefficients",
    "HochschildCochain",
    "CohomologyClass",
    "CohomologySpace",
    "LinearCohomology",
    "from_masked",
    "differential_matrix",
    "HochschildConfig",
    "CoefficientError",
    "differential",
    "d_prime",
    "cup_product",
    "dot_product",
    "pre_lie",
    "bracket",
    "gerstenhaber_square",
    "bullet_along_functor",
    "pullback",
    "pulled_back_coefficients",
    "pushforward",
    "euler_derivation",
    "beta_cochain",
    "product_cochain",
    "unit_cochain",
    "zero_cochain",
    "random_cochain",
    "cohomology_basis",
    "cohomology_space",
    "hh_dimensions_via_resolution",
    "comparison_maps",
    "class_to_syzygy_map",
    "is_edge_unit",
]


class CoefficientError(ValueError):
    """Cochains whose coefficients do not fit the requested operation."""


@dataclass(frozen=True)
class HochschildConfig:
    """Truncation cap on the arity of cochains used in cohomology."""

    max_arity: int = 8


DEFAULT_CONFIG = HochschildConfig()


# ---------------------------------------------------------------------------
# coefficients


@dataclass(frozen=True, eq=False)
class CoefficientSpace:
    """One coefficient bimodule: actions of the algebra basis and the degree of
    each coefficient basis element (the internal degree it sits in)."""

    left: np.ndarray
    right: np.ndarray
    degrees: np.ndarray

    @property
    def dim(self) -> int:
        return self.left.shape[1]


def _corners_of(a: Algebra, left, right) -> Optional[np.ndarray]:
    """(D, 2) array of (i, j) with e_i m e_j = m per basis vector, or None."""
    if not a.has_quiver:
        return None
    F = a.field
    D = left.shape[1]
    if D == 0:
        return np.zeros((0, 2), dtype=np.int64)
    out = np.full((D, 2), -1, dtype=np.int64)
    vb = a.vertex_basis
    for i, vi in enumerate(vb):
        for j, vj in enumerate(vb):
            P = F.matmul(left[vi], right[vj])
            diag = np.array([P[k, k] for k in range(D)])
            for k in range(D):
                if diag[k] == 1:
                    col = P[:, k].copy()
                    col[k] = 0
                    if F.is_zero(col):
                        if out[k, 0] >= 0:
                            return None
                        out[k] = (i, j)
    if np.any(out < 0):
        return None
    return out


class Coefficients:
    """A family of coefficient bimodules M^q over ``algebra`` with products
    M^q x M^t -> M^(q+t) where available."""

    algebra: Algebra
    is_self = False

    def space(self, q: int) -> CoefficientSpace:
        raise NotImplementedError

    def product(self, q: int, t: int) -> np.ndarray:
        """Tensor P[k, i, j]: m_i * m_j = sum_k P[k, i, j] m_k."""
        raise CoefficientError(f"{type(self).__name__} carries no product")

    @property
    def field(self) -> Field:
        return self.algebra.field

    def _cache(self) -> dict:
        c = self.__dict__.get("_cache_store")
        if c is None:
            c = {}
            self.__dict__["_cache_store"] = c
        return c

    def corners(self, q: int):
        key = ("corners", q)
        c = self._cache()
        if key not in c:
            sp = self.space(q)
            c[key] = _corners_of(self.algebra, sp.left, sp.right)
        return c[key]

    def shape(self, n: int, q: int) -> tuple:
        return (self.space(q).dim,) + (self.algebra.dim,) * n

    def mask(self, n: int, q: int) -> np.ndarray:
        """Boolean array: grading and composability conditions."""
        key = ("mask", n, q)
        c = self._cache()
        if key in c:
            return c[key]
        a = self.algebra
        sp = self.space(q)
        d = a.dim
        shape = self.shape(n, q)
        deg = a.degree_array()
        total = sp.degrees.reshape((-1,) + (1,) * n).astype(np.int64)
        for i in range(n):
            total = total - deg.reshape((1,) * (i + 1) + (d,) + (1,) * (n - i - 1))
        m = np.broadcast_to(total == q, shape).copy()
        corners = self.corners(q)
        if corners is not None and a.has_quiver:
            ac = np.array(a.corners, dtype=np.int64)  # (tgt, src)
            tgt, src = ac[:, 0], ac[:, 1]

            def ax(v, i):
                return v.reshape((1,) * i + (-1,) + (1,) * (n - i))

            if n == 0:
                m &= (corners[:, 0] == corners[:, 1]).reshape(-1)
            else:
                m &= ax(corners[:, 0], 0) == ax(tgt, 1)
                m &= ax(corners[:, 1], 0) == ax(src, n)
                for i in range(1, n):
                    m &= ax(src, i) == ax(tgt, i + 1)
        m.setflags(write=False)
        c[key] = m
        return m

    def mask_index(self, n: int, q: int) -> np.ndarray:
        key = ("maskidx", n, q)
        c = self._cache()
        if key not in c:
            c[key] = np.flatnonzero(self.mask(n, q).reshape(-1))
        return c[key]


class SelfCoefficients(Coefficients):
    """The (possibly graded) algebra as coefficients over itself."""

    is_self = True

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self._space = CoefficientSpace(algebra.left_matrices, algebra.right_matrices, algebra.degree_array())

    def space(self, q: int) -> CoefficientSpace:
        return self._space

    @cached_property
    def _product(self):
        return np.array(self.algebra.mult.transpose(2, 0, 1))

    def product(self, q: int, t: int) -> np.ndarray:
        return self._product

    def __repr__(self):
        return f"SelfCoefficients({self.algebra.name})"


_SELF: dict = {}


def self_coefficients(a: Algebra) -> SelfCoefficients:
    """Shared SelfCoefficients instance, so cochains built separately combine."""
    hit = _SELF.get(id(a))
    if hit is None or hit.algebra is not a:
        hit = SelfCoefficients(a)
        _SELF[id(a)] = hit
    return hit


class BimoduleCoefficients(Coefficients):
    """An ungraded bimodule placed in a single internal degree."""

    def __init__(self, module: Bimodule, degree: int = 0):
        self.algebra = module.algebra
        self.module = module
        self.degree = int(degree)
        self._space = CoefficientSpace(module.left, module.right, np.full(module.dim, self.degree, dtype=np.int64))

    def space(self, q: int) -> CoefficientSpace:
        return self._space


class TwistedFamily(Coefficients):
    """M^q = _{sigma^q} Lambda_1, the degree q part of Lambda(sigma) (via the
    generator iota^-q).  The product is M^q x M^t -> M^(q+t), (a, b) -> sigma^t(a) b."""

    def __init__(self, algebra: Algebra, sigma: Optional[AlgebraMorphism] = None):
        if algebra.is_graded:
            raise CoefficientError("the base algebra must be ungraded")
        self.algebra = algebra
        self.sigma = sigma if sigma is not None else AlgebraMorphism.identity(algebra)
        if self.sigma.source is not algebra or self.sigma.target is not algebra:
            raise CoefficientError("sigma must be an endomorphism of the algebra")
        F = algebra.field
        if not check_morphism(self.sigma) or F.rank(self.sigma.matrix) != algebra.dim:
            raise CoefficientError("sigma must be an algebra automorphism")
        self._powers = {0: AlgebraMorphism.identity(algebra)}

    def power(self, q: int) -> AlgebraMorphism:
        if q not in self._powers:
            self._powers[q] = self.sigma.power(q)
        return self._powers[q]

    def space(self, q: int) -> CoefficientSpace:
        key = ("space", q)
        c = self._cache()
        if key not in c:
            a = self.algebra
            F = a.field
            left = F.tensordot(self.power(q).matrix, a.left_matrices, axes=(0, 0))
            c[key] = CoefficientSpace(left, a.right_matrices, np.full(a.dim, q, dtype=np.int64))
        return c[key]

    def corners(self, q: int):
        # sigma must permute the vertex idempotents for the operator
        # phi -> sigma^-1 phi(sigma -) to preserve the corner mask
        if self.sigma.vertex_permutation() is None:
            return None
        return super().corners(q)

    def bimodule(self, q: int) -> Bimodule:
        return twisted_bimodule(self.algebra, self.power(q)) if q else Bimodule(
            self.algebra, self.algebra.left_matrices, self.algebra.right_matrices
        )

    def product(self, q: int, t: int) -> np.ndarray:
        key = ("prod", q, t)
        c = self._cache()
        if key not in c:
            a = self.algebra
            F = a.field
            # P[k, i, j] = sum_l S[l, i] mult[l, j, k]
            S = self.power(t).matrix
            c[key] = F.tensordot(S, a.mult, axes=(0, 0)).transpose(2, 0, 1)
        return c[key]

    def __repr__(self):
        return f"TwistedFamily({self.algebra.name}, {self.sigma.describe()})"


class PulledBackCoefficients(Coefficients):
    """C(F, F): coefficients over the source of F: D -> C."""

    def __init__(self, base: Coefficients, functor: AlgebraMorphism):
        if functor.target is not base.algebra:
            raise CoefficientError("functor target must be the coefficient algebra")
        self.base = base
        self.functor = functor
        self.algebra = functor.source

    def space(self, q: int) -> CoefficientSpace:
        key = ("space", q)
        c = self._cache()
        if key not in c:
            sp = self.base.space(q)
            F = self.field
            M = self.functor.matrix
            c[key] = CoefficientSpace(
                F.tensordot(M, sp.left, axes=(0, 0)), F.tensordot(M, sp.right, axes=(0, 0)), sp.degrees
            )
        return c[key]

    def product(self, q: int, t: int) -> np.ndarray:
        return self.base.product(q, t)

    def __repr__(self):
        return f"PulledBack({self.base!r})"


# ---------------------------------------------------------------------------
# cochains


@dataclass(frozen=True, eq=False)
class HochschildCochain:
    coefficients: Coefficients
    arity: int
    degree: int
    data: np.ndarray

    def __post_init__(self):
        F = self.coefficients.field
        arr = F.array(self.data)
        shape = self.coefficients.shape(self.arity, self.degree)
        if arr.shape != shape:
            raise ValueError(f"cochain data has shape {arr.shape}, expected {shape}")
        object.__setattr__(self, "data", arr)

    @property
    def field(self) -> Field:
        return self.coefficients.field

    @property
    def algebra(self) -> Algebra:
        return self.coefficients.algebra

    @property
    def bidegree(self) -> tuple:
        return (self.arity, self.degree)

    @property
    def total_degree(self) -> int:
        return self.arity + self.degree

    def _check(self, other: "HochschildCochain"):
        if other.coefficients is not self.coefficients or other.bidegree != self.bidegree:
            raise CoefficientError("cochains live in different spaces")

    def __add__(self, other):
        self._check(other)
        return self._new(self.field.normalize(self.data + other.data))

    def __sub__(self, other):
        self._check(other)
        return self._new(self.field.normalize(self.data - other.data))

    def __neg__(self):
        return self._new(self.field.normalize(-self.data))

    def scale(self, c) -> "HochschildCochain":
        return self._new(self.field.normalize(self.data * self.field.scalar(c)))

    def _new(self, data) -> "HochschildCochain":
        return HochschildCochain(self.coefficients, self.arity, self.degree, data)

    def __eq__(self, other):
        if not isinstance(other, HochschildCochain):
            return NotImplemented
        return (
            other.coefficients is self.coefficients
            and other.bidegree == self.bidegree
            and self.field.equal(self.data, other.data)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return self.field.is_zero(self.data)

    def masked(self) -> np.ndarray:
        return np.array(self.data.reshape(-1)[self.coefficients.mask_index(self.arity, self.degree)])

    def in_mask(self) -> bool:
        m = self.coefficients.mask(self.arity, self.degree)
        return self.field.is_zero(self.data[~m])

    def __call__(self, *inputs) -> np.ndarray:
        """Evaluate on basis indices or algebra vectors."""
        F = self.field
        out = self.data
        for x in inputs:
            if isinstance(x, (int, np.integer)):
                out = np.take(out, int(x), axis=1)
            else:
                out = F.tensordot(out, F.array(x), axes=([1], [0]))
        return out

    def __repr__(self):
        return f"HochschildCochain(bidegree={self.bidegree}, {self.coefficients!r})"


def zero_cochain(coeff: Coefficients, n: int, q: int) -> HochschildCochain:
    return HochschildCochain(coeff, n, q, coeff.field.zeros(coeff.shape(n, q)))


def random_cochain(coeff: Coefficients, n: int, q: int, rng) -> HochschildCochain:
    """Uniformly random cochain supported on the mask."""
    F = coeff.field
    data = F.zeros(coeff.shape(n, q)).reshape(-1)
    idx = coeff.mask_index(n, q)
    data[idx] = F.random(rng, len(idx))
    return HochschildCochain(coeff, n, q, data.reshape(coeff.shape(n, q)))


def from_masked(coeff: Coefficients, n: int, q: int, vec) -> HochschildCochain:
    F = coeff.field
    data = F.zeros(coeff.shape(n, q)).reshape(-1)
    data[coeff.mask_index(n, q)] = F.array(vec)
    return HochschildCochain(coeff, n, q, data.reshape(coeff.shape(n, q)))


def _sign_vector(F: Field, exps) -> np.ndarray:
    """(-1)^e as field elements."""
    e = np.asarray(exps, dtype=np.int64) % 2
    return F.array(np.where(e == 1, -1, 1))


def _apply_axis_sign(F: Field, arr: np.ndarray, axis: int, signs: np.ndarray) -> np.ndarray:
    shape = [1] * arr.ndim
    shape[axis] = -1
    return F.normalize(arr * signs.reshape(shape))


def _differential_batch(coeff: Coefficients, n: int, q: int, arr: np.ndarray) -> np.ndarray:
    """d on a batch: arr has shape (B, D, d^n); returns (B, D, d^(n+1))."""
    F = coeff.field
    a = coeff.algebra
    sp = coeff.space(q)
    deg = a.degree_array()
    # f_1 . phi(f_2, ...), sign (-1)^(q |f_1|)
    t0 = F.tensordot(sp.left, arr, axes=(2, 1))  # (d, D, B, rest)
    t0 = np.moveaxis(t0, 2, 0)  # (B, d, D, rest)
    t0 = np.swapaxes(t0, 1, 2)  # (B, D, d, rest)
    if q % 2:
        t0 = _apply_axis_sign(F, t0, 2, _sign_vector(F, deg))
    total = t0
    # sum_i (-1)^i phi(.., f_i f_{i+1}, ..)
    for i in range(1, n + 1):
        t = F.tensordot(arr, a.mult, axes=([1 + i], [2]))  # (B, D, others..., f_i, f_i+1)
        t = np.moveaxis(t, [-2, -1], [1 + i, 2 + i])
        total = total + t if i % 2 == 0 else total - t
    # (-1)^(n+1) phi(f_1..f_n) . f_{n+1}
    tl = F.tensordot(arr, sp.right, axes=([1], [2]))  # (B, f_1..f_n, f_{n+1}, D)
    tl = np.moveaxis(tl, -1, 1)
    total = total + tl if (n + 1) % 2 == 0 else total - tl
    return F.normalize(total)


def differential(c: HochschildCochain) -> HochschildCochain:
    out = _differential_batch(c.coefficients, c.arity, c.degree, c.data[None])[0]
    return HochschildCochain(c.coefficients, c.arity + 1, c.degree, out)


def d_prime(c: HochschildCochain) -> HochschildCochain:
    dc = differential(c)
    return dc if c.degree % 2 == 0 else -dc


def _degree_sign_array(F: Field, deg: np.ndarray, ndim: int, axes, factor: int) -> Optional[np.ndarray]:
    """(-1)^(factor * sum of degrees over ``axes``) broadcast over an array of ndim axes."""
    if factor % 2 == 0 or not axes:
        return None
    total = np.zeros((1,) * ndim, dtype=np.int64)
    for ax in axes:
        shape = [1] * ndim
        shape[ax] = -1
        total = total + deg.reshape(shape)
    return _sign_vector(F, total)


def cup_product(a: HochschildCochain, b: HochschildCochain, coefficients: Optional[Coefficients] = None) -> HochschildCochain:
    """phi cup psi with values multiplied by the coefficient product."""
    coeff = a.coefficients
    if b.coefficients is not coeff:
        raise CoefficientError("cup product needs cochains with the same coefficient family")
    F = a.field
    p, q = a.bidegree
    s, t = b.bidegree
    P = coeff.product(q, t)
    X = F.tensordot(P, b.data, axes=(2, 0))  # (D, Dq, g...)
    X = F.tensordot(X, a.data, axes=(1, 0))  # (D, g..., f...)
    order = [0] + list(range(1 + s, 1 + s + p)) + list(range(1, 1 + s))
    X = np.transpose(X, order)
    sg = _degree_sign_array(F, a.algebra.degree_array(), X.ndim, list(range(1, 1 + p)), t)
    if sg is not None:
        X = F.normalize(X * sg)
    return HochschildCochain(coefficients or coeff, p + s, q + t, X)


def dot_product(a: HochschildCochain, b: HochschildCochain) -> HochschildCochain:
    c = cup_product(a, b)
    return -c if (b.degree * a.arity) % 2 else c


def _insert(F: Field, phi: np.ndarray, p: int, psi: np.ndarray, s: int, i: int) -> np.ndarray:
    """phi(x_1..x_{i-1}, psi(...), x_{i+1}..) as an array with psi's inputs in place."""
    X = F.tensordot(phi, psi, axes=([i], [0]))  # (o, f_1..f_{i-1}, f_{i+1}..f_p, g_1..g_s)
    nd = X.ndim
    src = list(range(nd - s, nd))
    dst = list(range(i, i + s))
    return np.moveaxis(X, src, dst)


def _prelie_arrays(F: Field, deg: np.ndarray, phi: np.ndarray, p: int, psi: np.ndarray, s: int, t: int) -> np.ndarray:
    out = None
    for i in range(1, p + 1):
        X = _insert(F, phi, p, psi, s, i)
        exp_const = (s - 1) * (p - i) + t * (p - 1)
        sg = _degree_sign_array(F, deg, X.ndim, list(range(1, i)), t)
        if sg is not None:
            X = F.normalize(X * sg)
        if exp_const % 2:
            X = F.normalize(-X)
        out = X if out is None else F.normalize(out + X)
    return out


def pre_lie(a: HochschildCochain, b: HochschildCochain) -> HochschildCochain:
    """phi o psi on cochains with coefficients in the algebra itself."""
    coeff = a.coefficients
    if not coeff.is_self or b.coefficients is not coeff:
        raise CoefficientError("the pre-Lie product needs coefficients in the algebra itself")
    p, q = a.bidegree
    s, t = b.bidegree
    if p == 0:
        return zero_cochain(coeff, s - 1, q + t) if s >= 1 else _zero_negative(coeff, q + t)
    F = a.field
    out = _prelie_arrays(F, a.algebra.degree_array(), a.data, p, b.data, s, t)
    return HochschildCochain(coeff, p + s - 1, q + t, out)


def _zero_negative(coeff, q):
    raise CoefficientError("pre-Lie product of two 0-cochains has arity -1")


def bracket(a: HochschildCochain, b: HochschildCochain) -> HochschildCochain:
    p, q = a.bidegree
    s, t = b.bidegree
    x = pre_lie(a, b)
    y = pre_lie(b, a)
    return x - y if ((p + q - 1) * (s + t - 1)) % 2 == 0 else x + y


def gerstenhaber_square(a: HochschildCochain) -> HochschildCochain:
    return pre_lie(a, a)


def pullback(functor: AlgebraMorphism, c: HochschildCochain, coefficients: Optional[Coefficients] = None) -> HochschildCochain:
    """F^*(phi)(g_1..g_n) = phi(F g_1, .., F g_n), coefficients C(F, F)."""
    base = c.coefficients
    if functor.target is not base.algebra:
        raise CoefficientError("functor target must be the cochain's algebra")
    coeff = coefficients or _pulled_back(base, functor)
    F = c.field
    X = c.data
    for _ in range(c.arity):
        X = F.tensordot(X, functor.matrix, axes=([1], [0]))  # moves the axis to the end
    return HochschildCochain(coeff, c.arity, c.degree, X)


_PB_CACHE: dict = {}


def pulled_back_coefficients(base: Coefficients, functor: AlgebraMorphism) -> Coefficients:
    """Shared C(F, F) for a functor F, so pullbacks of separate cochains combine."""
    return _pulled_back(base, functor)


def _pulled_back(base: Coefficients, functor: AlgebraMorphism) -> Coefficients:
    key = (id(base), id(functor))
    hit = _PB_CACHE.get(key)
    if hit is not None and hit[0] is base and hit[1] is functor:
        return hit[2]
    coeff = PulledBackCoefficients(base, functor)
    _PB_CACHE[key] = (base, functor, coeff)
    return coeff


def pushforward(tau: np.ndarray, c: HochschildCochain, target: Coefficients, degree_shift: int = 0) -> HochschildCochain:
    """tau_*(phi) = tau o phi for a coefficient map tau (matrix D_target x D_source)."""
    F = c.field
    tau = F.array(tau)
    X = F.tensordot(tau, c.data, axes=(1, 0))
    return HochschildCochain(target, c.arity, c.degree + degree_shift, X)


def bullet_along_functor(a: HochschildCochain, b: HochschildCochain, functor: AlgebraMorphism) -> HochschildCochain:
    """phi o psi for phi in HC(C, C), psi in HC(D, C(F, F)); result in HC(D, C(F, F))."""
    if not a.coefficients.is_self or functor.target is not a.algebra:
        raise CoefficientError("phi must have coefficients in its own algebra, the target of F")
    if b.algebra is not functor.source:
        raise CoefficientError("psi must be a cochain on the source of F")
    if b.coefficients.space(b.degree).dim != a.algebra.dim:
        raise CoefficientError("psi must take values in the target algebra")
    F = a.field
    p, q = a.bidegree
    s, t = b.bidegree
    coeff = b.coefficients
    if p == 0:
        return zero_cochain(coeff, s - 1, q + t)
    deg = functor.source.degree_array()
    out = None
    M = functor.matrix
    for i in range(1, p + 1):
        phi = a.data
        # pull back every input slot except i
        for j in range(1, p + 1):
            if j == i:
                continue
            phi = np.moveaxis(F.tensordot(phi, M, axes=([j], [0])), -1, j)
        X = _insert(F, phi, p, b.data, s, i)
        exp_const = (s - 1) * (p - i) + t * (p - 1)
        sg = _degree_sign_array(F, deg, X.ndim, list(range(1, i)), t)
        if sg is not None:
            X = F.normalize(X * sg)
        if exp_const % 2:
            X = F.normalize(-X)
        out = X if out is None else F.normalize(out + X)
    return HochschildCochain(coeff, p + s - 1, q + t, out)


# ---------------------------------------------------------------------------
# distinguished cochains


def euler_derivation(a: Algebra, coeff: Optional[Coefficients] = None) -> HochschildCochain:
    """delta(f) = |f| f."""
    coeff = coeff or self_coefficients(a)
    F = a.field
    if not a.is_graded:
        warnings.warn("ungraded algebra: the Euler derivation is zero", stacklevel=2)
    data = F.array(np.diag(a.degree_array()))
    return HochschildCochain(coeff, 1, 0, data)


def beta_cochain(a: Algebra, coeff: Optional[Coefficients] = None) -> HochschildCochain:
    """beta(f) = |f|(1 - |f|)/2 f, the integer reduced into the field."""
    coeff = coeff or self_coefficients(a)
    F = a.field
    deg = a.degree_array()
    vals = [F.scalar(int(n) * (1 - int(n)) // 2) for n in deg]
    data = F.zeros((a.dim, a.dim))
    for i, v in enumerate(vals):
        data[i, i] = v
    return HochschildCochain(coeff, 1, 0, data)


def product_cochain(a: Algebra, coeff: Optional[Coefficients] = None) -> HochschildCochain:
    """m_2(f, g) = fg."""
    coeff = coeff or self_coefficients(a)
    return HochschildCochain(coeff, 2, 0, np.array(a.mult.transpose(2, 0, 1)))


def unit_cochain(a: Algebra, coeff: Optional[Coefficients] = None) -> HochschildCochain:
    coeff = coeff or self_coefficients(a)
    return HochschildCochain(coeff, 0, 0, a.unit)


# ---------------------------------------------------------------------------
# cohomology


def differential_matrix(coeff: Coefficients, n: int, q: int) -> np.ndarray:
    """Matrix of d' from masked arity-n coordinates to masked arity-(n+1) coordinates."""
    key = ("dmat", n, q)
    c = coeff._cache()
    if key in c:
        return c[key]
    F = coeff.field
    idx_in = coeff.mask_index(n, q)
    idx_out = coeff.mask_index(n + 1, q)
    shape = coeff.shape(n, q)
    size = int(np.prod(shape))
    cols = []
    chunk = max(1, 2_000_000 // max(1, size * coeff.algebra.dim))
    for start in range(0, len(idx_in), chunk):
        sel = idx_in[start : start + chunk]
        batch = F.zeros((len(sel), size))
        batch[np.arange(len(sel)), sel] = 1
        out = _differential_batch(coeff, n, q, batch.reshape((len(sel),) + shape))
        cols.append(out.reshape(len(sel), -1)[:, idx_out])
    M = np.concatenate(cols, axis=0).T if cols else F.zeros((len(idx_out), 0))
    if q % 2:
        M = F.normalize(-M)
    M = np.array(M)
    c[key] = M
    return M


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    space: "CohomologySpace"
    representative: HochschildCochain
    coordinates: np.ndarray

    @property
    def bidegree(self) -> tuple:
        return self.representative.bidegree

    def is_zero(self) -> bool:
        return self.space.field.is_zero(self.coordinates)


class LinearCohomology:
    """ker(d_out) / im(d_in) for a complex given by matrices on k^m.

    Representatives of a basis of the quotient are chosen greedily among
    the kernel vectors; coordinates are read off by solving against the
    stacked boundaries and representatives."""

    def __init__(self, field: Field, m: int, d_out: Optional[np.ndarray], d_in: Optional[np.ndarray]):
        F = field
        self.field = F
        self.ambient_dim = m
        if d_out is None or d_out.shape[0] == 0:
            self.cocycles = F.eye(m)
        else:
            self.cocycles = F.kernel(d_out)
        if d_in is None or d_in.size == 0:
            self.boundaries = F.zeros((0, m))
        else:
            self.boundaries = F.row_space(d_in.T)
        reps = []
        span = self.boundaries
        r = span.shape[0]
        for z in self.cocycles:
            cand = np.vstack([span, z[None, :]]) if span.shape[0] else z[None, :]
            if F.rank(cand) > r:
                reps.append(z)
                span = cand
                r += 1
        self.rep_vectors = np.array(reps) if reps else F.zeros((0, m))
        self._system = np.vstack([self.boundaries, self.rep_vectors]).T if m else F.zeros((0, 0))

    @property
    def dim(self) -> int:
        return self.rep_vectors.shape[0]

    def combination(self, coords) -> np.ndarray:
        F = self.field
        if self.dim == 0:
            return F.zeros(self.ambient_dim)
        return F.tensordot(F.array(coords), self.rep_vectors, axes=(0, 0))

    def vector_is_boundary(self, v) -> bool:
        F = self.field
        if F.is_zero(v):
            return True
        if self.boundaries.shape[0] == 0:
            return False
        return F.in_span(self.boundaries, v)

    def vector_coordinates(self, v) -> np.ndarray:
        F = self.field
        if self.dim == 0:
            return F.zeros(0)
        x = F.solve(self._system, F.array(v))
        if x is None:
            raise ArithmeticError("vector is not a cocycle")
        return np.array(x[self.boundaries.shape[0] :])


class CohomologySpace(LinearCohomology):
    """HH^{n,q} as ker d' / im d' inside the masked cochains."""

    def __init__(self, coeff: Coefficients, n: int, q: int, config: HochschildConfig = DEFAULT_CONFIG):
        if n < 0:
            raise ValueError("negative Hochschild degree")
        if n + 1 > config.max_arity:
            raise ValueError(f"arity {n + 1} exceeds the truncation cap {config.max_arity}")
        self.coefficients = coeff
        self.n = n
        self.q = q
        m = len(coeff.mask_index(n, q))
        dprev = differential_matrix(coeff, n - 1, q) if n > 0 else None
        super().__init__(coeff.field, m, differential_matrix(coeff, n, q), dprev)

    def representative(self, coords) -> HochschildCochain:
        return from_masked(self.coefficients, self.n, self.q, self.combination(coords))

    def classes(self) -> list:
        F = self.field
        out = []
        for k in range(self.dim):
            e = F.zeros(self.dim)
            e[k] = 1
            out.append(CohomologyClass(self, from_masked(self.coefficients, self.n, self.q, self.rep_vectors[k]), e))
        return out

    def _vector(self, c: HochschildCochain) -> np.ndarray:
        if c.coefficients is not self.coefficients or c.bidegree != (self.n, self.q):
            raise CoefficientError("cochain is not in this cohomology space")
        if not c.in_mask():
            raise CoefficientError("cochain is not supported on composable tuples of the right degree")
        return c.masked()

    def is_cocycle(self, c: HochschildCochain) -> bool:
        return d_prime(c).is_zero()

    def is_coboundary(self, c: HochschildCochain) -> bool:
        return self.vector_is_boundary(self._vector(c))

    def coordinates(self, c: HochschildCochain) -> np.ndarray:
        """Coordinates of the class of a cocycle in the fixed basis."""
        v = self._vector(c)
        if not self.is_cocycle(c):
            raise ValueError("not a cocycle")
        return self.vector_coordinates(v)

    def class_of(self, c: HochschildCochain) -> CohomologyClass:
        return CohomologyClass(self, c, self.coordinates(c))


def cohomology_space(coeff: Coefficients, n: int, q: int, config: HochschildConfig = DEFAULT_CONFIG) -> CohomologySpace:
    c = coeff._cache()
    key = ("hh", n, q, config.max_arity)
    if key not in c:
        c[key] = CohomologySpace(coeff, n, q, config)
    return c[key]


def cohomology_basis(coeff: Coefficients, n: int, q: int, config: HochschildConfig = DEFAULT_CONFIG) -> list:
    return cohomology_space(coeff, n, q, config).classes()


# ---------------------------------------------------------------------------
# the minimal resolution side


def _slot_bases(M: Bimodule, slots) -> list:
    F = M.field
    out = []
    for s in slots:
        rows, _ = F.rref(M.slot_projector(s).T)
        out.append(np.array(rows.T))
    return out


def _hom_complex_matrix(res: Resolution, M: Bimodule, n: int) -> np.ndarray:
    """Hom(P_n, M) -> Hom(P_{n+1}, M), f -> f o d_{n+1}, in generator-image coordinates."""
    F = M.field
    Pn, Pn1 = res.projectives[n], res.projectives[n + 1]
    sl_n, sl_n1 = res.slots[n], res.slots[n + 1]
    Bn = _slot_bases(M, sl_n)
    Bn1 = _slot_bases(M, sl_n1)
    gens = generator_columns(Pn1, sl_n1)
    dcols = np.array(res.differentials[n + 1][:, gens])  # (dim P_n, #gens)
    rows_total = sum(b.shape[1] for b in Bn1)
    cols = []
    off = 0
    for s, Y in zip(sl_n, Bn):
        size = len(Pn.projective_basis(s))
        W = M.generator_images(s, Y)  # (size, dim M, r)
        block = dcols[off : off + size, :]  # (size, #gens)
        # value at generator g of P_{n+1}: sum_b block[b, g] W[b, :, t]
        V = F.tensordot(block, W, axes=(0, 0))  # (#gens, dim M, r)
        for t in range(Y.shape[1]):
            col = []
            for g, Yg in enumerate(Bn1):
                if Yg.shape[1] == 0:
                    continue
                x = F.solve(Yg, V[g, :, t])
                if x is None:
                    raise ArithmeticError("composite leaves the slot space")
                col.append(x)
            cols.append(np.concatenate(col) if col else F.zeros(0))
        off += size
    if not cols:
        return F.zeros((rows_total, 0))
    return np.stack(cols, axis=1)


def hh_dimensions_via_resolution(M: Bimodule, nmax: int, res: Optional[Resolution] = None) -> list:
    """dim HH^n(Lambda, M) for n = 0..nmax from Hom(P_*, M), P_* minimal."""
    from .modules import minimal_resolution, regular_bimodule

    a = M.algebra
    F = M.field
    if res is None or res.length < nmax + 1:
        res = minimal_resolution(regular_bimodule(a), nmax + 1)
    dims = []
    ranks = []
    for n in range(nmax + 1):
        mat = _hom_complex_matrix(res, M, n)
        ranks.append(F.rank(mat) if mat.size else 0)
    for n in range(nmax + 1):
        hom_dim = sum(b.shape[1] for b in _slot_bases(M, res.slots[n]))
        prev = ranks[n - 1] if n else 0
        dims.append(hom_dim - ranks[n] - prev)
    return dims


def _bar_differential(F: Field, a: Algebra, T: np.ndarray, k: int) -> np.ndarray:
    """d on B_k tensors of shape (d,)*(k+2) + (cols,)."""
    out = None
    for i in range(k + 1):
        X = F.tensordot(T, a.mult, axes=([i, i + 1], [0, 1]))  # moves product to the end
        X = np.moveaxis(X, -1, i)
        if i % 2:
            X = F.normalize(-X)
        out = X if out is None else F.normalize(out + X)
    return out


def comparison_maps(res: Resolution, n: int) -> list:
    """Chain map P_* -> B_* (bar resolution over k) lifting the identity.

    Entry k is an array of shape (d,)*(k+2) + (dim P_k,): the image of each
    basis element p (x) q of P_k.  On generators c_k(g) = e_i (x) c_{k-1}(d_k g)."""
    a = res.module.algebra
    F = a.field
    d = a.dim
    L, R = a.left_matrices, a.right_matrices
    out = []
    for k in range(n + 1):
        P = res.projectives[k]
        slots = res.slots[k]
        cols = []
        gens = generator_columns(P, slots)
        for s, g in zip(slots, gens):
            i, j = s
            if k == 0:
                y = np.array(res.differentials[0][:, g])
            else:
                prev = out[k - 1]
                y = F.tensordot(prev, res.differentials[k][:, g], axes=([prev.ndim - 1], [0]))
            G = F.normalize(np.multiply.outer(a.idempotent(i), y))
            basis = P.projective_basis(s)
            Ip = sorted({p for p, _ in basis})
            Jq = sorted({q for _, q in basis})
            # p . G . q for all (p, q)
            X = F.tensordot(L[Ip], G, axes=(2, 0))  # (|I|, d, mid..., d)
            X = F.tensordot(X, R[Jq], axes=([X.ndim - 1], [2]))  # (|I|, d, mid..., |J|, d)
            X = np.moveaxis(X, -2, 1)  # (|I|, |J|, d, mid..., d)
            X = X.reshape((len(Ip) * len(Jq),) + X.shape[2:])
            cols.append(np.moveaxis(X, 0, -1))
        out.append(np.concatenate(cols, axis=-1) if cols else F.zeros((d,) * (k + 2) + (0,)))
    return out


def _evaluate_on_bar(c: HochschildCochain, T: np.ndarray) -> np.ndarray:
    """sum a_0 . phi(a_1..a_n) . a_{n+1} over bar elements; T: (d,)*(n+2) + (cols,)."""
    F = c.field
    sp = c.coefficients.space(c.degree)
    n = c.arity
    mids = list(range(1, n + 1))
    Y = F.tensordot(c.data, T, axes=(list(range(1, n + 1)), mids))  # (D, a0, a_{n+1}, cols)
    Z = F.tensordot(sp.right, Y, axes=([0, 2], [2, 0]))  # (D, a0, cols)
    W = F.tensordot(sp.left, Z, axes=([0, 2], [1, 0]))  # (D, cols)
    return W


def class_to_syzygy_map(x, res: Resolution, check: bool = True) -> ModuleMap:
    """The map Omega^n(Lambda) -> M^q represented by a cocycle of arity n > 0."""
    c = x.representative if isinstance(x, CohomologyClass) else x
    n, q = c.bidegree
    if n <= 0:
        raise ValueError("class_to_syzygy_map needs positive Hochschild degree")
    if res.length < n:
        raise ValueError("resolution too short")
    F = c.field
    coeff = c.coefficients
    if isinstance(coeff, TwistedFamily):
        target = coeff.bimodule(q)
    elif isinstance(coeff, BimoduleCoefficients):
        target = coeff.module
    elif isinstance(coeff, SelfCoefficients) and not coeff.algebra.is_graded:
        from .modules import regular_bimodule

        target = regular_bimodule(coeff.algebra)
    else:
        raise CoefficientError("coefficients must be an ungraded bimodule")
    if check and not d_prime(c).is_zero():
        raise ValueError("representative is not a cocycle")
    f = _evaluate_on_bar(c, comparison_maps(res, n)[n])  # (dim M, dim P_n)
    cov = res.covers[n]
    if cov is None:
        return ModuleMap(res.syzygies[n], target, F.zeros((target.dim, 0)))
    # f vanishes on ker(cover) = Omega^{n+1}; factor through the cover
    K, _ = cov.kernel
    if K.shape[1] and not F.is_zero(F.matmul(f, K)):
        raise ArithmeticError("lifting failure: cocycle does not vanish on the next syzygy")
    return ModuleMap(res.syzygies[n], target, F.matmul(f, cov.section))


def is_edge_unit(x, res: Resolution) -> bool:
    """Positive-degree class whose syzygy map is a stable isomorphism."""
    from .modules import is_stable_isomorphism

    c = x.representative if isinstance(x, CohomologyClass) else x
    if c.arity <= 0:
        raise ValueError("edge units are only tested in positive Hochschild degree")
    if c.is_zero() or (isinstance(x, CohomologyClass) and x.is_zero()):
        return False
    f = class_to_syzygy_map(c, res)
    return is_stable_isomorphism(f)
