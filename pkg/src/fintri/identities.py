"""Randomized checks of the Gerstenhaber algebra laws and the Euler class
identities, at cochain level and in cohomology."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra
from .hochschild import (
    HochschildCochain,
    beta_cochain,
    bracket,
    cohomology_space,
    cup_product,
    d_prime,
    differential,
    dot_product,
    euler_derivation,
    gerstenhaber_square,
    product_cochain,
    pulled_back_coefficients,
    pullback,
    bullet_along_functor,
    pre_lie,
    random_cochain,
    self_coefficients,
)


@dataclass
class IdentityReport:
    passed: Counter = field(default_factory=Counter)
    failed: Counter = field(default_factory=Counter)
    examples: list = field(default_factory=list)  # (name, bidegrees) of failures

    def record(self, name: str, ok: bool, info=None):
        if ok:
            self.passed[name] += 1
        else:
            self.failed[name] += 1
            if len(self.examples) < 20:
                self.examples.append((name, info))

    @property
    def ok(self) -> bool:
        return not self.failed

    def merge(self, other: "IdentityReport"):
        self.passed.update(other.passed)
        self.failed.update(other.failed)
        self.examples.extend(other.examples)

    def lines(self) -> list:
        names = sorted(set(self.passed) | set(self.failed))
        return [f"{n}: {self.passed[n]} passed, {self.failed[n]} failed" for n in names]


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def _bidegrees(a: Algebra, max_arity: int) -> list:
    """(p, q) pairs that can carry nonzero cochains."""
    deg = a.degree_array()
    lo, hi = int(deg.min()), int(deg.max())
    out = []
    for p in range(max_arity + 1):
        for q in range(lo - p * hi, hi - p * lo + 1):
            out.append((p, q))
    return out


# ---------------------------------------------------------------------------
# cochain level


def check_cochain_identities(a: Algebra, trials: int, rng, max_arity: int = 4) -> IdentityReport:
    """d^2 = 0, Leibniz for d' and the dot product, associativity of cup and
    dot products, and d' = [m_2, -]."""
    C = self_coefficients(a)
    rep = IdentityReport()
    pairs = [b for b in _bidegrees(a, max_arity) if len(C.mask_index(*b))]
    m2 = product_cochain(a, C)

    def pick(max_p):
        cands = [b for b in pairs if b[0] <= max_p]
        p, q = cands[int(rng.integers(len(cands)))]
        return random_cochain(C, p, q, rng)

    for _ in range(trials):
        x = pick(max_arity - 1)
        dx = differential(x)
        rep.record("d^2 = 0", differential(dx).is_zero(), x.bidegree)
        rep.record("d' = [m2, -]", (d_prime(x) - bracket(m2, x)).is_zero(), x.bidegree)
        y = pick(max(0, max_arity - 1 - x.arity))
        xy = dot_product(x, y)
        lhs = d_prime(xy)
        r1 = dot_product(d_prime(x), y)
        r2 = dot_product(x, d_prime(y))
        rhs = r1 + r2 if x.total_degree % 2 == 0 else r1 - r2
        rep.record("d' Leibniz", (lhs - rhs).is_zero(), (x.bidegree, y.bidegree))
        budget = max_arity - x.arity - y.arity
        if budget >= 0:
            z = pick(budget)
            rep.record(
                "cup associativity",
                (cup_product(cup_product(x, y), z) - cup_product(x, cup_product(y, z))).is_zero(),
                (x.bidegree, y.bidegree, z.bidegree),
            )
            rep.record(
                "dot associativity",
                (dot_product(xy, z) - dot_product(x, dot_product(y, z))).is_zero(),
                (x.bidegree, y.bidegree, z.bidegree),
            )
    return rep


# ---------------------------------------------------------------------------
# cohomology level


class _ClassSampler:
    def __init__(self, a: Algebra, rng, max_arity: int):
        self.a = a
        self.C = self_coefficients(a)
        self.rng = rng
        self.spaces = {}
        for p, q in _bidegrees(a, max_arity):
            if not len(self.C.mask_index(p, q)):
                continue
            H = cohomology_space(self.C, p, q)
            if H.dim:
                self.spaces[(p, q)] = H

    def degrees(self, max_p: int, parity=None) -> list:
        out = [b for b in self.spaces if b[0] <= max_p]
        if parity is not None:
            out = [b for b in out if (b[0] + b[1]) % 2 == parity]
        return out

    def sample(self, bideg) -> HochschildCochain:
        """A random cocycle: random class plus a random coboundary."""
        H = self.spaces[bideg]
        F = H.field
        rep = H.representative(F.random(self.rng, H.dim))
        p, q = bideg
        if p > 0 and len(self.C.mask_index(p - 1, q)):
            rep = rep + d_prime(random_cochain(self.C, p - 1, q, self.rng))
        return rep


def _same_class(x: HochschildCochain, y: HochschildCochain) -> bool:
    diff = x - y
    if diff.is_zero():
        return True
    if not d_prime(diff).is_zero():
        return False
    return cohomology_space(diff.coefficients, *diff.bidegree).is_coboundary(diff)


def check_gerstenhaber_relations(a: Algebra, trials: int, rng, max_arity: int = 2) -> IdentityReport:
    """The relations of a Gerstenhaber algebra on random classes of arity
    at most ``max_arity`` (so that every composite stays below arity 8)."""
    rep = IdentityReport()
    s = _ClassSampler(a, rng, max_arity)
    char2 = a.field.characteristic == 2
    if not s.spaces:
        return rep
    degs = s.degrees(max_arity)
    # brackets of two 0-cochains would have arity -1: x, y and the squared
    # classes are taken of positive arity, z is unrestricted
    pos = [b for b in degs if b[0] > 0]
    if not pos:
        return rep

    def rnd(choices):
        return choices[int(rng.integers(len(choices)))]

    def tot(c):
        return c.total_degree

    for _ in range(trials):
        x, y, z = s.sample(rnd(pos)), s.sample(rnd(pos)), s.sample(rnd(degs))
        info = (x.bidegree, y.bidegree, z.bidegree)
        xy = dot_product(x, y)
        rep.record("product associative", _same_class(dot_product(xy, z), dot_product(x, dot_product(y, z))), info)
        rep.record("product graded commutative", _same_class(xy, dot_product(y, x).scale(_sgn(tot(x) * tot(y)))), info)
        bxy = bracket(x, y)
        rep.record(
            "bracket antisymmetric",
            _same_class(bxy, bracket(y, x).scale(-_sgn((tot(x) - 1) * (tot(y) - 1)))),
            info,
        )
        if tot(x) % 2:
            rep.record("[x,x] = 0 for |x| odd", _same_class(bracket(x, x), _zero_like(bracket(x, x))), info)
        jac = bracket(bracket(x, y), z) + bracket(y, bracket(x, z)).scale(_sgn((tot(x) - 1) * (tot(y) - 1)))
        rep.record("Jacobi", _same_class(bracket(x, bracket(y, z)), jac), info)
        if tot(x) % 2 == 0:
            xxx = bracket(x, bracket(x, x))
            rep.record("[x,[x,x]] = 0 for |x| even", _same_class(xxx, _zero_like(xxx)), info)
        poisson = dot_product(bxy, z) + dot_product(y, bracket(x, z)).scale(_sgn((tot(x) - 1) * tot(y)))
        rep.record("Poisson", _same_class(bracket(x, dot_product(y, z)), poisson), info)
        # relations involving the square
        if char2 or tot(x) % 2 == 0:
            sx = gerstenhaber_square(x)
            rep.record("2 Sq(x) = [x,x]", _same_class(sx.scale(2), bracket(x, x)), info)
            rep.record("[Sq(x),y] = [x,[x,y]]", _same_class(bracket(sx, y), bracket(x, bxy)), info)
        even = [b for b in s.degrees(max_arity, parity=None if char2 else 0) if b[0] > 0]
        if even:
            b = rnd(even)
            u, v = s.sample(b), s.sample(b)
            rep.record(
                "Sq(x+y)",
                _same_class(gerstenhaber_square(u + v), gerstenhaber_square(u) + gerstenhaber_square(v) + bracket(u, v)),
                (b, b),
            )
            small = [d for d in even if 2 * (d[0] + b[0]) - 1 <= 7]
            if small:
                b2 = rnd(small)
                w = s.sample(b2)
                su, sw = gerstenhaber_square(u), gerstenhaber_square(w)
                rhs = (
                    dot_product(su, dot_product(w, w))
                    + dot_product(dot_product(u, bracket(u, w)), w)
                    + dot_product(dot_product(u, u), sw)
                )
                rep.record("Sq(x.y)", _same_class(gerstenhaber_square(dot_product(u, w)), rhs), (b, b2))
    return rep


def _zero_like(c: HochschildCochain) -> HochschildCochain:
    return c.scale(0)


# ---------------------------------------------------------------------------
# Euler class


def check_euler_identities(a: Algebra, trials: int, rng, max_arity: int = 3) -> IdentityReport:
    """d(delta) = 0, [delta, phi] = q phi, d(beta) = delta cup delta,
    and Sq(delta) = delta in characteristic 2."""
    rep = IdentityReport()
    C = self_coefficients(a)
    delta = euler_derivation(a, C)
    rep.record("d(delta) = 0", differential(delta).is_zero())
    beta = beta_cochain(a, C)
    rep.record("d(beta) = delta cup delta", (differential(beta) - cup_product(delta, delta)).is_zero())
    if a.field.characteristic == 2:
        rep.record("Sq(delta) = delta", (gerstenhaber_square(delta) - delta).is_zero())
    pairs = [b for b in _bidegrees(a, max_arity) if len(C.mask_index(*b))]
    for _ in range(trials):
        p, q = pairs[int(rng.integers(len(pairs)))]
        phi = random_cochain(C, p, q, rng)
        rep.record("[delta, phi] = q phi", (bracket(delta, phi) - phi.scale(q)).is_zero(), (p, q))
    return rep


# ---------------------------------------------------------------------------
# along a functor F : D -> C


def check_functor_identities(functor, trials: int, rng, max_arity: int = 3) -> IdentityReport:
    """F^*(phi o phi') = phi o F^*(phi') and the commutator formula

        F^*(phi).psi - (-1)^(|phi||psi|) psi.F^*(phi)
            = (-1)^|phi| (d'(phi o psi) - d'(phi) o psi + (-1)^|phi| phi o d'(psi))

    for phi, phi' in HC(C, C) and psi in HC(D, C(F, F))."""
    rep = IdentityReport()
    c_alg = functor.target
    C = self_coefficients(c_alg)
    P = pulled_back_coefficients(C, functor)
    up = [b for b in _bidegrees(c_alg, max_arity) if len(C.mask_index(*b)) and b[0] > 0]
    down = [b for b in _bidegrees(c_alg, max_arity) if len(P.mask_index(*b))]
    if not up or not down:
        return rep

    def rnd(choices, limit):
        ok = [b for b in choices if b[0] <= limit]
        return ok[int(rng.integers(len(ok)))]

    for _ in range(trials):
        phi = random_cochain(C, *rnd(up, max_arity - 1), rng)
        phi2 = random_cochain(C, *rnd(down, max_arity - phi.arity), rng)
        lhs = pullback(functor, pre_lie(phi, phi2), P)
        rhs = bullet_along_functor(phi, pullback(functor, phi2, P), functor)
        rep.record("F*(phi o phi') = phi o F*(phi')", (lhs - rhs).is_zero(), (phi.bidegree, phi2.bidegree))
        psi = random_cochain(P, *rnd(down, max_arity - phi.arity), rng)
        fphi = pullback(functor, phi, P)
        e = phi.total_degree
        left = dot_product(fphi, psi) - dot_product(psi, fphi).scale(_sgn(e * psi.total_degree))
        inner = (
            d_prime(bullet_along_functor(phi, psi, functor))
            - bullet_along_functor(d_prime(phi), psi, functor)
            + bullet_along_functor(phi, d_prime(psi), functor).scale(_sgn(e))
        )
        rep.record("commutator formula", (left - inner.scale(_sgn(e))).is_zero(), (phi.bidegree, psi.bidegree))
    return rep


def square_kernel_check(functor, max_p: int = 3, samples: int = 3, rng=None) -> IdentityReport:
    """For classes x in the kernel of F^* with p + q even (or char 2), F^*(Sq x) = 0.

    Each kernel class is tried with several random representatives."""
    rng = rng if rng is not None else np.random.default_rng(0)
    rep = IdentityReport()
    c_alg = functor.target
    C = self_coefficients(c_alg)
    P = pulled_back_coefficients(C, functor)
    F = c_alg.field
    char2 = F.characteristic == 2
    for p, q in _bidegrees(c_alg, max_p):
        if p == 0 or 2 * p > 8 or not (char2 or (p + q) % 2 == 0):
            continue
        if not len(C.mask_index(p, q)):
            continue
        H = cohomology_space(C, p, q)
        if H.dim == 0:
            continue
        Hd = cohomology_space(P, p, q)
        cols = [Hd.coordinates(pullback(functor, c.representative, P)) for c in H.classes()]
        M = np.stack(cols, axis=1) if Hd.dim else F.zeros((0, H.dim))
        ker = F.kernel(M) if M.shape[0] else F.eye(H.dim)
        for v in ker:
            for _ in range(samples):
                x = H.representative(v)
                if p > 0 and len(C.mask_index(p - 1, q)):
                    x = x + d_prime(random_cochain(C, p - 1, q, rng))
                sq = pullback(functor, gerstenhaber_square(x), P)
                target = cohomology_space(P, 2 * p - 1, 2 * q)
                ok = d_prime(sq).is_zero() and target.is_coboundary(sq)
                rep.record("F*(Sq x) = 0 on ker F*", ok, (p, q))
    return rep


def verify_identities(a: Algebra, trials: int = 100, seed: int = 0) -> IdentityReport:
    rng = np.random.default_rng(seed)
    rep = check_cochain_identities(a, trials, rng)
    rep.merge(check_gerstenhaber_relations(a, max(1, trials // 4), rng))
    if a.is_graded:
        rep.merge(check_euler_identities(a, trials, rng))
    return rep
