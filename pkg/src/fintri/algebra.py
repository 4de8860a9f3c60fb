"""Finite-dimensional algebras from quivers with relations.

Paths are written in composition order: ``a*b`` means "first b, then a", so
``a*b`` is nonzero only when source(a) == target(b).  A basis element of a
quiver algebra therefore sits in the corner e_t * Lambda * e_s where t is the
target and s the source of the path.

Structure constants are stored as ``mult[i, j, k]`` with
``b_i * b_j = sum_k mult[i, j, k] b_k``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .linalg import Field, Subspace, field_from_tag

__all__ = [
    "Arrow",
    "QuiverPresentation",
    "Algebra",
    "AlgebraMorphism",
    "PresentationError",
    "build_algebra",
    "enveloping_algebra",
    "radical_basis",
    "center_basis",
    "is_selfinjective",
    "check_morphism",
    "algebra_from_structure_constants",
    "parse_linear_combination",
]


class PresentationError(ValueError):
    """A quiver presentation that cannot be turned into an algebra."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True)
class QuiverPresentation:
    """Vertices, arrows, relations (strings or term lists) and a path-length bound."""

    field: object
    vertices: tuple
    arrows: tuple
    relations: tuple = ()
    bound: int = 1
    graded: bool = False
    name: str = "algebra"

    def __post_init__(self):
        object.__setattr__(self, "field", field_from_tag(self.field))
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        arrows = []
        for a in self.arrows:
            if isinstance(a, Arrow):
                arrows.append(a)
            elif isinstance(a, dict):
                arrows.append(Arrow(str(a["name"]), str(a["src"]), str(a["tgt"]), int(a.get("degree", 0))))
            else:
                arrows.append(Arrow(*[str(x) for x in a[:3]], *(int(x) for x in a[3:])))
        object.__setattr__(self, "arrows", tuple(arrows))
        object.__setattr__(self, "relations", tuple(self.relations))


# ---------------------------------------------------------------------------
# expression parsing

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_linear_combination(text: str) -> list[tuple[Fraction, list[str]]]:
    """``"2*a*b - 1/2*c*d + x"`` -> [(2, [a, b]), (-1/2, [c, d]), (1, [x])].

    Numeric factors (integers or p/q) multiply the coefficient; everything
    else is a generator name.  A term without generators is a multiple of
    the unit and comes back with an empty name list.
    """
    s = text.replace(" ", "")
    if not s:
        raise PresentationError("empty expression")
    # split on +/- that are not part of a fraction like 1/-2 (not supported anyway)
    terms = []
    buf = ""
    sign = 1
    for ch in s:
        if ch in "+-" and buf and not buf.endswith("*") and not buf.endswith("/"):
            terms.append((sign, buf))
            buf = ""
            sign = 1 if ch == "+" else -1
        elif ch in "+-" and not buf:
            sign *= 1 if ch == "+" else -1
        else:
            buf += ch
    if buf:
        terms.append((sign, buf))
    out = []
    for sign, body in terms:
        coeff = Fraction(sign)
        names = []
        for factor in body.split("*"):
            if not factor:
                raise PresentationError(f"malformed term {body!r} in {text!r}")
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
            else:
                names.append(factor)
        out.append((coeff, names))
    return out


# ---------------------------------------------------------------------------
# the algebra value type


@dataclass(frozen=True, eq=False)
class Algebra:
    """Structure constants plus optional quiver bookkeeping.

    ``corners[i] = (target, source)`` vertex indices of basis element i, when
    the basis is adapted to the vertex idempotents.  ``lengths`` are path
    lengths (radical filtration) and ``degrees`` an optional Z-grading.
    """

    field: Field
    mult: np.ndarray
    unit: np.ndarray
    labels: tuple
    vertex_basis: Optional[tuple] = None
    corners: Optional[tuple] = None
    lengths: Optional[tuple] = None
    degrees: Optional[tuple] = None
    radical: Optional[Subspace] = None
    arrow_basis: Optional[tuple] = None
    name: str = "algebra"
    vertex_names: Optional[tuple] = None
    arrow_names: Optional[tuple] = None

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    @property
    def is_graded(self) -> bool:
        return self.degrees is not None and any(self.degrees)

    @property
    def has_quiver(self) -> bool:
        return self.vertex_basis is not None and self.corners is not None

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_basis) if self.vertex_basis is not None else 0

    def degree_array(self) -> np.ndarray:
        if self.degrees is None:
            return np.zeros(self.dim, dtype=np.int64)
        return np.array(self.degrees, dtype=np.int64)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def idempotent(self, v: int) -> np.ndarray:
        return self.basis_vector(self.vertex_basis[v])

    def mul(self, u, v) -> np.ndarray:
        u = self.field.array(u)
        v = self.field.array(v)
        return self.field.normalize(np.tensordot(v, np.tensordot(u, self.mult, axes=(0, 0)), axes=(0, 0)))

    @cached_property
    def left_matrices(self) -> np.ndarray:
        """L[i] is left multiplication by b_i: L[i][k, j] = mult[i, j, k]."""
        a = np.array(self.mult.transpose(0, 2, 1))
        a.setflags(write=False)
        return a

    @cached_property
    def right_matrices(self) -> np.ndarray:
        """R[j] is right multiplication by b_j: R[j][k, i] = mult[i, j, k]."""
        a = np.array(self.mult.transpose(1, 2, 0))
        a.setflags(write=False)
        return a

    def left_of(self, x) -> np.ndarray:
        return self.field.normalize(np.tensordot(self.field.array(x), self.left_matrices, axes=(0, 0)))

    def right_of(self, x) -> np.ndarray:
        return self.field.normalize(np.tensordot(self.field.array(x), self.right_matrices, axes=(0, 0)))

    @cached_property
    def generators(self) -> tuple:
        """Basis indices generating the algebra (vertices and arrows when known)."""
        if self.vertex_basis is not None and self.arrow_basis is not None:
            return tuple(self.vertex_basis) + tuple(self.arrow_basis)
        return tuple(range(self.dim))

    @cached_property
    def radical_generators(self) -> tuple:
        """Basis indices r with M*rad = sum_r image(action of r), for any module M."""
        if self.arrow_basis is not None:
            return tuple(self.arrow_basis)
        if self.lengths is not None:
            return tuple(i for i, l in enumerate(self.lengths) if l >= 1)
        if self.radical is not None and self.radical.dim == 0:
            return ()
        raise NotImplementedError("radical generators need a quiver presentation")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def element(self, text: str) -> np.ndarray:
        """Parse a linear combination of generator products into a vector."""
        names = {}
        if self.vertex_names is not None:
            for v, name in enumerate(self.vertex_names):
                names[name] = self.basis_vector(self.vertex_basis[v])
                names[f"e{name}"] = names[name]
        for i, lab in enumerate(self.labels):
            names.setdefault(lab, self.basis_vector(i))
        total = self.field.zeros(self.dim)
        for coeff, factors in parse_linear_combination(text):
            vec = self.unit.copy()
            for f in factors:
                if f not in names:
                    raise PresentationError(f"unknown generator {f!r}")
                vec = self.mul(vec, names[f])
            total = self.field.normalize(total + self.field.scalar(coeff) * vec)
        return total

    def format_element(self, v) -> str:
        v = self.field.array(v)
        parts = []
        for i in np.flatnonzero(v):
            c = v[i]
            lab = self.labels[i]
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts) if parts else "0"

    def check_associative(self) -> bool:
        c = self.mult
        lhs = np.tensordot(c, c, axes=(2, 0))  # (i,j,k,l): (b_i b_j) b_k
        rhs = np.tensordot(c, c, axes=(2, 1)).transpose(2, 0, 1, 3)  # b_i (b_j b_k)
        return self.field.equal(lhs, rhs)

    def check_unit(self) -> bool:
        eye = self.field.eye(self.dim)
        return self.field.equal(self.left_of(self.unit), eye) and self.field.equal(self.right_of(self.unit), eye)

    def degree_zero_part(self) -> tuple["Algebra", "AlgebraMorphism"]:
        """Subalgebra spanned by degree-0 basis elements, with its inclusion."""
        idx = [i for i in range(self.dim) if self.degree_array()[i] == 0]
        mult = np.array(self.mult[np.ix_(idx, idx, idx)])
        # closure check: degree-0 products stay degree 0 in a graded basis
        sub = Algebra(
            field=self.field,
            mult=mult,
            unit=np.array(self.unit[idx]),
            labels=tuple(self.labels[i] for i in idx),
            vertex_basis=tuple(idx.index(i) for i in self.vertex_basis) if self.vertex_basis is not None else None,
            corners=tuple(self.corners[i] for i in idx) if self.corners is not None else None,
            lengths=tuple(self.lengths[i] for i in idx) if self.lengths is not None else None,
            degrees=None,
            arrow_basis=tuple(idx.index(i) for i in self.arrow_basis if i in idx) if self.arrow_basis is not None else None,
            name=f"{self.name}_0",
            vertex_names=self.vertex_names,
        )
        inc = self.field.zeros((self.dim, len(idx)))
        for col, i in enumerate(idx):
            inc[i, col] = 1
        return sub, AlgebraMorphism(sub, self, inc)

    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, field={self.field})"


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: Algebra
    target: Algebra
    matrix: np.ndarray

    def __post_init__(self):
        m = self.target.field.array(self.matrix)
        if m.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"morphism matrix has shape {m.shape}, expected {(self.target.dim, self.source.dim)}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, a: Algebra) -> "AlgebraMorphism":
        return cls(a, a, a.field.eye(a.dim))

    @classmethod
    def from_images(cls, a: Algebra, images: dict, target: Optional[Algebra] = None) -> "AlgebraMorphism":
        """Extend generator images (arrow/vertex name -> element) multiplicatively.

        Vertices not mentioned map to themselves; arrows not mentioned are fixed.
        Only meaningful for quiver algebras; the result still has to pass
        :func:`check_morphism`.
        """
        target = target or a
        if a.lengths is None or a.arrow_names is None:
            raise ValueError("from_images needs a quiver algebra")
        img = {}
        for v, name in enumerate(a.vertex_names):
            val = images.get(name, images.get(f"e{name}"))
            img[("v", v)] = target.element(val) if isinstance(val, str) else (
                target.field.array(val) if val is not None else target.basis_vector(a.vertex_basis[v]))
        for k, name in enumerate(a.arrow_names):
            val = images.get(name)
            img[("a", k)] = target.element(val) if isinstance(val, str) else (
                target.field.array(val) if val is not None else target.basis_vector(a.arrow_basis[k]))
        m = target.field.zeros((target.dim, a.dim))
        for i, lab in enumerate(a.labels):
            if a.lengths[i] == 0:
                v = a.vertex_basis.index(i)
                m[:, i] = img[("v", v)]
            else:
                vec = target.unit.copy()
                for arrow in lab.split("*"):
                    vec = target.mul(vec, img[("a", a.arrow_names.index(arrow))])
                m[:, i] = vec
        return cls(a, target, m)

    def __call__(self, x) -> np.ndarray:
        return self.target.field.matmul(self.matrix, self.target.field.array(x))

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """self after other."""
        return AlgebraMorphism(other.source, self.target, self.target.field.matmul(self.matrix, other.matrix))

    def inverse(self) -> "AlgebraMorphism":
        inv = self.source.field.inverse(self.matrix)
        if inv is None:
            raise ValueError("morphism is not invertible")
        return AlgebraMorphism(self.target, self.source, inv)

    def power(self, n: int) -> "AlgebraMorphism":
        if self.source is not self.target:
            raise ValueError("power needs an endomorphism")
        base = self if n >= 0 else self.inverse()
        out = AlgebraMorphism.identity(self.source)
        for _ in range(abs(n)):
            out = base.compose(out)
        return out

    def is_identity(self) -> bool:
        return self.source is self.target and self.source.field.equal(self.matrix, self.source.field.eye(self.source.dim))

    def vertex_permutation(self) -> Optional[tuple]:
        """Permutation of vertices when every vertex idempotent maps to a vertex idempotent."""
        a = self.source
        if not (a.has_quiver and self.target is a):
            return None
        perm = []
        for v in range(a.n_vertices):
            img = self.matrix[:, a.vertex_basis[v]]
            nz = np.flatnonzero(img)
            if len(nz) != 1 or img[nz[0]] != 1 or nz[0] not in a.vertex_basis:
                return None
            perm.append(a.vertex_basis.index(int(nz[0])))
        return tuple(perm)

    def describe(self) -> dict:
        a = self.source
        names = a.arrow_names if a.arrow_names is not None else ()
        if a.arrow_basis is not None:
            return {n: self.target.format_element(self.matrix[:, i]) for n, i in zip(names, a.arrow_basis)}
        return {a.labels[i]: self.target.format_element(self.matrix[:, i]) for i in range(a.dim)}


# ---------------------------------------------------------------------------
# construction from a quiver presentation


def _enumerate_paths(n_arrows, src, tgt, max_len):
    """All paths up to max_len as tuples of arrow indices in composition order."""
    by_len = [[()]]
    for L in range(1, max_len + 1):
        nxt = []
        for p in by_len[-1]:
            if L == 1:
                nxt = [(a,) for a in range(n_arrows)]
                break
            first = p[-1]  # arrow applied first
            for a in range(n_arrows):
                if tgt[a] == src[first]:
                    nxt.append(p + (a,))
        by_len.append(sorted(nxt))
    return by_len


def _path_label(p, arrows):
    return "*".join(arrows[a].name for a in p)


def build_algebra(pres: QuiverPresentation) -> Algebra:
    """Reduce paths of length <= bound modulo the relation ideal.

    The ideal is formed inside KQ / (paths of length >= bound + 2): all
    u * r * v with u, v paths.  Every path of length bound + 1 must be in it,
    otherwise the bound does not make the algebra finite and we refuse.
    """
    F = pres.field
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    if len(vidx) != len(pres.vertices):
        raise PresentationError("duplicate vertex labels")
    arrows = pres.arrows
    anames = [a.name for a in arrows]
    if len(set(anames)) != len(anames):
        raise PresentationError("duplicate arrow names")
    clash = set(anames) & set(pres.vertices)
    if clash:
        raise PresentationError(f"names used for both vertices and arrows: {sorted(clash)}")
    for a in arrows:
        if a.source not in vidx or a.target not in vidx:
            raise PresentationError(f"arrow {a.name} has an unknown endpoint")
    src = [vidx[a.source] for a in arrows]
    tgt = [vidx[a.target] for a in arrows]
    N = int(pres.bound)
    if N < 0:
        raise PresentationError("bound must be non-negative")
    if arrows and N < 1:
        raise PresentationError("bound must be at least 1 when there are arrows")

    def p_src(p):
        return src[p[-1]]

    def p_tgt(p):
        return tgt[p[0]]

    # relations as dicts path -> coefficient
    rels = []
    for r in pres.relations:
        terms = parse_linear_combination(r) if isinstance(r, str) else r
        rel = {}
        for coeff, names in terms:
            try:
                p = tuple(anames.index(n) for n in names)
            except ValueError:
                raise PresentationError(f"relation {r!r} uses an unknown arrow") from None
            if len(p) < 2:
                raise PresentationError(f"relation {r!r} has a term of length < 2 (not admissible)")
            for x, y in zip(p, p[1:]):
                if src[x] != tgt[y]:
                    raise PresentationError(f"relation {r!r} contains a non-composable path")
            if len(p) > N + 1:
                raise PresentationError(f"relation {r!r} is longer than bound + 1")
            rel[p] = rel.get(p, 0) + F.scalar(coeff)
        rel = {p: c for p, c in rel.items() if F.scalar(c) != 0}
        if not rel:
            continue
        ends = {(p_src(p), p_tgt(p)) for p in rel}
        if len(ends) != 1:
            raise PresentationError(f"relation {r!r} mixes paths with different endpoints")
        if pres.graded:
            degs = {sum(arrows[a].degree for a in p) for p in rel}
            if len(degs) != 1:
                raise PresentationError(f"relation {r!r} is not homogeneous for the arrow degrees")
        rels.append(rel)

    by_len = _enumerate_paths(len(arrows), src, tgt, N + 1)
    # columns: longest first, then lexicographic; pivots land on long paths
    columns = [p for L in range(N + 1, 0, -1) for p in by_len[L]]
    col_of = {p: i for i, p in enumerate(columns)}

    rows = []
    if rels:
        # u * r * v with u ending where r starts... in composition order:
        # u*r*v is defined when src(u) == tgt(r) and src(r) == tgt(v)
        paths_upto = [()] + [p for L in range(1, N + 1) for p in by_len[L]]
        for rel in rels:
            rs, rt = p_src(next(iter(rel))), p_tgt(next(iter(rel)))
            minlen = min(len(p) for p in rel)
            for u in paths_upto:
                if u and p_src(u) != rt:
                    continue
                for v in paths_upto:
                    if len(u) + len(v) + minlen > N + 1:
                        continue
                    if v and p_tgt(v) != rs:
                        continue
                    row = {}
                    for p, c in rel.items():
                        q = u + p + v
                        if len(q) <= N + 1:
                            row[col_of[q]] = c
                    if row:
                        rows.append(row)
    if rows:
        mat = F.zeros((len(rows), len(columns)))
        for i, row in enumerate(rows):
            for j, c in row.items():
                mat[i, j] = c
        red, pivots = F.rref(mat)
    else:
        red, pivots = F.zeros((0, len(columns))), []
    pivot_row = {c: i for i, c in enumerate(pivots)}
    survivors = [p for p in by_len[N + 1] if col_of[p] not in pivot_row] if N + 1 < len(by_len) else []
    if survivors:
        raise PresentationError(
            "presentation is not nilpotent at the given bound: path(s) "
            + ", ".join(_path_label(p, arrows) for p in survivors[:5])
            + f" of length {N + 1} survive; increase the bound or add relations"
        )
    # vertex paths first (length 0), then surviving paths by (length, lex)
    basis = [("v", v) for v in range(len(pres.vertices))]
    for L in range(1, N + 1):
        for p in by_len[L]:
            if col_of[p] not in pivot_row:
                basis.append(("p", p))
    d = len(basis)
    bidx = {b: i for i, b in enumerate(basis)}

    def normal_form(p) -> np.ndarray:
        v = F.zeros(d)
        if len(p) > N + 1:
            return v
        c = col_of[p]
        if c not in pivot_row:
            v[bidx[("p", p)]] = 1
            return v
        row = red[pivot_row[c]]
        for j in np.flatnonzero(row):
            if j == c:
                continue
            q = columns[j]
            # non-pivot columns of length <= N are basis elements
            v[bidx[("p", q)]] = F.normalize(v[bidx[("p", q)]] - row[j])
        return v

    def b_src(b):
        return b[1] if b[0] == "v" else p_src(b[1])

    def b_tgt(b):
        return b[1] if b[0] == "v" else p_tgt(b[1])

    mult = F.zeros((d, d, d))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if b_src(bi) != b_tgt(bj):
                continue
            if bi[0] == "v":
                mult[i, j, j] = 1
            elif bj[0] == "v":
                mult[i, j, i] = 1
            else:
                mult[i, j] = normal_form(bi[1] + bj[1])
    unit = F.zeros(d)
    for v in range(len(pres.vertices)):
        unit[v] = 1
    labels = tuple(f"e{pres.vertices[b[1]]}" if b[0] == "v" else _path_label(b[1], arrows) for b in basis)
    lengths = tuple(0 if b[0] == "v" else len(b[1]) for b in basis)
    degrees = None
    if pres.graded:
        degrees = tuple(0 if b[0] == "v" else sum(arrows[a].degree for a in b[1]) for b in basis)
    corners = tuple((b_tgt(b), b_src(b)) for b in basis)
    arrow_basis = tuple(bidx[("p", (k,))] for k in range(len(arrows)))
    rad_rows = F.zeros((d - len(pres.vertices), d))
    for r, i in enumerate(range(len(pres.vertices), d)):
        rad_rows[r, i] = 1
    return Algebra(
        field=F,
        mult=mult,
        unit=unit,
        labels=labels,
        vertex_basis=tuple(range(len(pres.vertices))),
        corners=corners,
        lengths=lengths,
        degrees=degrees,
        radical=Subspace.from_rows(F, d, rad_rows),
        arrow_basis=arrow_basis,
        name=pres.name,
        vertex_names=tuple(pres.vertices),
        arrow_names=tuple(anames),
    )


def algebra_from_structure_constants(field, mult, unit, labels=None, name="algebra") -> Algebra:
    """Wrap raw structure constants (no quiver, no declared radical)."""
    F = field_from_tag(field)
    mult = F.array(mult)
    d = mult.shape[0]
    if mult.shape != (d, d, d):
        raise ValueError("structure constants must have shape (d, d, d)")
    a = Algebra(
        field=F,
        mult=mult,
        unit=F.array(unit),
        labels=tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(d)),
        name=name,
    )
    if not a.check_unit():
        raise ValueError("unit vector is not a two-sided unit")
    return a


def enveloping_algebra(a: Algebra, max_dim: int = 1600) -> Algebra:
    """Lambda (x) Lambda^op with (a(x)b)(a'(x)b') = aa' (x) b'b; basis pair (i, j) -> i*d + j."""
    d = a.dim
    if d * d > max_dim:
        raise ValueError(f"enveloping algebra of dimension {d * d} exceeds max_dim={max_dim}")
    F = a.field
    c = a.mult
    # ce[i, j, k, l, m, n] = c[i, k, m] * c[l, j, n]
    ce = np.multiply.outer(c, c)  # (i,k,m,l,j,n)
    ce = F.normalize(ce.transpose(0, 4, 1, 3, 2, 5).reshape(d * d, d * d, d * d))
    unit = F.normalize(np.kron(a.unit, a.unit))
    labels = tuple(f"{x}|{y}" for x in a.labels for y in a.labels)
    vertex_basis = corners = lengths = arrow_basis = None
    radical = None
    if a.has_quiver and a.lengths is not None:
        nv = a.n_vertices
        vertex_basis = tuple(a.vertex_basis[i] * d + a.vertex_basis[j] for i in range(nv) for j in range(nv))
        lengths = tuple(a.lengths[i] + a.lengths[j] for i in range(d) for j in range(d))
        arrow_basis = tuple(
            [a.arrow_basis[k] * d + a.vertex_basis[v] for k in range(len(a.arrow_basis)) for v in range(nv)]
            + [a.vertex_basis[v] * d + a.arrow_basis[k] for v in range(nv) for k in range(len(a.arrow_basis))]
        )
        rows = [i for i, l in enumerate(lengths) if l >= 1]
        rr = F.zeros((len(rows), d * d))
        for r, i in enumerate(rows):
            rr[r, i] = 1
        radical = Subspace.from_rows(F, d * d, rr)
        # corners of x|y: (x (x) y) lives in e_t(x) e_s(y)-ish; record pair of pairs
        corners = tuple((a.corners[i], a.corners[j]) for i in range(d) for j in range(d))
    return Algebra(
        field=F,
        mult=ce,
        unit=unit,
        labels=labels,
        vertex_basis=vertex_basis,
        corners=corners,
        lengths=lengths,
        radical=radical,
        arrow_basis=arrow_basis,
        name=f"{a.name}^e",
    )


def radical_basis(a: Algebra) -> Subspace:
    if a.radical is None:
        raise NotImplementedError("radical is only available for quiver-presented algebras")
    return a.radical


def center_basis(a: Algebra) -> Subspace:
    """All z with z*b == b*z for every basis element b."""
    F = a.field
    d = a.dim
    blocks = [F.normalize(a.right_matrices[b] - a.left_matrices[b]) for b in range(d)]
    stacked = np.concatenate(blocks, axis=0) if blocks else F.zeros((0, d))
    return Subspace.from_rows(F, d, F.kernel(stacked))


def is_selfinjective(a: Algebra) -> bool:
    """The dual of the regular right module is projective."""
    from .modules import dual_module, is_projective, regular_right_module

    return is_projective(dual_module(regular_right_module(a)))


def check_morphism(f: AlgebraMorphism) -> bool:
    """Unit, multiplication and (if both sides are graded) degrees are preserved."""
    s, t = f.source, f.target
    F = t.field
    if f.matrix.shape != (t.dim, s.dim):
        raise ValueError("shape mismatch")
    M = f.matrix
    if not F.equal(F.matmul(M, s.unit), t.unit):
        return False
    # F(b_i b_j) vs F(b_i) F(b_j) for all pairs at once
    lhs = F.normalize(np.tensordot(s.mult, M, axes=(2, 1)))  # (i, j, target)
    img = M.T  # rows are images of basis elements
    rhs = F.normalize(np.tensordot(np.tensordot(img, t.mult, axes=(1, 0)), img, axes=(1, 1)))  # (i, k, j)
    rhs = rhs.transpose(0, 2, 1)
    if not F.equal(lhs, rhs):
        return False
    if s.degrees is not None and t.degrees is not None:
        sd, td = s.degree_array(), t.degree_array()
        for i in range(s.dim):
            nz = np.flatnonzero(M[:, i])
            if np.any(td[nz] != sd[i]):
                return False
    return True
