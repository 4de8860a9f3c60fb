"""Exact dense linear algebra over prime fields and the rationals.

Everything downstream works on plain numpy arrays together with a field
object that knows how to normalise entries.  Over F_p the arrays are
``int64`` (``object`` for large p, where products would overflow); over Q
they are ``object`` arrays of :class:`fractions.Fraction`.

Elimination always takes the first nonzero entry of a column as pivot so
echelon bases are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "FieldMismatchError",
    "Field",
    "PrimeField",
    "RationalField",
    "QQ",
    "GF",
    "Scalar",
    "Matrix",
    "Subspace",
    "rank",
    "kernel_basis",
    "solve",
    "kronecker",
]


class FieldMismatchError(ValueError):
    """Raised when values over different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common elimination routines; subclasses fix the scalar arithmetic."""

    characteristic: int
    dtype: object

    # -- construction -------------------------------------------------
    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        return self.array(np.zeros(shape, dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return self.array(np.eye(n, dtype=np.int64))

    def scalar(self, x):
        raise NotImplementedError

    def normalize(self, a: np.ndarray) -> np.ndarray:
        """Reduce an array produced by ring operations back into the field."""
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    # -- arithmetic helpers --------------------------------------------
    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.normalize(np.dot(a, b))

    def tensordot(self, a, b, axes) -> np.ndarray:
        return self.normalize(np.tensordot(a, b, axes=axes))

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and not np.any(self.normalize(a - b))

    # -- elimination ----------------------------------------------------
    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form; returns the nonzero rows and pivot columns."""
        a = self.normalize(np.array(a, dtype=self.dtype, copy=True))
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d array")
        m, n = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            piv = a[r, c]
            if piv != 1:
                a[r, c:] = self.normalize(a[r, c:] * self.inv(piv))
            col = a[:, c].copy()
            col[r] = 0
            rows = np.flatnonzero(col)
            if rows.size:
                a[rows, c:] = self.normalize(a[rows, c:] - np.outer(col[rows], a[r, c:]))
            pivots.append(c)
            r += 1
        return a[:r], pivots

    def rank(self, a: np.ndarray) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        # eliminate along the shorter side
        if a.shape[0] > a.shape[1]:
            a = a.T
        return len(self.rref(a)[1])

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows form a basis of the right null space, in reduced echelon form."""
        a = np.asarray(a)
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.eye(n)
        r, pivots = self.rref(a)
        free = [c for c in range(n) if c not in set(pivots)]
        k = self.zeros((len(free), n))
        for idx, f in enumerate(free):
            k[idx, f] = 1
            for row, p in enumerate(pivots):
                k[idx, p] = -r[row, f]
        k = self.normalize(k)
        if len(free) == 0:
            return k
        return self.rref(k)[0]

    def row_space(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        if a.shape[0] == 0:
            return self.zeros((0, a.shape[1]))
        return self.rref(a)[0]

    def left_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows y with y @ a == 0."""
        return self.kernel(np.asarray(a).T)

    def solve(self, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """Some x with a @ x == b (free variables zero), or None."""
        a = np.asarray(a)
        b = np.asarray(b)
        vec = b.ndim == 1
        if vec:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
        n = a.shape[1]
        aug = np.concatenate([self.array(a), self.array(b)], axis=1)
        r, pivots = self.rref(aug)
        if any(p >= n for p in pivots):
            return None
        x = self.zeros((n, b.shape[1]))
        for row, p in enumerate(pivots):
            x[p] = r[row, n:]
        return x[:, 0] if vec else x

    def inverse(self, a: np.ndarray) -> Optional[np.ndarray]:
        a = np.asarray(a)
        if a.shape[0] != a.shape[1]:
            return None
        return self.solve(a, self.eye(a.shape[0])) if self.rank(a) == a.shape[0] else None

    def in_span(self, rows: np.ndarray, v: np.ndarray) -> bool:
        if rows.shape[0] == 0:
            return self.is_zero(v)
        return self.rank(np.vstack([rows, v])) == self.rank(rows)


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p) or p >= 2**31:
            raise ValueError(f"{p} is not a prime below 2**31")
        self.p = p
        self.characteristic = p
        # products of two residues stay far from int64 overflow below 2**20
        self.dtype = np.int64 if p < 2**20 else object

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object if self.dtype is object else None)
        if self.dtype is object:
            return np.vectorize(self.scalar, otypes=[object])(a) if a.size else a.astype(object)
        if a.dtype == object:
            a = np.vectorize(self.scalar, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
        return np.mod(a.astype(np.int64), self.p)

    def scalar(self, x) -> int:
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def normalize(self, a):
        a = np.asarray(a)
        if self.dtype is object:
            return np.mod(a.astype(object), self.p)
        return np.mod(a, self.p)

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng, shape):
        return self.array(rng.integers(0, self.p, size=shape))

    def _float_safe(self, a, b, k: int) -> bool:
        # exact in float64 while every partial sum stays below 2**52
        return (
            self.dtype is not object
            and a.dtype != object
            and b.dtype != object
            and k * (self.p - 1) ** 2 < 2**52
        )

    def matmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        k = a.shape[-1] if a.ndim else 1
        if a.size and b.size and self._float_safe(a, b, k):
            out = np.dot(a.astype(np.float64), b.astype(np.float64))
            return np.mod(out, self.p).astype(np.int64)
        return self.normalize(np.dot(a, b))

    def tensordot(self, a, b, axes):
        a = np.asarray(a)
        b = np.asarray(b)
        if isinstance(axes, int):
            k = int(np.prod(a.shape[a.ndim - axes:])) if axes else 1
        else:
            ax = axes[0] if isinstance(axes[0], (list, tuple)) else [axes[0]]
            k = int(np.prod([a.shape[i] for i in ax])) if ax else 1
        if a.size and b.size and self._float_safe(a, b, k):
            out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
            return np.mod(out, self.p).astype(np.int64)
        return self.normalize(np.tensordot(a, b, axes=axes))


class RationalField(Field):
    characteristic = 0
    dtype = object

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        if a.size == 0:
            return a
        return np.vectorize(self.scalar, otypes=[object])(a)

    def scalar(self, x) -> Fraction:
        return Fraction(x)

    def normalize(self, a):
        a = np.asarray(a)
        if a.dtype != object:
            return self.array(a)
        return a

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def random(self, rng, shape):
        return self.array(rng.integers(-5, 6, size=shape))


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_tag(tag) -> Field:
    """``"Q"``/``"QQ"``/``0`` give the rationals, a prime gives F_p."""
    if isinstance(tag, Field):
        return tag
    if isinstance(tag, str) and tag.strip().upper() in ("Q", "QQ"):
        return QQ
    if tag == 0:
        return QQ
    return PrimeField(int(tag))


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.scalar(self.value))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            return Scalar(self.field, other)
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value + other.value)

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value - other.value)

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value * other.value)

    def __neg__(self):
        return Scalar(self.field, -self.value)

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value * self.field.inv(other.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        return self.value == self.field.scalar(other)

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.value}"


class Matrix:
    """Immutable dense matrix over a single exact field."""

    __slots__ = ("field", "_data")

    def __init__(self, field: Field, entries):
        if isinstance(entries, Matrix):
            if entries.field != field:
                raise FieldMismatchError(f"{entries.field} vs {field}")
            entries = entries._data
        rows = entries
        if not isinstance(rows, np.ndarray):
            rows = list(entries)
            flat = [x for row in rows for x in (row if isinstance(row, (list, tuple, np.ndarray)) else [row])]
            for x in flat:
                if isinstance(x, Scalar) and x.field != field:
                    raise FieldMismatchError(f"entry over {x.field} in matrix over {field}")
            rows = [[x.value if isinstance(x, Scalar) else x for x in row] for row in rows]
        data = field.array(rows)
        if data.ndim == 1:
            data = data.reshape(1, -1) if data.size else data.reshape(0, 0)
        data.setflags(write=False)
        self.field = field
        self._data = data

    @classmethod
    def from_array(cls, field: Field, data: np.ndarray) -> "Matrix":
        m = cls.__new__(cls)
        data = field.normalize(np.array(data, dtype=field.dtype, copy=True))
        data.setflags(write=False)
        m.field = field
        m._data = data
        return m

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls.from_array(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls.from_array(field, field.eye(n))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self):
        return self._data.shape

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self._data[i, j])

    def _same(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected Matrix")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix.from_array(self.field, self.field.matmul(self._data, other._data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix.from_array(self.field, self._data + other._data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix.from_array(self.field, self._data - other._data)

    def __neg__(self) -> "Matrix":
        return Matrix.from_array(self.field, -self._data)

    def scale(self, c) -> "Matrix":
        return Matrix.from_array(self.field, self._data * self.field.scalar(c))

    def transpose(self) -> "Matrix":
        return Matrix.from_array(self.field, self._data.T)

    T = property(transpose)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.field.equal(self._data, other._data)

    def __hash__(self):
        return hash((self.field, self._data.shape, tuple(map(int, self._data.ravel())) if self.field.dtype is not object else tuple(self._data.ravel())))

    def __repr__(self):
        return f"Matrix({self.field}, {self._data.tolist()})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of field^ambient; ``basis`` rows are in reduced echelon form."""

    field: Field
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def from_rows(cls, field: Field, ambient: int, rows) -> "Subspace":
        rows = field.array(rows).reshape(-1, ambient) if np.size(rows) else field.zeros((0, ambient))
        if rows.shape[0]:
            r, piv = field.rref(rows)
        else:
            r, piv = rows, []
        r = np.array(r)
        r.setflags(write=False)
        return cls(field, ambient, r, tuple(piv))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrix(self) -> Matrix:
        return Matrix.from_array(self.field, self.basis)

    def contains(self, v) -> bool:
        v = self.field.array(v).reshape(-1)
        return self.field.is_zero(self.reduce(v))

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Remainder of v after clearing the pivot coordinates."""
        v = self.field.array(v).reshape(-1)
        if not self.pivots:
            return v
        coeff = v[list(self.pivots)]
        return self.field.normalize(v - coeff @ self.basis)

    def coordinates(self, v: np.ndarray) -> Optional[np.ndarray]:
        v = self.field.array(v).reshape(-1)
        if not self.field.is_zero(self.reduce(v)):
            return None
        return v[list(self.pivots)]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and self.field.equal(self.basis, other.basis)
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


# ---------------------------------------------------------------------------
# operations on Matrix values


def _as_matrix(m) -> Matrix:
    if not isinstance(m, Matrix):
        raise TypeError("expected Matrix")
    return m


def rank(m: Matrix) -> int:
    m = _as_matrix(m)
    return m.field.rank(m.data)


def kernel_basis(m: Matrix) -> Subspace:
    m = _as_matrix(m)
    k = m.field.kernel(m.data)
    return Subspace(m.field, m.cols, _frozen(k), _pivots(m.field, k))


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


def _pivots(field: Field, rows: np.ndarray) -> tuple[int, ...]:
    out = []
    for row in rows:
        nz = np.flatnonzero(row)
        out.append(int(nz[0]))
    return tuple(out)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    x = a.field.solve(a.data, b.data)
    return None if x is None else Matrix.from_array(a.field, x)


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    return Matrix.from_array(a.field, np.kron(a.data, b.data))


def block_diag(field: Field, blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def column_basis(field: Field, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Basis of the column space as columns K with K[pivots] == identity."""
    a = np.asarray(a)
    if a.shape[1] == 0:
        return field.zeros((a.shape[0], 0)), ()
    r, piv = field.rref(a.T)
    return np.array(r.T), tuple(piv)


def iter_vectors(field: PrimeField, dim: int) -> Iterable[np.ndarray]:
    """All vectors of F_p^dim in lexicographic order (exhaustive searches)."""
    for idx in np.ndindex(*([field.p] * dim)):
        yield field.array(np.array(idx, dtype=np.int64))
