"""Exact fields, matrices and finite-dimensional algebras.

Three fields are available: the rationals, prime fields and finite
extensions of prime fields.  Nothing here ever touches a float.  The
algebra routines (radical, locality, idempotent splitting) assume the
characteristic is zero or larger than the dimension they act on.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import polynomial as poly
from .errors import ExtendField, FieldMismatch, SmallCharacteristic

DEFAULT_PRIME = 32003


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class RationalField:
    characteristic = 0
    order = None
    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def random_element(self, rng, bound=9):
        return Fraction(rng.randint(-bound, bound))

    def sort_key(self, a):
        return (a,)

    def to_str(self, a):
        return str(a)

    def axpy(self, target, c, source):
        return [x - c * y for x, y in zip(target, source)]


class PrimeField:
    degree = 1

    def __init__(self, p=DEFAULT_PRIME):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise SmallCharacteristic(f"denominator of {q} vanishes mod {self.p}")
        return (q.numerator * pow(q.denominator, self.p - 2, self.p)) % self.p

    def random_element(self, rng, bound=None):
        return rng.randrange(self.p)

    def sort_key(self, a):
        return (a,)

    def to_str(self, a):
        return str(a)

    def axpy(self, target, c, source):
        p = self.p
        return [(x - c * y) % p for x, y in zip(target, source)]


class ExtensionField:
    """GF(p^d) as F_p[t] modulo a monic irreducible polynomial of degree d."""

    def __init__(self, p, modulus):
        self.base = PrimeField(p)
        modulus = tuple(int(c) % p for c in modulus)
        if modulus[-1] != 1:
            modulus = poly.monic(self.base, modulus)
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.p = p
        self.characteristic = p
        self.order = p ** self.degree
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.modulus) == (self.p, self.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def _pad(self, f):
        f = tuple(f)
        return f + (0,) * (self.degree - len(f))

    def embed(self, a):
        return self._pad((a % self.p,))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        prod = poly.mul(self.base, poly.trim(self.base, a), poly.trim(self.base, b))
        return self._pad(poly.divmod_(self.base, prod, self.modulus)[1])

    def inv(self, a):
        f = poly.trim(self.base, a)
        if not f:
            raise ZeroDivisionError("inverse of zero")
        _, s, _ = poly.xgcd(self.base, f, self.modulus)
        return self._pad(poly.divmod_(self.base, s, self.modulus)[1])

    def power(self, a, e):
        result = self.one
        while e > 0:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius_inverse(self, a):
        return self.power(a, self.p ** (self.degree - 1))

    def is_zero(self, a):
        return not any(a)

    def from_int(self, n):
        return self.embed(n)

    def from_fraction(self, q):
        return self.embed(self.base.from_fraction(q))

    def generator(self):
        return self._pad((0, 1)) if self.degree > 1 else self.one

    def random_element(self, rng, bound=None):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def sort_key(self, a):
        return tuple(a)

    def to_str(self, a):
        terms = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}t" if c != 1 else "t")
            else:
                terms.append(f"{c}t^{i}" if c != 1 else f"t^{i}")
        return "+".join(terms) if terms else "0"

    def axpy(self, target, c, source):
        return [self.sub(x, self.mul(c, y)) for x, y in zip(target, source)]


def field_from_spec(spec=None):
    """Build a field from ``None`` (default prime), ``"Q"`` or a prime."""
    if spec is None or spec == "":
        return PrimeField(DEFAULT_PRIME)
    if isinstance(spec, str):
        if spec.strip().upper() in ("Q", "QQ"):
            return RationalField()
        spec = int(spec)
    return PrimeField(int(spec))


@dataclass(frozen=True)
class Scalar:
    field: object
    value: object

    def _check(self, other):
        if not isinstance(other, Scalar) or other.field != self.field:
            raise FieldMismatch("scalars from different fields")

    def __add__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __str__(self):
        return self.field.to_str(self.value)


class Matrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        self.field = field
        self.nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self._hash = None

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, [[field.zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_scalars(cls, grid):
        fields = {s.field for row in grid for s in row}
        if len(fields) > 1:
            raise FieldMismatch("matrix entries from different fields")
        if not fields:
            raise ValueError("cannot infer the field of an empty grid")
        field = fields.pop()
        return cls(field, [[s.value for s in row] for row in grid])

    @classmethod
    def from_ints(cls, field, rows, ncols=None):
        return cls(field, [[field.from_fraction(x) for x in r] for r in rows], ncols)

    @classmethod
    def from_columns(cls, field, columns, nrows):
        if not columns:
            return cls.zero(field, nrows, 0)
        return cls(field, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    def _same(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {[list(map(self.field.to_str, r)) for r in self.rows]})"

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __matmul__(self, other):
        self._same(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        cols = list(zip(*other.rows)) if other.rows else [() for _ in range(other.ncols)]
        if isinstance(f, (PrimeField, RationalField)):
            if isinstance(f, PrimeField):
                p = f.p
                out = [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.rows]
            else:
                out = [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows]
        else:
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = f.zero
                    for a, b in zip(r, c):
                        acc = f.add(acc, f.mul(a, b))
                    row.append(acc)
                out.append(row)
        if self.nrows and not other.ncols:
            return Matrix(f, [[] for _ in range(self.nrows)], 0)
        return Matrix(f, out, other.ncols)

    def __add__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._same(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c):
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in r] for r in self.rows], self.ncols)

    def transpose(self):
        if not self.ncols:
            return Matrix(self.field, [], self.nrows)
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [[] for _ in range(self.ncols)], self.nrows)

    def is_zero(self):
        f = self.field
        return all(f.is_zero(a) for r in self.rows for a in r)

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def entry(self, i, j):
        return Scalar(self.field, self.rows[i][j])

    def select_columns(self, idx):
        return Matrix(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx):
        return Matrix(self.field, [self.rows[i] for i in idx], self.ncols)

    def hstack(self, other):
        self._same(other)
        return Matrix(self.field, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other):
        self._same(other)
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    def flat(self):
        return tuple(a for r in self.rows for a in r)

    def rank(self):
        return rref(self).rank

    def kernel(self):
        return rref(self).kernel

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("not square")
        n = self.nrows
        aug = self.hstack(Matrix.identity(self.field, n))
        red = rref(aug)
        if red.pivots[:n] != tuple(range(n)) or red.rank < n:
            raise ZeroDivisionError("singular matrix")
        return Matrix(self.field, [r[n:] for r in red.reduced.rows[:n]], n)

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def map_field(self, target, convert):
        return Matrix(target, [[convert(a) for a in r] for r in self.rows], self.ncols)

    def to_strings(self):
        return [[self.field.to_str(a) for a in r] for r in self.rows]


def block_diagonal(field, blocks):
    rows = sum(b.nrows for b in blocks)
    cols = sum(b.ncols for b in blocks)
    out = [[field.zero] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, r in enumerate(b.rows):
            out[r0 + i][c0:c0 + b.ncols] = list(r)
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(field, out, cols)


@dataclass(frozen=True)
class RrefResult:
    rank: int
    pivots: tuple
    reduced: Matrix
    kernel: Matrix


def rref(m):
    """Reduced row echelon form, rank, pivot columns and a kernel basis.

    The kernel basis is returned as the columns of a ``ncols x k`` matrix.
    """
    f = m.field
    if isinstance(f, PrimeField) and m.nrows and m.ncols:
        return _rref_prime(m)
    rows = [list(r) for r in m.rows]
    ncols = m.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not f.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, a) for a in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and not f.is_zero(rows[i][c]):
                rows[i] = f.axpy(rows[i], rows[i][c], pr)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rank = len(pivots)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel_cols = []
    for fc in free:
        v = [f.zero] * ncols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(rows[i][fc])
        kernel_cols.append(v)
    reduced = Matrix(f, rows, ncols)
    kernel = Matrix.from_columns(f, kernel_cols, ncols)
    return RrefResult(rank, tuple(pivots), reduced, kernel)


def _rref_prime(m):
    # vectorized elimination; entries stay below p^2 < 2^63
    f = m.field
    p = f.p
    a = np.array(m.rows, dtype=np.int64).reshape(m.nrows, m.ncols) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not len(nz):
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % p) % p
        pivots.append(c)
        r += 1
    rows = [[int(x) for x in row] for row in a.tolist()]
    pset = set(pivots)
    kernel_cols = []
    for fc in range(ncols):
        if fc in pset:
            continue
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][fc]) % p
        kernel_cols.append(v)
    return RrefResult(len(pivots), tuple(pivots), Matrix(f, rows, ncols),
                      Matrix.from_columns(f, kernel_cols, ncols))


def row_space_basis(field, vectors, ncols):
    """Reduced basis (as row tuples) of the span of ``vectors`` plus pivots."""
    if not vectors:
        return [], ()
    red = rref(Matrix(field, vectors, ncols))
    return [red.reduced.rows[i] for i in range(red.rank)], red.pivots


def solve(a, b):
    """One solution x of a x = b for a column vector b (tuple), or None."""
    f = a.field
    aug = Matrix(f, [r + (bi,) for r, bi in zip(a.rows, b)], a.ncols + 1)
    red = rref(aug)
    if a.ncols in red.pivots:
        return None
    x = [f.zero] * a.ncols
    for i, pc in enumerate(red.pivots):
        x[pc] = red.reduced.rows[i][a.ncols]
    return tuple(x)


class Reducer:
    """Coordinates with respect to a fixed list of independent vectors."""

    def __init__(self, field, basis, length):
        self.field = field
        self.length = length
        self.size = len(basis)
        if not basis:
            self.rows, self.pivots, self.transform = [], (), []
            return
        # rows = T * basis in reduced form; coordinates of v are read at pivots
        aug = [tuple(v) + tuple(field.one if i == j else field.zero for j in range(len(basis))) for i, v in enumerate(basis)]
        red = rref(Matrix(field, aug, length + len(basis)))
        if any(p >= length for p in red.pivots[: len(basis)]) or red.rank < len(basis):
            raise ValueError("basis vectors are dependent")
        self.rows = [red.reduced.rows[i][:length] for i in range(len(basis))]
        self.transform = [red.reduced.rows[i][length:] for i in range(len(basis))]
        self.pivots = red.pivots[: len(basis)]

    def coordinates(self, v, strict=True):
        f = self.field
        coeffs = [f.zero] * self.size
        residual = list(v)
        for i, pc in enumerate(self.pivots):
            c = residual[pc]
            if f.is_zero(c):
                continue
            residual = f.axpy(residual, c, self.rows[i])
            t = self.transform[i]
            for j in range(self.size):
                if not f.is_zero(t[j]):
                    coeffs[j] = f.add(coeffs[j], f.mul(c, t[j]))
        if strict and any(not f.is_zero(a) for a in residual):
            raise ValueError("vector not in span")
        return tuple(coeffs)

    def contains(self, v):
        f = self.field
        residual = list(v)
        for i, pc in enumerate(self.pivots):
            c = residual[pc]
            if not f.is_zero(c):
                residual = f.axpy(residual, c, self.rows[i])
        return all(f.is_zero(a) for a in residual)


class FiniteAlgebra:
    """Associative unital algebra given by structure constants.

    ``table[i][j]`` holds the coordinates of ``b_i * b_j``.  An optional
    faithful matrix representation speeds up the trace form.
    """

    def __init__(self, field, table, unit, matrices=None, blocks=None):
        self.field = field
        self.table = tuple(tuple(tuple(c) for c in row) for row in table)
        self.dim = len(self.table)
        self.unit = tuple(unit)
        self.matrices = matrices
        # blocks[i] lists square matrices whose block sum represents b_i faithfully
        self.blocks = blocks

    @classmethod
    def from_matrices(cls, field, mats):
        """Algebra spanned by linearly independent square matrices closed under product."""
        n = len(mats)
        if n == 0:
            return cls(field, [], [], [])
        size = mats[0].nrows
        red = Reducer(field, [m.flat() for m in mats], size * size)
        table = [[red.coordinates((a @ b).flat()) for b in mats] for a in mats]
        unit = red.coordinates(Matrix.identity(field, size).flat())
        return cls(field, table, unit, list(mats))

    def basis_vector(self, i):
        f = self.field
        return tuple(f.one if j == i else f.zero for j in range(self.dim))

    def zero_vector(self):
        return (self.field.zero,) * self.dim

    def add(self, u, v):
        f = self.field
        return tuple(f.add(a, b) for a, b in zip(u, v))

    def sub(self, u, v):
        f = self.field
        return tuple(f.sub(a, b) for a, b in zip(u, v))

    def scale(self, c, u):
        f = self.field
        return tuple(f.mul(c, a) for a in u)

    def mul(self, u, v):
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in enumerate(row[j]):
                    if not f.is_zero(c):
                        out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def power(self, u, k):
        out = self.unit
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def is_zero(self, u):
        return all(self.field.is_zero(a) for a in u)

    def is_nilpotent(self, u):
        return self.is_zero(self.power(u, max(self.dim, 1)))

    def is_idempotent(self, u):
        return self.mul(u, u) == tuple(u)

    def left_matrix(self, u):
        cols = [self.mul(u, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def as_matrix(self, u):
        """Image of u in the faithful representation, if one is attached."""
        f = self.field
        out = None
        for a, m in zip(u, self.matrices):
            if f.is_zero(a):
                continue
            term = m.scale(a)
            out = term if out is None else out + term
        if out is None:
            size = self.matrices[0].nrows
            out = Matrix.zero(f, size, size)
        return out

    def check_associative(self):
        basis = [self.basis_vector(i) for i in range(self.dim)]
        for a in basis:
            for b in basis:
                ab = self.mul(a, b)
                for c in basis:
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        return False
        return True

    def check_unit(self):
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                return False
        return True


def _trace(m):
    f = m.field
    acc = f.zero
    for i in range(m.nrows):
        acc = f.add(acc, m.rows[i][i])
    return acc


def _block_trace(xs, ys):
    f = xs[0].field
    acc = f.zero
    for x, y in zip(xs, ys):
        for i in range(x.nrows):
            for k in range(x.ncols):
                if not f.is_zero(x.rows[i][k]):
                    acc = f.add(acc, f.mul(x.rows[i][k], y.rows[k][i]))
    return acc


def radical(a):
    """Basis (coordinate tuples) of the Jacobson radical via the trace form."""
    f = a.field
    if a.dim == 0:
        return []
    if a.blocks is not None:
        size = sum(b.nrows for b in a.blocks[0])
        if f.characteristic and f.characteristic <= size:
            raise SmallCharacteristic(f"characteristic {f.characteristic} too small for dimension {size}")
        gram = [[_block_trace(a.blocks[i], a.blocks[j]) for j in range(a.dim)] for i in range(a.dim)]
        ker = rref(Matrix(f, gram, a.dim)).kernel
        return [tuple(c) for c in ker.columns()]
    if a.matrices is not None:
        mats = a.matrices
        size = mats[0].nrows
    else:
        mats = [a.left_matrix(a.basis_vector(i)) for i in range(a.dim)]
        size = a.dim
    if f.characteristic and f.characteristic <= size:
        raise SmallCharacteristic(f"characteristic {f.characteristic} too small for dimension {size}")
    gram = [[_trace(mats[i] @ mats[j]) for j in range(a.dim)] for i in range(a.dim)]
    ker = rref(Matrix(f, gram, a.dim)).kernel
    return [tuple(c) for c in ker.columns()]


def _minimal_polynomial(alg, u):
    f = alg.field
    powers = [alg.unit]
    while True:
        nxt = alg.mul(powers[-1], u)
        red = Reducer(f, powers, alg.dim) if powers else None
        if red.contains(nxt):
            coeffs = red.coordinates(nxt)
            return tuple(f.neg(c) for c in coeffs) + (f.one,)
        powers.append(nxt)


def _eval_poly(alg, g, u):
    out = alg.zero_vector()
    for c in reversed(g):
        out = alg.add(alg.mul(out, u), alg.scale(c, alg.unit))
    return out


@dataclass(frozen=True)
class Locality:
    local: bool
    degree: int = 1

    def __bool__(self):
        return self.local


class _Quotient:
    """The semisimple quotient a/rad(a) with a section back into a."""

    def __init__(self, a):
        self.a = a
        f = a.field
        rad = radical(a)
        self.rad = rad
        rows, pivots = row_space_basis(f, rad, a.dim)
        self.rad_rows, self.rad_pivots = rows, pivots
        self.free = [j for j in range(a.dim) if j not in set(pivots)]
        lifts = [a.basis_vector(j) for j in self.free]
        table = [[self.project(a.mul(x, y)) for y in lifts] for x in lifts]
        self.alg = FiniteAlgebra(f, table, self.project(a.unit))

    def reduce(self, u):
        f = self.a.field
        u = list(u)
        for row, pc in zip(self.rad_rows, self.rad_pivots):
            c = u[pc]
            if not f.is_zero(c):
                u = f.axpy(u, c, row)
        return u

    def project(self, u):
        r = self.reduce(u)
        return tuple(r[j] for j in self.free)

    def lift(self, v):
        f = self.a.field
        out = [f.zero] * self.a.dim
        for j, c in zip(self.free, v):
            out[j] = c
        return tuple(out)


def _candidates(alg, rng, tries):
    f = alg.field
    for i in range(alg.dim):
        yield alg.basis_vector(i)
    for _ in range(tries):
        yield tuple(f.random_element(rng) for _ in range(alg.dim))


def _is_commutative(alg):
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            if alg.table[i][j] != alg.table[j][i]:
                return False
    return True


def _split_semisimple(b, seed, tries=40):
    """Nontrivial idempotent of a semisimple algebra b, or the field degree if b is a field."""
    f = b.field
    rng = random.Random(seed)
    best = None
    for u in _candidates(b, rng, tries):
        m = _minimal_polynomial(b, u)
        facs = poly.factor(f, m, seed)
        if len(facs) >= 2:
            g0, e0 = facs[0]
            g = (f.one,)
            for _ in range(e0):
                g = poly.mul(f, g, g0)
            h = poly.divmod_(f, m, g)[0]
            _, s, t = poly.xgcd(f, g, h)
            e = _eval_poly(b, poly.mul(f, t, h), u)
            return e, None
        irr, mult = facs[0]
        if mult == 1 and poly.degree(irr) == b.dim:
            best = irr
            if _is_commutative(b):
                break
    if best is not None and _is_commutative(b):
        return None, best
    raise RuntimeError("no splitting element found")


def split_idempotent(a, seed=0):
    """A nontrivial idempotent of a, or None when a is local.

    Raises ExtendField(d) when a/rad(a) is a field of degree d > 1 over the
    base field; over the rationals this is reported rather than raised
    through :func:`is_local`.
    """
    if a.dim == 0:
        return None
    q = _Quotient(a)
    b = q.alg
    if b.dim <= 1:
        return None
    e_bar, field_poly = _split_semisimple(b, seed)
    if e_bar is None:
        raise ExtendField(b.dim, modulus=field_poly)
    e = q.lift(e_bar)
    for _ in range(2 * a.dim + 4):
        e2 = a.mul(e, e)
        if e2 == e:
            break
        e3 = a.mul(e2, e)
        f = a.field
        e = a.sub(a.scale(f.from_int(3), e2), a.scale(f.from_int(2), e3))
    if a.mul(e, e) != e:
        raise RuntimeError("idempotent lifting did not stabilize")
    return e


def is_local(a, seed=0):
    if a.dim == 0:
        return Locality(False, 1)
    try:
        e = split_idempotent(a, seed)
    except ExtendField as exc:
        return Locality(True, exc.degree)
    return Locality(e is None, 1)
