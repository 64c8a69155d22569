"""Exact matrices over the integers and the rationals.

Lattices are always the integer span of a matrix's *columns*.  All matrices
are immutable; every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Iterable, Sequence

from .errors import Degenerate, NotAlternating, RankDeficient, Singular


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class Matrix:
    """Immutable dense matrix; use :class:`IntMatrix` or :class:`RatMatrix`."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(self._coerce(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    @staticmethod
    def _coerce(x):
        raise NotImplementedError

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int):
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def zeros(cls, m: int, n: int | None = None):
        n = m if n is None else n
        return cls(((0,) * n for _ in range(m)), ncols=n)

    @classmethod
    def diag(cls, values: Sequence):
        n = len(values)
        return cls(((values[i] if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None):
        if not cols:
            return cls.zeros(nrows or 0, 0)
        return cls(zip(*cols))

    # -- basic protocol ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        name = type(self).__name__
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"{name}([{body}])"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [tuple(c) for c in zip(*self.rows)] if self.nrows else [()] * self.ncols

    @property
    def T(self):
        if not self.nrows:
            return type(self).zeros(self.ncols, 0)
        return type(self)(zip(*self.rows))

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(_is_int(x) for r in self.rows for x in r)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_alternating(self) -> bool:
        return self.is_square and self == -self.T

    # -- arithmetic -------------------------------------------------------
    def _result_type(self, other):
        if isinstance(self, IntMatrix) and isinstance(other, IntMatrix):
            return IntMatrix
        return RatMatrix

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        cls = self._result_type(other)
        return cls(map(lambda a, b: map(lambda x, y: x + y, a, b), self.rows, other.rows), self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        cls = self._result_type(other)
        return cls(map(lambda a, b: map(lambda x, y: x - y, a, b), self.rows, other.rows), self.ncols)

    def __neg__(self):
        return type(self)(((-x for x in r) for r in self.rows), self.ncols)

    def scale(self, c):
        cls = type(self) if _is_int(c) and not isinstance(c, Fraction) else RatMatrix
        return cls(((c * x for x in r) for r in self.rows), self.ncols)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if isinstance(self, IntMatrix) and isinstance(other, IntMatrix):
            return IntMatrix(_int_matmul(self.rows, other.rows, other.ncols), other.ncols)
        a, da = _clear(self)
        b, db = _clear(other)
        prod = _int_matmul(a, b, other.ncols)
        den = da * db
        return RatMatrix(((Fraction(x, den) for x in r) for r in prod), other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        return tuple(sum(map(mul, r, vec)) for r in self.rows)

    def to_int(self) -> "IntMatrix":
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return IntMatrix(((int(x) for x in r) for r in self.rows), self.ncols)

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.ncols)

    def denominator(self) -> int:
        return _lcm(Fraction(x).denominator for r in self.rows for x in r)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int):
        return type(self)((r[c0:c1] for r in self.rows[r0:r1]), c1 - c0)

    def hstack(self, other):
        cls = self._result_type(other)
        return cls((a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def vstack(self, other):
        cls = self._result_type(other)
        return cls(self.rows + other.rows, self.ncols)


class IntMatrix(Matrix):
    """Matrix of Python ints."""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise TypeError(f"non-integer entry {x!r}")


class RatMatrix(Matrix):
    """Matrix of ``Fraction`` entries, always in lowest terms."""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise TypeError(f"non-rational entry {x!r}")


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def _int_matmul(a_rows, b_rows, ncols):
    if not b_rows:
        return [[0] * ncols for _ in a_rows]
    cols = list(zip(*b_rows))
    out = []
    for r in a_rows:
        nz = [k for k, x in enumerate(r) if x]
        if len(nz) * 3 < len(r):
            out.append([sum(r[k] * c[k] for k in nz) for c in cols])
        else:
            out.append([sum(map(mul, r, c)) for c in cols])
    return out


def _clear(m: Matrix) -> tuple[list[list[int]], int]:
    """Scale ``m`` to an integer matrix: returns ``(rows, d)`` with m = rows / d."""
    if isinstance(m, IntMatrix):
        return [list(r) for r in m.rows], 1
    d = m.denominator()
    return [[int(x * d) for x in r] for r in m.rows], d


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(b.ncols for b in blocks)
    cls = IntMatrix if all(isinstance(b, IntMatrix) for b in blocks) else RatMatrix
    rows = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append((0,) * offset + r + (0,) * (n - offset - b.ncols))
        offset += b.ncols
    return cls(rows, n)


def block(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix from a grid of compatible blocks."""
    cls = IntMatrix if all(isinstance(b, IntMatrix) for row in grid for b in row) else RatMatrix
    rows = []
    for brow in grid:
        for i in range(brow[0].nrows):
            rows.append(sum((b.rows[i] for b in brow), ()))
    return cls(rows)


def kron(a: Matrix, b: Matrix) -> Matrix:
    cls = IntMatrix if isinstance(a, IntMatrix) and isinstance(b, IntMatrix) else RatMatrix
    rows = []
    for ar in a.rows:
        for br in b.rows:
            rows.append([x * y for x in ar for y in br])
    return cls(rows, a.ncols * b.ncols)


# -- determinants, rank, inverse -------------------------------------------

def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place. Returns ``(rank, det_if_square)``."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            if f:
                rows[i] = [(p * ri[k] - f * pr[k]) // prev for k in range(n)]
            else:
                rows[i] = [(p * ri[k]) // prev for k in range(n)]
        prev = p
        r += 1
    det = sign * prev if (r == m == n) else 0
    return r, det


def det(a: Matrix) -> int | Fraction:
    """Exact determinant via Bareiss fraction-free elimination."""
    if not a.is_square:
        raise ValueError("det of non-square matrix")
    n = a.nrows
    if n == 0:
        return 1
    rows, d = _clear(a)
    _, dt = _bareiss(rows)
    if d == 1:
        return dt
    return Fraction(dt, d**n)


def rank(a: Matrix) -> int:
    if a.nrows == 0 or a.ncols == 0:
        return 0
    rows, _ = _clear(a)
    r, _ = _bareiss(rows)
    return r


def inv(a: Matrix) -> RatMatrix:
    """Exact inverse over the rationals (Gauss-Jordan on ``Fraction``)."""
    if not a.is_square:
        raise ValueError("inverse of non-square matrix")
    n = a.nrows
    rows, d = _clear(a)
    # work over the integer-scaled copy: inv(a) = d * inv(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        if p != 1:
            aug[c] = [x / p for x in aug[c]]
        pr = aug[c]
        nz = [k for k in range(c, 2 * n) if pr[k]]
        for i in range(n):
            if i != c:
                f = aug[i][c]
                if f:
                    ri = aug[i]
                    for k in nz:
                        ri[k] -= f * pr[k]
    return RatMatrix(([x * d for x in r[n:]] for r in aug), n)


def is_unimodular(a: Matrix) -> bool:
    return a.is_square and a.is_integral() and abs(det(a)) == 1


# -- normal forms ------------------------------------------------------------

def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``a @ U = [H | 0]``.  ``H`` is
    in column echelon form (lower triangular for full row rank) with positive
    pivots; in each pivot row the entries to the left of the pivot lie in
    ``[0, pivot)``.  Equal column lattices give identical ``H``.
    """
    m, n = a.shape
    cols = [list(c) for c in zip(*a.rows)] if m else [[] for _ in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]

    def combine(k, j, row):
        x, y = cols[k][row], cols[j][row]
        g, s, t = xgcd(x, y)
        a1, b1 = -y // g, x // g
        ck, cj = cols[k], cols[j]
        cols[k] = [s * p + t * q for p, q in zip(ck, cj)]
        cols[j] = [a1 * p + b1 * q for p, q in zip(ck, cj)]
        uk, uj = ucols[k], ucols[j]
        ucols[k] = [s * p + t * q for p, q in zip(uk, uj)]
        ucols[j] = [a1 * p + b1 * q for p, q in zip(uk, uj)]

    k = 0
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            if cols[j][i]:
                if cols[k][i] == 0:
                    cols[k], cols[j] = cols[j], cols[k]
                    ucols[k], ucols[j] = ucols[j], ucols[k]
                else:
                    combine(k, j, i)
        p = cols[k][i]
        if p == 0:
            continue
        if p < 0:
            cols[k] = [-x for x in cols[k]]
            ucols[k] = [-x for x in ucols[k]]
            p = -p
        ck, uk = cols[k], ucols[k]
        for j in range(k):
            q = cols[j][i] // p
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], ck)]
                ucols[j] = [x - q * y for x, y in zip(ucols[j], uk)]
        k += 1
    H = IntMatrix.from_columns(cols[:k], nrows=m) if k else IntMatrix.zeros(m, 0)
    U = IntMatrix.from_columns(ucols, nrows=n)
    return H, U


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == S`` with ``S`` diagonal in divisibility-chain form."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with transforms, by repeated min-pivot elimination."""
    m, n = a.shape
    A = [list(r) for r in a.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    # V is stored transposed (list of columns) so column ops are row ops on it
    Vt = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        Vt[i], Vt[j] = Vt[j], Vt[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        Vt[dst] = [x + q * y for x, y in zip(Vt[dst], Vt[src])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = A[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and not A[i][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and not A[t][j]
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SnfResult(S=IntMatrix(A, n), U=IntMatrix(U, m), V=IntMatrix(Vt, n).T)


def _check_alternating(E: Matrix) -> None:
    if not E.is_square or not E.is_alternating():
        raise NotAlternating("form is not alternating (E^T != -E)")


def symplectic_basis(E: IntMatrix) -> tuple[IntMatrix, tuple[int, ...]]:
    """Frobenius reduction of an alternating form.

    Returns ``(U, d)`` with ``U`` unimodular and ``U.T @ E @ U`` equal to
    ``[[0, D], [-D, 0]]`` where ``D = diag(d)`` and ``d[0] | d[1] | ...``.
    """
    _check_alternating(E)
    r = E.nrows
    if r % 2:
        raise Degenerate("alternating form of odd rank is degenerate")
    G = [list(row) for row in E.rows]
    Ut = [[int(i == j) for j in range(r)] for i in range(r)]  # basis vectors as rows

    def swap(i, j):
        if i == j:
            return
        G[i], G[j] = G[j], G[i]
        for row in G:
            row[i], row[j] = row[j], row[i]
        Ut[i], Ut[j] = Ut[j], Ut[i]

    def add(x, k, c):  # basis_x += c * basis_k
        if not c:
            return
        G[x] = [a + c * b for a, b in zip(G[x], G[k])]
        for row in G:
            row[x] += c * row[k]
        Ut[x] = [a + c * b for a, b in zip(Ut[x], Ut[k])]

    divisors = []
    for t in range(0, r, 2):
        while True:
            best = None
            for i in range(t, r):
                for j in range(i + 1, r):
                    x = G[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                raise Degenerate("alternating form is degenerate")
            _, i, j = best
            swap(t, i)
            swap(t + 1, j)
            if G[t][t + 1] < 0:
                swap(t, t + 1)
            d = G[t][t + 1]
            dirty = False
            for x in range(t + 2, r):
                add(x, t + 1, -(G[t][x] // d))
                add(x, t, G[t + 1][x] // d)
                if G[t][x] or G[t + 1][x]:
                    dirty = True
            if dirty:
                continue
            bad = next(((x, y) for x in range(t + 2, r) for y in range(x + 1, r) if G[x][y] % d), None)
            if bad is None:
                break
            add(t, bad[0], 1)
        divisors.append(G[t][t + 1])
    order = list(range(0, r, 2)) + list(range(1, r, 2))
    U = IntMatrix([Ut[k] for k in order], r).T
    return U, tuple(divisors)


def symplectic_type(E: IntMatrix) -> tuple[int, ...]:
    """Elementary divisors ``(d_1, ..., d_g)`` of a nondegenerate alternating form."""
    return symplectic_basis(E)[1]


def standard_symplectic(divisors: Sequence[int]) -> IntMatrix:
    """``[[0, D], [-D, 0]]`` with ``D = diag(divisors)``."""
    g = len(divisors)
    D = IntMatrix.diag(list(divisors))
    Z = IntMatrix.zeros(g)
    return block([[Z, D], [-D, Z]])


def lattice_equal(a: Matrix, b: Matrix) -> bool:
    """Whether the column lattices of ``a`` and ``b`` coincide."""
    if a.nrows != b.nrows:
        raise ValueError("lattices live in different ambient spaces")
    d = _lcm([a.denominator(), b.denominator()])
    ha, _ = hnf(a.scale(d).to_int())
    hb, _ = hnf(b.scale(d).to_int())
    if ha.ncols != a.nrows or hb.ncols != b.nrows:
        raise RankDeficient("column lattice is not of full rank")
    return ha == hb


def lattice_basis(gens: Matrix) -> RatMatrix:
    """HNF basis of the column lattice of a (possibly rational) generating set."""
    d = gens.denominator()
    h, _ = hnf(gens.scale(d).to_int())
    return h.scale(Fraction(1, d))
