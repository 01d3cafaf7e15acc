"""Exact scalars and dense linear algebra over Q and F_p.

Rationals are :class:`fractions.Fraction`. Prime-field values are plain ints in
``[0, p)`` inside matrices; :class:`FpElement` wraps one value with its modulus
for callers that want operator syntax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Rational = Fraction


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse rational from {type(text).__name__}")
    s = text.strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# --- primes -----------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def default_prime(m: int, start: int = 1 << 20) -> int:
    """Smallest prime p >= start with p = 1 (mod m)."""
    if m < 1:
        raise ValueError("m must be positive")
    p = start + ((1 - start) % m)
    while not is_prime(p):
        p += m
    return p


def root_of_unity_order(p: int, m: int) -> bool:
    """True iff F_p contains all m-th roots of unity, i.e. m | p - 1."""
    return (p - 1) % m == 0


def _prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def _non_residue(r: int, p: int) -> int:
    e = (p - 1) // r
    for h in range(2, p):
        if pow(h, e, p) != 1:
            return h
    raise ValueError(f"no {r}-th power non-residue mod {p}")


def _prime_root(a: int, r: int, p: int) -> int:
    """One r-th root of the r-th power residue a (r prime, r | p-1).

    Adleman-Manders-Miller: write p - 1 = r^t * s with r not dividing s, take
    the root in the part of order prime to r, then correct the r-power torsion
    by discrete logs in the cyclic group of order r^t.
    """
    if a == 0:
        return 0
    t, s = 0, p - 1
    while s % r == 0:
        s //= r
        t += 1
    # u r = 1 (mod s): x = a^u has x^r = a * delta with delta in the r^t torsion
    u = pow(r, -1, s) if s > 1 else 0
    x = pow(a, u, p)
    delta = pow(x, r, p) * pow(a, -1, p) % p
    if delta == 1:
        return x
    g = pow(_non_residue(r, p), s, p)  # generator of the r^t torsion
    zeta = pow(g, r ** (t - 1), p)  # order r, for digit extraction
    # base-r digits of log_g(delta); delta = g^{r e} gives (x g^{-e})^r = a
    log = 0
    gi = pow(g, -1, p)
    cur = delta
    for i in range(t):
        probe = pow(cur, r ** (t - 1 - i), p)
        if probe != 1:
            d = 0
            zp = 1
            while zp != probe:
                zp = zp * zeta % p
                d += 1
                if d >= r:
                    raise ArithmeticError("torsion logarithm failed")
            log += d * r**i
            cur = cur * pow(gi, d * r**i, p) % p
    if log % r:
        raise ArithmeticError("input is not an r-th power residue")
    return x * pow(gi, log // r, p) % p


def mth_root(a: int | FpElement, m: int, p: int | None = None) -> int | None:
    """Some x with x^m = a in F_p, or None when a is not an m-th power.

    Requires m | p - 1. Accepts either (int, m, p) or (FpElement, m).
    """
    if isinstance(a, FpElement):
        p = a.p
        a = a.value
    if p is None:
        raise TypeError("modulus required")
    if m < 1 or not root_of_unity_order(p, m):
        raise ValueError(f"mth_root requires m | p-1 (m={m}, p={p})")
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // m, p) != 1:
        return None
    x = a
    remaining = m
    for r in _prime_factors(m):
        remaining //= r
        y = _prime_root(x, r, p)
        if remaining > 1 and pow(y, (p - 1) // remaining, p) != 1:
            # some r-th root of x is a remaining-th power; scan y * mu_r
            zeta = pow(_non_residue(r, p), (p - 1) // r, p)
            for _ in range(r - 1):
                y = y * zeta % p
                if pow(y, (p - 1) // remaining, p) == 1:
                    break
            else:
                raise ArithmeticError("no compatible root found")
        x = y
    return x


@dataclass(frozen=True)
class FpElement:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError("field mismatch")
            return other.value
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return int(other)

    def __add__(self, other):
        return FpElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> FpElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElement(self._coerce(other), self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value


def to_fp(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


# --- matrices ---------------------------------------------------------------


class Matrix:
    """Dense rectangular matrix over Q (``modulus=None``) or F_p.

    Rational entries are Fractions; F_p entries are ints reduced into [0, p).
    Instances are treated as immutable.
    """

    __slots__ = ("rows", "ncols", "modulus")

    def __init__(self, entries: Iterable[Iterable], modulus: int | None = None, ncols: int | None = None):
        rows = []
        for row in entries:
            if modulus is None:
                rows.append(tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in row))
            else:
                rows.append(tuple(_fp_entry(x, modulus) for x in row))
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.rows: tuple[tuple, ...] = tuple(rows)
        self.ncols = widths.pop() if widths else (ncols or 0)
        self.modulus = modulus

    @classmethod
    def identity(cls, n: int, modulus: int | None = None) -> Matrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], modulus)

    @classmethod
    def zeros(cls, r: int, c: int, modulus: int | None = None) -> Matrix:
        return cls([[0] * c for _ in range(r)], modulus, ncols=c)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.modulus == other.modulus
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ncols, self.modulus))

    def __repr__(self):
        field = "Q" if self.modulus is None else f"F_{self.modulus}"
        return f"Matrix[{field}]({[[format_rational(x) if self.modulus is None else x for x in r] for r in self.rows]})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def transpose(self) -> Matrix:
        return Matrix(zip(*self.rows), self.modulus, ncols=self.nrows) if self.rows else Matrix.zeros(self.ncols, 0, self.modulus)

    T = property(transpose)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.modulus != other.modulus:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = sum((x * y for x, y in zip(r, c)), Fraction(0) if self.modulus is None else 0)
                row.append(s if self.modulus is None else s % self.modulus)
            out.append(row)
        return Matrix(out, self.modulus, ncols=other.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], self.modulus, ncols=len(cols))

    def det(self):
        return det(self)

    def rank(self) -> int:
        return rank(self)


def _fp_entry(x, p: int) -> int:
    if isinstance(x, FpElement):
        if x.p != p:
            raise ValueError("field mismatch")
        return x.value
    if isinstance(x, (Fraction, str)):
        return to_fp(parse_rational(x), p)
    return int(x) % p


def _as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


def det(M) -> Fraction | int:
    """Exact determinant; Bareiss elimination over Q, Gaussian over F_p."""
    M = _as_matrix(M)
    n, c = M.shape
    if n != c:
        raise ValueError(f"determinant of non-square {n}x{c} matrix")
    if n == 0:
        return Fraction(1) if M.modulus is None else 1
    if M.modulus is not None:
        return _det_mod(M)
    # clear denominators row by row so Bareiss runs over Z
    scale = 1
    rows = []
    for r in M.rows:
        l = math.lcm(*(x.denominator for x in r))
        scale *= l
        rows.append([int(x * l) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pk = rows[k][k]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - rik * rows[k][j]) // prev
            ri[k] = 0
        prev = pk
    return Fraction(sign * rows[-1][-1], scale)


def _det_mod(M: Matrix) -> int:
    p = M.modulus
    rows = [list(r) for r in M.rows]
    n = len(rows)
    d = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            d = -d
        pk = rows[k][k]
        d = d * pk % p
        inv = pow(pk, -1, p)
        for i in range(k + 1, n):
            f = rows[i][k] * inv % p
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[k])]
    return d % p


def rank(M) -> int:
    """Exact rank by elimination with full pivoting (first nonzero in row-major order)."""
    M = _as_matrix(M)
    p = M.modulus
    rows = [list(r) for r in M.rows]
    nr, nc = M.shape
    active_rows = list(range(nr))
    active_cols = list(range(nc))
    r = 0
    while active_rows and active_cols:
        pivot = None
        for i in active_rows:
            for j in active_cols:
                if rows[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i0, j0 = pivot
        pv = rows[i0][j0]
        inv = Fraction(1) / pv if p is None else pow(pv, -1, p)
        active_rows.remove(i0)
        active_cols.remove(j0)
        for i in active_rows:
            f = rows[i][j0]
            if f:
                f = f * inv if p is None else f * inv % p
                for j in active_cols:
                    v = rows[i][j] - f * rows[i0][j]
                    rows[i][j] = v if p is None else v % p
                rows[i][j0] = 0
        r += 1
    return r


def minor(M, rows: Sequence[int], cols: Sequence[int]):
    """Determinant of the submatrix on ascending ``rows`` x ``cols``.

    No Cramer sign is applied here; callers own that convention.
    """
    M = _as_matrix(M)
    rows, cols = sorted(rows), sorted(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs |rows| == |cols|")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ValueError("repeated index in minor selection")
    nr, nc = M.shape
    if any(i < 0 or i >= nr for i in rows) or any(j < 0 or j >= nc for j in cols):
        raise IndexError("minor index out of range")
    return det(M.submatrix(rows, cols))


def independent_columns(M) -> list[int]:
    """Greedy basis of the column space: columns chosen in ascending index order."""
    M = _as_matrix(M)
    p = M.modulus
    basis: list[list] = []  # reduced column vectors with their pivot rows
    pivots: list[int] = []
    chosen: list[int] = []
    for j in range(M.ncols):
        v = [M.rows[i][j] for i in range(M.nrows)]
        for b, pr in zip(basis, pivots):
            if v[pr]:
                f = v[pr] / b[pr] if p is None else v[pr] * pow(b[pr], -1, p) % p
                v = [x - f * y for x, y in zip(v, b)]
                if p is not None:
                    v = [x % p for x in v]
        pr = next((i for i, x in enumerate(v) if x), None)
        if pr is not None:
            basis.append(v)
            pivots.append(pr)
            chosen.append(j)
    return chosen


def inverse(M) -> Matrix:
    """Gauss-Jordan inverse over Q or F_p."""
    M = _as_matrix(M)
    n, c = M.shape
    if n != c:
        raise ValueError("inverse of non-square matrix")
    p = M.modulus
    one = Fraction(1) if p is None else 1
    aug = [list(r) + [one if i == j else 0 * one for j in range(n)] for i, r in enumerate(M.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = one / aug[k][k] if p is None else pow(aug[k][k], -1, p)
        aug[k] = [x * inv if p is None else x * inv % p for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(aug[i], aug[k])]
    return Matrix([r[n:] for r in aug], p)


def nullspace(M) -> list[list[Fraction]]:
    """Rational kernel basis from the reduced row echelon form.

    One basis vector per free column (ascending), with a 1 in that column.
    """
    M = _as_matrix(M)
    if M.modulus is not None:
        raise ValueError("nullspace is implemented over Q only")
    rows = [list(r) for r in M.rows]
    nr, nc = M.shape
    pivots = []
    r = 0
    for j in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][j]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
        if r == nr:
            break
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * nc
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        basis.append(v)
    return basis


def dependent_subset(vectors: Sequence[Sequence[Fraction]], size: int) -> tuple[int, ...] | None:
    """First (lexicographic) ``size``-subset of vectors with zero determinant."""
    for idx in combinations(range(len(vectors)), size):
        if det(Matrix([vectors[i] for i in idx])) == 0:
            return idx
    return None
