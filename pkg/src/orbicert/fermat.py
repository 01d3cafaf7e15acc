"""Fermat covers Y in P^{n+k} and (point, tangent) sampling over F_p."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .arrangement import NormalizedArrangement
from .exactalg import Matrix, default_prime, is_prime, mth_root, rank, root_of_unity_order, to_fp
from .mpoly import MPoly, base, fiber


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class FermatCover:
    """Z_{n+j}^m = sum_i a_i^j Z_i^m, j = 1..k."""

    n: int
    k: int
    m: int
    A: Matrix

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("ramification m must be >= 2")
        if self.A.shape != (self.k, self.n + 1) and not (self.k == 0 and self.A.nrows == 0):
            raise ValueError("A must be k x (n+1)")

    @property
    def N(self) -> int:
        return self.n + self.k

    def a(self, j: int, i: int):
        """a_i^j with j in 1..k."""
        return self.A[j - 1, i]

    def equations(self) -> list[MPoly]:
        """Homogeneous Z_{n+j}^m - sum_i a_i^j Z_i^m."""
        out = []
        for j in range(1, self.k + 1):
            f = MPoly.z(self.n + j) ** self.m
            for i in range(self.n + 1):
                if self.a(j, i):
                    f = f - (MPoly.z(i) ** self.m).scale(self.a(j, i))
            out.append(f)
        return out

    def tangent_equations(self) -> list[MPoly]:
        out = []
        for j in range(1, self.k + 1):
            e = self.n + j
            f = MPoly.z(e) ** (self.m - 1) * MPoly.zp(e)
            for i in range(self.n + 1):
                if self.a(j, i):
                    f = f - (MPoly.z(i) ** (self.m - 1) * MPoly.zp(i)).scale(self.a(j, i))
            out.append(f)
        return out

    def has_zero_coefficient(self) -> bool:
        return any(self.A[j, i] == 0 for j in range(self.k) for i in range(self.n + 1))


def build_cover(na: NormalizedArrangement | Matrix, m: int, n: int | None = None) -> FermatCover:
    if isinstance(na, NormalizedArrangement):
        return FermatCover(na.n, na.k, m, na.A)
    A = na
    return FermatCover(A.ncols - 1 if n is None else n, A.nrows, m, A)


@dataclass(frozen=True)
class CoverPoint:
    """Point of Y in the chart z_0 = 1 with a tangent vector (z_0' = 0), over F_p."""

    p: int
    z: tuple[int, ...]
    zp: tuple[int, ...]
    interior: bool = True
    trial: int = 0

    def values(self) -> dict[int, int]:
        out = {}
        for i, (a, b) in enumerate(zip(self.z, self.zp)):
            out[base(i)] = a
            out[fiber(i)] = b
        return out

    def in_chart(self, c: int) -> dict[int, int]:
        """Coordinates in chart c: y_i = z_i/z_c, y_i' = (z_c z_i' - z_c' z_i)/z_c^2."""
        p = self.p
        zc, zcp = self.z[c], self.zp[c]
        if zc == 0:
            raise ZeroDivisionError(f"point is not in chart {c}")
        inv = pow(zc, -1, p)
        inv2 = inv * inv % p
        out = {}
        for i, (a, b) in enumerate(zip(self.z, self.zp)):
            out[base(i)] = a * inv % p
            out[fiber(i)] = (zc * b - zcp * a) * inv2 % p
        return out


def _coeffs_mod(cov: FermatCover, p: int) -> list[list[int]]:
    return [[to_fp(cov.A[j, i], p) for i in range(cov.n + 1)] for j in range(cov.k)]


def iter_points(cov: FermatCover, p: int | None = None, seed: int = 0, budget: int | None = None) -> Iterator[CoverPoint]:
    """Rejection sampler; yields interior points with a random nonzero tangent.

    Draw z_1..z_n in F_p^*, accept when every sum_i a_i^j z_i^m is a nonzero
    m-th power, take z_{n+j} as an m-th root, then solve the tangent
    relations for z_{n+j}'. ``budget`` caps the total number of draws.
    """
    m, n, k = cov.m, cov.n, cov.k
    p = default_prime(m) if p is None else p
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not root_of_unity_order(p, m):
        raise ValueError(f"p = {p} is not 1 mod m = {m}")
    a = _coeffs_mod(cov, p)
    rng = random.Random(seed)
    e = (p - 1) // m
    trial = 0
    while budget is None or trial < budget:
        trial += 1
        z = [1] + [rng.randrange(1, p) for _ in range(n)]
        zm = [pow(x, m, p) for x in z]
        ext = []
        for j in range(k):
            c = sum(aj * x for aj, x in zip(a[j], zm)) % p
            if c == 0 or pow(c, e, p) != 1:
                break
            ext.append(c)
        else:
            roots = [mth_root(c, m, p) for c in ext]
            zs = z + roots
            while True:
                t = [0] + [rng.randrange(p) for _ in range(n)]
                if any(t):
                    break
            zm1 = [pow(x, m - 1, p) for x in z]
            tp = list(t)
            for j in range(k):
                s = sum(aj * u * v for aj, u, v in zip(a[j], zm1, t)) % p
                tp.append(s * pow(pow(roots[j], m - 1, p), -1, p) % p)
            yield CoverPoint(p, tuple(zs), tuple(tp), True, trial)
    raise SamplingError(f"sampling budget of {budget} draws exhausted")


def sample_point(cov: FermatCover, p: int | None = None, seed: int = 0, budget: int = 1_000_000) -> CoverPoint:
    return next(iter_points(cov, p, seed, budget))


def sample_points(cov: FermatCover, count: int, p: int | None = None, seed: int = 0, budget: int | None = None) -> list[CoverPoint]:
    it = iter_points(cov, p, seed, budget)
    return [next(it) for _ in range(count)]


def acceptance_rate(cov: FermatCover, trials: int, p: int | None = None, seed: int = 0) -> float:
    """Fraction of draws of (z_1..z_n) accepted by the sampler."""
    m, n = cov.m, cov.n
    p = default_prime(m) if p is None else p
    a = _coeffs_mod(cov, p)
    rng = random.Random(seed)
    e = (p - 1) // m
    hits = 0
    for _ in range(trials):
        zm = [1] + [pow(rng.randrange(1, p), m, p) for _ in range(n)]
        for row in a:
            c = sum(x * y for x, y in zip(row, zm)) % p
            if c == 0 or pow(c, e, p) != 1:
                break
        else:
            hits += 1
    return hits / trials


def relation_residuals(cov: FermatCover, pt: CoverPoint) -> list[int]:
    """Values of all k Fermat and k tangent relations at the point."""
    vals = pt.values()
    return [f.evaluate(vals, pt.p) for f in cov.equations() + cov.tangent_equations()]


@dataclass(frozen=True)
class SmoothnessReport:
    passed: bool
    samples: int
    p: int
    seed: int
    singular: tuple[CoverPoint, ...] = ()
    reason: str = ""


def smoothness_probe(cov: FermatCover, p: int | None = None, samples: int = 100, seed: int = 0) -> SmoothnessReport:
    """Jacobian rank k at sampled points; probabilistic evidence only."""
    p = default_prime(cov.m) if p is None else p
    if cov.k == 0:
        return SmoothnessReport(True, 0, p, seed, reason="no equations")
    if cov.has_zero_coefficient():
        return SmoothnessReport(False, 0, p, seed, reason="arrangement precondition failed: zero coefficient in A")
    a = _coeffs_mod(cov, p)
    bad = []
    for pt in sample_points(cov, samples, p, seed):
        J = []
        for j in range(cov.k):
            row = [(-cov.m * a[j][i] * pow(pt.z[i], cov.m - 1, p)) % p for i in range(cov.n + 1)]
            row += [cov.m * pow(pt.z[cov.n + 1 + t], cov.m - 1, p) % p if t == j else 0 for t in range(cov.k)]
            J.append(row)
        if rank(Matrix(J, p)) != cov.k:
            bad.append(pt)
    reason = "no singular point found" if not bad else f"{len(bad)} singular samples"
    return SmoothnessReport(not bad, samples, p, seed, tuple(bad), reason)


def standard_lines_exist(n: int, k: int) -> tuple[bool, tuple[tuple[int, ...], ...] | None]:
    """Whether {0..n+k} splits into >= 2 blocks of size >= k+1, with a witness."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if n + k + 1 >= 2 * (k + 1):
        return True, (tuple(range(k + 1)), tuple(range(k + 1, n + k + 1)))
    return False, None
