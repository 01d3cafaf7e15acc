"""Shared builders and independent oracles for the test suite.

The oracles deliberately avoid the package's own linear algebra so that a bug
there cannot hide behind itself.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from orbicert.arrangement import Arrangement, check_linear_general_position, check_quadric_general_position


def rand_rational(rng: random.Random, lo: int = -12, hi: int = 12, den: int = 7) -> Fraction:
    while True:
        x = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if x:
            return x


def random_arrangement(n: int, d: int, rng: random.Random, coordinate: bool = True, mult=None) -> Arrangement:
    covs = []
    if coordinate:
        covs = [[Fraction(int(i == j)) for j in range(n + 1)] for i in range(n + 1)]
    while len(covs) < d:
        covs.append([rand_rational(rng) for _ in range(n + 1)])
    ms = None if mult is None else [mult] * d
    return Arrangement(n, covs, ms)


def generic_arrangement(n: int, d: int, rng: random.Random, mult=None) -> Arrangement:
    """Random arrangement, redrawn until it is linearly and quadrically generic."""
    while True:
        arr = random_arrangement(n, d, rng, mult=mult)
        if check_linear_general_position(arr) and check_quadric_general_position(arr):
            return arr


def dual_conic_arrangement(mult=None) -> Arrangement:
    """Six lines whose dual points (1, t, t^2) lie on x0 x2 = x1^2.

    The first three are taken to be the coordinate lines after a change of
    basis, so this is also a valid input for the A_[2] determinant test.
    """
    covs = [(1, t, t * t) for t in (1, 2, 3, 4, 5, 6)]
    return Arrangement(2, covs, None if mult is None else [mult] * 6)


NOGUCHI_COVECTORS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, 4, 9)]


def noguchi_arrangement(mult=6) -> Arrangement:
    return Arrangement(2, NOGUCHI_COVECTORS, None if mult is None else [mult] * 6)


# --- oracles --------------------------------------------------------------------------


def perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def leibniz_det(rows):
    """Determinant by the permutation expansion; fine up to 6 x 6."""
    n = len(rows)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(perm_sign(p))
        for i in range(n):
            term *= rows[i][p[i]]
            if not term:
                break
        total += term
    return total


def cofactor_det(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    out = Fraction(0)
    for c in range(n):
        if rows[0][c]:
            sub = [r[:c] + r[c + 1 :] for r in rows[1:]]
            out += (-1) ** c * rows[0][c] * cofactor_det(sub)
    return out


def oracle_rank(rows, p: int | None = None) -> int:
    """Largest size of a nonzero minor; exhaustive, small matrices only."""
    if not rows or not rows[0]:
        return 0
    R, C = len(rows), len(rows[0])
    for size in range(min(R, C), 0, -1):
        for rs in combinations(range(R), size):
            for cs in combinations(range(C), size):
                v = cofactor_det([[Fraction(rows[r][c]) for c in cs] for r in rs])
                if p is not None:
                    v = v.numerator * pow(v.denominator, -1, p) % p
                if v:
                    return size
    return 0


def elimination_rank(rows) -> int:
    """Plain Gaussian elimination over Q, written independently of exactalg."""
    M = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def veronese_oracle(arr: Arrangement) -> bool:
    """Dual points lie on no conic/quadric: the degree-2 evaluation matrix has full column rank."""
    n = arr.n
    mons = [(a, b) for a in range(n + 1) for b in range(a, n + 1)]
    rows = [[v[a] * v[b] for a, b in mons] for v in arr.covectors]
    return len(rows) >= len(mons) and elimination_rank(rows) == len(mons)


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def integer_partitions(total: int, smallest: int = 1):
    if total == 0:
        yield []
        return
    for first in range(smallest, total + 1):
        for rest in integer_partitions(total - first, first):
            yield [first] + rest


def standard_partition_oracle(n: int, k: int) -> bool:
    size = n + k + 1
    if size <= 9:
        return any(len(p) >= 2 and all(len(b) >= k + 1 for b in p) for p in set_partitions(range(size)))
    return any(len(p) >= 2 for p in integer_partitions(size, k + 1))
