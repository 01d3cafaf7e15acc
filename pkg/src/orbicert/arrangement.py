"""Hyperplane arrangements in P^n: general position checks, normalization, A_[2].

Covectors are stored scaled so their first nonzero entry is 1. Quadric
genericity means the degree-2 Veronese images of the dual points [H_i] span
the full space of quadrics.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactalg import Matrix, det, independent_columns, inverse, nullspace, rank

INF = math.inf


def canonical_covector(v: Sequence) -> tuple[Fraction, ...]:
    v = tuple(Fraction(x) for x in v)
    lead = next((x for x in v if x), None)
    if lead is None:
        raise ValueError("zero covector does not define a hyperplane")
    return tuple(x / lead for x in v)


def _check_multiplicity(m):
    if m == INF:
        return INF
    if isinstance(m, float) or isinstance(m, bool) or int(m) != m or m < 2:
        raise ValueError(f"multiplicity must be an integer >= 2 or inf, got {m!r}")
    return int(m)


@dataclass(frozen=True)
class Arrangement:
    n: int
    covectors: tuple[tuple[Fraction, ...], ...]
    multiplicities: tuple | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient dimension must be >= 1")
        covs = tuple(canonical_covector(v) for v in self.covectors)
        if not covs:
            raise ValueError("an arrangement needs at least one hyperplane")
        if any(len(v) != self.n + 1 for v in covs):
            raise ValueError(f"covectors must have length n+1 = {self.n + 1}")
        object.__setattr__(self, "covectors", covs)
        if self.multiplicities is not None:
            ms = tuple(_check_multiplicity(m) for m in self.multiplicities)
            if len(ms) != len(covs):
                raise ValueError("one multiplicity per hyperplane")
            object.__setattr__(self, "multiplicities", ms)

    @property
    def d(self) -> int:
        return len(self.covectors)

    def subset(self, indices: Sequence[int]) -> Arrangement:
        ms = None if self.multiplicities is None else [self.multiplicities[i] for i in indices]
        return Arrangement(self.n, tuple(self.covectors[i] for i in indices), ms)

    def with_multiplicities(self, ms) -> Arrangement:
        return Arrangement(self.n, self.covectors, tuple(ms))


@dataclass(frozen=True)
class Verdict:
    """holds is True, False, or None (undecided)."""

    holds: bool | None
    reason: str = ""
    witness: tuple | None = None
    provenance: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds is True


@dataclass(frozen=True)
class NormalizedArrangement:
    base: Arrangement
    change: Matrix  # rows are the pivot covectors; new coords Z' = change * Z
    A: Matrix  # k x (n+1), row j = covector of H_{n+j} in new coordinates
    pivot: tuple[int, ...]
    others: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return len(self.others)

    @property
    def order(self) -> tuple[int, ...]:
        """Original index of new hyperplane H_0..H_{n+k}."""
        return self.pivot + self.others


# --- linear general position --------------------------------------------------


def check_linear_general_position(arr: Arrangement, mode: str = "exhaustive", seed: int | None = None, trials: int = 1000) -> Verdict:
    n, d = arr.n, arr.d
    if d < n + 1:
        return Verdict(False, "insufficient", None)
    if mode == "exhaustive":
        for idx in combinations(range(d), n + 1):
            if det(Matrix([arr.covectors[i] for i in idx])) == 0:
                return Verdict(False, "dependent subset", idx)
        return Verdict(True, "all (n+1)-minors nonzero")
    if mode == "randomized":
        if seed is None:
            raise ValueError("randomized mode needs a seed")
        rng = random.Random(seed)
        prov = {"seed": seed, "trials": trials}
        for _ in range(trials):
            idx = tuple(sorted(rng.sample(range(d), n + 1)))
            if det(Matrix([arr.covectors[i] for i in idx])) == 0:
                return Verdict(False, "dependent subset", idx, prov)
        return Verdict(None, "no dependent subset among sampled subsets", None, prov)
    raise ValueError(f"unknown mode {mode!r}")


# --- quadrics -------------------------------------------------------------------


def quadric_monomials(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n + 1) for b in range(a, n + 1)]


def veronese_matrix(arr: Arrangement) -> Matrix:
    mons = quadric_monomials(arr.n)
    return Matrix([[v[a] * v[b] for a, b in mons] for v in arr.covectors])


def check_quadric_general_position(arr: Arrangement) -> Verdict:
    need = math.comb(arr.n + 2, 2)
    if arr.d < need:
        return Verdict(False, "too few hyperplanes", None)
    r = rank(veronese_matrix(arr))
    if r == need:
        return Verdict(True, f"Veronese rank {r}")
    return Verdict(False, f"dual points lie on a quadric (Veronese rank {r} < {need})", None)


# --- normalization ------------------------------------------------------------------


def first_independent_subset(arr: Arrangement, must_include: Sequence[int] = ()) -> tuple[int, ...] | None:
    must = tuple(sorted(must_include))
    rest = [i for i in range(arr.d) if i not in must]
    for extra in combinations(rest, arr.n + 1 - len(must)):
        idx = tuple(sorted(extra + must))
        if det(Matrix([arr.covectors[i] for i in idx])) != 0:
            return extra + must
    return None


def normalize(arr: Arrangement, pivot: Sequence[int] | None = None) -> NormalizedArrangement:
    if pivot is None:
        pivot = first_independent_subset(arr)
        if pivot is None:
            raise ValueError("arrangement has no independent (n+1)-subset")
    pivot = tuple(pivot)
    if len(pivot) != arr.n + 1 or len(set(pivot)) != len(pivot):
        raise ValueError("pivot must be n+1 distinct indices")
    P = Matrix([arr.covectors[i] for i in pivot])
    if det(P) == 0:
        raise ValueError(f"pivot subset {pivot} is linearly dependent")
    others = tuple(i for i in range(arr.d) if i not in pivot)
    Pinv = inverse(P)
    rest = Matrix([arr.covectors[i] for i in others], ncols=arr.n + 1)
    A = rest @ Pinv if others else Matrix.zeros(0, arr.n + 1)
    return NormalizedArrangement(arr, P, A, pivot, others)


def zero_entry_witness(na: NormalizedArrangement) -> tuple[int, ...] | None:
    """An original (n+1)-subset that is dependent because some a_i^j = 0."""
    for j in range(na.k):
        for i in range(na.n + 1):
            if na.A[j, i] == 0:
                sub = [na.pivot[t] for t in range(na.n + 1) if t != i] + [na.others[j]]
                return tuple(sorted(sub))
    return None


def pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n + 1), 2))


def build_A2(na: NormalizedArrangement | Matrix, n: int | None = None) -> Matrix:
    """binom(n+1,2) x k matrix with entry a_p^j a_q^j at row (p<q), column j."""
    A = na.A if isinstance(na, NormalizedArrangement) else na
    n = na.n if isinstance(na, NormalizedArrangement) else (A.ncols - 1 if n is None else n)
    k = A.nrows
    P = pairs(n)
    return Matrix([[A[j, p] * A[j, q] for j in range(k)] for p, q in P], ncols=k)


def a2_equivalence_check(na: NormalizedArrangement) -> bool:
    n, d = na.n, na.base.d
    if d != math.comb(n + 2, 2):
        raise ValueError("A_[2] determinant test needs d = binom(n+2, 2)")
    if na.pivot != tuple(range(n + 1)):
        raise ValueError("A_[2] determinant test needs the first n+1 hyperplanes as pivot")
    if zero_entry_witness(na) is not None:
        raise ValueError("arrangement is not in linear general position")
    return det(build_A2(na)) != 0


# --- strata -------------------------------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    removed: tuple[int, ...]
    basis: Matrix  # (n+1) x (n+1-|I|), columns parametrize the intersection
    survivors: tuple[int, ...]  # original indices, after merging
    arrangement: Arrangement | None  # induced arrangement on P^{n-|I|}
    merged: tuple[tuple[int, int], ...] = ()


def restrict(arr: Arrangement, removed: Sequence[int], among: Sequence[int] | None = None) -> Restriction:
    """Restrict the hyperplanes not in ``removed`` to the intersection of those in it."""
    I = tuple(sorted(set(removed)))
    n = arr.n
    if len(I) > n:
        raise ValueError(f"cannot intersect {len(I)} > n hyperplanes")
    if any(i < 0 or i >= arr.d for i in I):
        raise ValueError("removed index out of range")
    if I:
        M = Matrix([arr.covectors[i] for i in I])
        if rank(M) != len(I):
            raise ValueError(f"hyperplanes {I} are dependent")
        K = nullspace(M)
    else:
        K = [[Fraction(int(i == j)) for i in range(n + 1)] for j in range(n + 1)]
    basis = Matrix(list(zip(*K)), ncols=len(K))
    cand = [i for i in (range(arr.d) if among is None else among) if i not in I]
    seen: dict[tuple, int] = {}
    survivors, covs, mults, merged = [], [], [], []
    for i in cand:
        v = [sum(arr.covectors[i][r] * K[c][r] for r in range(n + 1)) for c in range(len(K))]
        if not any(v):
            raise ValueError(f"hyperplane {i} contains the intersection of {I}")
        key = tuple(canonical_covector(v))
        if key in seen:
            merged.append((seen[key], i))
            continue
        seen[key] = i
        survivors.append(i)
        covs.append(key)
        if arr.multiplicities is not None:
            mults.append(arr.multiplicities[i])
    sub = None
    if covs and n - len(I) >= 1:
        sub = Arrangement(n - len(I), tuple(covs), tuple(mults) if arr.multiplicities is not None else None)
    return Restriction(I, basis, tuple(survivors), sub, tuple(merged))


@dataclass(frozen=True)
class Selection:
    removed: tuple[int, ...]
    indices: tuple[int, ...] | None  # original indices of the chosen survivors
    method: str  # "identity" | "laplace" | "exhaustive" | "failed"
    linear: Verdict | None = None
    quadric: Verdict | None = None
    alarm: bool = False

    @property
    def ok(self) -> bool:
        return self.indices is not None and bool(self.linear) and bool(self.quadric)


def _restricted_checks(arr: Arrangement, I: tuple[int, ...], chosen: Sequence[int]):
    res = restrict(arr, I, among=chosen)
    if res.merged or res.arrangement is None:
        return None, None
    return check_linear_general_position(res.arrangement), check_quadric_general_position(res.arrangement)


def select_subarrangement(arr: Arrangement, removed: Sequence[int], verify_input: bool = True) -> Selection:
    """Survivors of ``removed`` whose restriction is linearly and quadrically generic.

    The search first splits A_[2] (normalized with the removed hyperplanes
    last among the coordinate ones) into rows avoiding the removed
    coordinates, and picks a maximal independent column set of that block.
    If that does not verify, all subsets of the target size are tried.
    """
    I = tuple(sorted(set(removed)))
    n = arr.n
    if len(I) != len(tuple(removed)) or any(i < 0 or i >= arr.d for i in I):
        raise ValueError(f"invalid removed set {tuple(removed)}")
    if len(I) > n - 1:
        raise ValueError("can remove at most n-1 hyperplanes")
    if verify_input:
        if arr.d < math.comb(n + 2, 2):
            raise ValueError("select_subarrangement needs d >= binom(n+2, 2)")
        if not check_linear_general_position(arr) or not check_quadric_general_position(arr):
            raise ValueError("arrangement is not in general position w.r.t. hyperplanes and quadrics")
    if not I:
        idx = tuple(range(arr.d))
        return Selection(I, idx, "identity", check_linear_general_position(arr), check_quadric_general_position(arr))

    nn = n - len(I)
    target = math.comb(nn + 2, 2)
    survivors = [i for i in range(arr.d) if i not in I]

    base_piv = first_independent_subset(arr, must_include=I)
    if base_piv is not None:
        lead = tuple(sorted(i for i in base_piv if i not in I))
        na = normalize(arr, lead + I)
        block = [(p, q) for p, q in pairs(n) if q <= nn]
        M = Matrix([[na.A[j, p] * na.A[j, q] for j in range(na.k)] for p, q in block], ncols=na.k)
        cols = independent_columns(M)
        if len(cols) == len(block):
            chosen = tuple(sorted(lead + tuple(na.others[c] for c in cols)))
            lin, quad = _restricted_checks(arr, I, chosen)
            if lin and quad:
                return Selection(I, chosen, "laplace", lin, quad)

    for chosen in combinations(survivors, target):
        lin, quad = _restricted_checks(arr, I, chosen)
        if lin and quad:
            return Selection(I, chosen, "exhaustive", lin, quad)
    return Selection(I, None, "failed", alarm=True)
