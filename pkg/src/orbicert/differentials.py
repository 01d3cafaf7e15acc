"""The determinantal twisted symmetric differential on a Fermat cover.

Everything is first built from the homogeneous Plücker coordinates
W_{ij} = Z_i Z_j' - Z_i' Z_j and then restricted to a chart by setting
Z_c = 1, Z_c' = 0. In chart c this gives y_i y_j' - y_i' y_j, because
W_{ij} / Z_c^2 is exactly that chart's w_{ij}.

The matrix M has rows r = 1..n and columns i = 0..n, with entries
a_i^{j_r - n} W_{i, j_r}. On the cover its columns weighted by Z_i^{m-1} sum to
zero. Cramer's rule then ties the minors det_{c-bar}(M) together, which is where
the extra vanishing of order m - 1 comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .arrangement import build_A2, pairs
from .exactalg import Matrix, default_prime, minor, rank, to_fp
from .fermat import CoverPoint, FermatCover, iter_points
from .mpoly import CoverIdealRewriter, MPoly, base, dehomogenize, det_poly, valuation, w


class PreconditionError(ValueError):
    pass


def _check_rows(cov: FermatCover, rows: Sequence[int]) -> tuple[int, ...]:
    rows = tuple(rows)
    n, N = cov.n, cov.N
    if cov.k < n:
        raise PreconditionError(f"need k >= n (k={cov.k}, n={n})")
    if len(rows) != n or len(set(rows)) != n:
        raise PreconditionError(f"need {n} distinct rows")
    if any(j < n + 1 or j > N for j in rows):
        raise PreconditionError(f"rows must lie in {n + 1}..{N}")
    return rows


def default_rows(cov: FermatCover) -> tuple[int, ...]:
    return tuple(range(cov.n + 1, 2 * cov.n + 1))


def matrix_M(cov: FermatCover, rows: Sequence[int]) -> list[list[MPoly]]:
    n = cov.n
    return [[w(i, j).scale(cov.a(j - n, i)) for i in range(n + 1)] for j in rows]


def kernel_vector(cov: FermatCover, chart: int) -> list[MPoly]:
    """Weights killing the columns of M (or of the bordered matrix for extra charts)."""
    n, m = cov.n, cov.m
    v = [MPoly.z(i) ** (m - 1) for i in range(n + 1)]
    if chart > n:
        v.append(-(MPoly.z(chart) ** m))
    return v


def bordered_matrix(cov: FermatCover, rows: Sequence[int], chart: int) -> list[list[MPoly]]:
    """M with the border row (a_0^j Z_0 .. a_n^j Z_n | 1) on top, j = chart - n."""
    n = cov.n
    j = chart - n
    top = [MPoly.z(i).scale(cov.a(j, i)) for i in range(n + 1)] + [MPoly.const(1)]
    body = [r + [MPoly.zero()] for r in matrix_M(cov, rows)]
    return [top] + body


def _drop_column(mat: list[list[MPoly]], c: int) -> list[list[MPoly]]:
    return [r[:c] + r[c + 1 :] for r in mat]


def sigma_homogeneous(cov: FermatCover, rows: Sequence[int], chart: int = 0) -> MPoly:
    """Homogeneous numerator P_c; the chart-c expression is P_c at Z_c = 1, Z_c' = 0.

    chart 0:      det_{0-bar}(M)
    chart c<=n:   (-1)^c det_{c-bar}(M)
    chart n+j:    det of the bordered matrix without its last column
    All three agree as sections: P_0 / Z_0^{m-1} = P_c / Z_c^{m-1} = P_{n+j} / Z_{n+j}^m.
    """
    rows = _check_rows(cov, rows)
    n = cov.n
    if chart < 0 or chart > cov.N:
        raise PreconditionError(f"chart {chart} outside 0..{cov.N}")
    if chart <= n:
        D = det_poly(_drop_column(matrix_M(cov, rows), chart))
        return D if chart % 2 == 0 else -D
    return det_poly(_drop_column(bordered_matrix(cov, rows, chart), n + 1))


def generate_sigma(cov: FermatCover, rows: Sequence[int] | None = None, chart: int = 0) -> MPoly:
    rows = default_rows(cov) if rows is None else rows
    return dehomogenize(sigma_homogeneous(cov, rows, chart), chart)


@dataclass
class TwistedSection:
    cover: FermatCover
    rows: tuple[int, ...]
    charts: dict[int, MPoly] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.cover.n

    @property
    def twist(self) -> int:
        """Exponent t of Z_c^t attached to every chart expression."""
        return 2 * self.cover.n + 1 - self.cover.m

    def expression(self, c: int) -> MPoly:
        if c not in self.charts:
            self.charts[c] = generate_sigma(self.cover, self.rows, c)
        return self.charts[c]


def generate_section(cov: FermatCover, rows: Sequence[int] | None = None, charts: Sequence[int] | None = None) -> TwistedSection:
    rows = _check_rows(cov, default_rows(cov) if rows is None else rows)
    charts = range(cov.N + 1) if charts is None else charts
    sec = TwistedSection(cov, rows)
    for c in charts:
        sec.expression(c)
    return sec


# --- chart transitions --------------------------------------------------------


def to_chart0(expr: MPoly, chart: int) -> tuple[MPoly, int]:
    """Rewrite a chart-``chart`` expression in chart-0 variables as N / z_c^E.

    y_i = z_i / z_c and y_i' = (z_c z_i' - z_c' z_i) / z_c^2, with z_0 = 1,
    z_0' = 0. Returns (N, E).
    """
    if chart == 0:
        return expr, 0
    zc, zcp = MPoly.z(chart), MPoly.zp(chart)
    denom_deg = {mono: sum(2 * e if v & 1 else e for v, e in mono) for mono in expr.terms}
    E = max(denom_deg.values(), default=0)
    subs = {}
    for v in expr.variables():
        i = v >> 1
        if v & 1:
            subs[v] = zc * MPoly.zp(i) - zcp * MPoly.z(i)
        else:
            subs[v] = MPoly.z(i)
    out = MPoly.zero()
    for mono, c in expr.terms.items():
        t = MPoly({mono: c}).substitute(subs) * zc ** (E - denom_deg[mono])
        out = out + t
    return dehomogenize(out, 0), E


def compatibility_residual(sec: TwistedSection, c1: int, c2: int) -> MPoly:
    """Chart-0 polynomial that vanishes on the cover iff the two charts agree.

    The section reads sigma_c (x) Z_c^t on chart c, so in chart 0 we need
    N1 z_{c1}^{t-E1} = N2 z_{c2}^{t-E2}; negative powers are moved across.
    """
    t = sec.twist
    N1, E1 = to_chart0(sec.expression(c1), c1)
    N2, E2 = to_chart0(sec.expression(c2), c2)
    left = {c1: t - E1} if c1 else {}
    right = {c2: t - E2} if c2 else {}
    for c in set(left) | set(right):
        lo = min(left.get(c, 0), right.get(c, 0))
        left[c] = left.get(c, 0) - lo
        right[c] = right.get(c, 0) - lo
    for c, e in left.items():
        N1 = N1 * MPoly.z(c) ** e
    for c, e in right.items():
        N2 = N2 * MPoly.z(c) ** e
    return N1 - N2


def verify_chart_compatibility(sec: TwistedSection, c1: int, c2: int, rewriter: CoverIdealRewriter | None = None) -> bool:
    if c1 == c2:
        return True
    cov = sec.cover
    R = rewriter or CoverIdealRewriter(cov.n, cov.k, cov.m, cov.A, chart=0)
    return R.is_zero_mod_ideal(compatibility_residual(sec, c1, c2))


def transition_factor(cov: FermatCover, c1: int, c2: int) -> tuple[MPoly, MPoly, int]:
    """(numerator, denominator, sign) with sigma = sign * num/den * det_{c2-bar}.

    The determinant is taken from the matrix used for chart c2 (M, or the
    bordered matrix when c2 is an extra coordinate); c1 indexes a column of it.
    """
    n = cov.n
    v = kernel_vector(cov, c2)
    c2_col = c2 if c2 <= n else n + 1
    # (-1)^c det_{c-bar} / v_c is constant over c
    sign = (-1) ** (c1 + c2_col)
    return v[c1], v[c2_col], sign


def extra_vanishing_order(sec: TwistedSection, c1: int, c2: int, check: bool = True) -> int:
    """Order of vanishing along Z_{c1} of sigma written through chart c2's minor.

    Read off the valuation in z_{c1} of (v_{c1} * det_{c2-bar}) minus that of
    v_{c2}, with v the Cramer weight vector. For c1 = 0 and c2 in 1..n this is
    z_0^{m-1}/z_{c2}^{m-1}; for c2 = n+j it is z_0^{m-1}/z_{n+j}^m.
    """
    cov = sec.cover
    n = cov.n
    if c1 == c2:
        return 0
    if c1 > n:
        raise PreconditionError("extra vanishing is read along a base coordinate (c1 <= n)")
    if check and not verify_chart_compatibility(sec, c1, c2):
        raise PreconditionError(f"charts {c1} and {c2} are not compatible")
    num, den, _ = transition_factor(cov, c1, c2)
    if c2 <= n:
        D = det_poly(_drop_column(matrix_M(cov, sec.rows), c2))
    else:
        D = det_poly(_drop_column(bordered_matrix(cov, sec.rows, c2), n + 1))
    if D.is_zero():
        raise PreconditionError("zero expression")
    v = base(c1)
    return valuation(num * D, v) - valuation(den, v)


# --- identities -------------------------------------------------------------------


def cramer_row_sums(cov: FermatCover, rows: Sequence[int], A: Matrix | None = None) -> list[MPoly]:
    """sum_i a_i^{j-n} w_{i,j} z_i^{m-1} in chart 0, one per row j."""
    n, m = cov.n, cov.m
    A = cov.A if A is None else A
    out = []
    for j in rows:
        s = MPoly.zero()
        for i in range(n + 1):
            s = s + (w(i, j) * MPoly.z(i) ** (m - 1)).scale(A[j - n - 1, i])
        out.append(dehomogenize(s, 0))
    return out


def verify_cramer_annihilation(cov: FermatCover, rows: Sequence[int] | None = None, A: Matrix | None = None) -> bool:
    """Columns of M weighted by z_i^{m-1} sum to zero modulo the cover ideal.

    ``A`` overrides the coefficients used in the identity only (not the cover).
    """
    rows = _check_rows(cov, default_rows(cov) if rows is None else rows)
    R = CoverIdealRewriter(cov.n, cov.k, cov.m, cov.A, chart=0)
    return all(R.is_zero_mod_ideal(f) for f in cramer_row_sums(cov, rows, A))


def matrix_B(cov: FermatCover, chart: int = 0) -> list[list[MPoly]]:
    """b_i^j = a_i^j (z_i z_{n+j}' - z_i' z_{n+j})."""
    n = cov.n
    return [[dehomogenize(w(i, n + j).scale(cov.a(j, i)), chart) for i in range(n + 1)] for j in range(1, cov.k + 1)]


def matrix_W(n: int, m: int | None = None, chart: int = 0) -> list[list[MPoly]]:
    """binom(n+1,2) x (n+1); row (p,q) is w_{pq}(E_p - E_q).

    With ``m`` given, row (p,q) is instead w_{pq}(z_q^{m-1} E_p - z_p^{m-1} E_q),
    the factor that actually appears once the Fermat relations have degree m.
    That equals diag(z_p^{m-1} z_q^{m-1}) W diag(z_i^{1-m}), so on the
    interior it has the same rank as W.
    """
    out = []
    for p, q in pairs(n):
        row = [MPoly.zero() for _ in range(n + 1)]
        wpq = w(p, q)
        if m is None:
            row[p], row[q] = wpq, -wpq
        else:
            row[p] = wpq * MPoly.z(q) ** (m - 1)
            row[q] = -(wpq * MPoly.z(p) ** (m - 1))
        out.append([dehomogenize(x, chart) for x in row])
    return out


@dataclass(frozen=True)
class BWResult:
    holds: bool
    pairs: dict  # (j, i1) -> bool

    def __bool__(self):
        return self.holds


def verify_bw_factorization(cov: FermatCover, A2: Matrix | None = None, weighted: bool = True) -> BWResult:
    """z_{n+j}^{m-1} b_{i1}^j == (A_[2]^T W)[j, i1] modulo the cover ideal, all (j, i1).

    ``weighted=False`` tests the unweighted W instead. That form drops the
    z_q^{m-1} weights and so only survives in the column q = 0.
    """
    n, m, k = cov.n, cov.m, cov.k
    A2 = build_A2(cov.A, n) if A2 is None else A2
    R = CoverIdealRewriter(n, k, m, cov.A, chart=0)
    B = matrix_B(cov)
    W = matrix_W(n, m if weighted else None)
    P = pairs(n)
    res = {}
    for j in range(1, k + 1):
        zfac = dehomogenize(MPoly.z(n + j) ** (m - 1), 0)
        for i1 in range(n + 1):
            rhs = MPoly.zero()
            for r, _ in enumerate(P):
                coef = A2[r, j - 1]
                if coef and not W[r][i1].is_zero():
                    rhs = rhs + W[r][i1].scale(coef)
            res[(j, i1)] = R.is_zero_mod_ideal(zfac * B[j - 1][i1] - rhs)
    return BWResult(all(res.values()), res)


# --- pointwise rank arguments --------------------------------------------------------


class DegenerateTangent(ValueError):
    pass


@dataclass(frozen=True)
class RankWitness:
    bound: int
    rows: tuple[tuple[int, int], ...]  # pairs (p<q), ascending
    cols: tuple[int, ...]
    value: int  # the minor over F_p, nonzero
    anchor: int  # index i with z_i' != 0 playing the role of 1


def w_values(pt: CoverPoint, n: int) -> dict[tuple[int, int], int]:
    p = pt.p
    return {(a, b): (pt.z[a] * pt.zp[b] - pt.zp[a] * pt.z[b]) % p for a in range(n + 1) for b in range(n + 1)}


def W_at(pt: CoverPoint, n: int) -> Matrix:
    wv = w_values(pt, n)
    out = []
    for a, b in pairs(n):
        row = [0] * (n + 1)
        row[a], row[b] = wv[(a, b)], -wv[(a, b)]
        out.append(row)
    return Matrix(out, pt.p)


def B_at(cov: FermatCover, pt: CoverPoint) -> Matrix:
    p, n = pt.p, cov.n
    rows = []
    for j in range(1, cov.k + 1):
        e = n + j
        rows.append([to_fp(cov.a(j, i), p) * (pt.z[i] * pt.zp[e] - pt.zp[i] * pt.z[e]) for i in range(n + 1)])
    return Matrix(rows, p)


def rank_W_minor(pt: CoverPoint, n: int) -> RankWitness:
    """Nonzero n x n minor of W on columns 1..n at an interior point.

    Anchor on some i with z_i' != 0 (so w_{0,i} = z_i' != 0). For every
    other column c, z_c w_{0,i} = z_i w_{0,c} - z_0 w_{i,c} forces w_{0,c} or
    w_{i,c} to be nonzero; that row has a single entry among the columns
    other than the anchor, so the minor is triangular up to order.
    """
    if not pt.interior or any(x % pt.p == 0 for x in pt.z):
        raise PreconditionError("point must be interior")
    anchor = next((i for i in range(1, n + 1) if pt.zp[i] % pt.p), None)
    if anchor is None:
        raise DegenerateTangent("z_1' = ... = z_n' = 0: no tangent direction")
    wv = w_values(pt, n)
    chosen = [(0, anchor)]
    for c in range(1, n + 1):
        if c == anchor:
            continue
        if wv[(0, c)]:
            chosen.append((0, c))
        else:
            pr = (min(anchor, c), max(anchor, c))
            if not wv[pr]:
                raise ArithmeticError("identity z_c w_{0,i} = z_i w_{0,c} - z_0 w_{i,c} violated")
            chosen.append(pr)
    P = pairs(n)
    rows = tuple(sorted(chosen))
    cols = tuple(range(1, n + 1))
    value = minor(W_at(pt, n), [P.index(r) for r in rows], cols)
    if value == 0:
        raise ArithmeticError("witness minor vanished")
    return RankWitness(n, rows, cols, value, anchor)


@dataclass
class BaseLocusReport:
    n: int
    k: int
    m: int
    p: int
    seed: int
    samples: int
    draws: int = 0
    bw_exact: bool = False
    rank_bound_ok: int = 0
    rank_equal_ok: int = 0
    sigma_nonzero_ok: int = 0
    counterexamples: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    note: str = (
        "sampled evidence: at every sampled interior (point, tangent) pair rank B = rank W >= n, "
        "so the sigma-minors do not all vanish; a finite sample is not a proof"
    )

    @property
    def passed(self) -> bool:
        return (
            self.bw_exact
            and not self.counterexamples
            and self.rank_bound_ok == self.samples
            and self.rank_equal_ok == self.samples
            and self.sigma_nonzero_ok == self.samples
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "m": self.m,
            "prime": self.p,
            "seed": self.seed,
            "samples": self.samples,
            "draws": self.draws,
            "bw_factorization_exact": self.bw_exact,
            "rank_W_at_least_n": self.rank_bound_ok,
            "rank_B_equals_rank_W": self.rank_equal_ok,
            "some_sigma_minor_nonzero": self.sigma_nonzero_ok,
            "counterexamples": self.counterexamples,
            "passed": self.passed,
            "note": self.note,
        }


def baselocus_preconditions(cov: FermatCover) -> list[str]:
    n = cov.n
    fails = []
    if cov.m <= 2 * n + 1:
        fails.append(f"twist not negative: need m > 2n+1 = {2 * n + 1}, got m = {cov.m}")
    need = math.comb(n + 1, 2)
    r = rank(build_A2(cov.A, n))
    if r != need:
        fails.append(f"A_[2] not of full row rank: rank {r} < {need}")
    return fails


def baselocus_evidence(cov: FermatCover, p: int | None = None, samples: int = 100, seed: int = 0, budget: int | None = None, keep_witnesses: int = 5) -> BaseLocusReport:
    fails = baselocus_preconditions(cov)
    if fails:
        raise PreconditionError("; ".join(fails))
    n = cov.n
    p = default_prime(cov.m) if p is None else p
    rep = BaseLocusReport(n, cov.k, cov.m, p, seed, samples)
    rep.bw_exact = bool(verify_bw_factorization(cov))
    row_sets = list(combinations(range(cov.k), n))
    last_cols = list(range(1, n + 1))
    draws = 0
    it = iter_points(cov, p, seed, budget)
    for t in range(samples):
        pt = next(it)
        draws = pt.trial
        try:
            wit = rank_W_minor(pt, n)
        except (DegenerateTangent, ArithmeticError) as exc:
            rep.counterexamples.append({"sample": t, "z": list(pt.z), "zp": list(pt.zp), "error": str(exc)})
            continue
        rep.rank_bound_ok += 1
        if len(rep.witnesses) < keep_witnesses:
            rep.witnesses.append({"sample": t, "rows": [list(r) for r in wit.rows], "cols": list(wit.cols), "minor": wit.value})
        B = B_at(cov, pt)
        rW = rank(W_at(pt, n))
        if rank(B) == rW:
            rep.rank_equal_ok += 1
        else:
            rep.counterexamples.append({"sample": t, "z": list(pt.z), "zp": list(pt.zp), "error": "rank B != rank W"})
        if any(minor(B, rs, last_cols) for rs in row_sets):
            rep.sigma_nonzero_ok += 1
        else:
            rep.counterexamples.append({"sample": t, "z": list(pt.z), "zp": list(pt.zp), "error": "all sigma minors vanish"})
    rep.draws = draws
    return rep


def evaluate_in_chart(expr: MPoly, pt: CoverPoint, chart: int) -> int:
    return expr.evaluate(pt.in_chart(chart), pt.p)


def sampled_compatibility(sec: TwistedSection, chart: int, pt: CoverPoint) -> bool:
    """sigma_0(pt) == sigma_c(pt in chart c) * z_c^t over F_p."""
    p = pt.p
    lhs = evaluate_in_chart(sec.expression(0), pt, 0)
    rhs = evaluate_in_chart(sec.expression(chart), pt, chart)
    t = sec.twist
    zc = pt.z[chart]
    fac = pow(zc, t, p) if t >= 0 else pow(pow(zc, -1, p), -t, p)
    return lhs == rhs * fac % p
