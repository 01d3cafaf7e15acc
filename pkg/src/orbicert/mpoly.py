"""Sparse polynomials in base variables z_0..z_N and fiber variables z_0'..z_N'.

A variable is an int: ``2*i`` is z_i, ``2*i + 1`` is z_i'. A monomial is a
tuple of ``(var, exponent)`` pairs sorted by var, never holding a zero
exponent. Coefficients are Fractions, or ints mod p when ``modulus`` is set.

:class:`CoverIdealRewriter` reduces polynomials modulo the Fermat relations
and their derivatives (the tangent relations) in one affine chart.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactalg import Matrix, format_rational, parse_rational, to_fp

Monomial = tuple  # tuple[tuple[int, int], ...]

ONE: Monomial = ()


def base(i: int) -> int:
    return 2 * i


def fiber(i: int) -> int:
    return 2 * i + 1


def var_index(v: int) -> int:
    return v >> 1


def is_fiber(v: int) -> bool:
    return bool(v & 1)


def var_name(v: int) -> str:
    return f"z{v >> 1}" + ("'" if v & 1 else "")


def parse_var(name: str) -> int:
    name = name.strip()
    prime = name.endswith("'")
    core = name[:-1] if prime else name
    if not core.startswith("z") or not core[1:].isdigit():
        raise ValueError(f"bad variable name {name!r}")
    i = int(core[1:])
    return fiber(i) if prime else base(i)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def mono_exp(a: Monomial, v: int) -> int:
    for w, e in a:
        if w == v:
            return e
    return 0


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b if b divides a, else None."""
    d = dict(a)
    for v, e in b:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def _order_key(mono: Monomial):
    # degree-lex over z_0..z_N, z_0'..z_N'; larger exponents sort first
    return (mono_degree(mono), tuple(sorted((v & 1, v >> 1, -e) for v, e in mono)))


class MPoly:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero coefficient."""

    __slots__ = ("terms", "modulus")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, modulus: int | None = None):
        self.modulus = modulus
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = self._coerce(c)
                if c:
                    clean[mono] = c
        self.terms: dict[Monomial, object] = clean

    def _coerce(self, c):
        if self.modulus is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            return to_fp(c, self.modulus)
        return int(c) % self.modulus

    @classmethod
    def _raw(cls, terms: dict, modulus: int | None) -> MPoly:
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.modulus = modulus
        return obj

    # constructors
    @classmethod
    def const(cls, c, modulus: int | None = None) -> MPoly:
        return cls({ONE: c}, modulus)

    @classmethod
    def var(cls, v: int, modulus: int | None = None) -> MPoly:
        return cls({((v, 1),): 1}, modulus)

    @classmethod
    def z(cls, i: int, modulus: int | None = None) -> MPoly:
        return cls.var(base(i), modulus)

    @classmethod
    def zp(cls, i: int, modulus: int | None = None) -> MPoly:
        return cls.var(fiber(i), modulus)

    @classmethod
    def zero(cls, modulus: int | None = None) -> MPoly:
        return cls._raw({}, modulus)

    # basic protocol
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.modulus)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.modulus))

    def _check(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.modulus != self.modulus:
                raise ValueError("scalar field mismatch between polynomials")
            return other
        return MPoly.const(other, self.modulus)

    def _norm(self, c):
        return c if self.modulus is None else c % self.modulus

    def __add__(self, other) -> MPoly:
        other = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = self._norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MPoly._raw(out, self.modulus)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly._raw({m: self._norm(-c) for m, c in self.terms.items()}, self.modulus)

    def __sub__(self, other) -> MPoly:
        return self + (-self._check(other))

    def __rsub__(self, other) -> MPoly:
        return self._check(other) - self

    def __mul__(self, other) -> MPoly:
        other = self._check(other)
        out: dict = {}
        p = self.modulus
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                out[m] = v if p is None else v % p
        return MPoly._raw({m: c for m, c in out.items() if c}, p)

    __rmul__ = __mul__

    def scale(self, c) -> MPoly:
        c = self._coerce(c)
        if not c:
            return MPoly.zero(self.modulus)
        return MPoly._raw({m: self._norm(x * c) for m, x in self.terms.items()}, self.modulus)

    def __pow__(self, e: int) -> MPoly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1, self.modulus)
        b = self
        while e:
            if e & 1:
                result = result * b
            e >>= 1
            if e:
                b = b * b
        return result

    def mul_monomial(self, mono: Monomial, c=1) -> MPoly:
        c = self._coerce(c)
        return MPoly._raw({mono_mul(m, mono): self._norm(x * c) for m, x in self.terms.items()}, self.modulus)

    # structure
    def variables(self) -> set[int]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, v: int) -> int:
        return max((mono_exp(m, v) for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: _order_key(t[0]))

    def substitute(self, mapping: Mapping[int, MPoly | int | Fraction]) -> MPoly:
        """Replace each variable in ``mapping`` by the given polynomial."""
        subs = {v: self._check(q) for v, q in mapping.items()}
        cache: dict[tuple[int, int], MPoly] = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = subs[v] ** e
            return cache[key]

        acc: dict = {}
        for mono, c in self.terms.items():
            keep = tuple((v, e) for v, e in mono if v not in subs)
            factor = MPoly._raw({keep: c}, self.modulus)
            for v, e in mono:
                if v in subs:
                    factor = factor * power(v, e)
            for m, x in factor.terms.items():
                acc[m] = self._norm(acc.get(m, 0) + x)
        return MPoly._raw({m: c for m, c in acc.items() if c}, self.modulus)

    def evaluate(self, point: Mapping[int, int], p: int | None = None):
        """Evaluate at ``point`` (var -> value). Over F_p when ``p`` is given."""
        p = p if p is not None else self.modulus
        total = 0 if p is not None else Fraction(0)
        for mono, c in self.terms.items():
            if p is not None:
                t = to_fp(c, p) if isinstance(c, Fraction) else c % p
                for v, e in mono:
                    t = t * pow(point[v], e, p) % p
                total = (total + t) % p
            else:
                t = Fraction(c)
                for v, e in mono:
                    t *= Fraction(point[v]) ** e
                total += t
        return total

    def reduce_mod(self, p: int) -> MPoly:
        if self.modulus is not None:
            if self.modulus != p:
                raise ValueError("already over a different prime field")
            return self
        return MPoly({m: c for m, c in self.terms.items()}, p)

    def __repr__(self):
        return f"MPoly({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            cs = format_rational(c) if self.modulus is None else str(c)
            body = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in mono)
            if not body:
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append("-" + body)
            else:
                parts.append(f"{cs}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    # serialization
    def to_records(self) -> list[dict]:
        return [
            {
                "exponents": {var_name(v): e for v, e in mono},
                "coefficient": format_rational(c) if self.modulus is None else str(c),
            }
            for mono, c in self.sorted_terms()
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping], modulus: int | None = None) -> MPoly:
        terms: dict = {}
        for rec in records:
            mono = tuple(sorted((parse_var(k), int(e)) for k, e in rec["exponents"].items() if int(e)))
            c = parse_rational(str(rec["coefficient"]))
            terms[mono] = terms.get(mono, 0) + c
        return cls(terms, modulus)


def w(i: int, j: int, modulus: int | None = None) -> MPoly:
    """w_{i,j} = z_i z_j' - z_i' z_j."""
    if i == j:
        return MPoly.zero(modulus)
    return MPoly(
        {tuple(sorted(((base(i), 1), (fiber(j), 1)))): 1, tuple(sorted(((fiber(i), 1), (base(j), 1)))): -1},
        modulus,
    )


def dehomogenize(f: MPoly, chart: int) -> MPoly:
    """Set z_c = 1 and z_c' = 0 (the chart convention)."""
    out: dict = {}
    zc, zcp = base(chart), fiber(chart)
    p = f.modulus
    for mono, c in f.terms.items():
        if any(v == zcp for v, _ in mono):
            continue
        m = tuple((v, e) for v, e in mono if v != zc)
        v = out.get(m, 0) + c
        out[m] = v if p is None else v % p
    return MPoly._raw({m: c for m, c in out.items() if c}, p)


def valuation(f: MPoly, v: int) -> int:
    """Largest e with v^e dividing every term; raises on the zero polynomial."""
    if f.is_zero():
        raise ValueError("valuation of the zero polynomial is infinite")
    return min(mono_exp(m, v) for m in f.terms)


def det_poly(rows: Sequence[Sequence[MPoly]]) -> MPoly:
    """Determinant of a small square matrix of polynomials by Laplace expansion."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("det_poly needs a square matrix")
    if n == 0:
        return MPoly.const(1)
    modulus = rows[0][0].modulus
    memo: dict[tuple[int, ...], MPoly] = {}

    def expand(r: int, cols: tuple[int, ...]) -> MPoly:
        if r == n:
            return MPoly.const(1, modulus)
        if cols in memo:
            return memo[cols]
        total = MPoly.zero(modulus)
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            sub = expand(r + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[cols] = total
        return total

    return expand(0, tuple(range(n)))


# --- the cover ideal ----------------------------------------------------------


class _Rule:
    """Elimination rule for one variable u: u^m -> F and u^{m-1} u' -> G."""

    __slots__ = ("index", "F", "G", "fermat_lhs", "tangent_lhs")

    def __init__(self, index: int, m: int, F: MPoly, G: MPoly):
        self.index = index
        self.F = F
        self.G = G
        self.fermat_lhs: Monomial = ((base(index), m),)
        tl = [(base(index), m - 1), (fiber(index), 1)] if m > 1 else [(fiber(index), 1)]
        self.tangent_lhs: Monomial = tuple(sorted(tl))


class CoverIdealRewriter:
    """Rewriting system for the Fermat cover relations in the affine chart ``chart``.

    Homogeneous relations, for j = 1..k:
        Z_{n+j}^m = sum_i a_i^j Z_i^m
        Z_{n+j}^{m-1} Z_{n+j}' = sum_i a_i^j Z_i^{m-1} Z_i'
    In chart c (z_c = 1, z_c' = 0) with c <= n the rules eliminate z_{n+j}.
    In chart c = n+j0 the relation j0 has no leading extra variable, so it is
    solved for the base variable ``pivot`` (largest i with a_i^{j0} != 0).
    Tangent rules always take priority over Fermat rules.
    """

    def __init__(self, n: int, k: int, m: int, A: Matrix | Sequence[Sequence], chart: int = 0, modulus: int | None = None):
        if m < 2:
            raise ValueError("cover ideal needs m >= 2")
        A = A if isinstance(A, Matrix) else Matrix(A)
        if A.shape != (k, n + 1) and not (k == 0 and A.nrows == 0):
            raise ValueError(f"A must be {k}x{n + 1}, got {A.shape}")
        N = n + k
        if not 0 <= chart <= N:
            raise ValueError(f"chart {chart} outside 0..{N}")
        self.n, self.k, self.m, self.A, self.chart = n, k, m, A, chart
        self.modulus = modulus
        self.pivot: int | None = None

        def rhs(j: int, skip: int | None = None) -> tuple[MPoly, MPoly]:
            F = MPoly.zero(modulus)
            G = MPoly.zero(modulus)
            for i in range(n + 1):
                if i == skip:
                    continue
                a = A[j - 1, i]
                if a:
                    F = F + (MPoly.z(i, modulus) ** m).scale(a)
                    G = G + (MPoly.z(i, modulus) ** (m - 1) * MPoly.zp(i, modulus)).scale(a)
            return dehomogenize(F, chart), dehomogenize(G, chart)

        rules = []
        own = chart - n if chart > n else None
        for j in range(k, 0, -1):  # j descending
            if j == own:
                continue
            F, G = rhs(j)
            rules.append(_Rule(n + j, m, F, G))
        if own is not None:
            row = [A[own - 1, i] for i in range(n + 1)]
            piv = max((i for i in range(n + 1) if row[i]), default=None)
            if piv is None:
                raise ValueError("relation of the chart variable is identically zero")
            self.pivot = piv
            F, G = rhs(own, skip=piv)
            inv = 1 / Fraction(row[piv])
            # 1 = sum a_i z_i^m  =>  z_piv^m = (1 - sum_{i != piv} a_i z_i^m) / a_piv
            F = (MPoly.const(1, modulus) - F).scale(inv)
            G = (-G).scale(inv)
            rules.append(_Rule(piv, m, F, G))
        self.rules: tuple[_Rule, ...] = tuple(rules)

    @property
    def eliminated(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.rules)

    def relations(self) -> list[tuple[str, int, MPoly]]:
        """The chart forms of all generators, each expected to reduce to zero."""
        out = []
        for r in self.rules:
            u = MPoly.z(r.index, self.modulus)
            out.append(("fermat", r.index, u**self.m - r.F))
            out.append(("tangent", r.index, u ** (self.m - 1) * MPoly.zp(r.index, self.modulus) - r.G))
        return out

    def _step(self, mono: Monomial, rules: Sequence[_Rule]) -> MPoly | None:
        for r in rules:
            q = mono_div(mono, r.tangent_lhs)
            if q is not None:
                return r.G.mul_monomial(q)
        for r in rules:
            q = mono_div(mono, r.fermat_lhs)
            if q is not None:
                return r.F.mul_monomial(q)
        return None

    def normal_form(self, f: MPoly, rng: random.Random | None = None, fermat_first: bool = False) -> MPoly:
        """Rewrite ``f`` to a fixpoint.

        Canonical strategy: rules for j descending, the leftmost (deg-lex
        smallest) reducible monomial first. With ``rng`` the monomial and
        the rule order are shuffled on every step (tangent priority kept
        unless ``fermat_first``).
        """
        if f.modulus != self.modulus:
            raise ValueError("scalar field mismatch with the rewriter")
        p = self.modulus
        terms = dict(f.terms)
        done: dict = {}
        rules = list(self.rules)
        while terms:
            if rng is None:
                mono = min(terms, key=_order_key)
            else:
                mono = rng.choice(list(terms))
                rules = list(self.rules)
                rng.shuffle(rules)
            c = terms.pop(mono)
            if fermat_first:
                repl = self._step_fermat_first(mono, rules)
            else:
                repl = self._step(mono, rules)
            if repl is None:
                v = done.get(mono, 0) + c
                v = v if p is None else v % p
                if v:
                    done[mono] = v
                else:
                    done.pop(mono, None)
                continue
            for m2, c2 in repl.terms.items():
                if m2 in done:
                    # an irreducible monomial stays irreducible
                    v = done[m2] + c * c2
                    v = v if p is None else v % p
                    if v:
                        done[m2] = v
                    else:
                        del done[m2]
                    continue
                v = terms.get(m2, 0) + c * c2
                v = v if p is None else v % p
                if v:
                    terms[m2] = v
                else:
                    terms.pop(m2, None)
        return MPoly._raw(done, p)

    def _step_fermat_first(self, mono: Monomial, rules: Sequence[_Rule]) -> MPoly | None:
        for r in rules:
            q = mono_div(mono, r.fermat_lhs)
            if q is not None:
                return r.F.mul_monomial(q)
        for r in rules:
            q = mono_div(mono, r.tangent_lhs)
            if q is not None:
                return r.G.mul_monomial(q)
        return None

    def saturating_multiplier(self, f: MPoly) -> Monomial:
        """u^{(m-1) d_u} for every eliminated u, d_u = degree of f in u'."""
        out = []
        for r in self.rules:
            d = f.degree_in(fiber(r.index))
            if d:
                out.append((base(r.index), (self.m - 1) * d))
        return tuple(sorted(out))

    def is_zero_mod_ideal(self, f: MPoly) -> bool:
        """Exact test that ``f`` vanishes on the cover's tangent variety over V.

        The eliminated variables are units on V, so ``f`` is first multiplied
        by enough of their powers that every u' is removable by a tangent
        rule; the remaining normal form is unique (free basis u^e, e < m).
        """
        g = f.mul_monomial(self.saturating_multiplier(f))
        return self.normal_form(g).is_zero()
