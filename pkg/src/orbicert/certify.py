"""Thresholds and the stratified hyperbolicity certificate."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Sequence

from .arrangement import (
    INF,
    Arrangement,
    check_linear_general_position,
    check_quadric_general_position,
    normalize,
    restrict,
    select_subarrangement,
)
from .exactalg import default_prime, format_rational
from .fermat import build_cover
from .differentials import PreconditionError, baselocus_evidence

PASS, FAIL, EVIDENCE, INCOMPLETE = "pass", "fail", "evidence-only", "incomplete"
EXIT_CODES = {PASS: 0, FAIL: 1, INCOMPLETE: 3}


def thresholds(n: int, m: int | None = None) -> dict:
    if n < 2:
        raise ValueError("thresholds need n >= 2")
    out = {"n": n, "d_quadric": math.comb(n + 2, 2), "m_min": 2 * n + 2, "c_floor": n}
    if m is not None:
        if m < 3:
            raise ValueError("the bigness bound needs m >= 3")
        exact = 2 * n * (Fraction(2 * n, m - 2) + 1)
        out["m"] = m
        out["d_big_exact"] = format_rational(exact)
        out["d_big"] = math.ceil(exact)
    return out


@dataclass(frozen=True)
class OrbifoldDivisor:
    arrangement: Arrangement

    def __post_init__(self):
        if self.arrangement.multiplicities is None:
            raise ValueError("an orbifold divisor needs multiplicities")

    @property
    def multiplicities(self) -> tuple:
        return self.arrangement.multiplicities

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1) if m == INF else 1 - Fraction(1, m) for m in self.multiplicities)

    @property
    def min_multiplicity(self):
        return min(self.multiplicities)


@dataclass(frozen=True)
class Stratum:
    removed: tuple[int, ...]
    dimension: int
    survivors: tuple[int, ...]
    arrangement: Arrangement | None
    multiplicities: tuple | None
    merged: tuple[tuple[int, int], ...] = ()


def restrict_to_stratum(arr: Arrangement, removed: Sequence[int]) -> Stratum:
    I = tuple(sorted(set(removed)))
    if len(I) > arr.n:
        raise ValueError(f"|I| = {len(I)} exceeds n = {arr.n}")
    if not I:
        return Stratum((), arr.n, tuple(range(arr.d)), arr, arr.multiplicities)
    res = restrict(arr, I)
    sub = res.arrangement
    return Stratum(I, arr.n - len(I), res.survivors, sub, None if sub is None else sub.multiplicities, res.merged)


# --- certificate tree ---------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float) and x == INF:
        return "inf"
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Certificate:
    name: str
    verdict: str
    reason: str = ""
    inputs: dict = field(default_factory=dict)
    witness: object = None
    provenance: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    def add(self, child: Certificate) -> Certificate:
        self.children.append(child)
        return child

    def settle(self) -> str:
        """Fold children into this node; evidence-only children are advisory."""
        vs = [c.settle() for c in self.children]
        binding = [v for v in vs if v != EVIDENCE]
        if self.verdict in (FAIL, INCOMPLETE, EVIDENCE) or not binding:
            return self.verdict
        if FAIL in binding:
            self.verdict = FAIL
        elif INCOMPLETE in binding:
            self.verdict = INCOMPLETE
        else:
            self.verdict = PASS
        return self.verdict

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.verdict, 1)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "reason": self.reason,
            "inputs": _jsonable(self.inputs),
            "witness": _jsonable(self.witness),
            "provenance": _jsonable(self.provenance),
            "children": [c.to_dict() for c in self.children],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def find(self, name: str) -> Certificate | None:
        return next((c for c in self.walk() if c.name == name), None)

    def failures(self) -> list[Certificate]:
        return [c for c in self.walk() if c.verdict == FAIL and not c.children]


def arrangement_record(arr: Arrangement) -> dict:
    return {
        "n": arr.n,
        "covectors": [[format_rational(x) for x in v] for v in arr.covectors],
        "multiplicities": None if arr.multiplicities is None else [_jsonable(m) for m in arr.multiplicities],
    }


def input_hash(arr: Arrangement) -> str:
    blob = json.dumps(arrangement_record(arr), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _node(name: str, ok: bool, reason: str, **kw) -> Certificate:
    return Certificate(name, PASS if ok else FAIL, reason, **kw)


def _stratum_name(I: tuple[int, ...]) -> str:
    return "stratum[" + ",".join(map(str, I)) + "]"


def _evidence(arr: Arrangement, sel_idx, I, nn: int, prime, samples: int, seed: int) -> Certificate:
    m_eval = 2 * nn + 2
    prov = {"prime": prime if prime is not None else default_prime(m_eval), "seed": seed, "trials": samples}
    res = restrict(arr, I, among=sel_idx)
    node = Certificate("baselocus-evidence", EVIDENCE, inputs={"m": m_eval, "dimension": nn}, provenance=prov)
    try:
        cov = build_cover(normalize(res.arrangement), m_eval)
        rep = baselocus_evidence(cov, prov["prime"], samples, seed)
    except (PreconditionError, ValueError) as exc:
        node.reason = f"not run: {exc}"
        return node
    node.reason = rep.note
    node.witness = {k: v for k, v in rep.as_dict().items() if k not in ("note", "prime", "seed", "samples")}
    return node


def certify_hyperbolicity(
    arr: Arrangement,
    with_evidence: bool = False,
    prime: int | None = None,
    samples: int = 100,
    seed: int = 0,
    limit: int = 10**4,
) -> Certificate:
    """Check the hypotheses of the stratified hyperbolicity induction.

    For each stratum I with |I| < n (lexicographic), the survivors restricted to
    the intersection of the H_i, i in I, must contain a subarrangement in linear
    and quadric general position of size >= binom(n-|I|+2, 2). Every induced
    multiplicity must reach 2(n-|I|)+2. Mixed multiplicities are lowered to the
    minimum; infinite ones (logarithmic components) satisfy every threshold.
    """
    n, d = arr.n, arr.d
    if arr.multiplicities is None:
        raise ValueError("certify_hyperbolicity needs multiplicities")
    div = OrbifoldDivisor(arr)
    root = Certificate(
        "hyperbolicity",
        PASS,
        inputs={
            "input_sha256": input_hash(arr),
            "n": n,
            "d": d,
            "multiplicities": list(arr.multiplicities),
            "with_evidence": with_evidence,
            "strata_limit": limit,
        },
        provenance={"prime": prime, "seed": seed, "trials": samples} if with_evidence else {},
    )
    root.add(
        Certificate(
            "orbifold-divisor",
            PASS,
            "coefficients 1 - 1/m_i",
            witness={"coefficients": list(div.coefficients), "lowered_multiplicity": div.min_multiplicity},
        )
    )

    gp = root.add(Certificate("general-position", PASS))
    t = thresholds(n) if n >= 2 else {"d_quadric": math.comb(n + 2, 2)}
    lin = check_linear_general_position(arr)
    gp.add(_node("linear", bool(lin), lin.reason, witness=lin.witness))
    quad = check_quadric_general_position(arr)
    gp.add(_node("quadric", bool(quad), quad.reason, inputs={"d_quadric": t["d_quadric"]}))
    if not (lin and quad):
        root.add(Certificate("strata", FAIL, "not examined: the arrangement is not in general position"))
        root.settle()
        return root

    strata = root.add(Certificate("strata", PASS))
    all_I = (I for size in range(n) for I in combinations(range(d), size))
    examined = list(islice(all_I, limit + 1))
    truncated = len(examined) > limit
    for I in examined[:limit]:
        nn = n - len(I)
        node = strata.add(Certificate(_stratum_name(I), PASS, inputs={"removed": list(I), "dimension": nn}))
        try:
            st = restrict_to_stratum(arr, I)
            sel = select_subarrangement(arr, I, verify_input=False)
        except ValueError as exc:
            node.add(Certificate("selection", FAIL, str(exc), witness=list(I)))
            continue
        need_d = math.comb(nn + 2, 2)
        node.add(
            _node(
                "selection",
                sel.indices is not None,
                f"method {sel.method}" + ("; soundness alarm: no subarrangement found" if sel.alarm else ""),
                witness=None if sel.indices is None else list(sel.indices),
            )
        )
        if sel.indices is None:
            continue
        size = len(sel.indices)
        node.add(_node("degree", size >= need_d, f"{size} selected, need {need_d}", witness={"selected": size}))
        need_m = 2 * nn + 2
        low = [(i, m) for i, m in zip(st.survivors, st.multiplicities) if m < need_m]
        node.add(
            _node(
                "multiplicity",
                not low,
                f"all induced m_i >= {need_m}" if not low else f"{len(low)} induced m_i below {need_m}",
                witness=None if not low else {"stratum": list(I), "hyperplanes": [i for i, _ in low], "multiplicities": [m for _, m in low]},
            )
        )
        node.add(_node("linear", bool(sel.linear), sel.linear.reason))
        node.add(_node("quadric", bool(sel.quadric), sel.quadric.reason))
        if with_evidence:
            node.add(_evidence(arr, sel.indices, I, nn, prime, samples, seed))
    if truncated:
        strata.add(Certificate("enumeration-limit", INCOMPLETE, f"more than {limit} strata; remaining strata not examined"))
    strata.inputs = {"examined": min(len(examined), limit), "truncated": truncated}

    root.settle()
    root.add(
        Certificate(
            "conclusion",
            EVIDENCE,
            "implication, not computation: when every stratum passes, the orbifold Brody criterion with the "
            "induction on strata yields Kobayashi hyperbolicity of the pair (P^n, Delta)"
            if root.passed
            else "no implication: some checked hypothesis failed or was not examined",
        )
    )
    return root
