"""Acceptance suite: one test per criterion, each recorded as a PASS/FAIL line
in the terminal summary."""

import json
import math
import random
import time
from fractions import Fraction

from orbicert.arrangement import (
    Arrangement,
    a2_equivalence_check,
    check_linear_general_position,
    check_quadric_general_position,
    normalize,
    restrict,
    select_subarrangement,
)
from orbicert.certify import FAIL, PASS, certify_hyperbolicity, thresholds
from orbicert.cli import dispatch
from orbicert.differentials import baselocus_evidence, extra_vanishing_order, generate_section
from orbicert.exactalg import Matrix, default_prime, is_prime, minor, mth_root
from orbicert.fermat import build_cover, standard_lines_exist
from orbicert.mpoly import CoverIdealRewriter
from orbicert.textio import arrangement_to_dict

from support import (
    dual_conic_arrangement,
    generic_arrangement,
    rand_rational,
    random_arrangement,
    standard_partition_oracle,
    veronese_oracle,
)
from test_mpoly import random_poly


def noguchi_instance(seed: int = 2024, mult=6) -> Arrangement:
    return random_arrangement(2, 6, random.Random(seed), mult=mult)


def test_c1_noguchi_identities(criterion, tmp_path):
    criterion(1, "random n=2, d=6 arrangement is generic; Cramer, charts (0,1),(0,2),(0,3) and all 9 B/W pairs hold exactly")
    start = time.perf_counter()
    arr = noguchi_instance()
    assert check_linear_general_position(arr, "exhaustive").holds is True
    assert check_quadric_general_position(arr).holds is True
    path, out = tmp_path / "arr.json", tmp_path / "id.json"
    path.write_text(json.dumps(arrangement_to_dict(arr)))
    assert dispatch(["verify-identities", "--input", str(path), "--m", "6", "--exact", "--output", str(out)]) == 0
    rep = json.loads(out.read_text())["exact"]
    assert rep["cramer_annihilation"] is True
    assert all(rep["chart_compatibility"][f"0,{c}"] for c in (1, 2, 3))
    assert len(rep["bw_factorization"]) == 9 and all(rep["bw_factorization"].values())
    assert time.perf_counter() - start < 60


def _on_quadric(n: int, d: int, rng: random.Random) -> Arrangement:
    """d random dual points on a random rational quadric (conic for n=2, x0x3 = x1x2 for n=3)."""
    while True:
        g = Matrix([[rand_rational(rng) for _ in range(n + 1)] for _ in range(n + 1)])
        if g.det():
            break
    pts = []
    for _ in range(d):
        s, t = rand_rational(rng), rand_rational(rng)
        p = (1, s, s * s) if n == 2 else (1, s, t, s * t)
        pts.append([sum(p[r] * g[r, c] for r in range(n + 1)) for c in range(n + 1)])
    return Arrangement(n, pts)


def test_c2_a2_veronese_equivalence(criterion):
    criterion(2, "det A_[2] != 0 agrees with Veronese rank on 100 (n=2, d=6) and 50 (n=3, d=10) random arrangements; dual conic false on both sides")
    start = time.perf_counter()
    rng = random.Random(77)
    degenerate = 0
    for n, count in ((2, 100), (3, 50)):
        d = math.comb(n + 2, 2)
        done = 0
        while done < count:
            # every other case is drawn on a quadric so both verdicts occur
            arr = _on_quadric(n, d, rng) if done % 2 else random_arrangement(n, d, rng, coordinate=False)
            if not check_linear_general_position(arr):
                continue
            a2 = a2_equivalence_check(normalize(arr, tuple(range(n + 1))))
            ver = bool(check_quadric_general_position(arr))
            assert a2 == ver == veronese_oracle(arr)
            degenerate += not ver
            done += 1
    assert degenerate >= 70
    conic = dual_conic_arrangement()
    assert a2_equivalence_check(normalize(conic, (0, 1, 2))) is False
    assert check_quadric_general_position(conic).holds is False
    assert time.perf_counter() - start < 300


def test_c3_baselocus_evidence(criterion):
    criterion(3, "1000 sampled interior (point, tangent) pairs: rank W >= n by explicit minor and rank B = rank W, zero counterexamples")
    start = time.perf_counter()
    cov = build_cover(normalize(noguchi_instance()), 6)
    rep = baselocus_evidence(cov, default_prime(6), samples=1000, seed=3)
    assert rep.p == 1048609
    assert rep.bw_exact
    assert rep.rank_bound_ok == 1000 and rep.rank_equal_ok == 1000 and rep.sigma_nonzero_ok == 1000
    assert rep.counterexamples == []
    assert time.perf_counter() - start < 120


def test_c4_extra_vanishing(criterion):
    criterion(4, "extra vanishing order is m-1 for chart pairs (0,1) and (0,n+1) at (n,m) = (2,6), (2,7), (3,8)")
    rng = random.Random(404)
    arr2 = generic_arrangement(2, 6, rng)
    arr3 = generic_arrangement(3, 10, rng)
    for n, m, arr in ((2, 6, arr2), (2, 7, arr2), (3, 8, arr3)):
        cov = build_cover(normalize(arr), m)
        assert cov.k >= n
        sec = generate_section(cov, charts=[0, 1, n + 1])
        assert extra_vanishing_order(sec, 0, 1) == m - 1
        assert extra_vanishing_order(sec, 0, n + 1) == m - 1


def test_c5_standard_lines(criterion):
    criterion(5, "standard_lines_exist matches partition enumeration on all 36 cases 1 <= n,k <= 6; false exactly when k >= n")
    for n in range(1, 7):
        for k in range(1, 7):
            exists, _ = standard_lines_exist(n, k)
            assert exists == standard_partition_oracle(n, k)
            assert (not exists) == (k >= n)


def test_c6_thresholds(criterion):
    criterion(6, "d_quadric(2)=6, m_min(2)=6, d_quadric(3)=10, d_big(2,3)=20, d_big nonincreasing in m = 3..50")
    t = thresholds(2)
    assert t["d_quadric"] == 6 and t["m_min"] == 6
    assert thresholds(3)["d_quadric"] == 10
    assert thresholds(2, 3)["d_big"] == 20
    for n in range(2, 6):
        vals = [thresholds(n, m)["d_big"] for m in range(3, 51)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_c7_subarrangement_selection(criterion):
    criterion(7, "20 random quadric-generic (n=3, d=10) arrangements: every |I|=1 stratum yields >= 6 hyperplanes generic in P^2, no alarms")
    start = time.perf_counter()
    rng = random.Random(707)
    alarms = 0
    for _ in range(20):
        arr = generic_arrangement(3, 10, rng)
        for i in range(10):
            sel = select_subarrangement(arr, [i])
            alarms += sel.alarm
            assert sel.ok and len(sel.indices) >= math.comb(4, 2)
            res = restrict(arr, [i], among=sel.indices)
            assert res.arrangement.n == 2 and not res.merged
            assert veronese_oracle(res.arrangement)
            assert check_linear_general_position(res.arrangement)
    assert alarms == 0
    assert time.perf_counter() - start < 600


def test_c8_certificate(criterion):
    criterion(8, "certificate passes at m_i = 6, fails with the right witness when one m_i = 5, and is byte-identical on rerun")
    arr = noguchi_instance()
    cert = certify_hyperbolicity(arr, with_evidence=True, samples=50, seed=8)
    assert cert.verdict == PASS
    low = arr.with_multiplicities([6, 6, 6, 5, 6, 6])
    bad = certify_hyperbolicity(low, with_evidence=True, samples=50, seed=8)
    assert bad.verdict == FAIL
    fails = bad.failures()
    assert len(fails) == 1 and fails[0].name == "multiplicity"
    assert fails[0].witness == {"stratum": [], "hyperplanes": [3], "multiplicities": [5]}
    again = certify_hyperbolicity(arr, with_evidence=True, samples=50, seed=8)
    assert again.to_json() == cert.to_json()


def test_c9_kernel_properties(criterion):
    criterion(9, "Cramer-minor law on 100 weighted matrices; normal form idempotent and order-independent on 200 polynomials; 10^4 m-th roots")
    rng = random.Random(909)
    # Cramer-minor law
    for _ in range(100):
        n = rng.randint(1, 4)
        wts = [Fraction(rng.randint(1, 30), rng.randint(1, 5)) for _ in range(n + 1)]
        rows = []
        for _ in range(n):
            head = [rand_rational(rng) for _ in range(n)]
            last = -sum(a * b for a, b in zip(head, wts)) / wts[n]
            rows.append(head + [last])
        V = Matrix(rows)
        vals = {(-1) ** c * minor(V, range(n), [i for i in range(n + 1) if i != c]) / wts[c] for c in range(n + 1)}
        assert len(vals) == 1
    # normal form
    A = Matrix([[1, 1, 1], [1, 2, 3], [1, 4, 9]])
    R = CoverIdealRewriter(2, 3, 6, A)
    for _ in range(200):
        f = random_poly(rng, terms=5, maxexp=10)
        nf = R.normal_form(f)
        assert R.normal_form(nf) == nf
        assert R.normal_form(f, rng=random.Random(rng.random())) == nf
    # m-th roots
    primes = [q for q in range(10**5, 10**5 + 2000) if is_prime(q)] + [1048609, 998244353]
    for t in range(10**4):
        p = rng.choice(primes)
        divs = [m for m in range(2, 50) if (p - 1) % m == 0]
        m = rng.choice(divs)
        a = pow(rng.randrange(1, p), m, p) if t % 2 else rng.randrange(1, p)
        x = mth_root(a, m, p)
        if x is None:
            assert pow(a, (p - 1) // m, p) != 1
        else:
            assert pow(x, m, p) == a
