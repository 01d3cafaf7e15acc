import random
from fractions import Fraction

import pytest

from orbicert.arrangement import normalize
from orbicert.exactalg import Matrix, default_prime, to_fp
from orbicert.fermat import (
    CoverPoint,
    FermatCover,
    SamplingError,
    acceptance_rate,
    build_cover,
    relation_residuals,
    sample_point,
    sample_points,
    smoothness_probe,
    standard_lines_exist,
)
from orbicert.mpoly import MPoly

from support import noguchi_arrangement, standard_partition_oracle

NOG = Matrix([[1, 1, 1], [1, 2, 3], [1, 4, 9]])


def test_build_cover_noguchi():
    cov = build_cover(normalize(noguchi_arrangement()), 6)
    assert (cov.n, cov.k, cov.m, cov.N) == (2, 3, 6, 5)
    eqs = cov.equations()
    assert len(eqs) == 3
    assert eqs[0] == MPoly.z(3) ** 6 - MPoly.z(0) ** 6 - MPoly.z(1) ** 6 - MPoly.z(2) ** 6
    # bit-exact reproducibility
    assert [e.to_records() for e in eqs] == [e.to_records() for e in build_cover(normalize(noguchi_arrangement()), 6).equations()]


def test_build_cover_fermat_hypersurface_and_m2():
    cov = FermatCover(3, 1, 5, Matrix([[1, 1, 1, 1]]))
    f = cov.equations()[0]
    assert f == MPoly.z(4) ** 5 - sum((MPoly.z(i) ** 5 for i in range(4)), MPoly.zero())
    q = FermatCover(2, 3, 2, NOG)
    assert all(e.total_degree() == 2 for e in q.equations())
    with pytest.raises(ValueError):
        FermatCover(2, 3, 1, NOG)
    with pytest.raises(ValueError):
        FermatCover(2, 2, 6, NOG)


def test_sampled_points_satisfy_relations():
    cov = FermatCover(2, 3, 6, NOG)
    p = default_prime(6)
    for pt in sample_points(cov, 50, seed=1):
        assert pt.p == p and pt.interior
        assert pt.z[0] == 1 and pt.zp[0] == 0 and any(pt.zp)
        assert all(x % p for x in pt.z)
        assert relation_residuals(cov, pt) == [0] * 6
        # projection: [z_i^m] satisfies the linear relations
        zm = [pow(x, 6, p) for x in pt.z]
        for j in range(3):
            assert zm[3 + j] == sum(to_fp(NOG[j, i], p) * zm[i] for i in range(3)) % p


def test_sampler_rational_coefficients_and_other_m():
    A = Matrix([[Fraction(1, 2), Fraction(-3, 5), 2], [Fraction(7, 3), 1, Fraction(-1, 4)]])
    for m in (2, 3, 5, 8):
        cov = FermatCover(2, 2, m, A)
        for pt in sample_points(cov, 10, seed=m):
            assert relation_residuals(cov, pt) == [0] * 4


def test_k0_accepts_immediately():
    cov = FermatCover(2, 0, 4, Matrix.zeros(0, 3))
    pts = sample_points(cov, 5, seed=0)
    assert [pt.trial for pt in pts] == [1, 2, 3, 4, 5]


def test_sampler_is_deterministic():
    cov = FermatCover(2, 3, 6, NOG)
    assert sample_points(cov, 5, seed=9) == sample_points(cov, 5, seed=9)
    assert sample_point(cov, seed=9) == sample_points(cov, 1, seed=9)[0]
    assert sample_point(cov, seed=9) != sample_point(cov, seed=10)


def test_sampler_errors():
    cov = FermatCover(2, 3, 6, NOG)
    with pytest.raises(ValueError):
        sample_point(cov, p=1048583)  # prime, but 6 does not divide p-1
    with pytest.raises(ValueError):
        sample_point(cov, p=1048611)
    with pytest.raises(SamplingError):
        sample_points(cov, 10, seed=0, budget=5)


def test_chart_coordinates():
    cov = FermatCover(2, 3, 6, NOG)
    pt = sample_point(cov, seed=2)
    y = pt.in_chart(0)
    assert y == pt.values()
    y3 = pt.in_chart(3)
    assert y3[6] == 1 and y3[7] == 0  # y_3 = 1, y_3' = 0


def test_acceptance_rate_statistical():
    cov = FermatCover(2, 3, 6, NOG)
    rate = acceptance_rate(cov, 10**6, seed=0)
    target = 6**-3
    assert target / 4 <= rate <= 4 * target


def test_smoothness_probe():
    assert smoothness_probe(FermatCover(2, 0, 6, Matrix.zeros(0, 3))).passed
    rep = smoothness_probe(FermatCover(2, 3, 6, NOG), samples=100, seed=1)
    assert rep.passed and rep.samples == 100 and rep.reason == "no singular point found"
    bad = smoothness_probe(FermatCover(2, 1, 6, Matrix([[1, 0, 1]])))
    assert not bad.passed and "precondition" in bad.reason


def test_standard_lines_examples():
    assert standard_lines_exist(2, 1) == (True, ((0, 1), (2, 3)))
    assert standard_lines_exist(2, 2) == (False, None)
    with pytest.raises(ValueError):
        standard_lines_exist(0, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_standard_lines_against_partitions(n):
    for k in range(1, 7):
        exists, part = standard_lines_exist(n, k)
        assert exists == standard_partition_oracle(n, k) == (k <= n - 1)
        if exists:
            assert sorted(x for b in part for x in b) == list(range(n + k + 1))
            assert len(part) >= 2 and all(len(b) >= k + 1 for b in part)


def test_cover_point_rejects_missing_chart():
    pt = CoverPoint(7, (1, 0, 2), (0, 1, 1))
    with pytest.raises(ZeroDivisionError):
        pt.in_chart(1)


def test_iter_points_many_draws_are_distinct():
    cov = FermatCover(1, 1, 4, Matrix([[1, 1]]))
    state = random.getstate()
    pts = sample_points(cov, 30, seed=4)
    assert len({pt.z for pt in pts}) > 20
    assert random.getstate() == state
