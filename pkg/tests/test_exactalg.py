import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbicert.exactalg import (
    FpElement,
    Matrix,
    default_prime,
    dependent_subset,
    det,
    format_rational,
    independent_columns,
    inverse,
    is_prime,
    minor,
    mth_root,
    nullspace,
    parse_rational,
    rank,
    root_of_unity_order,
    to_fp,
)

from support import cofactor_det, elimination_rank, leibniz_det, oracle_rank

small = st.fractions(min_value=-20, max_value=20, max_denominator=9)


def square(size):
    return st.lists(st.lists(small, min_size=size, max_size=size), min_size=size, max_size=size)


# --- rationals ------------------------------------------------------------------


def test_rational_roundtrip():
    for x in ["0", "-3/4", "5", "6/8"]:
        assert parse_rational(format_rational(parse_rational(x))) == parse_rational(x)
    assert format_rational(Fraction(6, 8)) == "3/4"
    assert format_rational(Fraction(0)) == "0"
    assert format_rational(Fraction(-4, 2)) == "-2"


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "abc", "1/0"])
def test_rational_rejects_inexact(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def test_canonical_zero():
    z = parse_rational("0/5")
    assert (z.numerator, z.denominator) == (0, 1)


# --- determinants -------------------------------------------------------------


def test_det_examples():
    assert det(Matrix([[1, 2], [3, 4]])) == -2
    for n in range(1, 6):
        assert det(Matrix.identity(n)) == 1
    vdm = Matrix([[1, x, x * x] for x in (1, 2, 3)])
    assert det(vdm) == 2 == cofactor_det([[Fraction(v) for v in r] for r in vdm.rows])


def test_det_rejects_non_square():
    with pytest.raises(ValueError):
        det(Matrix([[1, 2, 3], [4, 5, 6]]))


def test_det_is_exact_on_rationals():
    M = Matrix([[Fraction(1, 3), Fraction(1, 7)], [Fraction(2, 9), Fraction(5, 11)]])
    assert det(M) == Fraction(1, 3) * Fraction(5, 11) - Fraction(1, 7) * Fraction(2, 9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_cofactor_oracle(rows):
    assert det(Matrix(rows)) == cofactor_det(rows) == leibniz_det(rows)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_det_multiplicative(pair):
    A, B = Matrix(pair[0]), Matrix(pair[1])
    assert det(A @ B) == det(A) * det(B)


def test_det_mod_p_matches_rational():
    rng = random.Random(4)
    p = 1048609
    for _ in range(30):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        assert det(Matrix(rows, p)) == det(Matrix(rows)) % p


# --- rank ----------------------------------------------------------------------


def test_rank_examples():
    assert rank(Matrix.zeros(3, 4)) == 0
    assert rank(Matrix.identity(4)) == 4
    assert rank(Matrix([[1, 2], [2, 4]])) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_oracles_and_transpose(r, c, data):
    rows = data.draw(st.lists(st.lists(st.sampled_from([0, 0, 1, -1, 2, Fraction(1, 2)]), min_size=c, max_size=c), min_size=r, max_size=r))
    M = Matrix(rows)
    assert rank(M) == rank(M.T) == oracle_rank(rows) == elimination_rank(rows)


def test_rank_mod_p_can_drop():
    # [[1, 1], [1, 8]] has det 7
    assert rank(Matrix([[1, 1], [1, 8]])) == 2
    assert rank(Matrix([[1, 1], [1, 8]], 7)) == 1


# --- minors ----------------------------------------------------------------------


def test_minor_conventions():
    M = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert minor(M, [0, 1, 2], [0, 1, 2]) == det(M)
    assert minor(M, [1], [2]) == 6
    assert minor(M, [1, 0], [2, 0]) == minor(M, [0, 1], [0, 2]) == 1 * 6 - 3 * 4
    with pytest.raises(ValueError):
        minor(M, [0, 1], [0])
    with pytest.raises(IndexError):
        minor(M, [0, 3], [0, 1])


def test_cramer_minor_law_small():
    # columns weighted by (1, 2, 3) sum to zero
    V = Matrix([[1, 1, -1], [3, 0, -1]])
    w = [1, 2, 3]
    vals = {(-1) ** c * minor(V, [0, 1], [i for i in range(3) if i != c]) / Fraction(w[c]) for c in range(3)}
    assert len(vals) == 1


# --- other linear algebra ------------------------------------------------------------


def test_inverse_and_nullspace():
    M = Matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert M @ inverse(M) == Matrix.identity(3)
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix([[1, 2], [2, 4]]))
    K = nullspace(Matrix([[1, 2, 3], [2, 4, 7]]))
    assert len(K) == 1
    assert all(sum(a * b for a, b in zip(row, K[0])) == 0 for row in [[1, 2, 3], [2, 4, 7]])


def test_independent_columns_and_dependent_subset():
    M = Matrix([[1, 2, 0, 1], [0, 0, 1, 1]])
    assert independent_columns(M) == [0, 2]
    assert dependent_subset([(1, 0), (0, 1), (2, 0)], 2) == (0, 2)
    assert dependent_subset([(1, 0), (0, 1)], 2) is None


def test_matrix_shape_checks():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])
    assert Matrix.zeros(0, 3).shape == (0, 3)


# --- prime fields ----------------------------------------------------------------


def test_is_prime_against_trial_division():
    def slow(n):
        return n > 1 and all(n % q for q in range(2, int(n**0.5) + 1))

    assert all(is_prime(n) == slow(n) for n in range(3000))
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


def test_default_prime():
    p = default_prime(6)
    assert p == 1048609
    assert is_prime(p) and p % 6 == 1 and p >= 2**20
    assert not any(is_prime(q) and q % 6 == 1 for q in range(2**20, p))
    for m in (2, 3, 4, 5, 7, 8, 10, 12):
        q = default_prime(m)
        assert is_prime(q) and (q - 1) % m == 0


def test_root_of_unity_order():
    assert root_of_unity_order(7, 3)
    assert not root_of_unity_order(7, 4)
    assert root_of_unity_order(13, 6)


def test_mth_root_examples():
    assert mth_root(3, 3, 7) is None
    cubes = {pow(x, 3, 7) for x in range(1, 7)}
    assert 3 not in cubes
    for m in (1, 2, 3, 6):
        assert mth_root(1, m, 7) is not None and pow(mth_root(1, m, 7), m, 7) == 1
    with pytest.raises(ValueError):
        mth_root(2, 4, 7)


@pytest.mark.parametrize("p", [7, 13, 97, 193, 1048609, 7681, 12289])
def test_mth_root_exhaustive_small_orders(p):
    rng = random.Random(p)
    divisors = [m for m in range(1, min(p, 64)) if (p - 1) % m == 0]
    for m in divisors:
        for _ in range(40):
            a = rng.randrange(1, p)
            x = mth_root(a, m, p)
            if x is None:
                assert pow(a, (p - 1) // m, p) != 1
            else:
                assert pow(x, m, p) == a
            g = rng.randrange(1, p)
            y = mth_root(pow(g, m, p), m, p)
            assert y is not None and pow(y, m, p) == pow(g, m, p)


def test_fp_element():
    a, b = FpElement(3, 7), FpElement(5, 7)
    assert int(a + b) == 1 and int(a * b) == 1 and int(a / b) == 3 * 3 % 7
    assert mth_root(FpElement(1, 7), 3) is not None
    with pytest.raises(ZeroDivisionError):
        FpElement(0, 7).inverse()
    assert to_fp(Fraction(1, 2), 7) == 4
