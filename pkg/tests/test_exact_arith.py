from fractions import Fraction
import math

import pytest
from hypothesis import given, settings, strategies as st

from normfinsler.exact_arith import (
    SQRT2, SQRT3, SQRT6, ExactVector, QExt, cartan_pair, inner, is_parallel,
    norm_sq, project_out, qext_arith, qext_sign, unit_vector, vec,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
qexts = st.builds(QExt, small, small, small, small)


def approx(x: QExt) -> float:
    a, b, c, d = x.coeffs
    return float(a) + float(b) * math.sqrt(2) + float(c) * math.sqrt(3) + float(d) * math.sqrt(6)


def test_multiplication_table():
    assert qext_arith("mul", SQRT2, SQRT3) == SQRT6
    assert (1 + SQRT2) * (1 - SQRT2) == QExt(-1)
    assert qext_arith("add", SQRT3 * Fraction(1, 2), SQRT3 / 2) == SQRT3
    assert SQRT6 * SQRT6 == QExt(6)


def test_signs():
    assert qext_sign(SQRT6 - 2) == 1
    assert qext_sign(0) == 0
    assert qext_sign(SQRT2 + SQRT3 - SQRT6) == 1
    assert qext_sign(SQRT2 * 7 - 10) == -1


def test_sign_near_cancellation_uses_exact_path():
    # 99/70 approximates √2 to about 7e-5, 19601/13860 to about 2.6e-9
    assert qext_sign(SQRT2 - Fraction(19601, 13860)) == -1
    assert qext_sign(SQRT2 * 13860 - 19601) == -1
    assert qext_sign(SQRT6 - SQRT2 * SQRT3) == 0


@settings(max_examples=200, deadline=None)
@given(qexts)
def test_sign_matches_float_when_far_from_zero(x):
    f = approx(x)
    if abs(f) > 1e-9:
        assert qext_sign(x) == (1 if f > 0 else -1)


@settings(max_examples=150, deadline=None)
@given(qexts, qexts, qexts)
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == QExt()


@settings(max_examples=150, deadline=None)
@given(qexts)
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == QExt(1)
        assert abs(approx(x.inverse()) - 1 / approx(x)) <= 1e-9 * max(1.0, abs(1 / approx(x)))


@settings(max_examples=100, deadline=None)
@given(qexts)
def test_json_roundtrip(x):
    assert QExt.from_json(x.to_json()) == x
    assert hash(QExt.from_json(x.to_json())) == hash(x)


def test_inner_products():
    assert inner(vec(1, 1, 0), vec(0, 1, 0)) == QExt(1)
    assert inner((SQRT3, QExt()), (SQRT3 / 2, QExt(Fraction(3, 2)))) == QExt(Fraction(3, 2))
    half = Fraction(1, 2)
    assert inner(vec(half, half, half, half), vec(0, 1, 0, 0)) == QExt(half)
    with pytest.raises(ValueError):
        inner(vec(1, 2), vec(1, 2, 3))


def test_cartan_pair_examples():
    e1 = unit_vector(2, 0)
    n1, n2, ok = cartan_pair(e1, e1)
    assert (n1, n2, ok) == (QExt(2), QExt(2), True)

    # |λ|² = 7/4 and (λ, α') = 1/2 against a unit α'
    lam = vec(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 1)
    assert norm_sq(lam) == QExt(Fraction(7, 4))
    n1, n2, ok = cartan_pair(lam, vec(1, 0, 0, 0))
    assert n2 == QExt(Fraction(4, 7)) and not ok

    # projection of ½(e1+e2+e3+e4) away from e1, paired with e2
    half = Fraction(1, 2)
    lam = project_out(vec(half, half, half, half), vec(1, 0, 0, 0))
    assert norm_sq(lam) == QExt(Fraction(3, 4))
    n1, n2, ok = cartan_pair(lam, vec(0, 1, 0, 0))
    assert n2 == QExt(Fraction(4, 3)) and not ok


def test_parallel_and_projection():
    assert is_parallel(vec(1, 2), vec(-2, -4))
    assert not is_parallel(vec(1, 2), vec(2, 1))
    p = project_out(vec(1, 1), vec(1, 0))
    assert p == ExactVector([0, 1])
    with pytest.raises(ValueError):
        project_out(vec(1, 1), vec(0, 0))
