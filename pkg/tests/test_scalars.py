from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pascalinv.scalars import (
    QuadExt,
    binomial,
    exact_div,
    format_scalar,
    parse_scalar,
    scalar_from_json,
    scalar_to_json,
    simplify,
)

TAU1 = QuadExt(Fraction(1, 2), Fraction(1, 2))
TAU2 = QuadExt(Fraction(1, 2), Fraction(-1, 2))

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**4)


def quadexts():
    return st.builds(lambda a, b: QuadExt(a, b, 5), rationals, rationals)


def test_golden_ratio_relations():
    assert TAU1 * TAU2 == -1
    assert TAU1 ** 2 == TAU1 + 1
    assert TAU1 ** 2 == QuadExt(Fraction(3, 2), Fraction(1, 2))
    assert TAU1 + TAU2 == 1


def test_plain_rational_addition():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)


def test_binomial_conventions():
    assert binomial(4, 2) == 6
    assert binomial(2, 4) == 0
    assert binomial(7, 0) == 1
    assert binomial(3, -1) == 0
    assert binomial(-1, 0) == 0
    assert binomial(-1, -1) == 0


def test_pascal_rule():
    for i in range(1, 65):
        for j in range(i + 1):
            assert binomial(i, j) == binomial(i - 1, j) + binomial(i - 1, j - 1)


@given(quadexts())
def test_additive_inverse(x):
    assert x + (-x) == 0


@given(quadexts())
def test_multiplicative_inverse(x):
    if x == 0:
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == 1
        assert 1 / x == x.inverse()


@given(quadexts())
def test_conjugation_norm(x):
    prod = x * x.conjugate()
    assert prod.is_rational
    assert prod.to_fraction() == x.a**2 - 5 * x.b**2


@given(quadexts(), quadexts())
def test_field_ops_close(x, y):
    for v in (x + y, x - y, x * y):
        assert isinstance(v, QuadExt)
    if y != 0:
        assert (x / y) * y == x


def test_mixed_arithmetic_promotes():
    assert TAU1 + Fraction(1, 2) == QuadExt(1, Fraction(1, 2))
    assert 2 * TAU1 == QuadExt(1, 1)
    assert Fraction(1, 2) - TAU2 == QuadExt(0, Fraction(1, 2))


def test_distinct_fields_do_not_mix():
    r2 = QuadExt(0, 1, 2)
    with pytest.raises(ValueError):
        _ = TAU1 + r2
    # rational-valued elements cross fields freely
    assert QuadExt(3, 0, 2) + TAU1 == QuadExt(Fraction(7, 2), Fraction(1, 2), 5)


def test_d_validation():
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 12)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 1)


def test_ordering_by_real_value():
    assert TAU2 < 0 < 1 < TAU1 < 2
    assert TAU1 > Fraction(8, 5)
    assert abs(TAU2) == -TAU2
    assert sorted([TAU1, TAU2, Fraction(1)]) == [TAU2, Fraction(1), TAU1]


def test_rational_equivalence_and_hash():
    x = QuadExt(Fraction(3, 2), 0)
    assert x == Fraction(3, 2)
    assert hash(x) == hash(Fraction(3, 2))
    assert simplify(x) == Fraction(3, 2)
    assert isinstance(simplify(x), Fraction)
    assert simplify(TAU1) is TAU1


def test_integer_powers():
    assert TAU1**0 == 1
    assert TAU1**-1 == TAU1.inverse()
    assert TAU1**5 * TAU1**-5 == 1
    assert QuadExt(0, 0) ** 0 == 1


def test_exact_div_never_floats():
    assert exact_div(1, 3) == Fraction(1, 3)
    assert exact_div(1, TAU1) == TAU1.inverse()
    assert isinstance(exact_div(2, 4), Fraction)


@pytest.mark.parametrize(
    "text,value",
    [
        ("7", Fraction(7)),
        ("-2/3", Fraction(-2, 3)),
        ("√5", QuadExt(0, 1)),
        ("-√5", QuadExt(0, -1)),
        ("1/2√5", QuadExt(0, Fraction(1, 2))),
        ("3/2+1/2√5", TAU1 + 1),
        ("1/2-1/2√5", TAU2),
        ("sqrt5", QuadExt(0, 1)),
        ("1/2+1/2sqrt5", TAU1),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_scalar_rejects_garbage():
    for bad in ("", "one", "1//2", "sqrt", "1+", "sqrt5+1"):
        with pytest.raises(ValueError):
            parse_scalar(bad)


@given(quadexts())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(rationals)
def test_json_round_trip_rational(q):
    assert scalar_from_json(scalar_to_json(q)) == q


def test_json_round_trip_quadratic():
    enc = scalar_to_json(TAU1)
    assert enc == {
        "a": {"num": "1", "den": "2"},
        "b": {"num": "1", "den": "2"},
        "d": 5,
    }
    assert scalar_from_json(enc) == TAU1
