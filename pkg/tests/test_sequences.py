from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pascalinv.errors import (
    DivergentSumError,
    InfiniteSumError,
    PoleError,
    UnsupportedSequenceError,
)
from pascalinv.operators import make_operator, op_power, pd, ptd
from pascalinv.scalars import QuadExt, binomial
from pascalinv.sequences import (
    TAU1,
    TAU2,
    AltBernoulli,
    Bernoulli,
    ExpComb,
    FinSupp,
    KSeq,
    Lazy,
    apply_finite,
    apply_upper,
    bernoulli_number,
    check_invariance,
    difference,
    fibonacci,
    geometric,
    k_number,
    lucas,
    newton_reconstruct,
    prefix,
    shift_down,
    shift_up,
    term,
    unit,
)

small_finsupps = st.lists(
    st.integers(min_value=-3, max_value=3), min_size=1, max_size=10
).map(lambda xs: FinSupp(tuple(xs)))


def fib_ints(n):
    out = [0, 1]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out[:n]


def lucas_ints(n):
    out = [2, 1]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out[:n]


def test_named_terms():
    assert term(Bernoulli(), 12) == Fraction(-691, 2730)
    assert term(Bernoulli(), 1) == Fraction(-1, 2)
    assert term(fibonacci(), 10) == 55
    assert term(KSeq(), 11) == Fraction(41, 1155)
    assert term(AltBernoulli(), 1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        term(fibonacci(), -1)


def test_finsupp_normalisation():
    x = FinSupp((1, 0, 2, 0, 0))
    assert x.terms == (1, 0, 2)
    assert x.support_bound == 3
    assert x.term(1) == 0 and x.term(7) == 0
    assert unit(3).terms == (0, 0, 0, 1)


def test_expcomb_normalisation():
    assert ExpComb(((1, 2), (-1, 2))).pairs == ()
    merged = ExpComb(((1, 2), (2, 2), (1, 3)))
    assert merged.pairs == ((3, 2), (1, 3))
    # 0**0 = 1
    assert geometric(5, 0).term(0) == 5
    assert geometric(5, 0).term(1) == 0


def test_binet_forms_satisfy_recurrence():
    fib, luc = fibonacci(), lucas()
    for seq, ints in ((fib, fib_ints(65)), (luc, lucas_ints(65))):
        values = prefix(seq, 65)
        for n in range(65):
            v = values[n]
            assert isinstance(v, QuadExt) and v.is_rational
            assert v == ints[n]
        for n in range(2, 65):
            assert values[n] == values[n - 1] + values[n - 2]


def test_apply_finite_pd_eigenvectors():
    dep = 16
    assert apply_finite(pd(), lucas(), dep) == prefix(lucas(), dep)
    assert apply_finite(pd(), fibonacci(), dep) == [-t for t in prefix(fibonacci(), dep)]
    halves = geometric(Fraction(1), Fraction(1, 2))
    assert apply_finite(pd(), halves, dep) == prefix(halves, dep)


def test_apply_finite_rejects_unbounded_upper():
    with pytest.raises(InfiniteSumError):
        apply_finite(ptd(), unit(0), 4)


def test_apply_upper_finsupp():
    out = apply_upper(ptd(), unit(7), "classical")
    assert out.terms == tuple(-binomial(7, n) for n in range(8))
    # any unbounded upper operator works on finite support, powers included
    roundtrip = apply_upper(op_power(ptd(), 2), FinSupp((1, -2, 3)))
    assert roundtrip == FinSupp((1, -2, 3))


def test_apply_upper_banded_lookahead():
    j0 = make_operator("J", 0)
    shifted = apply_upper(j0, fibonacci())
    assert prefix(shifted, 6) == prefix(shift_down(fibonacci()), 6)
    fin = apply_upper(j0, FinSupp((5, 7)))
    assert fin == FinSupp((7,))


def test_ptd_closed_rule_matches_partial_sums():
    # independent oracle: 200-term exact partial sums plus a geometric tail bound
    r = Fraction(1, 3)
    out = apply_upper(ptd(), geometric(Fraction(1), r), "classical")
    assert out.pairs == ((Fraction(3, 4), Fraction(-1, 4)),)
    for n in range(9):
        partial = sum(
            binomial(k, n) * (-1) ** k * r**k for k in range(n, n + 200)
        )
        closed = Fraction(3, 4) * Fraction(-1, 4) ** n
        big = n + 200
        growth = Fraction(big + 1, big + 1 - n)
        tail_bound = binomial(big, n) * r**big / (1 - growth * r)
        assert abs(partial - closed) <= tail_bound


def test_ptd_continuation_on_shifted_binet_forms():
    j0f, j0l = shift_down(fibonacci()), shift_down(lucas())
    assert prefix(apply_upper(ptd(), j0f), 24) == prefix(j0f, 24)
    assert prefix(apply_upper(ptd(), j0l), 24) == [-t for t in prefix(j0l, 24)]


def test_summation_error_taxonomy():
    with pytest.raises(DivergentSumError):
        apply_upper(ptd(), shift_down(fibonacci()), "classical")
    with pytest.raises(DivergentSumError):
        apply_upper(ptd(), geometric(1, -1), "classical")
    with pytest.raises(PoleError):
        apply_upper(ptd(), geometric(1, -1), "continued")
    with pytest.raises(UnsupportedSequenceError):
        apply_upper(ptd(), Bernoulli())
    with pytest.raises(UnsupportedSequenceError):
        apply_upper(ptd(), Lazy(lambda n: n))
    with pytest.raises(ValueError):
        apply_upper(ptd(), unit(1), "nonsense")


def test_jinv_rules():
    jinv2 = make_operator("Jinv", 2)
    out = apply_upper(jinv2, geometric(Fraction(1), Fraction(1, 2)), "classical")
    assert out.pairs == ((Fraction(2, 5), Fraction(1, 2)),)
    with pytest.raises(DivergentSumError):
        apply_upper(jinv2, geometric(1, 3), "classical")
    with pytest.raises(PoleError):
        apply_upper(jinv2, geometric(1, -2), "continued")
    # golden ratios sit inside the radius-2 disc, so classical mode is legal
    out = apply_upper(jinv2, lucas(), "classical")
    assert prefix(out, 8) == prefix(apply_upper(jinv2, lucas(), "continued"), 8)


def test_shift_examples():
    assert prefix(shift_down(fibonacci()), 5) == [1, 1, 2, 3, 5]
    x = geometric(Fraction(2), Fraction(1, 3))
    y = shift_up(shift_down(x))
    assert prefix(y, 6)[1:] == prefix(x, 6)[1:]
    assert y.term(0) == 0 != x.term(0)
    assert shift_down(lucas()).pairs == ((TAU2, TAU2), (TAU1, TAU1))


def test_shift_up_exact_on_balanced_combinations():
    # J(0) applied to the Binet form of F has a geometric-pair preimage
    up = shift_up(shift_down(fibonacci()))
    assert isinstance(up, ExpComb)
    assert up.pairs == fibonacci().pairs
    # unbalanced combinations fall back to an exact oracle
    up2 = shift_up(geometric(1, Fraction(1, 2)))
    assert not isinstance(up2, ExpComb)
    assert prefix(up2, 4) == [0, 1, Fraction(1, 2), Fraction(1, 4)]


def test_difference():
    squares = Lazy(lambda n: n * n, label="squares")
    assert prefix(difference(squares, 2), 6) == [2] * 6
    assert prefix(difference(fibonacci(), 1), 6) == [1, 0, 1, 1, 2, 3]
    assert prefix(difference(squares, 0), 4) == [0, 1, 4, 9]
    with pytest.raises(ValueError):
        difference(squares, -1)
    # structure-preserving rules agree with the generic oracle
    x = ExpComb(((Fraction(3), Fraction(1, 2)), (1, 0)))
    lazy_diff = difference(Lazy(x.term), 1)
    assert prefix(difference(x, 1), 8) == prefix(lazy_diff, 8)
    f = FinSupp((1, 4, 0, 2))
    assert prefix(difference(f, 1), 6) == [3, -4, 2, -2, 0, 0]


def test_difference_commutes_with_shift():
    for seq in (fibonacci(), KSeq(), FinSupp((1, -2, 0, 5))):
        lhs = prefix(difference(shift_down(seq), 1), 10)
        rhs = prefix(shift_down(difference(seq, 1)), 10)
        assert lhs == rhs


def test_newton_reconstruct():
    assert newton_reconstruct(lucas(), 10) == prefix(lucas(), 10)
    assert newton_reconstruct(unit(3), 8) == prefix(unit(3), 8)
    assert newton_reconstruct(Bernoulli(), 8) == prefix(Bernoulli(), 8)
    with pytest.raises(ValueError):
        newton_reconstruct(lucas(), 0)


def test_check_invariance_verdicts():
    assert check_invariance(lucas(), "first", 64).verdict == "invariant"
    assert check_invariance(AltBernoulli(), "first", 32).verdict == "invariant"
    assert check_invariance(KSeq(), "first", 32).verdict == "inverse-invariant"
    rep = check_invariance(shift_down(fibonacci()), "second", 32, "continued")
    assert rep.verdict == "invariant"
    assert rep.mode == "closed-form"
    rep = check_invariance(unit(0), "second", 16)
    assert rep.verdict == "invariant" and rep.mode == "exact-finite"


def test_check_invariance_classical_mode_label():
    rep = check_invariance(geometric(Fraction(1), Fraction(1, 3)), "second", 8, "classical")
    assert rep.mode == "classical-partial-sum"
    assert rep.verdict == "neither"


def test_check_invariance_neither():
    rep = check_invariance(FinSupp((1, 1)), "first", 8)
    assert rep.verdict == "neither"
    assert rep.first_failure == 1
    with pytest.raises(UnsupportedSequenceError):
        check_invariance(Bernoulli(), "second", 8)
    with pytest.raises(ValueError):
        check_invariance(lucas(), "third", 8)


@given(small_finsupps)
def test_binomial_inversion_involution(x):
    once = FinSupp(tuple(apply_finite(pd(), x, 32)))
    assert apply_finite(pd(), once, 32) == prefix(x, 32)


@given(small_finsupps)
def test_modified_inversion_involution(x):
    once = apply_upper(ptd(), x)
    assert isinstance(once, FinSupp)
    assert apply_upper(ptd(), once) == x


def test_lazy_oracle_first_kind_check():
    # index-times-term products have no geometric-combination form, but the
    # first-kind check needs only finite row sums over an exact oracle
    fib = fibonacci()
    seq = Lazy(lambda n: n * fib.term(n - 1) if n else 0, label="n*F(n-1)")
    assert check_invariance(seq, "first", 32).verdict == "invariant"
    with pytest.raises(UnsupportedSequenceError):
        check_invariance(seq, "second", 8)


def test_memoisation_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(bernoulli_number, [120] * 16))
    assert len(set(results)) == 1
    assert results[0] == bernoulli_number(120)

    shared = Lazy(lambda n: bernoulli_number(n) + n, label="shared")
    with ThreadPoolExecutor(max_workers=8) as pool:
        rows = list(pool.map(lambda _: prefix(shared, 40), range(8)))
    assert all(row == rows[0] for row in rows)


def test_bernoulli_and_k_values():
    assert [bernoulli_number(n) for n in range(7)] == [
        Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0),
        Fraction(-1, 30), Fraction(0), Fraction(1, 42),
    ]
    assert k_number(0) == 0
    assert k_number(4) == Fraction(1, 6)
    assert k_number(12) == Fraction(41, 2310)
