"""Exactly representable infinite sequences and the binomial-inversion calculus.

Sequence classes
----------------
``FinSupp``      finitely supported, stored as a term tuple.
``ExpComb``      finite combination sum_j c_j * r_j**n of geometric sequences,
                 with coefficients and ratios rational or quadratic-irrational.
``Bernoulli``    the Bernoulli numbers (B1 = -1/2 convention).
``AltBernoulli`` (-1)**n * B_n.
``KSeq``         K_0 = 0, K_n = sum_{k<n} (1/2)**(n-k) * (-1)**k * B_k.
``Lazy``         an arbitrary exact term oracle.

Applying a lower or banded operator to a sequence is a finite exact sum per
term.  Applying an unbounded upper operator needs a summation rule: finitely
supported input gives finite sums, and geometric input is evaluated through
the closed form sum_{k>=n} C(k, n) x**k = x**n / (1 - x)**(n+1), read as an
analytic continuation in ``continued`` mode and restricted to |ratio| inside
the disc of convergence in ``classical`` mode.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Callable, Optional

from .errors import (
    DivergentSumError,
    InfiniteSumError,
    PoleError,
    UnsupportedSequenceError,
)
from .operators import TriOp, pd, ptd
from .scalars import QuadExt, Scalar, binomial, exact_div, scalar_cmp

CLASSICAL = "classical"
CONTINUED = "continued"

FIRST = "first"
SECOND = "second"

INVARIANT = "invariant"
INVERSE_INVARIANT = "inverse-invariant"
NEITHER = "neither"

TAU1 = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
TAU2 = QuadExt(Fraction(1, 2), Fraction(-1, 2), 5)
INV_SQRT5 = QuadExt(0, Fraction(1, 5), 5)

_BERNOULLI: list[Fraction] = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from C(n+1, n)*B_n = -sum_{k<n} C(n+1, k)*B_k."""
    if n < 0:
        raise ValueError("n must be >= 0")
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI) <= n:
            m = len(_BERNOULLI)
            acc = sum(binomial(m + 1, k) * _BERNOULLI[k] for k in range(m))
            _BERNOULLI.append(Fraction(-acc, m + 1))
        return _BERNOULLI[n]


def k_number(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    return sum(
        Fraction(1, 2 ** (n - k)) * (-1) ** k * bernoulli_number(k) for k in range(n)
    )


class Seq:
    """Base class: an immutable infinite sequence with an exact term oracle."""

    def term(self, n: int) -> Scalar:
        raise NotImplementedError

    def prefix(self, depth: int) -> list:
        return [self.term(n) for n in range(depth)]


@dataclass(frozen=True)
class FinSupp(Seq):
    terms: tuple = ()

    def __post_init__(self):
        ts = tuple(self.terms)
        while ts and ts[-1] == 0:
            ts = ts[:-1]
        object.__setattr__(self, "terms", ts)

    def term(self, n):
        if 0 <= n < len(self.terms):
            return self.terms[n]
        return 0

    @property
    def support_bound(self) -> int:
        """Smallest s with term(n) = 0 for all n >= s."""
        return len(self.terms)


def unit(j: int) -> FinSupp:
    """The standard basis sequence e_j."""
    return FinSupp((0,) * j + (1,))


@dataclass(frozen=True)
class ExpComb(Seq):
    """sum_j c_j * r_j**n with pairwise distinct ratios (0**0 = 1)."""

    pairs: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for c, r in self.pairs:
            merged[r] = merged.get(r, 0) + c
        cleaned = [(c, r) for r, c in merged.items() if c != 0]
        cleaned.sort(key=cmp_to_key(lambda p, q: scalar_cmp(p[1], q[1])))
        object.__setattr__(self, "pairs", tuple(cleaned))

    def term(self, n):
        if n < 0:
            raise ValueError("n must be >= 0")
        total = 0
        for c, r in self.pairs:
            total += c * r**n
        return total


def geometric(c: Scalar, r: Scalar) -> ExpComb:
    return ExpComb(((c, r),))


def fibonacci() -> ExpComb:
    """F_n = (tau1**n - tau2**n) / sqrt(5) over Q(sqrt 5)."""
    return ExpComb(((INV_SQRT5, TAU1), (-INV_SQRT5, TAU2)))


def lucas() -> ExpComb:
    """L_n = tau1**n + tau2**n."""
    return ExpComb(((Fraction(1), TAU1), (Fraction(1), TAU2)))


@dataclass(frozen=True)
class Bernoulli(Seq):
    def term(self, n):
        return bernoulli_number(n)


@dataclass(frozen=True)
class AltBernoulli(Seq):
    def term(self, n):
        return (-1) ** n * bernoulli_number(n)


@dataclass(frozen=True)
class KSeq(Seq):
    def term(self, n):
        return k_number(n)


@dataclass(frozen=True, eq=False)
class Lazy(Seq):
    """Arbitrary exact term oracle; compares by identity, memoises per instance."""

    oracle: Callable[[int], Scalar] = field(repr=False)
    label: str = "lazy"

    def __post_init__(self):
        object.__setattr__(self, "_memo", lru_cache(maxsize=None)(self.oracle))

    def term(self, n):
        return self._memo(n)


def _describe(seq: Seq) -> str:
    label = getattr(seq, "label", None)
    name = type(seq).__name__
    return f"{name}({label})" if label else name


def term(seq: Seq, n: int) -> Scalar:
    if n < 0:
        raise ValueError("n must be >= 0")
    return seq.term(n)


def prefix(seq: Seq, depth: int) -> list:
    return seq.prefix(depth)


def seq_scale(c: Scalar, seq: Seq) -> Seq:
    if c == 0:
        return FinSupp(())
    if isinstance(seq, FinSupp):
        return FinSupp(tuple(c * t for t in seq.terms))
    if isinstance(seq, ExpComb):
        return ExpComb(tuple((c * cc, r) for cc, r in seq.pairs))
    return Lazy(lambda n: c * seq.term(n), label="scaled")


def seq_add(x: Seq, y: Seq) -> Seq:
    if isinstance(x, FinSupp) and isinstance(y, FinSupp):
        n = max(len(x.terms), len(y.terms))
        return FinSupp(tuple(x.term(i) + y.term(i) for i in range(n)))
    if isinstance(x, ExpComb) and isinstance(y, ExpComb):
        return ExpComb(x.pairs + y.pairs)
    return Lazy(lambda n: x.term(n) + y.term(n), label="sum")


def shift_down(seq: Seq) -> Seq:
    """Drop the head: term'(n) = term(n + 1)."""
    if isinstance(seq, FinSupp):
        return FinSupp(seq.terms[1:])
    if isinstance(seq, ExpComb):
        return ExpComb(tuple((c * r, r) for c, r in seq.pairs))
    return Lazy(lambda n: seq.term(n + 1), label="shifted-down")


def shift_up(seq: Seq) -> Seq:
    """Prepend a zero: term'(0) = 0, term'(n) = term(n - 1)."""
    if isinstance(seq, FinSupp):
        return FinSupp((0,) + seq.terms)
    if isinstance(seq, ExpComb):
        # (c/r, r) is exact for n >= 1; it extends to n = 0 only when the
        # candidate value at 0 vanishes, otherwise fall back to an oracle
        if all(r != 0 for _, r in seq.pairs):
            cand = ExpComb(tuple((exact_div(c, r), r) for c, r in seq.pairs))
            if cand.term(0) == 0:
                return cand
    return Lazy(lambda n: 0 if n == 0 else seq.term(n - 1), label="shifted-up")


def difference(seq: Seq, k: int = 1) -> Seq:
    """k-th forward difference, term'(n) = term(n+1) - term(n) applied k times."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = seq
    for _ in range(k):
        out = _difference_once(out)
    return out


def _difference_once(seq: Seq) -> Seq:
    if isinstance(seq, FinSupp):
        ts = seq.terms
        return FinSupp(tuple(seq.term(i + 1) - seq.term(i) for i in range(len(ts))))
    if isinstance(seq, ExpComb):
        return ExpComb(tuple((c * (r - 1), r) for c, r in seq.pairs))
    return Lazy(lambda n: seq.term(n + 1) - seq.term(n), label="difference")


def newton_reconstruct(seq: Seq, depth: int) -> list:
    """Rebuild the prefix from iterated difference heads via sum_k D^k a_0 * C(n, k)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    row = prefix(seq, depth)
    heads = []
    for _ in range(depth):
        heads.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return [
        sum(heads[k] * binomial(n, k) for k in range(n + 1)) for n in range(depth)
    ]


def apply_finite(op: TriOp, seq: Seq, depth: int) -> list:
    """Exact prefix (y_0, ..., y_{depth-1}) of op applied to seq.

    Requires a finite lookahead: op.band.above must be finite, so every entry
    of the result is a finite sum.
    """
    if op.band.above is None:
        raise InfiniteSumError(
            f"{op.label} has unbounded upper band; use apply_upper"
        )
    below = op.band.below
    out = []
    for i in range(depth):
        lo = 0 if below is None else max(0, i - below)
        hi = i + op.band.above
        out.append(sum(op.entry(i, k) * seq.term(k) for k in range(lo, hi + 1)))
    return out


def _abs_lt(x: Scalar, y: Scalar) -> bool:
    # |x| < |y| over the real embedding, compared via squares
    return x * x < y * y


def apply_upper(op: TriOp, seq: Seq, mode: str = CONTINUED) -> Seq:
    """Apply an upper (possibly unbounded) operator to a sequence, exactly.

    Banded operators evaluate pointwise on any sequence.  Unbounded upper
    operators accept finitely supported input (finite sums) and geometric
    combinations, the latter through per-ratio closed rules known for the
    signed transposed Pascal operator and for inverse Jordan blocks.
    """
    if mode not in (CLASSICAL, CONTINUED):
        raise ValueError(f"unknown mode: {mode!r}")
    band = op.band
    if band.above is not None:
        return _apply_banded(op, seq)
    if isinstance(seq, FinSupp):
        if band.below is None:
            raise InfiniteSumError(f"{op.label} has no finite summation range")
        bound = seq.support_bound
        terms = []
        for n in range(bound + band.below):
            lo = max(0, n - band.below)
            terms.append(
                sum(op.entry(n, k) * seq.terms[k] for k in range(lo, bound))
            )
        return FinSupp(tuple(terms))
    if isinstance(seq, ExpComb):
        if op.tag == ("PTD",):
            return ExpComb(tuple(_ptd_pair(c, r, mode) for c, r in seq.pairs))
        if op.tag and op.tag[0] == "Jinv":
            a = op.tag[1]
            return ExpComb(tuple(_jinv_pair(c, r, a, mode) for c, r in seq.pairs))
        raise UnsupportedSequenceError(
            f"no geometric closed rule for {op.label}"
        )
    raise UnsupportedSequenceError(
        f"{op.label} is unbounded upper; {_describe(seq)} input must be "
        "finitely supported or a geometric combination"
    )


def _ptd_pair(c: Scalar, r: Scalar, mode: str) -> tuple:
    # sum_{k>=n} C(k,n) (-r)**k = (-r)**n / (1+r)**(n+1)
    if mode == CLASSICAL and not _abs_lt(r, 1):
        raise DivergentSumError(
            f"classical sum diverges for ratio {r}: need |ratio| < 1"
        )
    denom = 1 + r
    if denom == 0:
        raise PoleError("continuation rule has a pole at ratio -1")
    return (exact_div(c, denom), exact_div(-r, denom))


def _jinv_pair(c: Scalar, r: Scalar, a: Scalar, mode: str) -> tuple:
    if mode == CLASSICAL and not _abs_lt(r, a):
        raise DivergentSumError(
            f"classical sum diverges for ratio {r}: need |ratio| < |{a}|"
        )
    denom = a + r
    if denom == 0:
        raise PoleError(f"continuation rule has a pole at ratio {-a}")
    return (exact_div(c, denom), r)


def _apply_banded(op: TriOp, seq: Seq) -> Seq:
    band = op.band
    if isinstance(seq, FinSupp) and band.below is not None:
        bound = seq.support_bound
        terms = []
        for n in range(bound + band.below):
            lo = max(0, n - band.below)
            hi = min(n + band.above, bound - 1)
            terms.append(sum(op.entry(n, k) * seq.terms[k] for k in range(lo, hi + 1)))
        return FinSupp(tuple(terms))

    def oracle(n):
        lo = 0 if band.below is None else max(0, n - band.below)
        return sum(op.entry(n, k) * seq.term(k) for k in range(lo, n + band.above + 1))

    return Lazy(oracle, label=f"{op.label}·seq")


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of an invariance check at finite depth."""

    kind: str
    verdict: str
    depth: int
    mode: str
    first_failure: Optional[int] = None


def check_invariance(
    seq: Seq, kind: str, depth: int, mode: str = CONTINUED
) -> InvarianceReport:
    """Compare the transformed prefix against +seq and -seq up to depth.

    First-kind checks apply the signed Pascal involution row by row (exact for
    every sequence class).  Second-kind checks apply its transpose through
    :func:`apply_upper` and therefore require finitely supported or geometric
    input.
    """
    if kind not in (FIRST, SECOND):
        raise ValueError(f"unknown kind: {kind!r}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if kind == FIRST:
        transformed = apply_finite(pd(), seq, depth)
        report_mode = "exact-finite"
    else:
        if not isinstance(seq, (FinSupp, ExpComb)):
            raise UnsupportedSequenceError(
                "second-kind checks need finitely supported or geometric input"
            )
        transformed = apply_upper(ptd(), seq, mode).prefix(depth)
        if isinstance(seq, FinSupp):
            report_mode = "exact-finite"
        else:
            report_mode = "closed-form" if mode == CONTINUED else "classical-partial-sum"

    original = prefix(seq, depth)
    plus_ok = True
    minus_ok = True
    failure = None
    for i in range(depth):
        if plus_ok and transformed[i] != original[i]:
            plus_ok = False
        if minus_ok and transformed[i] != -original[i]:
            minus_ok = False
        if not plus_ok and not minus_ok:
            failure = i
            break
    if plus_ok:
        verdict = INVARIANT
    elif minus_ok:
        verdict = INVERSE_INVARIANT
    else:
        verdict = NEITHER
    return InvarianceReport(kind, verdict, depth, report_mode, failure)
