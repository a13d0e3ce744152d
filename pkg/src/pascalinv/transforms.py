"""Transforms that move sequences between the four invariance classes.

The four banded/triangular maps exchange invariant and inverse-invariant
sequences within each kind; the staggered Pascal-type matrices project any
sequence onto one of the eigenspaces.  Pipelines chain those stages and track
the (kind, sign) class of their output, so a caller can announce what the
result provably is.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import UnsupportedPairError
from .operators import lin_comb, make_operator, op_power
from .scalars import Scalar, exact_div
from .sequences import (
    CONTINUED,
    FIRST,
    SECOND,
    ExpComb,
    FinSupp,
    Lazy,
    Seq,
    apply_upper,
    check_invariance,
    seq_add,
    seq_scale,
    shift_down,
    shift_up,
)
from .eigenstructure import ptdown, qdown, qtdown00, zero_top_pdown


def t42a(x: Seq) -> Seq:
    """y_n = x_n + 2*x_{n-1} (y_0 = x_0): invariant -> inverse invariant, second kind."""
    return seq_add(x, seq_scale(2, shift_up(x)))


def t42b(x: Seq, mode: str = CONTINUED) -> Seq:
    """Inverse Jordan block at 2 after a down-shift: inverse invariant -> invariant, second kind.

    Classical mode is admissible per geometric ratio r when |r| < 2.
    """
    return apply_upper(make_operator("Jinv", 2), shift_down(x), mode)


def t42c(x: Seq) -> Seq:
    """y_n = sum_{k<n} (1/2)**(n-k) * x_k (y_0 = 0): invariant -> inverse invariant, first kind."""
    half = Fraction(1, 2)
    if isinstance(x, ExpComb) and all(r != half for _, r in x.pairs):
        # telescoped geometric sums: each ratio keeps itself and sheds a 1/2 tail
        out = []
        spill = Fraction(0)
        for c, r in x.pairs:
            w = exact_div(c, 2 * r - 1)
            out.append((w, r))
            spill = spill + w
        out.append((-spill, half))
        return ExpComb(tuple(out))

    def oracle(n):
        return sum(Fraction(1, 2 ** (n - k)) * x.term(k) for k in range(n))

    return Lazy(oracle, label="halved-prefix-sum")


def t42d(x: Seq) -> Seq:
    """y_n = -x_n + 2*x_{n+1}: inverse invariant -> invariant, first kind."""
    return seq_add(seq_scale(-1, x), seq_scale(2, shift_down(x)))


@dataclass(frozen=True)
class Stage:
    """One pipeline step with its class bookkeeping.

    ``sets`` gives the output class regardless of input (projection stages);
    ``domain`` is the input class a flip stage expects, its output being the
    same kind with the opposite sign.
    """

    name: str
    run: Callable[[Seq, str], Seq]
    sets: Optional[tuple] = None
    domain: Optional[tuple] = None

    def out_class(self, cls: Optional[tuple]) -> Optional[tuple]:
        if self.sets is not None:
            return self.sets
        if cls is not None and cls == self.domain:
            return (cls[0], -cls[1])
        return None


@dataclass(frozen=True)
class Pipeline:
    steps: tuple

    def apply(self, seq: Seq, mode: str = CONTINUED) -> Seq:
        out = seq
        for stage in self.steps:
            out = stage.run(out, mode)
        return out

    def output_class(self, input_class: Optional[tuple] = None) -> Optional[tuple]:
        cls = input_class
        for stage in self.steps:
            cls = stage.out_class(cls)
        return cls

    def describe(self) -> str:
        return " ; ".join(stage.name for stage in self.steps)


def _matrix_stage(name, op_factory, sets, finsupp_rows=None) -> Stage:
    op = op_factory()
    band = op.band

    def run(seq, mode):
        if isinstance(seq, FinSupp) and finsupp_rows is not None:
            bound = seq.support_bound
            rows = finsupp_rows(bound)
            return FinSupp(
                tuple(
                    sum(op.entry(n, t) * seq.terms[t] for t in range(min(bound, n + 1)))
                    for n in range(rows)
                )
            )

        def oracle(n):
            lo = 0 if band.below is None else max(0, n - band.below)
            return sum(op.entry(n, k) * seq.term(k) for k in range(lo, n + band.above + 1))

        return Lazy(oracle, label=f"{op.label}·seq")

    return Stage(name, run, sets=sets)


_STAGE_PTDOWN = _matrix_stage(
    "PTdown", ptdown, sets=(SECOND, 1), finsupp_rows=lambda b: 2 * b
)
_STAGE_QTDOWN00 = _matrix_stage(
    "QTdown00", qtdown00, sets=(SECOND, -1), finsupp_rows=lambda b: 2 * b + 2
)
_STAGE_QDOWN = _matrix_stage("Qdown", qdown, sets=(FIRST, 1))
_STAGE_ZERO_TOP_PDOWN = _matrix_stage("[0;Pdown]", zero_top_pdown, sets=(FIRST, -1))

_STAGE_T42A = Stage("(J(1)+J(0))^T", lambda s, m: t42a(s), domain=(SECOND, 1))
_STAGE_T42B = Stage("J(2)^-1·J(0)", lambda s, m: t42b(s, m), domain=(SECOND, -1))
_STAGE_T42C = Stage(
    "(-J(-2)^-1)^T·J(0)^T", lambda s, m: t42c(s), domain=(FIRST, 1)
)
_STAGE_T42D = Stage("J(0)+J(-1)", lambda s, m: t42d(s), domain=(FIRST, -1))


TRANSFORM_STAGES = {
    "t42a": _STAGE_T42A,
    "t42b": _STAGE_T42B,
    "t42c": _STAGE_T42C,
    "t42d": _STAGE_T42D,
}


def build_phi(n: int, variant: str = "plain") -> Pipeline:
    """Second-kind generator pipeline of length n.

    The plain variant alternates projection onto the +1 space with the
    sign-flipping banded map; the tilde variant starts from the -1 space.
    Odd/even length decides the class of the output.
    """
    return _build(n, variant, plain=(_STAGE_PTDOWN, _STAGE_T42A),
                  tilde=(_STAGE_T42B, _STAGE_QTDOWN00))


def build_psi(n: int, variant: str = "plain") -> Pipeline:
    """First-kind generator pipeline of length n, mirroring :func:`build_phi`."""
    return _build(n, variant, plain=(_STAGE_QDOWN, _STAGE_T42C),
                  tilde=(_STAGE_T42D, _STAGE_ZERO_TOP_PDOWN))


def _build(n, variant, plain, tilde) -> Pipeline:
    if n < 1:
        raise ValueError("pipeline length must be >= 1")
    if variant not in ("plain", "tilde"):
        raise ValueError(f"variant must be 'plain' or 'tilde', got {variant!r}")
    pos_stage, neg_stage = plain if variant == "plain" else tilde
    steps = []
    for i in range(1, n + 1):
        sign = (-1) ** (i + 1) if variant == "plain" else (-1) ** i
        steps.append(pos_stage if sign == 1 else neg_stage)
    return Pipeline(tuple(steps))


_POWER_BASES = {
    "P+D": (lambda: lin_comb(1, make_operator("P"), 1, make_operator("D")), FIRST, 1),
    "P-D": (lambda: lin_comb(1, make_operator("P"), -1, make_operator("D")), FIRST, -1),
    "PT+D": (lambda: lin_comb(1, make_operator("PT"), 1, make_operator("D")), SECOND, 1),
    "PT-D": (lambda: lin_comb(1, make_operator("PT"), -1, make_operator("D")), SECOND, -1),
}


def power_column(base: str, n: int, j: int, depth: Optional[int] = None) -> Seq:
    """Column j of the n-th power of P+D, P-D, PT+D or PT-D.

    Transposed bases give finitely supported columns; the others give exact
    lazy oracles (``depth`` is accepted for interface symmetry but the oracle
    is exact at every index).
    """
    if base not in _POWER_BASES:
        raise ValueError(f"base must be one of {sorted(_POWER_BASES)}")
    if n < 1:
        raise ValueError("power must be >= 1")
    if j < 0:
        raise ValueError("column index must be >= 0")
    factory, kind, _ = _POWER_BASES[base]
    X = op_power(factory(), n)
    if kind == SECOND:
        return FinSupp(tuple(X.entry(i, j) for i in range(j + 1)))
    return Lazy(lambda i: X.entry(i, j), label=f"({base})^{n} col {j}")


def power_column_class(base: str) -> tuple:
    """The invariance class every column of (base)^n provably belongs to."""
    _, kind, sign = _POWER_BASES[base]
    return (kind, sign)


def orthogonality(x: Seq, y: Seq, depth: int = 32) -> Scalar:
    """Exact value of sum_n x_n * (-1)**n * y_n.

    Needs one finitely supported operand, or two geometric combinations whose
    pairwise ratio products stay inside the unit disc (classical closed form).
    """
    if isinstance(y, FinSupp):
        return sum(
            x.term(n) * (-1) ** n * y.terms[n] for n in range(y.support_bound)
        )
    if isinstance(x, FinSupp):
        return orthogonality(y, x, depth)
    if isinstance(x, ExpComb) and isinstance(y, ExpComb):
        total = 0
        for cx, rx in x.pairs:
            for cy, ry in y.pairs:
                prod = rx * ry
                if not prod * prod < 1:
                    raise UnsupportedPairError(
                        f"ratio product {prod} is outside the unit disc"
                    )
                total = total + exact_div(cx * cy, 1 + prod)
        return total
    raise UnsupportedPairError(
        "need a finitely supported operand or two geometric combinations"
    )


_CONVERSE_CLASSES = {
    "P+D": (SECOND, -1),
    "P-D": (SECOND, 1),
    "PT+D": (FIRST, -1),
    "PT-D": (FIRST, 1),
}


def converse_check(y: Seq, base: str, depth: int) -> bool:
    """Depth-bounded converse test: orthogonality to the columns of the base
    matrix forces the predicted invariance class of y.

    Checks columns 0..depth-1; when any of them fails the orthogonality
    hypothesis the implication holds vacuously.  A ``True`` answer is
    depth-bounded evidence, not a proof.
    """
    if base not in _CONVERSE_CLASSES:
        raise ValueError(f"base must be one of {sorted(_CONVERSE_CLASSES)}")
    if not isinstance(y, FinSupp) or y.support_bound == 0:
        raise ValueError("y must be finitely supported and nonzero")
    factory, _, _ = _POWER_BASES[base]
    X = factory()
    for i in range(depth):
        dot = sum(
            X.entry(n, i) * (-1) ** n * y.terms[n] for n in range(y.support_bound)
        )
        if dot != 0:
            return True  # hypothesis fails: vacuously true
    kind, sign = _CONVERSE_CLASSES[base]
    report = check_invariance(y, kind, depth)
    wanted = "invariant" if sign == 1 else "inverse-invariant"
    return report.verdict == wanted
