"""Lazy infinite triangular and banded matrices with exact entry oracles.

A :class:`TriOp` is a pure function (i, j) -> scalar together with band
metadata bounding its support.  Operators are never materialised; composition
builds a new oracle whose inner summation range is finite by construction,
and :func:`truncate` produces exact finite blocks on demand.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Callable, Optional

from .errors import InfiniteSumError
from .scalars import (
    QuadExt,
    Scalar,
    binomial,
    format_scalar,
    scalar_to_json,
)


@dataclass(frozen=True)
class Band:
    """Support bound: entry(i, j) may be nonzero only if -below <= j - i <= above.

    ``None`` means unbounded on that side.
    """

    below: Optional[int]
    above: Optional[int]


LOWER = Band(None, 0)
UPPER = Band(0, None)
GENERAL = Band(None, None)


def banded(lo: int, hi: int) -> Band:
    return Band(lo, hi)


def _bound_add(x: Optional[int], y: Optional[int]) -> Optional[int]:
    if x is None or y is None:
        return None
    return x + y


def _bound_max(x: Optional[int], y: Optional[int]) -> Optional[int]:
    if x is None or y is None:
        return None
    return max(x, y)


@dataclass(frozen=True)
class TriOp:
    """Immutable lazily evaluated infinite matrix."""

    band: Band
    entry: Callable[[int, int], Scalar] = field(compare=False)
    label: str
    tag: Optional[tuple] = None

    @property
    def shape(self) -> str:
        b = self.band
        if b.below is None and b.above is None:
            return "general"
        if b.below is None:
            return "lower" if b.above == 0 else "lower-banded"
        if b.above is None:
            return "upper" if b.below == 0 else "upper-banded"
        return "banded"

    def __repr__(self):
        return f"TriOp({self.label!r}, {self.shape})"


def _scalar_inverse(x: Scalar) -> Scalar:
    if isinstance(x, QuadExt):
        return x.inverse()
    return Fraction(1) / Fraction(x)


def make_operator(name: str, param: Scalar | None = None) -> TriOp:
    """Construct a named operator.

    ``J`` and ``Jinv`` take the diagonal value as ``param``; ``Jinv`` requires
    it nonzero.  All other names take no parameter.
    """
    if name in ("J", "Jinv"):
        if param is None:
            raise ValueError(f"{name} requires a parameter")
    elif param is not None:
        raise ValueError(f"{name} takes no parameter")

    if name == "P":
        return TriOp(LOWER, lambda i, j: binomial(i, j), "P", ("P",))
    if name == "PT":
        return TriOp(UPPER, lambda i, j: binomial(j, i), "P^T", ("PT",))
    if name == "D":
        return TriOp(banded(0, 0), lambda i, j: (-1) ** i if i == j else 0, "D", ("D",))
    if name == "J":
        a = param

        def j_entry(i, j, a=a):
            if j == i:
                return a
            if j == i + 1:
                return 1
            return 0

        return TriOp(banded(0, 1), j_entry, f"J({format_scalar(a)})", ("J", a))
    if name == "Jinv":
        a = param
        ainv = _scalar_inverse(a)  # raises ZeroDivisionError for param 0

        def jinv_entry(i, j, ainv=ainv):
            if i > j:
                return 0
            return (-1) ** (j - i) * ainv ** (j - i + 1)

        return TriOp(UPPER, jinv_entry, f"J({format_scalar(a)})^-1", ("Jinv", a))
    if name == "A":
        return TriOp(UPPER, lambda i, j: (-1) ** (j - i) if i <= j else 0, "A", ("A",))
    if name == "L":
        return TriOp(LOWER, lambda i, j: (-1) ** (i + j) if i >= j else 0, "L", ("L",))
    if name == "Omega":
        return TriOp(LOWER, lambda i, j: 1 if i >= j else 0, "Ω", ("Omega",))
    if name == "Q":
        return TriOp(LOWER, _q_entry, "Q", ("Q",))
    if name == "QT":
        return TriOp(UPPER, lambda i, j: _q_entry(j, i), "Q^T", ("QT",))
    raise ValueError(f"unknown operator name: {name!r}")


def _q_entry(i: int, j: int) -> int:
    # block sum P + (1 (+) P): the corner of the second block contributes 1 at (0, 0)
    block = 1 if i == 0 and j == 0 else binomial(i - 1, j - 1)
    return binomial(i, j) + block


def pd() -> TriOp:
    """The signed Pascal involution: entry (i, j) = C(i, j) * (-1)^j, lower triangular."""
    op = compose(make_operator("P"), make_operator("D"))
    return replace(op, label="PD", tag=("PD",))


def ptd() -> TriOp:
    """The transposed signed Pascal involution: entry (i, j) = C(j, i) * (-1)^j, upper triangular."""
    op = compose(make_operator("PT"), make_operator("D"))
    return replace(op, label="P^T D", tag=("PTD",))


def transpose(op: TriOp) -> TriOp:
    inner = op.entry
    return TriOp(
        Band(op.band.above, op.band.below),
        lambda i, j: inner(j, i),
        f"{op.label}^T",
    )


def lin_comb(c1: Scalar, op1: TriOp, c2: Scalar, op2: TriOp) -> TriOp:
    """Entrywise c1*op1 + c2*op2; the band is the union of the two bands."""
    e1, e2 = op1.entry, op2.entry

    def entry(i, j):
        return c1 * e1(i, j) + c2 * e2(i, j)

    def term(c, lab):
        if c == 1:
            return f"+{lab}"
        if c == -1:
            return f"-{lab}"
        return f"+{format_scalar(c)}·{lab}"

    label = (term(c1, op1.label) + term(c2, op2.label)).lstrip("+")
    band = Band(
        _bound_max(op1.band.below, op2.band.below),
        _bound_max(op1.band.above, op2.band.above),
    )
    return TriOp(band, entry, label)


def compose(left: TriOp, right: TriOp) -> TriOp:
    """Matrix product with a finite inner summation range for every entry.

    Legality is decided from the band metadata alone: the inner index is
    bounded above by ``i + left.above`` or ``j + right.below``, so at least
    one of those must be finite.
    """
    lb, rb = left.band, right.band
    if lb.above is None and rb.below is None:
        raise InfiniteSumError(
            f"compose({left.label}, {right.label}): inner summation range is unbounded"
        )
    le, re_ = left.entry, right.entry

    @lru_cache(maxsize=None)
    def entry(i, j):
        lo = 0
        if lb.below is not None:
            lo = max(lo, i - lb.below)
        if rb.above is not None:
            lo = max(lo, j - rb.above)
        his = []
        if lb.above is not None:
            his.append(i + lb.above)
        if rb.below is not None:
            his.append(j + rb.below)
        hi = min(his)
        total = 0
        for k in range(lo, hi + 1):
            total += le(i, k) * re_(k, j)
        return total

    band = Band(_bound_add(lb.below, rb.below), _bound_add(lb.above, rb.above))
    return TriOp(band, entry, f"{left.label}·{right.label}")


def downshift(op: TriOp) -> TriOp:
    """Push column j down by j rows; the result is always lower triangular."""
    inner = op.entry

    def entry(i, j):
        if i < j:
            return 0
        return inner(i - j, j)

    return TriOp(LOWER, entry, f"{op.label}↓")


def delete_leading(op: TriOp, r: int, c: int) -> TriOp:
    """Drop the first r rows and c columns: entry'(i, j) = entry(i + r, j + c)."""
    if r < 0 or c < 0:
        raise ValueError("row/column counts must be nonnegative")
    inner = op.entry

    def shift(bound, delta):
        if bound is None:
            return None
        return max(0, bound + delta)

    band = Band(shift(op.band.below, c - r), shift(op.band.above, r - c))
    return TriOp(band, lambda i, j: inner(i + r, j + c), f"{op.label}({r}|{c})")


def op_power(op: TriOp, n: int) -> TriOp:
    if n < 1:
        raise ValueError("power must be >= 1")
    out = reduce(compose, [op] * n)
    if n == 1:
        return out
    return replace(out, label=f"({op.label})^{n}")


@dataclass(frozen=True)
class DenseMat:
    """Finite exact matrix, the result of truncating a lazy operator."""

    rows: int
    cols: int
    data: tuple

    @classmethod
    def from_rows(cls, rows) -> DenseMat:
        data = tuple(tuple(row) for row in rows)
        if not data or any(len(r) != len(data[0]) for r in data):
            raise ValueError("rows must be nonempty and rectangular")
        return cls(len(data), len(data[0]), data)

    @classmethod
    def identity(cls, n: int) -> DenseMat:
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other: DenseMat) -> DenseMat:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return DenseMat.from_rows(
            [
                [
                    sum(self.data[i][k] * other.data[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def to_jsonable(self):
        return [[scalar_to_json(e) for e in row] for row in self.data]

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())

    def to_csv(self) -> str:
        return "\n".join(",".join(format_scalar(e) for e in row) for row in self.data)

    def __str__(self):
        cells = [[format_scalar(e) for e in row] for row in self.data]
        widths = [max(len(cells[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join(
            "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells
        )


def truncate(op: TriOp, m: int, n: int) -> DenseMat:
    """Exact top-left m x n block of the operator."""
    if m < 1 or n < 1:
        raise ValueError("truncation dimensions must be >= 1")
    return DenseMat.from_rows([[op.entry(i, j) for j in range(n)] for i in range(m)])
