"""Similarity machinery for the signed Pascal involutions and their eigenbases.

The involution P^T D is similar, through an explicit unit upper-triangular N
with inverse M, to an infinite direct sum of 2x2 blocks; D M^T D conjugates
P D to the mirrored block sum.  The columns of four staggered Pascal-type
matrices then give bases of the four eigenspaces (eigenvalues +1 and -1 of
P D and P^T D), and expansion in those bases is a triangular solve.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

from .operators import (
    UPPER,
    DenseMat,
    TriOp,
    banded,
    compose,
    delete_leading,
    downshift,
    make_operator,
    pd,
    ptd,
    transpose,
    truncate,
)
from .scalars import binomial, exact_div
from .sequences import FinSupp, Lazy, Seq, prefix


def _n_entry(i: int, j: int) -> int:
    if i == 0 and j == 0:
        return 1
    if i == 0 or j == 0:
        return 0
    if i <= j:
        k = (i - 1) // 2
        return (-1) ** (j - i) * binomial(k + j - i, k)
    return 0


def _m_entry(i: int, j: int) -> int:
    if i == 0 and j == 0:
        return 1
    if i == 0 or j == 0:
        return 0
    if i <= j:
        return binomial(j // 2, j - i)
    return 0


def make_N() -> TriOp:
    """The stabilised product of the H factors, by its closed-form entries."""
    return TriOp(UPPER, _n_entry, "N", ("N",))


def make_M() -> TriOp:
    """The inverse of N (stabilised product of the U factors)."""
    return TriOp(UPPER, _m_entry, "M", ("M",))


def make_factor(kind: str, k: int) -> TriOp:
    """Factor H(k) or U(k): the identity below index 2k-1, then an A or J(1) block.

    The block offset 2k-1 is forced by H(1)*U(1) = I and by matching the
    closed forms of N and M.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    offset = 2 * k - 1
    if kind == "H":
        block = make_operator("A")
        band = UPPER
    elif kind == "U":
        block = make_operator("J", 1)
        band = banded(0, 1)
    else:
        raise ValueError(f"kind must be 'H' or 'U', got {kind!r}")
    be = block.entry

    def entry(i, j, o=offset, be=be):
        if i < o or j < o:
            return 1 if i == j else 0
        return be(i - o, j - o)

    return TriOp(band, entry, f"{kind}({k})")


def factor_chain(kind: str, m: int) -> TriOp:
    """H(m)*...*H(1) for kind 'H', or U(1)*...*U(m) for kind 'U'."""
    if m < 1:
        raise ValueError("m must be >= 1")
    ks = range(m, 0, -1) if kind == "H" else range(1, m + 1)
    return reduce(compose, [make_factor(kind, k) for k in ks])


def _block_sum(block, m: int) -> DenseMat:
    rows = [[0] * (2 * m) for _ in range(2 * m)]
    for t in range(m):
        for i in range(2):
            for j in range(2):
                rows[2 * t + i][2 * t + j] = block[i][j]
    return DenseMat.from_rows(rows)


@lru_cache(maxsize=None)
def _conjugated_ptd() -> TriOp:
    return compose(compose(make_N(), ptd()), make_M())


@lru_cache(maxsize=None)
def _conjugated_pd() -> TriOp:
    d = make_operator("D")
    dmtd = compose(d, compose(transpose(make_M()), d))
    dntd = compose(d, compose(transpose(make_N()), d))
    return compose(compose(dmtd, pd()), dntd)


def verify_block_diag(m: int) -> bool:
    """Check both similarity products against their 2x2 block sums on a 2m block."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = 2 * m
    upper_ok = truncate(_conjugated_ptd(), s, s) == _block_sum([[1, -1], [0, -1]], m)
    lower_ok = truncate(_conjugated_pd(), s, s) == _block_sum([[1, 0], [1, -1]], m)
    return upper_ok and lower_ok


def ptdown() -> TriOp:
    """Down-shifted transposed Pascal matrix; its columns span the +1 space of P^T D."""
    return downshift(make_operator("PT"))


def qtdown00() -> TriOp:
    """Down-shifted Q^T with row 0 and column 0 removed; columns span the -1 space of P^T D."""
    return delete_leading(downshift(make_operator("QT")), 1, 1)


def qdown() -> TriOp:
    """Down-shifted Q; its columns span the +1 space of P D."""
    return downshift(make_operator("Q"))


def zero_top_pdown() -> TriOp:
    """Down-shifted Pascal matrix under one zero row; columns span the -1 space of P D."""
    return compose(transpose(make_operator("J", 0)), downshift(make_operator("P")))


@dataclass(frozen=True)
class EigenSpaceId:
    """One of the four eigenspaces: operator 'PD' or 'PTD', eigenvalue +1 or -1."""

    operator: str
    eigenvalue: int

    def __post_init__(self):
        if self.operator not in ("PD", "PTD"):
            raise ValueError(f"operator must be 'PD' or 'PTD', got {self.operator!r}")
        if self.eigenvalue not in (1, -1):
            raise ValueError("eigenvalue must be +1 or -1")


def basis_vector(space: EigenSpaceId, j: int) -> Seq:
    """The j-th basis vector of the given eigenspace.

    The P^T D spaces have finitely supported bases, returned as explicit
    term tuples.  The P D spaces have infinite basis vectors, returned as
    exact lazy oracles; callers choose how far to expand them.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    if space.operator == "PTD":
        if space.eigenvalue == 1:
            return FinSupp((0,) * j + tuple(binomial(j, t) for t in range(j + 1)))
        return FinSupp(
            (0,) * j
            + tuple(binomial(j + 1, t) + binomial(j, t - 1) for t in range(j + 2))
        )
    if space.eigenvalue == 1:
        return Lazy(
            lambda i: (-1) ** i * (2 * _n_entry(2 * j, i) - _n_entry(2 * j + 1, i)),
            label=f"E+1(PD) basis {j}",
        )
    return Lazy(
        lambda i: (-1) ** (i + 1) * _n_entry(2 * j + 1, i),
        label=f"E-1(PD) basis {j}",
    )


@dataclass(frozen=True)
class CoordResult:
    """Expansion data from a staggered-basis solve."""

    coefficients: list
    residual_ok: bool
    pivot_rows: list


def coords_first_kind(x: Seq, sign: int, depth: int) -> CoordResult:
    """Expand a prefix of x in the first-kind basis for the given sign.

    Pivots sit at every other row (leading entries 2 for sign +1, 1 for
    sign -1), so the non-pivot rows carry real constraints: ``residual_ok``
    is the membership verdict at this depth.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if depth < 2:
        raise ValueError("depth must be >= 2")
    basis = qdown() if sign == 1 else zero_top_pdown()
    pivot_of = (lambda j: 2 * j) if sign == 1 else (lambda j: 2 * j + 1)
    ncoef = sum(1 for j in range(depth) if pivot_of(j) < depth)
    if ncoef == 0:
        raise ValueError("depth too small to determine any coefficient")
    xs = prefix(x, depth)
    coeffs: list = []
    pivots = []
    for j in range(ncoef):
        row = pivot_of(j)
        pivots.append(row)
        acc = xs[row] - sum(coeffs[t] * basis.entry(row, t) for t in range(j))
        lead = basis.entry(row, j)
        coeffs.append(acc if lead == 1 else exact_div(acc, lead))
    residual_ok = True
    pivot_set = set(pivots)
    for i in range(depth):
        if i in pivot_set:
            continue
        recon = sum(coeffs[t] * basis.entry(i, t) for t in range(ncoef))
        if recon != xs[i]:
            residual_ok = False
            break
    return CoordResult(coeffs, residual_ok, pivots)


def formal_coords_second_kind(x: Seq, sign: int, depth: int) -> CoordResult:
    """Expand a prefix of x in the second-kind basis for the given sign.

    Both basis matrices are unit lower triangular with a pivot in every row,
    so the solve always succeeds; the coefficients are formal expansion data
    and carry no membership information.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if depth < 2:
        raise ValueError("depth must be >= 2")
    basis = ptdown() if sign == 1 else qtdown00()
    xs = prefix(x, depth)
    coeffs: list = []
    for i in range(depth):
        acc = xs[i] - sum(coeffs[t] * basis.entry(i, t) for t in range(i))
        coeffs.append(acc)
    return CoordResult(coeffs, True, list(range(depth)))
