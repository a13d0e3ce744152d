"""pascalinv: exact Pascal-matrix calculus and invariant integer sequences.

Infinite triangular operators built from binomial coefficients, their
involutions and similarity structure, and the sequences they leave fixed,
all in exact rational and quadratic-field arithmetic.
"""
from .scalars import (
    QuadExt,
    Scalar,
    binomial,
    exact_div,
    format_scalar,
    parse_scalar,
    scalar_from_json,
    scalar_to_json,
    simplify,
)
from .errors import (
    DivergentSumError,
    InfiniteSumError,
    PascalinvError,
    PoleError,
    UnsupportedPairError,
    UnsupportedSequenceError,
)
from .operators import (
    Band,
    DenseMat,
    TriOp,
    banded,
    compose,
    delete_leading,
    downshift,
    lin_comb,
    make_operator,
    op_power,
    pd,
    ptd,
    transpose,
    truncate,
)
from .sequences import (
    AltBernoulli,
    Bernoulli,
    ExpComb,
    FinSupp,
    InvarianceReport,
    KSeq,
    Lazy,
    Seq,
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
from .eigenstructure import (
    CoordResult,
    EigenSpaceId,
    basis_vector,
    coords_first_kind,
    factor_chain,
    formal_coords_second_kind,
    make_M,
    make_N,
    make_factor,
    ptdown,
    qdown,
    qtdown00,
    verify_block_diag,
    zero_top_pdown,
)
from .transforms import (
    Pipeline,
    Stage,
    build_phi,
    build_psi,
    converse_check,
    orthogonality,
    power_column,
    power_column_class,
    t42a,
    t42b,
    t42c,
    t42d,
)

__version__ = "0.1.0"
