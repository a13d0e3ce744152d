"""Named verification checks and suites behind the ``verify`` CLI subcommand.

Every check is exact: it either reproduces an identity entry for entry or
fails.  Randomised checks draw from a seeded generator so runs are
reproducible.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import eigenstructure as eig
from . import transforms as tr
from .operators import compose, make_operator, op_power, pd, ptd, truncate, DenseMat
from .sequences import (
    CONTINUED,
    FIRST,
    SECOND,
    AltBernoulli,
    FinSupp,
    KSeq,
    apply_finite,
    apply_upper,
    bernoulli_number,
    check_invariance,
    fibonacci,
    k_number,
    lucas,
    prefix,
    shift_down,
)


@dataclass(frozen=True)
class RunConfig:
    depth: int = 32
    mode: str = CONTINUED
    format: str = "pretty"
    seed: int = 0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    depth: int
    elapsed_ms: float
    detail: str = ""


def _random_finsupp(rng: random.Random, max_len: int = 8) -> FinSupp:
    n = rng.randint(1, max_len)
    terms = [Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3))) for _ in range(n)]
    return FinSupp(tuple(terms))


def _result(name, cfg, passed, detail=""):
    return name, passed, detail


def check_pd_involution(cfg: RunConfig):
    s = cfg.depth
    ok = truncate(op_power(pd(), 2), s, s) == DenseMat.identity(s)
    return _result("pd-involution", cfg, ok)


def check_pascal_inverse(cfg: RunConfig):
    s = cfg.depth
    p = make_operator("P")
    d = make_operator("D")
    dpd = compose(d, compose(p, d))
    ok = truncate(compose(dpd, p), s, s) == DenseMat.identity(s)
    ok = ok and truncate(compose(p, dpd), s, s) == DenseMat.identity(s)
    return _result("pascal-inverse", cfg, ok)


def check_ptd_involution(cfg: RunConfig):
    rng = random.Random(cfg.seed)
    op = ptd()
    ok = True
    for _ in range(20):
        x = _random_finsupp(rng)
        twice = apply_upper(op, apply_upper(op, x))
        if twice != x:
            ok = False
            break
    return _result("ptd-involution", cfg, ok)


def check_binomial_involution(cfg: RunConfig):
    rng = random.Random(cfg.seed + 1)
    op = pd()
    ok = True
    for _ in range(20):
        x = _random_finsupp(rng)
        once = FinSupp(tuple(apply_finite(op, x, cfg.depth)))
        twice = apply_finite(op, once, cfg.depth)
        if twice != prefix(x, cfg.depth):
            ok = False
            break
    return _result("binomial-involution", cfg, ok)


def check_nm_identity(cfg: RunConfig):
    s = cfg.depth
    n_op, m_op = eig.make_N(), eig.make_M()
    ident = DenseMat.identity(s)
    ok = truncate(compose(n_op, m_op), s, s) == ident
    ok = ok and truncate(compose(m_op, n_op), s, s) == ident
    return _result("NM-identity", cfg, ok)


def check_block_diag(cfg: RunConfig):
    ok = all(eig.verify_block_diag(m) for m in range(1, min(8, cfg.depth // 2) + 1))
    return _result("block-diag", cfg, ok)


def check_stabilization(cfg: RunConfig):
    ok = True
    for m in range(1, min(6, cfg.depth // 2) + 1):
        s = 2 * m
        if truncate(eig.factor_chain("H", m), s, s) != truncate(eig.make_N(), s, s):
            ok = False
        if truncate(eig.factor_chain("U", m), s, s) != truncate(eig.make_M(), s, s):
            ok = False
    return _result("stabilization", cfg, ok)


def _eigen_pair(space: eig.EigenSpaceId, j: int, depth: int) -> bool:
    vec = eig.basis_vector(space, j)
    sign = space.eigenvalue
    if space.operator == "PTD":
        image = apply_upper(ptd(), vec)
        return prefix(image, depth) == [sign * t for t in prefix(vec, depth)]
    image = apply_finite(pd(), vec, depth)
    return image == [sign * t for t in prefix(vec, depth)]


def check_basis_eigen(cfg: RunConfig):
    ok = True
    for op in ("PD", "PTD"):
        for ev in (1, -1):
            space = eig.EigenSpaceId(op, ev)
            for j in range(9):
                if not _eigen_pair(space, j, cfg.depth):
                    ok = False
    return _result("basis-eigen", cfg, ok)


_MATRIX_FORMS = {
    ("PTD", 1): eig.ptdown,
    ("PTD", -1): eig.qtdown00,
    ("PD", 1): eig.qdown,
    ("PD", -1): eig.zero_top_pdown,
}


def check_basis_matrix_agreement(cfg: RunConfig):
    ok = True
    for (op, ev), form in _MATRIX_FORMS.items():
        mat = form()
        space = eig.EigenSpaceId(op, ev)
        for j in range(9):
            vec = eig.basis_vector(space, j)
            col = [mat.entry(i, j) for i in range(cfg.depth)]
            if prefix(vec, cfg.depth) != col:
                ok = False
    return _result("basis-matrix-agreement", cfg, ok)


_TABLE1_B = [
    Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30),
    Fraction(0), Fraction(1, 42), Fraction(0), Fraction(-1, 30), Fraction(0),
    Fraction(5, 66), Fraction(0), Fraction(-691, 2730),
]
_TABLE1_K = [
    Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 6),
    Fraction(1, 15), Fraction(1, 30), Fraction(1, 35), Fraction(1, 70),
    Fraction(-1, 105), Fraction(-1, 210), Fraction(41, 1155), Fraction(41, 2310),
]


def check_table1(cfg: RunConfig):
    b = [bernoulli_number(n) for n in range(13)]
    db = [(-1) ** n * bernoulli_number(n) for n in range(13)]
    k = [k_number(n) for n in range(13)]
    ok = b == _TABLE1_B
    ok = ok and db == [(-1) ** n * v for n, v in enumerate(_TABLE1_B)]
    ok = ok and k == _TABLE1_K
    return _result("table1", cfg, ok)


def check_transform_orbit(cfg: RunConfig):
    dep = cfg.depth
    fib, luc = fibonacci(), lucas()
    j0f, j0l = shift_down(fib), shift_down(luc)
    ok = prefix(tr.t42c(luc), dep) == prefix(fib, dep)
    ok = ok and prefix(tr.t42d(fib), dep) == prefix(luc, dep)
    ok = ok and prefix(tr.t42a(j0f), dep) == prefix(j0l, dep)
    ok = ok and prefix(tr.t42b(j0l, cfg.mode), dep) == prefix(j0f, dep)
    ok = ok and prefix(tr.t42c(AltBernoulli()), dep) == prefix(KSeq(), dep)
    ok = ok and prefix(tr.t42d(KSeq()), dep) == prefix(AltBernoulli(), dep)
    return _result("transform-orbit", cfg, ok)


_POWER_COLUMN_CLASSES = {
    "P+D": (FIRST, "invariant"),
    "P-D": (FIRST, "inverse-invariant"),
    "PT+D": (SECOND, "invariant"),
    "PT-D": (SECOND, "inverse-invariant"),
}


def check_power_columns(cfg: RunConfig):
    ok = True
    for base, (kind, wanted) in _POWER_COLUMN_CLASSES.items():
        for n in (1, 2):
            for j in range(5):
                col = tr.power_column(base, n, j)
                if isinstance(col, FinSupp) and col.support_bound == 0:
                    continue  # the zero sequence lies in both eigenspaces
                report = check_invariance(col, kind, cfg.depth, cfg.mode)
                if report.verdict != wanted:
                    ok = False
    return _result("power-columns", cfg, ok)


def check_orthogonality(cfg: RunConfig):
    rng = random.Random(cfg.seed + 2)
    ok = True
    for _ in range(10):
        j, jj = rng.randint(0, 6), rng.randint(0, 6)
        x = eig.basis_vector(eig.EigenSpaceId("PD", 1), j)
        y = eig.basis_vector(eig.EigenSpaceId("PTD", -1), jj)
        if tr.orthogonality(x, y, cfg.depth) != 0:
            ok = False
        x = eig.basis_vector(eig.EigenSpaceId("PD", -1), j)
        y = eig.basis_vector(eig.EigenSpaceId("PTD", 1), jj)
        if tr.orthogonality(x, y, cfg.depth) != 0:
            ok = False
    for base, space in (("P+D", ("PTD", -1)), ("P-D", ("PTD", 1))):
        y = eig.basis_vector(eig.EigenSpaceId(*space), 2)
        if not tr.converse_check(y, base, min(cfg.depth, 24)):
            ok = False
    return _result("orthogonality", cfg, ok)


def check_pipeline_classes(cfg: RunConfig):
    rng = random.Random(cfg.seed + 3)
    ok = True
    builders = [
        (tr.build_phi, "plain"), (tr.build_phi, "tilde"),
        (tr.build_psi, "plain"), (tr.build_psi, "tilde"),
    ]
    dep = min(cfg.depth, 24)
    for build, variant in builders:
        for n in (1, 2, 3):
            pipe = build(n, variant)
            kind, sign = pipe.output_class()
            wanted = "invariant" if sign == 1 else "inverse-invariant"
            for _ in range(3):
                x = _random_finsupp(rng, max_len=5)
                if x.support_bound == 0:
                    continue
                y = pipe.apply(x, cfg.mode)
                report = check_invariance(y, kind, dep, cfg.mode)
                if report.verdict != wanted and prefix(y, dep) != [0] * dep:
                    ok = False
    return _result("pipeline-classes", cfg, ok)


SUITES = {
    "inversion": [
        check_pd_involution,
        check_pascal_inverse,
        check_ptd_involution,
        check_binomial_involution,
    ],
    "similarity": [check_nm_identity, check_block_diag, check_stabilization],
    "eigen": [check_basis_eigen, check_basis_matrix_agreement],
    "transforms": [
        check_table1,
        check_transform_orbit,
        check_power_columns,
        check_orthogonality,
        check_pipeline_classes,
    ],
}


def run_suite(suite: str, cfg: RunConfig) -> list[CheckResult]:
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    results = []
    for name in names:
        for fn in SUITES[name]:
            start = time.perf_counter()
            check_name, passed, detail = fn(cfg)
            elapsed = (time.perf_counter() - start) * 1000.0
            results.append(CheckResult(check_name, passed, cfg.depth, elapsed, detail))
    return results
