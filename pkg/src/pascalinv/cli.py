"""Command-line front end: generate, check, transform, display and verify.

Exit codes: 0 success (``check``: invariant), 2 parse error, 3 inverse
invariant, 4 neither, 5 summation error, 1 verification failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import checks, oeis
from .errors import PascalinvError
from .operators import make_operator, pd, ptd, truncate
from .scalars import format_scalar, parse_scalar, scalar_to_json
from .sequences import (
    AltBernoulli,
    Bernoulli,
    ExpComb,
    FinSupp,
    KSeq,
    Seq,
    bernoulli_number,
    check_invariance,
    fibonacci,
    k_number,
    lucas,
    prefix,
)
from . import eigenstructure as eig
from . import transforms as tr

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVERSE = 3
EXIT_NEITHER = 4
EXIT_SUMMATION = 5

_NAMED_SEQS = {
    "fib": fibonacci,
    "fibonacci": fibonacci,
    "lucas": lucas,
    "bernoulli": Bernoulli,
    "altbernoulli": AltBernoulli,
    "kseq": KSeq,
}


class LiteralError(ValueError):
    pass


def parse_sequence(text: str) -> Seq:
    """Parse ``fib``, ``finsupp:[1,0,-2/3]`` or ``geom:(1,1/3)+(1/2,-2)`` literals."""
    s = text.strip()
    if s in _NAMED_SEQS:
        return _NAMED_SEQS[s]()
    if s.startswith("finsupp:"):
        body = s[len("finsupp:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise LiteralError(f"finsupp literal needs [..]: {text!r}")
        inner = body[1:-1].strip()
        items = [t for t in inner.split(",") if t.strip()] if inner else []
        try:
            return FinSupp(tuple(parse_scalar(t) for t in items))
        except ValueError as exc:
            raise LiteralError(str(exc)) from exc
    if s.startswith("geom:"):
        body = s[len("geom:"):].strip()
        pairs = re.findall(r"\(([^()]*)\)", body)
        leftover = re.sub(r"\(([^()]*)\)", "", body).replace("+", "").strip()
        if not pairs or leftover:
            raise LiteralError(f"geom literal needs (c,r)+(c,r)+...: {text!r}")
        parsed = []
        for p in pairs:
            bits = p.split(",")
            if len(bits) != 2:
                raise LiteralError(f"geom pair needs two scalars: ({p})")
            try:
                parsed.append((parse_scalar(bits[0]), parse_scalar(bits[1])))
            except ValueError as exc:
                raise LiteralError(str(exc)) from exc
        return ExpComb(tuple(parsed))
    raise LiteralError(f"unknown sequence literal: {text!r}")


_PIPE_TOKEN = re.compile(r"^(phi|phitilde|psi|psitilde)\((\d+)\)$")


def parse_pipeline(text: str) -> tr.Pipeline:
    """Parse ``t42a;phi(2);...`` applied left to right (``a;b`` runs a first)."""
    steps = []
    for raw in text.split(";"):
        token = raw.strip()
        if not token:
            raise LiteralError("empty pipeline stage")
        if token in tr.TRANSFORM_STAGES:
            steps.append(tr.TRANSFORM_STAGES[token])
            continue
        m = _PIPE_TOKEN.match(token)
        if not m:
            raise LiteralError(f"unknown pipeline stage: {token!r}")
        name, n = m.group(1), int(m.group(2))
        builder = tr.build_phi if name.startswith("phi") else tr.build_psi
        variant = "tilde" if name.endswith("tilde") else "plain"
        try:
            steps.extend(builder(n, variant).steps)
        except ValueError as exc:
            raise LiteralError(str(exc)) from exc
    return tr.Pipeline(tuple(steps))


_MATRIX_EXTRA = {
    "PD": pd,
    "PTD": ptd,
    "N": eig.make_N,
    "M": eig.make_M,
    "PTdown": eig.ptdown,
    "Qdown": eig.qdown,
    "QTdown00": eig.qtdown00,
    "ZeroTopPdown": eig.zero_top_pdown,
}
_MATRIX_PLAIN = ("P", "PT", "D", "A", "L", "Omega", "Q", "QT")


def resolve_matrix(name: str):
    if name in _MATRIX_PLAIN:
        return make_operator(name)
    if name in _MATRIX_EXTRA:
        return _MATRIX_EXTRA[name]()
    if ":" in name:
        base, _, param = name.partition(":")
        if base in ("J", "Jinv"):
            try:
                return make_operator(base, parse_scalar(param))
            except (ValueError, ZeroDivisionError) as exc:
                raise LiteralError(str(exc)) from exc
    raise LiteralError(f"unknown matrix name: {name!r}")


def _class_phrase(cls) -> str:
    if cls is None:
        return "unclassified"
    kind, sign = cls
    word = "invariant" if sign == 1 else "inverse invariant"
    return f"{word} of the {kind} kind"


def _emit_terms(label: str, terms, cfg, announcement=None) -> None:
    if cfg.format == "json":
        payload = {"label": label, "terms": [scalar_to_json(t) for t in terms]}
        if announcement is not None:
            payload["class"] = announcement
        print(json.dumps(payload))
        return
    line = ",".join(format_scalar(t) for t in terms)
    if cfg.format == "csv":
        print(line)
        return
    print(line)
    if announcement is not None:
        print(f"class: {announcement}")


def cmd_gen(args, cfg) -> int:
    seq = parse_sequence(args.sequence)
    _emit_terms(args.sequence, prefix(seq, cfg.depth), cfg)
    return EXIT_OK


def cmd_check(args, cfg) -> int:
    seq = parse_sequence(args.sequence)
    report = check_invariance(seq, args.kind, cfg.depth, cfg.mode)
    if cfg.format == "json":
        print(json.dumps(report.__dict__))
    else:
        msg = f"{report.verdict} (kind={report.kind}, depth={report.depth}, mode={report.mode})"
        if report.first_failure is not None:
            msg += f", first failure at index {report.first_failure}"
        print(msg)
    if report.verdict == "invariant":
        return EXIT_OK
    if report.verdict == "inverse-invariant":
        return EXIT_INVERSE
    return EXIT_NEITHER


def cmd_apply(args, cfg) -> int:
    pipe = parse_pipeline(args.pipeline)
    seq = parse_sequence(args.sequence)
    out = pipe.apply(seq, cfg.mode)
    announcement = _class_phrase(pipe.output_class())
    _emit_terms(pipe.describe(), prefix(out, cfg.depth), cfg, announcement)
    return EXIT_OK


def cmd_matrix(args, cfg) -> int:
    op = resolve_matrix(args.name)
    block = truncate(op, args.rows, args.cols)
    if cfg.format == "json":
        print(json.dumps({"label": op.label, "entries": block.to_jsonable()}))
    elif cfg.format == "csv":
        print(block.to_csv())
    else:
        print(block)
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    results = checks.run_suite(args.suite, cfg)
    all_ok = all(r.passed for r in results)
    if cfg.format == "json":
        print(
            json.dumps(
                {
                    "suite": args.suite,
                    "all_passed": all_ok,
                    "results": [
                        {
                            "name": r.name,
                            "passed": r.passed,
                            "depth": r.depth,
                            "elapsed_ms": round(r.elapsed_ms, 3),
                        }
                        for r in results
                    ],
                }
            )
        )
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.name} (depth={r.depth}, {r.elapsed_ms:.1f}ms)")
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if all_ok else 1


def cmd_table1(args, cfg) -> int:
    rows = {
        "B": [bernoulli_number(n) for n in range(13)],
        "DB": [(-1) ** n * bernoulli_number(n) for n in range(13)],
        "K": [k_number(n) for n in range(13)],
    }
    if cfg.format == "json":
        print(
            json.dumps(
                {name: [scalar_to_json(v) for v in vals] for name, vals in rows.items()}
            )
        )
        return EXIT_OK
    for name, vals in rows.items():
        line = ",".join(format_scalar(v) for v in vals)
        print(line if cfg.format == "csv" else f"{name}: {line}")
    return EXIT_OK


def cmd_oeis(args, cfg) -> int:
    seq = parse_sequence(args.sequence)
    result = oeis.lookup(
        seq, cfg.depth, offline=args.offline, cache_dir=args.cache_dir
    )
    if cfg.format == "json":
        print(
            json.dumps(
                {
                    "prefix": result.query_prefix,
                    "source": result.source,
                    "matches": [{"id": i, "name": n} for i, n in result.matches],
                }
            )
        )
        return EXIT_OK
    print(f"source: {result.source}")
    for ident, name in result.matches:
        print(f"{ident}  {name}")
    if not result.matches:
        print("no matches")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=32, help="prefix length (default 32)")
    common.add_argument(
        "--mode",
        choices=("classical", "continued"),
        default="continued",
        help="summation mode for second-kind sums",
    )
    common.add_argument(
        "--format", choices=("pretty", "json", "csv"), default="pretty"
    )
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks")

    parser = argparse.ArgumentParser(
        prog="pascalinv",
        description="Exact Pascal-matrix calculus and invariant-sequence toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="print a sequence prefix")
    p.add_argument("sequence")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="classify a sequence")
    p.add_argument("sequence")
    p.add_argument("--kind", choices=("first", "second"), required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("apply", parents=[common], help="run a transform pipeline")
    p.add_argument("pipeline")
    p.add_argument("sequence")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("matrix", parents=[common], help="print an exact matrix block")
    p.add_argument("name")
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=8)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", parents=[common], help="run identity check suites")
    p.add_argument(
        "suite", choices=("inversion", "eigen", "similarity", "transforms", "all")
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", parents=[common], help="Bernoulli-derived rows, n <= 12")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("oeis", parents=[common], help="identify an integer sequence")
    p.add_argument("sequence")
    p.add_argument("--offline", action="store_true")
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_oeis)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = checks.RunConfig(
        depth=args.depth, mode=args.mode, format=args.format, seed=args.seed
    )
    if cfg.depth < 2:
        print("depth must be >= 2", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, cfg)
    except LiteralError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except oeis.NonIntegerSequenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (oeis.NetworkError, oeis.CacheMissError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PascalinvError as exc:
        print(f"summation error: {exc}", file=sys.stderr)
        return EXIT_SUMMATION


if __name__ == "__main__":
    raise SystemExit(main())
