#!/usr/bin/env python
"""Command line over the overshear engine; one JSON report per line on stdout."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from random import Random
from typing import Callable, Iterable, List, Optional, Sequence

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))

from pydantic import BaseModel

from domain.errors import (
    ConstantTermError,
    ExpressionSyntaxError,
    OvershearError,
)
from domain.exppoly import gaussian
from domain.grammar import parse_exppoly, parse_poly
from domain.reports import (
    ApplyReport,
    BchReport,
    BracketReport,
    ConjugateReport,
    DecomposeReport,
    ErrorReport,
    FlowReport,
    HyperbolicReport,
    RankReport,
    ReduceReport,
)
from domain.settings import get_settings
from domain.surface import (
    Surface,
    apply_hyperbolic,
    format_point,
    is_on_surface,
    make_surface,
    parse_point,
    relative_residual,
    require_on_surface,
    residual,
)
from sim.amalgam import Letter
from sim.fields import (
    BracketComparison,
    OvershearField,
    compare_of_bracket,
    compare_sf_of_bracket,
    iterated_bracket_rank,
)
from sim.flows import flow_closed_form, flow_numeric, flow_symbolic_or_none, generator_check
from sim.nilpotent import (
    bch_K,
    bch_series,
    bch_Z,
    decompose_product,
    factor_bound,
    format_matrix,
    format_rational,
    in_derived_algebra,
    mexp,
    parse_matrix_json,
    reconstruct,
)
from sim.osgroup import OS_GROUP, O1_TAG, word_apply
from sim.samplers import random_nil_matrix, random_unipotent
from sim.suite import CHECKS, run_suite
from sim.wordfile import format_letter, format_word, load_word

LOGGER = logging.getLogger("scripts.overshear")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_PRECONDITION = 4

DEFAULT_SURFACE = "z^4 - 1"

Outcome = tuple[List[BaseModel], int]


def _surface(args: argparse.Namespace) -> Surface:
    return make_surface(parse_poly(args.surface, "z"))


def _exact_time(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ExpressionSyntaxError(f"invalid time {text!r}", position=0) from exc


def _bracket_report(comparison: BracketComparison) -> BracketReport:
    return BracketReport(
        lhs=str(comparison.lhs),
        rhs=str(comparison.rhs),
        equal=comparison.equal,
        sign=comparison.verdict,
    )


def cmd_reduce(args: argparse.Namespace) -> Outcome:
    word = OS_GROUP.reduce(load_word(args.word_file))
    report = ReduceReport(
        word=format_word(word),
        length=len(word),
        cyclically_reduced=OS_GROUP.is_cyclically_reduced(word),
    )
    return [report], EXIT_OK


def cmd_conjugate(args: argparse.Namespace) -> Outcome:
    word = load_word(args.word_file)
    found = OS_GROUP.conjugate_into_factor(word)
    if found is None:
        return [ConjugateReport(result="none")], EXIT_OK
    conjugator, letter = found
    core = "" if letter is None else format_letter(letter)
    factor = "identity" if letter is None else letter.tag
    return [
        ConjugateReport(
            result="found",
            conjugator=format_word(conjugator),
            core=core,
            factor=factor,
        )
    ], EXIT_OK


def cmd_apply(args: argparse.Namespace) -> Outcome:
    surface = _surface(args)
    point = require_on_surface(surface, parse_point(args.point))
    image = word_apply(surface, load_word(args.word_file), point)
    on_surface = is_on_surface(surface, image)
    report = ApplyReport(
        point=format_point(image),
        residual=residual(surface, image),
        relative_residual=relative_residual(surface, image),
        on_surface=on_surface,
    )
    return [report], EXIT_OK if on_surface else EXIT_INVARIANT


def cmd_bracket(args: argparse.Namespace) -> Outcome:
    comparison = compare_of_bracket(
        parse_exppoly(args.f),
        parse_exppoly(args.g),
        parse_exppoly(args.h),
        parse_exppoly(args.k),
        _surface(args),
    )
    return [_bracket_report(comparison)], EXIT_OK if comparison.equal else EXIT_INVARIANT


def cmd_sf_bracket(args: argparse.Namespace) -> Outcome:
    comparison = compare_sf_of_bracket(
        parse_exppoly(args.h), parse_exppoly(args.f), parse_exppoly(args.g), _surface(args)
    )
    return [_bracket_report(comparison)], EXIT_OK if comparison.verdict != "mismatch" else EXIT_INVARIANT


def cmd_flow(args: argparse.Namespace) -> Outcome:
    surface = _surface(args)
    f = parse_exppoly(args.f)
    g = parse_exppoly(args.g)
    exact_t = _exact_time(args.t)
    t = float(exact_t)
    point = require_on_surface(surface, parse_point(args.point))

    image = flow_closed_form(surface, f, g, t, point)
    symbolic = flow_symbolic_or_none(f, g, gaussian(exact_t))
    report = FlowReport(
        closed_form=format_point(image),
        closed_form_residual=relative_residual(surface, image),
        symbolic_available=symbolic is not None,
        symbolic=format_letter(Letter(O1_TAG, symbolic)) if symbolic is not None else None,
        generator_error=generator_check(surface, f, g, point),
    )
    if args.steps:
        numeric = flow_numeric(surface, OvershearField(f, g), point, t, args.steps)
        report.rk4 = format_point(numeric)
        report.rk4_distance = numeric.distance(image)
        report.steps = args.steps
    code = EXIT_OK if is_on_surface(surface, image) else EXIT_INVARIANT
    return [report], code


def cmd_rank(args: argparse.Namespace) -> Outcome:
    rank = iterated_bracket_rank(
        _surface(args),
        parse_exppoly(args.f),
        parse_exppoly(args.g),
        parse_exppoly(args.h),
        args.N,
    )
    expected = args.N + 2
    report = RankReport(rank=rank, expected=expected, matches=rank == expected)
    return [report], EXIT_OK if report.matches else EXIT_INVARIANT


def cmd_bch(args: argparse.Namespace) -> Outcome:
    rng = Random(args.seed)
    x = random_nil_matrix(rng, args.size)
    y = random_nil_matrix(rng, args.size)
    K = bch_K(x, y)
    identity_exact = mexp(x + y) == mexp(x) * mexp(y) * mexp(K)
    derived = in_derived_algebra(K)
    series: Optional[bool] = None
    if args.size <= 5:
        series = bch_series(x, y, 4) == bch_Z(x, y)
    report = BchReport(
        size=args.size,
        seed=args.seed,
        identity_exact=identity_exact,
        K_in_derived=derived,
        series_matches=series,
        K=format_matrix(K),
    )
    ok = identity_exact and derived and series is not False
    return [report], EXIT_OK if ok else EXIT_INVARIANT


def cmd_decompose(args: argparse.Namespace) -> Outcome:
    if args.matrix is not None:
        g = parse_matrix_json(args.matrix)
    else:
        g = random_unipotent(Random(args.seed), args.size)
    factors = decompose_product(g)
    n = g.rows
    reconstructs = reconstruct(factors, n) == g
    report = DecomposeReport(
        factors=[(index, format_rational(value)) for index, value in factors],
        reconstructs=reconstructs,
        bound=factor_bound(n),
        count=len(factors),
    )
    return [report], EXIT_OK if reconstructs else EXIT_INVARIANT


def cmd_hyperbolic(args: argparse.Namespace) -> Outcome:
    surface = _surface(args)
    point = require_on_surface(surface, parse_point(args.point))
    image = apply_hyperbolic(surface, parse_poly(args.fz, "z"), float(_exact_time(args.t)), point)
    report = HyperbolicReport(point=format_point(image), residual=residual(surface, image))
    return [report], EXIT_OK if is_on_surface(surface, image) else EXIT_INVARIANT


def cmd_suite(args: argparse.Namespace) -> Outcome:
    reports = run_suite(args.check, base_seed=args.seed, workers=args.workers, scale=args.scale)
    code = EXIT_OK if all(report.passed for report in reports) else EXIT_INVARIANT
    return list(reports), code


def _add_surface(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--surface",
        default=DEFAULT_SURFACE,
        help=f"Surface polynomial p(z) (default: {DEFAULT_SURFACE!r})",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Overshear group engine for surfaces xy = p(z)")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Log verbosity",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    reduce_cmd = commands.add_parser("reduce", help="Reduce a word and report its length")
    reduce_cmd.add_argument("word_file", type=Path)
    reduce_cmd.set_defaults(handler=cmd_reduce)

    conjugate_cmd = commands.add_parser("conjugate", help="Conjugate a word into one factor")
    conjugate_cmd.add_argument("word_file", type=Path)
    conjugate_cmd.set_defaults(handler=cmd_conjugate)

    apply_cmd = commands.add_parser("apply", help="Apply a word to a surface point")
    apply_cmd.add_argument("word_file", type=Path)
    apply_cmd.add_argument("--point", required=True, help="Point as 'x,y,z' complex numbers")
    _add_surface(apply_cmd)
    apply_cmd.set_defaults(handler=cmd_apply)

    bracket_cmd = commands.add_parser("bracket", help="Check [OF_{f,g}, OF_{h,k}] = x SF_{gh-kf}")
    for name in ("f", "g", "h", "k"):
        bracket_cmd.add_argument(f"--{name}", required=True, help="Exp-polynomial in x")
    _add_surface(bracket_cmd)
    bracket_cmd.set_defaults(handler=cmd_bracket)

    sf_cmd = commands.add_parser("sf-bracket", help="Check [SF_h, OF_{f,g}] = x SF_{fh}")
    for name in ("h", "f", "g"):
        sf_cmd.add_argument(f"--{name}", required=True, help="Exp-polynomial in x")
    _add_surface(sf_cmd)
    sf_cmd.set_defaults(handler=cmd_sf_bracket)

    flow_cmd = commands.add_parser("flow", help="Time-t flow of OF_{f,g}")
    flow_cmd.add_argument("--f", required=True)
    flow_cmd.add_argument("--g", required=True)
    flow_cmd.add_argument("--t", required=True, help="Time, e.g. '1', '1/3' or '0.25'")
    flow_cmd.add_argument("--point", required=True)
    flow_cmd.add_argument("--steps", type=int, default=0, help="Also integrate with RK4 using this many steps")
    _add_surface(flow_cmd)
    flow_cmd.set_defaults(handler=cmd_flow)

    rank_cmd = commands.add_parser("rank", help="Rank of iterated brackets with a shear field")
    rank_cmd.add_argument("--f", required=True)
    rank_cmd.add_argument("--g", default="0")
    rank_cmd.add_argument("--h", required=True)
    rank_cmd.add_argument("--N", type=int, required=True)
    _add_surface(rank_cmd)
    rank_cmd.set_defaults(handler=cmd_rank)

    bch_cmd = commands.add_parser("bch", help="Check exp(x+y) = exp(x) exp(y) exp(K) on random matrices")
    bch_cmd.add_argument("--size", type=int, choices=range(3, 7), default=4)
    bch_cmd.add_argument("--seed", type=int, default=0)
    bch_cmd.set_defaults(handler=cmd_bch)

    decompose_cmd = commands.add_parser("decompose", help="Factor a unipotent matrix into one-parameter subgroups")
    decompose_cmd.add_argument("--size", type=int, choices=range(3, 7), default=4)
    decompose_cmd.add_argument("--seed", type=int, default=0)
    decompose_cmd.add_argument("--matrix", help="JSON array of arrays of rational strings")
    decompose_cmd.set_defaults(handler=cmd_decompose)

    hyperbolic_cmd = commands.add_parser("hyperbolic", help="Apply the hyperbolic map (x e^{f(z)t}, y e^{-f(z)t}, z)")
    hyperbolic_cmd.add_argument("--fz", required=True, help="Polynomial in z")
    hyperbolic_cmd.add_argument("--t", required=True)
    hyperbolic_cmd.add_argument("--point", required=True)
    _add_surface(hyperbolic_cmd)
    hyperbolic_cmd.set_defaults(handler=cmd_hyperbolic)

    suite_cmd = commands.add_parser("suite", help="Run the batch identity checks")
    suite_cmd.add_argument("--check", action="append", choices=sorted(CHECKS), help="Check to run (repeatable)")
    suite_cmd.add_argument("--seed", type=int, default=0, help="Base RNG seed")
    suite_cmd.add_argument("--workers", type=int, default=1, help="Worker processes")
    suite_cmd.add_argument("--scale", type=float, default=1.0, help="Multiplier on the case counts")
    suite_cmd.set_defaults(handler=cmd_suite)
    return parser


def _emit(reports: Iterable[BaseModel]) -> None:
    for report in reports:
        print(report.model_dump_json(exclude_none=True))


def _fail(exc: Exception, code: int) -> int:
    report = ErrorReport(
        error=type(exc).__name__,
        message=str(exc),
        exit_code=code,
        line=getattr(exc, "line", None),
        column=getattr(exc, "column", None),
    )
    print(report.model_dump_json(exclude_none=True), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format="[%(levelname)s] %(message)s")
    handler: Callable[[argparse.Namespace], Outcome] = args.handler
    LOGGER.debug("surface tolerance %.3g", get_settings().surface_tol)
    try:
        reports, code = handler(args)
    except (ExpressionSyntaxError, ConstantTermError, json.JSONDecodeError) as exc:
        return _fail(exc, EXIT_PARSE)
    except (OvershearError, OSError, ValueError) as exc:
        return _fail(exc, EXIT_PRECONDITION)
    _emit(reports)
    return code


if __name__ == "__main__":
    sys.exit(main())
