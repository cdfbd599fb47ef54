"""Command-line front end.

Subcommands::

    ber FILE                    Berezinian of the supermatrix in FILE
    integrate FILE --backend gaussian | box a1 b1 a2 b2 ...
    unimodular FILE --subalgebra i,j,k
    examples list | run NAME
    verify SUITE [--seed N]

Exit codes: 0 success / all checks passed, 1 mathematical failure,
2 usage or parse error.  Check reports are one line per identity:
``PASS|FAIL <name> lhs=<value> rhs=<value>``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .berezin import GAUSSIAN, BerezinSection, box_backend, integrate
from .errors import ParseError, SuperBerezinError
from .lie_super import SubalgebraSpec, unimodularity_check, validate
from .suites import SUITES, CheckLine
from .textio import (
    parse_structure_constants,
    parse_superfunction,
    parse_supermatrix,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superberezin",
        description="exact Berezin integration and supergroup checks")
    sub = parser.add_subparsers(dest="command", required=True)

    ber = sub.add_parser("ber", help="Berezinian of a supermatrix file")
    ber.add_argument("file")

    integ = sub.add_parser("integrate",
                           help="integrate a superfunction file exactly")
    integ.add_argument("file")
    integ.add_argument("--backend", nargs="+", default=["gaussian"],
                       metavar="SPEC",
                       help="'gaussian' or 'box a1 b1 a2 b2 ...'")

    unim = sub.add_parser("unimodular",
                          help="unimodularity of a quotient by a subalgebra")
    unim.add_argument("file", help="structure-constant file")
    unim.add_argument("--subalgebra", required=True,
                      help="comma-separated generator indices spanning h")

    ex = sub.add_parser("examples", help="worked built-in examples")
    ex.add_argument("action", choices=("list", "run"))
    ex.add_argument("name", nargs="?")

    ver = sub.add_parser("verify", help="run a seeded verification suite")
    ver.add_argument("suite", help="one of: " + ", ".join(sorted(SUITES)))
    ver.add_argument("--seed", type=int, default=0)
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _cmd_ber(args) -> int:
    matrix = parse_supermatrix(_read(args.file))
    print(matrix.berezinian())
    return 0


def _parse_backend(spec: list[str]):
    if spec == ["gaussian"]:
        return GAUSSIAN
    if spec and spec[0] == "box":
        bounds = spec[1:]
        if len(bounds) % 2:
            raise ParseError("box backend needs an even number of bounds",
                             1, 1)
        try:
            values = [Fraction(b) for b in bounds]
        except (ValueError, ZeroDivisionError):
            raise ParseError("box bounds must be rational numbers", 1, 1)
        return box_backend(*zip(values[::2], values[1::2]))
    raise ParseError(f"unknown backend {' '.join(spec)!r}", 1, 1)


def _cmd_integrate(args) -> int:
    f = parse_superfunction(_read(args.file))
    backend = _parse_backend(args.backend)
    print(integrate(BerezinSection.make(f.shape, f), backend))
    return 0


def _cmd_unimodular(args) -> int:
    algebra = parse_structure_constants(_read(args.file))
    report = validate(algebra)
    if not report.ok:
        for failure in report.failures:
            print(f"invalid structure constants: {failure}", file=sys.stderr)
        return 1
    try:
        span = frozenset(int(k) for k in args.subalgebra.split(",") if k)
    except ValueError:
        raise ParseError("subalgebra spec must be comma-separated integers",
                         1, 1)
    if any(k < 0 or k >= algebra.dim for k in span):
        raise ParseError(
            f"subalgebra indices must lie in 0..{algebra.dim - 1}", 1, 1)
    result = unimodularity_check(algebra, SubalgebraSpec(algebra, span))
    if result.verdict == "UNIMODULAR":
        print("UNIMODULAR")
    else:
        print(f"NOT_UNIMODULAR witness={result.witness_name} "
              f"str={result.witness_supertrace}")
    print(f"note: {result.note}")
    return 0


# ---------------------------------------------------------------------------
# worked examples


def _fubini_example_lines(example) -> list[CheckLine]:
    from .supergroup import fubini_check
    report = fubini_check(example.group, example.subgroup, example.chart,
                          example.test_function, example.omega_group,
                          backend=example.backend,
                          fibre_backend=example.fibre_backend,
                          base_backend=example.base_backend)
    return [
        CheckLine(name=f"{example.name} staged integral",
                  passed=report.passed,
                  lhs=str(report.lhs), rhs=str(report.rhs)),
        CheckLine(name=f"{example.name} staging sign",
                  passed=True, lhs=str(report.sign), rhs=str(report.sign)),
    ]


def _run_fubini_axb() -> list[CheckLine]:
    from .groups import axb_fubini_example
    return _fubini_example_lines(axb_fubini_example())


def _run_fubini_heisenberg() -> list[CheckLine]:
    from .groups import heisenberg_fubini_example
    return _fubini_example_lines(heisenberg_fubini_example())


def _run_product_axb() -> list[CheckLine]:
    from .groups import product_builtins
    from .supergroup import product_formula_check
    lines = []
    for ex in product_builtins():
        report = product_formula_check(ex.group, ex.left, ex.right,
                                       ex.test_function, ex.omega_group,
                                       backend=ex.backend,
                                       product_backend=ex.product_backend)
        lines.append(CheckLine(name=f"{ex.name} staged integral",
                               passed=report.passed,
                               lhs=str(report.lhs), rhs=str(report.rhs)))
        lines.append(CheckLine(name=f"{ex.name} modular ratio",
                               passed=True, lhs=str(report.ratio),
                               rhs=str(report.ratio)))
    return lines


def _run_unimod_gl11() -> list[CheckLine]:
    from .groups import gl11_group
    from .supergroup import group_lie_algebra
    g = group_lie_algebra(gl11_group(),
                          names=("E11", "E22", "E12", "E21"))
    lines = []
    for label, span in [("h=0", frozenset()),
                        ("h=span(E11)", frozenset({0})),
                        ("h=span(E11,E22)", frozenset({0, 1})),
                        ("h=all", frozenset(range(4)))]:
        result = unimodularity_check(g, SubalgebraSpec(g, span))
        lines.append(CheckLine(name=f"gl11 {label}",
                               passed=(result.verdict == "UNIMODULAR"),
                               lhs=result.verdict, rhs="UNIMODULAR"))
    return lines


def _run_unimod_borel() -> list[CheckLine]:
    from .lie_super import gl11_algebra
    g = gl11_algebra()
    result = unimodularity_check(g, SubalgebraSpec(g, frozenset({0, 1, 2})))
    return [
        CheckLine(name="gl11 borel verdict",
                  passed=(result.verdict == "NOT_UNIMODULAR"),
                  lhs=result.verdict, rhs="NOT_UNIMODULAR"),
        CheckLine(name="gl11 borel witness",
                  passed=(result.witness_name == "E11"
                          and result.witness_supertrace == 1),
                  lhs=f"{result.witness_name}: {result.witness_supertrace}",
                  rhs="E11: 1"),
    ]


EXAMPLES = {
    "fubini-ax+b": ("staged integration over the scaling-shift chart "
                    "modulo its odd subgroup", _run_fubini_axb),
    "heisenberg-fubini": ("staged integration over the odd Heisenberg "
                          "chart modulo its centre", _run_fubini_heisenberg),
    "product-ax+b": ("the scaling-shift chart as a product of its two "
                     "subgroups, both orders", _run_product_axb),
    "unimod-gl11": ("unimodularity of GL(1|1) quotients",
                    _run_unimod_gl11),
    "unimod-borel": ("the Borel subalgebra of gl(1|1) is not unimodular",
                     _run_unimod_borel),
}


def _cmd_examples(args) -> int:
    if args.action == "list":
        for name in sorted(EXAMPLES):
            print(f"{name}: {EXAMPLES[name][0]}")
        return 0
    if args.name is None:
        print("examples run needs a name; try 'examples list'",
              file=sys.stderr)
        return 2
    if args.name not in EXAMPLES:
        print(f"unknown example {args.name!r}; try 'examples list'",
              file=sys.stderr)
        return 2
    lines = EXAMPLES[args.name][1]()
    for line in lines:
        print(line.render())
    return 0 if all(line.passed for line in lines) else 1


def _cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from "
              + ", ".join(sorted(SUITES)), file=sys.stderr)
        return 2
    fn = SUITES[args.suite]
    try:
        lines = fn(seed=args.seed)
    except TypeError:
        lines = fn()
    for line in lines:
        print(line.render())
    passed = sum(1 for line in lines if line.passed)
    print(f"{passed}/{len(lines)} checks passed (seed {args.seed})")
    return 0 if passed == len(lines) else 1


_DISPATCH = {
    "ber": _cmd_ber,
    "integrate": _cmd_integrate,
    "unimodular": _cmd_unimodular,
    "examples": _cmd_examples,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _DISPATCH[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    except SuperBerezinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
