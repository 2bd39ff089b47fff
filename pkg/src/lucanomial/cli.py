"""Command-line front end.

Exit status: 0 success, 1 usage or malformed input, 2 degenerate or
singular input, 3 internal inconsistency between routes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .binomials import (
    FACTORIAL,
    RULES,
    build_triangle,
    default_rule,
    factorial_binomial,
    recurrence_binomial,
)
from .errors import (
    DegenerateDiscriminant,
    DegenerateSequence,
    Inconsistency,
    LucanomialError,
    NotRational,
    SingularCoefficient,
)
from .quadfield import LucasParams, make_rational
from .sequences import SequenceContext, SequenceKind, custom
from .verify import SUITES, GridSpec, run_suite, summarize

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_INCONSISTENT = 0, 1, 2, 3
PRESETS_ENV = "LUCANOMIAL_PRESETS"

# options whose values may legitimately start with "-" (negative numbers, ranges)
_VALUE_OPTIONS = {"--P", "--Q", "--P-range", "--Q-range", "--init"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Preset:
    name: str
    params: LucasParams
    kind: SequenceKind


_BUILTIN = {
    "fibonacci": (1, -1, "u"),
    "lucas": (1, -1, "v"),
    "pell": (2, -1, "u"),
    "mersenne": (3, 2, "u"),
}


def _kind(family: str, init=None) -> SequenceKind:
    family = family.lower()
    if family in ("u", "v"):
        return SequenceKind(family)
    if family in ("w", "h"):
        if init is None:
            raise UsageError(f"family {family!r} needs --init X0,X1")
        return SequenceKind(family, tuple(init))
    raise UsageError(f"unknown family {family!r} (expected u, v, w or h)")


def load_user_presets(path: str | os.PathLike) -> dict[str, tuple]:
    """Parse ``name=... P=... Q=... family=... [init=a,b]`` lines."""
    presets = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            fields = dict(tok.split("=", 1) for tok in line.split())
            init = fields.get("init")
            presets[fields["name"]] = (
                make_rational(fields["P"]),
                make_rational(fields["Q"]),
                fields.get("family", "u"),
                None if init is None else [make_rational(x) for x in init.split(",")],
            )
        except (KeyError, ValueError, ZeroDivisionError) as e:
            raise UsageError(f"{path}:{lineno}: bad preset line {raw!r} ({e})") from e
    return presets


def resolve_preset(name: str) -> Preset:
    table = {k: (P, Q, fam, None) for k, (P, Q, fam) in _BUILTIN.items()}
    env = os.environ.get(PRESETS_ENV)
    if env:
        table.update(load_user_presets(env))
    if name.startswith("gaussian:"):
        try:
            q = make_rational(name.split(":", 1)[1])
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"bad gaussian preset {name!r}") from e
        entry = (q + 1, q, "u", None)
    elif name in table:
        entry = table[name]
    else:
        raise UsageError(f"unknown preset {name!r}; built-ins: {', '.join(_BUILTIN)}, gaussian:<q>")
    P, Q, fam, init = entry
    try:
        params = LucasParams(P, Q)
    except DegenerateDiscriminant as e:
        raise UsageError(f"preset {name!r}: {e}") from e
    return Preset(name, params, _kind(fam, init))


def _context(args) -> SequenceContext:
    if args.preset:
        preset = resolve_preset(args.preset)
        return SequenceContext(preset.params, preset.kind)
    if args.P is None or args.Q is None:
        raise UsageError("give either --preset or both --P and --Q")
    try:
        params = LucasParams(make_rational(args.P), make_rational(args.Q))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad parameters P={args.P}, Q={args.Q}: {e}") from e
    init = None if args.init is None else [_rational_arg(x) for x in args.init.split(",")]
    if init is not None and len(init) != 2:
        raise UsageError(f"--init needs exactly two values, got {args.init!r}")
    return SequenceContext(params, _kind(args.family, init))


def _rational_arg(text: str) -> Fraction:
    try:
        return make_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"not an exact rational: {text!r}") from e


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="fibonacci, lucas, pell, mersenne, gaussian:<q>, or a user preset")
    p.add_argument("--P", help="P in x^2 = P x - Q (integer or fraction)")
    p.add_argument("--Q", help="Q in x^2 = P x - Q")
    p.add_argument("--family", default="u", help="u, v, w or h (default u)")
    p.add_argument("--init", metavar="X0,X1", help="initial terms for w/h families")


def _add_rule(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", choices=("factorial", "recurrence"), default="factorial")
    p.add_argument("--coeffs", choices=RULES, help="coefficient family for --rule recurrence")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------


def cmd_seq(args) -> int:
    ctx = _context(args)
    terms = [str(ctx.term(n)) for n in range(args.n + 1)]
    if args.format == "json":
        sys.stdout.write(json.dumps(terms) + "\n")
    elif args.format == "csv":
        sys.stdout.write(",".join(terms) + "\n")
    else:
        sys.stdout.write(" ".join(terms) + "\n")
    return EXIT_OK


def _rule_name(ctx, args) -> str:
    if args.rule == "factorial":
        return FACTORIAL
    return args.coeffs or default_rule(ctx)


def cmd_binom(args) -> int:
    ctx = _context(args)
    if not 0 <= args.k <= args.n:
        raise UsageError(f"need 0 <= k <= n, got n={args.n}, k={args.k}")
    rule = _rule_name(ctx, args)
    if args.check:
        coeffs = args.coeffs or default_rule(ctx)
        a = factorial_binomial(ctx, args.n, args.k)
        b = recurrence_binomial(ctx, coeffs, args.n, args.k)
        print(f"factorial: {a}")
        print(f"recurrence[{coeffs}]: {b}")
        print(f"equal: {'yes' if a == b else 'no'}")
        return EXIT_OK if a == b else EXIT_INCONSISTENT
    if rule == FACTORIAL:
        value = factorial_binomial(ctx, args.n, args.k)
    else:
        value = recurrence_binomial(ctx, rule, args.n, args.k)
    print(value)
    return EXIT_OK


def cmd_triangle(args) -> int:
    ctx = _context(args)
    if args.rows < 1:
        raise UsageError("--rows must be >= 1")
    tri = build_triangle(ctx, _rule_name(ctx, args), args.rows - 1)
    _emit(tri.to_json() if args.format == "json" else tri.to_csv(), args.output)
    return EXIT_OK


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


def cmd_verify(args) -> int:
    grid = GridSpec(
        P_range=args.P_range,
        Q_range=args.Q_range,
        n_max=args.n_max,
        r_max=args.r_max,
        s_max=args.r_max,
    )
    reports = run_suite(grid, args.suite, workers=args.workers)
    out = sys.stdout
    if not args.summary_only:
        for rep in reports:
            out.write(rep.to_json() + "\n")
    summary = summarize(reports)
    sys.stderr.write(json.dumps({"summary": summary.to_dict()}) + "\n")
    return EXIT_OK if summary.ok else EXIT_INCONSISTENT


def read_sequence_file(path: str) -> list[Fraction]:
    """One exact rational per line (``#`` comments, blank lines allowed) or a JSON array."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"{path}:{e.lineno}: malformed JSON ({e.msg})") from e
        if not isinstance(items, list):
            raise UsageError(f"{path}: expected a JSON array")
        values = []
        for i, item in enumerate(items):
            try:
                values.append(make_rational(str(item)))
            except (ValueError, ZeroDivisionError) as e:
                raise UsageError(f"{path}: array item {i}: not an exact rational: {item!r}") from e
        return values
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(make_rational(line))
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"{path}:{lineno}: not an exact rational: {line!r}") from e
    return values


def cmd_fontene(args) -> int:
    values = read_sequence_file(args.file)
    if not values:
        raise UsageError(f"{args.file}: no terms")
    ctx = SequenceContext(None, custom(values))
    if args.rows is not None:
        if args.rows < 1:
            raise UsageError("--rows must be >= 1")
        n_max = args.rows - 1
        _need_terms(values, n_max)
        left = build_triangle(ctx, "fontene-left", n_max)
        right = build_triangle(ctx, "fontene-right", n_max)
        oracle = build_triangle(ctx, FACTORIAL, n_max)
        if not (left.rows == right.rows == oracle.rows):
            sys.stderr.write("Fontene left/right variants disagree with the factorial formula\n")
            return EXIT_INCONSISTENT
        _emit(left.to_json() if args.format == "json" else left.to_csv(), args.output)
        return EXIT_OK
    if args.n is None or args.k is None:
        raise UsageError("give -n and -k, or --rows")
    if not 0 <= args.k <= args.n:
        raise UsageError(f"need 0 <= k <= n, got n={args.n}, k={args.k}")
    _need_terms(values, args.n)
    left = recurrence_binomial(ctx, "fontene-left", args.n, args.k)
    right = recurrence_binomial(ctx, "fontene-right", args.n, args.k)
    oracle = factorial_binomial(ctx, args.n, args.k)
    if args.check:
        print(f"left: {left}")
        print(f"right: {right}")
        print(f"factorial: {oracle}")
    if not left == right == oracle:
        sys.stderr.write(f"routes disagree: left={left} right={right} factorial={oracle}\n")
        return EXIT_INCONSISTENT
    if not args.check:
        print(left)
    return EXIT_OK


def _need_terms(values, n):
    if len(values) <= n:
        raise UsageError(f"sequence file holds A_0..A_{len(values) - 1}; need at least A_{n}")


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lucanomial", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("seq", help="print terms 0..n of a sequence")
    _add_params(p)
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("binom", help="one generalized binomial coefficient")
    _add_params(p)
    _add_rule(p)
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("-k", "--k", type=int, required=True)
    p.add_argument("--check", action="store_true", help="compute both routes and compare")
    p.set_defaults(func=cmd_binom)

    p = sub.add_parser("triangle", help="rows 0..rows-1 of the coefficient triangle")
    _add_params(p)
    _add_rule(p)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_triangle)

    p = sub.add_parser("verify", help="identity sweeps over a (P, Q) grid; JSON lines on stdout")
    p.add_argument("--suite", action="append", choices=("all", *SUITES),
                   help="suite to run (repeatable; default all)")
    p.add_argument("--P-range", type=parse_range, default=(-3, 3), metavar="LO..HI")
    p.add_argument("--Q-range", type=parse_range, default=(-3, 3), metavar="LO..HI")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--r-max", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary-only", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fontene", help="Fontene-Ward binomials of a user-supplied sequence")
    p.add_argument("file")
    p.add_argument("-n", "--n", type=int)
    p.add_argument("-k", "--k", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--check", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fontene)
    return parser


def _glue_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    if getattr(args, "suite", "unset") is None:
        args.suite = ["all"]
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"lucanomial: error: {e}\n")
        return EXIT_USAGE
    except (DegenerateSequence, SingularCoefficient) as e:
        sys.stderr.write(f"lucanomial: {type(e).__name__}: {e}\n")
        return EXIT_DEGENERATE
    except (Inconsistency, NotRational) as e:
        sys.stderr.write(f"lucanomial: internal inconsistency: {e}\n")
        return EXIT_INCONSISTENT
    except DegenerateDiscriminant as e:
        sys.stderr.write(f"lucanomial: error: {e}\n")
        return EXIT_USAGE
    except LucanomialError as e:
        sys.stderr.write(f"lucanomial: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
