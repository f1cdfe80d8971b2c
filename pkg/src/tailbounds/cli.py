"""Command-line interface: table, sweep, bound, and verify subcommands.

Output is CSV by default (UTF-8, LF line endings). Values below 0.01 print in
scientific notation with two significant digits and everything else with three
decimals, unless --digits overrides with a significant-digit count. --clamp
caps displayed bound columns at 1; it never touches tail columns or the math.
"""

from __future__ import annotations

import argparse
import math
import sys

from .bounds import (
    BoundKind,
    evaluate_bound,
    markov_bounds,
    optimize_chernoff,
)
from .distributions import Exponential, HalfNormal, parse_distribution
from .empirical import Sample, monte_carlo_verify, verify_sample
from .errors import InvalidInput, TailBoundsError
from .numerics import QuadratureConfig

__all__ = ["main", "entry", "build_parser"]

_DEFAULT_SWEEP_GRID = "0.05:8:0.05"
_BOUND_DIGITS = 6

# config-file key -> (argparse attribute, converter)
_CONFIG_KEYS = {
    "dist": ("dist", str),
    "nu": ("nu", str),
    "method": ("method", str),
    "format": ("format", str),
    "digits": ("digits", int),
    "clamp": ("clamp", None),
    "n": ("n", int),
    "seed": ("seed", int),
    "sample-file": ("sample_file", str),
    "abs-tol": ("abs_tol", float),
    "rel-tol": ("rel_tol", float),
}


def _add_common(sub: argparse.ArgumentParser, *names: str) -> None:
    if "dist" in names:
        sub.add_argument("--dist", default=None, metavar="SPEC",
                         help="distribution, e.g. exponential:rate=1 or halfnormal:mean=1")
    if "nu" in names:
        sub.add_argument("--nu", default=None, metavar="GRID",
                         help="threshold(s): a value, v1,v2,..., or start:stop:step")
    if "method" in names:
        sub.add_argument("--method", default=None, metavar="NAME",
                         help="compare, [enhanced-]markov, [enhanced-]moment:k=K, "
                              "[enhanced-]chernoff:t=T, [enhanced-]chernoff:opt")
    if "format" in names:
        sub.add_argument("--format", default=None, choices=("csv", "table"),
                         help="output layout (default csv)")
    if "digits" in names:
        sub.add_argument("--digits", default=None, type=int, metavar="N",
                         help="significant digits; default is the 3-decimal/2-significant rule")
    if "clamp" in names:
        sub.add_argument("--clamp", action="store_const", const=True, default=None,
                         help="cap displayed bound columns at 1 (tails never clamped)")
    if "n" in names:
        sub.add_argument("--n", default=None, type=int, metavar="COUNT",
                         help="number of Monte Carlo draws")
    if "seed" in names:
        sub.add_argument("--seed", default=None, type=int, metavar="SEED",
                         help="RNG seed (default 0)")
    if "sample-file" in names:
        sub.add_argument("--sample-file", default=None, metavar="PATH",
                         help="verify a plain-text sample instead of simulating")
    sub.add_argument("--abs-tol", default=None, type=float, metavar="TOL",
                     help="quadrature absolute tolerance (default 1e-10)")
    sub.add_argument("--rel-tol", default=None, type=float, metavar="TOL",
                     help="quadrature relative tolerance (default 1e-9)")
    sub.add_argument("--config", default=None, metavar="PATH",
                     help="key = value file supplying defaults for these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailbounds",
        description="Tail probabilities and restricted-expectation bounds "
                    "for nonnegative distributions.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser("table", help="tail/enhanced/traditional comparison table")
    _add_common(table, "dist", "nu", "format", "digits", "clamp")

    sweep = commands.add_parser(
        "sweep", help="curves for the unit-mean exponential and half-normal pair"
    )
    _add_common(sweep, "nu", "format", "digits", "clamp")

    bound = commands.add_parser("bound", help="a single bound at one threshold")
    _add_common(bound, "dist", "nu", "method", "digits", "clamp")

    verify = commands.add_parser("verify", help="empirical sandwich check")
    _add_common(verify, "dist", "nu", "format", "n", "seed", "sample-file")

    return parser


def _read_config_file(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            key, sep, value = text.partition("=")
            if not sep or not key.strip():
                raise InvalidInput(f"{path}: line {line_number}: expected key = value")
            entries[key.strip().lower()] = value.strip()
    return entries


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidInput(f"expected a boolean, got {raw!r}")


def _merge_config(args: argparse.Namespace) -> None:
    """Config file values fill in flags the command line left unset."""
    if args.config is None:
        return
    entries = _read_config_file(args.config)
    for key, raw in entries.items():
        if key not in _CONFIG_KEYS:
            raise InvalidInput(f"{args.config}: unknown config key {key!r}")
        attr, converter = _CONFIG_KEYS[key]
        if not hasattr(args, attr) or getattr(args, attr) is not None:
            continue
        try:
            value = _parse_bool(raw) if converter is None else converter(raw)
        except ValueError:
            raise InvalidInput(f"{args.config}: bad value for {key}: {raw!r}") from None
        setattr(args, attr, value)


def _parse_nu(text: str) -> list[float]:
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise InvalidInput(f"bad threshold range {text!r}: expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if not all(map(math.isfinite, (start, stop, step))):
                raise InvalidInput(f"bad threshold range {text!r}: values must be finite")
            if step <= 0:
                raise InvalidInput(f"bad threshold range {text!r}: step must be positive")
            if start > stop:
                raise InvalidInput(f"bad threshold range {text!r}: start exceeds stop")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [start + i * step for i in range(count)]
        elif "," in text:
            values = [float(p) for p in text.split(",")]
        else:
            values = [float(text)]
    except ValueError:
        raise InvalidInput(f"bad threshold value in {text!r}") from None
    for value in values:
        if not (math.isfinite(value) and value > 0.0):
            raise InvalidInput(f"thresholds must be finite and positive, got {value!r}")
    return values


def _parse_method(text: str):
    """Returns ("compare", None), ("fixed", BoundKind), or ("optimize", variant)."""
    spec = text.strip().lower()
    if spec == "compare":
        return ("compare", None)
    enhanced = spec.startswith("enhanced-")
    body = spec[len("enhanced-"):] if enhanced else spec
    if body == "markov":
        return ("fixed", BoundKind("markov", enhanced))
    if body.startswith("moment:"):
        arg = body[len("moment:"):]
        key, sep, raw = arg.partition("=")
        if key != "k" or not sep:
            raise InvalidInput(f"bad method {text!r}: moment takes k=<integer>")
        try:
            k = int(raw)
        except ValueError:
            raise InvalidInput(f"bad method {text!r}: k must be an integer") from None
        return ("fixed", BoundKind("moment", enhanced, k=k))
    if body.startswith("chernoff:"):
        arg = body[len("chernoff:"):]
        if arg == "opt":
            return ("optimize", "enhanced" if enhanced else "traditional")
        key, sep, raw = arg.partition("=")
        if key != "t" or not sep:
            raise InvalidInput(f"bad method {text!r}: chernoff takes t=<value> or opt")
        try:
            t = float(raw)
        except ValueError:
            raise InvalidInput(f"bad method {text!r}: t must be a number") from None
        return ("fixed", BoundKind("chernoff", enhanced, t=t))
    raise InvalidInput(f"unknown method {text!r}")


def _check_digits(digits: int | None) -> None:
    if digits is not None and digits < 1:
        raise InvalidInput(f"--digits must be a positive integer, got {digits}")


def _format_value(value: float, digits: int | None) -> str:
    if digits is not None:
        return f"{value:.{digits}g}"
    return f"{value:.3f}" if value >= 0.01 else f"{value:.1E}"


def _clamped(value: float, clamp: bool) -> float:
    return min(value, 1.0) if clamp else value


def _emit_rows(header: list[str], rows: list[list[str]], layout: str) -> None:
    if layout == "table":
        widths = [
            max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i])
            for i in range(len(header))
        ]
        print("  ".join(name.rjust(widths[i]) for i, name in enumerate(header)))
        for row in rows:
            print("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)))
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(row))


def _quadrature_config(args: argparse.Namespace) -> QuadratureConfig:
    abs_tol = 1e-10 if args.abs_tol is None else args.abs_tol
    rel_tol = 1e-9 if args.rel_tol is None else args.rel_tol
    return QuadratureConfig(abs_tol=abs_tol, rel_tol=rel_tol)


def _require(args: argparse.Namespace, attr: str, flag: str) -> object:
    value = getattr(args, attr)
    if value is None:
        raise InvalidInput(f"{flag} is required (on the command line or in --config)")
    return value


def _cmd_table(args: argparse.Namespace) -> int:
    config = _quadrature_config(args)
    _check_digits(args.digits)
    dist = parse_distribution(str(_require(args, "dist", "--dist")), config)
    grid = _parse_nu(str(_require(args, "nu", "--nu")))
    clamp = bool(args.clamp)
    rows = []
    for nu in grid:
        row = markov_bounds(dist, nu)
        rows.append([
            f"{nu:g}",
            _format_value(row.tail, args.digits),
            _format_value(_clamped(row.enhanced, clamp), args.digits),
            _format_value(_clamped(row.traditional, clamp), args.digits),
        ])
    _emit_rows(["nu", "tail", "enhanced_markov", "traditional_markov"], rows,
               args.format or "csv")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _quadrature_config(args)
    _check_digits(args.digits)
    halfnormal = HalfNormal(math.sqrt(math.pi / 2.0), config)
    exponential = Exponential(1.0, config)
    grid = _parse_nu(str(args.nu) if args.nu is not None else _DEFAULT_SWEEP_GRID)
    clamp = bool(args.clamp)
    rows = []
    for nu in grid:
        hn = markov_bounds(halfnormal, nu)
        ex = markov_bounds(exponential, nu)
        # Both curves share one traditional column: each has mean 1.
        rows.append([
            f"{nu:g}",
            _format_value(hn.tail, args.digits),
            _format_value(_clamped(hn.enhanced, clamp), args.digits),
            _format_value(ex.tail, args.digits),
            _format_value(_clamped(ex.enhanced, clamp), args.digits),
            _format_value(_clamped(ex.traditional, clamp), args.digits),
        ])
    _emit_rows(
        ["nu", "halfnormal_tail", "halfnormal_enhanced",
         "exponential_tail", "exponential_enhanced", "traditional_markov"],
        rows, args.format or "csv",
    )
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    config = _quadrature_config(args)
    _check_digits(args.digits)
    dist = parse_distribution(str(_require(args, "dist", "--dist")), config)
    grid = _parse_nu(str(_require(args, "nu", "--nu")))
    if len(grid) != 1:
        raise InvalidInput("bound takes a single threshold; use table for grids")
    nu = grid[0]
    method = str(args.method) if args.method is not None else "compare"
    digits = args.digits if args.digits is not None else _BOUND_DIGITS
    clamp = bool(args.clamp)
    mode, payload = _parse_method(method)
    # Compute everything before printing so a failure emits no partial record.
    lines = [f"method={method}", f"nu={nu:g}"]
    if mode == "compare":
        row = markov_bounds(dist, nu)
        lines.append(f"tail={row.tail:.{digits}g}")
        lines.append(f"enhanced_markov={_clamped(row.enhanced, clamp):.{digits}g}")
        lines.append(f"traditional_markov={_clamped(row.traditional, clamp):.{digits}g}")
    elif mode == "fixed":
        value = evaluate_bound(dist, nu, payload)
        lines.append(f"bound={_clamped(value, clamp):.{digits}g}")
    else:
        result = optimize_chernoff(dist, nu, payload)
        lines.append(f"variant={result.variant}")
        lines.append(f"t_star={result.t_star:.{digits}g}")
        lines.append(f"bound={_clamped(result.bound, clamp):.{digits}g}")
        lines.append(f"at_boundary={'true' if result.at_boundary else 'false'}")
    print("\n".join(lines))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _quadrature_config(args)
    if args.sample_file is not None:
        sample = Sample.from_file(str(args.sample_file))
        grid = _parse_nu(str(_require(args, "nu", "--nu")))
        report = verify_sample(sample, grid)
        trailer = f"# n={report.n} source={args.sample_file} max_violation={report.max_violation!r}"
    else:
        dist = parse_distribution(str(_require(args, "dist", "--dist")), config)
        grid = _parse_nu(str(_require(args, "nu", "--nu")))
        n = int(_require(args, "n", "--n"))
        seed = int(args.seed) if args.seed is not None else 0
        report = monte_carlo_verify(dist, n, seed, grid)
        trailer = (
            f"# n={report.n} seed={report.seed} max_violation={report.max_violation!r} "
            f"max_tail_deviation={report.max_tail_deviation!r}"
        )
    print(report.to_csv())
    print(trailer)
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


_COMMANDS = {
    "table": _cmd_table,
    "sweep": _cmd_sweep,
    "bound": _cmd_bound,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return _COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TailBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
