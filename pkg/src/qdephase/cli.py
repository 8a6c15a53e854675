"""Command-line front end: evolve, region, critical, validate.

Scenario parameters come from a flat key=value config file (see
``CONFIG_KEYS``); flags override config values.  Exit codes: 0 success,
1 numerical or validation failure, 2 usage/config/domain error, 3 empty
gain region (no bracket).  All diagnostics go to stderr; results go to
stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    PLANE_PARAMETERS,
    TimeGrid,
    distance_series,
    find_lambda_c,
    gain_ratio,
    region_map,
)
from .bath import BathSpec, DisplacementSpec, ModelSpec
from .dynamics import QubitAmplitudes
from .errors import (
    ConvergenceError,
    DomainError,
    NoBracketError,
    PhysicalityError,
    QDephaseError,
)
from .numerics import QuadratureSettings
from .validation import run_all

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2
EXIT_NO_BRACKET = 3

CSV_HEADER = "t,distance,abs_A1,abs_A2,r,s,phi"

_FLOAT_KEYS = (
    "alpha", "gamma", "mu", "nu", "omega_c", "epsilon",
    "lambda1", "lambda2", "b_plus", "b_minus",
    "t_min", "t_max", "abs_tol", "rel_tol", "tail_cut_multiplier",
)
_INT_KEYS = ("points", "max_subdivisions")
_STR_KEYS = ("grid", "backend", "out")
_BOOL_KEYS = ("normalized",)
CONFIG_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS + _BOOL_KEYS

_DEFAULTS = {
    "epsilon": 1.0,
    "omega_c": 1.0,
    "lambda2": 0.0,
    "t_min": 1e-3,
    "t_max": 1e4,
    "points": 400,
    "grid": "log",
    "backend": "closed_form",
    "normalized": False,
}

_BACKEND_ALIASES = {
    "closed": "closed_form",
    "closed_form": "closed_form",
    "quad": "quadrature",
    "quadrature": "quadrature",
}


class ConfigError(DomainError):
    """Malformed or incomplete scenario configuration."""


def parse_config(path: str) -> dict:
    """Read a flat key=value file; unknown or duplicate keys are rejected."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} needs a number, got {value!r}")
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} needs an integer, got {value!r}")
        elif key in _BOOL_KEYS:
            lowered = value.lower()
            if lowered not in ("true", "false", "0", "1"):
                raise ConfigError(f"{path}:{lineno}: {key} needs true/false, got {value!r}")
            values[key] = lowered in ("true", "1")
        else:
            values[key] = value
    return values


def _scenario(cfg: dict) -> dict:
    merged = dict(_DEFAULTS)
    merged.update(cfg)
    for key in ("alpha", "gamma", "mu", "nu"):
        if key not in merged:
            raise ConfigError(f"missing required config key {key!r}")
    has_bp, has_bm = "b_plus" in merged, "b_minus" in merged
    if has_bp != has_bm:
        raise ConfigError("b_plus and b_minus must be given together")
    if has_bp:
        amplitudes = QubitAmplitudes(complex(merged["b_plus"]), complex(merged["b_minus"]))
    else:
        amplitudes = QubitAmplitudes.balanced()
    backend = _BACKEND_ALIASES.get(str(merged["backend"]))
    if backend is None:
        raise ConfigError(f"backend must be 'closed' or 'quad', got {merged['backend']!r}")
    settings_kwargs = {
        key: merged[key]
        for key in ("abs_tol", "rel_tol", "max_subdivisions", "tail_cut_multiplier")
        if key in merged
    }
    model = ModelSpec(
        epsilon=merged["epsilon"],
        bath=BathSpec(alpha=merged["alpha"], mu=merged["mu"], omega_c=merged["omega_c"]),
        displacement=DisplacementSpec(gamma_coef=merged["gamma"], nu=merged["nu"]),
    )
    return {
        "model": model,
        "amplitudes": amplitudes,
        "lambda1": merged.get("lambda1"),
        "lambda2": merged["lambda2"],
        "grid_kind": merged["grid"],
        "t_min": merged["t_min"],
        "t_max": merged["t_max"],
        "points": merged["points"],
        "backend": backend,
        "normalized": bool(merged["normalized"]),
        "settings": QuadratureSettings(**settings_kwargs),
        "out": merged.get("out"),
    }


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _parse_range(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be lo:hi:n, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"range must be lo:hi:n with numeric fields, got {spec!r}")
    if n < 1:
        raise ConfigError(f"range needs at least one point, got {spec!r}")
    if lo > hi:
        raise ConfigError(f"range must satisfy lo <= hi, got {spec!r}")
    if n == 1 or lo == hi:
        return np.full(max(n, 1), lo)
    return np.linspace(lo, hi, n)


def cmd_evolve(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config) if args.config else {}
    if args.t_max is not None:
        cfg["t_max"] = args.t_max
    if args.points is not None:
        cfg["points"] = args.points
    if args.grid is not None:
        cfg["grid"] = args.grid
    if args.backend is not None:
        cfg["backend"] = args.backend
    if args.normalized:
        cfg["normalized"] = True
    if args.out is not None:
        cfg["out"] = args.out
    scenario = _scenario(cfg)
    if scenario["lambda1"] is None:
        raise ConfigError("missing required config key 'lambda1'")
    grid = TimeGrid(
        kind=scenario["grid_kind"],
        t_min=scenario["t_min"],
        t_max=scenario["t_max"],
        points=scenario["points"],
    )
    series = distance_series(
        scenario["model"],
        scenario["lambda1"],
        scenario["lambda2"],
        amplitudes=scenario["amplitudes"],
        grid=grid,
        backend=scenario["backend"],
        settings=scenario["settings"],
        normalized=scenario["normalized"],
    )
    lines = [CSV_HEADER]
    for row in series.rows():
        lines.append(",".join(f"{value:.17g}" for value in row))
    _emit("\n".join(lines) + "\n", scenario["out"])
    return EXIT_OK


def cmd_region(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config) if args.config else {}
    if args.out is not None:
        cfg["out"] = args.out
    scenario = _scenario(cfg)
    plane_parts = args.plane.split(",")
    if len(plane_parts) != 2:
        raise ConfigError(f"--plane must be X,Y, got {args.plane!r}")
    x_name, y_name = plane_parts[0].strip(), plane_parts[1].strip()
    for name in (x_name, y_name):
        if name not in PLANE_PARAMETERS:
            raise ConfigError(
                f"plane parameter {name!r} not in {', '.join(PLANE_PARAMETERS)}"
            )
    lambda1 = scenario["lambda1"] if scenario["lambda1"] is not None else 0.25
    result = region_map(
        scenario["model"],
        lambda1,
        scenario["lambda2"],
        plane=(x_name, y_name),
        x_values=_parse_range(args.x_range),
        y_values=_parse_range(args.y_range),
        refine_boundary=args.refine_boundary,
    )
    payload = {
        "axes": {
            "x": {"name": x_name, "values": [float(v) for v in result.x_values]},
            "y": {"name": y_name, "values": [float(v) for v in result.y_values]},
        },
        "labels": result.labels,
        "gain_ratio": result.gain,
    }
    if args.refine_boundary:
        payload["boundary"] = [[x, y] for x, y in result.boundary_points]
    _emit(json.dumps(payload, indent=2) + "\n", scenario["out"])
    return EXIT_OK


def cmd_critical(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config) if args.config else {}
    scenario = _scenario(cfg)
    parts = args.bracket.split(":")
    if len(parts) != 2:
        raise ConfigError(f"--bracket must be lo:hi, got {args.bracket!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"--bracket must be numeric lo:hi, got {args.bracket!r}")
    if not (0.0 <= lo < hi <= 1.0):
        raise ConfigError(f"bracket must satisfy 0 <= lo < hi <= 1, got {args.bracket!r}")

    model = scenario["model"]
    if args.vary == "lambda1":
        fixed = scenario["lambda2"]
        ratio_of = lambda lam: gain_ratio(model, lam, fixed)
        find = lambda: find_lambda_c(model, fixed, bracket=(lo, hi), tol=args.tol)
    else:
        fixed = scenario["lambda1"] if scenario["lambda1"] is not None else 0.25
        ratio_of = lambda lam: gain_ratio(model, fixed, lam)

        def find() -> float:
            # same bisection as find_lambda_c with the two weights swapped
            low, high = lo, hi
            r_lo, r_hi = ratio_of(low), ratio_of(high)
            if r_lo is None or r_hi is None or not (r_lo > 1.0 > r_hi):
                raise NoBracketError(
                    f"no sign change across bracket [{low}, {high}]: "
                    f"ratio(lo)={r_lo}, ratio(hi)={r_hi}"
                )
            while 0.5 * (high - low) > args.tol:
                mid = 0.5 * (low + high)
                r_mid = ratio_of(mid)
                if r_mid is None:
                    mid = math.nextafter(mid, high)
                    r_mid = ratio_of(mid)
                if r_mid > 1.0:
                    low = mid
                else:
                    high = mid
            return 0.5 * (low + high)

    def json_ratio(value: float | None) -> float | None:
        return value if value is not None and math.isfinite(value) else None

    ratio_lo, ratio_hi = json_ratio(ratio_of(lo)), json_ratio(ratio_of(hi))
    try:
        lambda_c = find()
    except NoBracketError:
        payload = {
            "lambda_c": None,
            "ratio_lo": ratio_lo,
            "ratio_hi": ratio_hi,
            "status": "no-bracket",
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_NO_BRACKET
    payload = {
        "lambda_c": lambda_c,
        "ratio_lo": ratio_lo,
        "ratio_hi": ratio_hi,
        "status": "ok",
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    results = run_all(
        samples=args.samples,
        rel_tol=args.tol,
        seed=args.seed,
        double_s_offset=args.debug_double_s_offset,
    )
    for result in results:
        sys.stdout.write(result.line() + "\n")
    if all(result.passed for result in results):
        sys.stdout.write("all suites passed\n")
        return EXIT_OK
    sys.stdout.write("validation FAILED\n")
    return EXIT_NUMERICAL


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdephase",
        description=(
            "Exact qubit dephasing with correlated initial environment states: "
            "trace-distance series, gain/loss region maps, critical correlation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="emit a distance time series as CSV")
    p_evolve.add_argument("--config", help="key=value scenario file")
    p_evolve.add_argument("--t-max", type=float, dest="t_max")
    p_evolve.add_argument("--points", type=_positive_int)
    p_evolve.add_argument("--grid", choices=("linear", "log"))
    p_evolve.add_argument("--backend", choices=("closed", "quad"))
    p_evolve.add_argument(
        "--normalized", action="store_true",
        help="divide the distance column by |b+ b-*|",
    )
    p_evolve.add_argument("--out", help="output path (default stdout)")
    p_evolve.set_defaults(handler=cmd_evolve)

    p_region = sub.add_parser("region", help="classify a parameter plane as JSON")
    p_region.add_argument("--config", help="key=value scenario file")
    p_region.add_argument("--plane", required=True, help="X,Y parameter names")
    p_region.add_argument("--x-range", required=True, dest="x_range", help="lo:hi:n")
    p_region.add_argument("--y-range", required=True, dest="y_range", help="lo:hi:n")
    p_region.add_argument("--refine-boundary", action="store_true", dest="refine_boundary")
    p_region.add_argument("--out", help="output path (default stdout)")
    p_region.set_defaults(handler=cmd_region)

    p_critical = sub.add_parser("critical", help="bisect the critical correlation")
    p_critical.add_argument("--config", help="key=value scenario file")
    p_critical.add_argument("--vary", choices=("lambda1", "lambda2"), default="lambda1")
    p_critical.add_argument("--bracket", default="0.01:0.99", help="lo:hi")
    p_critical.add_argument("--tol", type=float, default=1e-4)
    p_critical.set_defaults(handler=cmd_critical)

    p_validate = sub.add_parser("validate", help="run the self-validation suites")
    p_validate.add_argument("--samples", type=_positive_int, default=100)
    p_validate.add_argument("--tol", type=float, default=1e-6)
    p_validate.add_argument("--seed", type=int, default=42)
    p_validate.add_argument(
        "--debug-double-s-offset", action="store_true", dest="debug_double_s_offset",
        help="debugging aid: double the static offset in s(0); the "
        "overlap-consistency suite must then fail",
    )
    p_validate.set_defaults(handler=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, DomainError, PhysicalityError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except NoBracketError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NO_BRACKET
    except QDephaseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
