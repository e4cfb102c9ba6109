"""Command line front end for the hypersurface toolkit.

Subcommands:
    classify   report admissibility and branch types at one parameter point
    profile    integrate the radius curve and emit it as CSV
    immerse    sample the immersion and its unit normal as CSV
    verify     run the numerical checker on a constructed immersion
    sweep      classify a rectangle of the parameter plane

Parameters come from flags or from a JSON config file; flags take
precedence.  Identical configuration produces byte-identical output.  CSV
fields carry 17 significant digits with LF line endings, JSON output is
sorted by key.

Exit codes: 0 success, 1 invalid input, 2 requested point or branch not
admissible, 3 numerical failure during integration or sampling, 4
verification thresholds exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, NoReturn, Sequence

import numpy as np

from .errors import (
    DegenerateComplement,
    DegenerateSample,
    DomainError,
    DomainExit,
    InvalidInput,
    NumericalFailure,
    SignatureUnavailable,
)
from .immersion import build_immersion, build_point, gauss_map, verify
from .moduli import SignCase, admissible, params_for, phi_bounds, sweep, thresholds
from .profile import (
    IntegrationOptions,
    ProfileParams,
    ProfileSolution,
    SolutionTag,
    classify,
    eval_f,
    integrate_profile,
    kappas,
    measure_period,
    period_quadrature,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_ADMISSIBLE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

_DEFAULTS: dict[str, Any] = {
    "C": 0.0,
    "t_min": -10.0,
    "t_max": 10.0,
    "step": 1.0e-3,
    "tol": 1.0e-8,
    "fd_step": 1.0e-4,
    "count": 8,
    "seed": 0,
    "stride": 1,
    "residual_tol": 1.0e-7,
    "kappa_tol": 1.0e-4,
    "std_tol": 1.0e-5,
}

_CONFIG_KEYS: dict[str, frozenset[str]] = {
    "classify": frozenset({"case", "n", "H", "C", "out"}),
    "profile": frozenset(
        {"case", "n", "H", "C", "g0", "t_min", "t_max", "step", "tol", "out"}
    ),
    "immerse": frozenset(
        {
            "case",
            "n",
            "H",
            "C",
            "g0",
            "k",
            "t_min",
            "t_max",
            "step",
            "tol",
            "count",
            "seed",
            "stride",
            "out",
        }
    ),
    "verify": frozenset(
        {
            "case",
            "n",
            "H",
            "C",
            "g0",
            "k",
            "t_min",
            "t_max",
            "step",
            "tol",
            "count",
            "seed",
            "fd_step",
            "residual_tol",
            "kappa_tol",
            "std_tol",
            "out",
        }
    ),
    "sweep": frozenset(
        {
            "case",
            "n",
            "H_min",
            "H_max",
            "H_count",
            "C_min",
            "C_max",
            "C_count",
            "out",
            "curves_out",
        }
    ),
}


class _Parser(argparse.ArgumentParser):
    """Parser whose usage errors surface as InvalidInput (exit code 1)."""

    def error(self, message: str) -> NoReturn:
        raise InvalidInput(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_text(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out_path: Any) -> None:
    if out_path:
        with open(str(out_path), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidInput("config file must hold a JSON object")
    return data


def _merge(args: argparse.Namespace, command: str) -> dict[str, Any]:
    """Combine config file values and flags; flags win, unknown keys fail."""
    allowed = _CONFIG_KEYS[command]
    merged: dict[str, Any] = {}
    if args.config is not None:
        data = _load_config(args.config)
        unknown = sorted(set(data) - set(allowed))
        if unknown:
            raise InvalidInput(
                f"unknown config keys for {command}: {', '.join(unknown)}"
            )
        merged.update(data)
    for key in allowed:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _required(merged: dict[str, Any], key: str) -> Any:
    if key not in merged:
        raise InvalidInput(f"missing required parameter: {key}")
    return merged[key]


def _as_int(value: Any, key: str, minimum: int | None = None) -> int:
    if isinstance(value, bool):
        raise InvalidInput(f"{key} must be an integer, got {value!r}")
    if not isinstance(value, int):
        try:
            value = int(str(value).strip())
        except ValueError:
            raise InvalidInput(f"{key} must be an integer, got {value!r}") from None
    if minimum is not None and value < minimum:
        raise InvalidInput(f"{key} must be at least {minimum}, got {value}")
    return value


def _as_float(value: Any, key: str) -> float:
    if isinstance(value, bool):
        raise InvalidInput(f"{key} must be a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InvalidInput(f"{key} must be a number, got {value!r}") from None


def _resolve_symbolic(
    value: Any,
    key: str,
    symbols: Sequence[str],
    case: SignCase,
    n: int,
    H: float,
) -> float:
    """A number, or the name of a threshold quantity evaluated at (case, n, H)."""
    if isinstance(value, str):
        text = value.strip()
        if text in symbols:
            return float(thresholds(case, n, H, require=text)[text])
        try:
            return float(text)
        except ValueError:
            raise InvalidInput(
                f"{key} must be a number or one of {list(symbols)}, got {value!r}"
            ) from None
    return _as_float(value, key)


def _case_and_curve(merged: dict[str, Any]) -> tuple[SignCase, int, float]:
    case = SignCase.from_name(str(_required(merged, "case")))
    n = _as_int(_required(merged, "n"), "n")
    H = _as_float(_required(merged, "H"), "H")
    return case, n, H


def _profile_inputs(merged: dict[str, Any]) -> tuple[SignCase, ProfileParams, float]:
    case, n, H = _case_and_curve(merged)
    C = _resolve_symbolic(_required(merged, "C"), "C", ("r1", "r2"), case, n, H)
    g0 = _resolve_symbolic(_required(merged, "g0"), "g0", ("q1", "q2"), case, n, H)
    return case, params_for(case, n, H, C), g0


def _integration_inputs(merged: dict[str, Any]) -> tuple[float, float, IntegrationOptions]:
    t_min = _as_float(merged.get("t_min", _DEFAULTS["t_min"]), "t_min")
    t_max = _as_float(merged.get("t_max", _DEFAULTS["t_max"]), "t_max")
    step = _as_float(merged.get("step", _DEFAULTS["step"]), "step")
    tol = _as_float(merged.get("tol", _DEFAULTS["tol"]), "tol")
    return t_min, t_max, IntegrationOptions(step=step, tol=tol)


def _run_profile(
    p: ProfileParams, g0: float, merged: dict[str, Any]
) -> ProfileSolution | None:
    """Integrate the branch through g0, or None when g0 is on no branch."""
    t_min, t_max, opts = _integration_inputs(merged)
    branch = classify(p, branch_hint=g0)
    if branch.tag is SolutionTag.NoPositiveSolution:
        print(
            f"error: g0={_fmt(g0)} does not lie on an admissible solution branch",
            file=sys.stderr,
        )
        return None
    return integrate_profile(p, g0, t_span=(t_min, t_max), opts=opts)


def _interval_cell(value: float) -> float | None:
    return None if math.isinf(value) else float(value)


def cmd_classify(merged: dict[str, Any]) -> int:
    case, n, H = _case_and_curve(merged)
    C = _resolve_symbolic(merged.get("C", _DEFAULTS["C"]), "C", ("r1", "r2"), case, n, H)
    report = admissible(case, n, H, C)
    try:
        bounds = phi_bounds(case, n, H)
    except DomainError:
        bounds = {}
    signs = case.signs
    branches = [
        {
            "type": entry.tag.short,
            "interval": [
                _interval_cell(entry.interval[0]),
                _interval_cell(entry.interval[1]),
            ],
            "root_multiplicities": list(entry.root_multiplicities),
        }
        for entry in report.types
    ]
    payload = {
        "params": {
            "case": case.value,
            "n": n,
            "a": signs.a,
            "b": signs.b,
            "d": signs.d,
            "k": case.ambient_index,
            "H": H,
            "C": C,
        },
        "admissible": report.admissible,
        "types": [entry.tag.short for entry in report.types],
        "branches": branches,
        "boundary": report.boundary,
        "notes": report.notes,
        "thresholds": {key: float(val) for key, val in thresholds(case, n, H).items()},
        "bounds": {key: float(val) for key, val in bounds.items()},
    }
    _emit(_json_text(payload), merged.get("out"))
    return EXIT_OK if report.admissible else EXIT_NOT_ADMISSIBLE


def cmd_profile(merged: dict[str, Any]) -> int:
    case, p, g0 = _profile_inputs(merged)
    sol = _run_profile(p, g0, merged)
    if sol is None:
        return EXIT_NOT_ADMISSIBLE
    k1, k2 = kappas(p, sol.g)
    phi_norm = math.sqrt(p.n * (p.n - 1.0)) * sol.g ** (-float(p.n))
    residual = sol.g_prime * sol.g_prime - eval_f(p, sol.g)
    lines = ["t,g,g_prime,kappa1,kappa2,norm_phi,energy_residual"]
    for i in range(sol.t_grid.size):
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    sol.t_grid[i],
                    sol.g[i],
                    sol.g_prime[i],
                    k1[i],
                    k2[i],
                    phi_norm[i],
                    residual[i],
                )
            )
        )
    if sol.type.tag is SolutionTag.Type1_Periodic:
        v1, v2 = sol.type.interval
        try:
            measured: float | None = measure_period(sol)
        except NumericalFailure:
            measured = None
        footer = {
            "interval": [float(v1), float(v2)],
            "period_measured": measured,
            "period_quadrature": period_quadrature(p, v1, v2),
        }
        lines.append("# " + json.dumps(footer, sort_keys=True))
    _emit("\n".join(lines) + "\n", merged.get("out"))
    return EXIT_OK


def _build_from_merged(merged: dict[str, Any]):
    case, p, g0 = _profile_inputs(merged)
    sol = _run_profile(p, g0, merged)
    if sol is None:
        return None
    k = _as_int(merged.get("k", case.ambient_index), "k", minimum=0)
    count = _as_int(merged.get("count", _DEFAULTS["count"]), "count", minimum=1)
    seed = _as_int(merged.get("seed", _DEFAULTS["seed"]), "seed", minimum=0)
    return build_immersion(p, k, sol, count=count, seed=seed)


def cmd_immerse(merged: dict[str, Any]) -> int:
    spec = _build_from_merged(merged)
    if spec is None:
        return EXIT_NOT_ADMISSIBLE
    stride = _as_int(merged.get("stride", _DEFAULTS["stride"]), "stride", minimum=1)
    dim = spec.space.ambient_dim
    header = (
        ["t", "y_index"]
        + [f"phi_{j}" for j in range(dim)]
        + [f"nu_{j}" for j in range(dim)]
    )
    lines = [",".join(header)]
    for ti in range(0, spec.profile.t_grid.size, stride):
        t_val = spec.profile.t_grid[ti]
        for yi in range(spec.s_points.shape[0]):
            y = spec.s_points[yi]
            phi = build_point(spec, ti, y)
            nu = gauss_map(spec, ti, y)
            cells = [_fmt(t_val), str(yi)]
            cells.extend(_fmt(v) for v in phi)
            cells.extend(_fmt(v) for v in nu)
            lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", merged.get("out"))
    return EXIT_OK


def cmd_verify(merged: dict[str, Any]) -> int:
    spec = _build_from_merged(merged)
    if spec is None:
        return EXIT_NOT_ADMISSIBLE
    fd_step = _as_float(merged.get("fd_step", _DEFAULTS["fd_step"]), "fd_step")
    residual_tol = _as_float(
        merged.get("residual_tol", _DEFAULTS["residual_tol"]), "residual_tol"
    )
    kappa_tol = _as_float(merged.get("kappa_tol", _DEFAULTS["kappa_tol"]), "kappa_tol")
    std_tol = _as_float(merged.get("std_tol", _DEFAULTS["std_tol"]), "std_tol")
    report = verify(spec, fd_step=fd_step)
    worst_residual = max(
        report.max_ambient_residual,
        report.max_gauss_norm_residual,
        report.max_tangency_residual,
    )
    passed = (
        worst_residual <= residual_tol
        and report.kappa1_err <= kappa_tol
        and report.kappa2_err <= kappa_tol
        and report.mean_curvature_err <= kappa_tol
        and report.mean_curvature_std <= std_tol
    )
    p = spec.params
    payload = {
        "params": {
            "case": SignCase.from_signs(p.a, p.b, p.d).value,
            "n": p.n,
            "H": p.H,
            "C": p.C,
            "g0": float(spec.profile.g[int(np.argmin(np.abs(spec.profile.t_grid)))]),
            "construction": spec.case.value,
        },
        "max_ambient_residual": report.max_ambient_residual,
        "max_gauss_norm_residual": report.max_gauss_norm_residual,
        "max_tangency_residual": report.max_tangency_residual,
        "kappa1_err": report.kappa1_err,
        "kappa2_err": report.kappa2_err,
        "mean_curvature_err": report.mean_curvature_err,
        "mean_curvature_std": report.mean_curvature_std,
        "fd_step": report.fd_step,
        "thresholds": {
            "residual_tol": residual_tol,
            "kappa_tol": kappa_tol,
            "std_tol": std_tol,
        },
        "passed": passed,
    }
    _emit(_json_text(payload), merged.get("out"))
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_sweep(merged: dict[str, Any]) -> int:
    case = SignCase.from_name(str(_required(merged, "case")))
    n = _as_int(_required(merged, "n"), "n")
    h_min = _as_float(_required(merged, "H_min"), "H_min")
    h_max = _as_float(_required(merged, "H_max"), "H_max")
    h_count = _as_int(_required(merged, "H_count"), "H_count", minimum=1)
    c_min = _as_float(_required(merged, "C_min"), "C_min")
    c_max = _as_float(_required(merged, "C_max"), "C_max")
    c_count = _as_int(_required(merged, "C_count"), "C_count", minimum=1)
    result = sweep(
        case,
        n,
        np.linspace(h_min, h_max, h_count),
        np.linspace(c_min, c_max, c_count),
    )
    grid_lines = ["H,C,admissible,types,boundary"]
    for i in range(result.h_values.size):
        for j in range(result.c_values.size):
            grid_lines.append(
                ",".join(
                    (
                        _fmt(result.h_values[i]),
                        _fmt(result.c_values[j]),
                        "true" if result.admissible[i, j] else "false",
                        result.types[i][j],
                        result.boundary[i][j],
                    )
                )
            )
    curve_lines = ["H,q1,q2,r1,r2"]
    for i in range(result.h_values.size):
        cells = [_fmt(result.h_values[i])]
        for key in ("q1", "q2", "r1", "r2"):
            val = result.curves[key][i]
            cells.append("" if math.isnan(val) else _fmt(val))
        curve_lines.append(",".join(cells))
    grid_text = "\n".join(grid_lines) + "\n"
    curves_text = "\n".join(curve_lines) + "\n"
    curves_out = merged.get("curves_out")
    if curves_out:
        _emit(grid_text, merged.get("out"))
        _emit(curves_text, curves_out)
    else:
        _emit(grid_text + "\n" + curves_text, merged.get("out"))
    return EXIT_OK


_HANDLERS = {
    "classify": cmd_classify,
    "profile": cmd_profile,
    "immerse": cmd_immerse,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="cmcforms",
        description="Construct and check the two-curvature hypersurface families.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    cases = [c.value for c in SignCase]

    def new_sub(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument(
            "--config",
            default=None,
            help="JSON file with parameters; flags override file values",
        )
        sp.add_argument("--out", default=None, help="output file path (default stdout)")
        return sp

    def add_point(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--case", choices=cases, default=None, help="sign case name")
        sp.add_argument("--n", type=int, default=None, help="hypersurface dimension")
        sp.add_argument("--H", type=float, default=None, help="mean curvature")

    def add_branch(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--C", default=None, help="energy level, a number or r1/r2")
        sp.add_argument(
            "--g0", default=None, help="initial radius, a number or q1/q2"
        )
        sp.add_argument("--t-min", type=float, default=None, help="span start (<= 0)")
        sp.add_argument("--t-max", type=float, default=None, help="span end (>= 0)")
        sp.add_argument("--step", type=float, default=None, help="integration step")
        sp.add_argument("--tol", type=float, default=None, help="drift tolerance")

    def add_sampling(sp: argparse.ArgumentParser) -> None:
        sp.add_argument(
            "--k", type=int, default=None, help="ambient index (default per case)"
        )
        sp.add_argument(
            "--count", type=int, default=None, help="fiber sample count (default 8)"
        )
        sp.add_argument("--seed", type=int, default=None, help="sampling seed")

    sp = new_sub("classify", "Report branch types and thresholds at one point.")
    add_point(sp)
    sp.add_argument("--C", default=None, help="energy level, a number or r1/r2 (default 0)")

    sp = new_sub("profile", "Integrate the radius curve and emit CSV.")
    add_point(sp)
    add_branch(sp)

    sp = new_sub("immerse", "Sample the immersion and its normal as CSV.")
    add_point(sp)
    add_branch(sp)
    add_sampling(sp)
    sp.add_argument(
        "--stride", type=int, default=None, help="emit every stride-th time node"
    )

    sp = new_sub("verify", "Check one constructed immersion and emit JSON.")
    add_point(sp)
    add_branch(sp)
    add_sampling(sp)
    sp.add_argument("--fd-step", type=float, default=None, help="difference step")
    sp.add_argument(
        "--residual-tol", type=float, default=None, help="residual threshold"
    )
    sp.add_argument(
        "--kappa-tol", type=float, default=None, help="curvature error threshold"
    )
    sp.add_argument(
        "--std-tol", type=float, default=None, help="mean curvature spread threshold"
    )

    sp = new_sub("sweep", "Classify a rectangle of the (H, C) plane as CSV.")
    sp.add_argument("--case", choices=cases, default=None, help="sign case name")
    sp.add_argument("--n", type=int, default=None, help="hypersurface dimension")
    sp.add_argument("--H-min", type=float, default=None)
    sp.add_argument("--H-max", type=float, default=None)
    sp.add_argument("--H-count", type=int, default=None)
    sp.add_argument("--C-min", type=float, default=None)
    sp.add_argument("--C-max", type=float, default=None)
    sp.add_argument("--C-count", type=int, default=None)
    sp.add_argument(
        "--curves-out",
        default=None,
        help="write the threshold curves to this path instead of appending",
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        merged = _merge(args, args.command)
        return _HANDLERS[args.command](merged)
    except (InvalidInput, SignatureUnavailable, DomainError, DegenerateComplement) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DomainExit, NumericalFailure, DegenerateSample) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        try:
            sys.stdout.close()
        except OSError:
            pass
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
