"""Command-line front end: simulations, invariants, spectral curves,
discriminant scans, and monodromy, emitted as JSON (stdout) and CSV files.

Every report is deterministic (stable key order, no timestamps), carries a
``schema_version`` field, and embeds the tolerances the run actually used.
Failures exit nonzero after printing a machine-readable error object.  A
JSON config file can supply any option; explicit flags win over the file.
The ``TOPMONODROMY_TOL`` environment variable overrides the default
quadrature tolerance when no explicit value is given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .discriminant import (
    classify_special_points,
    delta_c_csv,
    g2_branch_csv,
    in_component_C,
)
from .errors import NearDiscriminantError, TopmonodromyError, ValidationError
from .periods import action_I1, action_I1_cubic
from .spectral import (
    SpectralCoeffs,
    spectral_coefficient_drift,
    spectral_from_levels,
    spectral_from_state,
)
from .topsys import LevelVector, TopState, first_integrals, integrate, level_labels
from .tracking import (
    monodromy_actions_g1,
    monodromy_periods,
    named_loop,
    parameter_loop,
    picard_lefschetz_route,
    torus_block,
)

SCHEMA_VERSION = 1
_DEFAULT_TOL = 1e-9
_TOL_ENV = "TOPMONODROMY_TOL"


def _default_tolerance():
    value = os.environ.get(_TOL_ENV)
    if value is None:
        return _DEFAULT_TOL
    try:
        tol = float(value)
    except ValueError:
        raise ValidationError(f"{_TOL_ENV} must be a number, got {value!r}")
    if not (0.0 < tol < 1.0) or not math.isfinite(tol):
        raise ValidationError(f"{_TOL_ENV} must lie in (0, 1), got {value!r}")
    return tol


def _parse_floats(text, label):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError:
        raise ValidationError(f"{label} must be a comma-separated number list")


def _parse_rows(text, label):
    """Semicolon-separated rows of comma-separated numbers (or nested lists)."""
    if isinstance(text, (list, tuple)):
        return [_parse_floats(row, label) for row in text]
    return [
        _parse_floats(part, label)
        for part in str(text).split(";")
        if part.strip() != ""
    ]


def _parse_state(m, text):
    rows = _parse_rows(text, "state")
    if not rows or any(len(r) != 3 for r in rows):
        raise ValidationError("state needs rows of 3: omega;gamma_1;...;gamma_g")
    if len(rows) < 2:
        raise ValidationError("state needs at least one gamma row after omega")
    return TopState.of(m, rows[0], rows[1:])


def _emit(payload, stream=None):
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text, file=stream or sys.stdout)


def _cmd_simulate(opts):
    state = _parse_state(opts["m"], _require(opts, "state"))
    t_end = float(opts.get("t") or 10.0)
    dt = float(opts.get("dt") or 1e-3)
    every = int(opts.get("every") or max(1, round(t_end / dt / 1000)))
    out = opts.get("out") or "trajectory.csv"
    trajectory = integrate(state, t_end, dt, sample_every=every)
    trajectory.to_csv(out)
    drift = trajectory.max_relative_drift()
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "simulate",
            "g": state.g,
            "m": state.m,
            "t_end": t_end,
            "dt": dt,
            "sample_every": every,
            "samples": len(trajectory),
            "csv": out,
            "drift": dict(zip(level_labels(state.g), map(float, drift))),
            "spectral_drift": spectral_coefficient_drift(trajectory),
            "tolerances": {},
        }
    )
    return 0


def _cmd_invariants(opts):
    state = _parse_state(opts["m"], _require(opts, "state"))
    levels = first_integrals(state)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "invariants",
            "g": state.g,
            "m": state.m,
            "values": dict(zip(level_labels(state.g), map(float, levels.values))),
            "tolerances": {},
        }
    )
    return 0


def _cmd_spectral(opts):
    if (opts.get("state") is None) == (opts.get("levels") is None):
        raise ValidationError("spectral needs exactly one of --state or --levels")
    residual = None
    if opts.get("state") is not None:
        state = _parse_state(opts["m"], opts["state"])
        coeffs = spectral_from_state(state)
        from_levels = spectral_from_levels(first_integrals(state))
        residual = max(
            abs(x - y) for x, y in zip(coeffs.a, from_levels.a)
        )
        g, m = state.g, state.m
    else:
        values = _parse_floats(opts["levels"], "levels")
        levels = LevelVector.of(opts["m"], values)
        coeffs = spectral_from_levels(levels)
        g, m = levels.g, levels.m
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectral",
        "g": g,
        "m": m,
        "a": list(coeffs.a),
        "factorization_residual": residual,
        "tolerances": {},
    }
    if g in (1, 2):
        try:
            payload["no_real_branch_points"] = in_component_C(coeffs)
        except NearDiscriminantError:
            payload["no_real_branch_points"] = None
    _emit(payload)
    return 0


def _point_payload(point):
    return {
        "location": [float(point.location[0]), float(point.location[1])],
        "kind": point.kind,
        "witness": [[w.real, w.imag] for w in point.witness],
    }


def _cmd_discriminant(opts):
    g = int(opts.get("g") or 1)
    out = opts.get("out") or "discriminant.csv"
    if g == 1:
        if opts.get("c") is None:
            raise ValidationError("discriminant --g 1 needs --c")
        c = float(opts["c"])
        lo = float(opts.get("u_min") or 0.2)
        hi = float(opts.get("u_max") or 3.0)
        count = int(opts.get("samples") or 61)
        if count < 2 or not lo < hi:
            raise ValidationError("need u_min < u_max and samples >= 2")
        us = [lo + (hi - lo) * k / (count - 1) for k in range(count)]
        with open(out, "w", newline="") as fh:
            rows = delta_c_csv(fh, c, us)
        _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "discriminant",
                "g": 1,
                "c": c,
                "csv": out,
                "samples": rows,
                "special_points": [
                    _point_payload(p) for p in classify_special_points(c)
                ],
                "tolerances": {},
            }
        )
        return 0
    if g == 2:
        sign = int(opts.get("sign") or 1)
        lo = float(opts.get("c2_min") or 0.5)
        hi = float(opts.get("c2_max") or 2.0)
        count = int(opts.get("samples") or 61)
        if count < 2 or not 0.0 < lo < hi:
            raise ValidationError("need 0 < c2_min < c2_max and samples >= 2")
        c2s = [lo + (hi - lo) * k / (count - 1) for k in range(count)]
        with open(out, "w", newline="") as fh:
            rows = g2_branch_csv(fh, c2s, sign=sign)
        _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "discriminant",
                "g": 2,
                "sign": sign,
                "csv": out,
                "samples": rows,
                "c2_range": [lo, hi],
                "tolerances": {},
            }
        )
        return 0
    raise ValidationError("discriminant supports --g 1 or --g 2")


def _parse_loop(opts):
    g = int(opts.get("g") or 1)
    orientation = int(opts.get("orientation") or 1)
    name = opts.get("loop")
    waypoints = opts.get("waypoints")
    if (name is None) == (waypoints is None):
        raise ValidationError("monodromy needs exactly one of --loop or --waypoints")
    if name is not None:
        loop = named_loop(name, orientation=orientation)
        if loop.g != g:
            raise ValidationError(
                f"loop {name!r} lives over genus {loop.g}, not {g}"
            )
    else:
        loop = parameter_loop(
            g, _parse_rows(waypoints, "waypoints"), orientation=orientation
        )
    base = opts.get("base")
    if base is not None:
        want = _parse_floats(base, "base")
        if len(want) != 3 or any(
            abs(a - b) > 1e-12 for a, b in zip(want, loop.base)
        ):
            raise ValidationError(
                f"--base {base} does not match the loop base {loop.base}"
            )
    return loop


def _cmd_monodromy(opts):
    loop = _parse_loop(opts)
    tol = float(opts["tol"]) if opts.get("tol") is not None else _default_tolerance()
    route = opts.get("route") or "periods"
    if route == "periods":
        result = monodromy_periods(loop, tol=tol)
    elif route == "local":
        result = picard_lefschetz_route(loop, tol=tol)
    else:
        raise ValidationError("route must be 'periods' or 'local'")
    reduced = monodromy_actions_g1(result) if loop.g == 1 else torus_block(result)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "monodromy",
            "name": loop.name,
            "g": loop.g,
            "route": route,
            "orientation": loop.orientation,
            "basis": list(reduced.basis),
            "matrix": [list(row) for row in reduced.matrix],
            "residual": result.residual,
            "permutation": list(result.permutation),
            "lattice_basis": list(result.basis),
            "lattice_matrix": [list(row) for row in result.matrix],
            "steps_used": result.steps_used,
            "condition": result.condition,
            "tolerances": {"quadrature": tol},
        }
    )
    return 0


def _cmd_actions(opts):
    point = _parse_floats(_require(opts, "point"), "point")
    if len(point) != 3:
        raise ValidationError("--point needs a1,a2,a3")
    area = float(opts.get("area") or 1.0)
    i1 = action_I1(point, A=area)
    cross = action_I1_cubic(point, A=area)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "actions",
            "point": point,
            "area": area,
            "I1": i1,
            "I2": area * point[0] / 2.0,
            "I3": area * point[2] / 2.0,
            "cross_check_residual": abs(i1 - cross),
            "tolerances": {"cross_check": 1e-8},
        }
    )
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "invariants": _cmd_invariants,
    "spectral": _cmd_spectral,
    "discriminant": _cmd_discriminant,
    "monodromy": _cmd_monodromy,
    "actions": _cmd_actions,
}


def _require(opts, key):
    value = opts.get(key)
    if value is None:
        raise ValidationError(f"missing required option --{key.replace('_', '-')}")
    return value


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="topmonodromy",
        description="Spectral curves, periods, and monodromy of the "
        "generalized Lagrange top.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *specs):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file of options; flags override")
        for flag, kwargs in specs:
            p.add_argument(flag, **kwargs)
        return p

    num = {"type": float}
    add(
        "simulate",
        "integrate the flow; write a trajectory CSV and a drift report",
        ("--m", num),
        ("--state", {"help": "omega;gamma_1;...;gamma_g rows of 3"}),
        ("--t", num),
        ("--dt", num),
        ("--every", {"type": int}),
        ("--out", {}),
    )
    add(
        "invariants",
        "first-integral values at a state",
        ("--m", num),
        ("--state", {}),
    )
    add(
        "spectral",
        "spectral-curve coefficients from a state or level values",
        ("--m", num),
        ("--state", {}),
        ("--levels", {}),
    )
    add(
        "discriminant",
        "discriminant-section CSV and special-point classification",
        ("--g", {"type": int}),
        ("--c", num),
        ("--u-min", {**num, "dest": "u_min"}),
        ("--u-max", {**num, "dest": "u_max"}),
        ("--sign", {"type": int}),
        ("--c2-min", {**num, "dest": "c2_min"}),
        ("--c2-max", {**num, "dest": "c2_max"}),
        ("--samples", {"type": int}),
        ("--out", {}),
    )
    add(
        "monodromy",
        "integer monodromy of the period lattice around a loop",
        ("--g", {"type": int}),
        ("--loop", {"help": "cushman, kappa1, kappa2, or kappa3"}),
        ("--waypoints", {"help": "x,y,z;x,y,z;... closed path"}),
        ("--base", {"help": "assert the loop base point"}),
        ("--orientation", {"type": int}),
        ("--route", {"choices": ["periods", "local"]}),
        ("--tol", num),
    )
    add(
        "actions",
        "action values I1, I2, I3 at a point with a cross-check residual",
        ("--point", {"help": "a1,a2,a3"}),
        ("--area", num),
    )
    return parser


def _merge_config(args):
    """Options from --config overlaid by explicitly given flags."""
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if args.config is None:
        return opts
    with open(args.config) as fh:
        try:
            loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}")
    if not isinstance(loaded, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(loaded) - set(opts)
    if unknown:
        raise ValidationError(f"config has unknown options: {sorted(unknown)}")
    merged = dict(loaded)
    merged.update({k: v for k, v in opts.items() if v is not None})
    for key in opts:
        merged.setdefault(key, None)
    return merged


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _merge_config(args)
        if opts.get("m") is None and args.command in (
            "simulate",
            "invariants",
            "spectral",
        ):
            raise ValidationError("missing required option --m")
        return _COMMANDS[args.command](opts)
    except TopmonodromyError as exc:
        _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            }
        )
        return 2 if isinstance(exc, ValidationError) else 1
    except OSError as exc:
        _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "error": {"type": "OSError", "message": str(exc)},
            }
        )
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
