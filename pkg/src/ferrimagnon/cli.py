"""Command-line front end: ``point``, ``sweep``, ``verify`` and ``stability``.

Exit status: 0 success, 1 usage error, 2 configuration error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, dynamics
from .errors import ConfigError, ModelError
from .model import DerivedModel, SystemParams, derive_model
from .sweep import (AXES, PRESETS, SweepSpec, csv_text, evaluate_model, evaluate_point, load_config,
                    preset_spec, run_sweep, save_config, write_metadata)

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2, 3

_PARAM_FLAGS = {
    "spin_ratio": float, "field_ratio": float, "anis_a": float, "kappa_a": float,
    "kappa_b": float, "kappa_c": float, "g_ac": float, "g_bc": float,
    "omega_c_over_hsp": float,
}


_MODEL_FLAGS = ("omega_a", "omega_b", "omega_c", "g_ab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    for name, typ in _PARAM_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    p.add_argument("--no-cavity", action="store_true", help="decouple the photon mode")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat JSON sweep configuration")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--optimize-field", action="store_true", default=None)
    p.add_argument("--workers", type=int, help="thread-pool width (default: $FERRIMAGNON_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ferrimagnon", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("point", help="all measures at one parameter point")
    _add_param_flags(p)
    m = p.add_argument_group("explicit model", "set frequencies and g_ab directly; photon couplings then default to 0")
    for name in _MODEL_FLAGS:
        m.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=None)

    s = sub.add_parser("sweep", help="run a one-dimensional sweep and write CSV + metadata")
    _add_param_flags(s)
    _add_sweep_flags(s)
    s.add_argument("--out", type=Path, help="CSV path (default: stdout); metadata goes to <out>.meta.json")
    s.add_argument("--save-config", type=Path, help="write the resolved configuration and exit")

    sub.add_parser("verify", help="run the self-test suite")

    st = sub.add_parser("stability", help="stability margin over a sweep grid")
    _add_param_flags(st)
    _add_sweep_flags(st)
    st.add_argument("--out", type=Path)
    return parser


def _param_overrides(args: argparse.Namespace) -> dict:
    kw = {k: getattr(args, k) for k in _PARAM_FLAGS if getattr(args, k) is not None}
    if args.no_cavity:
        kw["cavity_enabled"] = False
    return kw


def _resolve_spec(args: argparse.Namespace) -> SweepSpec:
    if args.config is not None:
        spec = load_config(args.config)
        if args.preset is not None:
            raise ConfigError("--config and --preset are mutually exclusive")
    elif args.preset is not None:
        spec = preset_spec(args.preset)
    else:
        spec = SweepSpec()
    kw = _param_overrides(args)
    try:
        base = replace(spec.base, **kw) if kw else spec.base
    except ModelError as exc:
        raise ConfigError(str(exc)) from exc
    upd = {k: getattr(args, k) for k in ("axis", "start", "stop", "points", "optimize_field")
           if getattr(args, k) is not None}
    return replace(spec, base=base, **upd)


def _explicit_model(args: argparse.Namespace, p: SystemParams) -> Optional[DerivedModel]:
    given = [k for k in _MODEL_FLAGS if getattr(args, k) is not None]
    if not given:
        return None
    if len(given) != len(_MODEL_FLAGS):
        missing = ", ".join("--" + k.replace("_", "-") for k in _MODEL_FLAGS if k not in given)
        raise UsageError(f"explicit model needs all of its flags; missing {missing}")
    g_ac = 0.0 if not p.cavity_enabled else (args.g_ac or 0.0)
    g_bc = 0.0 if not p.cavity_enabled else (args.g_bc if args.g_bc is not None else g_ac)
    return DerivedModel(args.omega_a, args.omega_b, args.omega_c, args.g_ab, g_ac, g_bc,
                        h_sp=float("nan"))


def _cmd_point(args: argparse.Namespace) -> int:
    try:
        p = SystemParams(**_param_overrides(args))
        dm = _explicit_model(args, p)
        ms = evaluate_point(p) if dm is None else evaluate_model(dm, p)
    except ModelError as exc:
        raise ConfigError(str(exc)) from exc
    out = {"params": p.to_dict(), "measures": asdict(ms)}
    if dm is not None:
        out["model"] = {k: getattr(dm, k) for k in ("omega_a", "omega_b", "omega_c", "g_ab", "g_ac", "g_bc")}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    if args.save_config is not None:
        save_config(spec, args.save_config)
        return EXIT_OK
    try:
        result = run_sweep(spec, workers=args.workers)
    except ModelError as exc:
        raise ConfigError(str(exc)) from exc
    text = csv_text(result)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
        write_metadata(result, args.out.with_name(args.out.name + ".meta.json"))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    from .verification import run_all

    results = run_all()
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def _cmd_stability(args: argparse.Namespace) -> int:
    from .sweep import apply_axis

    spec = _resolve_spec(args)
    rows = []
    for x in spec.grid():
        p = apply_axis(spec.base, spec.axis, float(x))
        try:
            dm = derive_model(p)
        except ModelError as exc:
            rows.append((repr(float(x)), "0", "", type(exc).__name__))
            continue
        stab = dynamics.is_stable(dynamics.build_drift(dm, p))
        rows.append((repr(float(x)), "1" if stab.stable else "0", repr(stab.margin), ""))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("axis", "stable", "margin", "error"))
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    n_bad = sum(r[1] == "0" for r in rows)
    print(f"{len(rows) - n_bad}/{len(rows)} grid points stable", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {"point": _cmd_point, "sweep": _cmd_sweep, "verify": _cmd_verify, "stability": _cmd_stability}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
