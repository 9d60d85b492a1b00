"""Command-line front end.

Subcommands: deform, spectrum, verify, sweep, oracle.  Flags can also be
supplied through a flat key=value config file (UTF-8, # comments); explicit
command-line flags override config values.  Exit codes: 0 success, 1 internal
contract violation or solver failure at the top level, 2 configuration /
validation error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

from .deformation import Family, NCContext, PotentialSpec, deform
from .errors import NCSpectraError
from .oracle import solve_radial
from .sweep import (
    SplittingReport,
    SweepRow,
    run_spectrum,
    run_sweep,
    to_csv,
    to_json,
)


class ConfigError(Exception):
    pass


FLAG_TYPES = {
    "family": str, "a": float, "b": float, "c": float,
    "theta": str, "m": str, "n": int, "degree": int,
    "mode": str, "oracle": str, "format": str, "out": str,
    "no_timestamp": bool,
}
DEFAULTS = {
    "b": 0.0, "c": 0.0, "theta": "0", "m": "1", "n": 0, "degree": 1,
    "mode": "rederived", "oracle": "on", "format": "json", "out": None,
    "no_timestamp": False,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncspectra",
        description="Bound states of noncommutativity-deformed 2D central "
                    "potentials: closed-form spectra, numerical oracle, "
                    "Zeeman-splitting sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("deform", "print the deformed radial problem"),
        ("spectrum", "closed-form spectrum rows with oracle verification"),
        ("verify", "convention ledger: arbitrate sign/indexing ambiguities"),
        ("sweep", "Zeeman table E(theta, m), splitting slope and scaling "
                  "exponent"),
        ("oracle", "numerical eigenvalues only"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--family", choices=["even", "inverse"])
        p.add_argument("--a", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--theta", help="value or comma list")
        p.add_argument("--m", help="integer or comma list")
        p.add_argument("--n", type=int, help="radial level / eigenvalue count")
        p.add_argument("--degree", type=int,
                       help="polynomial degree (inverse-power family)")
        p.add_argument("--mode", choices=["paper", "rederived"])
        p.add_argument("--oracle", choices=["on", "off"])
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--out")
        p.add_argument("--config")
        p.add_argument("--no-timestamp", action="store_true", default=None,
                       dest="no_timestamp")
    return parser


def parse_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, val = (s.strip() for s in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in FLAG_TYPES:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                typ = FLAG_TYPES[key]
                try:
                    values[key] = (val.lower() in ("1", "true", "yes", "on")
                                   if typ is bool else typ(val))
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return values


def merge_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(parse_config_file(args.config))
    for key in FLAG_TYPES:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _parse_list(text, typ, name):
    try:
        vals = [typ(float(tok)) if typ is int else typ(tok)
                for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --{name} value {text!r}: {exc}") from exc
    if not vals:
        raise ConfigError(f"--{name} list is empty")
    return vals


def validate(cfg):
    if cfg["command"] != "verify":
        if cfg.get("family") is None:
            raise ConfigError("--family is required (even|inverse)")
        if cfg.get("a") is None:
            raise ConfigError("--a is required")
        cfg["family_enum"] = Family(cfg["family"])
        cfg["thetas"] = _parse_list(cfg["theta"], float, "theta")
        cfg["ms"] = _parse_list(cfg["m"], int, "m")
        if cfg["mode"] not in ("paper", "rederived"):
            raise ConfigError("--mode must be paper or rederived")
        if cfg["format"] not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if cfg["command"] == "sweep" and len(cfg["thetas"]) < 3:
            raise ConfigError("sweep needs >= 3 theta values for slope fits")
    return cfg


def _timestamp(cfg):
    if cfg["no_timestamp"]:
        return None
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _emit(cfg, text):
    if cfg.get("out"):
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_deform(cfg):
    problems = []
    for theta in cfg["thetas"]:
        for m in cfg["ms"]:
            spec = PotentialSpec(cfg["family_enum"], cfg["a"], cfg["b"],
                                 cfg["c"] if cfg["family_enum"] is
                                 Family.EVEN_POWER else 0.0)
            p = deform(spec, NCContext(theta, m))
            problems.append({
                "family": p.family.value, "theta": p.theta, "m": p.m,
                "terms": {str(k): v for k, v in sorted(p.terms.items())},
                "energy_shift": p.energy_shift,
                "centrifugal": p.centrifugal,
            })
    ts = _timestamp(cfg)
    if cfg["format"] == "json":
        payload = {"schema": 1, "problems": problems}
        if ts:
            payload["generated"] = ts
        _emit(cfg, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = ["# schema=1"]
        if ts:
            lines.append(f"# generated={ts}")
        lines.append("family,theta,m,power,coefficient,energy_shift")
        for p in problems:
            for power, coeff in p["terms"].items():
                lines.append(
                    f"{p['family']},{p['theta']:.17g},{p['m']},{power},"
                    f"{coeff:.17g},{p['energy_shift']:.17g}")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _emit_report(cfg, report):
    ts = _timestamp(cfg)
    if cfg["format"] == "csv":
        _emit(cfg, to_csv(report, timestamp=ts))
    else:
        _emit(cfg, to_json(report, timestamp=ts))


def cmd_spectrum(cfg):
    report = run_spectrum(
        cfg["family_enum"], cfg["a"], cfg["b"], cfg["c"],
        cfg["thetas"], cfg["ms"], n=cfg["n"], degree=cfg["degree"],
        mode=cfg["mode"], oracle_on=cfg["oracle"] == "on")
    _emit_report(cfg, report)
    return 0


def cmd_sweep(cfg):
    report = run_sweep(
        cfg["family_enum"], cfg["a"], cfg["b"], cfg["c"],
        cfg["thetas"], cfg["ms"], level=cfg["n"], degree=cfg["degree"],
        mode=cfg["mode"])
    _emit_report(cfg, report)
    return 0


def cmd_oracle(cfg):
    rows = []
    n_eigs = max(cfg["n"], 1) if cfg["n"] else 6
    for theta in sorted(set(cfg["thetas"])):
        for m in sorted(set(cfg["ms"])):
            spec = PotentialSpec(cfg["family_enum"], cfg["a"], cfg["b"],
                                 cfg["c"] if cfg["family_enum"] is
                                 Family.EVEN_POWER else 0.0)
            try:
                problem = deform(spec, NCContext(theta, m))
                res = solve_radial(problem, n_eigs=n_eigs)
            except NCSpectraError as exc:
                rows.append(SweepRow(cfg["family"], theta, m, 0, cfg["mode"],
                                     math.nan, math.nan, math.nan, math.nan,
                                     -1, False, math.nan, type(exc).__name__))
                continue
            for i, E in enumerate(res.eigenvalues):
                rows.append(SweepRow(
                    cfg["family"], theta, m, i, cfg["mode"], float(E),
                    float(res.reduced[i]), math.nan, math.nan,
                    int(res.node_counts[i]), bool(res.converged[i]),
                    float(res.residual_norms[i]), "ok"))
    rows.sort(key=lambda r: (r.theta, r.m, r.level))
    report = SplittingReport(rows=rows, meta={
        "family": cfg["family"], "a": cfg["a"], "b": cfg["b"], "c": cfg["c"],
        "n_eigs": n_eigs,
    })
    _emit_report(cfg, report)
    return 0


def cmd_verify(cfg):
    from .verify import render_text, run_verify

    report = run_verify()
    if cfg["format"] == "json":
        payload = {"schema": 1, "ok": report.ok, "entries": report.rows}
        ts = _timestamp(cfg)
        if ts:
            payload["generated"] = ts
        _emit(cfg, json.dumps(payload, indent=2, sort_keys=True,
                              default=str) + "\n")
    else:
        _emit(cfg, render_text(report))
    return 0 if report.ok else 1


COMMANDS = {
    "deform": cmd_deform,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = validate(merge_config(args))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[cfg["command"]](cfg)
    except NCSpectraError as exc:
        # validation-shaped failures (bad physical parameters) are config
        # errors for the thin deform wrapper, solver failures elsewhere
        if cfg["command"] == "deform":
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
