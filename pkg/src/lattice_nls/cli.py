"""Command-line front end.

Each subcommand reads a flat ``key = value`` configuration (``--config``,
``--preset`` and trailing ``key=value`` overrides, later sources winning),
writes its CSV output and a ``report.json`` into ``--out``.

Exit codes: 0 success, 2 configuration error, 3 singular lattice step,
4 convergence failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import lattice_sg as sg
from . import multiscale as ms
from . import reduction as rd

EXIT_OK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4, 5
STIRLING_CAP = 64


class ConfigError(ValueError):
    pass


def _int_list(text):
    text = text.strip()
    return [int(t) for t in text.split(",") if t.strip()] if text else []


def _fraction(text):
    return Fraction(text.strip())


LATTICE = {"p": (float, 2 ** 0.5), "q": (float, 1.0)}
CARRIER = {"M1": (int, 1), "M2": (int, -1), "cubic": (str, "paper")}

SCHEMAS = {
    "stirling": {"max_i": (int, 8), "omega": (_fraction, Fraction(4))},
    "dispersion": {"sigma": (float, 2.0), "k_samples": (int, 100),
                   "k_min": (float, 0.0), "k_max": (float, math.pi)},
    "sg-run": dict(LATTICE, n_min=(int, 0), n_max=(int, 199), m_max=(int, 49),
                   mode=(str, "background"), k=(float, 1.0), amplitude=(float, 1e-8),
                   tol=(float, 1e-12), side=(str, "right")),
    "nls-run": dict(LATTICE, **CARRIER, amplitude=(float, 0.5), width=(float, 4.0),
                    steps=(int, 2), half_width=(int, 64), boundary=(str, "periodic")),
    "validate": dict(LATTICE, **CARRIER, N_list=(_int_list, [8, 12, 16]), T=(int, 2),
                     amplitude=(float, 0.5), width=(float, 4.0), support=(float, 0.0)),
    "coeffs": dict(LATTICE, **CARRIER),
}

PRESETS = {
    "demo": {"p": "1.4142135623730951", "q": "1", "M1": "1", "M2": "-1",
             "N_list": "8,12,16", "T": "2", "amplitude": "0.5", "width": "4",
             "cubic": "paper", "sigma": "2"},
}


def parse_pairs(lines, source):
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected key = value, got %r" % (source, lineno, raw.strip()))
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("%s:%d: empty key" % (source, lineno))
        out[key] = value
    return out


def resolve_config(command, config_path=None, preset=None, overrides=()):
    schema = SCHEMAS[command]
    raw = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("unknown preset %r" % preset)
        raw.update({k: v for k, v in PRESETS[preset].items() if k in schema})
    if config_path is not None:
        try:
            with open(config_path) as fh:
                raw.update(parse_pairs(fh, config_path))
        except OSError as exc:
            raise ConfigError("cannot read config %s: %s" % (config_path, exc.strerror))
    raw.update(parse_pairs(overrides, "command line"))
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError("unknown config key %r for %s (allowed: %s)"
                          % (unknown[0], command, ", ".join(sorted(schema))))
    cfg = {}
    for key, (conv, default) in schema.items():
        if key in raw:
            try:
                cfg[key] = conv(raw[key])
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError("bad value for %s: %r (%s)" % (key, raw[key], exc))
        else:
            cfg[key] = default
    return cfg


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_report(out_dir, report):
    path = os.path.join(out_dir, "report.json")
    with open(path, "w") as fh:
        json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _params(cfg):
    return sg.SGParams(cfg["p"], cfg["q"])


def _carrier(cfg, N=8):
    if cfg["cubic"] not in ("paper", "corrected"):
        raise ConfigError("cubic must be 'paper' or 'corrected'")
    if cfg["M1"] == 0:
        raise ConfigError("M1 must be nonzero")
    try:
        return rd.ReductionConfig.from_ratio(_params(cfg), cfg["M1"], cfg["M2"], N, cubic=cfg["cubic"])
    except ValueError as exc:
        raise ConfigError(str(exc))


def _derived(rc):
    wave = rc.wave
    S, M2 = rd.compute_S(rc.M1, rc.k, rc.sigma, rc.ell)
    c = rd.nls_coefficients(rc)
    return {"sigma": rc.sigma, "k": rc.k, "omega": wave.omega,
            "group_velocity": sg.group_velocity(rc.k, rc.sigma), "Omega": wave.Omega,
            "S": S, "M2_from_S": M2,
            "coeffs": {"c1_hat": c.c1_hat, "c2_hat": c.c2_hat, "c3_hat": c.c3_hat,
                       "combined": c.combined, "cubic": c.cubic}}


# ---------------------------------------------------------------------------


def cmd_stirling(cfg, out):
    if cfg["max_i"] < 0 or cfg["max_i"] > STIRLING_CAP:
        raise ConfigError("max_i must lie in [0, %d]" % STIRLING_CAP)
    path = os.path.join(out, "stirling.csv")
    ms.write_coefficient_csv(path, cfg["max_i"], cfg["omega"])
    return {"artifacts": [path], "metrics": {"rows": (cfg["max_i"] + 1) * (cfg["max_i"] + 2) // 2}}, EXIT_OK


def cmd_dispersion(cfg, out):
    if cfg["sigma"] <= 0:
        raise ConfigError("sigma must be positive")
    if cfg["k_samples"] < 0:
        raise ConfigError("k_samples must be nonnegative")
    ks = np.linspace(cfg["k_min"], cfg["k_max"], cfg["k_samples"])
    path = os.path.join(out, "dispersion.csv")
    sg.write_dispersion_csv(path, cfg["sigma"], ks)
    dev = max((abs(abs(sg.dispersion(k, cfg["sigma"]).Omega) - 1) for k in ks), default=0.0)
    return {"artifacts": [path], "metrics": {"rows": len(ks), "max_abs_Omega_deviation": dev}}, EXIT_OK


def cmd_sg_run(cfg, out):
    params = _params(cfg)
    n = np.arange(cfg["n_min"], cfg["n_max"] + 1)
    m = np.arange(cfg["m_max"] + 1)
    if n.size < 2 or m.size < 1:
        raise ConfigError("window must hold at least 2 x 1 sites")
    c = params.background
    if cfg["mode"] == "background":
        exact = np.full((n.size, m.size), c)
    elif cfg["mode"] == "plane_wave":
        exact = c + sg.plane_wave(n[:, None], m[None, :], cfg["k"], params.sigma, cfg["amplitude"])
    else:
        raise ConfigError("mode must be 'background' or 'plane_wave'")
    if cfg["side"] not in ("right", "left"):
        raise ConfigError("side must be 'right' or 'left'")
    col = exact[-1, :] if cfg["side"] == "right" else exact[0, :]
    field = sg.sg_evolve(exact[:, 0], col, params, tol=cfg["tol"], side=cfg["side"], n_min=cfg["n_min"])
    path = os.path.join(out, "field.csv")
    field.to_csv(path)
    v = sg.background_shift(field, params)
    metrics = {"linear_residual": sg.linear_residual(v, params.sigma),
               "max_deviation_from_linear": float(np.max(np.abs(field.values - exact)))}
    if cfg["mode"] == "plane_wave" and cfg["amplitude"] != 0:
        metrics["relative_deviation"] = metrics["max_deviation_from_linear"] / abs(cfg["amplitude"])
    return {"artifacts": [path], "metrics": metrics, "derived": {"sigma": params.sigma, "background": c}}, EXIT_OK


def cmd_nls_run(cfg, out):
    rc = _carrier(cfg)
    coeffs = rd.nls_coefficients(rc)
    L = cfg["half_width"]
    if L < 2 or cfg["steps"] < 0 or cfg["width"] <= 0:
        raise ConfigError("need half_width >= 2, steps >= 0, width > 0")
    n2 = np.arange(-L, L + 1)
    phi0 = rd.Envelope(-L, rd.gaussian_profile(cfg["amplitude"], cfg["width"])(n2))
    try:
        rows = rd.nls_evolve(phi0, coeffs, cfg["steps"], cfg["boundary"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    path = os.path.join(out, "envelope.csv")
    rows.row(cfg["steps"]).to_csv(path)
    norms = [float(np.sum(np.abs(r) ** 2)) for r in rows.values]
    return {"artifacts": [path], "derived": _derived(rc),
            "metrics": {"norm_initial": norms[0], "norm_final": norms[-1],
                        "max_abs_final": float(np.max(np.abs(rows.values[-1])))}}, EXIT_OK


def cmd_validate(cfg, out):
    rc = _carrier(cfg)
    if not cfg["N_list"] or min(cfg["N_list"]) < 2:
        raise ConfigError("N_list must hold integers >= 2")
    if cfg["T"] < 1 or cfg["width"] <= 0:
        raise ConfigError("need T >= 1 and width > 0")
    support = cfg["support"] if cfg["support"] > 0 else 5 * cfg["width"]
    profile = rd.gaussian_profile(cfg["amplitude"], cfg["width"])
    report = rd.validate_reduction(rc, cfg["N_list"], profile, cfg["T"], support)
    path = os.path.join(out, "convergence.csv")
    with open(path, "w") as fh:
        fh.write("N,error\n")
        for r in report.runs:
            fh.write("%d,%.17g\n" % (r.N, r.error))
    body = {"artifacts": [path], "derived": _derived(rc), "metrics": report.as_dict(),
            "runtime_per_N": {str(r.N): r.runtime for r in report.runs}}
    return body, (EXIT_OK if report.monotone else EXIT_CONVERGENCE)


def cmd_coeffs(cfg, out):
    rc = _carrier(cfg)
    return {"artifacts": [], "derived": _derived(rc)}, EXIT_OK


COMMANDS = {"stirling": cmd_stirling, "dispersion": cmd_dispersion, "sg-run": cmd_sg_run,
            "nls-run": cmd_nls_run, "validate": cmd_validate, "coeffs": cmd_coeffs}


def build_parser():
    parser = argparse.ArgumentParser(prog="lattice-nls", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help="run the %s job" % name)
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--out", default=".", help="output directory (default: .)")
        sp.add_argument("--preset", choices=sorted(PRESETS), help="built-in configuration")
        sp.add_argument("overrides", nargs="*", metavar="key=value")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = resolve_config(args.command, args.config, args.preset, args.overrides)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    report = {"command": args.command, "config": cfg}
    try:
        os.makedirs(args.out, exist_ok=True)
        body, code = COMMANDS[args.command](cfg, args.out)
        body["artifacts"] = [os.path.relpath(a, args.out) for a in body.get("artifacts", [])]
        report.update(body)
        report["status"] = "ok" if code == EXIT_OK else "convergence failure"
    except (ConfigError, ValueError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except sg.SingularStepError as exc:
        report.update(status="singular", location={"n": exc.n, "m": exc.m},
                      denominator=exc.denominator)
        code = EXIT_SINGULAR
        print("error: %s" % exc, file=sys.stderr)
    except OSError as exc:
        print("I/O error: %s: %s" % (exc.filename or args.out, exc.strerror or exc), file=sys.stderr)
        return EXIT_IO
    report["runtime"] = time.perf_counter() - t0
    try:
        path = write_report(args.out, report)
    except OSError as exc:
        print("I/O error: %s: %s" % (exc.filename, exc.strerror), file=sys.stderr)
        return EXIT_IO
    if code == EXIT_CONVERGENCE:
        print("convergence criterion failed; see %s" % path, file=sys.stderr)
    else:
        print(path)
    return code
