"""Command line interface.

Every command reads an optional JSON config (--config) and applies
``--set key=value`` overrides (value parsed as JSON, dotted keys reach into
nested objects). Results go to stdout or --output as CSV preceded by '#'
comment lines carrying the resolved config; classify prints JSON.

Exit codes: 0 ok, 1 malformed config, 2 domain error, 3 accuracy failure,
4 infeasible weight construction.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import __version__
from .asymptotics import DEFAULT_SCHEDULE, fit_asymptotic
from .core import BallPoint, OperatorParams, ProductPoint
from .criteria import classify, classify_bergman, classify_berezin, sweep
from .errors import AccuracyError, ConfigError, ForelliRudinError
from .extremal import log_blowup_probe, necessity_ratio_curve
from .operators import Separable, berezin_transform, bergman_project
from .quadrature import MonteCarloConfig, build_ball_rule, build_disc_rule
from .schur import DEFAULT_RADII, construct_weights, schur_csv_rows, verify_schur_first, verify_schur_second


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _set(config: dict, assignment: str):
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like key=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(key, "cannot descend into a non-object")
    node[parts[-1]] = value


def load_config(args) -> dict:
    config = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(config, dict):
            raise ConfigError("config", "top level must be a JSON object")
    for assignment in args.set or []:
        _set(config, assignment)
    return config


def _get(config, key, default=None, required=False):
    if key not in config:
        if required:
            raise ConfigError(key, "missing field")
        return default
    return config[key]


def _number_list(config, key, default):
    vals = _get(config, key, default)
    if not isinstance(vals, (list, tuple)) or not vals:
        raise ConfigError(key, "expected a non-empty list of numbers")
    out = []
    for i, v in enumerate(vals):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}[{i}]", f"expected a number, got {v!r}")
        out.append(float(v))
    return out


def _params(config) -> OperatorParams:
    return OperatorParams.from_dict(_get(config, "params", required=True))


def _write_csv(out, command, config, header, rows, extra=()):
    out.write(f"# command: {command}\n")
    out.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    for line in extra:
        out.write(f"# {line}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def _point(value, field):
    try:
        coords = [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c) for c in value]
        return BallPoint(tuple(coords))
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(field, f"bad point {value!r}: {exc}") from None


def _product_points(config):
    raw = _get(config, "points", required=True)
    if not isinstance(raw, list) or not raw:
        raise ConfigError("points", "expected a list of [z, w] pairs")
    pts = []
    for k, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 2:
            raise ConfigError(f"points[{k}]", "expected [z, w] with z, w coordinate lists")
        pts.append(ProductPoint(_point(item[0], f"points[{k}][0]"), _point(item[1], f"points[{k}][1]")))
    return pts


def _input_function(config):
    spec = _get(config, "function", {"constant": 1})
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("function", "expected one of {constant: v}, {monomial: [j, k]}")
    (kind, val), = spec.items()
    if kind == "constant":
        return Separable(lambda u: np.ones(u.shape[0]), lambda e: np.ones(e.shape[0]), complex(val))
    if kind == "monomial":
        if not isinstance(val, list) or len(val) != 2 or not all(isinstance(v, int) and v >= 0 for v in val):
            raise ConfigError("function.monomial", "expected two non-negative integers")
        j, k = val
        return Separable(lambda u: u[:, 0] ** j, lambda e: e[:, 0] ** k)
    raise ConfigError("function", f"unknown function kind {kind!r}")


def _point_label(pt: ProductPoint):
    z = ";".join(fmt(c.real) + ("+" if c.imag >= 0 else "") + fmt(c.imag) + "j" for c in pt.z.coords)
    w = ";".join(fmt(c.real) + ("+" if c.imag >= 0 else "") + fmt(c.imag) + "j" for c in pt.w.coords)
    return f"({z}|{w})"


# -- commands -------------------------------------------------------------------


def cmd_classify(config, out, threads):
    res = classify(_params(config))
    out.write(json.dumps(res.to_dict(), sort_keys=True, default=fmt) + "\n")


def cmd_sweep(config, out, threads):
    params = _params(config)
    sw = _get(config, "sweep", required=True)
    field = _get(sw, "field", "c")
    if field not in ("a", "b", "c", "alpha", "beta", "p", "q"):
        raise ConfigError("sweep.field", f"unknown field {field!r}")
    index = _get(sw, "index", 0)
    if index not in (0, 1):
        raise ConfigError("sweep.index", "must be 0 or 1")
    start, stop = float(_get(sw, "start", required=True)), float(_get(sw, "stop", required=True))
    steps = _get(sw, "steps", 11)
    if not isinstance(steps, int) or steps < 2:
        raise ConfigError("sweep.steps", "must be an integer >= 2")
    values = [round(start + k * (stop - start) / (steps - 1), 12) for k in range(steps)]
    rows = []
    for v, res in sweep(params, field, index, values):
        fails = ";".join(f[0] for f in res.failures)
        rows.append((v, res.bounded, res.theorem_case, res.satisfied_branch or "", fails))
    _write_csv(out, "sweep", config, ["value", "bounded", "theorem_case", "branch", "failures"], rows)


def cmd_asymptotic(config, out, threads):
    c = float(_get(config, "c", required=True))
    t = float(_get(config, "t", 0.0))
    n = _get(config, "n", 1)
    if not isinstance(n, int) or n < 1:
        raise ConfigError("n", "must be a positive integer")
    schedule = _number_list(config, "schedule", list(DEFAULT_SCHEDULE))
    rule = None
    if n > 1:
        mc = _get(config, "monte_carlo", {})
        rule = build_ball_rule(n, MonteCarloConfig(int(_get(mc, "samples", 200000)), int(_get(mc, "seed", 0))), t)
    rep = fit_asymptotic(c, t, n, schedule, rule, threads)
    summary = {"regime": rep.regime, "fitted_exponent": fmt(rep.fitted_exponent),
               "r_squared": fmt(rep.r_squared), "spread": fmt(rep.spread)}
    _write_csv(out, "asymptotic", config, ["one_minus_r2", "I_value", "refined_flag"], rep.rows(),
               [f"fit: {json.dumps(summary, sort_keys=True)}"])


def cmd_schur(config, out, threads):
    params = _params(config)
    radii = _number_list(config, "radii", list(DEFAULT_RADII))
    w = construct_weights(params)
    first = verify_schur_first(w, params, radii)
    second = verify_schur_second(w, params, radii)
    summary = {"max_ratio_1": fmt(first.max_ratio), "max_ratio_2": fmt(second.max_ratio),
               "stabilized": first.stabilized and second.stabilized}
    _write_csv(out, "schur-verify", config, ["radius", "ratio_1", "ratio_2"], schur_csv_rows(first, second),
               [f"weights: {json.dumps(w.to_dict(), sort_keys=True, default=fmt)}",
                f"summary: {json.dumps(summary, sort_keys=True)}"])


def cmd_extremal(config, out, threads):
    params = _params(config)
    probe = _get(config, "probe", "necessity")
    schedule = _number_list(config, "schedule", list(DEFAULT_SCHEDULE))
    if probe == "necessity":
        curve = necessity_ratio_curve(params, schedule)
        label = "growth_exponent"
    elif probe == "log":
        factor = _get(config, "factor", 2)
        if factor not in (1, 2):
            raise ConfigError("factor", "must be 1 or 2")
        curve = log_blowup_probe(params, schedule, factor - 1)
        label = "log_power_mismatch"
    else:
        raise ConfigError("probe", f"unknown probe {probe!r}")
    _write_csv(out, "extremal", config, ["radius", "family_norm", "T_norm", "ratio"], curve.rows(),
               [f"{label}: {fmt(curve.exponent)}"])


def _special(config, out, which):
    gamma = _number_list(config, "gamma", [0.0, 0.0])
    if len(gamma) != 2:
        raise ConfigError("gamma", "expected two entries")
    pts = _product_points(config)
    f = _input_function(config)
    op = bergman_project if which == "project" else berezin_transform
    vals = op(f, gamma, pts)
    rows = [(_point_label(pt), v.real, v.imag) for pt, v in zip(pts, np.atleast_1d(vals))]
    extra = []
    if "spaces" in config:
        sp = config["spaces"]
        check = classify_bergman if which == "project" else classify_berezin
        res = check(gamma, _get(sp, "alpha", [0, 0]), _get(sp, "beta", [0, 0]),
                    _get(sp, "p", [2, 2]), _get(sp, "q", [2, 2]), 1)
        extra.append(f"classification: {json.dumps(res.to_dict(), sort_keys=True, default=fmt)}")
    _write_csv(out, which, config, ["point", "value_re", "value_im"], rows, extra)


def cmd_project(config, out, threads):
    _special(config, out, "project")


def cmd_berezin(config, out, threads):
    _special(config, out, "berezin")


def cmd_quad_selftest(config, out, threads):
    """Normalisation and moment checks of the disc and Monte Carlo rules."""
    from .special import norm_const

    rows, ok = [], True
    for theta in (-0.5, 0.0, 1.0, 2.5):
        rule = build_disc_rule(32, 16, theta)
        err = abs(rule.integrate(lambda z: np.ones(z.shape[0])) - 1.0)
        ok &= err < 1e-10
        rows.append(("disc_mass", 1, theta, 1.0, err))
        # |z|^2 moment against dv_theta in one variable: 1 - c_theta / c_{theta+1}
        exact = 1.0 - norm_const(theta, 1) / norm_const(theta + 1.0, 1)
        err = abs(rule.integrate(lambda z: np.abs(z[:, 0]) ** 2) - exact)
        ok &= err < 1e-10
        rows.append(("disc_moment", 1, theta, exact, err))
    seed = int(_get(config, "seed", 0))
    samples = int(_get(config, "samples", 200000))
    for n in (2, 3):
        rule = build_ball_rule(n, MonteCarloConfig(samples, seed, radial_tilt=0.5, self_normalized=False), 0.0)
        est, se = rule.integrate_with_error(lambda z: np.ones(z.shape[0]))
        ok &= abs(est - 1.0) <= 4 * se
        rows.append(("mc_mass", n, 0.0, 1.0, abs(est - 1.0)))
        est, se = rule.integrate_with_error(lambda z: np.sum(np.abs(z) ** 2, axis=1))
        ok &= abs(est - n / (n + 1.0)) <= 4 * se
        rows.append(("mc_moment", n, 0.0, n / (n + 1.0), abs(est - n / (n + 1.0))))
    _write_csv(out, "quad-selftest", config, ["check", "n", "theta", "exact", "abs_error"], rows,
               [f"passed: {fmt(bool(ok))}"])
    if not ok:
        raise AccuracyError("quadrature self-test failed")


COMMANDS = {
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "asymptotic": cmd_asymptotic,
    "schur-verify": cmd_schur,
    "extremal": cmd_extremal,
    "project": cmd_project,
    "berezin": cmd_berezin,
    "quad-selftest": cmd_quad_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forelli-rudin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config entry")
        sp.add_argument("--output", "-o", help="write results here instead of stdout")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for radius sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        config = load_config(args)
        if args.threads < 1:
            raise ConfigError("threads", "must be at least 1")
        COMMANDS[args.command](config, buf, args.threads)
    except ForelliRudinError as exc:
        # partial output is still useful for a failed self-test
        if buf.getvalue() and isinstance(exc, AccuracyError):
            _emit(buf.getvalue(), args.output)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(buf.getvalue(), args.output)
    return 0


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
