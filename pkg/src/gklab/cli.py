"""Command-line front end: batch tables for complexity and asymptotics.

Configuration is a single JSON document; every emitted row echoes a short
hash of the resolved config so any table can be traced back to its inputs.
Output is CSV (default) or JSON, written to --out or stdout.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import backend
from .asymptotics import (
    boundedness_criterion,
    condition_report,
    lemma1_verify,
    normalization_plan,
)
from .distribution import (
    DEFAULT_BIN_WIDTH,
    build_measure,
    gd_value,
    log_complexity_estimate,
)
from .enumeration import DEFAULT_CAP, average_error, exact_complexity
from .errors import CapacityError, ConfigError, RangeError
from .limits import QuantileFn
from .spectrum import OmegaVector, SigmaSequence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path!r} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _sigma_spec(cfg: dict) -> SigmaSequence:
    raw = cfg.get("sigma")
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ConfigError("field 'sigma' must be an object with a 'kind'")
    kind = raw["kind"]
    try:
        if kind == "constant":
            return SigmaSequence.constant(float(raw["sigma"]))
        if kind == "power":
            return SigmaSequence.power(float(raw["alpha"]), float(raw["beta"]))
        if kind == "jlogj":
            return SigmaSequence.jlogj(float(raw["beta"]))
        if kind == "explicit":
            return SigmaSequence.explicit(raw["values"])
    except KeyError as e:
        raise ConfigError(f"field 'sigma' is missing key {e.args[0]!r} "
                          f"for kind {kind!r}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(f"field 'sigma' has a malformed value: {e}") from e
    raise ConfigError(f"field 'sigma.kind' has unknown value {kind!r}")


def _d_values(cfg: dict):
    ds = cfg.get("d")
    if not isinstance(ds, list) or not ds:
        raise ConfigError("field 'd' must be a non-empty list of positive integers")
    out = []
    for v in ds:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ConfigError(f"field 'd' contains invalid entry {v!r}")
        out.append(v)
    return out


def _epsilons(cfg: dict):
    es = cfg.get("epsilon")
    if not isinstance(es, list) or not es:
        raise ConfigError("field 'epsilon' must be a non-empty list of reals in (0, 1)")
    out = []
    for v in es:
        try:
            f = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"field 'epsilon' contains non-numeric entry {v!r}")
        if not 0.0 < f < 1.0:
            raise ConfigError(f"field 'epsilon' contains {f!r}, outside (0, 1)")
        out.append(f)
    return out


def _emit(rows, columns, fmt, out_path):
    if fmt == "json":
        text = json.dumps([dict(zip(columns, r)) for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow(["" if v is None else
                        (repr(v) if isinstance(v, float) else v) for v in r])
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _max_workers() -> int:
    raw = os.environ.get("GKLAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = min(8, os.cpu_count() or 1)
    return n


def _complexity_cell(spec, d, eps, mode, bin_width):
    """One (d, epsilon) row: (mode_used, n, ln_lo, ln_hi, err, note)."""
    omega = OmegaVector.from_spec(spec, d)
    note = ""
    if mode in ("exact", "auto"):
        try:
            res = exact_complexity(omega, eps)
            err = average_error(omega, res.n)
            return ("exact", res.n, None, None, err, note)
        except CapacityError:
            if mode == "exact":
                raise
            note = f"exact enumeration exceeded cap {DEFAULT_CAP}; fell back"
    measure = build_measure(omega, bin_width=bin_width)
    res = log_complexity_estimate(measure, eps)
    lo, hi = res.ln_n_bracket
    return ("convolution", None, lo, hi, None, note)


def cmd_complexity(cfg, fmt, out_path) -> int:
    spec = _sigma_spec(cfg)
    ds = _d_values(cfg)
    eps = _epsilons(cfg)
    mode = cfg.get("mode", "auto")
    if mode not in ("exact", "convolution", "auto"):
        raise ConfigError(f"field 'mode' must be exact|convolution|auto, got {mode!r}")
    bin_width = float(cfg.get("bin_width", DEFAULT_BIN_WIDTH))
    h = _config_hash(cfg)

    cells = [(d, e) for d in ds for e in eps]
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        futures = [pool.submit(_complexity_cell, spec, d, e, mode, bin_width)
                   for d, e in cells]
        results = []
        for fut in futures:  # config order, independent of completion order
            results.append(fut.result())

    rows = []
    for (d, e), (used, n, lo, hi, err, note) in zip(cells, results):
        rows.append((d, e, used, n, lo, hi, err, note, h))
    _emit(rows, ["d", "epsilon", "mode", "n", "ln_n_lo", "ln_n_hi",
                 "avg_error", "note", "config"], fmt, out_path)
    return EXIT_OK


def cmd_asymptotics(cfg, fmt, out_path) -> int:
    spec = _sigma_spec(cfg)
    ds = _d_values(cfg)
    eps = _epsilons(cfg)
    bin_width = float(cfg.get("bin_width", DEFAULT_BIN_WIDTH))
    tau_grid = cfg.get("tau", [0.25, 0.5, 1.0, 2.0])
    try:
        plan = normalization_plan(spec)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    h = _config_hash(cfg)

    rows = []
    for d in ds:
        a = plan.a_d(d)
        b = plan.b_d(d)
        omega = OmegaVector.from_spec(spec, d)
        for e in eps:
            try:
                res = exact_complexity(omega, e)
                ln_n = math.log(res.n)
            except CapacityError:
                measure = build_measure(omega, bin_width=bin_width)
                ln_n = log_complexity_estimate(measure, e).ln_n
            rows.append((d, e, ln_n, a, b, (ln_n - a) / b,
                         plan.law.q(e), h))
    _emit(rows, ["d", "epsilon", "ln_n", "a_d", "b_d", "normalized",
                 "q_eps", "config"], fmt, out_path)

    report = condition_report(spec, ds, tau_grid)
    cond_rows = [(r.d, r.tau, r.sum_A, r.target_A, r.sum_B, r.target_B,
                  r.sum_C, r.target_C, h) for r in report.rows]
    cond_path = None
    if out_path:
        root, ext = os.path.splitext(out_path)
        cond_path = f"{root}_conditions{ext or '.csv'}"
    _emit(cond_rows, ["d", "tau", "sumA", "targetA", "sumB", "targetB",
                      "sumC", "targetC", "config"], fmt, cond_path)
    return EXIT_OK


def cmd_gd(cfg, fmt, out_path) -> int:
    spec = _sigma_spec(cfg)
    ds = _d_values(cfg)
    bin_width = float(cfg.get("bin_width", DEFAULT_BIN_WIDTH))
    xs = [float(v) for v in cfg.get("x", [round(-3 + 0.25 * i, 4)
                                          for i in range(25)])]
    try:
        plan = normalization_plan(spec)
    except ValueError:
        plan = None
    h = _config_hash(cfg)
    rows = []
    for d in ds:
        omega = OmegaVector.from_spec(spec, d)
        measure = build_measure(omega, bin_width=bin_width)
        a = plan.a_d(d) if plan else 0.0
        b = plan.b_d(d) if plan else 1.0
        for x in xs:
            rows.append((d, x, gd_value(measure, a, b, x), a, b, h))
    _emit(rows, ["d", "x", "gd", "a_d", "b_d", "config"], fmt, out_path)
    return EXIT_OK


def cmd_limit(cfg, fmt, out_path) -> int:
    law_cfg = cfg.get("law", {"name": "normal"})
    if not isinstance(law_cfg, dict) or "name" not in law_cfg:
        raise ConfigError("field 'law' must be an object with a 'name'")
    name = law_cfg["name"]
    if name == "normal":
        law = QuantileFn.normal()
        default_x = [round(-4 + 0.1 * i, 4) for i in range(81)]
    elif name == "dickman":
        mu = float(law_cfg.get("mu", 1.0))
        if mu <= 0:
            raise ConfigError("field 'law.mu' must be positive")
        law = QuantileFn.dickman(mu)
        default_x = [round(0.1 * i, 4) for i in range(101)]
    else:
        raise ConfigError(f"field 'law.name' has unknown value {name!r}")
    xs = [float(v) for v in cfg.get("x", default_x)]
    h = _config_hash(cfg)
    rows = [(x, law.cdf(x), h) for x in xs]
    _emit(rows, ["x", "F", "config"], fmt, out_path)
    return EXIT_OK


def cmd_lemma1(cfg, fmt, out_path) -> int:
    spec = _sigma_spec(cfg)
    ds = _d_values(cfg)
    xs = [float(v) for v in cfg.get("x", [0.1, 0.5, 1.0, 2.0, 5.0])]
    h = _config_hash(cfg)
    rows = []
    for d in ds:
        omega = OmegaVector.from_spec(spec, d)
        for x in xs:
            r0, r1, r2 = lemma1_verify(omega, x)
            rows.append((d, x, r0, r1, r2, h))
    _emit(rows, ["d", "x", "residual0", "residual1", "residual2", "config"],
          fmt, out_path)
    return EXIT_OK


def cmd_verify(cfg, fmt, out_path) -> int:
    from .verify import run_all

    seed = int(cfg.get("seed", 20260823))
    results = run_all(seed)
    h = _config_hash(cfg)
    rows = [(r.name, "pass" if r.passed else "FAIL", r.detail, h)
            for r in results]
    _emit(rows, ["suite", "status", "detail", "config"], fmt, out_path)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_bounded(cfg, fmt, out_path) -> int:
    spec = _sigma_spec(cfg)
    v = boundedness_criterion(spec)
    h = _config_hash(cfg)
    _emit([(v.verdict, v.reason, v.partial_sum_omega,
            v.partial_sum_inv_sigma_sq, h)],
          ["verdict", "reason", "sum_omega", "sum_inv_sigma_sq", "config"],
          fmt, out_path)
    return EXIT_OK


_COMMANDS = {
    "complexity": cmd_complexity,
    "asymptotics": cmd_asymptotics,
    "gd": cmd_gd,
    "limit": cmd_limit,
    "verify": cmd_verify,
    "lemma1": cmd_lemma1,
    "bounded": cmd_bounded,
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gklab",
        description="Average-case complexity of tensor-product "
                    "Gaussian-kernel random fields.",
    )
    p.add_argument("command", choices=sorted(_COMMANDS))
    p.add_argument("--config", help="path to a JSON config document")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--bin-width", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tau-grid", default=None,
                   help="comma-separated tau values for asymptotics")
    p.add_argument("--backend-info", action="store_true",
                   help="print the selected kernel backend and exit")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.backend_info:
        print(backend.BACKEND)
        return EXIT_OK
    try:
        cfg = _load_config(args.config) if args.config else {}
        # flags override the config document
        if args.bin_width is not None:
            if args.bin_width <= 0:
                raise ConfigError("--bin-width must be positive")
            cfg["bin_width"] = args.bin_width
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.tau_grid is not None:
            try:
                cfg["tau"] = [float(v) for v in args.tau_grid.split(",") if v]
            except ValueError:
                raise ConfigError("--tau-grid must be comma-separated reals")
        fmt = args.format or cfg.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"field 'format' must be csv|json, got {fmt!r}")
        out_path = args.out or cfg.get("out")
        if args.command == "verify" and "seed" not in cfg:
            cfg["seed"] = 20260823
        if args.command in ("complexity", "asymptotics", "gd", "lemma1",
                            "bounded") and not args.config:
            raise ConfigError(f"{args.command} requires --config")
        return _COMMANDS[args.command](cfg, fmt, out_path)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except RangeError as e:
        print(f"range error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
