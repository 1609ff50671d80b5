"""Command-line interface: ``bosonic-dpc {rate,sweep,optimize,simulate,oracle}``.

Exit codes: 0 success, 2 bad arguments or config, 3 domain error,
4 search budget exceeded. Errors are reported on stderr as a JSON object
with an ``error`` field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Any, Callable

from . import rates
from .channels import (
    AmplifierChannelParams,
    ClassicalDpcInstance,
    LossyChannelParams,
    SignalParams,
)
from .errors import BudgetExceededError, DomainError, DpcError
from .gp_oracle import DEFAULT_BUDGET, DiscreteGpInstance, gp_capacity_bruteforce
from .mcsim import McConfig, ModuloDemoConfig, estimate_costa_rate, modulo_dpc_demo
from .optimizer import DEFAULT_TOL, maximize_over_t, sweep_t

OUTPUT_DIR_ENV = "BOSONIC_DPC_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3, 4

# Parameter schema shared by flags (dashes) and config files (underscores).
# Defaults reproduce the pure-loss example eta=1/2, N_A=N_S=2.
PARAM_DEFAULTS: dict[str, float | None] = {
    "eta": 0.5,
    "n_e": 0.0,
    "kappa": 2.0,
    "n_a": 2.0,
    "n_s": 2.0,
    "p": 1.0,
    "q": 1.0,
    "n": 0.25,
    "t": None,
}

KIND_FIELDS = {
    "hom": ("eta", "n_e", "n_a", "n_s"),
    "het": ("eta", "n_e", "n_a", "n_s"),
    "joint": ("eta", "n_e", "n_a", "n_s"),
    "amp": ("kappa", "n_e", "n_a", "n_s"),
    "costa": ("p", "q", "n"),
}

# Output keys holding information quantities (converted by --nats).
_RATE_KEYS = {
    "rate", "rate_star", "max_rate", "estimate", "std_error", "mi_uy", "mi_us",
    "mi_us_std_error", "closed_form", "best_rate",
}


class UsageError(Exception):
    pass


def _lossy(p):
    return LossyChannelParams(p["eta"], p["n_e"]), SignalParams(p["n_a"], p["n_s"])


def rate_function(kind: str, params: dict[str, float]) -> Callable[[float], float]:
    """The rate-versus-t curve for a kind; hom/het use the Costa functional of their reduction."""
    if kind == "hom":
        ch, sig = _lossy(params)
        return lambda t: rates.homodyne_dpc_rate(ch, sig, t)
    if kind == "het":
        ch, sig = _lossy(params)
        return lambda t: rates.heterodyne_dpc_rate(ch, sig, t)
    if kind == "joint":
        ch, sig = _lossy(params)
        return lambda t: rates.joint_dpc_rate(ch, sig, t)
    if kind == "amp":
        ch = AmplifierChannelParams(params["kappa"], params["n_e"])
        sig = SignalParams(params["n_a"], params["n_s"])
        return lambda t: rates.amplifier_dpc_rate(ch, sig, t)
    if kind == "costa":
        inst = ClassicalDpcInstance(params["p"], params["q"], params["n"])
        return lambda t: rates.costa_rate(inst, t)
    raise UsageError(f"unknown kind {kind!r}")


def compute_rate(kind: str, params: dict[str, float], t: float | None) -> float:
    """Scalar rate; for hom/het without ``t`` this is the channel capacity."""
    if kind in ("hom", "het") and t is None:
        ch, sig = _lossy(params)
        if kind == "hom":
            return rates.homodyne_capacity(ch, sig)
        return rates.heterodyne_capacity(ch, sig)
    if t is None:
        raise UsageError(f"rate {kind} needs --t")
    return rate_function(kind, params)(t)


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None


def resolve_params(args: argparse.Namespace) -> dict[str, float | None]:
    """Defaults, then ``--config`` values, then explicit flags."""
    params = dict(PARAM_DEFAULTS)
    if getattr(args, "config", None):
        data = _load_json(args.config)
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(data) - set(PARAM_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config field(s): {sorted(unknown)}")
        params.update(data)
    for name in PARAM_DEFAULTS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    return params


def _kind_params(kind, params):
    return {name: params[name] for name in KIND_FIELDS[kind]}


def _convert(record: dict, nats: bool, clamp: bool = False) -> dict:
    out = {}
    for key, value in record.items():
        if key in _RATE_KEYS and isinstance(value, float):
            if clamp and key in ("rate", "rate_star", "max_rate"):
                value = max(value, 0.0)
            if nats:
                value *= math.log(2.0)
        out[key] = value
    out["units"] = "nats" if nats else "bits"
    return out


def _fmt(value: float) -> str:
    return f"{value:#.12g}"


def _csv_text(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(
            [_fmt(v) if isinstance(v, float) else
             json.dumps(v) if isinstance(v, (dict, list)) else v for v in row]
        )
    return buf.getvalue()


def _record_text(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record) + "\n"
    return _csv_text([list(record), list(record.values())])


def _output_path(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return path


def write_output(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to ``path`` via a temp file and rename."""
    path = _output_path(path)
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_rate(args) -> str:
    params = resolve_params(args)
    t = params["t"]
    value = compute_rate(args.kind, params, t)
    record = {"kind": args.kind, **_kind_params(args.kind, params)}
    if t is not None:
        record["t"] = float(t)
    record["rate"] = value
    return _record_text(_convert(record, args.nats, args.clamp), args.format)


def cmd_sweep(args) -> str:
    params = resolve_params(args)
    result = sweep_t(rate_function(args.kind, params), args.t_min, args.t_max, args.steps)
    scale = math.log(2.0) if args.nats else 1.0

    def show(r):
        return (max(r, 0.0) if args.clamp else r) * scale

    if args.format == "json":
        record = {"kind": args.kind, **_kind_params(args.kind, params)}
        record.update(result.to_dict())
        record["points"] = [{"t": pt.t, "rate": show(pt.rate)} for pt in result.points]
        record["max_rate"] = show(result.max_rate)
        record["units"] = "nats" if args.nats else "bits"
        return json.dumps(record) + "\n"
    header = ["t", "rate_nats" if args.nats else "rate_bits"]
    rows = [header] + [[pt.t, show(pt.rate)] for pt in result.points]
    rows.append(["argmax", result.argmax_t, show(result.max_rate)])
    return _csv_text(rows)


def cmd_optimize(args) -> str:
    params = resolve_params(args)
    t_star, r_star = maximize_over_t(
        rate_function(args.kind, params), args.t_min, args.t_max, args.tol
    )
    record = {"kind": args.kind, **_kind_params(args.kind, params),
              "t_min": args.t_min, "t_max": args.t_max,
              "t_star": t_star, "rate_star": r_star}
    return _record_text(_convert(record, args.nats, args.clamp), args.format)


def cmd_simulate(args) -> str:
    data = _load_json(args.config)
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    try:
        if args.mode == "costa-mi":
            cfg = McConfig.from_dict(data)
        else:
            cfg = ModuloDemoConfig.from_dict(data)
    except (TypeError, DomainError) as exc:
        raise UsageError(f"invalid {args.mode} config: {exc}") from None
    if args.mode == "costa-mi":
        record = {"mode": args.mode, **estimate_costa_rate(cfg).to_dict()}
    else:
        ser_with, ser_without = modulo_dpc_demo(cfg)
        record = {"mode": args.mode, "ser_with_interference": ser_with,
                  "ser_without": ser_without, **cfg.to_dict()}
    return _record_text(_convert(record, args.nats), args.format)


def cmd_oracle(args) -> str:
    data = _load_json(args.instance)
    if not isinstance(data, dict):
        raise UsageError("instance must be a JSON object")
    try:
        inst = DiscreteGpInstance.from_dict(data, u_size=args.u_size)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid instance: {exc}") from None
    best_rate, strat = gp_capacity_bruteforce(inst, args.grid_levels, args.budget)
    record = {"u_size": inst.u_size, "grid_levels": args.grid_levels,
              "best_rate": best_rate, "lower_bound": True, **strat.to_dict()}
    return _record_text(_convert(record, args.nats), args.format)


def _add_common(p, default_format="json"):
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--output", "-o", help=f"output file (relative paths resolve under ${OUTPUT_DIR_ENV})")
    p.add_argument("--nats", action="store_true", help="report information in nats")


def _add_params(p):
    p.add_argument("kind", choices=sorted(KIND_FIELDS))
    p.add_argument("--config", help="JSON file with parameter fields")
    for name in PARAM_DEFAULTS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float,
                       default=None, help=f"default: {PARAM_DEFAULTS[name]}")
    p.add_argument("--clamp", action="store_true", help="report negative rates as 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosonic-dpc",
        description="Dirty-paper coding rates for bosonic and Gaussian channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="evaluate one rate")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep", help="rate on a uniform t-grid plus argmax")
    _add_params(p)
    p.add_argument("--t-min", type=float, default=rates.T_DOMAIN[0])
    p.add_argument("--t-max", type=float, default=rates.T_DOMAIN[1])
    p.add_argument("--steps", type=int, default=1001)
    _add_common(p, default_format="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximize a rate over t")
    _add_params(p)
    p.add_argument("--t-min", type=float, default=rates.T_DOMAIN[0])
    p.add_argument("--t-max", type=float, default=rates.T_DOMAIN[1])
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="run a seeded Monte Carlo simulation")
    p.add_argument("mode", choices=("costa-mi", "modulo-demo"))
    p.add_argument("config", help="JSON config file")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="brute-force Gelfand-Pinsker lower bound")
    p.add_argument("instance", help="JSON instance {s_dist, channel, u_size}")
    p.add_argument("--u-size", type=int, default=None)
    p.add_argument("--grid-levels", type=int, default=32)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__,
                                 "exit_code": code}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        write_output(text, args.output)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, exc)
    except (DpcError, ValueError) as exc:
        return _fail(EXIT_DOMAIN, exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
