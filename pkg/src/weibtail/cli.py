"""Deterministic CSV/JSON command-line front end.

Commands: models, norming, penultimate, errors, vonmises, report.
Identical configurations produce byte-identical output: no timestamps,
fixed column orders, version metadata isolated in the JSON meta header.
Exit codes: 0 success, 2 usage error, 3 numeric failure (JSON error
object with the machine-readable code on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from . import penultimate as pen_mod
from . import vonmises as vm_mod
from .catalog import CATALOG, build_model
from .errors import WeibtailError
from .model import WeibullTypeModel
from .norming import NORMING_CONVENTION
from .norming import norming as compute_norming

CSV_HEADERS = {
    "models": ["name", "family", "parameters", "theta_reference", "theta_is_one"],
    "norming": ["log_n", "b_exact", "b_asymptotic", "a_scale"],
    "penultimate": [
        "log_n", "gamma_exact", "gamma_asymptotic", "classification",
        "rate_ultimate", "rate_penultimate", "gamma_prime_exact",
    ],
    "errors": [
        "log_n", "gamma_used", "sup_error_ultimate", "sup_error_penultimate",
        "argmax_ultimate", "argmax_penultimate", "remainder_max_deviation", "n_clipped",
    ],
    "vonmises": [
        "row_type", "t", "first_order", "second_order", "penultimate_cond",
        "anderson", "gomes84",
    ],
}

TOLERANCES = {
    "root_rel_tol": 1e-14,
    "verdict_abs": vm_mod.VERDICT_ABS,
    "verdict_shrink": vm_mod.VERDICT_SHRINK,
    "limit_agreement": vm_mod.LIMIT_AGREEMENT,
    "failure_fraction": vm_mod.FAILURE_FRACTION,
    "remainder_denominator_cutoff": pen_mod.REMAINDER_DENOMINATOR_CUTOFF,
}

MODEL_PARAM_FLAGS = ("theta", "alpha", "beta", "delta", "shape", "scale")

DEFAULT_LOG_N = (10.0, 20.0, 40.0)
DEFAULT_T_GRID = (1e2, 1e4, 1e6, 1e8, 1e10)


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation: model address plus evaluation layout."""

    model_name: str
    model_params: Dict[str, float] = field(default_factory=dict)
    log_n_list: Tuple[float, ...] = DEFAULT_LOG_N
    grid: Tuple[float, float, int] = pen_mod.DEFAULT_GRID
    t_grid: Tuple[float, ...] = DEFAULT_T_GRID
    output_format: str = "csv"
    output_path: Optional[str] = None
    gamma_mode: str = "exact"

    def build_model(self) -> WeibullTypeModel:
        return build_model(self.model_name, **self.model_params)


def _fmt(value) -> str:
    """CSV cell: floats at 17 significant digits (round-trip safe)."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _jsonable(value):
    """Floats only when finite; NaN/inf become null (strict JSON)."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _parse_float_list(text: str, flag: str) -> List[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag}: expected comma-separated reals, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError(f"{flag}: empty list")
    return values


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"--grid expects lo:hi:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"--grid expects lo:hi:count, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weibtail",
        description="Penultimate extreme-value approximation for Weibull-type tails.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_log_n=True, with_grid=False, with_t_grid=False):
        p.add_argument("--model", required=True, choices=sorted(CATALOG))
        for flag in MODEL_PARAM_FLAGS:
            p.add_argument(f"--{flag}", type=float, default=None)
        if with_log_n:
            group = p.add_mutually_exclusive_group()
            group.add_argument("--log-n", type=str, default=None,
                               help="comma list of log n values (positive reals)")
            group.add_argument("--n", type=str, default=None,
                               help="comma list of integer block sizes, converted to log n")
        if with_grid:
            p.add_argument("--grid", type=_parse_grid, default=pen_mod.DEFAULT_GRID,
                           help="lo:hi:count evaluation window (default -3:6:1000)")
        if with_t_grid:
            p.add_argument("--t-grid", type=str, default=None,
                           help="comma list of diverging t values (default 1e2..1e10)")
        p.add_argument("--gamma-mode", choices=("exact", "asymptotic"), default="exact")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")

    p_models = sub.add_parser("models", help="list the built-in model catalog")
    p_models.add_argument("--format", choices=("csv", "json"), default="csv")
    p_models.add_argument("--out", type=str, default=None)
    p_models.set_defaults(func=cmd_models)

    p_norm = sub.add_parser("norming", help="norming constants per block size")
    add_common(p_norm)
    p_norm.set_defaults(func=cmd_norming)

    p_pen = sub.add_parser("penultimate", help="penultimate tail index per block size")
    add_common(p_pen)
    p_pen.set_defaults(func=cmd_penultimate)

    p_err = sub.add_parser("errors", help="ultimate vs penultimate sup errors")
    add_common(p_err, with_grid=True)
    p_err.set_defaults(func=cmd_errors)

    p_vm = sub.add_parser("vonmises", help="condition sweep along a diverging grid")
    add_common(p_vm, with_log_n=False, with_t_grid=True)
    p_vm.set_defaults(func=cmd_vonmises)

    p_rep = sub.add_parser("report", help="combined JSON report (all sections)")
    add_common(p_rep, with_grid=True, with_t_grid=True)
    p_rep.set_defaults(func=cmd_report)

    return parser


def _run_config(args, parser: argparse.ArgumentParser) -> RunConfig:
    params = {
        flag: getattr(args, flag)
        for flag in MODEL_PARAM_FLAGS
        if getattr(args, flag, None) is not None
    }
    log_n_list = DEFAULT_LOG_N
    if getattr(args, "n", None) is not None:
        raw = _parse_float_list(args.n, "--n")
        bad = [v for v in raw if v < 2 or v != int(v)]
        if bad:
            parser.error(f"--n expects integers >= 2, got {bad}")
        log_n_list = tuple(math.log(v) for v in raw)
    elif getattr(args, "log_n", None) is not None:
        log_n_list = tuple(_parse_float_list(args.log_n, "--log-n"))
    t_grid = DEFAULT_T_GRID
    if getattr(args, "t_grid", None) is not None:
        t_grid = tuple(_parse_float_list(args.t_grid, "--t-grid"))
    return RunConfig(
        model_name=args.model,
        model_params=params,
        log_n_list=log_n_list,
        grid=tuple(getattr(args, "grid", pen_mod.DEFAULT_GRID)),
        t_grid=t_grid,
        output_format=args.format,
        output_path=args.out,
        gamma_mode=getattr(args, "gamma_mode", "exact"),
    )


def _resolve(args, parser: argparse.ArgumentParser) -> Tuple[RunConfig, WeibullTypeModel]:
    cfg = _run_config(args, parser)
    try:
        return cfg, cfg.build_model()
    except (KeyError, ValueError) as exc:
        parser.error(str(exc))


def _emit(cfg_path: Optional[str], text: str) -> None:
    if cfg_path:
        with open(cfg_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_csv(command: str, rows: List[Dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = CSV_HEADERS[command]
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in header])
    return buf.getvalue()


def _meta(command: str, model_meta: Optional[Dict]) -> Dict:
    meta = {
        "tool": "weibtail",
        "version": __version__,
        "command": command,
        "norming_convention": NORMING_CONVENTION,
        "tolerances": TOLERANCES,
    }
    if model_meta:
        meta["model"] = model_meta
    return meta


def _render_json(command: str, model_meta: Optional[Dict], rows) -> str:
    doc = {"meta": _meta(command, model_meta), "rows": rows}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _model_meta(cfg: RunConfig, model: WeibullTypeModel) -> Dict:
    return {
        "name": cfg.model_name,
        "label": model.label,
        "family": model.family.value,
        "theta": model.theta,
        "parameters": dict(cfg.model_params),
        "gamma_mode": cfg.gamma_mode,
    }


def cmd_models(args, parser=None) -> int:
    rows = [
        {
            "name": entry.name,
            "family": entry.family,
            "parameters": ",".join(entry.params) if entry.params else "-",
            "theta_reference": entry.theta_reference,
            "theta_is_one": entry.theta_is_one,
        }
        for _, entry in sorted(CATALOG.items())
    ]
    if args.format == "json":
        _emit(args.out, _render_json("models", None, rows))
    else:
        _emit(args.out, _render_csv("models", rows))
    return 0


def _norming_rows(model: WeibullTypeModel, cfg: RunConfig) -> List[Dict]:
    rows = []
    for ln in cfg.log_n_list:
        nc = compute_norming(model, ln)
        rows.append({
            "log_n": nc.log_n,
            "b_exact": nc.b_exact,
            "b_asymptotic": nc.b_asymptotic,
            "a_scale": nc.a_scale,
        })
    return rows


def cmd_norming(args, parser=None) -> int:
    cfg, model = _resolve(args, parser)
    rows = _norming_rows(model, cfg)
    if cfg.output_format == "json":
        _emit(cfg.output_path, _render_json("norming", _model_meta(cfg, model), rows))
    else:
        _emit(cfg.output_path, _render_csv("norming", rows))
    return 0


def _penultimate_rows(model: WeibullTypeModel, cfg: RunConfig):
    flat, nested = [], []
    for ln in cfg.log_n_list:
        idx = pen_mod.penultimate_index(model, ln)
        flat.append({
            "log_n": idx.log_n,
            "gamma_exact": idx.gamma_exact,
            "gamma_asymptotic": idx.gamma_asymptotic,
            "classification": idx.classification.value,
            "rate_ultimate": idx.rate_ultimate,
            "rate_penultimate": idx.rate_penultimate,
            "gamma_prime_exact": idx.gamma_prime_exact,
        })
        entry = {
            "log_n": idx.log_n,
            "gamma_exact": idx.gamma_exact,
            "classification": idx.classification.value,
            "gamma_prime_exact": idx.gamma_prime_exact,
        }
        if idx.error:
            entry["asymptotic"] = {"error": idx.error}
        else:
            entry["asymptotic"] = {
                "gamma": idx.gamma_asymptotic,
                "rate_ultimate": idx.rate_ultimate,
                "rate_penultimate": idx.rate_penultimate,
            }
        nested.append(entry)
    return flat, nested


def cmd_penultimate(args, parser=None) -> int:
    cfg, model = _resolve(args, parser)
    flat, nested = _penultimate_rows(model, cfg)
    if cfg.output_format == "json":
        _emit(cfg.output_path, _render_json("penultimate", _model_meta(cfg, model), nested))
    else:
        _emit(cfg.output_path, _render_csv("penultimate", flat))
    return 0


def _error_rows(model: WeibullTypeModel, cfg: RunConfig) -> List[Dict]:
    rows = []
    for ln in cfg.log_n_list:
        cmp_ = pen_mod.error_comparison(model, ln, cfg.grid, gamma_mode=cfg.gamma_mode)
        rows.append({
            "log_n": cmp_.log_n,
            "gamma_used": cmp_.gamma_used,
            "sup_error_ultimate": cmp_.sup_error_ultimate,
            "sup_error_penultimate": cmp_.sup_error_penultimate,
            "argmax_ultimate": cmp_.argmax_ultimate,
            "argmax_penultimate": cmp_.argmax_penultimate,
            "remainder_max_deviation": cmp_.remainder_max_deviation,
            "n_clipped": cmp_.n_clipped,
        })
    return rows


def cmd_errors(args, parser=None) -> int:
    cfg, model = _resolve(args, parser)
    rows = _error_rows(model, cfg)
    if cfg.output_format == "json":
        _emit(cfg.output_path, _render_json("errors", _model_meta(cfg, model), rows))
    else:
        _emit(cfg.output_path, _render_csv("errors", rows))
    return 0


def _vonmises_payload(model: WeibullTypeModel, t_grid: Sequence[float]):
    report = vm_mod.condition_sweep(model, t_grid)
    point_rows = []
    for i, t in enumerate(report.t_grid):
        point_rows.append({
            "row_type": "point",
            "t": t,
            "first_order": report.first_order[i],
            "second_order": report.second_order[i],
            "penultimate_cond": report.penultimate_cond[i],
            "anderson": report.anderson[i],
            "gomes84": report.gomes84[i],
        })
    verdict_row = {"row_type": "verdict", "t": None}
    for name in vm_mod.CONDITIONS:
        v = report.verdicts[name]
        text = v.kind
        if v.value is not None:
            text += f":{format(v.value, '.17g')}"
        if v.reason:
            text += f":{v.reason}"
        verdict_row[name] = text
    json_payload = {
        "t_grid": list(report.t_grid),
        "derivative_path": report.derivative_path,
        "sequences": {
            name: [_jsonable(v) for v in getattr(report, name)] for name in vm_mod.CONDITIONS
        },
        "verdicts": {
            name: {
                "kind": report.verdicts[name].kind,
                "value": _jsonable(report.verdicts[name].value),
                "reason": report.verdicts[name].reason,
            }
            for name in vm_mod.CONDITIONS
        },
        "gomes84_theoretical": _jsonable(report.gomes84_theoretical),
        "gomes84_relative_gap": _jsonable(report.gomes84_relative_gap),
    }
    return point_rows + [verdict_row], json_payload


def cmd_vonmises(args, parser=None) -> int:
    cfg, model = _resolve(args, parser)
    csv_rows, json_payload = _vonmises_payload(model, cfg.t_grid)
    if cfg.output_format == "json":
        _emit(cfg.output_path, _render_json("vonmises", _model_meta(cfg, model), json_payload))
    else:
        _emit(cfg.output_path, _render_csv("vonmises", csv_rows))
    return 0


def cmd_report(args, parser=None) -> int:
    cfg, model = _resolve(args, parser)
    norming_rows = _norming_rows(model, cfg)
    _, pen_rows = _penultimate_rows(model, cfg)
    error_rows = _error_rows(model, cfg)
    for row in error_rows:
        # informational only: penultimate residual against the stated rate
        rate = None
        for prow in pen_rows:
            if prow["log_n"] == row["log_n"]:
                rate = prow["gamma_prime_exact"]
        row["penultimate_residual_ratio"] = (
            row["sup_error_penultimate"] / abs(rate) if rate else None
        )
    _, vm_payload = _vonmises_payload(model, cfg.t_grid)

    doc = {
        "meta": {
            **_meta("report", _model_meta(cfg, model)),
            "log_n": list(cfg.log_n_list),
            "grid": {"lo": cfg.grid[0], "hi": cfg.grid[1], "count": cfg.grid[2]},
            "t_grid": list(cfg.t_grid),
        },
        "norming": norming_rows,
        "penultimate": pen_rows,
        "errors": error_rows,
        "vonmises": vm_payload,
    }
    _emit(cfg.output_path, json.dumps(doc, indent=2, allow_nan=False) + "\n")
    return 0


def _join_grid_flag(argv: Sequence[str]) -> List[str]:
    # argparse treats "-3:6:1000" as an option token; fold the grid value
    # into --grid=... so windows with negative lower edges parse
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"--grid={val}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_join_grid_flag(argv))
    try:
        return args.func(args, parser)
    except WeibtailError as exc:
        payload = {"error": {"code": exc.code, "message": exc.message}}
        sys.stderr.write(json.dumps(payload) + "\n")
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
