"""Command-line front end: run sweeps to CSV, validate scenario files.

`run` evaluates every requested (metric, variant) curve over the sweep
grid by both routes and writes one CSV per metric plus a JSON manifest
that pins everything needed to reproduce the numbers. `validate` checks
a scenario without writing anything.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from . import __version__, analytic, metrics as metrics_mod
from .config import (
    METRICS,
    RunSpec,
    config_hash,
    load_config,
    metric_needs_mc,
    parse_config,
)
from .errors import ArisNomaError, ConfigError, DivergenceError
from .metrics import match_power_budget
from .montecarlo import apply_axis, mc_ergodic_rate, mc_outage
from .system import derive_targets, feasibility, watts_to_dbm

CSV_HEADER = "axis_value,analytic_value,mc_value,mc_std_error,variant"


def list_presets():
    root = resources.files("arisnoma") / "presets"
    return sorted(p.name[: -len(".cfg")] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_preset(name: str) -> RunSpec:
    path = resources.files("arisnoma") / "presets" / f"{name}.cfg"
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    return parse_config(path.read_text(encoding="utf-8"))


def _split_variant(variant: str):
    ris, _, sic = variant.partition("_")
    return ris, sic


def _variants_for_metric(metric: str, variants):
    # Far/orthogonal users carry no cancellation stage: collapse to the
    # surface mode so a curve is not emitted twice.
    if metric in ("outage_g", "rate_g", "throughput_dl", "throughput_dt", "ee_dl", "ee_dt"):
        return list(variants)
    seen, out = set(), []
    for v in variants:
        ris, _ = _split_variant(v)
        if ris not in seen:
            seen.add(ris)
            out.append(ris + "_psic")
    return out


def _point_config(spec: RunSpec, value: float, ris: str):
    cfg = apply_axis(spec.cfg, spec.sweep_axis, value)
    if spec.budget_match:
        p_aris, p_pris = match_power_budget(cfg.p_b_w, spec.power, cfg)
        cfg = cfg.replace(p_b_w=p_aris if ris == "aris" else p_pris)
    return cfg


def _analytic_metric(cfg, metric: str, ris: str, sic: str, pm) -> float:
    if metric.startswith("outage_"):
        return analytic.outage(cfg, metric[-1], ris, sic)
    if metric.startswith("rate_"):
        return analytic.ergodic_rate(cfg, metric[-1], ris, sic)
    if metric == "throughput_dl":
        return metrics_mod.throughput_delay_limited(cfg, ris, sic).value
    if metric == "throughput_dt":
        return metrics_mod.throughput_delay_tolerant(cfg, ris, sic).value
    if metric == "throughput_dl_oma":
        return metrics_mod.throughput_delay_limited_oma(cfg, ris).value
    if metric == "ee_dl":
        return metrics_mod.energy_efficiency(cfg, pm, metrics_mod.DELAY_LIMITED, ris, sic)
    if metric == "ee_dt":
        return metrics_mod.energy_efficiency(cfg, pm, metrics_mod.DELAY_TOLERANT, ris, sic)
    raise ConfigError(f"unknown metric {metric!r}")


def _mc_metric(cfg, metric: str, ris: str, sic: str, trials: int, seed: int):
    user = metric[-1]
    if metric.startswith("outage_"):
        return mc_outage(cfg, user, ris, sic, trials, seed)
    return mc_ergodic_rate(cfg, user, ris, sic, trials, seed)


@dataclass
class RunManifest:
    scenario: str
    config_sha256: str
    seed: int
    trials: int
    quad_u: int
    quad_n: int
    version: str
    timestamp: str
    files: list
    notes: dict

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def run_scenario(
    spec: RunSpec,
    out_dir: str,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    analytic_only: bool = False,
    mc_only: bool = False,
) -> RunManifest:
    """Evaluate every requested curve and emit CSVs plus a manifest."""
    if not spec.sweep_grid:
        raise ConfigError("sweep_grid is empty: nothing to run")
    if list(spec.sweep_grid) != sorted(spec.sweep_grid):
        raise ConfigError("sweep_grid must be increasing")
    trials = spec.trials if trials is None else trials
    seed = spec.seed if seed is None else seed
    os.makedirs(out_dir, exist_ok=True)

    workers = int(os.environ.get("ARISNOMA_WORKERS", "1"))
    mc_jobs = {}
    if not analytic_only:
        jobs = []
        for metric in spec.metrics:
            if not metric_needs_mc(metric):
                continue
            for variant in _variants_for_metric(metric, spec.variants):
                ris, sic = _split_variant(variant)
                for idx, value in enumerate(spec.sweep_grid):
                    cfg_i = _point_config(spec, value, ris)
                    point_seed = (int(seed) << 20) ^ (idx + 1)
                    jobs.append(((metric, variant, idx), (cfg_i, metric, ris, sic, trials, point_seed)))
        if workers > 1 and len(jobs) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                for (key, _), est in zip(jobs, pool.map(_mc_job, [j[1] for j in jobs])):
                    mc_jobs[key] = est
        else:
            for key, args in jobs:
                mc_jobs[key] = _mc_job(args)

    files = []
    notes = {"budget_match": spec.budget_match, "guard_form": spec.cfg.guard_form}
    for metric in spec.metrics:
        rows = []
        for idx, value in enumerate(spec.sweep_grid):
            for variant in _variants_for_metric(metric, spec.variants):
                ris, sic = _split_variant(variant)
                cfg_i = _point_config(spec, value, ris)
                ana = None
                if not mc_only:
                    ana = _analytic_metric(cfg_i, metric, ris, sic, spec.power)
                est = mc_jobs.get((metric, variant, idx))
                rows.append(
                    f"{_fmt(value)},{_fmt(ana)},"
                    f"{_fmt(est.value if est else None)},{_fmt(est.std_error if est else None)},{variant}"
                )
        path = os.path.join(out_dir, f"{metric}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            fh.write("\n".join(rows) + "\n")
        files.append(os.path.basename(path))

    manifest = RunManifest(
        scenario=spec.name,
        config_sha256=config_hash(spec),
        seed=seed,
        trials=trials,
        quad_u=spec.cfg.quad_u,
        quad_n=spec.cfg.quad_n,
        version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        files=files,
        notes=notes,
    )
    with open(os.path.join(out_dir, "run_manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(manifest.to_json() + "\n")
    return manifest


def _mc_job(args):
    cfg, metric, ris, sic, trials, point_seed = args
    return _mc_metric(cfg, metric, ris, sic, trials, point_seed)


def validate_report(spec: RunSpec) -> str:
    """Human-readable feasibility and derived-constant report."""
    cfg = spec.cfg
    lines = [f"scenario: {spec.name}", f"config sha256: {config_hash(spec)}"]
    gth_g, gth_f = derive_targets(cfg)
    lines.append(f"targets: gamma_th_g={gth_g:.6g} gamma_th_f={gth_f:.6g} gamma_th_o={cfg.gamma_th_o:.6g}")
    guards = feasibility(cfg)
    for name, ok in guards.items():
        lines.append(f"guard {name}: {'feasible' if ok else 'INFEASIBLE (outage pinned to 1)'}")
    for user in ("g", "f", "o"):
        ctx = analytic.closed_form_context(cfg, user)
        lines.append(
            f"user {user}: gamma_th={ctx.gamma_th:.6g} chi={ctx.chi:.6g} "
            f"shape={ctx.stats.shape:.6g} scale={ctx.stats.c:.6g} "
            f"varsigma={'-' if ctx.varsigma is None else format(ctx.varsigma, '.6g')}"
        )
        try:
            analytic.outage_asymptotic(cfg, user, "aris", "psic")
            lines.append(f"user {user}: high-power asymptote available")
        except DivergenceError as exc:
            lines.append(f"user {user}: asymptote unavailable ({exc})")
    lines.append(f"transmit power: {watts_to_dbm(cfg.p_b_w):.3f} dBm, surface elements: {cfg.L}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="arisnoma", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write CSV curves")
    p_run.add_argument("config", nargs="?", help="path to a key=value scenario file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per point")
    p_run.add_argument("--seed", type=int, default=None, help="base random seed")
    p_run.add_argument("--preset", default=None, help=f"bundled scenario ({', '.join(list_presets())})")
    group = p_run.add_mutually_exclusive_group()
    group.add_argument("--analytic-only", action="store_true", help="skip the Monte Carlo route")
    group.add_argument("--mc-only", action="store_true", help="skip the closed-form route")

    p_val = sub.add_parser("validate", help="check a scenario file and print derived constants")
    p_val.add_argument("config", nargs="?", help="path to a key=value scenario file")
    p_val.add_argument("--preset", default=None, help="bundled scenario name")

    args = parser.parse_args(argv)
    try:
        if args.preset is not None:
            spec = load_preset(args.preset)
        elif args.config is not None:
            spec = load_config(args.config)
        else:
            parser.error("either a config path or --preset is required")
        if args.command == "validate":
            print(validate_report(spec))
            return 0
        manifest = run_scenario(
            spec,
            args.out,
            trials=args.trials,
            seed=args.seed,
            analytic_only=args.analytic_only,
            mc_only=args.mc_only,
        )
        print(f"wrote {len(manifest.files)} curve file(s) to {args.out}")
        return 0
    except ArisNomaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
