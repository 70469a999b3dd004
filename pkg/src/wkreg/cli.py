"""Command-line surface.

Subcommands: ``fit-predict``, ``fig1``, ``fig2``, ``lemma3``, ``validate``.
Each run resolves its configuration from an optional flat JSON file plus
flag overrides, writes CSV outputs and a manifest recording the resolved
configuration and seed, and exits 0 on success, 1 on validation failure,
2 on configuration errors, 3 on numeric failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, NotPositiveDefinite, WkregError
from .experiments import (
    ExperimentConfig,
    run_gamma_study,
    run_lemma3_sweep,
    run_tube_experiment,
    true_map,
)
from .kernels import kernel_from_config, kernel_to_config
from .montecarlo import histogram
from .noise import GammaNoise, noise_from_config, noise_to_config
from .output import write_csv, write_json
from .regression import Dataset, fit
from .validation import run_validation

_TUBE_HEADER = ["x", "f_true", "mu", "sigma_gp", "sigma_gp_noisy", "sigma_wk"]

_DEFAULT_KERNEL_CFG = {"type": "squared_exponential", "sigma_f": 4.21, "lengthscale": 3.59}
_DEFAULT_GAUSS_CFG = {"type": "gaussian", "sigma": 1.0}
_DEFAULT_GAMMA_CFG = {"type": "gamma", "alpha": 0.25, "beta": 2.0}


def _load_config(path: str | None, allowed: dict) -> dict:
    """Merge a flat JSON config over per-command defaults, rejecting unknown keys."""
    cfg = {k: (dict(v) if isinstance(v, dict) else v) for k, v in allowed.items()}
    if path is None:
        return cfg
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(raw) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg.update(raw)
    return cfg


def _parse_num_list(text: str, kind=float) -> list:
    try:
        return [kind(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"cannot parse list {text!r}: {exc}") from exc


def _experiment_config(cfg: dict, n_x: int, n_sam: int, noise_default: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            n_x=n_x,
            n_sam=n_sam,
            x_range=tuple(cfg["x_range"]),
            kernel=kernel_from_config(cfg["kernel"]),
            noise=noise_from_config(cfg.get("noise") or noise_default),
            ridge=float(cfg["ridge"]),
            prediction_grid_size=int(cfg["grid"]),
            mc_samples=int(cfg.get("mc", 5000)),
            seed=int(cfg["seed"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc


def _dataset_payload(data: Dataset) -> dict:
    xs = data.xs[:, 0] if data.xs.shape[1] == 1 else data.xs
    return {"xs": np.asarray(xs).tolist(), "ys": np.asarray(data.ys).tolist()}


def _write_manifest(out: Path, command: str, config: dict, seed, outputs: list[str],
                    datasets: dict | None = None) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "config": config,
        "outputs": sorted(outputs),
    }
    if datasets is not None:
        payload["datasets"] = datasets
    write_json(out / "manifest.json", payload)


# fit-predict ---------------------------------------------------------------

_FIT_PREDICT_KEYS = {
    "dataset": None,
    "kernel": _DEFAULT_KERNEL_CFG,
    "noise": _DEFAULT_GAUSS_CFG,
    "ridge": 1.0,
    "predict_x": None,
}


def cmd_fit_predict(args) -> int:
    cfg = _load_config(args.config, _FIT_PREDICT_KEYS)
    if args.x is not None:
        cfg["predict_x"] = _parse_num_list(args.x)
    if cfg["dataset"] is None:
        raise ConfigError("fit-predict needs a 'dataset' entry in the config file")
    if not cfg["predict_x"]:
        raise ConfigError("fit-predict needs prediction locations (--x or 'predict_x')")
    try:
        data = Dataset(xs=np.asarray(cfg["dataset"]["xs"], dtype=float),
                       ys=np.asarray(cfg["dataset"]["ys"], dtype=float))
    except (KeyError, TypeError, ValueError, WkregError) as exc:
        raise ConfigError(f"bad dataset: {exc}") from exc
    kernel = kernel_from_config(cfg["kernel"])
    noise = noise_from_config(cfg["noise"])
    try:
        ridge = float(cfg["ridge"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad ridge: {exc}") from exc

    model = fit(data, kernel, ridge, noise)
    rows = []
    for x in cfg["predict_x"]:
        gp = model.gp_predict(float(x))
        pred = model.wk_predict(float(x))
        rows.append([float(x), gp.mu, float(np.sqrt(gp.var_gp)), float(np.sqrt(gp.var_gp_noisy)),
                     float(np.sqrt(pred.variance)), pred.mean])

    out = Path(args.out)
    write_csv(out / "predictions.csv",
              ["x", "mu", "sigma_gp", "sigma_gp_noisy", "sigma_wk", "wk_mean"], rows)
    resolved = dict(cfg, kernel=kernel_to_config(kernel), noise=noise_to_config(noise))
    _write_manifest(out, "fit-predict", resolved, None, ["predictions.csv"])
    print(f"wrote {out / 'predictions.csv'} ({len(rows)} rows)")
    return 0


# fig1 ----------------------------------------------------------------------

_FIG1_KEYS = {
    "n_x_list": [2, 3, 5],
    "n_sam_list": [1, 5, 25],
    "x_range": [-5.0, 5.0],
    "kernel": _DEFAULT_KERNEL_CFG,
    "noise": _DEFAULT_GAUSS_CFG,
    "ridge": 1.0,
    "grid": 201,
    "seed": 0,
}


def _tube_rows(table) -> list[list[float]]:
    return [[float(v) for v in row]
            for row in zip(table.x, table.f_true, table.mu,
                           table.sigma_gp, table.sigma_gp_noisy, table.sigma_wk)]


def cmd_fig1(args) -> int:
    cfg = _load_config(args.config, _FIG1_KEYS)
    if args.n_x is not None:
        cfg["n_x_list"] = _parse_num_list(args.n_x, int)
    if args.n_sam is not None:
        cfg["n_sam_list"] = _parse_num_list(args.n_sam, int)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.grid is not None:
        cfg["grid"] = args.grid

    out = Path(args.out)
    outputs, datasets = [], {}
    for n_x in cfg["n_x_list"]:
        for n_sam in cfg["n_sam_list"]:
            econf = _experiment_config(cfg, int(n_x), int(n_sam), _DEFAULT_GAUSS_CFG)
            table = run_tube_experiment(econf)
            name = f"tube_nx{n_x}_nsam{n_sam}.csv"
            write_csv(out / name, _TUBE_HEADER, _tube_rows(table))
            outputs.append(name)
            datasets[name] = _dataset_payload(table.dataset)
    resolved = dict(cfg, kernel=cfg["kernel"], noise=cfg["noise"])
    _write_manifest(out, "fig1", resolved, cfg["seed"], outputs, datasets)
    print(f"wrote {len(outputs)} tube tables to {out}")
    return 0


# fig2 ----------------------------------------------------------------------

_FIG2_KEYS = {
    "n_x": 5,
    "n_sam": 1,
    "x_range": [-5.0, 5.0],
    "kernel": _DEFAULT_KERNEL_CFG,
    "noise": _DEFAULT_GAMMA_CFG,
    "ridge": 1.0,
    "grid": 201,
    "mc": 5000,
    "paths": 50,
    "seed": 0,
}


def cmd_fig2(args) -> int:
    cfg = _load_config(args.config, _FIG2_KEYS)
    for flag, key in (("seed", "seed"), ("mc", "mc"), ("grid", "grid"), ("paths", "paths")):
        v = getattr(args, flag)
        if v is not None:
            cfg[key] = v
    econf = _experiment_config(cfg, int(cfg["n_x"]), int(cfg["n_sam"]), _DEFAULT_GAMMA_CFG)
    if not isinstance(econf.noise, GammaNoise):
        raise ConfigError("fig2 requires gamma noise")
    n_paths = int(cfg["paths"])
    if n_paths < 1:
        raise ConfigError(f"paths must be >= 1, got {n_paths}")

    study = run_gamma_study(econf)
    out = Path(args.out)

    k = min(n_paths, study.paths.draws.shape[0])
    grid = study.paths.grid[:, 0]
    path_header = ["x", "f_true", "mean"] + [f"path_{i + 1}" for i in range(k)]
    path_rows = [
        [float(x), float(f), float(m)] + [float(v) for v in study.paths.draws[:k, j]]
        for j, (x, f, m) in enumerate(zip(grid, true_map(grid), study.tube.mu))
    ]
    write_csv(out / "paths.csv", path_header, path_rows)

    kde_rows = []
    for loc, dens in study.location_densities:
        kde_rows.extend([float(loc), float(v), float(d)]
                        for v, d in zip(dens.support, dens.density))
    write_csv(out / "kde_locations.csv", ["location", "value", "density"], kde_rows)

    c = study.comparison
    comp_rows = [[float(v) for v in row]
                 for row in zip(c.value, c.pdf_mc_fit, c.pdf_gp, c.pdf_wk, c.pdf_gp_noisy)]
    write_csv(out / "comparison_x0.csv",
              ["value", "pdf_mc_fit", "pdf_gp", "pdf_wk", "pdf_gp_noisy"], comp_rows)

    hist = histogram(study.draws_x0)
    write_csv(out / "histogram_x0.csv", ["bin_left", "bin_right", "density"],
              [[float(lo), float(hi), float(d)]
               for lo, hi, d in zip(hist.edges[:-1], hist.edges[1:], hist.density)])

    outputs = ["paths.csv", "kde_locations.csv", "comparison_x0.csv", "histogram_x0.csv"]
    resolved = dict(cfg)
    _write_manifest(out, "fig2", resolved, cfg["seed"], outputs,
                    {"training": _dataset_payload(study.tube.dataset)})
    print(f"wrote {', '.join(outputs)} to {out}")
    return 0


# lemma3 --------------------------------------------------------------------

_LEMMA3_KEYS = {
    "x_bar": 0.0,
    "n_list": list(range(1, 101)),
    "kernel": _DEFAULT_KERNEL_CFG,
    "noise": _DEFAULT_GAUSS_CFG,
    "ridge": 1.0,
    "base": None,
    "seed": 0,
}


def cmd_lemma3(args) -> int:
    cfg = _load_config(args.config, _LEMMA3_KEYS)
    if args.n_list is not None:
        cfg["n_list"] = _parse_num_list(args.n_list, int)
    if args.seed is not None:
        cfg["seed"] = args.seed
    kernel = kernel_from_config(cfg["kernel"])
    noise = noise_from_config(cfg["noise"])
    base = None
    if cfg["base"] is not None:
        try:
            base = Dataset(xs=np.asarray(cfg["base"]["xs"], dtype=float),
                           ys=np.asarray(cfg["base"]["ys"], dtype=float))
        except (KeyError, TypeError, ValueError, WkregError) as exc:
            raise ConfigError(f"bad base dataset: {exc}") from exc
    try:
        ridge = float(cfg["ridge"])
        x_bar = float(cfg["x_bar"])
        n_list = [int(n) for n in cfg["n_list"]]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad lemma3 config: {exc}") from exc

    rows = run_lemma3_sweep(base, x_bar, n_list, kernel, ridge, noise)
    out = Path(args.out)
    write_csv(out / "lemma3.csv", ["n_repeats", "variance", "bound"],
              [[r.n_repeats, r.variance, r.bound] for r in rows])
    resolved = dict(cfg, kernel=kernel_to_config(kernel), noise=noise_to_config(noise))
    _write_manifest(out, "lemma3", resolved, cfg["seed"], ["lemma3.csv"])
    print(f"wrote {out / 'lemma3.csv'} ({len(rows)} rows)")
    return 0


# validate ------------------------------------------------------------------

def cmd_validate(args) -> int:
    report = run_validation(seed=args.seed if args.seed is not None else 0)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out is not None:
        out = Path(args.out)
        write_json(out / "report.json", report)
        print(f"wrote {out / 'report.json'}")
    else:
        print(text)
    for check in report["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        print(f"[{status}] {check['name']}", file=sys.stderr)
    for finding in report["findings"]:
        print(f"[finding] {finding}", file=sys.stderr)
    return 0 if report["all_passed"] else 1


# parser --------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wkreg",
        description="Kernel regression with noise-aware uncertainty decomposition",
    )
    parser.add_argument("--version", action="version", version=f"wkreg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-predict", help="fit a model and predict at given locations")
    p.add_argument("--config", required=True, help="JSON config with dataset, kernel, noise, ridge")
    p.add_argument("--x", help="comma-separated prediction locations (overrides 'predict_x')")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fit_predict)

    p = sub.add_parser("fig1", help="tube tables over the (n_x, n_sam) grid")
    p.add_argument("--config", help="JSON config")
    p.add_argument("--n-x", dest="n_x", help="comma-separated location counts")
    p.add_argument("--n-sam", dest="n_sam", help="comma-separated samples per location")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--grid", type=int, help="prediction grid size")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", help="gamma-noise Monte Carlo study")
    p.add_argument("--config", help="JSON config")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--mc", type=int, help="Monte Carlo sample count")
    p.add_argument("--grid", type=int, help="prediction grid size")
    p.add_argument("--paths", type=int, help="number of path columns to emit")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("lemma3", help="repeated-sampling variance sweep")
    p.add_argument("--config", help="JSON config")
    p.add_argument("--n-list", dest="n_list", help="comma-separated repeat counts")
    p.add_argument("--seed", type=int, help="recorded in the manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_lemma3)

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--out", help="directory for report.json (default: print to stdout)")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NotPositiveDefinite as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
