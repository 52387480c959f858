"""Batch front-end regenerating the datasets behind the figures.

Each experiment writes deterministic CSV/JSON files plus a manifest that
lists every output with its content hash.  Config precedence is flags
over config file over defaults; unknown config keys are rejected.

Exit codes: 0 success, 2 config schema violation, 3 numerical-validity
abort.
"""

from __future__ import annotations

import argparse
import cmath
import concurrent.futures
import hashlib
import json
import math
import os
import sys

import numpy as np
from scipy.linalg import expm

from . import core, dynamics, electron, oracle, phaselock, scatter, tomography

EXPERIMENTS = (
    "fig1_maps",
    "fig1d_scaling",
    "fig2_region",
    "fig3_eigenmaps",
    "fig3_trajectories",
    "fig3_hardware",
    "fig4_tomography",
    "sweep",
    "oracle_check",
)

REQUIRED = object()

# Parameter schema per experiment: name -> (type, default). ``list`` types
# carry the element type; REQUIRED marks keys without a default.
SCHEMAS: dict[str, dict[str, tuple]] = {
    "fig1_maps": {
        "comb_sizes": (("list", int), [1, 2, 10]),
        "grid": (int, 50),
        "phi": (float, 0.0),
    },
    "fig1d_scaling": {
        "comb_sizes": (("list", int), [10, 20, 50, 100, 200, 500, 1000, 2000]),
        "beta": (float, math.pi / 2.0),
        "grid": (int, 64),
    },
    "fig2_region": {
        "gamma_ratios": (("list", float), [0.03, 0.3, 3.0]),
        "grid": (int, 4096),
        "n_sphere": (int, 200),
    },
    "fig3_eigenmaps": {
        "preset": (str, "wse2_hbn"),
        "comb_size": (int, 10),
        "phi": (float, 0.0),
        "beta_min": (float, 1e-3),
        "beta_max": (float, math.pi / 2.0),
        "n_beta": (int, 100),
    },
    "fig3_trajectories": {
        "preset": (str, "wse2_hbn"),
        "beta": (float, 0.1),
        "comb_size": (int, 10),
        "phi": (float, 0.0),
        "n_periods": (float, 10.0),
        "n_samples": (int, 2000),
        "lock_omega": (float, 0.0),
        "lock_I2_abs": (float, 1.0),
    },
    "fig3_hardware": {
        "preset": (str, REQUIRED),
        "n_beta": (int, 60),
        "n_periods": (float, 20.0),
        "n_samples": (int, 200),
    },
    "fig4_tomography": {
        "x": (float, 0.4),
        "y": (float, -0.3),
        "z": (float, 0.5),
        "f0": (float, 0.8),
        "f1": (float, 0.5),
        "beta": (float, 0.6),
        "phi1": (float, 0.3),
        "phi2": (float, 1.7),
    },
    "sweep": {
        "betas": (("list", float), REQUIRED),
        "gamma_e": (float, 40e6),
        "gamma_0": (float, 4e6),
        "comb_size": (int, 10),
        "phi": (float, 0.0),
    },
    "oracle_check": {
        "betas": (("list", float), [0.2, 0.1, 0.05]),
        "theta": (float, 0.7),
        "gamma": (float, 0.4),
        "comb_size": (int, 3),
    },
}

TOP_LEVEL_KEYS = {"experiment", "params", "output_dir", "seed"}


class ConfigError(ValueError):
    """Config file violates the experiment schema."""


def _check_scalar(key: str, value, typ):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"param {key!r}: expected number, got {value!r}")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"param {key!r}: expected integer, got {value!r}")
        return value
    if typ is str:
        if not isinstance(value, str):
            raise ConfigError(f"param {key!r}: expected string, got {value!r}")
        return value
    raise AssertionError(typ)


def validate_params(experiment: str, params: dict) -> dict:
    """Apply defaults and reject unknown or ill-typed keys."""
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    schema = SCHEMAS[experiment]
    unknown = set(params) - set(schema)
    if unknown:
        raise ConfigError(f"unknown param {sorted(unknown)[0]!r} "
                          f"for experiment {experiment!r}")
    out = {}
    for key, (typ, default) in schema.items():
        if key not in params:
            if default is REQUIRED:
                raise ConfigError(f"missing required param {key!r}")
            out[key] = default
            continue
        value = params[key]
        if isinstance(typ, tuple):
            if not isinstance(value, list) or not value:
                raise ConfigError(f"param {key!r}: expected non-empty list")
            out[key] = [_check_scalar(key, v, typ[1]) for v in value]
        else:
            out[key] = _check_scalar(key, value, typ)
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(cfg) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
    if "params" in cfg and not isinstance(cfg["params"], dict):
        raise ConfigError("config key 'params' must be an object")
    if "seed" in cfg and (isinstance(cfg["seed"], bool)
                          or not isinstance(cfg["seed"], int)
                          or cfg["seed"] < 0):
        raise ConfigError("config key 'seed' must be a non-negative integer")
    if "output_dir" in cfg and not isinstance(cfg["output_dir"], str):
        raise ConfigError("config key 'output_dir' must be a string")
    if "experiment" in cfg and cfg["experiment"] not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg['experiment']!r}")
    return cfg


def _fmt(value) -> str:
    """Shortest round-trip decimal representation."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


class RunWriter:
    """Collects output files and emits the manifest."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.outputs: list[dict] = []
        os.makedirs(out_dir, exist_ok=True)

    def _register(self, name: str, data: bytes):
        path = os.path.join(self.out_dir, name)
        with open(path, "wb") as fh:
            fh.write(data)
        self.outputs.append(
            {"path": name, "sha256": hashlib.sha256(data).hexdigest()})

    def write_csv(self, name: str, header: list[str], rows) -> None:
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        self._register(name, ("\n".join(lines) + "\n").encode())

    def write_json(self, name: str, obj) -> None:
        self._register(name, (json.dumps(obj, indent=2, sort_keys=True)
                              + "\n").encode())

    def write_manifest(self, experiment: str, params: dict, seed: int) -> None:
        manifest = {
            "experiment": experiment,
            "seed": seed,
            "params": params,
            "outputs": self.outputs,
        }
        data = (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode()
        with open(os.path.join(self.out_dir, "manifest.json"), "wb") as fh:
            fh.write(data)


def _pool_map(fn, args, jobs: int):
    """Ordered map, optionally through a process pool."""
    if jobs <= 1:
        return [fn(a) for a in args]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * jobs))))


def _fig1_row(arg):
    n, phi, theta, betas = arg
    comb = scatter.equal_comb_cached(n) if phi == 0.0 else \
        electron.equal_comb(n, phi)
    qe0 = core.pure_state(theta, 0.0)
    out = []
    for beta in betas:
        after = scatter.qe_after_interaction(
            qe0, comb, scatter.CouplingStrength(beta))
        out.append((0.5 * (1.0 - after.z), core.purity(after)))
    return out


def run_fig1_maps(params: dict, writer: RunWriter, seed: int, jobs: int):
    grid = params["grid"]
    thetas = np.linspace(0.0, math.pi / 2.0, grid)
    betas = np.linspace(0.0, math.pi / 2.0, grid)
    for n in params["comb_sizes"]:
        args = [(n, params["phi"], float(t), betas) for t in thetas]
        rows_nested = _pool_map(_fig1_row, args, jobs)
        rows = []
        for theta, per_beta in zip(thetas, rows_nested):
            for beta, (pg, pur) in zip(betas, per_beta):
                rows.append((theta, beta, pg, pur))
        writer.write_csv(f"fig1_map_N{n}.csv",
                         ["theta_rad", "beta_rad", "ground_prob", "purity"],
                         rows)


def run_fig1d_scaling(params: dict, writer: RunWriter, seed: int, jobs: int):
    beta = params["beta"]
    rows = []
    for n in params["comb_sizes"]:
        worst = scatter.max_purity_loss(n, beta, grid=params["grid"])
        rows.append((n, worst, scatter.purity_loss_bound(n, beta)))
    writer.write_csv("fig1d_scaling.csv",
                     ["comb_size", "max_purity_loss", "bound"], rows)
    logs = np.log([r[0] for r in rows]), np.log([r[1] for r in rows])
    slope = float(np.polyfit(logs[0], logs[1], 1)[0])
    writer.write_json("summary.json", {"fitted_slope": slope})


def run_fig2_region(params: dict, writer: RunWriter, seed: int, jobs: int):
    summary = {}
    for i, ratio in enumerate(params["gamma_ratios"]):
        sample = dynamics.accessible_region(
            ratio, params["grid"], n_sphere=params["n_sphere"], seed=seed)
        writer.write_csv(f"region_{i}.csv", ["x", "y", "z"],
                         [tuple(p) for p in sample.points])
        summary[f"region_{i}"] = {
            "gamma_ratio": ratio,
            "sphere_radius": sample.r_s,
            "sphere_center_z": sample.z_s,
            "sphere_gap": sample.sphere_gap,
            "covers_sphere": sample.covers_sphere(),
        }
    writer.write_json("summary.json", summary)


def _drive_from(preset: str, beta: float, comb_size: int,
                phi: float) -> dynamics.DriveParams:
    hw = dynamics.PRESETS[preset]
    comb = electron.equal_comb(comb_size, phi)
    return dynamics.DriveParams.from_comb(beta, hw.gamma_e, hw.gamma_0, comb)


def run_fig3_eigenmaps(params: dict, writer: RunWriter, seed: int, jobs: int):
    if params["preset"] not in dynamics.PRESETS:
        raise ConfigError(f"unknown preset {params['preset']!r}")
    betas = np.linspace(params["beta_min"], params["beta_max"],
                        params["n_beta"])
    rows = []
    for beta in betas:
        p = _drive_from(params["preset"], float(beta),
                        params["comb_size"], params["phi"])
        vals = dynamics.eigensystem(p).values
        rows.append((beta,) + tuple(
            part for v in vals for part in (v.real, v.imag)))
    writer.write_csv(
        "fig3_eigenmaps.csv",
        ["beta_rad", "re_l1_hz", "im_l1_hz", "re_l2_hz", "im_l2_hz",
         "re_l3_hz", "im_l3_hz"], rows)


def _sample_trajectory(p: dynamics.DriveParams, s0: core.QubitState,
                       ts: np.ndarray) -> list[tuple]:
    """Exact samples via the matrix exponential of the affine generator."""
    gen = dynamics.generator(p).augmented()
    step = expm(gen * float(ts[1] - ts[0]))
    v = np.array([s0.x, s0.y, s0.z, 1.0])
    rows = []
    for t in ts:
        rows.append((t, v[0], v[1], v[2], float(np.hypot(np.hypot(v[0], v[1]),
                                                         v[2]))))
        v = step @ v
    return rows


def run_fig3_trajectories(params: dict, writer: RunWriter, seed: int,
                          jobs: int):
    if params["preset"] not in dynamics.PRESETS:
        raise ConfigError(f"unknown preset {params['preset']!r}")
    p = _drive_from(params["preset"], params["beta"], params["comb_size"],
                    params["phi"])
    period = 2.0 * math.pi / dynamics.rabi_frequency(p)
    ts = np.linspace(0.0, params["n_periods"] * period, params["n_samples"])
    rows = _sample_trajectory(p, core.QubitState(0.0, 0.0, -1.0), ts)
    writer.write_csv("trajectory.csv", ["t_s", "x", "y", "z", "purity"], rows)
    if params["lock_omega"] != 0.0:
        lock = phaselock.LockParams(p.g1, params["lock_I2_abs"],
                                    params["lock_omega"])
        horizon = float(ts[-1])
        dt = horizon / (10 * params["n_samples"])
        lock_rows = phaselock.simulate(lock, 0.9, 0.0, horizon, dt)
        writer.write_csv(
            "phaselock.csv",
            ["t_s", "r", "theta_rad", "theta2_rad", "delta_theta_rad"],
            lock_rows[::10])


def run_fig3_hardware(params: dict, writer: RunWriter, seed: int, jobs: int):
    if params["preset"] not in dynamics.PRESETS:
        raise ConfigError(f"unknown preset {params['preset']!r}")
    hw = dynamics.PRESETS[params["preset"]]
    window = dynamics.rabi_window(hw.drive(0.1))
    betas = np.geomspace(window[0] / 10.0, math.pi / 2.0, params["n_beta"])
    rows = []
    for beta in betas:
        p = hw.drive(float(beta))
        period = 2.0 * math.pi / dynamics.rabi_frequency(p)
        ts = np.linspace(0.0, params["n_periods"] * period,
                         params["n_samples"])
        for t, x, y, z, _ in _sample_trajectory(
                p, core.QubitState(0.0, 0.0, -1.0), ts):
            rows.append((beta, t, z))
    writer.write_csv("fig3_hardware.csv", ["beta_rad", "t_s", "z"], rows)
    writer.write_json("summary.json", {
        "preset": params["preset"],
        "rabi_window": list(window),
    })


def run_fig4_tomography(params: dict, writer: RunWriter, seed: int,
                        jobs: int):
    rho = core.QubitState(params["x"], params["y"], params["z"])
    a0, a1 = electron.comb_alphas(params["f0"], params["f1"])
    spectra = {}
    for label, phi in (("phi1", params["phi1"]), ("phi2", params["phi2"])):
        s = tomography.spectrum_two_sideband(rho, a0, a1, params["beta"], phi)
        spectra[label] = s
        writer.write_csv(f"spectrum_{label}.csv", ["j", "occupation"],
                         s.to_rows())
    mono = tomography.spectrum_monochromatic(rho.z, params["beta"])
    writer.write_csv("spectrum_monochromatic.csv", ["j", "occupation"],
                     mono.to_rows())
    comb = electron.two_sideband_comb(params["f0"], params["f1"],
                                     params["phi1"])
    writer.write_json("input_comb.json", comb.to_json_obj())
    rec = tomography.reconstruct(spectra["phi1"], spectra["phi2"],
                                 params["phi1"], params["phi2"], a0, a1)
    writer.write_json("reconstruction.json", rec.to_json_obj())


def run_sweep(params: dict, writer: RunWriter, seed: int, jobs: int):
    comb = electron.equal_comb(params["comb_size"], params["phi"])
    rows = []
    for beta in params["betas"]:
        p = dynamics.DriveParams.from_comb(beta, params["gamma_e"],
                                           params["gamma_0"], comb)
        s = dynamics.steady_state(p)
        rows.append((beta, s.x, s.y, s.z, core.purity(s)))
    writer.write_csv("sweep.csv", ["beta_rad", "x", "y", "z", "purity"], rows)


def run_oracle_check(params: dict, writer: RunWriter, seed: int, jobs: int):
    comb = electron.equal_comb(params["comb_size"])
    qe = np.array([math.cos(params["theta"]),
                   math.sin(params["theta"])
                   * cmath.exp(1j * params["gamma"])])
    rows = []
    for beta in params["betas"]:
        err = oracle.magnus_state_error(beta, qe, comb)
        rows.append((beta, err))
    writer.write_csv("oracle_check.csv", ["beta", "state_error"], rows)
    logs = np.log([r[0] for r in rows]), np.log([max(r[1], 1e-300)
                                                 for r in rows])
    slope = float(np.polyfit(logs[0], logs[1], 1)[0])
    writer.write_json("summary.json", {"fitted_slope": slope})


RUNNERS = {
    "fig1_maps": run_fig1_maps,
    "fig1d_scaling": run_fig1d_scaling,
    "fig2_region": run_fig2_region,
    "fig3_eigenmaps": run_fig3_eigenmaps,
    "fig3_trajectories": run_fig3_trajectories,
    "fig3_hardware": run_fig3_hardware,
    "fig4_tomography": run_fig4_tomography,
    "sweep": run_sweep,
    "oracle_check": run_oracle_check,
}

NUMERICAL_ABORTS = (oracle.BoundaryLeakError, dynamics.NoSteadyStateError,
                    FloatingPointError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqlab",
        description="Regenerate the figure datasets and parameter sweeps.")
    parser.add_argument("command",
                        help="experiment name or 'validate'",
                        choices=EXPERIMENTS + ("validate",))
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for grid experiments")
    parser.add_argument("--seed", type=int, help="override config seed")
    parser.add_argument("--out", help="override output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            if args.config is None:
                print("validate requires --config", file=sys.stderr)
                return 2
            experiment = cfg.get("experiment")
            if experiment is None:
                raise ConfigError("config missing 'experiment'")
            validate_params(experiment, cfg.get("params", {}))
            print(f"config ok: experiment {experiment}")
            return 0
        experiment = args.command
        params = validate_params(experiment, cfg.get("params", {}))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    out_dir = (args.out or cfg.get("output_dir")
               or os.environ.get("EQLAB_OUT") or "eqlab_out")
    writer = RunWriter(out_dir)
    try:
        RUNNERS[experiment](params, writer, seed, args.jobs)
    except NUMERICAL_ABORTS as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    writer.write_manifest(experiment, params, seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
