"""Command line front end: batch runs, reports, and reproducibility.

Every subcommand resolves a Config (INI file, or a run manifest JSON for
replay), applies flag overrides, executes one pipeline, and writes its
outputs plus a run manifest into --out.  The manifest embeds the fully
resolved config snapshot and the sha256 of every output file; re-running
the same subcommand with --config pointed at the manifest reproduces
every array and CSV byte-for-byte, for any --jobs value.  Timestamps
live only in the manifest, never in data files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, arrayio, medium, phasespace
from .config import _PLAN_FACTORIES, Config, config_from_snapshot, load_config
from .errors import ConfigError, NumericalError
from .evolvers import frac_diffusion_evolve, radiative_closed_form
from .experiments import (
    covariance_suite,
    decoherence_convergence,
    phase_experiment,
    prop1_suite,
)
from .params import derived_exponents
from .randomwalks import (
    brownian_field_sample,
    fbm_sample,
    interpolate_wigner,
    levy_mc_solution,
    log_mode_ladder,
    stochastic_wigner_sample,
)
from .spectral import frac_damping_rate
from .waveprop import Grid, Propagator, initial_condition

_LIMIT_MODELS = ("frac", "transfer")
_SAMPLE_MODELS = ("fbm", "wigner", "levy")


def _utcnow() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _resolve_config(path):
    """Config plus recorded flags; a JSON run manifest replays its snapshot."""
    if path is None:
        return load_config(None), {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    text = p.read_text()
    if text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}: not valid manifest JSON: {e}") from None
        if "config" not in payload:
            raise ConfigError(f"{p}: manifest has no 'config' snapshot")
        return config_from_snapshot(payload["config"]), dict(payload.get("flags", {}))
    return load_config(p), {}


def _pick(args, name, recorded, default):
    """Explicit flag beats a manifest-recorded flag beats the default."""
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in recorded and recorded[name] is not None:
        return recorded[name]
    return default


def _write_csv(path: Path, header, rows) -> str:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return arrayio.file_digest(path)


def _slice_rows(W, grid, k_axis, slice_xs):
    idx = [int(np.argmin(np.abs(grid.x - xs))) for xs in slice_xs]
    header = ["k"] + [f"x={float(grid.x[i])!r}" for i in idx]
    rows = [[float(k)] + [float(W[i, l]) for i in idx] for l, k in enumerate(k_axis)]
    return header, rows


def _parse_slices(raw, box_length):
    if raw is None:
        return [0.5 * box_length]
    try:
        return [float(tok) for tok in str(raw).replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"--slice: cannot parse '{raw}' as x values") from None


# ------------------------------------------------------- subcommands ----


def _run_synthesize(cfg: Config, outdir: Path, args, recorded, flags):
    params, sv = cfg.params, cfg.solver
    sv.regime(params)
    modes = medium.solver_mode_set(
        params, sv.eps, sv.s, sv.box_L, sv.grid_N, seed=sv.seed
    )
    times = np.linspace(0.0, sv.T, sv.snapshots)
    micro = float(sv.eps) ** (sv.s + params.gamma)
    rows = np.empty((sv.snapshots, sv.grid_N))
    rows[0] = medium.grid_field(modes)
    for j in range(1, sv.snapshots):
        medium.advance(modes, (times[j] - times[j - 1]) / micro)
        rows[j] = medium.grid_field(modes)
    return {"medium.wdlb": arrayio.write_array(outdir / "medium.wdlb", rows)}


def _propagate_states(cfg: Config):
    params, sv = cfg.params, cfg.solver
    reg = sv.regime(params)
    grid = Grid(sv.box_L, sv.grid_N)
    phi = initial_condition(
        grid, reg, center=0.5 * sv.box_L, width=sv.box_L / 16.0
    )
    prop = Propagator(params, reg, grid, dt=sv.dt, seed=sv.seed)
    n_steps = int(round(sv.T / sv.dt))
    bounds = np.rint(np.linspace(0.0, n_steps, sv.snapshots + 1)).astype(int)
    states = np.empty((sv.snapshots + 1, sv.grid_N), dtype=complex)
    states[0] = phi
    for j in range(1, bounds.size):
        phi, _ = prop.run(phi, int(bounds[j] - bounds[j - 1]))
        states[j] = phi
    return grid, reg, states


def _run_propagate(cfg: Config, outdir: Path, args, recorded, flags):
    _, _, states = _propagate_states(cfg)
    return {"states.wdlb": arrayio.write_array(outdir / "states.wdlb", states)}


def _run_wigner(cfg: Config, outdir: Path, args, recorded, flags):
    grid, reg, states = _propagate_states(cfg)
    eta = reg.spread
    k_axis, _ = phasespace.momentum_axis(grid, eta)
    W = phasespace.wigner_transform(states[-1], grid, eta)
    slice_xs = _parse_slices(_pick(args, "slice", recorded, None), cfg.solver.box_L)
    flags["slice"] = " ".join(repr(v) for v in slice_xs)
    header, rows = _slice_rows(W, grid, k_axis, slice_xs)
    return {
        "wigner.wdlb": arrayio.write_array(outdir / "wigner.wdlb", W),
        "wigner_slices.csv": _write_csv(outdir / "wigner_slices.csv", header, rows),
    }


def _mixture_initial(cfg: Config, grid: Grid, eta: float):
    plan = cfg.plan
    W0, _ = phasespace.initial_wigner(
        grid,
        eta,
        np.full(grid.n, 1.0 / grid.box_length),
        plan.zeta_nodes,
        plan.zeta_weights,
    )
    return W0


def _run_limit(cfg: Config, outdir: Path, args, recorded, flags):
    model = _pick(args, "model", recorded, "frac")
    if model not in _LIMIT_MODELS:
        raise ConfigError(f"--model must be one of {_LIMIT_MODELS}, got '{model}'")
    flags["model"] = model
    params, sv = cfg.params, cfg.solver
    reg = sv.regime(params)
    grid = Grid(sv.box_L, sv.grid_N)
    eta = reg.spread
    k_axis, dk = phasespace.momentum_axis(grid, eta)
    W0 = _mixture_initial(cfg, grid, eta)
    if model == "frac":
        theta = derived_exponents(params).theta
        W = frac_diffusion_evolve(
            W0, dk, sv.T, theta=theta, rate=frac_damping_rate(params)
        )
    else:
        W = radiative_closed_form(params, W0, grid.dx, dk, sv.T)
    slice_xs = _parse_slices(_pick(args, "slice", recorded, None), sv.box_L)
    flags["slice"] = " ".join(repr(v) for v in slice_xs)
    header, rows = _slice_rows(W, grid, k_axis, slice_xs)
    return {
        "limit.wdlb": arrayio.write_array(outdir / "limit.wdlb", W),
        "limit_slices.csv": _write_csv(outdir / "limit_slices.csv", header, rows),
    }


def _run_sample(cfg: Config, outdir: Path, args, recorded, flags):
    model = _pick(args, "model", recorded, "fbm")
    if model not in _SAMPLE_MODELS:
        raise ConfigError(f"--model must be one of {_SAMPLE_MODELS}, got '{model}'")
    flags["model"] = model
    params, sv = cfg.params, cfg.solver
    exps = derived_exponents(params)

    if model == "fbm":
        n_steps = max(1, int(round(sv.T / sv.dt)))
        path = fbm_sample(exps.kappa0, n_steps, sv.dt, seed=sv.seed)
        rows = list(zip(path.times.tolist(), path.values[0].tolist()))
        return {
            "fbm_path.csv": _write_csv(outdir / "fbm_path.csv", ["t", "value"], rows)
        }

    reg = sv.regime(params)
    grid = Grid(sv.box_L, sv.grid_N)
    eta = reg.spread
    k_axis, dk = phasespace.momentum_axis(grid, eta)
    W0 = _mixture_initial(cfg, grid, eta)

    if model == "wigner":
        p, w = log_mode_ladder(dk, float(np.max(k_axis)), 128)
        field = brownian_field_sample(params, p, w, (0.0, sv.T), seed=sv.seed)
        W = stochastic_wigner_sample(W0, field, sv.T, grid.x, k_axis, params=params)
        return {
            "wigner_sample.wdlb": arrayio.write_array(
                outdir / "wigner_sample.wdlb", W
            )
        }

    n_paths = int(_pick(args, "paths", recorded, 20_000))
    delta = float(_pick(args, "delta", recorded, 1e-8))
    flags["paths"] = n_paths
    flags["delta"] = delta
    # localized beam: paths wander off-grid, so the initial datum must decay
    # at the edges for zero extension to be consistent
    xc = 0.5 * sv.box_L
    width = sv.box_L / 16.0
    density = np.exp(-0.5 * ((grid.x - xc) / width) ** 2)
    density /= np.sum(density) * grid.dx
    W0, _ = phasespace.initial_wigner(
        grid, eta, density, cfg.plan.zeta_nodes, cfg.plan.zeta_weights
    )
    interp = interpolate_wigner(W0, grid.x, k_axis)
    probes = [(xc + u, v) for u in (-2.0, 0.0, 2.0) for v in (-1.0, -0.4, 0.4, 1.0)]
    est, se = levy_mc_solution(
        interp, params, sv.T, probes, n_paths, delta, seed=sv.seed
    )
    rows = [
        [xq, kq, float(e), float(s), n_paths, delta]
        for (xq, kq), e, s in zip(probes, est, se)
    ]
    return {
        "levy_estimates.csv": _write_csv(
            outdir / "levy_estimates.csv",
            ["x", "k", "estimate", "stderr", "N", "delta"],
            rows,
        )
    }


def _run_experiment(cfg: Config, outdir: Path, args, recorded, flags, jobs: int):
    plan = cfg.plan
    plan_name = _pick(args, "plan", recorded, None)
    if plan_name is not None:
        factory = _PLAN_FACTORIES.get(plan_name)
        if factory is None:
            raise ConfigError(
                f"unknown experiment plan '{plan_name}' (known: {sorted(_PLAN_FACTORIES)})"
            )
        flags["plan"] = plan_name
        plan = factory()
        if args.seed is not None:
            plan = replace(plan, seed=args.seed)

    if plan.model == "phase":
        rep = phase_experiment(plan, jobs=jobs)
        summary = [
            ["hurst", float(rep.hurst.value)],
            ["hurst_ci_low", float(rep.hurst.ci_low)],
            ["hurst_ci_high", float(rep.hurst.ci_high)],
            ["hurst_target", float(rep.hurst_target)],
            ["modulus_drift", float(rep.modulus_drift)],
            ["increment_ks_pvalue", float(rep.increment_ks_pvalue)],
            ["ambiguous_steps", rep.ambiguous_steps],
            ["n_realizations", rep.n_realizations],
        ]
        lag_rows = [
            [int(lag), float(var)]
            for lag, var in zip(rep.hurst.lags, rep.hurst.lag_variances)
        ]
        return plan, {
            "phase_report.csv": _write_csv(
                outdir / "phase_report.csv", ["quantity", "value"], summary
            ),
            "phase_lags.csv": _write_csv(
                outdir / "phase_lags.csv", ["lag_steps", "variance"], lag_rows
            ),
        }

    rows = decoherence_convergence(plan, jobs=jobs)
    table = [
        [r.epsilon, r.median_distance, r.iqr, len(r.distances)] for r in rows
    ]
    return plan, {
        "ladder.csv": _write_csv(
            outdir / "ladder.csv",
            ["epsilon", "median_distance", "iqr", "n_realizations"],
            table,
        )
    }


def _run_validate(cfg: Config, outdir: Path, args, recorded, flags):
    params = cfg.params
    wavenumbers = np.geomspace(0.05, 2.0, 8)
    # suites keep their own default seeds unless one is forced explicitly;
    # the solver seed is a propagation concern, not a validation knob
    explicit = getattr(args, "seed", None)
    prop_seed = int(explicit if explicit is not None else recorded.get("prop1_seed", 0))
    cov_seed = int(explicit if explicit is not None else recorded.get("cov_seed", 1))
    flags["prop1_seed"] = prop_seed
    flags["cov_seed"] = cov_seed
    rows = prop1_suite(params, wavenumbers, seed=prop_seed)
    rows += covariance_suite(params, seed=cov_seed)
    table = [
        [r.name, float(r.statistic), float(r.target), float(r.tolerance), r.passed]
        for r in rows
    ]
    digest = _write_csv(
        outdir / "validate_report.csv",
        ["check", "statistic", "target", "tolerance", "passed"],
        table,
    )
    failures = [r for r in rows if not r.passed]
    for r in rows:
        print(r)
    if failures:
        raise NumericalError(
            f"{len(failures)} of {len(rows)} validation checks failed", len(failures)
        )
    return {"validate_report.csv": digest}


# ------------------------------------------------------------ driver ----


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab",
        description=(
            "Numerical laboratory for waves in long-range correlated random "
            "media: synthesis, propagation, phase-space transforms, limit "
            "models, samplers, and validation experiments."
        ),
    )
    parser.add_argument("--version", action="version", version=f"decolab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    def add(name, help_text, **extra):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="INI config or run-manifest JSON to replay")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--eps", type=float, help="scale parameter override")
        p.add_argument("--s", type=float, help="spatial scaling exponent override")
        p.add_argument("--sc", type=float, help="coherence exponent override")
        p.add_argument("--jobs", type=int, default=1, help="worker threads")
        for flag, kwargs in extra.items():
            p.add_argument(flag, **kwargs)
        return p

    add("synthesize", "export realizations of the random medium on the solver lattice")
    add("propagate", "split-step propagation snapshots of a coherent packet")
    add(
        "wigner",
        "Wigner transform of the propagated state",
        **{"--slice": {"help": "comma-separated x values for CSV slices"}},
    )
    add(
        "limit",
        "deterministic limit evolution of the default momentum mixture",
        **{
            "--model": {"choices": _LIMIT_MODELS, "help": "limit model"},
            "--slice": {"help": "comma-separated x values for CSV slices"},
        },
    )
    add(
        "sample",
        "draw from the stochastic limit objects",
        **{
            "--model": {"choices": _SAMPLE_MODELS, "help": "sampler"},
            "--paths": {"type": int, "help": "Monte Carlo path count (levy)"},
            "--delta": {"type": float, "help": "small-jump truncation (levy)"},
        },
    )
    add(
        "experiment",
        "simulation-versus-limit study from a plan",
        **{"--plan": {"help": f"plan name (known: {sorted(_PLAN_FACTORIES)})"}},
    )
    add("validate", "run the medium statistical validation suites")
    return parser


def _dispatch(args) -> int:
    cfg, recorded = _resolve_config(args.config)
    solver = cfg.solver
    overrides = {}
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.s is not None:
        overrides["s"] = args.s
    if args.sc is not None:
        overrides["s_c"] = args.sc
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        solver = replace(solver, **overrides)
    plan = cfg.plan
    if args.seed is not None:
        plan = replace(plan, seed=args.seed)
    cfg = Config(params=cfg.params, solver=solver, plan=plan)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    started = _utcnow()
    flags = {}
    jobs = max(1, int(args.jobs))

    if args.command == "experiment":
        plan, outputs = _run_experiment(cfg, outdir, args, recorded, flags, jobs)
        cfg = Config(params=cfg.params, solver=cfg.solver, plan=plan)
        master_seed = plan.seed
    elif args.command == "validate":
        outputs = _run_validate(cfg, outdir, args, recorded, flags)
        master_seed = cfg.solver.seed
    else:
        runner = {
            "synthesize": _run_synthesize,
            "propagate": _run_propagate,
            "wigner": _run_wigner,
            "limit": _run_limit,
            "sample": _run_sample,
        }[args.command]
        outputs = runner(cfg, outdir, args, recorded, flags)
        master_seed = cfg.solver.seed

    snapshot = cfg.snapshot()
    manifest = {
        "tool": "decolab",
        "version": __version__,
        "subcommand": args.command,
        "config": snapshot,
        "params_hash": arrayio.params_hash(snapshot),
        "master_seed": master_seed,
        "flags": flags,
        "created_utc": started,
        "finished_utc": _utcnow(),
        "outputs": outputs,
    }
    arrayio.write_manifest(outdir / "run_manifest.json", manifest)
    for name in sorted(outputs):
        print(f"wrote {outdir / name}")
    print(f"wrote {outdir / 'run_manifest.json'}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _dispatch(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
