"""Strict INI configuration for the command-line front end.

Three flat sections, all optional, every key optional:

    [model]       d, alpha, beta, nu, gamma, envelope, envelope_amp
    [solver]      dt, T, snapshots, box_L, grid_N, eps, s, s_c, seed
    [experiment]  plan, epsilons, n_realizations, batch, seed,
                  T, dt, grid_N, box_L

Unknown sections or keys are rejected, as are values violating the model
hypotheses (the error cites the exact inequality).  A parsed Config is
fully resolved: it carries the medium parameters, the single-run solver
settings, and a ready-to-run experiment plan.  Config.snapshot() returns
a JSON-safe dict in the same key vocabulary, from which
config_from_snapshot() rebuilds the same Config bit-exactly; run
manifests embed that snapshot.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .params import Envelope, ModelParams, ScalingRegime, derived_exponents
from .experiments import ExperimentPlan, frac_default_plan, phase_default_plan

_PLAN_FACTORIES = {
    "frac_default": frac_default_plan,
    "phase_default": phase_default_plan,
}

_MODEL_KEYS = ("d", "alpha", "beta", "nu", "gamma", "envelope", "envelope_amp")
_SOLVER_KEYS = ("dt", "T", "snapshots", "box_L", "grid_N", "eps", "s", "s_c", "seed")
_EXPERIMENT_KEYS = (
    "plan",
    "epsilons",
    "n_realizations",
    "batch",
    "seed",
    "T",
    "dt",
    "grid_N",
    "box_L",
)
_INT_KEYS = {"d", "grid_N", "snapshots", "n_realizations", "batch", "seed"}
_STR_KEYS = {"envelope", "plan"}
# [experiment] keys sharing the [solver] vocabulary, mapped to plan fields
_EXP_KEY_TO_FIELD = {"T": "t_final", "grid_N": "n_grid", "box_L": "box_length"}


@dataclass(frozen=True)
class SolverSettings:
    """Scales for the single-run subcommands (synthesize/propagate/wigner).

    Field names mirror the [solver] config keys so settings, snapshots and
    manifests all speak the same vocabulary.
    """

    dt: float = 0.02
    T: float = 0.5
    snapshots: int = 5
    box_L: float = 64.0
    grid_N: int = 2048
    eps: float = 0.1
    s: float = 0.8
    s_c: float = 0.4
    seed: int = 2024

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not (self.T >= 0.0):
            raise ConfigError(f"T must be >= 0, got {self.T}")
        if self.snapshots < 1:
            raise ConfigError(f"snapshots must be >= 1, got {self.snapshots}")
        if not (self.box_L > 0.0 and math.isfinite(self.box_L)):
            raise ConfigError(f"box_L must be finite and > 0, got {self.box_L}")
        if self.grid_N < 8 or self.grid_N % 2:
            raise ConfigError(f"grid_N must be even and >= 8, got {self.grid_N}")
        if not (0.0 < self.eps < 1.0):
            raise ConfigError(f"eps must lie in (0, 1), got {self.eps}")

    def regime(self, params: ModelParams) -> ScalingRegime:
        reg = ScalingRegime(epsilon=self.eps, s=self.s, s_c=self.s_c)
        reg.validate_against(params)
        return reg


@dataclass(frozen=True)
class Config:
    params: ModelParams
    solver: SolverSettings
    plan: ExperimentPlan

    def snapshot(self) -> dict:
        plan = asdict(self.plan)
        plan["params"] = _params_dict(self.plan.params)
        for key in ("epsilons", "zeta_nodes", "zeta_weights", "track_modes"):
            plan[key] = list(plan[key])
        return {
            "model": _params_dict(self.params),
            "solver": asdict(self.solver),
            "experiment": plan,
        }


def _params_dict(params: ModelParams) -> dict:
    return {
        "d": params.d,
        "alpha": params.alpha,
        "beta": params.beta,
        "nu": params.nu,
        "gamma": params.gamma,
        "envelope": params.envelope.name,
        "envelope_amp": params.envelope.amp,
    }


def _params_from_dict(d: dict) -> ModelParams:
    return ModelParams(
        d=int(d["d"]),
        alpha=float(d["alpha"]),
        beta=float(d["beta"]),
        nu=float(d["nu"]),
        gamma=float(d["gamma"]),
        envelope=Envelope(name=str(d["envelope"]), amp=float(d["envelope_amp"])),
    )


def _coerce(section: str, key: str, raw: str):
    kind = int if key in _INT_KEYS else str if key in _STR_KEYS else float
    if key == "epsilons":
        try:
            return tuple(float(tok) for tok in raw.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"[{section}] {key}: cannot parse '{raw}' as a float list") from None
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: cannot parse '{raw}' as {kind.__name__}"
        ) from None


def _read_sections(text: str, origin: str) -> dict:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # solver keys are case-sensitive (T, box_L, grid_N)
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as e:
        raise ConfigError(f"{origin}: {e}") from None
    known = {"model": _MODEL_KEYS, "solver": _SOLVER_KEYS, "experiment": _EXPERIMENT_KEYS}
    out = {}
    for section in cp.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}] (known: model, solver, experiment)")
        vals = {}
        for key, raw in cp.items(section):
            if key not in known[section]:
                raise ConfigError(f"unknown key '{key}' in [{section}]")
            vals[key] = _coerce(section, key, raw)
        out[section] = vals
    return out


def _build(sections: dict) -> Config:
    model_kv = sections.get("model", {})
    kwargs = {k: v for k, v in model_kv.items() if k not in ("envelope", "envelope_amp")}
    if "envelope" in model_kv or "envelope_amp" in model_kv:
        kwargs["envelope"] = Envelope(
            name=model_kv.get("envelope", "gauss"), amp=model_kv.get("envelope_amp", 1.0)
        )
    params = ModelParams(**kwargs)
    solver = SolverSettings(**sections.get("solver", {}))
    solver.regime(params)  # fail fast on an inadmissible (eps, s, s_c)

    exp = dict(sections.get("experiment", {}))
    plan_name = exp.pop("plan", "frac_default")
    factory = _PLAN_FACTORIES.get(plan_name)
    if factory is None:
        raise ConfigError(
            f"unknown experiment plan '{plan_name}' (known: {sorted(_PLAN_FACTORIES)})"
        )
    plan = factory()
    if model_kv:
        # explicit [model] keys retarget the plan's medium; phase plans must
        # re-derive their scaling exponent from the new parameters
        s = derived_exponents(params).phase_scale if plan.model == "phase" else plan.s
        plan = replace(plan, params=params, s=s)
    if exp:
        plan = replace(plan, **{_EXP_KEY_TO_FIELD.get(k, k): v for k, v in exp.items()})
    plan.regimes()  # validates (s, s_c) admissibility for every rung
    return Config(params=params, solver=solver, plan=plan)


def load_config(path=None) -> Config:
    """Parse an INI file into a Config; path=None gives shipped defaults."""
    if path is None:
        return _build({})
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return _build(_read_sections(p.read_text(), str(p)))


def config_from_snapshot(snap: dict) -> Config:
    """Rebuild a Config from Config.snapshot() output (manifest replay)."""
    try:
        params = _params_from_dict(snap["model"])
        solver = SolverSettings(**snap["solver"])
        exp = dict(snap["experiment"])
    except (KeyError, TypeError) as e:
        raise ConfigError(f"snapshot missing required entries: {e}") from None
    exp["params"] = _params_from_dict(exp["params"])
    for key in ("epsilons", "zeta_nodes", "zeta_weights", "track_modes"):
        exp[key] = tuple(exp[key])
    plan = ExperimentPlan(**exp)
    plan.regimes()
    return Config(params=params, solver=solver, plan=plan)
