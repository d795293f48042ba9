"""Named, reproducible experiments and their flat key-value configuration.

Every experiment returns a report dict that embeds the resolved config and
the pass thresholds it was judged against. Reports are byte-identical for an
identical config apart from the ``timestamp`` field.
"""
from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from . import density as dm
from . import gauge as gc
from .errors import ConfigError
from .grid import Boundary, make_grid, reconstruct
from .io import write_field_csv, write_json, write_residual
from .residual import GammaSchedule, refinement_study
from .samples import gaussian_packet, random_hydro_field, random_smooth_field
from .schrodinger import PhysicalConstants, Potential

SCHEMA_VERSION = 1

# Pass thresholds, one place only; every report echoes the ones it used.
THRESHOLDS: Dict[str, Any] = {
    "counterexample_tol": 1e-12,
    "semigroup_max_deviation": 1e-12,
    "hydro_max_deviation": 1e-12,
    "modulus_rel": 1e-14,
    "residual_max_relative": 1e-3,
    "refinement_ratio": [3.0, 5.0],
    "diagonal_deviation": 1e-13,
    "hermitian_preserved": 1e-13,
    "hermitian_broken": 1e-6,
    "diag_gap": 1e-12,
    "offdiag_gap": 1e-6,
}


# -- config schema ---------------------------------------------------------

def _positive_int(v) -> int:
    i = int(v)
    if i != float(v) or i <= 0:
        raise ValueError("expected a positive integer")
    return i


def _nonneg_int(v) -> int:
    i = int(v)
    if i != float(v) or i < 0:
        raise ValueError("expected a nonnegative integer")
    return i


def _positive_float(v) -> float:
    f = float(v)
    if not f > 0:
        raise ValueError("expected a positive number")
    return f


def _finite_float(v) -> float:
    f = float(v)
    if not math.isfinite(f):
        raise ValueError("expected a finite number")
    return f


def _float_list(v) -> List[float]:
    if isinstance(v, (list, tuple)):
        return [_finite_float(x) for x in v]
    return [_finite_float(x) for x in str(v).split(",") if x.strip()]


def _str_list(v) -> List[str]:
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return [x.strip() for x in str(v).split(",") if x.strip()]


def _boundary(v) -> str:
    return Boundary(str(v)).value


def _potentials(v) -> List[str]:
    kinds = _str_list(v)
    for k in kinds:
        if k not in ("free", "harmonic"):
            raise ValueError(f"unknown potential {k!r}")
    return kinds


@dataclass(frozen=True)
class Key:
    parse: Callable[[Any], Any]
    default: Any
    help: str


def _grid_keys(n, x_min, x_max):
    return {
        "n_points": Key(_positive_int, n, "grid nodes"),
        "x_min": Key(_finite_float, x_min, "left edge of the box"),
        "x_max": Key(_finite_float, x_max, "right edge of the box"),
        "boundary": Key(_boundary, "dirichlet", "dirichlet | periodic"),
    }


SEED = {"seed": Key(_nonneg_int, 0, "RNG seed for randomized sweeps")}


@dataclass(frozen=True)
class Experiment:
    name: str
    claim: str
    keys: Dict[str, Key]
    grid_keys: tuple = ()
    evolution_keys: tuple = ()


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: Dict[str, Any]
    grid: Dict[str, Any]
    evolution: Dict[str, Any]
    seed: int
    output_dir: Optional[Path] = None

    def to_dict(self) -> dict:
        return {"experiment": self.experiment, "parameters": self.parameters,
                "grid": self.grid, "evolution": self.evolution, "seed": self.seed}

    def value(self, key: str):
        for d in (self.parameters, self.grid, self.evolution):
            if key in d:
                return d[key]
        if key == "seed":
            return self.seed
        raise KeyError(key)


# -- experiments -------------------------------------------------------------

def _checks_report(results: dict, checks: Dict[str, bool], used: List[str]) -> dict:
    return {"results": results, "checks": checks, "passed": all(checks.values()),
            "thresholds": {k: THRESHOLDS[k] for k in used}}


def run_counterexample(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    lam, a1, a2 = cfg.value("lambda"), cfg.value("arg1"), cfg.value("arg2")
    tol = THRESHOLDS["counterexample_tol"]
    rep = gc.counterexample_report(lam, a1, a2, tol=tol)
    results = rep.to_dict()
    checks = {}
    if lam == round(lam) or abs(lam) <= 1:
        checks["all_points_equal"] = all(p.equal for p in rep.points)
    else:
        checks["composition_law_broken"] = any(not p.equal for p in rep.points)
    if (lam, a1, a2) == (1.5, math.pi / 4, 3 * math.pi / 4):
        expected = [9 * math.pi / 16, 9 * math.pi / 16, 11 * math.pi / 16, -5 * math.pi / 16]
        got = [rep.points[0].arg_double, rep.points[0].arg_direct,
               rep.points[1].arg_double, rep.points[1].arg_direct]
        results["expected_in_units_of_pi"] = [e / math.pi for e in expected]
        results["got_in_units_of_pi"] = [g / math.pi for g in got]
        checks["reference_values"] = all(abs(g - e) <= tol for g, e in zip(got, expected))
        checks["point1_equal"] = rep.points[0].equal
        checks["point2_unequal"] = not rep.points[1].equal
    return _checks_report(results, checks, ["counterexample_tol"])


def _principal_pair(rng, gamma_cap_for):
    lam = rng.uniform(-1, 1)
    while lam == 0:
        lam = rng.uniform(-1, 1)
    cap = gamma_cap_for(lam)
    return gc.GaugeParams(lam, rng.uniform(-cap, cap), gc.GaugeClass.PRINCIPAL)


def run_semigroup_sweep(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    rng = np.random.default_rng(cfg.seed)
    grid = make_grid(cfg.grid["n_points"], cfg.grid["x_min"], cfg.grid["x_max"], cfg.grid["boundary"])
    fields = [random_smooth_field(grid, rng, log_amp=cfg.value("log_amp"))
              for _ in range(cfg.value("n_fields"))]
    max_log = max(float(np.max(np.abs(np.log(np.abs(f.values))))) for f in fields)
    gamma_max, int_max = cfg.value("gamma_max"), cfg.value("integer_max")

    def gamma_cap(lam):
        # keep lam*Arg + gamma*ln|psi| inside (-pi, pi) so the intermediate
        # phase is never re-wrapped by the second principal-branch application
        return min(gamma_max, 0.95 * (1 - abs(lam)) * math.pi / max(max_log, 1e-300))

    results = {"max_log_modulus": max_log}
    worst_modulus = 0.0
    for kind in ("principal", "integer"):
        worst = 0.0
        for _ in range(cfg.value("trials")):
            if kind == "principal":
                p1, p2 = _principal_pair(rng, gamma_cap), _principal_pair(rng, gamma_cap)
            else:
                lams = rng.choice([k for k in range(-int_max, int_max + 1) if k], size=2)
                p1, p2 = (gc.GaugeParams(int(l), rng.uniform(-gamma_max, gamma_max), gc.GaugeClass.INTEGER)
                          for l in lams)
            pc = gc.compose(p2, p1)
            for f in fields:
                once = gc.apply_field(p1, f)
                seq = gc.apply_field(p2, once).values
                direct = gc.apply_field(pc, f).values
                worst = max(worst, float(np.max(np.abs(seq - direct)) / np.max(np.abs(f.values))))
                r = np.abs(f.values)
                worst_modulus = max(worst_modulus, float(np.max(np.abs(np.abs(once.values) - r) / r)))
        results[f"{kind}_max_deviation"] = worst
    results["max_relative_modulus_change"] = worst_modulus
    thr = THRESHOLDS["semigroup_max_deviation"]
    checks = {"principal_law": results["principal_max_deviation"] < thr,
              "integer_law": results["integer_max_deviation"] < thr,
              "modulus_invariance": worst_modulus < THRESHOLDS["modulus_rel"]}
    return _checks_report(results, checks, ["semigroup_max_deviation", "modulus_rel"])


def _unrestricted(rng, lam_max, gamma_max):
    lam = rng.uniform(0.2, lam_max) * rng.choice([-1.0, 1.0])
    return gc.GaugeParams(lam, rng.uniform(-gamma_max, gamma_max))


def run_hydro_group(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    rng = np.random.default_rng(cfg.seed)
    grid = make_grid(cfg.grid["n_points"], cfg.grid["x_min"], cfg.grid["x_max"], cfg.grid["boundary"])
    lam_max, gamma_max = cfg.value("lambda_max"), cfg.value("gamma_max")
    comp = inv = branch = 0.0
    modulus = 0.0
    conj_exact = True
    for _ in range(cfg.value("trials")):
        h = random_hydro_field(grid, rng)
        p1, p2 = _unrestricted(rng, lam_max, gamma_max), _unrestricted(rng, lam_max, gamma_max)
        seq = gc.apply_hydro(p2, gc.apply_hydro(p1, h))
        direct = gc.apply_hydro(gc.compose(p2, p1), h)
        comp = max(comp, float(np.max(np.abs(seq.B.values - direct.B.values))),
                   float(np.max(np.abs(seq.A.values - direct.A.values))))
        back = gc.apply_hydro(gc.inverse(p1), gc.apply_hydro(p1, h))
        inv = max(inv, float(np.max(np.abs(back.B.values - h.B.values))))
        psi = reconstruct(h)
        psi1 = reconstruct(gc.apply_hydro(p1, h))
        modulus = max(modulus, float(np.max(np.abs(np.abs(psi1.values) - np.abs(psi.values)) / np.abs(psi.values))))
        conj = reconstruct(gc.apply_hydro(gc.GaugeParams(-1.0, 0.0), h)).values
        conj_exact &= bool(np.array_equal(conj, np.conj(psi.values)))
        # branch-tracked values seeded from the continuous phase must agree with the hydro action
        hb = gc.apply_hydro(p1, h).B.values
        for i in range(0, grid.n_points, max(1, grid.n_points // 32)):
            v = gc.branched_at(h, i)
            w = gc.apply_branched(p1, v)
            branch = max(branch, abs(w.total_phase - hb[i]))
            modulus = max(modulus, abs(w.modulus - v.modulus) / v.modulus)
    thr = THRESHOLDS["hydro_max_deviation"]
    results = {"composition_max_deviation": comp, "inverse_max_deviation": inv,
               "branched_vs_hydro_max_deviation": branch, "conjugation_exact": conj_exact,
               "max_relative_modulus_change": modulus}
    checks = {"composition": comp < thr, "inverse": inv < thr, "branched_agrees": branch < thr,
              "conjugation": conj_exact, "modulus_invariance": modulus < THRESHOLDS["modulus_rel"]}
    return _checks_report(results, checks, ["hydro_max_deviation", "modulus_rel"])


def run_gauge_equivalence(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    constants = PhysicalConstants(cfg.evolution["hbar"], cfg.evolution["mass"])
    width, k0, x0 = cfg.value("width"), cfg.value("k0"), cfg.value("x0")
    omega = cfg.value("omega") or 1.0 / width**2
    lo, hi = THRESHOLDS["refinement_ratio"]
    results: Dict[str, Any] = {"cases": []}
    checks = {}
    for kind in cfg.value("potentials"):
        V = Potential.free() if kind == "free" else Potential.harmonic(omega)
        for g0 in cfg.value("gamma0"):
            for rate in cfg.value("gamma_rate"):
                study = refinement_study(
                    lambda g: gaussian_packet(g, width, x0, k0), V, GammaSchedule(g0, rate),
                    cfg.grid["n_points"], cfg.grid["x_min"], cfg.grid["x_max"],
                    cfg.evolution["dt"], cfg.evolution["steps"], constants, cfg.value("levels"))
                tag = f"{kind}_g{g0:g}_r{rate:g}"
                case = {"potential": kind, "gamma0": g0, "gamma_rate": rate,
                        "n_points": study.n_points, "dt": study.dts,
                        "max_relative_residual": study.max_relative, "refinement_ratios": study.ratios}
                results["cases"].append(case)
                checks[f"{tag}_residual"] = study.max_relative[0] < THRESHOLDS["residual_max_relative"]
                checks[f"{tag}_ratio"] = all(lo <= r <= hi for r in study.ratios)
                if out is not None:
                    for lvl, rep in enumerate(study.reports):
                        write_residual(out / f"residual_{tag}_L{lvl}.json", out / f"residual_{tag}_L{lvl}.csv", rep)
    return _checks_report(results, checks, ["residual_max_relative", "refinement_ratio"])


def _density_grid(cfg):
    return make_grid(cfg.grid["n_points"], cfg.grid["x_min"], cfg.grid["x_max"], cfg.grid["boundary"])


def run_convexity(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    grid = _density_grid(cfg)
    shift = cfg.value("shift")
    rho1 = dm.projector_from(gaussian_packet(grid, 1.0, shift))
    rho2 = dm.projector_from(gaussian_packet(grid, 1.0, -shift))
    p1 = cfg.value("p1")
    p = dm.ComplexGaugeParams(cfg.value("lambda"), complex(cfg.value("gamma_re"), cfg.value("gamma_im")))
    rep = dm.convexity_report(rho1, rho2, p1, 1.0 - p1, p)
    checks = {"diagonal_convex": rep.diag_gap < THRESHOLDS["diag_gap"],
              "offdiagonal_nonconvex": rep.offdiag_gap > THRESHOLDS["offdiag_gap"]}
    return _checks_report(rep.to_dict(), checks, ["diag_gap", "offdiag_gap"])


def run_hermiticity(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    grid = _density_grid(cfg)
    psi = gaussian_packet(grid, 1.0, cfg.value("center"), normalized=False)
    rho = dm.projector_from(psi)
    lam = cfg.value("lambda")
    real = dm.apply_density(dm.ComplexGaugeParams(lam, cfg.value("gamma_real")), rho)
    imag = dm.apply_density(dm.ComplexGaugeParams(lam, 1j * cfg.value("gamma_imag")), rho)
    results = {"real_gamma_deviation": dm.hermiticity_deviation(real),
               "imaginary_gamma_deviation": dm.hermiticity_deviation(imag),
               "real_gamma_diagonal_deviation": dm.diagonal_deviation(rho, real),
               "imaginary_gamma_diagonal_deviation": dm.diagonal_deviation(rho, imag)}
    if out is not None:
        write_field_csv(out / "witness.csv", psi)
    checks = {"real_gamma_hermitian": results["real_gamma_deviation"] < THRESHOLDS["hermitian_preserved"],
              "imaginary_gamma_non_hermitian": results["imaginary_gamma_deviation"] > THRESHOLDS["hermitian_broken"],
              "diagonal_invariant": max(results["real_gamma_diagonal_deviation"],
                                        results["imaginary_gamma_diagonal_deviation"]) < THRESHOLDS["diagonal_deviation"]}
    return _checks_report(results, checks, ["hermitian_preserved", "hermitian_broken", "diagonal_deviation"])


def run_density_diagonal(cfg: ExperimentConfig, out: Optional[Path]) -> dict:
    rng = np.random.default_rng(cfg.seed)
    grid = _density_grid(cfg)
    lam_max, gamma_max = cfg.value("lambda_max"), cfg.value("gamma_max")
    diag = herm_real = 0.0
    herm_complex = math.inf
    for trial in range(cfg.value("trials")):
        lam = rng.uniform(0.2, lam_max) * rng.choice([-1.0, 1.0])
        re = rng.uniform(-gamma_max, gamma_max)
        im = 0.0 if trial % 2 == 0 else rng.uniform(0.1, gamma_max) * rng.choice([-1.0, 1.0])
        p = dm.ComplexGaugeParams(lam, complex(re, im))
        f1, f2 = random_smooth_field(grid, rng), random_smooth_field(grid, rng)
        pure = dm.projector_from(f1)
        mixed = dm.mix(pure, dm.projector_from(f2), 0.3, 0.7)
        for rho in (pure, mixed):
            t = dm.apply_density(p, rho)
            diag = max(diag, dm.diagonal_deviation(rho, t))
            h = dm.hermiticity_deviation(t)
            if im == 0.0:
                herm_real = max(herm_real, h)
            else:
                herm_complex = min(herm_complex, h)
    results = {"max_diagonal_deviation": diag, "max_hermiticity_deviation_real_gamma": herm_real,
               "min_hermiticity_deviation_complex_gamma": herm_complex}
    checks = {"diagonal_invariant": diag < THRESHOLDS["diagonal_deviation"],
              "real_gamma_hermitian": herm_real < THRESHOLDS["hermitian_preserved"],
              "complex_gamma_non_hermitian": herm_complex > THRESHOLDS["hermitian_broken"]}
    return _checks_report(results, checks, ["diagonal_deviation", "hermitian_preserved", "hermitian_broken"])


EXPERIMENTS: Dict[str, Experiment] = {
    "counterexample": Experiment(
        "counterexample",
        "principal-branch NGT with lambda=3/2 applied twice differs from N_{9/4,0} at arg=3pi/4",
        {"lambda": Key(_finite_float, 1.5, "gauge lambda (nonzero)"),
         "arg1": Key(_finite_float, math.pi / 4, "first test argument (radians)"),
         "arg2": Key(_finite_float, 3 * math.pi / 4, "second test argument (radians)")}),
    "semigroup_sweep": Experiment(
        "semigroup_sweep",
        "principal (|lambda|<=1) and integer classes obey the affine composition law pointwise",
        {**SEED, **_grid_keys(256, -5.0, 5.0),
         "trials": Key(_positive_int, 100, "random parameter pairs per class"),
         "n_fields": Key(_positive_int, 10, "random smooth nonvanishing fields"),
         "log_amp": Key(_positive_float, 0.5, "max |ln|psi|| of the random fields"),
         "gamma_max": Key(_positive_float, 1.0, "bound on |gamma| draws"),
         "integer_max": Key(_positive_int, 4, "bound on |lambda| for the integer class")},
        grid_keys=("n_points", "x_min", "x_max", "boundary")),
    "hydro_group": Experiment(
        "hydro_group",
        "the (A, B) lower-triangular action is a group for every nonzero lambda",
        {**SEED, **_grid_keys(256, -5.0, 5.0),
         "trials": Key(_positive_int, 100, "random parameter pairs"),
         "lambda_max": Key(_positive_float, 3.0, "bound on |lambda| draws"),
         "gamma_max": Key(_positive_float, 2.0, "bound on |gamma| draws")},
        grid_keys=("n_points", "x_min", "x_max", "boundary")),
    "gauge_equivalence": Experiment(
        "gauge_equivalence",
        "N_{1,gamma} maps linear Schrodinger solutions onto Doebner-Goldin solutions",
        {**_grid_keys(512, -15.0, 15.0),
         "dt": Key(_positive_float, 2e-4, "time step of the coarsest level"),
         "steps": Key(_positive_int, 2000, "steps of the coarsest level"),
         "hbar": Key(_positive_float, 1.0, "reduced Planck constant"),
         "mass": Key(_positive_float, 1.0, "particle mass"),
         "potentials": Key(_potentials, ["free", "harmonic"], "comma list: free, harmonic"),
         "gamma0": Key(_float_list, [0.5, 1.0], "comma list of gamma(0) values"),
         "gamma_rate": Key(_float_list, [0.0, 0.3], "comma list of d gamma/dt values"),
         "width": Key(_positive_float, 2.0, "initial Gaussian width"),
         "k0": Key(_finite_float, 1.0, "initial wave number"),
         "x0": Key(_finite_float, 0.0, "initial packet centre"),
         "omega": Key(_finite_float, 0.0, "harmonic frequency (0 -> 1/width^2, a coherent state)"),
         "levels": Key(_positive_int, 2, "refinement levels (dx, dt halved per level)")},
        grid_keys=("n_points", "x_min", "x_max", "boundary"),
        evolution_keys=("dt", "steps", "hbar", "mass")),
    "convexity": Experiment(
        "convexity",
        "transformed mixtures are convex on the diagonal only",
        {**_grid_keys(128, -8.0, 8.0),
         "shift": Key(_finite_float, 1.0, "the two Gaussians sit at +shift and -shift"),
         "p1": Key(_finite_float, 0.5, "weight of the first state"),
         "lambda": Key(_finite_float, 1.0, "gauge lambda"),
         "gamma_re": Key(_finite_float, 1.0, "real part of gamma_c"),
         "gamma_im": Key(_finite_float, 0.0, "imaginary part of gamma_c")},
        grid_keys=("n_points", "x_min", "x_max", "boundary")),
    "hermiticity": Experiment(
        "hermiticity",
        "Hermiticity of transformed density matrices survives iff gamma_c is real",
        {**_grid_keys(128, -8.0, 8.0),
         "center": Key(_finite_float, 1.0, "centre of the asymmetric Gaussian witness"),
         "lambda": Key(_finite_float, 1.0, "gauge lambda"),
         "gamma_real": Key(_finite_float, 0.7, "real gamma_c for the preserved case"),
         "gamma_imag": Key(_finite_float, 1.0, "imaginary gamma_c for the broken case")},
        grid_keys=("n_points", "x_min", "x_max", "boundary")),
    "density_diagonal": Experiment(
        "density_diagonal",
        "density-matrix NGT with complex gamma_c leaves rho(x, x) unchanged",
        {**SEED, **_grid_keys(64, -6.0, 6.0),
         "trials": Key(_positive_int, 50, "random (lambda, gamma_c) draws"),
         "lambda_max": Key(_positive_float, 3.0, "bound on |lambda| draws"),
         "gamma_max": Key(_positive_float, 2.0, "bound on |Re gamma_c| and |Im gamma_c|")},
        grid_keys=("n_points", "x_min", "x_max", "boundary")),
}

RUNNERS = {
    "counterexample": run_counterexample,
    "semigroup_sweep": run_semigroup_sweep,
    "hydro_group": run_hydro_group,
    "gauge_equivalence": run_gauge_equivalence,
    "convexity": run_convexity,
    "hermiticity": run_hermiticity,
    "density_diagonal": run_density_diagonal,
}


# -- config parsing ------------------------------------------------------------

def read_config_file(path) -> Dict[str, str]:
    """Flat ``key = value`` file; blank lines and ``#`` comments ignored."""
    out: Dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


def parse_overrides(items) -> Dict[str, str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_config(path=None, overrides: Optional[Dict[str, Any]] = None,
                 experiment: Optional[str] = None, output_dir=None) -> ExperimentConfig:
    """Resolve a config: schema defaults < file values < explicit overrides."""
    raw: Dict[str, Any] = read_config_file(path) if path is not None else {}
    raw.update(overrides or {})
    name = experiment if experiment is not None else raw.get("experiment")
    raw.pop("experiment", None)
    if name is None:
        raise ConfigError("no experiment given")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    exp = EXPERIMENTS[name]
    unknown = sorted(set(raw) - set(exp.keys))
    if unknown:
        raise ConfigError(f"unknown key(s) for {name}: {', '.join(unknown)}")
    resolved = {}
    for key, spec in exp.keys.items():
        value = raw.get(key, spec.default)
        try:
            resolved[key] = spec.parse(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from exc
    if "x_min" in resolved and not resolved["x_max"] > resolved["x_min"]:
        raise ConfigError("x_max must exceed x_min")
    if "n_points" in resolved and resolved["n_points"] < 8:
        raise ConfigError("n_points must be at least 8")
    grid = {k: resolved.pop(k) for k in exp.grid_keys}
    evolution = {k: resolved.pop(k) for k in exp.evolution_keys}
    seed = resolved.pop("seed", 0)
    return ExperimentConfig(name, resolved, grid, evolution, seed,
                            Path(output_dir) if output_dir is not None else None)


def run(cfg: ExperimentConfig, timestamp: Optional[str] = None) -> dict:
    """Execute an experiment, write report.json (and artifacts) if output_dir is set."""
    out = cfg.output_dir
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    body = RUNNERS[cfg.experiment](cfg, out)
    report = {
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment,
        "claim": EXPERIMENTS[cfg.experiment].claim,
        "config": cfg.to_dict(),
        **body,
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    if out is not None:
        write_json(out / "report.json", _jsonable(report))
    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj
