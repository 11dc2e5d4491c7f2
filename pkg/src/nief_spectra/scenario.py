"""Scenario files: JSON config -> core objects -> tabular results.

A scenario is a JSON object with a ``task`` key and task-specific blocks.
Every task returns a :class:`TaskOutput` (column names, rows, summary dict);
the command-line layer only formats and writes it.  Any problem with the
config itself raises :class:`~nief_spectra.errors.ValidationError`.
"""
from __future__ import annotations

import copy
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dressed, lics, mixing, relaxation_induced as ri, spectra
from .doppler import DopplerConfig
from .errors import ValidationError, Violation
from .model import TOPOLOGIES, FieldSpec, RelaxationSpec, unsaturated_populations, violations

TASKS = ("probe", "mixing", "lics", "cascade", "fwm", "sweep", "selftest")
SWEEPABLE = ("probe", "mixing", "lics", "cascade", "fwm")


@dataclass
class TaskOutput:
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)


def invalid(name, detail):
    return ValidationError([Violation(name, detail)])


# --------------------------------------------------------------------------
# small typed accessors

def _block(cfg, key, required=True):
    val = cfg.get(key)
    if val is None:
        if required:
            raise invalid("MissingBlock", f"config needs a {key!r} object")
        return {}
    if not isinstance(val, dict):
        raise invalid("BadType", f"{key!r} must be an object")
    return val


def _number(val, where):
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise invalid("BadType", f"{where} must be a number, got {val!r}")
    if not math.isfinite(val):
        raise invalid("NonFinite", f"{where} = {val!r}")
    return float(val)


def _numbers(block, where):
    return {str(k): _number(v, f"{where}.{k}") for k, v in block.items()}


def _vector4(val, where, complex_ok=False):
    if not isinstance(val, list) or len(val) != 4:
        raise invalid("BadType", f"{where} must be a list of four entries")
    out = []
    for i, x in enumerate(val):
        if complex_ok and isinstance(x, list):
            if len(x) != 2:
                raise invalid("BadType", f"{where}[{i}] complex entries are [re, im]")
            out.append(complex(_number(x[0], f"{where}[{i}][0]"), _number(x[1], f"{where}[{i}][1]")))
        else:
            out.append(_number(x, f"{where}[{i}]"))
    return tuple(out)


# --------------------------------------------------------------------------
# physics blocks

def build_relaxation(cfg) -> RelaxationSpec:
    block = _block(cfg, "relaxation")
    gt = _numbers(_block(block, "gamma_total"), "relaxation.gamma_total")
    branch = _numbers(_block(block, "branch", required=False), "relaxation.branch")
    pump = _numbers(cfg.get("pumps") or _block(block, "pump", required=False), "pumps")
    if "coherence_halfwidth" in block:
        widths = _numbers(_block(block, "coherence_halfwidth"), "relaxation.coherence_halfwidth")
        try:
            relax = RelaxationSpec(gt, widths, branch, pump)
        except KeyError as exc:
            raise invalid("UnknownCoherence", str(exc)) from None
    else:
        if any(k not in gt for k in "gnml"):
            raise invalid("MissingRate", "gamma_total needs g, n, m and l for natural widths")
        deph = _numbers(_block(block, "dephasing", required=False), "relaxation.dephasing")
        relax = RelaxationSpec.natural(gt, branch, pump, deph)
    mode = block.get("validation", "lenient")
    if mode not in ("lenient", "strict"):
        raise invalid("BadValue", "relaxation.validation must be 'lenient' or 'strict'")
    found = violations(relax, None, mode)
    if found:
        raise ValidationError(found)
    return relax


def build_fields(cfg) -> FieldSpec:
    block = _block(cfg, "fields")
    det = _vector4(block.get("detuning", [0, 0, 0, 0]), "fields.detuning")
    rabi = _vector4(block.get("rabi", [0, 0, 0, 0]), "fields.rabi", complex_ok=True)
    k = _vector4(block.get("wavevector", [0, 0, 0, 0]), "fields.wavevector")
    return FieldSpec(det, rabi, k)


def build_grid(cfg, default=None) -> np.ndarray:
    block = cfg.get("grid", default)
    if not isinstance(block, dict):
        raise invalid("MissingBlock", "config needs a 'grid' object with min, max, points")
    pts = block.get("points")
    if isinstance(pts, bool) or not isinstance(pts, int):
        raise invalid("BadType", "grid.points must be an integer")
    if pts < 2:
        raise invalid("GridTooSmall", f"grid.points = {pts} < 2")
    lo, hi = _number(block.get("min"), "grid.min"), _number(block.get("max"), "grid.max")
    if not hi > lo:
        raise invalid("BadGrid", "grid.max must exceed grid.min")
    spacing = block.get("spacing", "linear")
    if spacing == "linear":
        return np.linspace(lo, hi, pts)
    if spacing == "sinh":
        if lo != -hi:
            raise invalid("BadGrid", "sinh grids are symmetric: min = -max")
        scale = _number(block.get("scale", 1.0), "grid.scale")
        if scale <= 0:
            raise invalid("BadGrid", "grid.scale must be positive")
        return spectra.sinh_grid(scale, hi, pts)
    raise invalid("BadValue", f"grid.spacing {spacing!r} is not 'linear' or 'sinh'")


def build_doppler(cfg):
    block = cfg.get("doppler")
    if block is None:
        return None
    if not isinstance(block, dict):
        raise invalid("BadType", "doppler must be an object")
    kw = {"u": _number(block.get("u"), "doppler.u")}
    for key in ("order", "max_order"):
        if key in block:
            if isinstance(block[key], bool) or not isinstance(block[key], int):
                raise invalid("BadType", f"doppler.{key} must be an integer")
            kw[key] = block[key]
    if "rtol" in block:
        kw["rtol"] = _number(block["rtol"], "doppler.rtol")
    try:
        return DopplerConfig(**kw)
    except ValueError as exc:
        raise invalid("BadDoppler", str(exc)) from None


def _scheme(cfg):
    scheme = cfg.get("scheme", "fig1-double")
    if scheme not in TOPOLOGIES:
        raise invalid("UnknownScheme", f"scheme {scheme!r} not in {TOPOLOGIES}")
    return scheme


def _which(cfg):
    which = cfg.get("probe", "r2")
    if which not in ("r2", "r4"):
        raise invalid("BadValue", "probe must be 'r2' or 'r4'")
    return which


def _clean(x):
    """JSON-safe scalar (NaN and infinities become null)."""
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


# --------------------------------------------------------------------------
# tasks

def auto_sum_rule(relax, fields, pops, sat, which, scheme, points=100001):
    """Sum-rule residual on an automatically chosen wide sinh grid."""
    w = relax.max_width()
    scale = 0.02 * min(relax.coherence_halfwidth.values())
    grid = spectra.sinh_grid(scale, 1e4 * w, points)
    sp = spectra.spectrum(relax, fields, pops, grid, which, scheme, sat=sat)
    idx = 1 if which == "r2" else 3
    return spectra.sum_rule(sp, sat.dr[idx], w)


def run_probe(cfg) -> TaskOutput:
    relax, fields = build_relaxation(cfg), build_fields(cfg)
    grid, which, scheme = build_grid(cfg), _which(cfg), _scheme(cfg)
    dop = build_doppler(cfg)
    pops = unsaturated_populations(relax)
    fe = dressed.effective_fields(fields, scheme)
    sat = dressed.saturated_populations(relax, fe, pops)
    sp = spectra.spectrum(relax, fields, pops, grid, which, scheme, doppler=dop)
    report = spectra.detect_windows(sp, sat, pops, rel_tol=float(cfg.get("window_tol", 1e-6)))
    summary = {
        "probe": which,
        "scheme": scheme,
        "unsaturated_populations": pops.n,
        "saturated_populations": sat.r,
        "population_differences": list(sat.dr),
        "windows": [w.__dict__ for w in report.intervals],
        "window_count": report.count(),
        "gain_count": report.count("gain"),
        "transparency_count": report.count("transparency"),
        "deepest_gain": deepest_gain(sp, pops),
    }
    if fields.rabi[2] == 0 and which == "r4":
        cond = spectra.awi_condition(relax, fe, sat)
        summary["awi_condition"] = {"holds": cond.holds, "margin": cond.margin}
    if dop is None:
        res = auto_sum_rule(relax, fields, pops, sat, which, scheme)
        summary["sum_rule"] = res.__dict__
    rows = np.column_stack([grid, sp.absorption, sp.refraction])
    return TaskOutput(["omega", "absorption", "refraction"], rows, _clean(summary))


def deepest_gain(sp, pops) -> float:
    """Most negative absorption relative to the undriven peak (0 if none)."""
    peak = float(np.max(np.abs(spectra.undriven_reference(sp, pops))))
    low = float(np.min(sp.absorption))
    if peak == 0 or low >= 0:
        return 0.0
    return low / peak


MIXING_KEYS = ("g2", "g3", "x1", "x02", "xs", "y1", "y02", "ys", "C1", "Cs")


def build_mixing(cfg) -> mixing.MixingConfig:
    block = dict(_block(cfg, "mixing"))
    si = block.pop("C1_si", None)
    local = block.pop("local_field", False)
    gen = block.pop("generated_mode", False)
    extra = set(block) - set(MIXING_KEYS)
    if extra:
        raise invalid("UnknownKey", f"mixing has unknown keys {sorted(extra)}")
    kw = {k: _number(v, f"mixing.{k}") for k, v in block.items()}
    if si is not None:
        if not isinstance(si, dict):
            raise invalid("BadType", "mixing.C1_si must be an object")
        kw["C1"] = mixing.local_field_constant(_number(si.get("density"), "C1_si.density"),
                                               _number(si.get("dipole"), "C1_si.dipole"),
                                               _number(si.get("halfwidth"), "C1_si.halfwidth"))
    try:
        m = mixing.MixingConfig(generated_mode=bool(gen), **kw)
    except ValueError as exc:
        raise invalid("BadValue", str(exc)) from None
    return mixing.apply_local_field(m) if local else m


def _grid_variable(cfg, allowed, default):
    var = cfg.get("grid", {}).get("variable", default) if isinstance(cfg.get("grid"), dict) else default
    if var not in allowed:
        raise invalid("BadValue", f"grid.variable {var!r} not in {allowed}")
    return var


def run_mixing(cfg) -> TaskOutput:
    base = build_mixing(cfg)
    var = _grid_variable(cfg, ("x1", "x02", "xs", "y1", "y02", "ys"), "x1")
    grid = build_grid(cfg)
    local = bool(cfg["mixing"].get("local_field", False))
    # the grid scans the bare detuning; the local-field shift is applied on top
    raw = build_mixing({"mixing": {**cfg["mixing"], "local_field": False}})
    rows = []
    for v in grid:
        point = mixing.MixingConfig(**{**raw.__dict__, var: float(v)})
        if local:
            point = mixing.apply_local_field(point)
        r = mixing.dressing_factors(point)
        rows.append([v, r.f1.real, r.f1.imag, r.fs.real, r.fs.imag, r.f.real, r.f.imag,
                     r.chi1_ratio.real, r.chi1_ratio.imag, r.chis_ratio.real, r.chis_ratio.imag,
                     r.chiNL_ratio.real, r.chiNL_ratio.imag, r.power_figure])
    rows = np.array(rows, dtype=float)
    at = mixing.dressing_factors(base)
    f1_abs = np.hypot(rows[:, 1], rows[:, 2])
    summary = {
        "variable": var,
        "local_field": local,
        "point": {"f1": [at.f1.real, at.f1.imag], "fs": [at.fs.real, at.fs.imag],
                  "f": [at.f.real, at.f.imag], "power_figure": at.power_figure},
        "f1_min_position": float(grid[int(np.argmin(f1_abs))]),
        "max_power_figure": float(np.max(rows[:, -1])),
    }
    cols = ["value", "f1_re", "f1_im", "fs_re", "fs_im", "f_re", "f_im", "chi1_re", "chi1_im",
            "chis_re", "chis_im", "chinl_re", "chinl_im", "power_figure"]
    return TaskOutput(cols, rows, _clean(summary))


LICS_COUPLING_KEYS = ("k1", "k2", "k3", "k4", "g_mn", "g_ll", "g_nn")
LICS_DETUNING_KEYS = ("x_l", "x_n", "y_l", "y_n", "dgm", "pgm")


def build_lics(cfg):
    block = _block(cfg, "lics")
    cb = dict(_block(block, "coupling"))
    maps = {}
    for key in ("q", "gamma", "delta"):
        maps[key] = _numbers(cb.pop(key, {}) or {}, f"lics.coupling.{key}")
    extra = set(cb) - set(LICS_COUPLING_KEYS)
    if extra:
        raise invalid("UnknownKey", f"lics.coupling has unknown keys {sorted(extra)}")
    try:
        c = lics.ContinuumCoupling(**{k: _number(v, f"lics.coupling.{k}") for k, v in cb.items()}, **maps)
    except ValueError as exc:
        raise invalid("BadValue", str(exc)) from None
    db = _block(block, "detunings", required=False)
    extra = set(db) - set(LICS_DETUNING_KEYS)
    if extra:
        raise invalid("UnknownKey", f"lics.detunings has unknown keys {sorted(extra)}")
    d = lics.LicsDetunings(**{k: _number(v, f"lics.detunings.{k}") for k, v in db.items()})
    return c, d


def run_lics(cfg) -> TaskOutput:
    c, d = build_lics(cfg)
    var = _grid_variable(cfg, LICS_DETUNING_KEYS, "y_l")
    grid = build_grid(cfg)
    pt = lics.LicsDetunings(**{**d.__dict__, var: grid})
    chi3 = np.broadcast_to(lics.chi3_ratio(c, pt), grid.shape)
    a1 = np.broadcast_to(lics.alpha1_ratio(c, pt), grid.shape)
    amu = np.broadcast_to(lics.alpha_mu_ratio(c, pt), grid.shape)
    rows = np.column_stack([grid, chi3.real, chi3.imag, a1, amu])
    summary = {"variable": var, "q": c.q, "beta_l": c.beta_l, "beta_n": c.beta_n,
               "alpha_mu_min_position": float(grid[int(np.argmin(amu))]),
               "alpha_mu_min": float(np.min(amu))}
    return TaskOutput(["value", "chi3_re", "chi3_im", "alpha1", "alpha_mu"], rows, _clean(summary))


def build_doublet(cfg) -> ri.CascadeDoublet:
    block = _block(cfg, "cascade")
    try:
        A = _numbers(_block(block, "A"), "cascade.A")
        J = _numbers(_block(block, "J"), "cascade.J")
        rho = _numbers(_block(block, "rho", required=False), "cascade.rho")
        lam = block.get("lambda")
        return ri.CascadeDoublet(A=A, J=J, Gamma=_number(block.get("Gamma"), "cascade.Gamma"),
                                 Gamma1=_number(block.get("Gamma1"), "cascade.Gamma1"),
                                 Delta=_number(block.get("Delta", 0.0), "cascade.Delta"), rho=rho,
                                 lam=None if lam is None else _number(lam, "cascade.lambda"))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise invalid("BadCascade", str(exc)) from None


def run_cascade(cfg) -> TaskOutput:
    d = build_doublet(cfg)
    grid = build_grid(cfg)
    ic = ri.interference_coefficients(d)
    alpha = ri.cascade_alpha(d, grid)
    f = ri.f_interference(grid, d.Gamma, d.Gamma1, d.Delta)
    wing, centre = ri.awi_wing_condition(d), ri.awi_center_condition(d)
    summary = {
        "K": ic.K, "C": ic.C, "prefactor": d.prefactor, "N": d.N, "N1": d.N1,
        "wing_condition": {"holds": wing.holds, "margin": wing.margin,
                           "relative_margin": wing.relative_margin},
        "center_condition": {"holds": centre.holds, "margin": centre.margin,
                             "relative_margin": centre.relative_margin},
        "gain_points": int(np.sum(alpha < 0)),
    }
    return TaskOutput(["omega", "alpha", "f"], np.column_stack([grid, alpha, f]), _clean(summary))


def build_fwm(cfg) -> ri.FwmRates:
    block = _block(cfg, "fwm")
    o1 = _number(block.get("Omega1", 0.0), "fwm.Omega1")
    try:
        if "spontaneous" in block:
            sp = _block(block, "spontaneous")
            return ri.FwmRates.spontaneous(
                _number(sp.get("Gamma_n"), "fwm.spontaneous.Gamma_n"),
                _number(sp.get("Gamma_n1"), "fwm.spontaneous.Gamma_n1"),
                _number(sp.get("Gamma_g", 0.0), "fwm.spontaneous.Gamma_g"),
                _number(sp.get("dephasing", 0.0), "fwm.spontaneous.dephasing"), Omega1=o1)
        return ri.FwmRates(_number(block.get("Gamma_ng"), "fwm.Gamma_ng"),
                           _number(block.get("Gamma_n1g"), "fwm.Gamma_n1g"),
                           _number(block.get("Gamma_nn1"), "fwm.Gamma_nn1"), Omega1=o1)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise invalid("BadRates", str(exc)) from None


def run_fwm(cfg) -> TaskOutput:
    base = build_fwm(cfg)
    grid = build_grid(cfg)
    rows = []
    for om in grid:
        r = ri.FwmRates(base.Gamma_ng, base.Gamma_n1g, base.Gamma_nn1,
                        Omega1=base.Omega1, Omega2=base.Omega1 + om, Omega=om)
        coh, br = ri.fwm_coherence(r), ri.fwm_bracket(r)
        rows.append([om, coh.real, coh.imag, br.real, br.imag])
    rows = np.array(rows)
    summary = {"resonance_amplitude": ri.collision_resonance_amplitude(base),
               "Gamma_ng": base.Gamma_ng, "Gamma_n1g": base.Gamma_n1g, "Gamma_nn1": base.Gamma_nn1,
               "max_bracket_deviation": float(np.max(np.hypot(rows[:, 3] - 1, rows[:, 4])))}
    return TaskOutput(["omega", "coherence_re", "coherence_im", "bracket_re", "bracket_im"],
                      rows, _clean(summary))


# --------------------------------------------------------------------------
# sweeps

_PATH_TOKEN = re.compile(r"([^.\[\]]+)|\[(\d+)\]")


def parse_path(path: str):
    if not isinstance(path, str) or not path:
        raise invalid("BadSweepPath", "sweep.parameter must be a nonempty string")
    tokens = []
    pos = 0
    for m in _PATH_TOKEN.finditer(path):
        gap = path[pos:m.start()]
        if gap not in ("", "."):
            raise invalid("BadSweepPath", f"cannot parse {path!r}")
        tokens.append(m.group(1) if m.group(1) is not None else int(m.group(2)))
        pos = m.end()
    if pos != len(path):
        raise invalid("BadSweepPath", f"cannot parse {path!r}")
    return tokens


def set_path(cfg, path, value):
    """Copy of ``cfg`` with the existing scalar at ``path`` replaced."""
    tokens = parse_path(path)
    out = copy.deepcopy(cfg)
    node = out
    for tok in tokens[:-1]:
        try:
            node = node[tok]
        except (KeyError, IndexError, TypeError):
            raise invalid("BadSweepPath", f"{path!r} does not name an existing field") from None
    last = tokens[-1]
    try:
        current = node[last]
    except (KeyError, IndexError, TypeError):
        raise invalid("BadSweepPath", f"{path!r} does not name an existing field") from None
    if isinstance(current, bool) or not isinstance(current, (int, float)):
        raise invalid("BadSweepPath", f"{path!r} is not a scalar number")
    node[last] = value
    return out


SWEEP_COLUMNS = ["value", "window_count", "gain_count", "deepest_gain", "sum_rule_residual",
                 "power_figure", "f1_min_position"]


def _sweep_row(base_task, cfg, value):
    out = TASK_RUNNERS[base_task](cfg)
    s = out.summary
    nan = float("nan")
    if base_task == "probe":
        res = s.get("sum_rule", {}) or {}
        return [value, s["window_count"], s["gain_count"], s["deepest_gain"],
                nan if res.get("rel_error") is None else res["rel_error"], nan, nan]
    if base_task == "mixing":
        return [value, nan, nan, nan, nan, s["point"]["power_figure"], s["f1_min_position"]]
    if base_task == "cascade":
        return [value, nan, s["gain_points"], nan, nan, nan, nan]
    return [value, nan, nan, nan, nan, nan, nan]


def run_sweep(cfg, threads=1) -> TaskOutput:
    block = _block(cfg, "sweep")
    base_task = block.get("task", "probe")
    if base_task not in SWEEPABLE:
        raise invalid("BadValue", f"sweep.task {base_task!r} not in {SWEEPABLE}")
    values = block.get("values")
    if not isinstance(values, list) or not values:
        raise invalid("EmptySweep", "sweep.values must be a nonempty list")
    values = [_number(v, f"sweep.values[{i}]") for i, v in enumerate(values)]
    path = block.get("parameter")
    configs = [set_path(cfg, path, v) for v in values]
    # validate every point before computing anything
    for c in configs:
        TASK_VALIDATORS[base_task](c)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda cv: _sweep_row(base_task, *cv), zip(configs, values)))
    else:
        rows = [_sweep_row(base_task, c, v) for c, v in zip(configs, values)]
    rows = np.array(rows, dtype=float)
    summary = {"parameter": path, "task": base_task, "points": len(values)}
    if base_task == "probe":
        counts = rows[:, 1]
        change = [i for i in range(1, len(counts)) if counts[i] != counts[i - 1]]
        summary["window_count_changes_at"] = [values[i] for i in change]
    return TaskOutput(SWEEP_COLUMNS, rows, _clean(summary))


def run_selftest(cfg, threads=1, seed=0) -> TaskOutput:
    from . import checks

    block = cfg.get("selftest") or {}
    if not isinstance(block, dict):
        raise invalid("BadType", "selftest must be an object")
    names = block.get("checks")
    if names is not None and (not isinstance(names, list) or set(names) - set(checks.SUITE)):
        raise invalid("BadValue", f"selftest.checks must be a list drawn from {sorted(checks.SUITE)}")
    quick = bool(block.get("quick", True))
    chosen = [n for n in checks.SUITE if names is None or n in names]

    def one(name):
        kw = dict(checks.QUICK[name]) if quick else {}
        return checks.SUITE[name](seed=seed, **kw)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, chosen))
    else:
        results = [one(n) for n in chosen]
    rows = [[r.name, int(r.passed), r.worst, r.tolerance] for r in results]
    summary = {"seed": seed, "quick": quick, "all_passed": all(r.passed for r in results),
               "results": [{"check": n, "name": r.name, "passed": r.passed, "worst": r.worst,
                            "tolerance": r.tolerance, "detail": r.detail}
                           for n, r in zip(chosen, results)]}
    return TaskOutput(["check", "passed", "worst", "tolerance"], rows, _clean(summary))


def _validate_probe(cfg):
    build_relaxation(cfg), build_fields(cfg), build_grid(cfg), _which(cfg), _scheme(cfg)
    build_doppler(cfg)


TASK_RUNNERS = {"probe": run_probe, "mixing": run_mixing, "lics": run_lics,
                "cascade": run_cascade, "fwm": run_fwm}
TASK_VALIDATORS = {
    "probe": _validate_probe,
    "mixing": lambda c: (build_mixing(c), build_grid(c), _grid_variable(c, ("x1", "x02", "xs", "y1", "y02", "ys"), "x1")),
    "lics": lambda c: (build_lics(c), build_grid(c), _grid_variable(c, LICS_DETUNING_KEYS, "y_l")),
    "cascade": lambda c: (build_doublet(c), build_grid(c)),
    "fwm": lambda c: (build_fwm(c), build_grid(c)),
}


def validate_config(cfg, threads=1):
    """Schema-level checks that run before any computation."""
    if not isinstance(cfg, dict):
        raise invalid("BadType", "config must be a JSON object")
    task = cfg.get("task")
    if task not in TASKS:
        raise invalid("UnknownTask", f"task {task!r} not in {TASKS}")
    if task in TASK_VALIDATORS:
        TASK_VALIDATORS[task](cfg)
    return task


def run_task(cfg, threads=1, seed=0) -> TaskOutput:
    task = validate_config(cfg)
    if task == "sweep":
        return run_sweep(cfg, threads)
    if task == "selftest":
        return run_selftest(cfg, threads, seed)
    return TASK_RUNNERS[task](cfg)
