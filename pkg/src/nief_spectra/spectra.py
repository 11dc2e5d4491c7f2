"""Probe spectra, sum rule, asymptotes, gain threshold and window detection.

The normalized response of probe k is ``-i r_k / G_k``; its real part is the
absorption (negative means gain) and its imaginary part the refraction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import dressed
from .errors import GridTooNarrow, ZeroReference
from .model import FieldSpec, Populations, RelaxationSpec, unsaturated_populations

# Integral of a unit-area-normalized Lorentzian Gamma/(Gamma^2 + x^2) over the
# real line is pi; the sum rule reads (1/pi) * integral = population difference.
SUM_RULE_NORM = 1.0 / np.pi
MIN_SPAN_RATIO = 1e3
TAIL_FRACTION = 0.1

_PROBE = {"r2": (2, "ng", 1), "r4": (4, "lm", 3)}  # detuning index, width, dr index


@dataclass(frozen=True)
class ComplexSpectrum:
    grid: np.ndarray
    response: np.ndarray
    which: str = "r2"
    halfwidth: float = 1.0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        resp = np.asarray(self.response, dtype=complex)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("grid must be a nonempty 1-d array")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if resp.shape != grid.shape:
            raise ValueError("response length must equal grid length")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "response", resp)

    @property
    def absorption(self) -> np.ndarray:
        return self.response.real

    @property
    def refraction(self) -> np.ndarray:
        return self.response.imag


def _probe_fields(fields: FieldSpec, which: str, values) -> FieldSpec:
    return fields.with_detuning(_PROBE[which][0], values)


def response_at(relax: RelaxationSpec, fields: FieldSpec, pops: Populations,
                which: str = "r2", scheme: str = "fig1-double", sat=None):
    """Normalized response for the detunings in ``fields`` (may be arrays)."""
    fe = dressed.effective_fields(fields, scheme)
    if sat is None:
        sat = dressed.saturated_populations(relax, fe, pops)
    return dressed.normalized_response(relax, fe, sat, which)


def spectrum(relax: RelaxationSpec, fields: FieldSpec, pops: Populations, grid,
             which: str = "r2", scheme: str = "fig1-double", doppler=None,
             sat=None) -> ComplexSpectrum:
    """Probe response over a grid of probe detunings.

    ``sat`` pins the dressed populations (handy for comparing shapes at equal
    populations); ``doppler`` is a :class:`~nief_spectra.doppler.DopplerConfig`
    and switches on Maxwell averaging.
    """
    grid = np.asarray(grid, dtype=float)
    width = relax.width(_PROBE[which][1])
    if doppler is None:
        resp = response_at(relax, _probe_fields(fields, which, grid), pops, which, scheme, sat)
        return ComplexSpectrum(grid, np.broadcast_to(resp, grid.shape).copy(), which, width)

    from .doppler import shifted_fields, velocity_average

    k_probe = fields.wavevector[_PROBE[which][0] - 1]

    def at_velocity(v):
        moved = shifted_fields(fields, v)
        moved = _probe_fields(moved, which, grid - k_probe * v)
        return np.broadcast_to(response_at(relax, moved, pops, which, scheme, sat), grid.shape)

    resp = velocity_average(at_velocity, doppler)
    return ComplexSpectrum(grid, np.asarray(resp), which, width)


def sinh_grid(scale: float, half_span: float, points: int) -> np.ndarray:
    """Symmetric grid dense near zero (spacing ~scale) and sparse in the wings."""
    t = np.linspace(-np.arcsinh(half_span / scale), np.arcsinh(half_span / scale), points)
    grid = scale * np.sinh(t)
    grid[points // 2] = 0.0 if points % 2 else grid[points // 2]
    return grid


@dataclass(frozen=True)
class SumRuleResult:
    integral: float
    expected: float
    rel_error: float


def _tail(grid, values, side):
    edge = grid[-1] if side > 0 else grid[0]
    mask = grid >= (1 - TAIL_FRACTION) * edge if side > 0 else grid <= (1 - TAIL_FRACTION) * edge
    x, y = grid[mask], values[mask]
    basis = 1.0 / x**2
    c = float(np.dot(basis, y) / np.dot(basis, basis))
    return c / abs(edge)


def sum_rule(spec: ComplexSpectrum, expected: float, max_linewidth: float) -> SumRuleResult:
    """Integrated absorption (trapezoid plus ``c/x^2`` tails) against the
    population difference it must reproduce."""
    grid = spec.grid
    span = min(-grid[0], grid[-1])
    if span < MIN_SPAN_RATIO * max_linewidth:
        raise GridTooNarrow(f"half-span {span:g} < {MIN_SPAN_RATIO:g} x linewidth {max_linewidth:g}")
    a = spec.absorption
    total = np.trapezoid(a, grid) + _tail(grid, a, +1) + _tail(grid, a, -1)
    integral = float(SUM_RULE_NORM * total)
    rel = abs(integral - expected) / max(abs(expected), 1e-12)
    return SumRuleResult(integral, float(expected), rel)


def _reference_dn4(relax):
    dn4 = unsaturated_populations(relax).dn[3]
    if dn4 == 0:
        raise ZeroReference("unsaturated l-m population difference is zero")
    return dn4


def normalized_alpha4(relax: RelaxationSpec, fields: FieldSpec, sat, omega4):
    """Probe-4 absorption with field 3 off, relative to its undriven peak."""
    if fields.rabi[2] != 0:
        raise ValueError("normalized_alpha4 assumes field 3 is off")
    dn4 = _reference_dn4(relax)
    f4 = fields.with_detuning(4, np.asarray(omega4, dtype=float))
    d = dressed.denominators(relax, f4)
    cf = dressed.coupling_factors(relax, f4, d)
    g1, g4 = cf.g[0], cf.g[3]
    dr1, dr4 = sat.dr[0], sat.dr[3]
    w4 = relax.width("lm")
    return np.real(w4 / d.p4 * (dr4 - g1 * dr1) / (dn4 * (1 + g4)))


def raman_asymptote(relax: RelaxationSpec, fields: FieldSpec, sat, omega4):
    """Far-detuned form: Lorentzian wing plus the Raman term driven by
    ``r_m - r_g``."""
    omega4 = np.asarray(omega4, dtype=float)
    n = unsaturated_populations(relax).n
    r = sat.r
    w_lm, w_gm = relax.width("lm"), relax.width("gm")
    o1 = fields.detuning[0]
    ref = n["l"] - n["m"]
    wing = w_lm**2 * (r["l"] - r["m"]) / (ref * omega4**2)
    raman = (w_gm * w_lm / (w_gm**2 + (omega4 - o1) ** 2)
             * abs(fields.rabi[0]) ** 2 * (r["m"] - r["g"]) / (omega4**2 * ref))
    return wing - raman


def raman_terms(relax, fields, sat, omega4):
    """The two terms of :func:`raman_asymptote` separately (wing, Raman)."""
    wing = raman_asymptote(relax, fields.with_rabi(1, 0.0), sat, omega4)
    return wing, wing - raman_asymptote(relax, fields, sat, omega4)


@dataclass(frozen=True)
class Condition:
    holds: bool
    margin: float


def awi_condition(relax: RelaxationSpec, fields: FieldSpec, sat) -> Condition:
    """Gain on l-m at exact resonance; margin >= 0 means gain."""
    r = sat.r
    s1 = abs(fields.rabi[0]) ** 2
    margin = s1 * (r["l"] - r["g"]) / (relax.width("lg") * relax.width("gm")) - (r["l"] - r["m"])
    margin = float(margin)
    return Condition(margin >= 0, margin)


def resonant_alpha4(relax: RelaxationSpec, fields: FieldSpec, rabi_sq: float) -> float:
    """Resonant normalized probe-4 absorption at ``|G1|^2 = rabi_sq``."""
    f = FieldSpec((0.0, fields.detuning[1], fields.detuning[2], 0.0),
                  (np.sqrt(rabi_sq), fields.rabi[1], 0.0, fields.rabi[3]), fields.wavevector)
    sat = dressed.saturated_populations(relax, f, unsaturated_populations(relax))
    return float(normalized_alpha4(relax, f, sat, 0.0))


def gain_threshold(relax: RelaxationSpec, fields: FieldSpec, max_rabi_sq: float = 1e4,
                   points: int = 400) -> float | None:
    """Smallest ``|G1|^2`` at which resonant probe-4 absorption turns into gain.

    A log-spaced scan brackets the sign change, ``brentq`` refines it.
    Returns ``None`` if no crossing exists below ``max_rabi_sq``.
    """
    scan = np.concatenate([[0.0], np.geomspace(1e-6, max_rabi_sq, points)])
    vals = [resonant_alpha4(relax, fields, s) for s in scan]
    for lo, hi, a, b in zip(scan[:-1], scan[1:], vals[:-1], vals[1:]):
        if a > 0 >= b:
            return optimize.brentq(lambda s: resonant_alpha4(relax, fields, s), lo, hi,
                                   xtol=1e-14, rtol=1e-13)
    return None


@dataclass(frozen=True)
class Window:
    lo: float
    hi: float
    kind: str
    classification: str
    depth: float


@dataclass(frozen=True)
class WindowReport:
    intervals: list = field(default_factory=list)

    def count(self, kind: str | None = None) -> int:
        return sum(1 for w in self.intervals if kind is None or w.kind == kind)


def _runs(mask):
    runs, start = [], None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def undriven_reference(spec: ComplexSpectrum, pops: Populations) -> np.ndarray:
    dn = pops.dn[_PROBE[spec.which][2]]
    w = spec.halfwidth
    return dn * w / (w**2 + spec.grid**2)


def detect_windows(spec: ComplexSpectrum, sat, pops: Populations, rel_tol: float = 1e-6,
                   reference=None) -> WindowReport:
    """Gain and transparency intervals of a probe spectrum.

    Gain: maximal runs with absorption below ``-tol``; called ``AWI`` when the
    probe transition's dressed population difference is positive (not
    inverted), ``inverted`` otherwise.  Transparency: runs with
    ``|absorption| < tol`` where the undriven line would exceed ``10 tol``,
    except runs touching a gain interval (those are its zero crossings).
    ``tol`` is ``rel_tol`` times the undriven peak.
    """
    ref = undriven_reference(spec, pops) if reference is None else np.asarray(reference)
    peak = float(np.max(np.abs(ref)))
    if peak == 0:
        return WindowReport([])
    tol = rel_tol * peak
    a = spec.absorption
    dr = np.asarray(sat.dr[_PROBE[spec.which][2]])
    grid = spec.grid

    gain_runs = _runs(a < -tol)
    gain_idx = set()
    out = []
    for i, j in gain_runs:
        gain_idx.update(range(i, j + 1))
        noninverted = bool(np.all(dr > 0))
        out.append(Window(float(grid[i]), float(grid[j]), "gain",
                          "AWI" if noninverted else "inverted",
                          float(a[i:j + 1].min() / peak)))
    for i, j in _runs((np.abs(a) < tol) & (ref > 10 * tol)):
        if (i - 1) in gain_idx or (j + 1) in gain_idx:
            continue
        depth = float(np.max(ref[i:j + 1] - a[i:j + 1]) / peak)
        out.append(Window(float(grid[i]), float(grid[j]), "transparency", "EIT-like", depth))
    out.sort(key=lambda w: w.lo)
    return WindowReport(out)
