"""Triple-resonance sum-frequency mixing dressed by two strong fields.

Ladder 0-1-2-3: a weak field drives 0-1, strong fields drive 1-2 and 2-3
(saturation parameters ``g2``, ``g3``) and the sum frequency is emitted or
probed on 0-3.  Detunings are normalized to the halfwidth of their own
transition.  ``x`` detunings belong to the chain that starts from the 0-1
field, ``y`` detunings to the chain that starts from the 0-3 field; for a
generated (not externally probed) sum frequency the two coincide.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDenominator

DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class MixingConfig:
    g2: float = 0.0
    g3: float = 0.0
    x1: float = 0.0
    x02: float = 0.0
    xs: float = 0.0
    y1: float = 0.0
    y02: float = 0.0
    ys: float = 0.0
    generated_mode: bool = False
    C1: float = 0.0
    Cs: float = 0.0

    def __post_init__(self):
        if self.g2 < 0 or self.g3 < 0:
            raise ValueError("saturation parameters must be nonnegative")

    def branch_detunings(self):
        """``(x1, x02, xs), (y1, y02, ys)`` with the generated-mode tie applied."""
        xs = (self.x1, self.x02, self.xs)
        ys = xs if self.generated_mode else (self.y1, self.y02, self.ys)
        return xs, ys


@dataclass(frozen=True)
class MixingResult:
    f1: complex
    fs: complex
    f: complex
    chi1_ratio: complex
    chis_ratio: complex
    chiNL_ratio: complex
    power_figure: float


def _inv(z, what):
    if np.any(np.abs(z) < DEGENERATE_TOL):
        raise DegenerateDenominator(f"{what} vanishes")
    return 1.0 / z


def dressing_factors(cfg: MixingConfig) -> MixingResult:
    (x1, x02, xs), (y1, y02, ys) = cfg.branch_detunings()
    p01, p02, p03 = 1 + 1j * np.asarray(x1), 1 + 1j * np.asarray(x02), 1 + 1j * np.asarray(xs)
    d01, d02, d03 = 1 + 1j * np.asarray(y1), 1 + 1j * np.asarray(y02), 1 + 1j * np.asarray(ys)
    g2, g3 = cfg.g2, cfg.g3

    inner1 = 1 + g3 * _inv(p02 * d03, "P02 D03")
    f1 = _inv(1 + g2 * _inv(p01 * p02 * inner1, "f1 inner"), "f1")
    inners = 1 + g2 * _inv(d02 * d01, "D02 D01")
    fs = _inv(1 + g3 * _inv(p03 * d02 * inners, "fs inner"), "fs")
    # expanded form of f1 / (1 + g3/(D03 P02)); reduces to the symmetric
    # expression in generated mode, where D = P
    f = _inv(1 + g2 * _inv(p01 * p02, "P01 P02") + g3 * _inv(d03 * p02, "D03 P02"), "f")

    chi1 = f1 / p01
    chis = fs / p03
    chinl = f / (p01 * p02 * d03)
    power = g2 * g3 * np.abs(chinl) ** 2
    return MixingResult(f1, fs, f, chi1, chis, chinl, power)


def apply_local_field(cfg: MixingConfig) -> MixingConfig:
    """Lorentz-Lorenz red shift of the one-photon resonances.

    Only the one-photon detunings ``x1`` and ``xs`` move; the two-photon
    detuning between excited states is untouched.  The shift constants are
    zeroed in the returned config so the call is not applied twice.
    """
    return replace(cfg, x1=cfg.x1 + cfg.C1, xs=cfg.xs + cfg.Cs, C1=0.0, Cs=0.0)


def local_field_constant(density, dipole, halfwidth, hbar=1.054571817e-34,
                         epsilon0=8.8541878128e-12):
    """``N |d|^2 / (3 eps0 hbar Gamma)`` in SI units (density in m^-3, dipole
    in C m, halfwidth in rad/s); the result is dimensionless."""
    return density * abs(dipole) ** 2 / (3 * epsilon0 * hbar * halfwidth)


def resonance_enhancement(x_off, branch: str = "x1") -> float:
    """Gain in ``|chi_NL|^2`` from tuning one undressed resonance from
    ``x_off`` linewidths onto line center."""
    on = dressing_factors(MixingConfig(generated_mode=True)).chiNL_ratio
    off = dressing_factors(MixingConfig(generated_mode=True, **{branch: x_off})).chiNL_ratio
    return float(np.abs(on) ** 2 / np.abs(off) ** 2)


def total_enhancement(x_off) -> float:
    """All three resonances detuned by ``x_off`` at once versus all on."""
    on = dressing_factors(MixingConfig(generated_mode=True)).chiNL_ratio
    cfg = MixingConfig(x1=x_off, x02=x_off, xs=x_off, generated_mode=True)
    off = dressing_factors(cfg).chiNL_ratio
    return float(np.abs(on) ** 2 / np.abs(off) ** 2)
