"""Laser-induced continuum structure in resonant four-wave mixing.

Discrete levels g (ground), m (one-photon resonant with field 1) and two
levels l, n that are coupled to each other and to g through a common
continuum.  The continuum enters only through induced widths ``gamma_ij``,
shifts ``delta_ij`` and their Fano ratios ``q_ij = delta_ij / gamma_ij``;
evaluating those from continuum matrix elements needs atomic-structure data
and is left to the caller.

All returned quantities are ratios to their resonant, field-free values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDenominator, ZeroWidth

DEGENERATE_TOL = 1e-14
Q_KEYS = ("nl", "gl", "ng", "ln", "gn")


def fano_q(delta, gamma):
    """Fano asymmetry ``delta / gamma``; raises :class:`ZeroWidth` for gamma <= 0."""
    if np.any(np.asarray(gamma) <= 0):
        raise ZeroWidth("induced width must be positive for a finite q")
    q = np.asarray(delta, dtype=float) / np.asarray(gamma, dtype=float)
    return q if q.ndim else float(q)


def degeneracy_factors(gamma: dict) -> tuple:
    """``k1..k4`` from the induced widths.

    Each equals one for a nondegenerate (single-channel) continuum, where
    ``gamma_ij`` factorizes as ``a_i a_j``.  ``k2..k4`` are Cauchy-Schwarz
    ratios and drop below one for a degenerate continuum; ``k1`` compares
    three different couplings and has no such bound.
    """
    g = gamma
    return (g["gl"] * g["ln"] / (g["gn"] * g["ll"]),
            g["nl"] * g["ln"] / (g["ll"] * g["nn"]),
            g["gl"] * g["lg"] / (g["gg"] * g["ll"]),
            g["gn"] * g["ng"] / (g["gg"] * g["nn"]))


def saturation_beta(g):
    """``g / (1 + g)``."""
    return g / (1.0 + g)


@dataclass(frozen=True)
class ContinuumCoupling:
    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    g_mn: float = 0.0
    g_ll: float = 0.0
    g_nn: float = 0.0
    q: dict = field(default_factory=dict)
    gamma: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "k4"):
            k = getattr(self, name)
            if not 0.0 <= k <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {k}")
        for name in ("g_mn", "g_ll", "g_nn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        q = {key: 0.0 for key in Q_KEYS}
        for key, d in self.delta.items():
            if key in self.gamma:
                q[key] = fano_q(d, self.gamma[key])
        q.update(self.q)
        object.__setattr__(self, "q", q)

    @property
    def beta_l(self) -> float:
        return saturation_beta(self.g_ll)

    @property
    def beta_n(self) -> float:
        return saturation_beta(self.g_nn)


@dataclass(frozen=True)
class LicsDetunings:
    """Normalized detunings; ``dgm``/``pgm`` are the imaginary parts of the
    one-photon denominators ``D_gm = 1 + i dgm`` and ``p_gm = 1 + i pgm``."""
    x_l: float = 0.0
    x_n: float = 0.0
    y_l: float = 0.0
    y_n: float = 0.0
    dgm: float = 0.0
    pgm: float = 0.0

    @property
    def D_gm(self):
        return 1.0 + 1j * np.asarray(self.dgm)

    @property
    def p_gm(self):
        return 1.0 + 1j * np.asarray(self.pgm)

    @classmethod
    def from_frequencies(cls, w1, w2, w3, w, w_mu, *, w_gm, w_gl, w_gn,
                         Gamma_gm, Gamma_gl, Gamma_gn, gamma_ll=0.0, gamma_nn=0.0,
                         delta_ll=0.0, delta_nn=0.0):
        """Build the normalized detunings from field and transition frequencies.
        ``w`` is the frequency of the field that couples l into the continuum."""
        wl = Gamma_gl + gamma_ll
        wn = Gamma_gn + gamma_nn
        return cls(x_l=(w1 + w2 + w3 - w - w_gl - delta_ll) / wl,
                   x_n=(w1 + w2 - w_gn - delta_nn) / wn,
                   y_l=(w_mu - w - w_gl - delta_ll) / wl,
                   y_n=(w_mu - w3 - w_gn - delta_nn) / wn,
                   dgm=(w1 - w_gm) / Gamma_gm,
                   pgm=(w_mu - w3 - w2 - w_gm) / Gamma_gm)


def _guard(z, what):
    if np.any(np.abs(z) < DEGENERATE_TOL):
        raise DegenerateDenominator(f"{what} vanishes")
    return z


def _suppression(c: ContinuumCoupling, qa, qb, qc, z):
    den = _guard((1 - 1j * qc) * (1 + 1j * np.asarray(z)), "continuum denominator")
    return 1 - c.k1 * c.beta_l * (1 - 1j * qa) * (1 - 1j * qb) / den


def K_factor(c: ContinuumCoupling, d: LicsDetunings):
    q = c.q
    return _suppression(c, q["nl"], q["gl"], q["ng"], d.x_l)


def A_factor(c: ContinuumCoupling, d: LicsDetunings):
    q = c.q
    return _suppression(c, q["ln"], q["gl"], q["gn"], d.y_l)


def _dressed_bracket(c: ContinuumCoupling, zn, zl, denom):
    gnn = c.g_nn
    cont = c.k2 * c.beta_l * c.beta_n * (1 - 1j * c.q["nl"]) ** 2 \
        / _guard(1 + 1j * np.asarray(zl), "1 + i x_l")
    inner = 1 + 1j * np.asarray(zn) + c.g_mn / _guard(denom * (1 + gnn), "D (1 + g_nn)") - cont
    return (1 + gnn) * inner


def X_factor(c: ContinuumCoupling, d: LicsDetunings):
    return _dressed_bracket(c, d.x_n, d.x_l, d.D_gm)


def Y_factor(c: ContinuumCoupling, d: LicsDetunings):
    return _dressed_bracket(c, d.y_n, d.y_l, d.p_gm)


def chi3_ratio(c: ContinuumCoupling, d: LicsDetunings):
    """Resonant third-order susceptibility relative to its bare value."""
    den = _guard(d.D_gm * X_factor(c, d), "D_gm X")
    return K_factor(c, d) / den


def alpha1_ratio(c: ContinuumCoupling, d: LicsDetunings):
    """Absorption of field 1 relative to its undressed resonant value."""
    D = d.D_gm
    dx = _guard(D * X_factor(c, d), "D_gm X")
    return np.real((1 - c.g_mn / dx) / D)


def fano_window(c: ContinuumCoupling, d: LicsDetunings):
    """The ``k3 beta_l (y_l + q_gl)^2 / (1 + y_l^2)`` term; zero at ``y_l = -q_gl``."""
    y = np.asarray(d.y_l)
    return c.k3 * c.beta_l * (y + c.q["gl"]) ** 2 / (1 + y**2)


def alpha_mu_ratio(c: ContinuumCoupling, d: LicsDetunings):
    """Absorption at the generated frequency relative to its bare value."""
    y = _guard(Y_factor(c, d), "Y")
    last = c.k4 * c.g_nn * A_factor(c, d) ** 2 * (1 - 1j * c.q["gn"]) ** 2 / y
    return 1 - c.k3 * c.beta_l + fano_window(c, d) - np.real(last)


def as_flat(c: ContinuumCoupling, d: LicsDetunings) -> dict:
    """Flat float dictionary of every input (the layout used by the
    term-by-term oracle)."""
    out = {"k1": c.k1, "k2": c.k2, "k3": c.k3, "k4": c.k4, "beta_l": c.beta_l,
           "beta_n": c.beta_n, "g_mn": c.g_mn, "g_nn": c.g_nn,
           "x_l": d.x_l, "x_n": d.x_n, "y_l": d.y_l, "y_n": d.y_n,
           "dgm": d.dgm, "pgm": d.pgm}
    out.update({f"q_{k}": float(c.q[k]) for k in Q_KEYS})
    return out
