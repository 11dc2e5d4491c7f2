"""Interference produced by relaxation alone.

Two pieces:

* a spontaneous cascade m1 -> {m, n1} -> n in which the two emission
  channels of a near-degenerate doublet interfere through the vacuum field;
  the absorption lineshape around omega_mn then carries a zero-area
  interference term weighted by an angular factor ``K`` (a Wigner 6j symbol)
  and a rate factor ``C``.  Depending on sign and size this term gives
  amplification without inversion in the wings or at line center.
* the driving coherence of a four-wave mixing process whose Omega = 0
  resonance cancels exactly for purely radiative widths and is restored by
  collisional dephasing.

Angular momenta are handled internally as doubled integers so that
triangle and parity tests are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import NonHalfInteger, ZeroReferenceA

CASCADE_TRANSITIONS = (("m", "n"), ("m1", "n1"), ("m1", "m"), ("n1", "n"))


def _twice(j) -> int:
    try:
        t = 2 * Fraction(j)
    except (TypeError, ValueError):
        raise NonHalfInteger(f"{j!r} is not a number") from None
    if t.denominator != 1 or t < 0:
        raise NonHalfInteger(f"{j!r} is not a nonnegative half-integer")
    return int(t)


def _triangle(a, b, c) -> bool:
    # doubled arguments: |a-b| <= c <= a+b and a+b+c even
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _delta(a, b, c) -> Fraction:
    f = math.factorial
    return Fraction(f((a + b - c) // 2) * f((a - b + c) // 2) * f((-a + b + c) // 2),
                    f((a + b + c) // 2 + 1))


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}`` by the Racah single sum."""
    a, b, c, d, e, g = (_twice(j) for j in (j1, j2, j3, j4, j5, j6))
    triads = ((a, b, c), (a, e, g), (d, b, g), (d, e, c))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    sums = [sum(t) // 2 for t in triads]
    quads = ((a + b + d + e) // 2, (a + c + d + g) // 2, (b + c + e + g) // 2)
    f = math.factorial
    total = 0
    for z in range(max(sums), min(quads) + 1):
        den = f(quads[0] - z) * f(quads[1] - z) * f(quads[2] - z)
        for s in sums:
            den *= f(z - s)
        total += (-1) ** z * Fraction(f(z + 1), den)
    pref = Fraction(1)
    for t in triads:
        pref *= _delta(*t)
    # sqrt of an exact rational, done in floating point once at the end
    return float(total) * math.sqrt(float(pref))


def dipole_allowed(ja, jb) -> bool:
    """``|ja - jb| <= 1 <= ja + jb`` with an integer ``ja - jb``."""
    a, b = _twice(ja), _twice(jb)
    return abs(a - b) <= 2 <= a + b and (a - b) % 2 == 0


@dataclass(frozen=True)
class CascadeDoublet:
    A: dict
    J: dict
    Gamma: float
    Gamma1: float
    Delta: float = 0.0
    rho: dict = field(default_factory=dict)
    lam: float | None = None

    def __post_init__(self):
        for key in ("mn", "m1n1", "m1m", "n1n"):
            if self.A.get(key, -1) < 0:
                raise ValueError(f"Einstein coefficient A[{key}] missing or negative")
        if self.Gamma <= 0 or self.Gamma1 <= 0:
            raise ValueError("line halfwidths must be positive")
        for a, b in CASCADE_TRANSITIONS:
            if not dipole_allowed(self.J[a], self.J[b]):
                raise ValueError(f"transition {a}-{b} is not dipole allowed")

    @property
    def N(self) -> float:
        """``(2J_m + 1)(rho_n - rho_m)``."""
        return (2 * self.J["m"] + 1) * (self.rho.get("n", 0.0) - self.rho.get("m", 0.0))

    @property
    def N1(self) -> float:
        """``(2J_m1 + 1)(rho_n1 - rho_m1)``."""
        return (2 * self.J["m1"] + 1) * (self.rho.get("n1", 0.0) - self.rho.get("m1", 0.0))

    @property
    def prefactor(self) -> float:
        """``lambda^2 / 4 pi``, or 1 when no wavelength is given."""
        return 1.0 if self.lam is None else self.lam**2 / (4 * np.pi)


@dataclass(frozen=True)
class Interference:
    K: float
    C: float


def angular_factor(Jm, Jn, Jm1, Jn1) -> float:
    tm, tn1 = _twice(Jm), _twice(Jn1)
    sign = -1 if ((tm + tn1) // 2) % 2 else 1
    return sign * math.sqrt((tm + 1) * (tn1 + 1)) * wigner6j(Jm, Jn, 1, Jn1, Jm1, 1)


def interference_coefficients(d: CascadeDoublet) -> Interference:
    if d.A["m1n1"] <= 0:
        raise ZeroReferenceA("A[m1n1] must be positive")
    C = math.sqrt(d.A["m1m"] * d.A["n1n"] * d.A["mn"] / d.A["m1n1"])
    K = angular_factor(d.J["m"], d.J["n"], d.J["m1"], d.J["n1"])
    return Interference(K, C)


def f_interference(Omega, Gamma, Gamma1, Delta=0.0):
    """Zero-area interference profile, equal to 1 at line center for Delta = 0."""
    O = np.asarray(Omega, dtype=float)
    out = Gamma * Gamma1 * (Gamma * Gamma1 - O * (O - Delta)) \
        / ((Gamma**2 + O**2) * (Gamma1**2 + (O - Delta) ** 2))
    return out if out.ndim else float(out)


def f_integral(Gamma, Gamma1, Delta=0.0, span_ratio=1e4) -> float:
    """Integral of :func:`f_interference` over the real line: adaptive
    quadrature on ``[-L, L]`` plus the analytic ``-Gamma Gamma1 / Omega^2``
    tails beyond."""
    L = span_ratio * max(Gamma, Gamma1, abs(Delta))
    brk = sorted({-L, 0.0, float(Delta), L})
    total = 0.0
    for lo, hi in zip(brk[:-1], brk[1:]):
        total += integrate.quad(f_interference, lo, hi, args=(Gamma, Gamma1, Delta),
                                epsabs=1e-13, epsrel=1e-12, limit=500)[0]
    return total - 2 * Gamma * Gamma1 / L


def cascade_bracket(d: CascadeDoublet, Omega):
    """Absorption lineshape without the ``lambda^2/4pi`` prefactor."""
    ic = interference_coefficients(d)
    O = np.asarray(Omega, dtype=float)
    G, G1 = d.Gamma, d.Gamma1
    first = d.N * d.A["mn"] * G / (G**2 + O**2)
    second = d.N1 * d.A["m1n1"] * (G1 / (G1**2 + (O - d.Delta) ** 2)
                                   + ic.K * ic.C / (G * G1) * f_interference(O, G, G1, d.Delta))
    return first + second


def cascade_alpha(d: CascadeDoublet, Omega):
    return d.prefactor * cascade_bracket(d, Omega)


def cascade_wing(d: CascadeDoublet, Omega):
    """Leading far-wing form, valid for ``|Omega| >> Delta, Gamma, Gamma1``."""
    ic = interference_coefficients(d)
    O = np.asarray(Omega, dtype=float)
    return d.prefactor / O**2 * (d.N * d.A["mn"] * d.Gamma
                                 + d.N1 * d.A["m1n1"] * (d.Gamma1 - ic.K * ic.C))


@dataclass(frozen=True)
class AwiCondition:
    holds: bool
    margin: float
    lhs: float
    rhs: float

    @property
    def relative_margin(self) -> float:
        scale = abs(self.lhs) + abs(self.rhs)
        return self.margin / scale if scale else 0.0


def awi_wing_condition(d: CascadeDoublet) -> AwiCondition:
    """Gain in the far wings: ``K > 0`` and
    ``(KC/Gamma1 - 1) N1 A_m1n1 Gamma1 > N A_mn Gamma``."""
    ic = interference_coefficients(d)
    lhs = (ic.K * ic.C / d.Gamma1 - 1) * d.N1 * d.A["m1n1"] * d.Gamma1
    rhs = d.N * d.A["mn"] * d.Gamma
    margin = lhs - rhs
    return AwiCondition(bool(ic.K > 0 and margin > 0), float(margin), float(lhs), float(rhs))


def awi_center_condition(d: CascadeDoublet) -> AwiCondition:
    """Gain at line center: ``K <= 0``, ``Delta = 0`` and
    ``(|K|C/Gamma - 1) N1 A_m1n1 Gamma > N A_mn Gamma1``."""
    ic = interference_coefficients(d)
    lhs = (abs(ic.K) * ic.C / d.Gamma - 1) * d.N1 * d.A["m1n1"] * d.Gamma
    rhs = d.N * d.A["mn"] * d.Gamma1
    margin = lhs - rhs
    holds = bool(ic.K <= 0 and d.Delta == 0 and margin > 0)
    return AwiCondition(holds, float(margin), float(lhs), float(rhs))


# --- collision-induced four-wave mixing ------------------------------------

@dataclass(frozen=True)
class FwmRates:
    Gamma_ng: float
    Gamma_n1g: float
    Gamma_nn1: float
    Omega1: float = 0.0
    Omega2: float = 0.0
    Omega: float = 0.0

    def __post_init__(self):
        if min(self.Gamma_ng, self.Gamma_n1g, self.Gamma_nn1) <= 0:
            raise ValueError("coherence halfwidths must be positive")

    @classmethod
    def spontaneous(cls, Gamma_n, Gamma_n1, Gamma_g=0.0, dephasing=0.0, **detunings):
        """Halfwidths ``(Gamma_i + Gamma_j)/2`` from level decay rates, plus an
        optional collisional dephasing of the n-n' coherence."""
        return cls((Gamma_n + Gamma_g) / 2, (Gamma_n1 + Gamma_g) / 2,
                   (Gamma_n + Gamma_n1) / 2 + dephasing, **detunings)


def collision_resonance_amplitude(rates: FwmRates) -> float:
    """``Gamma_nn' - Gamma_n'g - Gamma_ng``; zero for purely radiative widths
    with a stable lower level."""
    return rates.Gamma_nn1 - rates.Gamma_n1g - rates.Gamma_ng


def fwm_bracket(rates: FwmRates, Omega=None):
    O = rates.Omega if Omega is None else np.asarray(Omega, dtype=float)
    return 1 - 1j * collision_resonance_amplitude(rates) / (O + 1j * rates.Gamma_nn1)


def fwm_coherence(rates: FwmRates):
    """Second-order n-n' coherence (up to the coupling-constant prefactor)."""
    pre = 1.0 / ((rates.Omega2 + 1j * rates.Gamma_n1g) * (rates.Omega1 - 1j * rates.Gamma_ng))
    return pre * fwm_bracket(rates)


def fwm_coherence_two_pole(rates: FwmRates):
    """The same coherence written as the difference of the two one-photon
    poles; equals ``-fwm_coherence`` when ``Omega = Omega2 - Omega1``."""
    return ((1 / (rates.Omega2 + 1j * rates.Gamma_n1g) - 1 / (rates.Omega1 - 1j * rates.Gamma_ng))
            / (rates.Omega + 1j * rates.Gamma_nn1))
