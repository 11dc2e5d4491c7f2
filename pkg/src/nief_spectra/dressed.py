"""Closed-form strong-field response of the double-resonance scheme.

The two strong fields (1 on l-g, 3 on n-m) are kept to all orders, the probes
(2 on n-g, 4 on l-m) to first order.  The probe amplitudes are::

    r2 = i G2 R2 / P2        r4 = i G4 R4 / P4

with the dressing factors ``R2``, ``R4`` built from the complex denominators
``P`` and ``d`` and the coupling ratios ``g_k ~ |G1|^2``, ``v_k ~ |G3|^2``.
Everything broadcasts over numpy arrays of detunings.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDenominator, SingularSaturation
from .model import FieldSpec, Populations, RelaxationSpec

DEGENERATE_TOL = 1e-14
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class Denominators:
    p1: complex
    p2: complex
    p3: complex
    p4: complex
    p12: complex
    p43: complex
    p32: complex
    p41: complex
    d2: complex
    d4: complex


@dataclass(frozen=True)
class CouplingFactors:
    """``g[k-1]`` and ``v[k-1]`` hold the k-th ratio, k = 1..8."""

    g: tuple
    v: tuple


@dataclass(frozen=True)
class SaturatedPopulations:
    dr: tuple
    r: dict
    alpha1: float
    alpha3: float
    alpha1_0: float
    alpha3_0: float
    a: tuple
    b: tuple
    determinant: float


def denominators(relax: RelaxationSpec, fields: FieldSpec) -> Denominators:
    o1, o2, o3, o4 = (np.asarray(d, dtype=float) for d in fields.detuning)
    w = relax.width
    return Denominators(
        p1=w("lg") + 1j * o1,
        p2=w("ng") + 1j * o2,
        p3=w("nm") + 1j * o3,
        p4=w("lm") + 1j * o4,
        p12=w("ln") + 1j * (o1 - o2),
        p43=w("ln") + 1j * (o4 - o3),
        p32=w("gm") + 1j * (o3 - o2),
        p41=w("gm") + 1j * (o4 - o1),
        d2=w("ng") + 1j * (o1 + o3 - o4),
        d4=w("lm") + 1j * (o1 - o2 + o3),
    )


def coupling_factors(relax: RelaxationSpec, fields: FieldSpec,
                     den: Denominators | None = None) -> CouplingFactors:
    d = den or denominators(relax, fields)
    s1 = abs(fields.rabi[0]) ** 2
    s3 = abs(fields.rabi[2]) ** 2
    c = np.conj
    g = (
        s1 / (d.p41 * c(d.p1)),
        s1 / (c(d.p12) * d.p2),
        s1 / (c(d.p12) * c(d.p1)),
        s1 / (d.p41 * d.p4),
        s1 / (d.p43 * c(d.d2)),
        s1 / (d.p41 * c(d.d2)),
        s1 / (c(d.p32) * c(d.d4)),
        s1 / (c(d.p12) * c(d.d4)),
    )
    v = (
        s3 / (d.p43 * c(d.p3)),
        s3 / (c(d.p32) * d.p2),
        s3 / (c(d.p32) * c(d.p3)),
        s3 / (d.p43 * d.p4),
        s3 / (d.p41 * c(d.d2)),
        s3 / (d.p43 * c(d.d2)),
        s3 / (c(d.p12) * c(d.d4)),
        s3 / (c(d.p32) * c(d.d4)),
    )
    return CouplingFactors(g=g, v=v)


def branching_ratios(relax: RelaxationSpec):
    """Fractions ``a1..a3`` (field 1) and ``b1..b3`` (field 3) of the saturated
    population change that land on each level."""
    gl, gg, gn, gm = (relax.decay(k) for k in "lgnm")
    s1 = gl + gg - relax.rate("gl")
    s3 = gm + gn - relax.rate("mn")
    a1 = relax.rate("gn") * gl / (gn * s1)
    a3 = (gg - relax.rate("gl")) / s1
    a2 = 1.0 - a1 - a3
    b1 = relax.rate("ml") * gn / (gl * s3)
    b2 = (gm - relax.rate("mn")) / s3
    b3 = 1.0 - b1 - b2
    return (a1, a2, a3), (b1, b2, b3)


def saturated_populations(relax: RelaxationSpec, fields: FieldSpec,
                          pops: Populations) -> SaturatedPopulations:
    """Populations dressed by the two strong fields.

    Raises :class:`SingularSaturation` when the 2x2 coupling determinant
    vanishes, which only happens for unphysical branching input.
    """
    gl, gg, gn, gm = (relax.decay(k) for k in "lgnm")
    w_lg, w_nm = relax.width("lg"), relax.width("nm")
    o1 = np.asarray(fields.detuning[0], dtype=float)
    o3 = np.asarray(fields.detuning[2], dtype=float)
    s1 = abs(fields.rabi[0]) ** 2
    s3 = abs(fields.rabi[2]) ** 2

    alpha1_0 = 2.0 * (gl + gg - relax.rate("gl")) / (gl * gg * w_lg) * s1
    alpha3_0 = 2.0 * (gm + gn - relax.rate("mn")) / (gm * gn * w_nm) * s3
    alpha1 = alpha1_0 * w_lg**2 / (w_lg**2 + o1**2)
    alpha3 = alpha3_0 * w_nm**2 / (w_nm**2 + o3**2)
    (a1, a2, a3), (b1, b2, b3) = branching_ratios(relax)

    dn1, dn2, dn3, dn4 = pops.dn
    det = (1 + alpha1) * (1 + alpha3) - a1 * alpha1 * b1 * alpha3
    if np.any(np.abs(det) < SINGULAR_TOL):
        raise SingularSaturation(f"saturation determinant {np.min(np.abs(det))!r}")
    dr1 = ((1 + alpha3) * dn1 + b1 * alpha3 * dn3) / det
    dr3 = ((1 + alpha1) * dn3 + a1 * alpha1 * dn1) / det
    dr2 = dn2 - b2 * alpha3 * dr3 - a2 * alpha1 * dr1
    dr4 = dn4 - a3 * alpha1 * dr1 - b3 * alpha3 * dr3

    n = pops.n
    r = {
        "m": n["m"] + (1 - b2) * alpha3 * dr3,
        "g": n["g"] + (1 - a3) * alpha1 * dr1,
        "n": n["n"] - b2 * alpha3 * dr3 + a1 * alpha1 * dr1,
        # lower level l gains from decay of m and loses to the l-g drive
        "l": n["l"] + b1 * alpha3 * dr3 - a3 * alpha1 * dr1,
    }
    return SaturatedPopulations(
        dr=(dr1, dr2, dr3, dr4), r=r, alpha1=alpha1, alpha3=alpha3,
        alpha1_0=alpha1_0, alpha3_0=alpha3_0, a=(a1, a2, a3), b=(b1, b2, b3),
        determinant=det,
    )


def strong_coherences(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    """Strong-field coherences ``r1`` (l-g) and ``r3`` (n-m)."""
    d = denominators(relax, fields)
    r1 = 1j * fields.rabi[0] * sat.dr[0] / d.p1
    r3 = 1j * fields.rabi[2] * sat.dr[2] / d.p3
    return r1, r3


def _checked_ratio(num, den, what):
    if np.any(np.abs(den) < DEGENERATE_TOL):
        raise DegenerateDenominator(f"{what} denominator vanishes")
    return num / den


def dressing_r2(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    """``R2``: the factor multiplying the bare probe-2 Lorentzian."""
    cf = coupling_factors(relax, fields)
    g, v = cf.g, cf.v
    g2, g3, g7, g8 = g[1], g[2], g[6], g[7]
    v2, v3, v7, v8 = v[1], v[2], v[6], v[7]
    dr1, dr2, dr3, _ = sat.dr
    num = dr2 * (1 + g7 + v7) - v3 * (1 + v7 - g8) * dr3 - g3 * (1 + g7 - v8) * dr1
    den = (1 + g2 + v2) + (g7 + g2 * (g7 - v8) + v7 + v2 * (v7 - g8))
    return _checked_ratio(num, den, "R2")


def dressing_r4(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    cf = coupling_factors(relax, fields)
    g, v = cf.g, cf.v
    g1, g4, g5, g6 = g[0], g[3], g[4], g[5]
    v1, v4, v5, v6 = v[0], v[3], v[4], v[5]
    dr1, _, dr3, dr4 = sat.dr
    num = dr4 * (1 + v5 + g5) - g1 * (1 + g5 - v6) * dr1 - v1 * (1 + v5 - g6) * dr3
    den = (1 + g4 + v4) + (v5 + v4 * (v5 - g6) + g5 + g4 * (g5 - v6))
    return _checked_ratio(num, den, "R4")


def normalized_response(relax: RelaxationSpec, fields: FieldSpec,
                        sat: SaturatedPopulations, which: str = "r2"):
    """``-i r_k / G_k``, finite even when the probe amplitude is zero."""
    d = denominators(relax, fields)
    if which == "r2":
        return dressing_r2(relax, fields, sat) / d.p2
    if which == "r4":
        return dressing_r4(relax, fields, sat) / d.p4
    raise ValueError(f"unknown probe {which!r}")


def probe_r2(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    return 1j * fields.rabi[1] * normalized_response(relax, fields, sat, "r2")


def probe_r4(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    return 1j * fields.rabi[3] * normalized_response(relax, fields, sat, "r4")


def lambda_v_r2(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    """Probe-2 amplitude with field 3 switched off (the Lambda sub-scheme)."""
    d = denominators(relax, fields)
    cf = coupling_factors(relax, fields, d)
    dr1, dr2 = sat.dr[0], sat.dr[1]
    return 1j * fields.rabi[1] / d.p2 * (dr2 - cf.g[2] * dr1) / (1 + cf.g[1])


def lambda_v_r4(relax: RelaxationSpec, fields: FieldSpec, sat: SaturatedPopulations):
    """Probe-4 amplitude with field 3 switched off (the V sub-scheme)."""
    d = denominators(relax, fields)
    cf = coupling_factors(relax, fields, d)
    dr1, dr4 = sat.dr[0], sat.dr[3]
    return 1j * fields.rabi[3] / d.p4 * (dr4 - cf.g[0] * dr1) / (1 + cf.g[3])


# Cascade ordering puts l above g, turning the Lambda (l-g-n) and V (g-l-m)
# sub-schemes into ladders.  With relaxation inputs unchanged this amounts to
# reversing the sign of the field-1 detuning only.
CASCADE_SIGNS = (-1.0, 1.0, 1.0, 1.0)


def cascade_transform(fields: FieldSpec) -> FieldSpec:
    det = tuple(s * np.asarray(o) if np.ndim(o) else s * o
                for s, o in zip(CASCADE_SIGNS, fields.detuning))
    return replace(fields, detuning=det)


def effective_fields(fields: FieldSpec, scheme: str = "fig1-double") -> FieldSpec:
    if scheme == "fig1-double":
        return fields
    if scheme == "cascade":
        return cascade_transform(fields)
    raise ValueError(f"unknown scheme {scheme!r}")
