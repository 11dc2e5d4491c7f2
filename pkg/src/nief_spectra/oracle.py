"""Brute-force reference computations.

Nothing here imports the closed-form modules; they in turn never import this
one.  Only the tests (and the CLI self-test) put the two side by side.

Contents
--------
* direct linear solves of the rate balance, of the strong-field population
  problem and of the eight coupled first-order probe amplitudes;
* a full 4-level master-equation steady state (16 density-matrix elements),
  the most independent check of all;
* adaptive quadrature;
* 3j symbols from their finite sum and 6j symbols by contracting four 3j's;
* a real-arithmetic re-expansion of the continuum-structure ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy import integrate

from .errors import IllConditioned, NonHalfInteger, ToleranceNotMet
from .model import FieldSpec, RelaxationSpec

COND_LIMIT = 1e12
RESIDUAL_LIMIT = 1e-12


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    labels: tuple

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if len(self.labels) != a.shape[0] or len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique, one per row")
        if np.shape(self.rhs) != (a.shape[0],):
            raise ValueError("rhs length mismatch")


@dataclass(frozen=True)
class Solution:
    values: dict
    condition: float
    residual: float

    def __getitem__(self, label):
        return self.values[label]


def solve(sys: LinearSystem) -> Solution:
    a = np.asarray(sys.matrix)
    b = np.asarray(sys.rhs)
    cond = float(np.linalg.cond(a))
    if not np.isfinite(cond) or cond >= COND_LIMIT:
        raise IllConditioned(f"condition number {cond:.3e}")
    x = np.linalg.solve(a, b)
    norm_b = np.linalg.norm(b)
    res = float(np.linalg.norm(a @ x - b) / (norm_b if norm_b > 0 else 1.0))
    if res > RESIDUAL_LIMIT:
        raise IllConditioned(f"residual {res:.3e}")
    return Solution(dict(zip(sys.labels, x)), cond, res)


# --------------------------------------------------------------------------
# populations

_LEV = ("g", "n", "m", "l")


def rate_balance_solve(relax: RelaxationSpec) -> dict:
    """Zero-field populations from ``Gamma_i n_i = sum_j gamma_ji n_j + q_i``."""
    a = np.zeros((4, 4))
    b = np.zeros(4)
    for i, lev in enumerate(_LEV):
        a[i, i] = relax.gamma_total[lev]
        b[i] = relax.pump.get(lev, 0.0)
        for j, src in enumerate(_LEV):
            a[i, j] -= relax.branch.get(src + lev, 0.0)
    sol = solve(LinearSystem(a.astype(complex), b.astype(complex), _LEV))
    return {k: float(v.real) for k, v in sol.values.items()}


@dataclass(frozen=True)
class StrongFieldState:
    r: dict
    dr: tuple
    r1: complex
    r3: complex


def _halfwidth(relax, a, b):
    return relax.width(a, b)


def strong_field_populations_solve(relax: RelaxationSpec, fields: FieldSpec) -> StrongFieldState:
    """Self-consistent populations and strong coherences, solved as one
    real 8x8 system.

    Unknowns: r_g, r_n, r_m, r_l, Re r1, Im r1, Re r3, Im r3, where
    ``P1 r1 = i G1 (r_l - r_g)`` and ``P3 r3 = i G3 (r_n - r_m)``.
    The transfer rate out of a lower level into its upper partner is
    ``2 Im(G* r)``.
    """
    ig, in_, im, il, x1, y1, x3, y3 = range(8)
    o1, _, o3, _ = (float(d) for d in fields.detuning)
    g1, g3 = fields.rabi[0], fields.rabi[2]
    w1, w3 = _halfwidth(relax, "l", "g"), _halfwidth(relax, "n", "m")
    gam = relax.gamma_total
    br = relax.branch.get
    a = np.zeros((8, 8))
    b = np.zeros(8)

    # (w + i o) (x + i y) = i G (dr): real and imaginary parts
    def coherence_rows(row, xi, yi, w, o, g, lower, upper):
        a[row, xi], a[row, yi] = w, -o
        a[row + 1, xi], a[row + 1, yi] = o, w
        # i G dr = (-Im G + i Re G) dr
        a[row, lower] += g.imag
        a[row, upper] -= g.imag
        a[row + 1, lower] -= g.real
        a[row + 1, upper] += g.real

    coherence_rows(4, x1, y1, w1, o1, g1, il, ig)
    coherence_rows(6, x3, y3, w3, o3, g3, in_, im)

    # 2 Im(G* r) = 2 (Re G * Im r - Im G * Re r)
    def transfer(row, sign, g, xi, yi):
        a[row, yi] -= sign * 2 * g.real
        a[row, xi] -= sign * -2 * g.imag

    a[ig, ig] = gam["g"]
    transfer(ig, +1, g1, x1, y1)
    b[ig] = relax.pump.get("g", 0.0)

    a[im, im] = gam["m"]
    transfer(im, +1, g3, x3, y3)
    b[im] = relax.pump.get("m", 0.0)

    a[in_, in_] = gam["n"]
    a[in_, ig] -= br("gn", 0.0)
    a[in_, im] -= br("mn", 0.0)
    transfer(in_, -1, g3, x3, y3)
    b[in_] = relax.pump.get("n", 0.0)

    a[il, il] = gam["l"]
    a[il, ig] -= br("gl", 0.0)
    a[il, im] -= br("ml", 0.0)
    transfer(il, -1, g1, x1, y1)
    b[il] = relax.pump.get("l", 0.0)

    labels = ("r_g", "r_n", "r_m", "r_l", "re_r1", "im_r1", "re_r3", "im_r3")
    sol = solve(LinearSystem(a.astype(complex), b.astype(complex), labels))
    v = {k: float(val.real) for k, val in sol.values.items()}
    r = {"g": v["r_g"], "n": v["r_n"], "m": v["r_m"], "l": v["r_l"]}
    dr = (r["l"] - r["g"], r["n"] - r["g"], r["n"] - r["m"], r["l"] - r["m"])
    return StrongFieldState(r=r, dr=dr, r1=v["re_r1"] + 1j * v["im_r1"],
                            r3=v["re_r3"] + 1j * v["im_r3"])


# --------------------------------------------------------------------------
# first-order probe amplitudes

PROBE_LABELS = ("r2", "conj(r12)", "conj(r32)", "conj(rt4)",
                "r4", "r41", "r43", "conj(rt2)")


def assemble_probe_system(relax: RelaxationSpec, fields: FieldSpec,
                          strong: StrongFieldState | None = None,
                          feedback: bool = True) -> LinearSystem:
    """The eight probe-coupled amplitudes as one block-diagonal system.

    Block 1 (probe 2): r2 (n-g), r12 (l-n Raman coherence), r32 (g-m),
    rt4 (l-m at the three-photon frequency).  Block 2 (probe 4): r4 (l-m),
    r41 (g-m), r43 (l-n), rt2 (n-g at the three-photon frequency).  The
    partner amplitudes enter conjugated, as they do in the Liouville equation.

    ``feedback=False`` drops the back-action of the three-photon amplitudes
    on the two-photon coherences, leaving a one-way chain.
    """
    if strong is None:
        strong = strong_field_populations_solve(relax, fields)
    o1, o2, o3, o4 = (float(d) for d in fields.detuning)
    g1, g2, g3, g4 = fields.rabi
    w = lambda a, b: _halfwidth(relax, a, b)  # noqa: E731
    c = np.conj
    p2 = w("n", "g") + 1j * o2
    p4 = w("l", "m") + 1j * o4
    p12 = w("l", "n") + 1j * (o1 - o2)
    p43 = w("l", "n") + 1j * (o4 - o3)
    p32 = w("g", "m") + 1j * (o3 - o2)
    p41 = w("g", "m") + 1j * (o4 - o1)
    d2 = w("n", "g") + 1j * (o1 + o3 - o4)
    d4 = w("l", "m") + 1j * (o1 - o2 + o3)
    dr1, dr2, dr3, dr4 = strong.dr
    r1, r3 = strong.r1, strong.r3
    fb = 1.0 if feedback else 0.0

    m = np.zeros((8, 8), complex)
    rhs = np.zeros(8, complex)
    # probe 2 block: unknowns 0..3 = r2, conj r12, conj r32, conj rt4
    m[0, 0], m[0, 1], m[0, 2] = p2, -1j * g1, 1j * g3
    rhs[0] = 1j * g2 * dr2
    m[1, 1], m[1, 0], m[1, 3] = c(p12), -1j * c(g1), fb * 1j * g3
    rhs[1] = -1j * g2 * c(r1)
    m[2, 2], m[2, 0], m[2, 3] = c(p32), 1j * c(g3), -fb * 1j * g1
    rhs[2] = 1j * g2 * c(r3)
    m[3, 3], m[3, 1], m[3, 2] = c(d4), 1j * c(g3), -1j * c(g1)
    # probe 4 block: unknowns 4..7 = r4, r41, r43, conj rt2
    m[4, 4], m[4, 5], m[4, 6] = p4, 1j * g1, -1j * g3
    rhs[4] = 1j * g4 * dr4
    m[5, 5], m[5, 4], m[5, 7] = p41, 1j * c(g1), -fb * 1j * g3
    rhs[5] = 1j * g4 * c(r1)
    m[6, 6], m[6, 4], m[6, 7] = p43, -1j * c(g3), fb * 1j * g1
    rhs[6] = -1j * g4 * c(r3)
    m[7, 7], m[7, 6], m[7, 5] = c(d2), 1j * c(g1), -1j * c(g3)
    return LinearSystem(m, rhs, PROBE_LABELS)


# --------------------------------------------------------------------------
# full master equation

_IDX = {"l": 0, "g": 1, "n": 2, "m": 3}


def _rotating_hamiltonian(fields: FieldSpec, which: str, scheme: str):
    """Rotating-frame energies and strong couplings for the probe chain.

    Couplings are ``H[lower, upper] = G`` (and h.c.).  In the cascade
    ordering level l sits above g.
    """
    o1, o2, o3, o4 = (float(d) for d in fields.detuning)
    g1, _, g3, _ = fields.rabi
    L, G, N, M = (_IDX[k] for k in "lgnm")
    h = np.zeros((4, 4), complex)
    cascade = scheme == "cascade"
    # frame phases chosen so every coupling in the chain is static
    if which == "r2":
        # energies relative to n; l is one field-1 photon away from g
        e_l = (-o2 - o1) if cascade else (-o2 + o1)
        energies = {"n": 0.0, "g": -o2, "l": e_l, "m": -o3}
    elif which == "r4":
        e_g = o1 if cascade else -o1
        energies = {"l": 0.0, "g": e_g, "m": -o4, "n": -o4 + o3}
    else:
        raise ValueError(which)
    for k, e in energies.items():
        h[_IDX[k], _IDX[k]] = e
    if cascade:
        h[G, L], h[L, G] = g1, np.conj(g1)
    else:
        h[L, G], h[G, L] = g1, np.conj(g1)
    h[N, M], h[M, N] = g3, np.conj(g3)
    return h


def _liouvillian(h, relax: RelaxationSpec):
    eye = np.eye(4)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    src = np.zeros(16, complex)
    names = {v: k for k, v in _IDX.items()}
    for a in range(4):
        for b in range(4):
            if a != b:
                lv[a * 4 + b, a * 4 + b] -= relax.width(names[a], names[b])
    for a in range(4):
        la = names[a]
        lv[a * 5, a * 5] -= relax.gamma_total[la]
        for j in range(4):
            lv[a * 5, j * 5] += relax.branch.get(names[j] + la, 0.0)
        src[a * 5] = relax.pump.get(la, 0.0)
    return lv, src


@dataclass(frozen=True)
class MasterSolution:
    response: complex
    populations: dict
    rho0: np.ndarray
    rho1: np.ndarray


def master_equation_response(relax: RelaxationSpec, fields: FieldSpec,
                             which: str = "r2", scheme: str = "fig1-double") -> MasterSolution:
    """Exact first-order probe response from the 16-element Liouville equation.

    The strong-field steady state is solved first; the probe coupling then
    enters once as a source, so the result is the linear response with no
    finite-amplitude error.  ``response`` is the probe coherence in the same
    normalization as the closed forms (``r2`` or ``r4``).
    """
    h0 = _rotating_hamiltonian(fields, which, scheme)
    lv, src = _liouvillian(h0, relax)
    rho0 = np.linalg.solve(lv, -src)
    h1 = np.zeros((4, 4), complex)
    L, G, N, M = (_IDX[k] for k in "lgnm")
    if which == "r2":
        h1[N, G], h1[G, N] = fields.rabi[1], np.conj(fields.rabi[1])
    else:
        h1[L, M], h1[M, L] = fields.rabi[3], np.conj(fields.rabi[3])
    eye = np.eye(4)
    l1 = -1j * (np.kron(h1, eye) - np.kron(eye, h1.T))
    rho1 = np.linalg.solve(lv, -l1 @ rho0).reshape(4, 4)
    rho0 = rho0.reshape(4, 4)
    resp = rho1[N, G] if which == "r2" else rho1[L, M]
    pops = {k: float(rho0[i, i].real) for k, i in _IDX.items()}
    return MasterSolution(complex(resp), pops, rho0, rho1)


# --------------------------------------------------------------------------
# quadrature

def adaptive_integrate(fn, domain, tol=1e-10, points=None, limit=1000):
    """Adaptive Gauss-Kronrod integral of a real or complex function.

    Infinite endpoints are allowed; with ``points`` given the interval is
    split so that the finite middle piece carries the breakpoints.
    """
    a, b = domain
    pieces = [(a, b)]
    if points is not None and len(points):
        pts = sorted(float(p) for p in points)
        lo, hi = pts[0] - 1.0, pts[-1] + 1.0
        pieces = []
        if np.isinf(a):
            pieces.append((a, lo))
            start = lo
        else:
            start = a
        if np.isinf(b):
            pieces.append((start, hi, [p for p in pts if start < p < hi]))
            pieces.append((hi, b))
        else:
            pieces.append((start, b, [p for p in pts if start < p < b]))

    def run(f):
        total, err = 0.0, 0.0
        for piece in pieces:
            lo, hi = piece[0], piece[1]
            kw = {}
            if len(piece) == 3 and piece[2]:
                kw["points"] = piece[2]
            val, e = integrate.quad(f, lo, hi, epsabs=tol / 10, epsrel=0.0, limit=limit, **kw)
            total += val
            err += e
        return total, err

    probe = fn(0.5 * (pieces[0][0] + pieces[0][1]) if np.isfinite(pieces[0][0]) and np.isfinite(pieces[0][1]) else 0.0)
    if np.iscomplexobj(probe):
        re, err_re = run(lambda x: np.real(fn(x)))
        im, err_im = run(lambda x: np.imag(fn(x)))
        val, err = re + 1j * im, err_re + err_im
    else:
        val, err = run(fn)
    if err > tol:
        raise ToleranceNotMet(f"error estimate {err:.3e} > {tol:.3e}")
    return val


# --------------------------------------------------------------------------
# angular momentum

def _twice(j) -> int:
    t = 2 * Fraction(j).limit_denominator(4)
    if t.denominator != 1 or 2 * float(j) != float(t):
        raise NonHalfInteger(f"{j!r} is not a half-integer")
    return int(t)


def threej(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol from the Racah finite sum, exact until the last sqrt."""
    tj1, tj2, tj3, tm1, tm2, tm3 = (_twice(x) for x in (j1, j2, j3, m1, m2, m3))
    if min(tj1, tj2, tj3) < 0:
        raise NonHalfInteger("negative angular momentum")
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if any(abs(tm) > tj or (tj - tm) % 2 for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3))):
        return 0.0
    if tj3 > tj1 + tj2 or tj3 < abs(tj1 - tj2) or (tj1 + tj2 + tj3) % 2:
        return 0.0
    f = math.factorial
    h = lambda t: t // 2  # noqa: E731  (argument is even by construction)
    pref = Fraction(
        f(h(tj1 + tj2 - tj3)) * f(h(tj1 - tj2 + tj3)) * f(h(-tj1 + tj2 + tj3)),
        f(h(tj1 + tj2 + tj3) + 1),
    )
    pref *= (f(h(tj1 + tm1)) * f(h(tj1 - tm1)) * f(h(tj2 + tm2)) * f(h(tj2 - tm2))
             * f(h(tj3 + tm3)) * f(h(tj3 - tm3)))
    k1 = h(tj3 - tj2 + tm1)
    k2 = h(tj3 - tj1 - tm2)
    k3 = h(tj1 + tj2 - tj3)
    k4 = h(tj1 - tm1)
    k5 = h(tj2 + tm2)
    total = Fraction(0)
    for t in range(max(0, -k1, -k2), min(k3, k4, k5) + 1):
        term = Fraction(1, f(t) * f(k1 + t) * f(k2 + t) * f(k3 - t) * f(k4 - t) * f(k5 - t))
        total += -term if t % 2 else term
    phase = -1 if h(tj1 - tj2 - tm3) % 2 else 1
    return phase * float(total) * math.sqrt(pref)


def _mrange(tj):
    return range(-tj, tj + 1, 2)


def sixj_by_3j_contraction(j1, j2, j3, j4, j5, j6) -> float:
    """6j symbol as the full magnetic sum over a product of four 3j symbols."""
    tj = [_twice(x) for x in (j1, j2, j3, j4, j5, j6)]
    if min(tj) < 0:
        raise NonHalfInteger("negative angular momentum")
    js = [t / 2 for t in tj]
    a1, a2, a3, a4, a5, a6 = js
    total = 0.0
    for tm1, tm2 in product(_mrange(tj[0]), _mrange(tj[1])):
        tm3 = -tm1 - tm2
        if abs(tm3) > tj[2]:
            continue
        for tm5 in _mrange(tj[4]):
            tm6 = tm5 - tm1
            if abs(tm6) > tj[5]:
                continue
            tm4 = tm6 - tm2
            if abs(tm4) > tj[3]:
                continue
            ms = (tm1 / 2, tm2 / 2, tm3 / 2, tm4 / 2, tm5 / 2, tm6 / 2)
            w1 = threej(a1, a2, a3, -ms[0], -ms[1], -ms[2])
            if w1 == 0.0:
                continue
            w2 = threej(a1, a5, a6, ms[0], -ms[4], ms[5])
            w3 = threej(a4, a2, a6, ms[3], ms[1], -ms[5])
            w4 = threej(a4, a5, a3, -ms[3], ms[4], ms[2])
            s = sum(tj[k] - (tm1, tm2, tm3, tm4, tm5, tm6)[k] for k in range(6)) // 2
            total += (-1) ** s * w1 * w2 * w3 * w4
    return total


# --------------------------------------------------------------------------
# continuum-structure ratios, re-expanded in real arithmetic

def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    den = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


def _csq(a):
    return _cmul(a, a)


def lics_expanded(p: dict) -> dict:
    """Term-by-term evaluation of the continuum-structure ratios.

    ``p`` holds plain floats: k1..k4, beta_l, beta_n, g_mn, g_nn and the q's
    (q_nl, q_gl, q_ng, q_ln, q_gn), plus the detunings x_l, x_n, y_l, y_n and
    the one-photon detunings dgm, pgm (imaginary parts of D_gm and p_gm).
    """
    k1, k2, k3, k4 = p["k1"], p["k2"], p["k3"], p["k4"]
    bl, bn, gmn, gnn = p["beta_l"], p["beta_n"], p["g_mn"], p["g_nn"]
    D = (1.0, p["dgm"])
    pg = (1.0, p["pgm"])
    one = (1.0, 0.0)

    # suppression numerators: 1 - k1 bl (1 - i qa)(1 - i qb) / ((1 - i qc)(1 + i z))
    def suppress(qa, qb, qc, z):
        top = _cmul((1.0, -qa), (1.0, -qb))
        bot = _cmul((1.0, -qc), (1.0, z))
        t = _cdiv(top, bot)
        return (1.0 - k1 * bl * t[0], -k1 * bl * t[1])

    K = suppress(p["q_nl"], p["q_gl"], p["q_ng"], p["x_l"])
    A = suppress(p["q_ln"], p["q_gl"], p["q_gn"], p["y_l"])

    def bracket(zn, zl, denom):
        # (1+gnn)(1 + i zn) + gmn/denom - (1+gnn) k2 bl bn (1 - i qnl)^2/(1 + i zl)
        lead = ((1 + gnn), (1 + gnn) * zn)
        dress = _cdiv((gmn, 0.0), denom)
        cont = _cdiv(_csq((1.0, -p["q_nl"])), (1.0, zl))
        f = (1 + gnn) * k2 * bl * bn
        return (lead[0] + dress[0] - f * cont[0], lead[1] + dress[1] - f * cont[1])

    X = bracket(p["x_n"], p["x_l"], D)
    Y = bracket(p["y_n"], p["y_l"], pg)
    DX = _cmul(D, X)
    chi3 = _cdiv(K, DX)
    t = _cdiv((gmn, 0.0), DX)
    alpha1 = _cdiv((1.0 - t[0], -t[1]), D)[0]
    yl, qgl = p["y_l"], p["q_gl"]
    window = k3 * bl * (yl + qgl) ** 2 / (1.0 + yl * yl)
    num = _cmul(_csq(A), _csq((1.0, -p["q_gn"])))
    last = _cdiv(num, Y)
    alpha_mu = 1.0 - k3 * bl + window - k4 * gnn * last[0]
    return {"chi3": complex(*chi3), "alpha1": alpha1, "alpha_mu": alpha_mu,
            "K": complex(*K), "A": complex(*A), "X": complex(*X), "Y": complex(*Y)}
