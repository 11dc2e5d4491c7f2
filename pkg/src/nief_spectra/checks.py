"""Invariant suite: the closed forms checked against oracles and identities.

Each check draws its own parameters from a seeded generator, runs at a
caller-chosen size and returns a :class:`CheckResult` holding the worst
deviation it saw and the tolerance it was held to.  The command-line
``selftest`` task runs the suite at reduced sizes; the acceptance tests run
it at full size.

This is the one place inside the package that imports :mod:`oracle`; the
closed-form modules never do.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dressed, doppler, lics, mixing, oracle, relaxation_induced as ri, spectra
from .model import COHERENCES, FieldSpec, RelaxationSpec, unsaturated_populations


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: worst={self.worst:.3e} tol={self.tolerance:.1e}"


def _result(name, worst, tol, **detail):
    worst = float(worst)
    return CheckResult(name, bool(worst <= tol), worst, tol, detail)


# --------------------------------------------------------------------------
# parameter draws

def draw_relaxation(rng, lo=0.1, hi=10.0, natural=False) -> RelaxationSpec:
    """Random open four-level relaxation: decay rates and coherence widths in
    ``[lo, hi]``, branching fractions summing to at most one per upper
    level, nonnegative pumps."""
    gt = {k: rng.uniform(lo, hi) for k in "gnml"}
    br = {}
    for up in "gm":
        frac = rng.uniform(0, 1, 2)
        frac = frac / frac.sum() * rng.uniform(0.0, 1.0)
        br[up + "l"], br[up + "n"] = frac[0] * gt[up], frac[1] * gt[up]
    pump = {k: rng.uniform(0, 1) * gt[k] for k in "gnml"}
    if natural:
        return RelaxationSpec.natural(gt, branch=br, pump=pump)
    widths = {k: rng.uniform(lo, hi) for k in COHERENCES}
    return RelaxationSpec(gt, widths, br, pump)


def _phase(rng):
    return np.exp(2j * np.pi * rng.uniform())


def draw_fields(rng, detuning=20.0, strong=5.0, probe=1e-3) -> FieldSpec:
    rabi = (rng.uniform(0, strong) * _phase(rng), probe, rng.uniform(0, strong) * _phase(rng), probe)
    return FieldSpec(tuple(rng.uniform(-detuning, detuning, 4)), rabi)


def _rel(a, b):
    return abs(a - b) / abs(b)


# --------------------------------------------------------------------------
# dressed probe response

def oracle_equivalence(draws=1000, seed=0) -> CheckResult:
    """Closed-form r2, r4 against the direct 8-amplitude solve and the full
    master equation, in both level orderings."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        relax, f = draw_relaxation(rng), draw_fields(rng)
        pops = unsaturated_populations(relax)
        for scheme in ("fig1-double", "cascade"):
            fe = dressed.effective_fields(f, scheme)
            sat = dressed.saturated_populations(relax, fe, pops)
            r2, r4 = dressed.probe_r2(relax, fe, sat), dressed.probe_r4(relax, fe, sat)
            m2 = oracle.master_equation_response(relax, f, "r2", scheme).response
            m4 = oracle.master_equation_response(relax, f, "r4", scheme).response
            worst = max(worst, _rel(r2, m2), _rel(r4, m4))
            if scheme == "fig1-double":
                sol = oracle.solve(oracle.assemble_probe_system(relax, f))
                worst = max(worst, _rel(r2, sol["r2"]), _rel(r4, sol["r4"]))
    return _result("oracle equivalence r2/r4", worst, 1e-8, draws=draws)


def sum_rule_grid(relax: RelaxationSpec, points=200001, span=1e4):
    w = relax.max_width()
    scale = 0.02 * min(relax.coherence_halfwidth.values())
    return spectra.sinh_grid(scale, span * w, points), w


def sum_rule_invariance(configs=50, seed=0, points=200001) -> CheckResult:
    """Integrated r2 absorption equals the dressed population difference and
    does not depend on the strong fields at fixed populations."""
    rng = np.random.default_rng(seed)
    worst_rule = worst_pair = 0.0
    for i in range(configs):
        relax = draw_relaxation(rng)
        gam = relax.width("lg")
        frac = i / max(configs - 1, 1)
        f = FieldSpec(tuple(rng.uniform(-20, 20, 4)),
                      (3 * gam * frac * _phase(rng), 1e-3, 3 * gam * frac * rng.uniform() * _phase(rng), 1e-3))
        pops = unsaturated_populations(relax)
        sat = dressed.saturated_populations(relax, f, pops)
        grid, w = sum_rule_grid(relax, points)
        driven = spectra.sum_rule(spectra.spectrum(relax, f, pops, grid, "r2", sat=sat), sat.dr[1], w)
        bare_f = f.with_rabi(1, 0.0).with_rabi(3, 0.0)
        bare = spectra.sum_rule(spectra.spectrum(relax, bare_f, pops, grid, "r2", sat=sat), sat.dr[1], w)
        worst_rule = max(worst_rule, driven.rel_error, bare.rel_error)
        worst_pair = max(worst_pair, abs(driven.integral - bare.integral) / max(abs(bare.integral), 1e-12))
    return _result("sum rule", max(worst_rule, worst_pair), 1e-3,
                   rule=worst_rule, driven_vs_undriven=worst_pair, configs=configs)


def reduction_identity(configs=5, points=10_000, seed=0) -> CheckResult:
    """With field 3 off the general expressions reduce to the three-level
    Lambda (r2) and V (r4) forms at every grid point."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(configs):
        relax = draw_relaxation(rng)
        f = draw_fields(rng).with_rabi(3, 0.0)
        pops = unsaturated_populations(relax)
        sat = dressed.saturated_populations(relax, f, pops)
        grid = np.linspace(-30, 30, points)
        f2 = f.with_detuning(2, grid)
        f4 = f.with_detuning(4, grid)
        a = dressed.probe_r2(relax, f2, sat)
        b = dressed.lambda_v_r2(relax, f2, sat)
        c = dressed.probe_r4(relax, f4, sat)
        d = dressed.lambda_v_r4(relax, f4, sat)
        worst = max(worst, np.max(np.abs(a - b) / np.abs(b)), np.max(np.abs(c - d) / np.abs(d)))
    return _result("reduction identity (field 3 off)", worst, 1e-12, configs=configs, points=points)


def raman_asymptote(configs=20, seed=0) -> CheckResult:
    """Normalized l-m absorption against its two-term far-detuned form.

    Deviation is measured relative to ``|wing| + |Raman|`` (the sizes of the
    two terms), which stays meaningful where they cancel.  Field 1 is chosen
    so that ``|g4| <= 0.01``, the regime the far-detuned form assumes.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(configs):
        relax = draw_relaxation(rng, natural=True)
        big = relax.max_width()
        sign = rng.choice([-1.0, 1.0])
        o4s = sign * np.array([100.0, 150.0, 300.0]) * big * rng.uniform(1, 2)
        o1 = o4s[0] + rng.uniform(-3, 3) * relax.width("gm")
        f0 = FieldSpec((o1, 0, 0, 0), (0, 1e-3, 0, 1e-3))
        d0 = dressed.denominators(relax, f0.with_detuning(4, o4s))
        s1 = rng.uniform(0.1, 1.0) * 0.01 * np.min(np.abs(d0.p41 * d0.p4))
        f = f0.with_rabi(1, np.sqrt(s1))
        sat = dressed.saturated_populations(relax, f, unsaturated_populations(relax))
        for o4 in o4s:
            full = spectra.normalized_alpha4(relax, f, sat, o4)
            approx = spectra.raman_asymptote(relax, f, sat, o4)
            wing, raman = spectra.raman_terms(relax, f, sat, o4)
            worst = max(worst, abs(full - approx) / (abs(wing) + abs(raman)))
    return _result("Raman asymptote", worst, 0.05, configs=configs)


def awi_threshold(configs=20, seed=0, max_tries=2000) -> CheckResult:
    """|G1|^2 at which resonant l-m absorption changes sign against the
    analytic boundary evaluated with the saturated populations there."""
    rng = np.random.default_rng(seed)
    worst, found = 0.0, 0
    probe = FieldSpec((0, 0, 0, 0), (0, 1e-3, 0, 1e-3))
    for _ in range(max_tries):
        if found == configs:
            break
        relax = draw_relaxation(rng, natural=True)
        thr = spectra.gain_threshold(relax, probe)
        if thr is None:
            continue
        f = probe.with_rabi(1, np.sqrt(thr))
        r = dressed.saturated_populations(relax, f, unsaturated_populations(relax)).r
        if not r["l"] - r["g"] > 0:
            continue
        analytic = relax.width("lg") * relax.width("gm") * (r["l"] - r["m"]) / (r["l"] - r["g"])
        worst = max(worst, abs(thr - analytic) / analytic)
        found += 1
    if found < configs:
        return CheckResult("AWI threshold", False, float("inf"), 0.01, {"found": found})
    return _result("AWI threshold", worst, 0.01, configs=found)


# --------------------------------------------------------------------------
# mixing, continuum structure, cascade, four-wave mixing

def _draw_mixing(rng):
    kw = {k: rng.uniform(-10, 10) for k in ("x1", "x02", "xs", "y1", "y02", "ys")}
    return mixing.MixingConfig(g2=rng.uniform(0, 50), g3=rng.uniform(0, 50),
                               generated_mode=bool(rng.integers(2)), **kw)


def mixing_identities(draws=10_000, seed=0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_id = 0.0
    for _ in range(draws):
        cfg = _draw_mixing(rng)
        res = mixing.dressing_factors(cfg)
        (_, x02, _), (_, _, ys) = cfg.branch_detunings()
        ref = res.f1 / (1 + cfg.g3 / ((1 + 1j * ys) * (1 + 1j * x02)))
        worst_id = max(worst_id, abs(res.f - ref) / max(abs(ref), 1e-300))
    bare = mixing.dressing_factors(mixing.MixingConfig(x1=0.3, x02=-1.2, xs=2.0))
    exact_one = bare.f1 == 1 and bare.fs == 1 and bare.f == 1
    enh = mixing.resonance_enhancement(1e3)
    xs = np.geomspace(10, 1e3, 25)
    slope = np.polyfit(np.log(xs), np.log([mixing.resonance_enhancement(x) for x in xs]), 1)[0]
    passed = worst_id <= 1e-12 and exact_one and abs(enh / 1e6 - 1) <= 2e-3 and abs(slope - 2) <= 0.01
    return CheckResult("mixing identities", bool(passed), worst_id, 1e-12,
                       {"undressed_exact": bool(exact_one), "enhancement_1e3": enh, "slope": float(slope)})


def draw_lics(rng):
    q = {k: rng.uniform(-5, 5) for k in lics.Q_KEYS}
    c = lics.ContinuumCoupling(k1=rng.uniform(), k2=rng.uniform(), k3=rng.uniform(), k4=rng.uniform(),
                               g_mn=rng.uniform(0, 10), g_ll=rng.uniform(0, 10),
                               g_nn=rng.uniform(0, 10), q=q)
    d = lics.LicsDetunings(*rng.uniform(-10, 10, 6))
    return c, d


def lics_checks(draws=10_000, seed=0) -> CheckResult:
    rng = np.random.default_rng(seed)
    zero = lics.ContinuumCoupling()
    res = lics.LicsDetunings()
    worst_zero = max(abs(lics.chi3_ratio(zero, res) - 1), abs(lics.alpha1_ratio(zero, res) - 1),
                     abs(lics.alpha_mu_ratio(zero, res) - 1))
    for _ in range(50):
        d = lics.LicsDetunings(*rng.uniform(-10, 10, 6))
        worst_zero = max(worst_zero, abs(lics.alpha_mu_ratio(zero, d) - 1))
    worst_node = 0.0
    worst_dual = 0.0
    for _ in range(draws):
        c, d = draw_lics(rng)
        node = lics.LicsDetunings(d.x_l, d.x_n, -c.q["gl"], d.y_n, d.dgm, d.pgm)
        worst_node = max(worst_node, abs(lics.fano_window(c, node)))
        ref = oracle.lics_expanded(lics.as_flat(c, d))
        worst_dual = max(worst_dual,
                         abs(lics.chi3_ratio(c, d) - ref["chi3"]) / max(1.0, abs(ref["chi3"])),
                         abs(lics.alpha1_ratio(c, d) - ref["alpha1"]) / max(1.0, abs(ref["alpha1"])),
                         abs(lics.alpha_mu_ratio(c, d) - ref["alpha_mu"]) / max(1.0, abs(ref["alpha_mu"])))
    worst = max(worst_zero, worst_node, worst_dual)
    return _result("continuum structure limits, Fano node, dual evaluation", worst, 1e-12,
                   zero_coupling=worst_zero, fano_node=worst_node, dual=worst_dual)


HALF_INTEGERS = tuple(i / 2 for i in range(0, 9))


def draw_momenta(rng, choices=HALF_INTEGERS):
    """Random (Jm, Jn, Jm1, Jn1) with all four cascade transitions allowed."""
    while True:
        jm, jm1 = rng.choice(choices, 2)
        # n and n1 must differ from m and m1 by an integer (dipole selection)
        jn = jm + rng.integers(-1, 2)
        jn1 = jm1 + rng.integers(-1, 2)
        js = {"m": float(jm), "n": float(jn), "m1": float(jm1), "n1": float(jn1)}
        if min(js.values()) < 0:
            continue
        if all(ri.dipole_allowed(js[a], js[b]) for a, b in ri.CASCADE_TRANSITIONS):
            return js


def draw_doublet(rng, delta_zero=False):
    J = draw_momenta(rng)
    A = {k: rng.uniform(0.1, 10) for k in ("mn", "m1n1", "m1m", "n1n")}
    rho = {k: rng.uniform(0, 1) for k in ("m", "n", "m1", "n1")}
    return ri.CascadeDoublet(A=A, J=J, Gamma=rng.uniform(0.1, 10), Gamma1=rng.uniform(0.1, 10),
                             Delta=0.0 if delta_zero else rng.uniform(-5, 5), rho=rho)


def _sixj_draw(rng):
    while True:
        js = rng.choice(HALF_INTEGERS[:7], 6)
        a, b, c, d, e, f = (int(round(2 * j)) for j in js)
        # keep mostly triangle-valid draws so the comparison is not trivially 0 = 0
        ok = all(abs(x - y) <= z <= x + y and (x + y + z) % 2 == 0
                 for x, y, z in ((a, b, c), (a, e, f), (d, b, f), (d, e, c)))
        if ok or rng.uniform() < 0.1:
            return tuple(float(j) for j in js)


def cascade_checks(f_draws=20, k_draws=10_000, sixj_draws=1000, cond_draws=500, seed=0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_int = 0.0
    for _ in range(f_draws):
        worst_int = max(worst_int, abs(ri.f_integral(rng.uniform(0.1, 10), rng.uniform(0.1, 10),
                                                     rng.uniform(-10, 10))))
    worst_k = 0.0
    for _ in range(k_draws):
        J = draw_momenta(rng)
        worst_k = max(worst_k, abs(ri.angular_factor(J["m"], J["n"], J["m1"], J["n1"])))
    worst_6j = 0.0
    for _ in range(sixj_draws):
        js = _sixj_draw(rng)
        worst_6j = max(worst_6j, abs(ri.wigner6j(*js) - oracle.sixj_by_3j_contraction(*js)))
    tested = failures = 0
    for i in range(cond_draws):
        centre = bool(i % 2)
        d = draw_doublet(rng, delta_zero=centre)
        if centre:
            cond = ri.awi_center_condition(d)
            if cond.holds and cond.relative_margin > 0.05:
                tested += 1
                failures += not ri.cascade_alpha(d, 0.0) < 0
        else:
            cond = ri.awi_wing_condition(d)
            if cond.holds and cond.relative_margin > 0.05:
                tested += 1
                far = 1e3 * max(d.Gamma, d.Gamma1, abs(d.Delta))
                failures += not (ri.cascade_wing(d, far) < 0 and ri.cascade_alpha(d, far) < 0
                                 and ri.cascade_alpha(d, -far) < 0)
    passed = worst_int <= 1e-6 and worst_k <= 1 + 1e-12 and worst_6j <= 1e-10 and failures == 0
    return CheckResult("cascade interference", bool(passed), worst_6j, 1e-10,
                       {"f_integral": worst_int, "max_abs_K": worst_k, "sixj_vs_3j": worst_6j,
                        "conditions_tested": tested, "condition_failures": failures})


def fwm_checks(seed=0, grid_points=2001) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = np.linspace(-100, 100, grid_points)
    worst = 0.0
    for _ in range(20):
        rates = ri.FwmRates.spontaneous(rng.uniform(0.1, 10), rng.uniform(0.1, 10), 0.0)
        worst = max(worst, np.max(np.abs(ri.fwm_bracket(rates, grid) - 1)))
    base = rng.uniform(0.1, 10), rng.uniform(0.1, 10)
    gam = 0.5 * sum(base)
    eps = np.linspace(0.005, 0.1, 20) * gam
    amp = [ri.collision_resonance_amplitude(ri.FwmRates.spontaneous(*base, 0.0, e)) for e in eps]
    slope, icpt = np.polyfit(eps, amp, 1)
    pred = slope * eps + icpt
    r2 = 1 - np.sum((amp - pred) ** 2) / np.sum((amp - np.mean(amp)) ** 2)
    passed = worst <= 1e-12 and r2 > 0.999
    return CheckResult("collision-induced resonance", bool(passed), worst, 1e-12,
                       {"r_squared": float(r2), "slope": float(slope)})


def voigt_reference(width, ku, omega=0.0):
    """Maxwell average of ``width / (width - i(omega - v))`` by adaptive quadrature."""
    def integrand(v):
        return width / (width - 1j * (omega - v)) * np.exp(-(v / ku) ** 2) / (np.sqrt(np.pi) * ku)
    return oracle.adaptive_integrate(integrand, (-np.inf, np.inf), tol=1e-12, points=[omega])


def doppler_checks(seed=0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_voigt = 0.0
    cfg = doppler.DopplerConfig(u=2.0)
    for width, omega in ((1.0, 0.0), (1.0, 1.5), (2.0, -3.0), (1.5, 0.7)):
        got = doppler.velocity_average(lambda v: width / (width - 1j * (omega - v)), cfg)
        worst_voigt = max(worst_voigt, _rel(got, voigt_reference(width, cfg.u, omega)))
    relax = draw_relaxation(rng)
    f = draw_fields(rng)
    f = FieldSpec(f.detuning, f.rabi, (1.0, 1.0, 1.0, 1.0))
    pops = unsaturated_populations(relax)
    grid = np.linspace(-10, 10, 21)
    rest = spectra.spectrum(relax, f, pops, grid, "r2").response
    cold = spectra.spectrum(relax, f, pops, grid, "r2", doppler=doppler.DopplerConfig(u=1e-4)).response
    worst_cold = float(np.max(np.abs(cold - rest) / np.abs(rest)))
    worst_w = max(abs(np.sum(doppler.hermite_rule(n)[1]) - 1) for n in (2, 4, 8, 16, 32, 64, 128, 256, 512))
    passed = worst_voigt <= 1e-8 and worst_cold <= 1e-6 and worst_w <= 1e-14
    return CheckResult("Doppler averaging", bool(passed), worst_voigt, 1e-8,
                       {"cold_limit": worst_cold, "weight_sum": float(worst_w)})


SUITE = {
    "oracle_equivalence": oracle_equivalence,
    "sum_rule": sum_rule_invariance,
    "reduction_identity": reduction_identity,
    "raman_asymptote": raman_asymptote,
    "awi_threshold": awi_threshold,
    "mixing": mixing_identities,
    "lics": lics_checks,
    "cascade": cascade_checks,
    "fwm": fwm_checks,
    "doppler": doppler_checks,
}

# reduced sizes for the command-line self test (seconds rather than minutes)
QUICK = {
    "oracle_equivalence": {"draws": 50},
    "sum_rule": {"configs": 5, "points": 100001},
    "reduction_identity": {"configs": 2, "points": 2000},
    "raman_asymptote": {"configs": 5},
    "awi_threshold": {"configs": 5},
    "mixing": {"draws": 500},
    "lics": {"draws": 500},
    "cascade": {"f_draws": 3, "k_draws": 500, "sixj_draws": 50, "cond_draws": 100},
    "fwm": {},
    "doppler": {},
}


def run_suite(seed=0, quick=True, names=None):
    out = []
    for name, fn in SUITE.items():
        if names is not None and name not in names:
            continue
        kw = dict(QUICK[name]) if quick else {}
        out.append(fn(seed=seed, **kw))
    return out
