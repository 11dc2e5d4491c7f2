import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nief_spectra import oracle, relaxation_induced as ri
from nief_spectra.checks import draw_doublet, draw_momenta
from nief_spectra.errors import NonHalfInteger, ZeroReferenceA
from nief_spectra.relaxation_induced import CascadeDoublet, FwmRates

half = st.integers(0, 8).map(lambda t: t / 2)
positive = st.floats(0.1, 10.0, allow_nan=False)


def doublet(J, A, rho, Gamma=1.0, Gamma1=1.0, Delta=0.0):
    return CascadeDoublet(A=A, J=dict(zip(("m", "n", "m1", "n1"), J)), Gamma=Gamma, Gamma1=Gamma1,
                          Delta=Delta, rho=rho)


# -- 6j symbols -----------------------------------------------------------

def test_sixj_reference_values():
    assert ri.wigner6j(0, 0, 0, 0, 0, 0) == 1.0
    assert ri.wigner6j(2, 1, 0, 0, 1, 1) == 0.0  # (2, 1, 0) is not a triangle
    assert ri.wigner6j(1, 1, 1, 1, 1, 1) == pytest.approx(1 / 6, abs=1e-12)
    assert oracle.sixj_by_3j_contraction(1, 1, 1, 1, 1, 1) == pytest.approx(1 / 6, abs=1e-12)


def test_sixj_with_a_zero_entry():
    # {a b c; b a 0} = (-1)^(a+b+c) / sqrt((2a+1)(2b+1))
    for a, b in [(1, 1), (1.5, 0.5), (2, 1), (2.5, 1.5)]:
        for c in np.arange(abs(a - b), a + b + 1):
            expected = (-1) ** int(a + b + c) / np.sqrt((2 * a + 1) * (2 * b + 1))
            assert ri.wigner6j(a, b, c, b, a, 0) == pytest.approx(expected, abs=1e-14)


@given(st.tuples(*[half] * 6))
def test_sixj_symmetries(js):
    j1, j2, j3, j4, j5, j6 = js
    ref = ri.wigner6j(*js)
    cols = [(j1, j4), (j2, j5), (j3, j6)]
    for perm in itertools.permutations(cols):
        top, bottom = zip(*perm)
        assert ri.wigner6j(*top, *bottom) == pytest.approx(ref, abs=1e-12)
    # swap upper and lower entries in two columns
    assert ri.wigner6j(j4, j5, j3, j1, j2, j6) == pytest.approx(ref, abs=1e-12)
    assert ri.wigner6j(j1, j5, j6, j4, j2, j3) == pytest.approx(ref, abs=1e-12)


@given(st.tuples(*[st.integers(0, 6).map(lambda t: t / 2)] * 6))
def test_sixj_matches_three_j_contraction(js):
    assert ri.wigner6j(*js) == pytest.approx(oracle.sixj_by_3j_contraction(*js), abs=1e-10)


@pytest.mark.parametrize("bad", [0.25, -1, "x", 1 / 3])
def test_sixj_rejects_non_half_integers(bad):
    with pytest.raises(NonHalfInteger):
        ri.wigner6j(bad, 1, 1, 1, 1, 1)


def test_dipole_selection():
    assert ri.dipole_allowed(1, 0) and ri.dipole_allowed(0.5, 0.5) and ri.dipole_allowed(2, 3)
    assert not ri.dipole_allowed(0, 0) and not ri.dipole_allowed(2, 0)
    assert not ri.dipole_allowed(1, 0.5)  # the change in J must be an integer


# -- interference coefficients --------------------------------------------

def test_equal_einstein_coefficients():
    # sqrt(A * A * A / A) = A
    d = doublet((1, 0, 0, 1), {k: 2.5 for k in ("mn", "m1n1", "m1m", "n1n")}, {})
    assert ri.interference_coefficients(d).C == pytest.approx(2.5, rel=1e-15)


def test_angular_factor_hand_value():
    # J = (m, n, m1, n1) = (1, 0, 0, 1): K = 3 {1 0 1; 1 0 1} = 3 * 1/3
    assert ri.angular_factor(1, 0, 0, 1) == pytest.approx(1.0, rel=1e-15)
    # all one-half: K = -2 {1/2 1/2 1; 1/2 1/2 1} = -2/6
    assert ri.angular_factor(0.5, 0.5, 0.5, 0.5) == pytest.approx(-1 / 3, rel=1e-14)


def test_angular_factor_via_contraction_oracle():
    rng = np.random.default_rng(7)
    for _ in range(50):
        J = draw_momenta(rng)
        tm, tn1 = int(2 * J["m"]), int(2 * J["n1"])
        expected = (-1) ** ((tm + tn1) // 2) * np.sqrt((tm + 1) * (tn1 + 1)) \
            * oracle.sixj_by_3j_contraction(J["m"], J["n"], 1, J["n1"], J["m1"], 1)
        assert ri.angular_factor(J["m"], J["n"], J["m1"], J["n1"]) == pytest.approx(expected, abs=1e-10)


def test_angular_factor_is_bounded():
    rng = np.random.default_rng(11)
    ks = [ri.angular_factor(J["m"], J["n"], J["m1"], J["n1"]) for J in (draw_momenta(rng) for _ in range(2000))]
    assert max(abs(k) for k in ks) <= 1 + 1e-12
    assert min(ks) < 0 < max(ks)


def test_zero_reference_rate():
    d = doublet((1, 0, 0, 1), {"mn": 1, "m1n1": 0.0, "m1m": 1, "n1n": 1}, {})
    with pytest.raises(ZeroReferenceA):
        ri.interference_coefficients(d)


@pytest.mark.parametrize("kwargs", [
    {"A": {"mn": 1, "m1n1": 1, "m1m": 1}},
    {"A": {"mn": -1, "m1n1": 1, "m1m": 1, "n1n": 1}},
    {"Gamma": 0.0},
    {"J": {"m": 0, "n": 0, "m1": 0, "n1": 1}},
])
def test_doublet_validation(kwargs):
    base = dict(A={"mn": 1, "m1n1": 1, "m1m": 1, "n1n": 1}, J={"m": 1, "n": 0, "m1": 0, "n1": 1},
                Gamma=1.0, Gamma1=1.0)
    base.update(kwargs)
    with pytest.raises(ValueError):
        CascadeDoublet(**base)


# -- interference profile -------------------------------------------------

def test_profile_centre_and_wing():
    assert ri.f_interference(0.0, 0.7, 2.3) == 1.0
    omega = 1e5
    assert ri.f_interference(omega, 0.7, 2.3) == pytest.approx(-0.7 * 2.3 / omega**2, rel=1e-8)


@given(positive, positive, st.floats(-10, 10))
def test_profile_has_zero_area(g, g1, delta):
    assert abs(ri.f_integral(g, g1, delta)) <= 1e-6


def test_no_interference_gives_two_lorentzians():
    # without the m1 -> m channel C = 0 and the interference term drops out
    d = doublet((1, 0, 0, 1), {"mn": 2.0, "m1n1": 3.0, "m1m": 0.0, "n1n": 1.0},
                {"n": 0.6, "m": 0.1, "n1": 0.5, "m1": 0.2}, Gamma=0.5, Gamma1=1.5, Delta=2.0)
    assert ri.interference_coefficients(d).C == 0
    O = np.linspace(-10, 10, 41)
    two = d.N * 2.0 * 0.5 / (0.25 + O**2) + d.N1 * 3.0 * 1.5 / (2.25 + (O - 2.0) ** 2)
    np.testing.assert_allclose(ri.cascade_alpha(d, O), two, rtol=1e-14)


def test_wavelength_prefactor():
    A = {"mn": 1, "m1n1": 1, "m1m": 1, "n1n": 1}
    rho = {"n": 1.0}
    plain = doublet((1, 0, 0, 1), A, rho)
    scaled = CascadeDoublet(A=A, J=plain.J, Gamma=1.0, Gamma1=1.0, rho=rho, lam=2.0)
    assert ri.cascade_alpha(scaled, 0.3) == pytest.approx(ri.cascade_alpha(plain, 0.3) / np.pi, rel=1e-15)


def test_full_lineshape_approaches_wing_form():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(500):
        d = draw_doublet(rng)
        ic = ri.interference_coefficients(d)
        O = 100 * max(d.Gamma, d.Gamma1, abs(d.Delta))
        scale = (abs(d.N * d.A["mn"] * d.Gamma) + abs(d.N1 * d.A["m1n1"] * d.Gamma1)
                 + abs(d.N1 * d.A["m1n1"] * ic.K * ic.C)) / O**2
        for o in (O, -O):
            worst = max(worst, abs(ri.cascade_alpha(d, o) - ri.cascade_wing(d, o)) / scale)
    assert worst <= 0.05


# -- gain conditions ------------------------------------------------------

WING_A = {"mn": 1.0, "m1n1": 1.0, "m1m": 4.0, "n1n": 4.0}  # K = 1, C = 4


def test_wing_condition_boundary_and_gain():
    edge = doublet((1, 0, 0, 1), WING_A, {"n": 0.5, "m": 0.4, "n1": 0.5, "m1": 0.4})
    cond = ri.awi_wing_condition(edge)
    assert cond.margin == pytest.approx(0.0, abs=1e-15) and not cond.holds
    d = doublet((1, 0, 0, 1), WING_A, {"n": 0.5, "m": 0.45, "n1": 0.5, "m1": 0.4})
    cond = ri.awi_wing_condition(d)
    assert cond.holds and cond.margin == pytest.approx(0.15)
    assert d.N > 0 and d.N1 > 0  # neither transition is inverted
    assert ri.cascade_wing(d, 1e3) < 0 and ri.cascade_alpha(d, 1e3) < 0 and ri.cascade_alpha(d, -1e3) < 0


def test_wing_condition_without_second_transition_population():
    d = doublet((1, 0, 0, 1), WING_A, {"n": 0.5, "m": 0.4})
    cond = ri.awi_wing_condition(d)
    assert d.N1 == 0 and not cond.holds and cond.margin == -cond.rhs < 0


def test_centre_condition_gain():
    A = {"mn": 1.0, "m1n1": 1.0, "m1m": 6.0, "n1n": 6.0}  # K = -1/3, C = 6
    d = doublet((0.5, 0.5, 0.5, 0.5), A, {"n": 0.5, "m": 0.45, "n1": 0.5, "m1": 0.4})
    cond = ri.awi_center_condition(d)
    assert cond.holds and cond.margin == pytest.approx(0.1)
    assert ri.cascade_alpha(d, 0.0) == pytest.approx(-0.1)
    shifted = doublet((0.5, 0.5, 0.5, 0.5), A, d.rho, Delta=0.5)
    assert not ri.awi_center_condition(shifted).holds


def test_relative_margin():
    assert ri.AwiCondition(True, 1.0, 3.0, 2.0).relative_margin == pytest.approx(0.2)
    assert ri.AwiCondition(False, 0.0, 0.0, 0.0).relative_margin == 0.0


def test_conditions_imply_gain_on_random_doublets():
    rng = np.random.default_rng(5)
    tested = 0
    for i in range(500):
        centre = bool(i % 2)
        d = draw_doublet(rng, delta_zero=centre)
        cond = ri.awi_center_condition(d) if centre else ri.awi_wing_condition(d)
        if not (cond.holds and cond.relative_margin > 0.05):
            continue
        tested += 1
        if centre:
            assert ri.cascade_alpha(d, 0.0) < 0
        else:
            far = 1e3 * max(d.Gamma, d.Gamma1, abs(d.Delta))
            assert ri.cascade_wing(d, far) < 0 and ri.cascade_alpha(d, far) < 0
    assert tested > 0


# -- collision-induced resonance -------------------------------------------

@given(positive, positive)
def test_radiative_widths_cancel_the_resonance(gn, gn1):
    rates = FwmRates.spontaneous(gn, gn1)
    assert abs(ri.collision_resonance_amplitude(rates)) <= 1e-15 * (gn + gn1)
    grid = np.linspace(-50, 50, 201)
    assert np.max(np.abs(ri.fwm_bracket(rates, grid) - 1)) <= 1e-12


@given(positive, positive, positive)
def test_decaying_lower_level_amplitude(gn, gn1, gg):
    assert ri.collision_resonance_amplitude(FwmRates.spontaneous(gn, gn1, gg)) == pytest.approx(-gg)


@given(positive, positive, st.floats(0.0, 1.0))
def test_dephasing_amplitude_is_additive(gn, gn1, eps):
    rates = FwmRates.spontaneous(gn, gn1, dephasing=eps)
    assert ri.collision_resonance_amplitude(rates) == pytest.approx(eps, abs=1e-12)
    assert abs(ri.fwm_bracket(rates, 0.0) - 1) == pytest.approx(eps / rates.Gamma_nn1, rel=1e-12)


def test_bracket_far_from_resonance():
    rates = FwmRates.spontaneous(1.0, 2.0, dephasing=0.3)
    assert abs(ri.fwm_bracket(rates, 1e9) - 1) < 1e-9


def test_resonance_amplitude_linear_in_dephasing():
    eps = np.linspace(0.005, 0.1, 20) * 1.5
    amp = [ri.collision_resonance_amplitude(FwmRates.spontaneous(1.0, 2.0, dephasing=e)) for e in eps]
    slope, icpt = np.polyfit(eps, amp, 1)
    pred = slope * eps + icpt
    r2 = 1 - np.sum((amp - pred) ** 2) / np.sum((amp - np.mean(amp)) ** 2)
    assert r2 > 0.999 and slope == pytest.approx(1.0)


@given(positive, positive, positive, st.floats(0, 1), st.floats(-20, 20), st.floats(-20, 20))
def test_two_pole_form_is_the_bracket_form(gn, gn1, gg, eps, o1, o2):
    rates = FwmRates.spontaneous(gn, gn1, gg, eps, Omega1=o1, Omega2=o2, Omega=o2 - o1)
    a, b = ri.fwm_coherence_two_pole(rates), ri.fwm_coherence(rates)
    assert abs(a + b) <= 1e-12 * max(abs(b), 1e-300)


def test_rates_must_be_positive():
    with pytest.raises(ValueError):
        FwmRates(1.0, 0.0, 1.0)
