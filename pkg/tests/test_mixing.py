import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from nief_spectra import mixing
from nief_spectra.errors import DegenerateDenominator
from nief_spectra.mixing import MixingConfig

sat_params = st.floats(0.0, 100.0, allow_nan=False)
norm_det = st.floats(-50.0, 50.0, allow_nan=False)


@st.composite
def configs(draw, generated=None):
    gen = draw(st.booleans()) if generated is None else generated
    return MixingConfig(draw(sat_params), draw(sat_params), *(draw(norm_det) for _ in range(6)),
                        generated_mode=gen)


def test_undressed_factors_are_one():
    r = mixing.dressing_factors(MixingConfig(x1=3.0, x02=-1.0, xs=0.5, y1=2.0, y02=1.0, ys=-4.0))
    assert r.f1 == r.fs == r.f == 1
    assert r.power_figure == 0


def test_unit_parameter_arithmetic():
    r = mixing.dressing_factors(MixingConfig(g2=1.0))
    assert (r.f1, r.f, r.fs) == (0.5, 0.5, 1.0)


@given(configs())
def test_f_factorizes_through_f1(cfg):
    r = mixing.dressing_factors(cfg)
    (_, x02, _), (_, _, ys) = cfg.branch_detunings()
    expected = r.f1 / (1 + cfg.g3 / ((1 + 1j * ys) * (1 + 1j * x02)))
    assert abs(r.f - expected) <= 1e-12 * max(abs(expected), 1.0)


@given(configs(generated=True))
def test_generated_mode_is_symmetric_in_the_two_fields(cfg):
    r = mixing.dressing_factors(cfg)
    p01, p02, p03 = (1 + 1j * x for x in (cfg.x1, cfg.x02, cfg.xs))
    sym = 1 / (1 + cfg.g2 / (p01 * p02) + cfg.g3 / (p02 * p03))
    assert abs(r.f - sym) <= 1e-12 * max(abs(sym), 1.0)


def test_generated_mode_ignores_y_detunings():
    a = mixing.dressing_factors(MixingConfig(2.0, 3.0, 0.4, -0.2, 1.1, generated_mode=True))
    b = mixing.dressing_factors(MixingConfig(2.0, 3.0, 0.4, -0.2, 1.1, 9.0, -9.0, 5.0, generated_mode=True))
    assert a == b


@given(configs())
def test_mirror_detunings_conjugate_the_factors(cfg):
    mirrored = MixingConfig(cfg.g2, cfg.g3, -cfg.x1, -cfg.x02, -cfg.xs, -cfg.y1, -cfg.y02, -cfg.ys,
                            cfg.generated_mode)
    a, b = mixing.dressing_factors(cfg), mixing.dressing_factors(mirrored)
    assert_allclose([b.f1, b.fs, b.f], np.conj([a.f1, a.fs, a.f]), rtol=1e-12, atol=1e-15)
    assert b.power_figure == pytest.approx(a.power_figure, rel=1e-12)


def test_susceptibility_ratios_divide_by_bare_denominators():
    cfg = MixingConfig(g2=2.0, g3=0.5, x1=0.3, x02=-0.7, xs=1.2, y1=0.1, y02=0.4, ys=-0.9)
    r = mixing.dressing_factors(cfg)
    assert r.chi1_ratio == pytest.approx(r.f1 / (1 + 0.3j))
    assert r.chis_ratio == pytest.approx(r.fs / (1 + 1.2j))
    assert r.chiNL_ratio == pytest.approx(r.f / ((1 + 0.3j) * (1 - 0.7j) * (1 - 0.9j)))
    assert r.power_figure == pytest.approx(2.0 * 0.5 * abs(r.chiNL_ratio) ** 2)


def test_transparency_with_surviving_mixing():
    # strong 1-2 dressing opens a window for the 0-1 probe while |f| stays finite
    # hand evaluation: P02 = 1 + 3i, 1 + g3/P02 = 1.05 - 0.15i, P02 (1.05 - 0.15i) = 1.5 + 3i,
    # so f1 = 1/(1 + 20/(1.5 + 3i)) = 3/(11 - 16i) and f = 1/(1 + 20.5/(1 + 3i)) = 1/(3.05 - 6.15i)
    r = mixing.dressing_factors(MixingConfig(g2=20.0, g3=0.5, x02=3.0, generated_mode=True))
    assert r.f1 == pytest.approx(3 / (11 - 16j), rel=1e-14)
    assert r.f1.real == pytest.approx(33 / 377, rel=1e-14)
    assert r.f == pytest.approx(1 / (3.05 - 6.15j), rel=1e-14)
    assert r.f1.real < 0.1 < abs(r.f)


def test_arrays_broadcast():
    x = np.linspace(-5, 5, 11)
    r = mixing.dressing_factors(MixingConfig(g2=1.0, g3=2.0, x1=x))
    for xi, fi in zip(x, r.f):
        assert fi == pytest.approx(mixing.dressing_factors(MixingConfig(g2=1.0, g3=2.0, x1=float(xi))).f)


def test_negative_saturation_rejected():
    with pytest.raises(ValueError):
        MixingConfig(g2=-1.0)


def test_degenerate_denominator_reported():
    # unreachable with g2, g3 >= 0 (every dressing term has a positive real part);
    # forcing g2 = -1 past validation makes 1 + g2/(P01 P02) vanish on resonance
    cfg = MixingConfig()
    object.__setattr__(cfg, "g2", -1.0)
    with pytest.raises(DegenerateDenominator):
        mixing.dressing_factors(cfg)


# -- local field ----------------------------------------------------------

def test_zero_local_field_is_identity():
    cfg = MixingConfig(g2=1.0, x1=0.3, xs=-0.2)
    assert mixing.apply_local_field(cfg) == cfg


def test_local_field_tunes_onto_resonance():
    cfg = mixing.apply_local_field(MixingConfig(x1=-2.0, x02=0.7, xs=1.0, y02=0.4, C1=2.0, Cs=-0.5))
    assert (cfg.x1, cfg.xs, cfg.x02, cfg.y02) == (0.0, 0.5, 0.7, 0.4)
    assert cfg.C1 == cfg.Cs == 0
    assert mixing.apply_local_field(cfg) == cfg


def test_f1_minimum_moves_linearly_with_density():
    x = np.linspace(-10, 10, 4001)
    positions = []
    densities = np.array([0.0, 1.0, 2.0, 3.0])
    for n in densities:
        cfg = mixing.apply_local_field(MixingConfig(g2=2.0, x1=x, C1=1.5 * n))
        positions.append(x[np.argmin(np.abs(mixing.dressing_factors(cfg).f1))])
    assert_allclose(positions, -1.5 * densities, atol=x[1] - x[0])


def test_local_field_constant_units():
    # N d^2 / (3 eps0 hbar Gamma) with unit-like inputs scales linearly in density
    c1 = mixing.local_field_constant(1e20, 1e-29, 1e7)
    c2 = mixing.local_field_constant(2e20, 1e-29, 1e7)
    assert c2 == pytest.approx(2 * c1)
    assert c1 == pytest.approx(1e20 * 1e-58 / (3 * 8.8541878128e-12 * 1.054571817e-34 * 1e7))


# -- resonance enhancement ------------------------------------------------

def test_enhancement_one_linewidth_off():
    assert mixing.resonance_enhancement(1.0) == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("branch", ["x1", "x02", "xs"])
def test_enhancement_at_thousand_linewidths(branch):
    assert mixing.resonance_enhancement(1e3, branch) == pytest.approx(1e6, rel=2e-3)


def test_enhancement_log_slope_is_two():
    x = np.geomspace(10, 1e3, 41)
    e = [mixing.resonance_enhancement(v) for v in x]
    slope = np.polyfit(np.log(x), np.log(e), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.01)


def test_all_three_resonances_multiply():
    assert mixing.total_enhancement(1e3) == pytest.approx(1e18, rel=1e-5)
