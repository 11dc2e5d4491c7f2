import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from nief_spectra import doppler, oracle, scenario, spectra
from nief_spectra.errors import NonConvergent
from nief_spectra.model import COHERENCES, FieldSpec, RelaxationSpec, unsaturated_populations


def voigt(width, ku, omega):
    def integrand(v):
        return width / (width - 1j * (omega - v)) * np.exp(-(v / ku) ** 2) / (np.sqrt(np.pi) * ku)
    return oracle.adaptive_integrate(integrand, (-np.inf, np.inf), tol=1e-12, points=[omega])


def test_rest_frame_is_identity():
    f = FieldSpec((1.0, 2.0, 3.0, 4.0), wavevector=(1.0, -1.0, 0.5, 2.0))
    assert doppler.shifted_fields(f, 0.0) == f


@given(st.floats(-100, 100), st.floats(-5, 5))
def test_copropagating_two_photon_detuning_is_velocity_free(v, k):
    f = FieldSpec((3.0, -1.0, 0.0, 0.0), wavevector=(k, k, 0.0, 0.0))
    moved = doppler.shifted_fields(f, v)
    assert moved.detuning[0] - moved.detuning[1] == pytest.approx(4.0, abs=1e-12)


def test_counterpropagating_two_photon_detuning_shifts():
    f = FieldSpec((3.0, -1.0, 0.0, 0.0), wavevector=(1.5, -1.5, 0.0, 0.0))
    moved = doppler.shifted_fields(f, 1.0)
    assert moved.detuning[0] - moved.detuning[1] == 4.0 - 2 * 1.5


@pytest.mark.parametrize("order", [2, 8, 64, 512])
def test_weights_are_normalized(order):
    x, w = doppler.hermite_rule(order)
    assert abs(w.sum() - 1) <= 1e-14
    assert np.all(w >= 0) and np.all(np.isfinite(x))  # extreme tail weights underflow


@pytest.mark.parametrize("u, order", [(0.0, 64), (0.3, 2), (7.0, 16), (50.0, 512)])
def test_constant_is_preserved(u, order):
    cfg = doppler.DopplerConfig(u=u, order=order, max_order=max(order, 64))
    assert doppler.velocity_average(lambda v: 2.5 - 1j, cfg) == pytest.approx(2.5 - 1j, rel=1e-14)


@pytest.mark.parametrize("width, omega", [(1.0, 0.0), (1.0, 1.5), (2.0, -3.0)])
def test_lorentzian_average_is_voigt(width, omega):
    got = doppler.velocity_average(lambda v: width / (width - 1j * (omega - v)), doppler.DopplerConfig(u=2.0))
    assert abs(got - voigt(width, 2.0, omega)) <= 1e-8 * abs(voigt(width, 2.0, omega))


def test_cold_limit_recovers_atom_at_rest():
    relax = RelaxationSpec.natural({k: 1.0 for k in "gnml"}, pump={"n": 1.0, "l": 0.4})
    pops = unsaturated_populations(relax)
    f = FieldSpec((0.5, 0.0, -0.4, 0.0), (1.5, 1e-3, 0.8, 1e-3), (1.0, 1.0, 1.0, 1.0))
    grid = np.linspace(-6, 6, 25)
    rest = spectra.spectrum(relax, f, pops, grid).response
    cold = spectra.spectrum(relax, f, pops, grid, doppler=doppler.DopplerConfig(u=1e-4)).response
    assert np.max(np.abs(cold - rest) / np.abs(rest)) <= 1e-6


def shipped_doppler_changes():
    """Relative change of the shipped Doppler scenario between orders m and 2m."""
    cfg = json.loads((resources.files("nief_spectra") / "scenarios/doppler_probe.json").read_text())
    relax, f = scenario.build_relaxation(cfg), scenario.build_fields(cfg)
    grid, u = scenario.build_grid(cfg), cfg["doppler"]["u"]
    pops = unsaturated_populations(relax)

    def at(v):
        return spectra.response_at(relax, doppler.shifted_fields(f, v).with_detuning(2, grid - v), pops)

    out = {}
    for m in (32, 64, 128, 256):
        a, b = doppler.average_at_order(at, u, m), doppler.average_at_order(at, u, 2 * m)
        out[m] = float(np.max(np.abs(b - a) / np.abs(b)))
    return out


def test_order_doubling_converges_geometrically():
    changes = shipped_doppler_changes()
    orders = sorted(changes)
    assert all(changes[a] > changes[b] for a, b in zip(orders, orders[1:]))
    assert all(changes[m] <= 1e-8 for m in orders if m >= 128)


@pytest.mark.xfail(strict=True, reason="Gauss-Hermite error for a unit-width line at k*u = 2 is ~4e-5 "
                                       "at order 32; the 1e-8 level is first reached at order 128")
def test_order_doubling_bound_from_order_32():
    changes = shipped_doppler_changes()
    assert all(changes[m] <= 1e-8 for m in changes)


def test_narrow_line_in_broad_distribution_does_not_converge():
    cfg = doppler.DopplerConfig(u=50.0, order=8, max_order=16)
    with pytest.raises(NonConvergent):
        doppler.velocity_average(lambda v: 0.02 / (0.02 - 1j * v), cfg)


@pytest.mark.parametrize("kwargs", [{"u": -1.0}, {"u": 1.0, "order": 3}, {"u": 1.0, "order": 0},
                                    {"u": 1.0, "order": 64, "max_order": 32}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        doppler.DopplerConfig(**kwargs)


def test_raman_feature_position_is_doppler_free():
    widths = {k: 1.0 for k in COHERENCES}
    widths["ln"] = 0.05
    relax = RelaxationSpec({k: 1.0 for k in "gnml"}, widths, pump={"l": 1.0, "n": 0.5})
    pops = unsaturated_populations(relax)
    f = FieldSpec((20.0, 0.0, 0.0, 0.0), (1.0, 1e-3, 0.0, 1e-3), (1.0, 1.0, 0.0, 0.0))
    grid = np.linspace(18, 22, 801)
    step = grid[1] - grid[0]
    rest = grid[np.argmin(spectra.spectrum(relax, f, pops, grid).absorption)]
    for u in (0.5, 1.0, 3.0):
        sp = spectra.spectrum(relax, f, pops, grid, doppler=doppler.DopplerConfig(u=u))
        assert abs(grid[np.argmin(sp.absorption)] - rest) <= step * (1 + 1e-9)


def test_average_broadcasts_over_arrays():
    grid = np.linspace(-3, 3, 7)
    got = doppler.velocity_average(lambda v: 1.0 / (1.0 - 1j * (grid - v)), doppler.DopplerConfig(u=2.0))
    assert_allclose(got, [voigt(1.0, 2.0, x) for x in grid], rtol=1e-8)
