# tests/test_propagator.py

import math

import numpy as np
import pytest

from models.grid import ComplexField, Grid
from models.soliton import SolitonParams
from models.stepper import StepperConfig
from models.waveguide import WaveguideParams
from services import analytic_soliton, field_core, propagator
from utils.errors import BlowUpError, ConfigError


def make_waveguide(C=2.0, K=2.0, omega0=10.0, vg=2.0):
    return WaveguideParams(omega0=omega0, k0=5.0, vg=vg, gvd_C=C, kerr_K=K)


def soliton_error(waveguide, grid, soliton, dt, t_end):
    f0 = analytic_soliton.soliton_field(soliton, waveguide, grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=dt, t_end=t_end, snapshot_stride=10 ** 9))
    exact = analytic_soliton.soliton_field(soliton, waveguide, grid, t_end)
    return propagator.relative_l2_error(trajectory.final, exact), trajectory


@pytest.mark.parametrize("delta_k, expected", [(0.0, 10.0), (1.0, 12.25), (-1.0, 8.25)])
def test_dispersion_omega(delta_k, expected):
    w = make_waveguide(C=0.5, vg=2.0)
    assert propagator.dispersion_omega(w, delta_k) == pytest.approx(expected)


# --- substeps ---

def test_linear_step_keeps_constant_field():
    grid = Grid(0.0, 2.0 * math.pi, 16)
    f = ComplexField(grid, np.full(16, 0.3 - 0.2j))
    out = propagator.linear_step(f, make_waveguide(), 0.1)
    assert field_core.max_abs_diff(f, out) < 1e-15


def test_linear_step_plane_wave_phase():
    grid = Grid(0.0, 2.0 * math.pi, 16)
    w = make_waveguide(C=1.5)
    dt = 0.05
    f = ComplexField(grid, np.exp(3j * grid.z))
    out = propagator.linear_step(f, w, dt)
    np.testing.assert_allclose(out.samples, f.samples * np.exp(-0.5j * 1.5 * 9.0 * dt), atol=1e-12)


def test_linear_step_is_unitary(wide_grid, unit_soliton, waveguide):
    rng = np.random.default_rng(3)
    f = ComplexField(wide_grid, analytic_soliton.sech_profile(unit_soliton, wide_grid).samples
                     * np.exp(1j * rng.normal(size=1024)))
    out = propagator.linear_step(f, waveguide, 0.37)
    assert field_core.l2_norm_sq(out) == pytest.approx(field_core.l2_norm_sq(f), rel=1e-12)


def test_nonlinear_step_examples():
    grid = Grid(0.0, 1.0, 8)
    zero = ComplexField(grid, np.zeros(8))
    assert np.all(propagator.nonlinear_step(zero, 2.0, 0.1).samples == 0.0)

    ones = propagator.nonlinear_step(ComplexField(grid, np.ones(8)), 2.0, 0.1)
    np.testing.assert_allclose(np.angle(ones.samples), 0.2, atol=1e-15)
    np.testing.assert_allclose(np.abs(ones.samples), 1.0, atol=1e-15)


def test_nonlinear_step_keeps_modulus(wide_grid):
    rng = np.random.default_rng(4)
    f = ComplexField(wide_grid, rng.normal(size=1024) + 1j * rng.normal(size=1024))
    out = propagator.nonlinear_step(f, 3.0, 0.2)
    np.testing.assert_allclose(np.abs(out.samples), np.abs(f.samples), rtol=1e-14)


def test_strang_step_degenerate_splittings(wide_grid, unit_soliton):
    f = analytic_soliton.sech_profile(unit_soliton, wide_grid)
    linear_only = make_waveguide(K=0.0)
    assert field_core.max_abs_diff(
        propagator.strang_step(f, linear_only, 0.01), propagator.linear_step(f, linear_only, 0.01)) < 1e-13
    kerr_only = make_waveguide(C=0.0)
    assert field_core.max_abs_diff(
        propagator.strang_step(f, kerr_only, 0.01), propagator.nonlinear_step(f, 2.0, 0.01)) < 1e-13


def test_strang_one_step_error_is_third_order(waveguide, wide_grid, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0)

    def one_step_error(dt):
        exact = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, dt)
        return field_core.max_abs_diff(propagator.strang_step(f0, waveguide, dt), exact)

    ratio = one_step_error(0.02) / one_step_error(0.01)
    assert 6.0 < ratio < 10.0


# --- evolve ---

def test_evolve_zero_time(waveguide, wide_grid, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=1e-3, t_end=0.0))
    assert len(trajectory.snapshots) == 1
    np.testing.assert_array_equal(trajectory.final.samples, f0.samples)
    assert trajectory.invariants[0][0] == pytest.approx(2.0, abs=1e-10)


def test_evolve_snapshot_stride(waveguide, wide_grid, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=0.01, t_end=0.25, snapshot_stride=10))
    np.testing.assert_allclose(trajectory.times, [0.0, 0.1, 0.2, 0.25], atol=1e-14)
    assert len(trajectory.invariants) == 4


def test_dispersive_spreading_without_kerr():
    grid = Grid(-20.0, 20.0, 512)
    w = make_waveguide(K=0.0)
    f0 = ComplexField(grid, np.exp(-grid.z ** 2))
    trajectory = propagator.evolve(f0, w, StepperConfig(dt=0.01, t_end=1.0, snapshot_stride=10))
    peaks = [np.max(np.abs(s.samples)) for s in trajectory.snapshots]
    assert np.all(np.diff(peaks) < 0.0)


def test_blow_up_reports_step(wide_grid, waveguide):
    f0 = ComplexField(wide_grid, np.full(1024, 1e200))
    with np.errstate(all="ignore"):
        with pytest.raises(BlowUpError) as info:
            propagator.evolve(f0, waveguide, StepperConfig(dt=1e-3, t_end=0.01))
    assert info.value.step_index == 1


def test_soliton_one_phase_period(waveguide, wide_grid, unit_soliton):
    period = 4.0 * math.pi / (waveguide.kerr_K * unit_soliton.amplitude_A ** 2)
    error, trajectory = soliton_error(waveguide, wide_grid, unit_soliton, 1e-3, period)
    assert error < 1e-5

    profile = analytic_soliton.sech_profile(unit_soliton, wide_grid).samples.real
    assert np.max(np.abs(np.abs(trajectory.final.samples) - profile)) < 1e-6

    n0, p0, e0 = trajectory.invariants[0]
    n1, p1, e1 = trajectory.invariants[-1]
    assert abs(n1 - n0) / n0 < 1e-10
    assert abs(p1 - p0) < 1e-10
    assert abs(e1 - e0) / abs(e0) < 1e-6


def test_global_convergence_order(waveguide, wide_grid, unit_soliton):
    errors = [soliton_error(waveguide, wide_grid, unit_soliton, dt, 1.0)[0] for dt in (4e-3, 2e-3, 1e-3)]
    for coarse, fine in zip(errors[:-1], errors[1:]):
        assert coarse / fine == pytest.approx(4.0, abs=0.5)


def test_kerr_phase_after_unit_time(waveguide, wide_grid, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=2.5e-4, t_end=1.0, snapshot_stride=200))
    assert propagator.measure_center_phase(trajectory.final) == pytest.approx(1.0, abs=1e-6)
    assert propagator.measure_phase_rate(trajectory) == pytest.approx(1.0, abs=1e-6)


def test_conserved_quantities_examples(waveguide, wide_grid, unit_soliton):
    n, p, e = propagator.conserved_quantities(
        analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0), waveguide)
    assert n == pytest.approx(2.0, abs=1e-10)
    assert p == pytest.approx(0.0, abs=1e-14)
    # (C/2) * 2/3 - (K/2) * 4/3 for sech(z)
    assert e == pytest.approx(-2.0 / 3.0, abs=1e-10)

    zero = ComplexField(wide_grid, np.zeros(1024))
    assert propagator.conserved_quantities(zero, waveguide) == (0.0, 0.0, 0.0)


def test_momentum_of_boosted_pulse(waveguide, wide_grid):
    profile = np.exp(-wide_grid.z ** 2)
    f = ComplexField(wide_grid, profile * np.exp(0.5j * wide_grid.z))
    n, p, _ = propagator.conserved_quantities(f, waveguide)
    assert p == pytest.approx(0.5 * n, rel=1e-10)


# --- frames ---

def test_envelope_frame_identity_at_zero_time(wide_grid, unit_soliton):
    f = analytic_soliton.sech_profile(unit_soliton, wide_grid)
    w = make_waveguide()
    assert field_core.max_abs_diff(propagator.to_envelope_frame(f, w, 0.0), f) < 1e-15


def test_envelope_frame_round_trip(wide_grid, unit_soliton):
    rng = np.random.default_rng(5)
    f = ComplexField(wide_grid, analytic_soliton.sech_profile(unit_soliton, wide_grid).samples
                     * np.exp(1j * rng.normal(size=1024)))
    w = make_waveguide()
    back = propagator.to_envelope_frame(propagator.from_envelope_frame(f, w, 1.7), w, 1.7)
    assert field_core.max_abs_diff(back, f) < 1e-12


def test_raw_pulse_moves_at_group_velocity():
    grid = Grid(-20.0, 20.0, 512)
    w = make_waveguide(vg=1.0)
    t = 2.5
    envelope = ComplexField(grid, np.exp(-grid.z ** 2))
    raw = propagator.from_envelope_frame(envelope, w, t)
    np.testing.assert_allclose(raw.samples * np.exp(1j * w.omega0 * t),
                               np.exp(-(grid.z - w.vg * t) ** 2), atol=1e-10)


def test_measure_phase_rate_needs_two_snapshots(waveguide, wide_grid, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, wide_grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=1e-3, t_end=0.0))
    with pytest.raises(ConfigError):
        propagator.measure_phase_rate(trajectory)


def test_stepper_rounds_to_whole_steps():
    cfg = StepperConfig(dt=1e-3, t_end=4.0 * math.pi)
    assert cfg.steps == 12566
    assert abs(cfg.steps * cfg.effective_dt - cfg.t_end) < 1e-12 * cfg.t_end


@pytest.mark.parametrize("kwargs", [
    {"dt": 0.0, "t_end": 1.0},
    {"dt": 1e-3, "t_end": -1.0},
    {"dt": 1e-3, "t_end": 1.0, "snapshot_stride": 0},
    {"dt": 1e-3, "t_end": 1.0, "scheme": "lie"},
])
def test_stepper_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        StepperConfig(**kwargs)


def test_soliton_with_other_coefficients():
    w = make_waveguide(C=1.0, K=4.0)
    p = SolitonParams(amplitude_A=0.5, width_xi=1.0)
    grid = Grid(-20.0, 20.0, 1024)
    error, _ = soliton_error(w, grid, p, 1e-3, 1.0)
    assert error < 1e-5
