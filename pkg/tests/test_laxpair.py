# tests/test_laxpair.py

import numpy as np
import pytest

from models.grid import Grid
from models.lax import LaxSample, Matrix2c, SpaceTimeLattice
from models.run_config import DEFAULT_ZETAS
from models.soliton import SolitonParams, ZSParams
from models.stepper import StepperConfig
from models.waveguide import WaveguideParams
from services import analytic_soliton, laxpair, propagator
from utils.errors import ConfigError, NoSolitonRegimeError, StencilError, TransportStepError

ZETAS = list(DEFAULT_ZETAS)
GENERAL_ZS = ZSParams(eta=0.7, xi_zs=0.3, x0=0.2, phi=0.4, A0=1.4)


def gaussian_sample(z, t):
    """u = exp(-(z - 0.3 t)^2 + 0.5 i z + i t): smooth, not an NLS solution."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    x = z - 0.3 * t
    u = np.exp(-x ** 2 + 0.5j * z + 1j * t)
    log_dz = -2.0 * x + 0.5j
    return LaxSample(
        u=u,
        du_dz=log_dz * u,
        du_dt=(0.6 * x + 1j) * u,
        d2u_dz2=(log_dz ** 2 - 2.0) * u,
    )


def zero_sample(z, t):
    zeros = np.zeros(np.broadcast(np.asarray(z), np.asarray(t)).shape)
    return LaxSample(zeros, zeros, zeros, zeros)


def gaussian_lattice(spacing, half_width=4.0, duration=0.4):
    n_z = int(round(2 * half_width / spacing)) + 1
    n_t = int(round(duration / spacing)) + 1
    return laxpair.sample_lattice(gaussian_sample, -half_width, spacing, n_z, 0.0, spacing, n_t)


# --- matrices ---

def test_m_matrix_examples():
    M = laxpair.m_matrix(LaxSample(0, 0, 0, 0), 1.0)
    np.testing.assert_allclose(M.to_array(), [[-1j, 0], [0, 1j]])
    M = laxpair.m_matrix(LaxSample(1.0, 0, 0, 0), 0.0)
    np.testing.assert_allclose(M.to_array(), [[0, 1], [-1, 0]])


def test_h_matrix_examples():
    H = laxpair.h_matrix(LaxSample(0, 0, 0, 0), 1.0)
    np.testing.assert_allclose(H.to_array(), [[2j, 0], [0, -2j]])
    H = laxpair.h_matrix(LaxSample(1.0, 0, 0, 0), 0.0)
    np.testing.assert_allclose(H.to_array(), [[-1j, 0], [0, 1j]])


@pytest.mark.parametrize("zeta", [np.nan, np.inf])
def test_matrices_reject_non_finite_zeta(zeta):
    with pytest.raises(ConfigError):
        laxpair.m_matrix(LaxSample(1.0, 0, 0, 0), zeta)
    with pytest.raises(ConfigError):
        laxpair.h_matrix(LaxSample(1.0, 0, 0, 0), zeta)


@pytest.mark.parametrize("zeta", ZETAS)
def test_matrices_traceless_and_structured(zeta):
    s = gaussian_sample(np.linspace(-2, 2, 9), 0.3)
    M = laxpair.m_matrix(s, zeta)
    H = laxpair.h_matrix(s, zeta)
    assert np.max(np.abs(M.trace())) == 0.0
    assert np.max(np.abs(H.trace())) == 0.0
    np.testing.assert_array_equal(M.m21, -np.conj(M.m12))


@pytest.mark.parametrize("zeta", ZETAS)
def test_hermitian_forms(zeta):
    s = gaussian_sample(0.37, 0.11)
    iH, minus_iM = laxpair.hermitian_forms(s, zeta)
    for matrix in (iH, minus_iM):
        np.testing.assert_allclose(matrix.to_array(), matrix.conj_transpose().to_array(), atol=1e-15)


# --- residual oracle ---

@pytest.mark.parametrize("k, omega, expected_factor", [(0.0, 2.0, 0.0), (1.0, 1.0, 0.0), (1.0, 0.0, 1j)])
def test_nls_residual_plane_waves(k, omega, expected_factor):
    z, t = 0.4, 0.9
    u = np.exp(1j * (k * z - omega * t))
    s = LaxSample(u, 1j * k * u, -1j * omega * u, -k ** 2 * u)
    assert laxpair.nls_residual(s) == pytest.approx(expected_factor * u, abs=1e-15)
    assert laxpair.nls_residual(LaxSample(0, 0, 0, 0)) == 0


def test_unit_zs_soliton_convention():
    z = np.linspace(-5.0, 5.0, 41)
    for t in (0.0, 0.35):
        conjugated = laxpair.zs_sample(GENERAL_ZS, z, t, conjugate=True)
        plain = laxpair.zs_sample(GENERAL_ZS, z, t, conjugate=False)
        assert np.max(np.abs(laxpair.nls_residual(conjugated))) < 1e-12
        assert np.max(np.abs(laxpair.nls_residual(plain))) > 1e-2


# --- analytic compatibility residual ---

@pytest.mark.parametrize("zeta", ZETAS)
def test_analytic_residual_vanishes_on_soliton(zeta):
    Z, T = np.meshgrid(np.linspace(-4.0, 4.0, 81), np.linspace(0.0, 0.5, 11))
    R = laxpair.analytic_compatibility_residual(laxpair.zs_sample(GENERAL_ZS, Z, T), zeta)
    assert R.max_abs() < laxpair.ANALYTIC_TOLERANCE
    ok, max_diag = laxpair.residual_diagonals_vanish(R)
    assert ok and max_diag < 1e-12


def test_analytic_residual_detects_wrong_convention():
    Z, T = np.meshgrid(np.linspace(-4.0, 4.0, 81), np.linspace(0.0, 0.5, 11))
    R = laxpair.analytic_compatibility_residual(laxpair.zs_sample(GENERAL_ZS, Z, T, conjugate=False), 0.7)
    assert R.max_offdiag() > 1e-2
    assert R.max_diag() < 1e-12


@pytest.mark.parametrize("zeta", ZETAS)
def test_analytic_residual_equals_nls_residual(zeta):
    Z, T = np.meshgrid(np.linspace(-3.0, 3.0, 61), np.linspace(0.0, 0.5, 6))
    s = gaussian_sample(Z, T)
    R = laxpair.analytic_compatibility_residual(s, zeta)
    N = laxpair.nls_residual(s)
    np.testing.assert_allclose(R.m12, -N, atol=1e-12)
    np.testing.assert_allclose(R.m21, np.conj(N), atol=1e-12)
    assert R.max_diag() < 1e-12


# --- finite-difference residual ---

def test_zero_field_residual_is_exactly_zero():
    lattice = laxpair.sample_lattice(zero_sample, -1.0, 0.1, 21, 0.0, 0.1, 5)
    R = laxpair.compatibility_residual(lattice, 0.7)
    assert R.max_diag == 0.0 and R.max_offdiag == 0.0
    assert laxpair.residual_diagonals_vanish(R) == (True, 0.0)
    report = laxpair.check_zeta_independence(lattice, ZETAS)
    assert report.max_pairwise_deviation == 0.0
    assert report.passed


def test_numerical_residual_matches_oracle_within_richardson_tolerance():
    lattice = gaussian_lattice(0.02)
    tolerance = laxpair.richardson_tolerance(lattice, 0.7)
    R = laxpair.compatibility_residual(lattice, 0.7)
    T, Z = np.meshgrid(lattice.t_axis, lattice.z_axis, indexing="ij")
    N = laxpair.nls_residual(gaussian_sample(Z, T))
    assert np.max(np.abs(R.matrix.m12 + N)) < tolerance
    assert np.max(np.abs(R.matrix.m21 - np.conj(N))) < tolerance
    assert laxpair.residual_diagonals_vanish(R, tolerance)[0]


def test_numerical_diagonal_is_second_order():
    coarse = laxpair.compatibility_residual(gaussian_lattice(0.04), 0.7).max_diag
    fine = laxpair.compatibility_residual(gaussian_lattice(0.02), 0.7).max_diag
    assert 3.0 < coarse / fine < 5.5


def test_zeta_independence_on_non_solution():
    report = laxpair.check_zeta_independence(gaussian_lattice(0.02), ZETAS)
    assert report.passed
    assert report.max_pairwise_deviation < report.tolerance
    assert set(report.max_offdiag_by_zeta) == set(ZETAS)
    assert report.to_dict()["passed"] is True


@pytest.mark.parametrize("zetas", [[1.0], [0.5, 0.5], []])
def test_zeta_independence_needs_two_values(zetas):
    with pytest.raises(ConfigError):
        laxpair.check_zeta_independence(gaussian_lattice(0.04), zetas)


def test_stencil_needs_three_time_slices():
    lattice = laxpair.sample_lattice(gaussian_sample, -1.0, 0.1, 21, 0.0, 0.1, 2)
    with pytest.raises(StencilError, match="need >= 3 time slices"):
        laxpair.compatibility_residual(lattice, 0.0)


def test_stencil_declared_spacing():
    lattice = gaussian_lattice(0.04)
    with pytest.raises(StencilError):
        laxpair.compatibility_residual(lattice, 0.0, max_spacing=0.01)


def test_lattice_rejects_bad_shape():
    with pytest.raises(StencilError):
        SpaceTimeLattice(np.zeros(5), 0.0, 0.1, 0.0, 0.1)


# --- normalization bridge ---

def test_unit_bridge_round_trip():
    w = WaveguideParams(omega0=10.0, k0=5.0, vg=1.0, gvd_C=0.8, kerr_K=3.0)
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 16)) + 1j * rng.normal(size=(4, 16))
    times = np.array([0.0, 0.1, 0.2, 0.3])
    u, s = laxpair.to_unit_nls(a, times, w)
    back, t = laxpair.from_unit_nls(u, s, w)
    np.testing.assert_allclose(back, a, rtol=1e-12)
    np.testing.assert_allclose(t, times, atol=1e-15)


@pytest.mark.parametrize("C, K, A, xi", [(2.0, 2.0, 1.0, 1.0), (1.0, 4.0, 0.5, 1.0), (0.5, 2.0, 1.0, 0.5)])
def test_bridge_maps_soliton_to_conjugated_zs(C, K, A, xi):
    w = WaveguideParams(omega0=10.0, k0=5.0, vg=1.0, gvd_C=C, kerr_K=K)
    p = SolitonParams(A, xi)
    grid = Grid(-20.0, 20.0, 256)
    times = np.array([0.0, 0.4, 1.3])
    samples = np.vstack([analytic_soliton.soliton_field(p, w, grid, t).samples for t in times])
    u, s = laxpair.to_unit_nls(samples, times, w)
    T, Z = np.meshgrid(s, grid.z, indexing="ij")
    expected = laxpair.zs_sample(laxpair.soliton_unit_zs(p, w), Z, T, conjugate=True).u
    np.testing.assert_allclose(u, expected, atol=1e-13)


def test_bridge_needs_bright_regime():
    w = WaveguideParams(omega0=10.0, k0=5.0, vg=1.0, gvd_C=2.0, kerr_K=-2.0)
    with pytest.raises(NoSolitonRegimeError):
        laxpair.to_unit_nls(np.ones(4), np.zeros(4), w)


def test_soliton_unit_zs(waveguide, unit_soliton):
    zs = laxpair.soliton_unit_zs(unit_soliton, waveguide)
    assert (zs.eta, zs.A0, zs.xi_zs, zs.x0, zs.phi) == (0.5, 1.0, 0.0, 0.0, 0.0)


def test_lattice_from_evolved_soliton(waveguide, unit_soliton):
    grid = Grid(-20.0, 20.0, 1024)
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, grid, 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=1e-3, t_end=0.2, snapshot_stride=20))
    lattice = laxpair.lattice_from_trajectory(trajectory, waveguide)
    assert lattice.shape == (11, 1024)
    assert lattice.dt == pytest.approx(0.02)
    tolerance = laxpair.richardson_tolerance(lattice, 0.0)
    assert laxpair.compatibility_residual(lattice, 0.0).max_offdiag < tolerance


def test_lattice_from_short_trajectory(waveguide, unit_soliton):
    f0 = analytic_soliton.soliton_field(unit_soliton, waveguide, Grid(-20.0, 20.0, 256), 0.0)
    trajectory = propagator.evolve(f0, waveguide, StepperConfig(dt=1e-3, t_end=0.0))
    with pytest.raises(StencilError, match="need >= 3 time slices"):
        laxpair.lattice_from_trajectory(trajectory, waveguide)


# --- providers and transport ---

def test_lattice_provider_interpolates():
    lattice = laxpair.sample_lattice(laxpair.zs_provider(GENERAL_ZS), -3.0, 0.02, 301, 0.0, 0.02, 11)
    provide = laxpair.lattice_provider(lattice)
    z, t = lattice.z_axis[100], lattice.t_axis[4]
    assert provide(z, t).u == pytest.approx(lattice.samples[4, 100], abs=1e-12)
    exact = laxpair.zs_sample(GENERAL_ZS, 0.123, 0.057)
    approx = provide(0.123, 0.057)
    assert abs(approx.u - exact.u) < 1e-5
    assert abs(approx.du_dz - exact.du_dz) < 1e-3


def test_lattice_provider_needs_four_nodes():
    lattice = laxpair.sample_lattice(gaussian_sample, -1.0, 0.1, 21, 0.0, 0.1, 3)
    with pytest.raises(StencilError):
        laxpair.lattice_provider(lattice)


def test_transport_empty_path():
    psi0 = np.array([1.0, 2.0j])
    np.testing.assert_array_equal(laxpair.parallel_transport(psi0, [], zero_sample, 0.7), psi0)
    np.testing.assert_array_equal(laxpair.parallel_transport(psi0, [(0.0, 0.0)], zero_sample, 0.7), psi0)


@pytest.mark.parametrize("zeta", [-1.0, 0.7, 2.0])
def test_transport_free_field_is_exponential(zeta):
    length = 0.5
    psi0 = np.array([1.0 + 0.5j, -0.3j])
    psi = laxpair.parallel_transport(psi0, [(0.0, 0.0), (length, 0.0)], zero_sample, zeta)
    expected = psi0 * np.exp(np.array([-1j, 1j]) * zeta * length)
    np.testing.assert_allclose(psi, expected, atol=1e-8)


@pytest.mark.parametrize("zeta", [-1.0, 0.0, 0.7])
def test_holonomy_on_exact_soliton(waveguide, unit_soliton, zeta):
    provider = laxpair.zs_provider(laxpair.soliton_unit_zs(unit_soliton, waveguide))
    loop, deviation = laxpair.holonomy(provider, (0.5, 0.0), 0.1, 0.1, zeta)
    assert loop.shape == (2, 2)
    assert deviation < 1e-6


def test_holonomy_decreases_under_refinement():
    provider = laxpair.zs_provider(GENERAL_ZS)
    deviations = [
        laxpair.holonomy(provider, (0.1, 0.0), 0.1, 0.1, 0.7, max_step=h, local_error_bound=1.0)[1]
        for h in (0.1, 0.05, 0.025)
    ]
    assert deviations[0] > deviations[1] > deviations[2]


def test_holonomy_on_non_solution_stays_finite():
    provider = laxpair.zs_provider(GENERAL_ZS, conjugate=False)
    deviations = [
        laxpair.holonomy(provider, (0.1, 0.0), 0.1, 0.1, 0.7, max_step=h)[1] for h in (0.01, 0.005)
    ]
    assert min(deviations) > 1e-3
    assert deviations[0] == pytest.approx(deviations[1], rel=1e-3)


def test_path_difference_on_exact_soliton():
    provider = laxpair.zs_provider(GENERAL_ZS)
    assert laxpair.path_difference(provider, (0.0, 0.0), 0.1, 0.1, 0.7) < 1e-6


def test_transport_refuses_large_steps():
    with pytest.raises(TransportStepError) as info:
        laxpair.parallel_transport(np.eye(2), [(0.0, 0.0), (0.0, 1.0)], zero_sample, 50.0, max_step=0.1)
    assert info.value.segment_index == 0
    assert info.value.error_estimate > info.value.bound


def test_matrix_algebra():
    a = Matrix2c(1, 2j, 3, 4)
    b = Matrix2c(0, 1, 1, 0)
    np.testing.assert_allclose((a @ b).to_array(), a.to_array() @ b.to_array())
    np.testing.assert_allclose((a - a).to_array(), np.zeros((2, 2)))
    assert a.trace() == 5
    with pytest.raises(ConfigError):
        Matrix2c(np.nan, 0, 0, 0)
