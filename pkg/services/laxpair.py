# services/laxpair.py

"""
Lax pair of the unit-form NLS equation

    du/dt + i d2u/dz2 + 2i |u|^2 u = 0

with M = (-i zeta, u; -u*, i zeta) and
H = (-i|u|^2 + 2i zeta^2, -i du/dz - 2 u zeta; -i du*/dz + 2 u* zeta, i|u|^2 - 2i zeta^2).

Compatibility residual R = HM - MH - dM/dt + dH/dz. Expanding it gives, for any
smooth u (solution or not):

    R11 = R22 = 0
    R12 = -N(u)
    R21 = conj(N(u))

where N(u) is nls_residual. R21 has exactly the printed lower form; the upper
entry carries the opposite overall sign, which does not affect the condition
R = 0. Zero curvature therefore holds for solutions of the unit-form equation,
i.e. for the complex conjugates of the closed-form solitons in
services.analytic_soliton (see to_unit_nls and soliton_unit_zs).

Derivatives come either from closed forms (analytic_compatibility_residual) or
from second-order centred differences on a (t, z) lattice
(compatibility_residual). iH and -iM are Hermitian for real zeta.
"""

import logging
import math
from itertools import combinations
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import RectBivariateSpline

from models.lax import (
    LaxSample, Matrix2c, ResidualField, SpaceTimeLattice, SpectralParam, ZetaIndependenceReport,
)
from models.soliton import SolitonParams, ZSParams
from models.stepper import Trajectory
from models.waveguide import WaveguideParams
from services.analytic_soliton import check_constraint, sech
from utils.errors import (
    ConfigError, NoSolitonRegimeError, StencilError, TransportStepError,
)
from utils.validators import validate_zeta_list

logger = logging.getLogger(__name__)

ANALYTIC_TOLERANCE = 1e-10
DIAGONAL_TOLERANCE = 1e-12
RICHARDSON_SAFETY = 10.0
MIN_TIME_SLICES = 3
MIN_Z_POINTS = 5

# (z, t) -> LaxSample; принимает скаляры или массивы одинаковой формы
LaxProvider = Callable[[object, object], LaxSample]


# --- Matrices ---

def m_matrix(s: LaxSample, zeta: float) -> Matrix2c:
    """M = (-i zeta, u; -u*, i zeta)."""
    zeta = SpectralParam(zeta).zeta
    u = s.u
    ones = np.ones_like(u)
    return Matrix2c(-1j * zeta * ones, u, -np.conj(u), 1j * zeta * ones)


def h_matrix(s: LaxSample, zeta: float) -> Matrix2c:
    """H = (-i|u|^2 + 2i zeta^2, -i u_z - 2 u zeta; -i u*_z + 2 u* zeta, i|u|^2 - 2i zeta^2)."""
    zeta = SpectralParam(zeta).zeta
    u, u_z = s.u, s.du_dz
    diagonal = -1j * np.abs(u) ** 2 + 2j * zeta ** 2
    return Matrix2c(
        diagonal,
        -1j * u_z - 2.0 * u * zeta,
        -1j * np.conj(u_z) + 2.0 * np.conj(u) * zeta,
        -diagonal,
    )


def hermitian_forms(s: LaxSample, zeta: float) -> Tuple[Matrix2c, Matrix2c]:
    """(iH, -iM): the Schroedinger-form time generator and the propagation-momentum matrix."""
    return h_matrix(s, zeta).scale(1j), m_matrix(s, zeta).scale(-1j)


def nls_residual(s: LaxSample):
    """N(u) = du/dt + i d2u/dz2 + 2i |u|^2 u."""
    return s.du_dt + 1j * s.d2u_dz2 + 2j * np.abs(s.u) ** 2 * s.u


# --- Compatibility residual ---

def analytic_compatibility_residual(s: LaxSample, zeta: float) -> Matrix2c:
    """
    R = HM - MH - dM/dt + dH/dz with dM/dt and dH/dz taken from the sample's
    closed-form derivatives (zeta is constant in z and t).
    """
    u, u_z, u_t, u_zz = s.u, s.du_dz, s.du_dt, s.d2u_dz2
    M = m_matrix(s, zeta)
    H = h_matrix(s, zeta)
    zeros = np.zeros_like(u)
    dM_dt = Matrix2c(zeros, u_t, -np.conj(u_t), zeros)
    d_intensity = 2.0 * np.real(np.conj(u) * u_z)
    dH_dz = Matrix2c(
        -1j * d_intensity,
        -1j * u_zz - 2.0 * zeta * u_z,
        -1j * np.conj(u_zz) + 2.0 * zeta * np.conj(u_z),
        1j * d_intensity,
    )
    return H @ M - M @ H - dM_dt + dH_dz


def _check_stencil(lattice: SpaceTimeLattice, max_spacing: Optional[float]) -> None:
    n_t, n_z = lattice.shape
    if n_t < MIN_TIME_SLICES:
        raise StencilError(f"need >= {MIN_TIME_SLICES} time slices, got {n_t}")
    if n_z < MIN_Z_POINTS:
        raise StencilError(f"need >= {MIN_Z_POINTS} z points, got {n_z}")
    if max_spacing is not None and max(lattice.dz, lattice.dt) > max_spacing:
        raise StencilError(
            f"Lattice spacing (dz={lattice.dz:.3g}, dt={lattice.dt:.3g}) exceeds declared "
            f"maximum {max_spacing:.3g}"
        )


def _d(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    return np.gradient(values, spacing, axis=axis, edge_order=2)


def compatibility_residual(lattice: SpaceTimeLattice, zeta: float,
                           max_spacing: Optional[float] = None) -> ResidualField:
    """
    R = HM - MH - dM/dt + dH/dz on every lattice node, with u_z, dM/dt and
    dH/dz from second-order centred differences (second-order one-sided at the
    lattice edges).

    Raises:
        StencilError: fewer than 3 time slices, fewer than 5 z points, or a
            spacing above max_spacing.
    """
    _check_stencil(lattice, max_spacing)
    u = lattice.samples
    u_z = _d(u, lattice.dz, axis=1)
    # производные по t и z второго порядка в LaxSample здесь не нужны
    s = LaxSample(u=u, du_dz=u_z, du_dt=np.zeros_like(u), d2u_dz2=np.zeros_like(u))
    M = m_matrix(s, zeta)
    H = h_matrix(s, zeta)
    dM_dt = Matrix2c(*(_d(np.broadcast_to(e, u.shape), lattice.dt, axis=0)
                       for e in (M.m11, M.m12, M.m21, M.m22)))
    dH_dz = Matrix2c(*(_d(e, lattice.dz, axis=1) for e in (H.m11, H.m12, H.m21, H.m22)))
    R = H @ M - M @ H - dM_dt + dH_dz
    return ResidualField(matrix=R, z_axis=lattice.z_axis, t_axis=lattice.t_axis, zeta=float(zeta))


def residual_diagonals_vanish(R, tolerance: float = DIAGONAL_TOLERANCE) -> Tuple[bool, float]:
    """
    True when max(|R11|, |R22|) <= tolerance; returns the flag and the maximum.
    Accepts a ResidualField or a Matrix2c.
    """
    matrix = R.matrix if isinstance(R, ResidualField) else R
    max_diag = matrix.max_diag()
    return max_diag <= tolerance, max_diag


def richardson_tolerance(lattice: SpaceTimeLattice, zeta: float = 0.0,
                         safety: float = RICHARDSON_SAFETY) -> float:
    """
    Self-calibrated finite-difference tolerance: safety times the Richardson
    estimate |R_h - R_2h| / 3 of the O(h^2) stencil error, where R_2h is the
    residual on the every-other-node sublattice.

    Raises:
        StencilError: if the lattice is too small to coarsen.
    """
    coarse = lattice.coarsened()
    fine_R = compatibility_residual(lattice, zeta).matrix
    coarse_R = compatibility_residual(coarse, zeta).matrix
    estimate = 0.0
    for name in ('m11', 'm12', 'm21', 'm22'):
        fine_entry = getattr(fine_R, name)[::2, ::2]
        estimate = max(estimate, float(np.max(np.abs(fine_entry - getattr(coarse_R, name)))) / 3.0)
    logger.debug(f"Richardson estimate {estimate:.3e} on {lattice}")
    return safety * estimate


def check_zeta_independence(lattice: SpaceTimeLattice, zetas: Sequence[float],
                            tolerance: Optional[float] = None) -> ZetaIndependenceReport:
    """
    Compares the off-diagonal residual fields for every pair of zeta values.

    When tolerance is None it is calibrated with richardson_tolerance at the
    first zeta.

    Raises:
        ConfigError: fewer than two distinct zeta values.
    """
    if not validate_zeta_list(list(zetas)):
        raise ConfigError(f"Zeta independence needs >= 2 distinct finite values, got {list(zetas)}")
    zetas = tuple(float(z) for z in zetas)
    fields = {z: compatibility_residual(lattice, z).matrix for z in zetas}

    deviation = 0.0
    for a, b in combinations(zetas, 2):
        deviation = max(
            deviation,
            float(np.max(np.abs(fields[a].m12 - fields[b].m12))),
            float(np.max(np.abs(fields[a].m21 - fields[b].m21))),
        )
    if tolerance is None:
        tolerance = richardson_tolerance(lattice, zetas[0])
    report = ZetaIndependenceReport(
        zetas=zetas,
        max_pairwise_deviation=deviation,
        max_offdiag_by_zeta={z: fields[z].max_offdiag() for z in zetas},
        tolerance=float(tolerance),
        passed=deviation <= tolerance,
    )
    logger.info(f"Zeta independence over {zetas}: deviation {deviation:.3e}, tolerance {tolerance:.3e}")
    return report


# --- Normalization bridge ---

def _bridge_scale(w: WaveguideParams) -> float:
    if not w.supports_bright_soliton:
        raise NoSolitonRegimeError(f"C*K = {w.gvd_C * w.kerr_K:.6g} <= 0: no unit-form NLS map")
    return math.sqrt(w.kerr_K / w.gvd_C)


def to_unit_nls(samples, times, w: WaveguideParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Maps an envelope a(z, t) of da/dt = i(C/2)a_zz + iK|a|^2 a to the unit form:
    u(z, s) = conj(sqrt(K/C) a(z, t)) at s = C t / 2.
    """
    scale = _bridge_scale(w)
    u = np.conj(scale * np.asarray(samples, dtype=np.complex128))
    s = 0.5 * w.gvd_C * np.asarray(times, dtype=float)
    return u, s


def from_unit_nls(u_samples, s_times, w: WaveguideParams) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of to_unit_nls."""
    scale = _bridge_scale(w)
    a = np.conj(np.asarray(u_samples, dtype=np.complex128)) / scale
    t = 2.0 * np.asarray(s_times, dtype=float) / w.gvd_C
    return a, t


def soliton_unit_zs(p: SolitonParams, w: WaveguideParams) -> ZSParams:
    """
    ZS parameters of the unit-form image of the sech soliton: eta = 1/(2 xi),
    A0 = 1/xi. The unit-form field itself is the conjugate of that ZS field.
    """
    check_constraint(p, w)
    return ZSParams(eta=0.5 / p.width_xi, A0=1.0 / p.width_xi)


# --- Providers ---

def zs_sample(p: ZSParams, z, t, conjugate: bool = True) -> LaxSample:
    """
    ZS field and its closed-form derivatives at (z, t); conjugated by default so
    that the sample solves the unit-form equation when A0 = 2 eta.
    """
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    theta = -4.0 * (p.xi_zs ** 2 - p.eta ** 2) * t - 2.0 * p.xi_zs * z + p.phi
    X = 2.0 * p.eta * (z - p.x0) + 8.0 * p.eta * p.xi_zs * t
    q = p.A0 * np.exp(1j * theta) * sech(X)
    tanh = np.tanh(X)
    log_dx = -2j * p.xi_zs - 2.0 * p.eta * tanh
    q_z = q * log_dx
    q_zz = q * (log_dx ** 2 - 4.0 * p.eta ** 2 * sech(X) ** 2)
    q_t = q * (-4j * (p.xi_zs ** 2 - p.eta ** 2) - 8.0 * p.eta * p.xi_zs * tanh)
    if conjugate:
        return LaxSample(np.conj(q), np.conj(q_z), np.conj(q_t), np.conj(q_zz))
    return LaxSample(q, q_z, q_t, q_zz)


def zs_provider(p: ZSParams, conjugate: bool = True) -> LaxProvider:
    return lambda z, t: zs_sample(p, z, t, conjugate=conjugate)


def lattice_provider(lattice: SpaceTimeLattice) -> LaxProvider:
    """
    Bicubic spline through a lattice; derivatives come from the spline.

    Raises:
        StencilError: fewer than 4 nodes along either axis.
    """
    n_t, n_z = lattice.shape
    if n_t < 4 or n_z < 4:
        raise StencilError(f"Spline provider needs >= 4 nodes per axis, got {lattice.shape}")
    t_axis, z_axis = lattice.t_axis, lattice.z_axis
    real = RectBivariateSpline(t_axis, z_axis, lattice.samples.real)
    imag = RectBivariateSpline(t_axis, z_axis, lattice.samples.imag)

    def provide(z, t) -> LaxSample:
        def ev(dt_order: int, dz_order: int):
            return (real.ev(t, z, dx=dt_order, dy=dz_order)
                    + 1j * imag.ev(t, z, dx=dt_order, dy=dz_order))
        return LaxSample(u=ev(0, 0), du_dz=ev(0, 1), du_dt=ev(1, 0), d2u_dz2=ev(0, 2))

    return provide


def sample_lattice(provider: LaxProvider, z0: float, dz: float, n_z: int,
                   t0: float, dt: float, n_t: int) -> SpaceTimeLattice:
    """Evaluates a provider on a uniform (t, z) lattice."""
    z = z0 + dz * np.arange(n_z)
    t = t0 + dt * np.arange(n_t)
    T, Z = np.meshgrid(t, z, indexing='ij')
    return SpaceTimeLattice(provider(Z, T).u, z0, dz, t0, dt)


def lattice_from_trajectory(trajectory: Trajectory, w: WaveguideParams) -> SpaceTimeLattice:
    """
    Unit-form lattice built from equally spaced trajectory snapshots.

    Raises:
        StencilError: fewer than 3 snapshots or non-uniform snapshot times.
    """
    times = trajectory.times
    if times.size < MIN_TIME_SLICES:
        raise StencilError(f"need >= {MIN_TIME_SLICES} time slices, got {times.size}")
    spacing = np.diff(times)
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0.0):
        raise StencilError("Snapshot times must be equally spaced to form a lattice")
    samples = np.vstack([s.samples for s in trajectory.snapshots])
    u, s = to_unit_nls(samples, times, w)
    if s[1] < s[0]:
        u, s = u[::-1], s[::-1]
    grid = trajectory.grid
    return SpaceTimeLattice(u, grid.z_min, grid.dz, float(s[0]), float(s[1] - s[0]))


# --- Parallel transport ---

def _generator(provider: LaxProvider, z: float, t: float, d_z: float, d_t: float,
               zeta: float) -> np.ndarray:
    s = provider(z, t)
    return d_z * m_matrix(s, zeta).to_array() + d_t * h_matrix(s, zeta).to_array()


def _rk4(provider, psi, start, d_z, d_t, s0, h, zeta) -> np.ndarray:
    """One classical RK4 step in the segment parameter s in [0, 1]."""
    z0, t0 = start

    def rhs(s, value):
        return _generator(provider, z0 + s * d_z, t0 + s * d_t, d_z, d_t, zeta) @ value

    k1 = rhs(s0, psi)
    k2 = rhs(s0 + 0.5 * h, psi + 0.5 * h * k1)
    k3 = rhs(s0 + 0.5 * h, psi + 0.5 * h * k2)
    k4 = rhs(s0 + h, psi + h * k3)
    return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def parallel_transport(psi0, path: Sequence[Tuple[float, float]], provider: LaxProvider,
                       zeta: float, max_step: float = 0.01,
                       local_error_bound: float = 1e-6) -> np.ndarray:
    """
    Integrates d psi = (M dz + H dt) psi along straight segments joining the
    (z, t) vertices of path, with classical RK4. psi0 is a 2-vector or a 2x2
    matrix of column vectors.

    Each step is checked by step doubling; an estimate above local_error_bound
    aborts the transport.

    Raises:
        TransportStepError: local error estimate above the bound.
    """
    psi = np.array(psi0, dtype=np.complex128)
    if len(path) < 2:
        return psi

    for index, (start, end) in enumerate(zip(path[:-1], path[1:])):
        d_z, d_t = end[0] - start[0], end[1] - start[1]
        n_steps = max(1, int(math.ceil(max(abs(d_z), abs(d_t)) / max_step)))
        h = 1.0 / n_steps
        for step in range(n_steps):
            s0 = step * h
            full = _rk4(provider, psi, start, d_z, d_t, s0, h, zeta)
            half = _rk4(provider, psi, start, d_z, d_t, s0, 0.5 * h, zeta)
            half = _rk4(provider, half, start, d_z, d_t, s0 + 0.5 * h, 0.5 * h, zeta)
            estimate = float(np.max(np.abs(half - full))) / 15.0
            if estimate > local_error_bound:
                logger.error(f"Transport refused on segment {index}, step {step}: estimate {estimate:.3e}")
                raise TransportStepError(index, estimate, local_error_bound)
            psi = half
    return psi


def rectangle_path(origin: Tuple[float, float], width: float, height: float):
    """Closed rectangle z-first: (z0,t0) -> (z0+w,t0) -> (z0+w,t0+h) -> (z0,t0+h) -> (z0,t0)."""
    z0, t0 = origin
    return [(z0, t0), (z0 + width, t0), (z0 + width, t0 + height), (z0, t0 + height), (z0, t0)]


def holonomy(provider: LaxProvider, origin: Tuple[float, float], width: float, height: float,
             zeta: float, max_step: float = 0.01,
             local_error_bound: float = 1e-6) -> Tuple[np.ndarray, float]:
    """
    Transports the identity around a rectangle; returns the loop matrix and its
    max-entry deviation from the identity (zero for a flat connection).
    """
    loop = parallel_transport(np.eye(2), rectangle_path(origin, width, height), provider, zeta,
                              max_step=max_step, local_error_bound=local_error_bound)
    deviation = float(np.max(np.abs(loop - np.eye(2))))
    return loop, deviation


def path_difference(provider: LaxProvider, origin: Tuple[float, float], width: float, height: float,
                    zeta: float, max_step: float = 0.01) -> float:
    """
    Max-entry difference between transport z-then-t and t-then-z to the
    opposite corner of the rectangle.
    """
    z0, t0 = origin
    corner = (z0 + width, t0 + height)
    z_first = parallel_transport(np.eye(2), [origin, (z0 + width, t0), corner], provider, zeta, max_step)
    t_first = parallel_transport(np.eye(2), [origin, (z0, t0 + height), corner], provider, zeta, max_step)
    return float(np.max(np.abs(z_first - t_first)))
