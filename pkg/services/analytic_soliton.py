# services/analytic_soliton.py

"""
Closed-form one-soliton solutions of the envelope equation

    da/dt = i (C/2) d2a/dz2 + i K |a|^2 a

(carrier exp(-i omega0 t) and group delay z/vg already removed), their
constraint, photon number and spectral envelope, plus the four-parameter
Zakharov-Shabat form.

Sign conventions, checked by direct substitution (see tests/test_laxpair.py):
  * A exp(i K A^2 t/2) sech(z/xi) solves the equation above when K A^2 = C/xi^2.
  * The ZS form A0 exp{-4i(xi^2 - eta^2)t - 2i xi x + i phi} / cosh[2 eta (x - x0) + 8 eta xi t]
    with A0 = 2*eta solves the same equation with C = K = 2; at xi = x0 = phi = 0
    and 2*eta = 1/xi it coincides with the sech form sample by sample.
  * The unit-form equation du/dt + i d2u/dz2 + 2i|u|^2 u = 0 used by the Lax pair
    is solved by the complex conjugates of these fields, not by the fields themselves.
"""

import logging
import math

import numpy as np

from models.grid import ComplexField, Grid
from models.soliton import SolitonParams, ZSParams
from models.waveguide import WaveguideParams
from utils.errors import ConfigError, ConstraintError, NoSolitonRegimeError
from utils.validators import validate_positive

logger = logging.getLogger(__name__)

CONSTRAINT_TOLERANCE = 1e-12
SECH_OVERFLOW_GUARD = 700.0


def sech(x):
    """
    Overflow-guarded sech: 2/(e^x + e^-x), and exactly 0 for |x| > 700.
    """
    x = np.asarray(x, dtype=float)
    guarded = np.abs(x) > SECH_OVERFLOW_GUARD
    safe = np.where(guarded, 0.0, x)
    result = np.where(guarded, 0.0, 2.0 / (np.exp(safe) + np.exp(-safe)))
    return result[()] if result.ndim == 0 else result


def _require_soliton_regime(w: WaveguideParams) -> None:
    if not w.supports_bright_soliton:
        raise NoSolitonRegimeError(
            f"C*K = {w.gvd_C * w.kerr_K:.6g} <= 0: no bright-soliton regime"
        )


def constraint_residual(p: SolitonParams, w: WaveguideParams) -> float:
    """
    Relative balance (K A^2 - C/xi^2) / (C/xi^2); zero for an exact soliton.

    Raises:
        NoSolitonRegimeError: if C*K <= 0.
    """
    _require_soliton_regime(w)
    target = w.gvd_C / p.width_xi ** 2
    return (w.kerr_K * p.amplitude_A ** 2 - target) / target


def bind_soliton(amplitude_A: float, width_xi: float, w: WaveguideParams) -> SolitonParams:
    """
    Builds SolitonParams and checks the constraint against the waveguide.

    Raises:
        ConstraintError: if |constraint_residual| >= 1e-12.
    """
    p = SolitonParams(amplitude_A, width_xi)
    check_constraint(p, w)
    return p


def check_constraint(p: SolitonParams, w: WaveguideParams) -> None:
    residual = constraint_residual(p, w)
    if abs(residual) >= CONSTRAINT_TOLERANCE:
        raise ConstraintError(
            f"K*A^2 = C/xi^2 violated: relative residual {residual:.3e} "
            f"(A={p.amplitude_A}, xi={p.width_xi}, C={w.gvd_C}, K={w.kerr_K})"
        )


def photon_number(p: SolitonParams) -> float:
    """n = 2 A^2 xi."""
    return 2.0 * p.amplitude_A ** 2 * p.width_xi


def from_photon_number(n: float, w: WaveguideParams) -> SolitonParams:
    """
    Soliton carrying n photons: xi = 2C/(K n), A^2 = n/(2 xi).

    Raises:
        ConfigError: if n <= 0.
        NoSolitonRegimeError: if C*K <= 0.
    """
    if not validate_positive(n):
        raise ConfigError(f"Photon number must be > 0, got {n}")
    _require_soliton_regime(w)
    xi = 2.0 * w.gvd_C / (w.kerr_K * n)
    amplitude = math.sqrt(n / (2.0 * xi))
    p = SolitonParams(amplitude, xi)
    logger.debug(f"Soliton for n={n}: A={amplitude:.12g}, xi={xi:.12g}")
    return p


def kerr_phase_rate(p: SolitonParams, w: WaveguideParams) -> float:
    """Angular rate K A^2 / 2 of the soliton's global phase."""
    return 0.5 * w.kerr_K * p.amplitude_A ** 2


def sech_profile(p: SolitonParams, g: Grid) -> ComplexField:
    """A sech(z_j / xi) with no constraint check (the pulse shape alone)."""
    return ComplexField(g, p.amplitude_A * sech(g.z / p.width_xi))


def soliton_field(p: SolitonParams, w: WaveguideParams, g: Grid, t: float) -> ComplexField:
    """
    Samples A exp(i K A^2 t / 2) sech(z_j / xi) on the grid.

    Raises:
        ConstraintError / NoSolitonRegimeError: if (p, w) is not an exact soliton.
    """
    check_constraint(p, w)
    phase = np.exp(1j * kerr_phase_rate(p, w) * t)
    return ComplexField(g, phase * sech_profile(p, g).samples)


def sech_spectrum(xi: float, k):
    """
    Transform of sech(z/xi): xi*sqrt(pi/2)*sech(pi*k*xi/2).
    """
    if not validate_positive(xi):
        raise ConfigError(f"xi must be > 0, got {xi}")
    return xi * math.sqrt(math.pi / 2.0) * sech(math.pi * np.asarray(k, dtype=float) * xi / 2.0)


def soliton_spectrum(p: SolitonParams, w: WaveguideParams, k, t: float):
    """
    Spectral envelope A exp(i K A^2 t/2) F(k): every wavevector carries the same
    Kerr phase.
    """
    return p.amplitude_A * np.exp(1j * kerr_phase_rate(p, w) * t) * sech_spectrum(p.width_xi, k)


def zs_soliton_field(p: ZSParams, g: Grid, t: float) -> ComplexField:
    """
    Samples the ZS one-soliton with the ZS coordinate x identified with z.
    """
    x = g.z
    phase = -4.0 * (p.xi_zs ** 2 - p.eta ** 2) * t - 2.0 * p.xi_zs * x + p.phi
    argument = 2.0 * p.eta * (x - p.x0) + 8.0 * p.eta * p.xi_zs * t
    return ComplexField(g, p.A0 * np.exp(1j * phase) * sech(argument))


def zs_peak_position(p: ZSParams, t: float) -> float:
    """Centre of the ZS pulse at time t: x0 - 4 xi t."""
    return p.x0 - 4.0 * p.xi_zs * t


def reduce_zs(p: ZSParams) -> SolitonParams:
    """
    Reduction xi_zs = x0 = phi = 0, 2*eta = 1/xi to the sech form.

    Raises:
        ConfigError: if xi_zs, x0 or phi is non-zero.
    """
    offending = {name: getattr(p, name) for name in ('xi_zs', 'x0', 'phi') if getattr(p, name) != 0.0}
    if offending:
        raise ConfigError(f"ZS reduction requires xi_zs = x0 = phi = 0, got {offending}")
    return SolitonParams(amplitude_A=p.A0, width_xi=1.0 / (2.0 * p.eta))
