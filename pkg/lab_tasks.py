# lab_tasks.py
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import scipy.fft

from models.run_config import InitialConditionTypeEnum, RunConfig
from models.soliton import SolitonParams
from models.stepper import StepperConfig
from services import analytic_soliton, cli_io, field_core, laxpair, propagator, quantum_stats
from utils.errors import ConstraintError, NoSolitonRegimeError

# Configure logging
logger = logging.getLogger(__name__)
# Note: Actual handler configuration is in utils.logger.py

# число снимков на период фазы в soliton-check
PHASE_SAMPLES_PER_PERIOD = 64
# граница |k| <= SPECTRUM_K_LIMIT / xi для сравнения спектров
SPECTRUM_K_LIMIT = 8.0


def resolve_soliton(cfg: RunConfig) -> SolitonParams:
    """
    Параметры sech-солитона из начального условия конфигурации.

    Args:
        cfg (RunConfig): Конфигурация запуска.

    Returns:
        SolitonParams: Амплитуда и ширина солитона.
    """
    kind = cfg.initial_type
    if kind is InitialConditionTypeEnum.SOLITON:
        return cfg.soliton
    if kind is InitialConditionTypeEnum.PHOTON_NUMBER:
        return analytic_soliton.from_photon_number(cfg.photon_number, cfg.waveguide)
    return analytic_soliton.reduce_zs(cfg.zs_soliton)


def initial_field(cfg: RunConfig):
    """Начальное поле при t = 0 для команды simulate."""
    if cfg.initial_type is InitialConditionTypeEnum.ZS_SOLITON:
        return analytic_soliton.zs_soliton_field(cfg.zs_soliton, cfg.grid, 0.0)
    return analytic_soliton.soliton_field(resolve_soliton(cfg), cfg.waveguide, cfg.grid, 0.0)


def _drift(values, index: int, relative: bool = True) -> float:
    """
    Максимальное отклонение величины от начального значения.
    Импульс P у симметричного импульса равен нулю до округления, поэтому для него
    берётся абсолютное отклонение (relative=False).
    """
    series = np.array([q[index] for q in values])
    scale = abs(series[0]) if relative and series[0] != 0.0 else 1.0
    return float(np.max(np.abs(series - series[0])) / scale)


def execute_simulate(cfg: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """
    Исполнитель команды simulate: эволюция начального поля, запись снимков,
    манифеста и таблицы сохраняющихся величин.

    Args:
        cfg (RunConfig): Конфигурация запуска.
        out_dir (Path): Каталог для результатов.

    Returns:
        Dict[str, Any]: Сводка запуска (число снимков, дрейфы N, P, E, пути файлов).
    """
    logger.info(f"Запущена задача simulate ({cfg.initial_type.value}), вывод в {out_dir}")
    f0 = initial_field(cfg)
    trajectory = propagator.evolve(f0, cfg.waveguide, cfg.stepper)

    manifest = cli_io.write_trajectory(trajectory, cfg.waveguide, out_dir)
    invariants = cli_io.write_invariants_csv(trajectory, out_dir / "invariants.csv")

    summary = {
        "snapshots": len(trajectory.snapshots),
        "t_end": float(trajectory.times[-1]),
        "N_drift": _drift(trajectory.invariants, 0),
        "P_drift": _drift(trajectory.invariants, 1, relative=False),
        "E_drift": _drift(trajectory.invariants, 2),
        "manifest": str(manifest),
        "invariants": str(invariants),
    }
    logger.info(f"simulate завершена: N drift {summary['N_drift']:.3e}, {summary['snapshots']} снимков")
    return summary


def execute_soliton_check(cfg: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """
    Исполнитель команды soliton-check: эволюция солитона на один период фазы
    4*pi/|K A^2| и сравнение с аналитическим решением.

    Если режима светлого солитона нет (C*K <= 0) или условие KA^2 = C/xi^2
    нарушено, отчёт содержит флаг soliton_regime = false и сообщение.
    """
    logger.info("Запущена задача soliton-check")
    report: Dict[str, Any] = {"soliton_regime": True}
    try:
        p = resolve_soliton(cfg)
        analytic_soliton.check_constraint(p, cfg.waveguide)
    except NoSolitonRegimeError as e:
        logger.warning(f"soliton-check: {e}")
        report.update(soliton_regime=False, message="no soliton regime", detail=str(e))
        cli_io.write_json(report, out_dir / "soliton_check.json")
        return report
    except ConstraintError as e:
        logger.warning(f"soliton-check: {e}")
        report.update(soliton_regime=False, message="constraint violated", detail=str(e))
        cli_io.write_json(report, out_dir / "soliton_check.json")
        return report

    w = cfg.waveguide
    rate = analytic_soliton.kerr_phase_rate(p, w)
    period = 2.0 * math.pi / abs(rate)
    steps = max(1, int(round(period / cfg.stepper.dt)))
    stepper = StepperConfig(
        dt=cfg.stepper.dt,
        t_end=period,
        snapshot_stride=max(1, steps // PHASE_SAMPLES_PER_PERIOD),
        scheme=cfg.stepper.scheme,
    )

    f0 = analytic_soliton.soliton_field(p, w, cfg.grid, 0.0)
    trajectory = propagator.evolve(f0, w, stepper)
    exact = analytic_soliton.soliton_field(p, w, cfg.grid, float(trajectory.times[-1]))
    final = trajectory.final
    profile = analytic_soliton.sech_profile(p, cfg.grid).samples

    report.update(
        amplitude_A=p.amplitude_A,
        width_xi=p.width_xi,
        period=period,
        steps=stepper.steps,
        dt=stepper.effective_dt,
        relative_l2_error=propagator.relative_l2_error(final, exact),
        max_modulus_error=float(np.max(np.abs(np.abs(final.samples) - profile))),
        measured_phase_rate=propagator.measure_phase_rate(trajectory),
        expected_phase_rate=rate,
        N_drift=_drift(trajectory.invariants, 0),
        P_drift=_drift(trajectory.invariants, 1, relative=False),
        E_drift=_drift(trajectory.invariants, 2),
    )
    cli_io.write_json(report, out_dir / "soliton_check.json")
    logger.info(
        f"soliton-check: L2 error {report['relative_l2_error']:.3e}, "
        f"phase rate {report['measured_phase_rate']:.9f} (expected {rate:.9f})"
    )
    return report


def execute_spectrum(cfg: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """
    Исполнитель команды spectrum: FFT профиля A*sech(z/xi) и аналитический
    спектр A*xi*sqrt(pi/2)*sech(pi*k*xi/2); CSV отсортирован по k.
    Расхождение считается относительно пика спектра.
    """
    logger.info("Запущена задача spectrum")
    p = resolve_soliton(cfg)
    profile = analytic_soliton.sech_profile(p, cfg.grid)
    k = field_core.wavenumbers(cfg.grid)
    numeric = field_core.fft_forward(profile)
    analytic = p.amplitude_A * analytic_soliton.sech_spectrum(p.width_xi, k)

    order = np.argsort(scipy.fft.fftshift(k), kind="stable")
    k_sorted = scipy.fft.fftshift(k)[order]
    numeric_sorted = scipy.fft.fftshift(numeric)[order]
    analytic_sorted = scipy.fft.fftshift(analytic)[order]
    path = cli_io.write_spectrum_csv(k_sorted, np.abs(numeric_sorted), analytic_sorted, out_dir / "spectrum.csv")

    window = np.abs(k) <= SPECTRUM_K_LIMIT / p.width_xi
    peak = float(np.max(np.abs(analytic)))
    mismatch = float(np.max(np.abs(numeric[window] - analytic[window]))) / peak if peak > 0 else 0.0
    report = {
        "k_limit": SPECTRUM_K_LIMIT / p.width_xi,
        "modes_compared": int(np.count_nonzero(window)),
        "relative_mismatch": mismatch,
        "analytic_at_k0": float(analytic[0]),
        "csv": str(path),
    }
    cli_io.write_json(report, out_dir / "spectrum_report.json")
    logger.info(f"spectrum: mismatch {mismatch:.3e} over {report['modes_compared']} modes")
    return report


def execute_photons(cfg: RunConfig, out_dir: Path) -> Dict[str, Any]:
    """
    Исполнитель команды photons: распределение числа фотонов когерентного
    состояния солитона (CSV n,p_n) и моменты (JSON).
    """
    logger.info("Запущена задача photons")
    p = resolve_soliton(cfg)
    a0 = quantum_stats.alpha0(p, cfg.waveguide)
    pmf = quantum_stats.photon_pmf(a0, cfg.photons_n_max)
    mean, variance = quantum_stats.pmf_moments(pmf)
    csv_path = cli_io.write_pmf_csv(pmf, out_dir / "pmf.csv")

    report = {
        "alpha0": a0.alpha.real,
        "alpha0_sq": a0.mean_photon_number,
        "photon_number": analytic_soliton.photon_number(p),
        "n_max": pmf.n_max,
        "mean": mean,
        "variance": variance,
        "fano_factor": cli_io.finite_or_none(quantum_stats.fano_factor(pmf)),
        "tail_mass": pmf.tail_mass,
        "warning": pmf.tail_exceeded,
        # exp(-xi A^2) из разложения состояния и exp(-|alpha|^2/2) - одно и то же
        "vacuum_weight": math.exp(-p.width_xi * p.amplitude_A ** 2),
        "vacuum_weight_from_alpha": math.exp(-0.5 * a0.mean_photon_number),
        "csv": str(csv_path),
    }
    cli_io.write_json(report, out_dir / "photons.json")
    logger.info(f"photons: mean {mean:.12g}, variance {variance:.12g}, n_max {pmf.n_max}")
    return report


def _lattice_report(lattice, zetas) -> Dict[str, Any]:
    """Невязка на решётке, допуск Ричардсона и проверка независимости от zeta."""
    residual = laxpair.compatibility_residual(lattice, zetas[0])
    n_t, n_z = lattice.shape
    tolerance: Optional[float] = None
    if n_t >= 5 and n_z >= 2 * laxpair.MIN_Z_POINTS - 1:
        tolerance = laxpair.richardson_tolerance(lattice, zetas[0])
    # без огрубления решётки допуск для сравнения по zeta берём на уровне округления
    zeta_tolerance = tolerance if tolerance is not None else 1e-8 * max(1.0, residual.max_offdiag)
    zeta_report = laxpair.check_zeta_independence(lattice, zetas, tolerance=zeta_tolerance)
    return {
        "lattice_shape": list(lattice.shape),
        "max_offdiag": residual.max_offdiag,
        "max_diag": residual.max_diag,
        "tolerance": tolerance,
        "offdiag_within_tolerance": None if tolerance is None else residual.max_offdiag <= tolerance,
        "zeta_independence": zeta_report.to_dict(),
    }


def execute_lax_check(cfg: RunConfig, out_dir: Path, manifest: Optional[Path] = None) -> Dict[str, Any]:
    """
    Исполнитель команды lax-check.

    С манифестом снимков: решётка строится из траектории (нужно >= 3 снимков)
    и проверяется конечными разностями. Без него: точный солитон из
    конфигурации в единичной форме, невязка с аналитическими производными,
    решётка с конечными разностями, голономия вокруг прямоугольника.
    """
    zetas = cfg.lax.zetas
    if manifest is not None:
        logger.info(f"Запущена задача lax-check по снимкам {manifest}")
        trajectory, w = cli_io.read_trajectory(manifest)
        lattice = laxpair.lattice_from_trajectory(trajectory, w)
        report = {"source": "snapshots", "numerical": _lattice_report(lattice, zetas)}
        cli_io.write_json(report, out_dir / "lax_report.json")
        return report

    logger.info("Запущена задача lax-check по аналитическому солитону")
    spec = cfg.lax
    p = resolve_soliton(cfg)
    zs = laxpair.soliton_unit_zs(p, cfg.waveguide)
    provider = laxpair.zs_provider(zs, conjugate=True)

    n_z = int(round(2.0 * spec.half_width / spec.spacing)) + 1
    n_t = int(round(spec.duration / spec.spacing)) + 1
    z = -spec.half_width + spec.spacing * np.arange(n_z)
    t = spec.spacing * np.arange(n_t)
    T, Z = np.meshgrid(t, z, indexing="ij")
    sample = provider(Z, T)

    analytic = {}
    for zeta in zetas:
        R = laxpair.analytic_compatibility_residual(sample, zeta)
        analytic[repr(zeta)] = {"max_abs": R.max_abs(), "max_diag": R.max_diag()}
    max_analytic = max(entry["max_abs"] for entry in analytic.values())
    max_analytic_diag = max(entry["max_diag"] for entry in analytic.values())

    lattice = laxpair.sample_lattice(provider, -spec.half_width, spec.spacing, n_z, 0.0, spec.spacing, n_t)

    holonomies = {}
    origin = (0.5 * p.width_xi, 0.0)
    for zeta in zetas:
        _, deviation = laxpair.holonomy(provider, origin, spec.rectangle_side, spec.rectangle_side, zeta)
        holonomies[repr(zeta)] = deviation

    report = {
        "source": "analytic",
        "unit_zs": {"eta": zs.eta, "A0": zs.A0},
        "analytic": {
            "by_zeta": analytic,
            "max_abs": max_analytic,
            "max_diag": max_analytic_diag,
            "tolerance": laxpair.ANALYTIC_TOLERANCE,
            "passed": max_analytic < laxpair.ANALYTIC_TOLERANCE
            and max_analytic_diag < laxpair.DIAGONAL_TOLERANCE,
        },
        "numerical": _lattice_report(lattice, zetas),
        "holonomy": {"rectangle_side": spec.rectangle_side, "origin": list(origin), "deviation_by_zeta": holonomies},
    }
    cli_io.write_json(report, out_dir / "lax_report.json")
    logger.info(f"lax-check: analytic max |R| {max_analytic:.3e}")
    return report
