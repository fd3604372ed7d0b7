# services/cli_io.py

"""
Configuration parsing and flat-file formats.

  * Run configuration: one JSON document (parse_run_config / run_config_to_dict
    round-trip to an identical RunConfig).
  * Snapshots: CSV with header z,re,im, one file per snapshot, plus
    manifest.json listing times, files, grid and waveguide.
  * Invariants: CSV t,N,P,E. Spectrum: CSV k,fft_abs,analytic. PMF: CSV n,p_n.
  * Reports: JSON with sorted keys.

Floats are written with repr(), the shortest string that round-trips, so
outputs are byte-identical for a fixed configuration on one platform.
"""

import csv
import dataclasses
import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from models.grid import ComplexField, Grid
from models.quantum import PhotonPmf
from models.run_config import LaxCheckSpec, RunConfig
from models.soliton import SolitonParams, ZSParams
from models.stepper import StepperConfig, Trajectory
from models.waveguide import WaveguideParams
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "SOLITON_OUT_DIR"
DEFAULT_OUT_DIR = "out"
SNAPSHOT_HEADER = ("z", "re", "im")
MANIFEST_NAME = "manifest.json"


# --- Run configuration ---

def default_run_config() -> RunConfig:
    """C = K = 2, A = xi = 1 soliton on [-20, 20) with 1024 points, dt = 1e-3, t_end = 1."""
    return RunConfig(
        waveguide=WaveguideParams(omega0=10.0, k0=5.0, vg=1.0, gvd_C=2.0, kerr_K=2.0),
        grid=Grid(-20.0, 20.0, 1024),
        stepper=StepperConfig(dt=1e-3, t_end=1.0, snapshot_stride=100),
        soliton=SolitonParams(amplitude_A=1.0, width_xi=1.0),
    )


def _section(doc: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = doc.get(key)
    if not isinstance(value, dict) or not value:
        raise ConfigError(f"Config section '{key}' is missing or empty")
    return value


def parse_run_config(doc: Any) -> RunConfig:
    """
    Builds a RunConfig from a decoded JSON document.

    Raises:
        ConfigError: on missing sections, unknown keys or invalid values.
    """
    if not isinstance(doc, dict):
        raise ConfigError("Config document must be a JSON object")
    try:
        waveguide = WaveguideParams(**_section(doc, "waveguide"))
        grid = Grid(**_section(doc, "grid"))
        stepper = StepperConfig(**_section(doc, "stepper"))
        soliton = SolitonParams(**doc["soliton"]) if doc.get("soliton") is not None else None
        zs_soliton = ZSParams(**doc["zs_soliton"]) if doc.get("zs_soliton") is not None else None
        photons = doc.get("photons") or {}
        lax_doc = dict(doc.get("lax") or {})
        if "zetas" in lax_doc:
            lax_doc["zetas"] = tuple(lax_doc["zetas"])
        outputs = doc.get("outputs") or {}
        return RunConfig(
            waveguide=waveguide,
            grid=grid,
            stepper=stepper,
            soliton=soliton,
            zs_soliton=zs_soliton,
            photon_number=doc.get("photon_number"),
            photons_n_max=photons.get("n_max"),
            lax=LaxCheckSpec(**lax_doc),
            out_dir=outputs.get("out_dir"),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError, AttributeError) as e:
        raise ConfigError(f"Invalid config: {e}") from e


def run_config_to_dict(cfg: RunConfig) -> Dict[str, Any]:
    """Inverse of parse_run_config."""
    doc: Dict[str, Any] = {
        "waveguide": dataclasses.asdict(cfg.waveguide),
        "grid": {"z_min": cfg.grid.z_min, "z_max": cfg.grid.z_max, "n_points": cfg.grid.n_points},
        "stepper": {
            "dt": cfg.stepper.dt,
            "t_end": cfg.stepper.t_end,
            "snapshot_stride": cfg.stepper.snapshot_stride,
            "scheme": cfg.stepper.scheme.value,
        },
        "lax": {
            "zetas": list(cfg.lax.zetas),
            "spacing": cfg.lax.spacing,
            "half_width": cfg.lax.half_width,
            "duration": cfg.lax.duration,
            "rectangle_side": cfg.lax.rectangle_side,
        },
        "photons": {"n_max": cfg.photons_n_max},
        "outputs": {"out_dir": cfg.out_dir},
    }
    if cfg.soliton is not None:
        doc["soliton"] = dataclasses.asdict(cfg.soliton)
    if cfg.zs_soliton is not None:
        doc["zs_soliton"] = dataclasses.asdict(cfg.zs_soliton)
    if cfg.photon_number is not None:
        doc["photon_number"] = cfg.photon_number
    return doc


def load_run_config(path: str) -> RunConfig:
    """
    Reads and parses a JSON config file.

    Raises:
        ConfigError: unreadable file, malformed JSON (with line/column) or invalid content.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    logger.info(f"Loaded config from {path}")
    return parse_run_config(doc)


def apply_overrides(cfg: RunConfig, dt: Optional[float] = None, t_end: Optional[float] = None,
                    zetas: Optional[Sequence[float]] = None) -> RunConfig:
    """Command-line overrides of dt, t_end and the zeta list."""
    stepper = cfg.stepper
    if dt is not None or t_end is not None:
        stepper = dataclasses.replace(
            stepper,
            dt=stepper.dt if dt is None else dt,
            t_end=stepper.t_end if t_end is None else t_end,
        )
    lax = cfg.lax if zetas is None else dataclasses.replace(cfg.lax, zetas=tuple(zetas))
    return dataclasses.replace(cfg, stepper=stepper, lax=lax)


def parse_zeta_list(text: str) -> Tuple[float, ...]:
    """'-1,0,0.7,2' -> (-1.0, 0.0, 0.7, 2.0)."""
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        raise ConfigError(f"Invalid --zeta list '{text}': {e}") from e


def resolve_out_dir(cli_out: Optional[str], cfg: Optional[RunConfig]) -> Path:
    """--out flag, then SOLITON_OUT_DIR, then outputs.out_dir, then ./out."""
    candidate = cli_out or os.getenv(OUT_DIR_ENV) or (cfg.out_dir if cfg else None) or DEFAULT_OUT_DIR
    out_dir = Path(candidate)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"Output directory {out_dir} is not writable: {e}") from e
    return out_dir


# --- CSV / JSON writers ---

def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if not isinstance(v, (int, np.integer)) else int(v) for v in row])
    logger.debug(f"Wrote {path}")
    return path


def _to_builtin(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


def write_json(report: Dict[str, Any], path: Path) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_to_builtin(report), handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_snapshot_csv(field: ComplexField, path: Path) -> Path:
    rows = zip(field.z, field.samples.real, field.samples.imag)
    return _write_rows(Path(path), SNAPSHOT_HEADER, rows)


def read_snapshot_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns (z, samples) from a z,re,im snapshot file.

    Raises:
        ConfigError: missing file, wrong header or unparsable numbers.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = tuple(next(reader, ()))
            if header != SNAPSHOT_HEADER:
                raise ConfigError(f"{path}: expected header {','.join(SNAPSHOT_HEADER)}, got {header}")
            rows = [(float(z), float(re), float(im)) for z, re, im in reader]
    except OSError as e:
        raise ConfigError(f"Cannot read snapshot {path}: {e}") from e
    except ValueError as e:
        raise ConfigError(f"{path}: malformed snapshot row: {e}") from e
    data = np.array(rows, dtype=float).reshape(-1, 3)
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def write_trajectory(trajectory: Trajectory, w: WaveguideParams, out_dir: Path) -> Path:
    """Snapshot CSVs plus manifest.json; returns the manifest path."""
    out_dir = Path(out_dir)
    files: List[str] = []
    for index, snapshot in enumerate(trajectory.snapshots):
        name = f"snapshot_{index:05d}.csv"
        write_snapshot_csv(snapshot, out_dir / name)
        files.append(name)
    grid = trajectory.grid
    manifest = {
        "times": [float(t) for t in trajectory.times],
        "files": files,
        "grid": {"z_min": grid.z_min, "z_max": grid.z_max, "n_points": grid.n_points},
        "waveguide": dataclasses.asdict(w),
    }
    path = write_json(manifest, out_dir / MANIFEST_NAME)
    logger.info(f"Wrote {len(files)} snapshots and {path}")
    return path


def read_trajectory(manifest_path: Path) -> Tuple[Trajectory, WaveguideParams]:
    """
    Reads a manifest and its snapshot files back into a Trajectory.

    Raises:
        ConfigError: malformed manifest, missing files or grid mismatch.
    """
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        grid = Grid(**manifest["grid"])
        w = WaveguideParams(**manifest["waveguide"])
        times = manifest["times"]
        files = manifest["files"]
    except OSError as e:
        raise ConfigError(f"Cannot read manifest {manifest_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{manifest_path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    except (KeyError, TypeError) as e:
        raise ConfigError(f"{manifest_path}: incomplete manifest: {e}") from e
    if len(times) != len(files):
        raise ConfigError(f"{manifest_path}: {len(times)} times but {len(files)} files")
    snapshots = []
    for name in files:
        z, samples = read_snapshot_csv(manifest_path.parent / name)
        if z.size != grid.n_points or not np.allclose(z, grid.z, rtol=0.0, atol=1e-12 * grid.length):
            raise ConfigError(f"{name}: coordinates do not match the manifest grid")
        snapshots.append(ComplexField(grid, samples))
    return Trajectory(times=times, snapshots=snapshots), w


def write_invariants_csv(trajectory: Trajectory, path: Path) -> Path:
    rows = ((t, *q) for t, q in zip(trajectory.times, trajectory.invariants))
    return _write_rows(Path(path), ("t", "N", "P", "E"), rows)


def write_spectrum_csv(k: np.ndarray, fft_abs: np.ndarray, analytic: np.ndarray, path: Path) -> Path:
    return _write_rows(Path(path), ("k", "fft_abs", "analytic"), zip(k, fft_abs, analytic))


def write_pmf_csv(pmf: PhotonPmf, path: Path) -> Path:
    return _write_rows(Path(path), ("n", "p_n"), zip(pmf.n, pmf.probabilities))


def finite_or_none(value: float) -> Optional[float]:
    """NaN/Inf -> None for JSON reports."""
    return float(value) if math.isfinite(value) else None
