"""
Chemotaxis Consumption Verifier - Trajectory Persistence

Run directory layout:

    manifest.json        format version, config echo and its content hash,
                         run metadata, completion status, snapshot index
    diag.csv             one DiagRecord per row (core columns only)
    diag_ext.csv         t plus the extended per-record quantities
    fields/u/<i>.field   u snapshot at record i
    fields/v/<i>.field   v snapshot at record i

All floats are written with 17 significant digits, so write_series followed
by read_series reproduces records bit for bit. No wall-clock data is
written: identical runs give identical directories.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from ..diagnostics import DIAG_COLUMNS, EXT_COLUMNS, DiagRecord, Trajectory, TrajectoryMeta
from ..geometry import SnapshotFormatError, read_field, write_field
from ..motility import motility_for
from ..stepper.state import State
from .run_config import ConfigError, RunConfig, config_from_dict

logger = logging.getLogger(__name__)

SERIES_FORMAT = "ksm-run v1"
FLOAT_FORMAT = "%.17g"


class SeriesFormatError(ValueError):
    """Run directory is missing files, truncated or of an unknown version."""


def _snapshot_paths(index: int) -> tuple:
    name = f"{index:05d}.field"
    return f"fields/u/{name}", f"fields/v/{name}"


def write_series(traj: Trajectory, directory: Union[str, Path]) -> Path:
    """
    Persist a trajectory.

    Args:
        traj: Trajectory to write
        directory: Run directory (created if missing)

    Returns:
        Path of the manifest
    """
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)

    traj.frame().to_csv(root / "diag.csv", index=False, float_format=FLOAT_FORMAT)
    if traj.has_extended():
        traj.extended_frame().to_csv(root / "diag_ext.csv", index=False, float_format=FLOAT_FORMAT)

    snapshots = []
    for i, s in enumerate(traj.states):
        u_path, v_path = _snapshot_paths(i)
        write_field(root / u_path, s.u, s.t)
        write_field(root / v_path, s.v, s.t)
        snapshots.append({"index": i, "t": s.t, "u": u_path, "v": v_path})

    config: Optional[RunConfig] = traj.config
    manifest = {
        "format": SERIES_FORMAT,
        "config": config.model_dump(mode="json") if config is not None else None,
        "config_hash": config.content_hash() if config is not None else None,
        "meta": traj.meta.to_dict(),
        "complete": traj.complete,
        "error": traj.error,
        "records": len(traj.records),
        "extended": traj.has_extended(),
        "snapshots": snapshots,
    }
    path = root / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Trajectory written to {root} ({len(traj.records)} records, {len(snapshots)} snapshots)")
    return path


def _read_csv(path: Path, columns: List[str], expected_rows: int) -> pd.DataFrame:
    if not path.is_file():
        raise SeriesFormatError(f"missing {path.name}")
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SeriesFormatError(f"{path.name}: unreadable ({e})") from None
    if list(frame.columns) != columns:
        raise SeriesFormatError(f"{path.name}: columns {list(frame.columns)} != {columns}")
    if len(frame) != expected_rows:
        raise SeriesFormatError(f"{path.name}: truncated, {len(frame)} rows of {expected_rows}")
    if frame.isna().any().any():
        raise SeriesFormatError(f"{path.name}: truncated or empty entries")
    return frame


def read_series(directory: Union[str, Path]) -> Trajectory:
    """
    Load a run directory written by write_series.

    Raises:
        SeriesFormatError: on version mismatch, missing or truncated files,
            or a non-monotone t column
    """
    root = Path(directory)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise SeriesFormatError(f"no manifest.json in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SeriesFormatError(f"manifest.json: {e}") from None
    if manifest.get("format") != SERIES_FORMAT:
        raise SeriesFormatError(f"unsupported series format {manifest.get('format')!r}, expected {SERIES_FORMAT!r}")

    n = int(manifest["records"])
    frame = _read_csv(root / "diag.csv", DIAG_COLUMNS, n)
    t = frame["t"].to_numpy()
    if np.any(np.diff(t) <= 0):
        raise SeriesFormatError("diag.csv: t column is not strictly increasing")

    ext = None
    if manifest.get("extended") and (root / "diag_ext.csv").is_file():
        ext = _read_csv(root / "diag_ext.csv", ["t"] + EXT_COLUMNS, n)
        if not np.array_equal(ext["t"].to_numpy(), t):
            raise SeriesFormatError("diag_ext.csv: t column differs from diag.csv")
    elif manifest.get("extended"):
        logger.warning("diag_ext.csv missing; extended checks will be skipped")

    records = []
    for i, row in enumerate(frame.itertuples(index=False)):
        values = {name: float(getattr(row, name)) for name in DIAG_COLUMNS}
        if ext is not None:
            values.update({name: float(ext[name].iat[i]) for name in EXT_COLUMNS})
        records.append(DiagRecord(**values))

    meta = TrajectoryMeta.from_dict(manifest["meta"])
    config = motility = None
    if manifest.get("config") is not None:
        try:
            config = config_from_dict(manifest["config"])
        except ConfigError as e:
            raise SeriesFormatError(f"manifest.json: stored config no longer validates: {e}") from None
        motility = motility_for(config.motility.to_spec(), meta.eps)

    states = []
    for entry in manifest.get("snapshots", []):
        paths = [root / entry["u"], root / entry["v"]]
        missing = [str(p.relative_to(root)) for p in paths if not p.is_file()]
        if missing:
            raise SeriesFormatError(f"snapshot files referenced in manifest are missing: {missing}")
        try:
            u, t_u = read_field(paths[0], quantity="u")
            v, _ = read_field(paths[1], quantity="v")
        except SnapshotFormatError as e:
            raise SeriesFormatError(str(e)) from None
        states.append(State(t=t_u, u=u, v=v, eps=meta.eps, mass0=meta.mass0, ubar0=meta.ubar0))

    logger.info(f"Read {root}: {n} records, {len(states)} snapshots, complete={manifest['complete']}")
    return Trajectory(
        records=records,
        states=states,
        meta=meta,
        motility=motility,
        config=config,
        complete=bool(manifest["complete"]),
        error=manifest.get("error"),
    )
