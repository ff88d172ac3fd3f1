"""
CSV storage for sampled trajectories.

One row per event: a row with jump_index -1 records the start (to_label is
the initial configuration), rows 0..n-1 the jumps, and a CEMETERY path gets
a final row whose to_label is "cemetery".
"""

import os
from pathlib import Path
from typing import Any, Dict, Hashable, Iterable, Optional, Union

import pandas as pd

from ..models.system import QuantumSystem
from .schema import CEMETERY_LABEL, INITIAL_JUMP_INDEX, Trajectory

COLUMNS = ["trajectory_id", "jump_index", "time", "from_label", "to_label", "status"]


def format_label(label: Hashable) -> str:
    """Tuple labels (Fock occupations) are joined with '|'."""
    if isinstance(label, tuple):
        return "|".join(str(v) for v in label)
    return str(label)


def trajectory_rows(trajectory: Trajectory, system: QuantumSystem) -> Iterable[Dict[str, Any]]:
    label = lambda i: format_label(system.space.label_of(i))
    status = trajectory.status.value
    yield {
        "trajectory_id": trajectory.trajectory_id,
        "jump_index": INITIAL_JUMP_INDEX,
        "time": trajectory.t0,
        "from_label": "",
        "to_label": label(trajectory.x0),
        "status": status,
    }
    for k, jump in enumerate(trajectory.jumps):
        yield {
            "trajectory_id": trajectory.trajectory_id,
            "jump_index": k,
            "time": jump.time,
            "from_label": label(jump.source),
            "to_label": label(jump.target),
            "status": status,
        }
    if trajectory.cemetery_time is not None:
        yield {
            "trajectory_id": trajectory.trajectory_id,
            "jump_index": len(trajectory.jumps),
            "time": trajectory.cemetery_time,
            "from_label": label(trajectory.final_config),
            "to_label": CEMETERY_LABEL,
            "status": status,
        }


def write_trajectories_csv(
    path: Union[str, Path], trajectories: Iterable[Trajectory], system: QuantumSystem
) -> Path:
    """Write all trajectories to ``path``; times are printed with 17 significant digits."""
    rows = [row for trajectory in trajectories for row in trajectory_rows(trajectory, system)]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def read_trajectories_csv(
    path: Union[str, Path], filters: Optional[Dict[str, Any]] = None
) -> pd.DataFrame:
    """
    Read a trajectory dump with optional filtering.

    Args:
        path: CSV written by write_trajectories_csv
        filters: Optional column -> value filters. Extra keys:
                - 'time_after': keep rows with time > value
                - 'time_before': keep rows with time < value

    Returns:
        DataFrame with the dump columns; empty if the file does not exist
    """
    if not os.path.exists(path):
        return pd.DataFrame(columns=COLUMNS)
    frame = pd.read_csv(path, dtype={"from_label": str, "to_label": str}, keep_default_na=False)
    for key, value in (filters or {}).items():
        if key == "time_after":
            frame = frame[frame["time"] > value]
        elif key == "time_before":
            frame = frame[frame["time"] < value]
        elif key in frame.columns:
            frame = frame[frame[key] == value]
        else:
            raise KeyError(f"unknown filter {key!r}")
    return frame.reset_index(drop=True)
