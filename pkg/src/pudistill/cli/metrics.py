"""Deterministic CSV emission plus the non-deterministic sidecar.

Primary outputs (metrics, logs, sweep tables) are comma-separated with a
header row, "." decimals and LF endings, and contain nothing that varies
between identical runs. Wall time and host facts go to a JSON sidecar.
"""

import json
import platform
import time
from dataclasses import dataclass, field


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


@dataclass
class MetricsRecord:
    run_id: str
    command: str
    config_hash: str
    wall_time_s: float = 0.0
    rows: list = field(default_factory=list)

    def add(self, metric, value):
        self.rows.append((metric, value))


def write_metrics(path, record):
    """Primary metrics CSV; the wall-time column is deliberately absent."""
    write_csv(
        path,
        ["run_id", "command", "config_hash", "metric", "value"],
        [(record.run_id, record.command, record.config_hash, m, v) for m, v in record.rows],
    )


def write_sidecar(path, record):
    info = {
        "run_id": record.run_id,
        "command": record.command,
        "wall_time_s": record.wall_time_s,
        "recorded_at": time.time(),
        "host": platform.node(),
        "platform": platform.platform(),
        "python": platform.python_version(),
    }
    with open(path, "w") as fh:
        json.dump(info, fh, indent=2, sort_keys=True)
        fh.write("\n")
