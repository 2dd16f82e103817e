import csv
import json
import re
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from extrapolation import config
from extrapolation.datagen import SampleSet
from extrapolation.errors import ConfigError
from extrapolation.nnet.train import TrainedModel
from extrapolation.pipeline.validate import validate_config


def trim_log_by_time(log_path, retention_days=14):
    """
    Remove log entries older than retention_days.
    Returns list of lines to keep.
    """
    log_path = Path(log_path)
    if not log_path.exists():
        return []

    cutoff = datetime.now(timezone.utc) - timedelta(days=retention_days)
    cutoff_str = cutoff.strftime("%Y-%m-%d %H:%M:%S")

    kept_lines = []
    current_entry_recent = False

    with open(log_path, "r") as f:
        for line in f:
            match = re.match(r"\[(\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2})\]", line)
            if match:
                current_entry_recent = match.group(1) >= cutoff_str

            if current_entry_recent:
                kept_lines.append(line)

    return kept_lines


def load_config(path):
    """Load a flat JSON run config and check every key."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            cfg = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"not valid JSON ({e.msg} at line {e.lineno})") from e
    if not isinstance(cfg, dict):
        raise ConfigError(str(path), "config must be a JSON object")
    return validate_config(cfg)


def save_config(cfg, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(cfg, f, indent=2, sort_keys=True)
        f.write("\n")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def report_paths(out_dir, scenario):
    out_dir = Path(out_dir)
    return out_dir / f"{scenario}-report.csv", out_dir / f"{scenario}-report.meta.json"


def emit_report(report, out_dir):
    """Write <scenario>-report.csv and its .meta.json sidecar; return both paths."""
    csv_path, meta_path = report_paths(out_dir, report.scenario)
    csv_path.parent.mkdir(parents=True, exist_ok=True)

    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=config.REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow({key: _cell(value) for key, value in report.row_record(row).items()})

    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(report.metadata_record(), f, indent=2, sort_keys=True)
        f.write("\n")
    return csv_path, meta_path


def load_report(csv_path):
    """Rows of a report CSV as dicts; numeric cells become floats, blanks None."""
    rows = []
    with open(csv_path, "r", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            parsed = {}
            for key, value in row.items():
                if key in ("scenario", "method", "degree_or_setting"):
                    parsed[key] = value
                elif key == "seed":
                    parsed[key] = int(value)
                else:
                    parsed[key] = float(value) if value != "" else None
            rows.append(parsed)
    return rows


def save_model(model, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model.to_record(), f, indent=1)
        f.write("\n")
    return path


def load_model(path):
    with open(path, "r", encoding="utf-8") as f:
        return TrainedModel.from_record(json.load(f))


def load_samples_csv(path):
    """Samples from a CSV with columns x,y or theta,phi,y."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"No samples in {path}")
    values = np.array([float(r["y"]) for r in rows])
    if "x" in rows[0]:
        points = np.array([float(r["x"]) for r in rows])
    elif "theta" in rows[0] and "phi" in rows[0]:
        points = np.array([[float(r["theta"]), float(r["phi"])] for r in rows])
    else:
        raise ValueError(f"{path} needs an 'x' column or 'theta' and 'phi' columns")
    return SampleSet(points=points, values=values)


def save_samples_csv(samples, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    points = np.asarray(samples.points)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        if points.ndim == 2:
            writer.writerow(["theta", "phi", "y"])
            for (theta, phi), y in zip(points, samples.values):
                writer.writerow([repr(float(theta)), repr(float(phi)), repr(float(y))])
        else:
            writer.writerow(["x", "y"])
            for x, y in zip(points, samples.values):
                writer.writerow([repr(float(x)), repr(float(y))])
    return path
