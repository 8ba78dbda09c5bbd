"""Result records (JSON lines) and sweep tables (CSV) with exact float emission."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .. import __version__


def jsonable(obj):
    """Plain JSON types; complex -> [re, im]; non-finite floats -> their name as a string."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def format_float(x) -> str:
    """Shortest decimal string that parses back to the same double."""
    return repr(float(x))


def record_line(record: dict) -> str:
    return json.dumps(jsonable(record), sort_keys=True, separators=(",", ":"), allow_nan=False)


def make_record(command: str, digest: str, status: str, outputs: dict, tolerances: dict,
                timestamp=None) -> dict:
    return {"command": command, "scenario_digest": digest, "status": status,
            "outputs": outputs, "tolerances": tolerances, "timestamp": timestamp,
            "tool_version": __version__}


def deterministic_timestamp():
    """SOURCE_DATE_EPOCH if set, else None; wall-clock time is opt-in on the command line."""
    v = os.environ.get("SOURCE_DATE_EPOCH")
    return int(v) if v and v.isdigit() else None


def _atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def append_jsonl(path, record: dict) -> str:
    """Append one record; the file is rewritten through a temp file and renamed."""
    path = Path(path)
    line = record_line(record) + "\n"
    old = path.read_bytes() if path.exists() else b""
    _atomic_write(path, old + line.encode())
    return line


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> str:
    text = csv_text(header, rows)
    _atomic_write(Path(path), text.encode())
    return text
