"""
Output layer: atomic file writes and the three report encodings.

Every file the CLI produces goes through :func:`_atomic_write`, so a crashed
or interrupted command never leaves a truncated report behind.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import IO, Any, Callable, Optional, TextIO

from .errors import StorageError, UsageError
from .normalize import to_jsonable
from .typing_defs import LeafSidecar, OutputFormat, Reportable

log = logging.getLogger("bmpoisson.storage")


def _atomic_write(
    path: Path,
    *,
    mode: str,
    write_fn: Callable[[IO[Any]], None],
    open_kwargs: Optional[dict] = None,
) -> None:
    """
    Write to `path` atomically:
      - create parent directory,
      - write to a temporary file in the same directory,
      - flush + fsync,
      - os.replace onto the final path,
      - best-effort cleanup on failure.
    The caller provides `write_fn(tmp_file)` to perform the actual write.
    """
    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            mode, delete=False, dir=str(path.parent), **(open_kwargs or {})
        ) as tmp:
            tmp_name = tmp.name
            write_fn(tmp)
            try:
                tmp.flush()
                os.fsync(tmp.fileno())
            except OSError:
                # some filesystems refuse fsync
                pass
        os.replace(tmp_name, path)
    except Exception as exc:
        if tmp_name:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
        raise StorageError(f"failed to write {path}: {exc}") from exc


def write_text(path: Path, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    _atomic_write(path, mode="w", write_fn=lambda f: f.write(text), open_kwargs={"encoding": "utf-8"})


def dumps_json(data: Any) -> str:
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=False)


def write_json(path: Path, data: Any) -> None:
    write_text(path, dumps_json(data))


def dumps_csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(["" if v is None else to_jsonable(v) for v in row])
    return buf.getvalue()


# ----------------------------- report encodings ------------------------------

class _JsonEncoding:
    extension = ".json"

    def render(self, report: Reportable) -> str:
        return dumps_json(report.to_json())


class _CsvEncoding:
    extension = ".csv"

    def render(self, report: Reportable) -> str:
        return dumps_csv(report.to_rows())


class _TextEncoding:
    extension = ".txt"

    def render(self, report: Reportable) -> str:
        return report.to_text()


_REGISTRY = {
    "json": _JsonEncoding(),
    "csv": _CsvEncoding(),
    "text": _TextEncoding(),
}


def get_encoding(name: Optional[str]):
    if not name:
        return _REGISTRY["text"]
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UsageError(
            "Unknown output format '{}'. Available: {}".format(name, list(_REGISTRY.keys()))
        )


def emit_report(
    report: Reportable,
    fmt: OutputFormat | str | None,
    out: Path | None = None,
    *,
    stream: TextIO | None = None,
) -> str:
    """Render *report* and write it to *out* atomically, or to *stream* (stdout)."""
    text = get_encoding(fmt).render(report)
    if out is not None:
        write_text(Path(out), text)
        log.info("Wrote %s", out)
    else:
        target = stream or sys.stdout
        target.write(text if text.endswith("\n") else text + "\n")
    return text


# ----------------------------- leaf samples ----------------------------------

def sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def write_leaf_csv(path: Path, points: list[tuple[float, float, float, float]], sidecar: LeafSidecar) -> Path:
    """Write ``x1,x2,x3,t`` rows to *path* and the run metadata to the JSON sidecar."""
    rows: list[list[Any]] = [["x1", "x2", "x3", "t"]]
    rows.extend([repr(float(c)) for c in p] for p in points)
    write_text(path, dumps_csv(rows))
    side = sidecar_path(path)
    write_json(side, dict(sidecar))
    log.debug("leaf sample: %d points -> %s (+ %s)", len(points), path, side.name)
    return side


def read_leaf_csv(path: Path) -> list[tuple[float, ...]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["x1", "x2", "x3", "t"]:
            raise StorageError(f"{path}: unexpected header {header!r}")
        return [tuple(float(v) for v in row) for row in reader if row]
