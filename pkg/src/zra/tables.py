"""Zero-table ingestion, the JSONL cache, and CSV report emission."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, NamedTuple, Optional, Sequence, Union

from .errors import OrderError, ParseError, SchemaError, ZraIOError
from .root_atlas import CriticalPoint, Zero

SCHEMA_VERSION = 1
PUBLISHED_TABLE_TOL = 1e-9
CSV_HEADER = ("t0", "gamma_lo", "gamma_hi", "Q", "m", "K", "rhs_bound", "residual_eighth_pi", "scaled_residual")

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class ZeroTableFile:
    path: Path
    format: Literal["plain_text_ordinates", "jsonl_cache"] = "plain_text_ordinates"
    declared_height: Optional[float] = None


class CacheData(NamedTuple):
    zeros: list[Zero]
    critical_points: list[CriticalPoint]
    height: float


def default_cache_dir() -> Path:
    env = os.environ.get("ZRA_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "zra"


def default_cache_path() -> Path:
    return default_cache_dir() / "cache.jsonl"


def fmt(x: float) -> str:
    """17 significant digits: round-trips any binary64 value."""
    return format(float(x), ".17g")


# --------------------------------------------------------------------------
# Plain-text tables

def _parse_ordinates(lines: Iterable[str], tol: float) -> list[Zero]:
    zeros: list[Zero] = []
    prev = 0.0
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            gamma = float(text)
        except ValueError:
            raise ParseError(lineno, f"not a decimal ordinate: {text!r}") from None
        if not gamma > 0 or gamma != gamma or gamma == float("inf"):
            raise ParseError(lineno, f"ordinate must be positive and finite: {text!r}")
        if gamma <= prev:
            raise OrderError(f"line {lineno}: {gamma} does not exceed previous ordinate {prev}")
        zeros.append(Zero(len(zeros) + 1, gamma, tol, 1))
        prev = gamma
    return zeros


def ingest_zero_table(file: Union[ZeroTableFile, PathLike], tol: float = PUBLISHED_TABLE_TOL) -> list[Zero]:
    """Read a published zero table (one ordinate per line) or a JSONL cache."""
    if not isinstance(file, ZeroTableFile):
        file = ZeroTableFile(Path(file))
    if file.format == "jsonl_cache":
        return read_cache(file.path).zeros
    try:
        with open(file.path, encoding="utf-8") as fh:
            return _parse_ordinates(fh, tol)
    except OSError as exc:
        raise ZraIOError(str(exc)) from exc


def table_height(file: ZeroTableFile, zeros: Sequence[Zero]) -> float:
    """Declared coverage ceiling, falling back to the last ordinate (0 if empty)."""
    if file.declared_height is not None:
        return float(file.declared_height)
    return zeros[-1].gamma if zeros else 0.0


# --------------------------------------------------------------------------
# JSONL cache

def _record(fields: dict) -> str:
    parts = []
    for key, value in fields.items():
        if isinstance(value, float):
            rendered = fmt(value)
        else:
            rendered = json.dumps(value)
        parts.append(f"{json.dumps(key)}: {rendered}")
    return "{" + ", ".join(parts) + "}"


def render_cache(zeros: Sequence[Zero], critical_points: Sequence[CriticalPoint], height: float) -> str:
    lines = [
        _record(
            {
                "schema_version": SCHEMA_VERSION,
                "height": float(height),
                "zeros": len(zeros),
                "critical_points": len(critical_points),
            }
        )
    ]
    for z in zeros:
        lines.append(
            _record({"type": "zero", "index": z.index, "gamma": z.gamma, "tol": z.tol, "multiplicity": z.multiplicity})
        )
    for cp in critical_points:
        lines.append(
            _record(
                {
                    "type": "critical",
                    "t0": cp.t0,
                    "gamma_lo": cp.gamma_lo,
                    "gamma_hi": cp.gamma_hi,
                    "tol": cp.tol,
                    "z_value": cp.z_value,
                    "kind": cp.kind,
                    "diagnostics": list(cp.diagnostics),
                }
            )
        )
    return "\n".join(lines) + "\n"


def atomic_write_text(path: PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ZraIOError(str(exc)) from exc


def write_cache(
    zeros: Sequence[Zero],
    critical_points: Sequence[CriticalPoint],
    path: PathLike,
    height: Optional[float] = None,
) -> None:
    if height is None:
        height = zeros[-1].gamma if zeros else 0.0
    atomic_write_text(path, render_cache(zeros, critical_points, height))


def read_cache(path: PathLike) -> CacheData:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as exc:
        raise ZraIOError(str(exc)) from exc
    if not lines:
        raise SchemaError(f"{path}: empty cache file")
    try:
        header = json.loads(lines[0])
        records = [json.loads(ln) for ln in lines[1:]]
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if header.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: schema_version {header.get('schema_version')!r}, expected {SCHEMA_VERSION}")
    zeros, cps = [], []
    try:
        for rec in records:
            kind = rec.get("type")
            if kind == "zero":
                zeros.append(Zero(int(rec["index"]), float(rec["gamma"]), float(rec["tol"]), int(rec["multiplicity"])))
            elif kind == "critical":
                cps.append(
                    CriticalPoint(
                        float(rec["t0"]),
                        float(rec["gamma_lo"]),
                        float(rec["gamma_hi"]),
                        float(rec["tol"]),
                        float(rec["z_value"]),
                        rec["kind"],
                        tuple(rec.get("diagnostics", ())),
                    )
                )
            else:
                raise SchemaError(f"{path}: unknown record type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed record ({exc})") from exc
    if zeros and [z.index for z in zeros] != list(range(zeros[0].index, zeros[0].index + len(zeros))):
        raise SchemaError(f"{path}: zero indices are not contiguous")
    if len(zeros) != header.get("zeros", len(zeros)) or len(cps) != header.get("critical_points", len(cps)):
        raise SchemaError(f"{path}: record counts disagree with header")
    return CacheData(zeros, cps, float(header.get("height", zeros[-1].gamma if zeros else 0.0)))


# --------------------------------------------------------------------------
# CSV report

def render_report_csv(rows: Iterable[Sequence[Optional[float]]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(["" if v is None else fmt(v) for v in row])
    return buf.getvalue()
