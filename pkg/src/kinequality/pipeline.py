"""Dataset ingestion, (g, k) scatters and the linear g-k fit."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import DatasetFormatError, ValidationError
from .metrics import indices_report

FORMATS = ("one-column", "two-column")
CSV_HEADER = ("label", "param", "g", "k", "n")
DEFAULT_G_MAX = 0.70


@dataclass
class Dataset:
    id: str
    values: np.ndarray


@dataclass(frozen=True)
class GKRecord:
    label: str
    param: Optional[float]
    g: float
    k: float
    n: int


@dataclass
class GKScatter:
    records: list[GKRecord] = field(default_factory=list)
    failed: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    @property
    def g(self) -> np.ndarray:
        return np.array([r.g for r in self.records], dtype=float)

    @property
    def k(self) -> np.ndarray:
        return np.array([r.k for r in self.records], dtype=float)


@dataclass(frozen=True)
class LinearFit:
    gamma: float
    intercept: float
    g_window: tuple[float, float]
    n_points: int
    rmse: float
    method: str = "ols"


def _parse_number(text, lineno):
    try:
        v = float(text)
    except ValueError:
        raise DatasetFormatError(f"not a number: {text!r}", lineno) from None
    if not math.isfinite(v):
        raise DatasetFormatError(f"non-finite value: {text!r}", lineno)
    if v < 0:
        raise DatasetFormatError(f"negative value: {text!r}", lineno)
    return v


def parse_dataset(text: str, format: str = "one-column", id: str = "data") -> Dataset:
    """Parse data text; ``#`` lines and blank lines are skipped."""
    if format not in FORMATS:
        raise ValidationError(f"unknown format {format!r}; expected one of {FORMATS}")
    values: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if format == "one-column":
            values.append(_parse_number(line, lineno))
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise DatasetFormatError(f"expected 'value,count', got {line!r}", lineno)
        v = _parse_number(parts[0], lineno)
        try:
            count = int(parts[1])
        except ValueError:
            raise DatasetFormatError(f"count is not an integer: {parts[1]!r}", lineno) from None
        if count <= 0:
            raise DatasetFormatError(f"count must be positive, got {count}", lineno)
        values.extend([v] * count)
    if not values:
        raise DatasetFormatError("no data records found")
    return Dataset(id=id, values=np.asarray(values, dtype=float))


def load_dataset(path, format: str = "one-column", id: str | None = None) -> Dataset:
    path = Path(path)
    # OSError (missing/unreadable file) propagates to the caller
    text = path.read_text(encoding="utf-8")
    return parse_dataset(text, format=format, id=id or path.stem)


def scatter_from_datasets(datasets: Iterable[Dataset]) -> GKScatter:
    """One record per dataset, ordered by id; failures are collected, not raised."""
    scatter = GKScatter()
    for ds in sorted(datasets, key=lambda d: d.id):
        try:
            rep = indices_report(ds.values)
        except ValidationError as exc:
            scatter.failed.append((ds.id, str(exc)))
            continue
        scatter.records.append(GKRecord(ds.id, None, rep.g, rep.k, rep.n))
    return scatter


def fit_gk_line(scatter: GKScatter, g_max: float = DEFAULT_G_MAX) -> LinearFit:
    """Ordinary least squares of k on g over records with ``g <= g_max``."""
    if not 0 < g_max <= 1:
        raise ValidationError(f"g_max must be in (0, 1], got {g_max}")
    g, k = scatter.g, scatter.k
    mask = g <= g_max
    g, k = g[mask], k[mask]
    if g.size < 2:
        raise ValidationError(f"need >= 2 points with g <= {g_max}, got {g.size}")
    gm, km = g.mean(), k.mean()
    sxx = np.sum((g - gm) ** 2)
    if sxx == 0:
        raise ValidationError("all in-window points share the same g; slope undefined")
    slope = float(np.sum((g - gm) * (k - km)) / sxx)
    intercept = float(km - slope * gm)
    rmse = float(np.sqrt(np.mean((k - intercept - slope * g) ** 2)))
    return LinearFit(slope, intercept, (0.0, float(g_max)), int(g.size), rmse)


# -- serialisation ---------------------------------------------------------------

def fmt6(v) -> str:
    """Six significant digits; ``None`` becomes the empty string."""
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = f"{float(v):.6g}"
    return "0" if s == "-0" else s


def num6(v):
    if v is None:
        return None
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(fmt6(v))


def scatter_to_csv(scatter: GKScatter) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in scatter.records:
        w.writerow([r.label, fmt6(r.param), fmt6(r.g), fmt6(r.k), fmt6(r.n)])
    return buf.getvalue()


def fit_to_dict(fit: LinearFit) -> dict:
    return {
        "gamma": num6(fit.gamma),
        "intercept": num6(fit.intercept),
        "g_window": [num6(fit.g_window[0]), num6(fit.g_window[1])],
        "n_points": fit.n_points,
        "rmse": num6(fit.rmse),
        "method": "ordinary least squares of k on g, intercept free",
    }


def scatter_to_json(scatter: GKScatter, fit: LinearFit | None = None, **extra) -> str:
    doc = {
        "records": [
            {"label": r.label, "param": num6(r.param), "g": num6(r.g), "k": num6(r.k), "n": r.n}
            for r in scatter.records
        ],
    }
    if scatter.failed:
        doc["failed"] = [{"id": i, "error": msg} for i, msg in scatter.failed]
    if fit is not None:
        doc["fit"] = fit_to_dict(fit)
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def scatter_from_csv(text: str) -> GKScatter:
    rows = list(csv.DictReader(io.StringIO(text)))
    scatter = GKScatter()
    for row in rows:
        param = float(row["param"]) if row["param"] else None
        scatter.records.append(
            GKRecord(row["label"], param, float(row["g"]), float(row["k"]), int(row["n"])))
    return scatter
