"""Batch evaluation over a grid of potential strengths.

For every ``(a, b)`` the sweep builds the closed-form mode (focusing for
``sigma = +1``, the literal defocusing mode for ``sigma = -1``), and records
its propagation constant, quadrature power, stationary residual and the
linear-stability verdict.  Output goes to ``results.csv`` plus a
``manifest.json`` carrying the spec, per-point records and SHA-256 hashes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._io import read_json, sha256_file, write_csv, write_json
from .errors import PtRosenError, ValidationError
from .grid import make_grid
from .linstab import DISCRETIZATIONS, analyze_mode
from .modes import defocusing_mode_1d, focusing_mode_1d, mode_residual
from .observables import power
from .potential import PotentialParams

__all__ = ["SweepSpec", "SweepManifest", "RESULTS_HEADER", "run_sweep", "evaluate_point", "verify_manifest"]

RESULTS_HEADER = ("a", "b", "sigma", "lambda", "power", "residual", "max_growth", "classification")


@dataclass(frozen=True)
class SweepSpec:
    a_values: tuple[float, ...]
    b_values: tuple[float, ...]
    sigma: int = 1
    L: float = 20.0
    n: int = 512
    disc: str = "fourier"
    tol: float | None = None
    out_dir: str = "."
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a_values", tuple(float(v) for v in self.a_values))
        object.__setattr__(self, "b_values", tuple(float(v) for v in self.b_values))
        if not self.a_values:
            raise ValidationError("a_values is empty")
        if not self.b_values:
            raise ValidationError("b_values is empty")
        for v in self.a_values + self.b_values:
            if not math.isfinite(v):
                raise ValidationError(f"non-finite parameter value {v}")
        if self.sigma not in (1, -1):
            raise ValidationError(f"sigma must be +1 or -1, got {self.sigma}")
        if self.disc not in DISCRETIZATIONS:
            raise ValidationError(f"disc must be one of {DISCRETIZATIONS}, got {self.disc!r}")
        if self.tol is not None and not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol}")
        if self.workers is not None and self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        make_grid(self.L, self.n)
        object.__setattr__(self, "out_dir", os.fspath(self.out_dir))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d


@dataclass
class SweepManifest:
    spec: SweepSpec
    records: list[dict]
    files: dict[str, str] = field(default_factory=dict)
    started: str = ""
    finished: str = ""
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "tool": "ptrosen",
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "spec": self.spec.to_dict(),
            "records": self.records,
            "files": self.files,
        }

    @property
    def n_errors(self) -> int:
        return sum(1 for r in self.records if r.get("error"))


def evaluate_point(a: float, b: float, sigma: int, L: float, n: int, disc: str,
                   tol: float | None) -> dict:
    """One sweep row.  Package errors are caught and returned under ``"error"``."""
    rec = {"a": a, "b": b, "sigma": sigma}
    try:
        p = PotentialParams(a, b)
        m = focusing_mode_1d(p) if sigma == 1 else defocusing_mode_1d(p)
        g = make_grid(L, n)
        rec["lambda"] = m.lam
        rec["power"] = power(m.evaluate(g), g)
        rec["residual"] = mode_residual(m, g)
        spec = analyze_mode(m, g, disc, tol)
        rec["max_growth"] = spec.max_growth
        rec["classification"] = spec.classification
        rec["tol"] = spec.tol
        rec["error"] = None
    except PtRosenError as exc:
        rec.setdefault("lambda", math.nan)
        for k in ("power", "residual", "max_growth", "tol"):
            rec.setdefault(k, math.nan)
        rec["classification"] = "error"
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run_sweep(spec: SweepSpec) -> SweepManifest:
    """Evaluate every ``(a, b)`` point and write ``results.csv`` and ``manifest.json``.

    Points run in a process pool of ``spec.workers`` (default: CPU count);
    rows are ordered by ``(a index, b index)`` whatever the completion order.
    """
    out = Path(spec.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise ValidationError(f"output directory {out} is not writable")

    started = _now()
    jobs = [(a, b, spec.sigma, spec.L, spec.n, spec.disc, spec.tol)
            for a in spec.a_values for b in spec.b_values]
    workers = spec.workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        records = [evaluate_point(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            records = list(pool.map(evaluate_point, *zip(*jobs)))

    rows = [[r[k] for k in RESULTS_HEADER] for r in records]
    csv_path = write_csv(out / "results.csv", RESULTS_HEADER, rows)
    manifest = SweepManifest(spec, records, {csv_path.name: sha256_file(csv_path)}, started, _now())
    write_json(out / "manifest.json", manifest.to_dict())
    return manifest


def verify_manifest(directory) -> dict[str, bool]:
    """Recompute the hash of every file listed in ``manifest.json``; name -> matches."""
    directory = Path(directory)
    data = read_json(directory / "manifest.json")
    result = {}
    for name, digest in data.get("files", {}).items():
        path = directory / name
        result[name] = path.exists() and sha256_file(path) == digest
    return result
