"""Seeded Monte-Carlo sweeps over (n, t, a, b, c) grids with CSV output.

Each trial is a pure function of ``(config, grid point, trial_index)``: its
seed is ``derive_seed(master_seed, model, n, t, a, b, c, trial_index)`` (see
:func:`geomgraph.rng.derive_seed` for the byte layout, ``c`` encodes as None
when the model has no ``c``), so any row can be replayed alone with
:func:`replay`. Trials may run in a process pool; rows are always written in
grid order (``n``, ``t``, ``a``, ``b``, ``c`` nested left to right, each in
config order) and then by trial index.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from .analysis import connected_components, count_isolated, count_no_left_neighbor
from .errors import DomainError
from .generators import (
    MODELS,
    GeometricInstance,
    gen_gbm,
    gen_gbm_t,
    gen_rag,
    gen_vrg,
    gen_vrg_union,
    scaled_radius,
    unscaled_radius,
)
from .recovery import recover_gbm_1d, recover_gbm_highdim, recover_with_locations
from .rng import derive_seed

SCHEMA_VERSION = 1
MEASURES = ("Connectivity", "IsolatedCount", "Recovery", "NoLeftNeighbor")
RECOVERY_MODES = ("triangle", "with-locations")
CIRCLE_MODELS = ("vrg", "gbm", "vrg_union")
BLOCK_MODELS = ("gbm", "gbmt")


# --------------------------------------------------------------------------
# instances from scaled parameters


def _log_scale(n, t=1):
    if n < 2:
        raise DomainError("the log n / n scale needs n >= 2")
    return scaled_radius(1.0, n, t)


def make_instance(model: str, n: int, a: float, b: float, t: int = 1, c: Optional[float] = None,
                  seed: Optional[int] = None, absolute: bool = False) -> GeometricInstance:
    """Build an instance from connectivity-regime parameters.

    Unless ``absolute`` is set, ``a``, ``b`` (and ``c``) are scaled by
    ``(log n / n) ** (1/t)``. ``a`` is the outer radius (``r2`` or ``rs``),
    ``b`` the inner (``r1`` or ``rd``). For ``vrg_union`` the call order is
    ``[0, c] ∪ [b, a]``.
    """
    if model in ("vrg", "gbm", "vrg_union") and t != 1:
        raise DomainError(f"model {model!r} lives on the circle, got t={t}")
    if model == "vrg_union":
        if c is None:
            raise DomainError("vrg_union needs c")
        if absolute:
            s = _log_scale(n)
            a, b, c = a / s, b / s, c / s
        return gen_vrg_union(n, c, b, a, seed)
    if not absolute:
        a, b = scaled_radius(a, n, t), scaled_radius(b, n, t)
    if model == "vrg":
        return gen_vrg(n, b, a, seed)
    if model == "rag":
        return gen_rag(n, t, b, a, seed)
    if model == "gbm":
        return gen_gbm(n, a, b, seed)
    if model == "gbmt":
        return gen_gbm_t(n, t, a, b, seed)
    raise DomainError(f"unknown model {model!r}")


def recover_instance(inst: GeometricInstance, mode: str = "triangle", c_s: float = 1.0, c_d: float = 1.0):
    """Run the recovery algorithm matching ``inst.model`` and ``mode``."""
    if inst.model not in BLOCK_MODELS:
        raise DomainError(f"recovery needs a block-model instance, got {inst.model!r}")
    if mode not in RECOVERY_MODES:
        raise DomainError(f"unknown recovery mode {mode!r}")
    rs, rd = inst.params["rs"], inst.params["rd"]
    if mode == "with-locations":
        if inst.model != "gbm":
            raise DomainError("with-locations recovery is defined for gbm only")
        return recover_with_locations(inst)
    if inst.model == "gbm":
        a, b = unscaled_radius(rs, inst.n), unscaled_radius(rd, inst.n)
        return recover_gbm_1d(inst.graph, a, b, truth=inst.truth)
    return recover_gbm_highdim(inst.graph, inst.dim_t, rs, rd, c_s, c_d, truth=inst.truth)


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class GridPoint:
    n: int
    t: int
    a: float
    b: float
    c: Optional[float] = None


@dataclass(frozen=True)
class SweepConfig:
    model: str
    grid: dict
    trials: int
    master_seed: int
    measure: str
    mode: str = "triangle"
    absolute_radii: bool = False
    c_s: float = 1.0
    c_d: float = 1.0
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        missing = {"model", "grid", "trials", "master_seed", "measure"} - set(data)
        if missing:
            raise DomainError(f"missing config fields: {sorted(missing)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise DomainError("sweep config must be a JSON object")
        return cls.from_dict(data)

    def points(self) -> list[GridPoint]:
        g = self.grid
        ts = g.get("t", [1])
        cs = g.get("c", [None])
        return [GridPoint(int(n), int(t), float(a), float(b), None if c is None else float(c))
                for n, t, a, b, c in itertools.product(g["n"], ts, g["a"], g["b"], cs)]

    def validate(self) -> None:
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.measure not in MEASURES:
            raise DomainError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        if self.mode not in RECOVERY_MODES:
            raise DomainError(f"mode must be one of {RECOVERY_MODES}, got {self.mode!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError("trials must be an integer >= 1")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise DomainError("workers must be an integer >= 1")
        if not isinstance(self.grid, dict):
            raise DomainError("grid must be an object")
        extra = set(self.grid) - {"n", "t", "a", "b", "c"}
        if extra:
            raise DomainError(f"unknown grid keys: {sorted(extra)}")
        for key, values in self.grid.items():
            if not isinstance(values, list) or not values:
                raise DomainError(f"grid.{key} must be a nonempty list")
        for key in ("n", "a", "b"):
            if key not in self.grid:
                raise DomainError(f"grid.{key} is required")
        if self.model == "vrg_union" and not self.grid.get("c"):
            raise DomainError("vrg_union sweeps need grid.c")
        if self.model != "vrg_union" and "c" in self.grid:
            raise DomainError("grid.c only applies to vrg_union")
        if self.measure == "Recovery" and self.model not in BLOCK_MODELS:
            raise DomainError("Recovery sweeps need a block model")
        if self.measure == "NoLeftNeighbor" and self.model not in CIRCLE_MODELS:
            raise DomainError("NoLeftNeighbor sweeps need a circle model")
        try:
            points = self.points()
        except (TypeError, ValueError) as exc:
            raise DomainError(f"grid values must be numbers: {exc}") from exc
        for p in points:
            _check_point(self, p)


def _check_point(cfg: SweepConfig, p: GridPoint) -> None:
    """Reject grid points the generators would refuse, before any trial runs.

    Radii are checked by building a 2-vertex instance from fixed positions,
    which runs exactly the generators' own validation at negligible cost.
    """
    try:
        if p.n < 2:
            raise DomainError(f"n must be >= 2, got {p.n}")
        if cfg.model in BLOCK_MODELS and p.n % 2:
            raise DomainError(f"block models need an even n, got {p.n}")
        if cfg.measure == "Recovery" and cfg.mode == "with-locations" and cfg.model != "gbm":
            raise DomainError("with-locations recovery is defined for gbm only")
        _probe(cfg, p)
    except DomainError as exc:
        raise DomainError(f"invalid grid point {asdict(p)}: {exc}") from exc


def _probe(cfg: SweepConfig, p: GridPoint) -> None:
    t = p.t
    if cfg.model == "vrg_union":
        s = 1.0 if cfg.absolute_radii else _log_scale(p.n)
        if p.c is None or not 0 < p.c * s < p.b * s < p.a * s <= 0.5:
            raise DomainError("need 0 < c < b < a with scaled radii at most 0.5")
        return
    if cfg.absolute_radii:
        a, b = p.a, p.b
    else:
        a, b = scaled_radius(p.a, p.n, t), scaled_radius(p.b, p.n, t)
    if cfg.model in ("vrg", "gbm"):
        if t != 1:
            raise DomainError(f"model {cfg.model!r} lives on the circle, got t={t}")
        x = np.array([0.0, 0.25])
    else:
        if t < 1:
            raise DomainError(f"t must be >= 1, got {t}")
        x = np.zeros((2, t + 1))
        x[:, 0] = 1.0
    if cfg.model == "vrg":
        gen_vrg(2, b, a, positions=x)
    elif cfg.model == "rag":
        gen_rag(2, t, b, a, positions=x)
    elif cfg.model == "gbm":
        gen_gbm(2, a, b, positions=x)
    elif cfg.model == "gbmt":
        gen_gbm_t(2, t, a, b, positions=x)
    else:
        raise DomainError(f"unknown model {cfg.model!r}")


# --------------------------------------------------------------------------
# trials


@dataclass
class TrialRecord:
    model: str
    measure: str
    n: int
    t: int
    a: float
    b: float
    c: Optional[float]
    trial_index: int
    seed_used: int
    connected: Optional[bool] = None
    components: Optional[int] = None
    isolated: Optional[int] = None
    no_left: Optional[int] = None
    accuracy: Optional[float] = None
    exact: Optional[bool] = None
    removed_edges: Optional[int] = None
    wall_time_ms: Optional[float] = field(default=None, compare=False)


COLUMNS = ["schema_version"] + [f.name for f in fields(TrialRecord)]


def trial_seed(cfg: SweepConfig, p: GridPoint, trial_index: int) -> int:
    return derive_seed(cfg.master_seed, cfg.model, p.n, p.t, p.a, p.b, p.c, trial_index)


def run_trial(cfg: SweepConfig, p: GridPoint, trial_index: int) -> TrialRecord:
    start = time.perf_counter()
    seed = trial_seed(cfg, p, trial_index)
    inst = make_instance(cfg.model, p.n, p.a, p.b, p.t, p.c, seed=seed, absolute=cfg.absolute_radii)
    rec = TrialRecord(cfg.model, cfg.measure, p.n, p.t, p.a, p.b, p.c, trial_index, seed)
    g = inst.graph
    if cfg.measure == "Connectivity":
        rec.components = connected_components(g).count
        rec.connected = rec.components <= 1
        rec.isolated = count_isolated(g)
    elif cfg.measure == "IsolatedCount":
        rec.isolated = count_isolated(g)
    elif cfg.measure == "NoLeftNeighbor":
        rec.no_left = count_no_left_neighbor(inst)
    else:
        out = recover_instance(inst, cfg.mode, cfg.c_s, cfg.c_d)
        rec.components = out.component_count
        rec.removed_edges = out.removed_edges
        rec.accuracy = out.accuracy
        rec.exact = out.exact
    rec.wall_time_ms = (time.perf_counter() - start) * 1e3
    return rec


def replay(cfg: SweepConfig, p: GridPoint, trial_index: int) -> TrialRecord:
    """Re-run a single trial; equal to the corresponding sweep row."""
    return run_trial(cfg, p, trial_index)


def _run_task(task):
    return run_trial(*task)


def run_sweep(cfg: SweepConfig, workers: Optional[int] = None) -> list[TrialRecord]:
    """All trials of ``cfg`` in canonical order."""
    tasks = [(cfg, p, k) for p in cfg.points() for k in range(cfg.trials)]
    workers = cfg.workers if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, so output order is canonical
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# --------------------------------------------------------------------------
# CSV


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.9g}"


def write_trials(records, fh, timings: bool = False) -> None:
    cols = COLUMNS if timings else COLUMNS[:-1]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for rec in records:
        row = {"schema_version": SCHEMA_VERSION, **asdict(rec)}
        w.writerow([format_value(row[c]) for c in cols])


SUMMARY_COLUMNS = [
    "schema_version", "model", "measure", "n", "t", "a", "b", "c", "trials",
    "connected_frac", "mean_components", "mean_isolated", "se_isolated", "isolated_present_frac",
    "mean_no_left", "mean_accuracy", "exact_frac", "mean_removed_edges",
]


def _mean(values):
    vals = [float(v) for v in values if v is not None]
    return sum(vals) / len(vals) if vals else None


def _se(values):
    vals = np.array([float(v) for v in values if v is not None])
    if len(vals) < 2:
        return None
    return float(vals.std(ddof=1) / math.sqrt(len(vals)))


def summarize(records) -> list[dict]:
    """Per-grid-point means, in the order points first appear."""
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.n, rec.t, rec.a, rec.b, rec.c), []).append(rec)
    rows = []
    for (n, t, a, b, c), recs in groups.items():
        iso = [r.isolated for r in recs]
        rows.append({
            "schema_version": SCHEMA_VERSION, "model": recs[0].model, "measure": recs[0].measure,
            "n": n, "t": t, "a": a, "b": b, "c": c, "trials": len(recs),
            "connected_frac": _mean(r.connected for r in recs),
            "mean_components": _mean(r.components for r in recs),
            "mean_isolated": _mean(iso),
            "se_isolated": _se(iso),
            "isolated_present_frac": _mean(None if v is None else v > 0 for v in iso),
            "mean_no_left": _mean(r.no_left for r in recs),
            "mean_accuracy": _mean(r.accuracy for r in recs),
            "exact_frac": _mean(r.exact for r in recs),
            "mean_removed_edges": _mean(r.removed_edges for r in recs),
        })
    return rows


def write_summary(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for row in rows:
        w.writerow([format_value(row[c]) for c in SUMMARY_COLUMNS])
