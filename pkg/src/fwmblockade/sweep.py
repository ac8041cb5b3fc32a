"""Declarative parameter sweeps over the steady state."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from .analytics import BlockadeVerdict, classify
from .fock import HilbertSpace
from .liouvillian import (
    Observables,
    SolverError,
    SolverOptions,
    build_liouvillian,
    observables,
    steady_state,
)
from .model import SystemParams, build_collapse_channels, build_hamiltonian

log = logging.getLogger(__name__)

OBSERVABLE_NAMES = ("mean_n_a", "g2", "g3", "residual")


class ConfigError(ValueError):
    pass


class SweepFailed(RuntimeError):
    """No grid point produced a converged steady state."""


@dataclass(frozen=True)
class AxisSpec:
    param: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.param not in SystemParams.field_names():
            raise ConfigError(f"unknown sweep parameter {self.param!r}; choose from {SystemParams.field_names()}")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis count must be an integer >= 2, got {self.count}")
        if self.start == self.stop:
            raise ConfigError("axis start and stop must differ")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and (self.start == 0 or self.stop == 0 or (self.start > 0) != (self.stop > 0)):
            raise ConfigError("log spacing needs start and stop of the same sign, both non-zero")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        """Grid spacing (largest gap for log axes)."""
        return float(np.max(np.abs(np.diff(self.values()))))


@dataclass(frozen=True)
class OutputSpec:
    csv: Optional[str] = None
    json: Optional[str] = None
    svg: Optional[str] = None


@dataclass(frozen=True)
class SweepConfig:
    base: SystemParams
    axis1: AxisSpec
    axis2: Optional[AxisSpec] = None
    dims: tuple[int, int, int] = (5, 5, 5)
    solver: SolverOptions = SolverOptions()
    outputs: OutputSpec = OutputSpec()
    parallel_workers: int = 1
    name: str = "sweep"
    notes: tuple[str, ...] = ()
    # extra curve drawn over 2-D plots, e.g. {"kind": "upb_optimal_E", "F_a": 0.1}
    overlay: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        HilbertSpace(tuple(self.dims))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.parallel_workers < 1:
            raise ConfigError("parallel_workers must be >= 1")
        if self.axis2 is not None and self.axis2.param == self.axis1.param:
            raise ConfigError("axis1 and axis2 sweep the same parameter")
        object.__setattr__(self, "notes", tuple(self.notes))

    def grid(self) -> list[tuple[tuple[int, Optional[int]], tuple[float, Optional[float]]]]:
        xs = self.axis1.values()
        if self.axis2 is None:
            return [((i, None), (float(x), None)) for i, x in enumerate(xs)]
        ys = self.axis2.values()
        return [((i, j), (float(x), float(y))) for i, x in enumerate(xs) for j, y in enumerate(ys)]

    def params_at(self, coords: tuple[float, Optional[float]]) -> SystemParams:
        changes = {self.axis1.param: coords[0]}
        if self.axis2 is not None:
            changes[self.axis2.param] = coords[1]
        return self.base.with_(**changes)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "base": self.base.to_dict(),
            "axis1": asdict(self.axis1),
            "axis2": asdict(self.axis2) if self.axis2 else None,
            "dims": list(self.dims),
            "solver": asdict(self.solver),
            "outputs": asdict(self.outputs),
            "parallel_workers": self.parallel_workers,
            "notes": list(self.notes),
            "overlay": self.overlay,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SweepConfig:
        try:
            return cls(
                base=SystemParams.from_dict(d.get("base", {})),
                axis1=AxisSpec(**d["axis1"]),
                axis2=AxisSpec(**d["axis2"]) if d.get("axis2") else None,
                dims=tuple(d.get("dims", (5, 5, 5))),
                solver=SolverOptions(**d.get("solver", {})),
                outputs=OutputSpec(**d.get("outputs", {})),
                parallel_workers=int(d.get("parallel_workers", 1)),
                name=d.get("name", "sweep"),
                notes=tuple(d.get("notes", ())),
                overlay=d.get("overlay"),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid sweep config: {exc}") from exc


def config_from_mapping(doc: dict) -> SweepConfig:
    """Build a config from the parsed key-value document (see README)."""
    doc = dict(doc)
    allowed = {"name", "base", "axis1", "axis2", "truncation", "solver", "outputs", "parallel_workers", "notes", "overlay"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "axis1" not in doc:
        raise ConfigError("config needs an axis1 section")
    trunc = doc.pop("truncation", {})
    dims = trunc.get("dims", (5, 5, 5))
    if isinstance(dims, str):
        dims = [int(s) for s in dims.split(",")]
    doc["dims"] = dims
    return SweepConfig.from_dict(doc)


def load_config(path: str | Path) -> SweepConfig:
    try:
        import tomllib as tomli
    except ModuleNotFoundError:  # Python 3.10
        import tomli

    path = Path(path)
    try:
        with path.open("rb") as fh:
            doc = tomli.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return config_from_mapping(doc)


@dataclass(frozen=True)
class PointResult:
    index: tuple[int, Optional[int]]
    coords: tuple[float, Optional[float]]
    converged: bool
    observables: Optional[Observables] = None
    verdict: Optional[BlockadeVerdict] = None
    error: Optional[str] = None

    def value(self, name: str) -> Optional[float]:
        if not self.converged or self.observables is None:
            return None
        return getattr(self.observables, name)

    def to_dict(self) -> dict:
        return {
            "index": list(self.index),
            "coords": list(self.coords),
            "converged": self.converged,
            "observables": self.observables.to_dict() if self.observables else None,
            "verdict": self.verdict.to_dict() if self.verdict else None,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PointResult:
        return cls(
            index=tuple(d["index"]),
            coords=tuple(d["coords"]),
            converged=d["converged"],
            observables=Observables.from_dict(d["observables"]) if d["observables"] else None,
            verdict=BlockadeVerdict.from_dict(d["verdict"]) if d["verdict"] else None,
            error=d["error"],
        )


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple[PointResult, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def values(self, name: str) -> np.ndarray:
        """Observable over the grid (NaN where failed/undefined), shaped like the grid."""
        out = np.array([np.nan if (v := p.value(name)) is None else v for p in self.points], dtype=float)
        if self.config.axis2 is not None:
            return out.reshape(self.config.axis1.count, self.config.axis2.count)
        return out

    def axis_values(self) -> np.ndarray:
        return np.array([p.coords[0] for p in self.points])

    @property
    def n_converged(self) -> int:
        return sum(p.converged for p in self.points)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "points": [p.to_dict() for p in self.points],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SweepResult:
        return cls(
            config=SweepConfig.from_dict(d["config"]),
            points=tuple(PointResult.from_dict(p) for p in d["points"]),
            metadata=d.get("metadata", {}),
        )


def evaluate_point(config: SweepConfig, item) -> PointResult:
    index, coords = item
    params = config.params_at(coords)
    space = HilbertSpace(config.dims)
    try:
        L = build_liouvillian(build_hamiltonian(params, space), build_collapse_channels(params, space))
        rho = steady_state(L, config.solver)
        obs = observables(rho, L)
    except SolverError as exc:
        log.warning("point %s failed: %s", coords, exc)
        return PointResult(index, coords, False, error=f"{type(exc).__name__}: {exc}")
    return PointResult(index, coords, True, obs, classify(obs, params))


def run_sweep(config: SweepConfig, workers: Optional[int] = None) -> SweepResult:
    """Evaluate every grid point; failures are recorded in place."""
    from . import __version__

    workers = workers or config.parallel_workers
    grid = config.grid()
    t0 = time.perf_counter()
    task = partial(evaluate_point, config)
    if workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(task, grid, chunksize=max(1, len(grid) // (4 * workers))))
    else:
        points = [task(item) for item in grid]
    wall = time.perf_counter() - t0
    meta = {"wall_time_s": wall, "version": __version__, "workers": workers, "config": config.to_dict()}
    return SweepResult(config, tuple(points), meta)


def _extremum(result: SweepResult, observable: str, sign: float):
    if observable not in OBSERVABLE_NAMES:
        raise ValueError(f"unknown observable {observable!r}")
    best = None
    for p in result.points:
        v = p.value(observable)
        if v is None or not math.isfinite(v):
            continue
        # strict comparison keeps the earliest grid point on ties
        if best is None or sign * v < sign * best[1]:
            best = (p.coords, v)
    if best is None:
        raise SweepFailed(f"no converged point with a defined {observable}")
    return best


def find_minimum(result: SweepResult, observable: str = "g2") -> tuple[tuple[float, Optional[float]], float]:
    return _extremum(result, observable, 1.0)


def find_maximum(result: SweepResult, observable: str = "mean_n_a") -> tuple[tuple[float, Optional[float]], float]:
    return _extremum(result, observable, -1.0)


def with_outputs(config: SweepConfig, out_dir: str | Path, svg: bool = True) -> SweepConfig:
    out = Path(out_dir)
    return replace(config, outputs=OutputSpec(
        csv=str(out / f"{config.name}.csv"),
        json=str(out / f"{config.name}.json"),
        svg=str(out / f"{config.name}.svg") if svg else None,
    ))
