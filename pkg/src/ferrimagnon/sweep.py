"""Parameter sweeps, figure presets, config files and result persistence."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import __version__, dynamics, measures
from .errors import ConfigError, DegenerateSpectrumError, FerrimagnonError, InstabilityError
from .measures import MeasureSet
from .model import DerivedModel, SystemParams, derive_model

log = logging.getLogger(__name__)

__all__ = [
    "AXES",
    "PRESETS",
    "CSV_COLUMNS",
    "WORKERS_ENV",
    "SweepSpec",
    "SweepResult",
    "evaluate_point",
    "evaluate_model",
    "apply_axis",
    "run_sweep",
    "preset_spec",
    "optimize_field",
    "refine_max",
    "resonance_field",
    "spec_to_config",
    "spec_from_config",
    "load_config",
    "save_config",
    "write_csv",
    "write_metadata",
]

AXES = ("field_ratio", "spin_ratio", "kappa_ratio_b_over_a", "g_ac")
WORKERS_ENV = "FERRIMAGNON_WORKERS"
DEFAULT_POINTS = 401
FIELD_XATOL = 1e-5
FIELD_BOUNDS = (-1.0, 1.0)

CSV_COLUMNS = (
    "axis", "stable", "e_n", "g_a_to_b", "g_b_to_a", "pop_a", "pop_b", "pop_c",
    "pop_alpha", "pop_beta", "r", "g_alpha_c", "g_beta_c", "omega_alpha",
    "omega_beta", "omega_1", "omega_2", "omega_3", "gamma1_bc", "visibility",
    "distinguishability",
)

TOLERANCES = {
    "lyapunov_residual_rel": 1e-10,
    "marginal_stability": dynamics.MARGINAL_TOL,
    "frequency_resolution": measures.FREQ_RESOLUTION,
    "degenerate_population": measures.DEGENERATE_POP,
    "field_optimisation_xatol": FIELD_XATOL,
}


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional sweep over `axis` from `start` to `stop` (inclusive).

    With `optimize_field` the field ratio is re-optimised for maximal
    entanglement at every grid point, which only makes sense on non-field axes.
    """

    base: SystemParams = field(default_factory=SystemParams)
    axis: str = "field_ratio"
    start: float = -1.0
    stop: float = 1.0
    points: int = DEFAULT_POINTS
    preset: Optional[str] = None
    optimize_field: bool = False

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ConfigError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep range must be finite")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError(f"points must be an integer >= 2, got {self.points!r}")
        if self.optimize_field and self.axis == "field_ratio":
            raise ConfigError("optimize_field cannot be combined with a field_ratio axis")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass
class SweepResult:
    spec: SweepSpec
    axis_values: np.ndarray
    rows: list[MeasureSet]
    optimal_fields: Optional[list[Optional[float]]] = None

    def column(self, name: str) -> np.ndarray:
        """One MeasureSet attribute across the sweep, NaN where missing."""
        out = [getattr(r, name) for r in self.rows]
        return np.array([np.nan if x is None else float(x) for x in out])

    def metadata(self) -> dict:
        spec = self.spec
        meta = {
            "artifact": "ferrimagnon",
            "version": __version__,
            "axis": spec.axis,
            "start": spec.start,
            "stop": spec.stop,
            "points": spec.points,
            "preset": spec.preset,
            "preset_ranges_approximate": spec.preset is not None,
            "optimize_field": spec.optimize_field,
            "base": spec.base.to_dict(),
            "tolerances": dict(TOLERANCES),
            "columns": list(CSV_COLUMNS),
            "unstable_points": int(sum(not r.stable for r in self.rows)),
        }
        if self.optimal_fields is not None:
            meta["optimal_field_ratio"] = self.optimal_fields
        return meta


def evaluate_point(p: SystemParams) -> MeasureSet:
    """Full measure set at one parameter point.

    Unstable points come back with ``stable=False`` and only the
    Bogoliubov-frame fields filled in.
    """
    return evaluate_model(derive_model(p), p)


def evaluate_model(dm: DerivedModel, p: SystemParams) -> MeasureSet:
    """Like :func:`evaluate_point` for an explicit mode model; `p` supplies the dampings."""
    frame = measures.bogoliubov_frame(dm)
    m = dynamics.build_drift(dm, p)
    d = dynamics.build_diffusion(p)
    stab = dynamics.is_stable(m)
    out = MeasureSet(
        stable=stab.stable,
        margin=stab.margin,
        r=frame.r,
        g_alpha_c=frame.g_alpha_c,
        g_beta_c=frame.g_beta_c,
        omega_alpha=frame.omega_alpha,
        omega_beta=frame.omega_beta,
    )
    try:
        v = dynamics.steady_state(m, d)
    except InstabilityError:
        out.stable = False
        return out
    v_ab = measures.reduce(v, ("a", "b"))
    out.e_n = measures.log_negativity(v_ab)
    out.g_a_to_b, out.g_b_to_a = measures.steering_pair(v_ab)
    out.pop_a, out.pop_b, out.pop_c = measures.populations(v)
    out.pop_alpha, out.pop_beta = measures.bogoliubov_populations(v, frame)
    try:
        out.omega_1, out.omega_2, out.omega_3 = measures.eigenfrequencies(m)
    except DegenerateSpectrumError as exc:
        log.debug("degenerate spectrum at %s: %s", dm, exc)
    out.gamma1_bc = measures.coherence_bc(v)
    out.visibility, out.distinguishability = measures.visibility_distinguishability(v)
    out.residual = dynamics.lyapunov_residual(m, v, d)
    out.min_symplectic = float(measures.symplectic_eigenvalues(v)[0])
    return out


def apply_axis(base: SystemParams, axis: str, value: float) -> SystemParams:
    """Copy of `base` with the swept parameter set to `value`."""
    if axis == "kappa_ratio_b_over_a":
        return replace(base, kappa_b=value * base.kappa_a)
    if axis in ("field_ratio", "spin_ratio", "g_ac"):
        return replace(base, **{axis: float(value)})
    raise ConfigError(f"unknown axis {axis!r}")


def refine_max(
    f: Callable[[float], float],
    grid: np.ndarray,
    xatol: float = FIELD_XATOL,
) -> tuple[float, float]:
    """Maximise `f` by a grid scan followed by bounded Brent refinement.

    The refinement is confined to the two grid cells around the best grid
    point, so a narrow peak on a flat background is not missed.
    """
    values = np.array([f(x) for x in grid])
    k = int(np.nanargmax(values))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(lambda x: -f(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol})
    if -res.fun >= values[k]:
        return float(res.x), float(-res.fun)
    return float(grid[k]), float(values[k])


def _entanglement_or_nan(p: SystemParams) -> float:
    try:
        ms = evaluate_point(p)
    except FerrimagnonError:
        return math.nan
    return math.nan if ms.e_n is None else ms.e_n


def optimize_field(
    p: SystemParams,
    bounds: tuple[float, float] = FIELD_BOUNDS,
    coarse: int = 201,
    xatol: float = FIELD_XATOL,
) -> tuple[float, float]:
    """Field ratio that maximises magnon-magnon entanglement, and that maximum."""
    grid = np.linspace(bounds[0], bounds[1], coarse)
    return refine_max(lambda x: _entanglement_or_nan(replace(p, field_ratio=float(x))), grid, xatol)


def resonance_field(
    p: SystemParams,
    bounds: tuple[float, float] = FIELD_BOUNDS,
    coarse: int = 401,
) -> list[float]:
    """Field ratios where the acoustic band crosses the cavity frequency."""

    def detuning(x: float) -> float:
        q = replace(p, field_ratio=float(x))
        dm = derive_model(q)
        return measures.bogoliubov_frame(dm).omega_beta - dm.omega_c

    grid = np.linspace(bounds[0], bounds[1], coarse)
    vals = np.array([detuning(x) for x in grid])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i + 1] != 0.0:
            roots.append(float(brentq(detuning, grid[i], grid[i + 1], xtol=1e-12)))
    return roots


def _worker_count(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _sweep_point(spec: SweepSpec, x: float) -> tuple[MeasureSet, Optional[float]]:
    p = apply_axis(spec.base, spec.axis, x)
    if spec.optimize_field:
        best, _ = optimize_field(p)
        p = replace(p, field_ratio=best)
        return evaluate_point(p), best
    return evaluate_point(p), None


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> SweepResult:
    """Evaluate every grid point of `spec`, in grid order.

    `workers` (or the ``FERRIMAGNON_WORKERS`` environment variable) sets the
    thread-pool width; results do not depend on it.
    """
    grid = spec.grid()
    n = _worker_count(workers)
    if n == 1:
        out = [_sweep_point(spec, float(x)) for x in grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            out = list(pool.map(lambda x: _sweep_point(spec, float(x)), grid))
    rows = [o[0] for o in out]
    opt = [o[1] for o in out] if spec.optimize_field else None
    return SweepResult(spec, grid, rows, opt)


# ---------------------------------------------------------------- presets

_FIG2 = dict(anis_a=0.0163, kappa_a=0.001, kappa_b=0.001, kappa_c=0.003,
             g_ac=0.01, omega_c_over_hsp=0.85)
_FIG6 = dict(_FIG2, spin_ratio=1.0, field_ratio=0.15, g_bc=0.01)

# (base overrides, axis, start, stop, optimize_field); ranges are approximate
_PRESET_TABLE: dict[str, tuple[dict, str, float, float, bool]] = {
    "fig2a": (dict(_FIG2, spin_ratio=1.6), "field_ratio", -1.0, 1.0, False),
    "fig2b": (dict(_FIG2, spin_ratio=1.3), "field_ratio", -1.0, 1.0, False),
    "fig3a": (dict(_FIG2, spin_ratio=1.0, cavity_enabled=False), "kappa_ratio_b_over_a", 0.75, 1.25, False),
    "fig3b": (dict(_FIG2, kappa_b=0.0008, cavity_enabled=False), "spin_ratio", 0.4, 1.6, False),
    "fig4": (dict(_FIG2, spin_ratio=1.3), "field_ratio", -1.0, 1.0, False),
    "fig5": (dict(_FIG2), "spin_ratio", 0.1, 2.0, True),
    "fig6": (dict(_FIG6), "g_ac", 0.0, 0.03, False),
    "fig6a": (dict(_FIG6), "g_ac", 0.0, 0.03, False),
    "fig6b": (dict(_FIG6, kappa_c=0.001), "g_ac", 0.0, 0.03, False),
    "fig6c": (dict(_FIG6, kappa_c=0.001), "g_ac", 0.0, 0.03, False),
    "fig6d": (dict(_FIG6, kappa_c=0.001), "g_ac", 0.0, 0.03, False),
}
PRESETS = tuple(_PRESET_TABLE)


def preset_spec(name: str, points: int = DEFAULT_POINTS, **overrides) -> SweepSpec:
    """SweepSpec for a figure preset; `overrides` replace SystemParams fields."""
    try:
        base_kw, axis, start, stop, opt = _PRESET_TABLE[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; expected one of {PRESETS}") from None
    base = SystemParams(**{**base_kw, **overrides})
    return SweepSpec(base=base, axis=axis, start=start, stop=stop, points=points,
                     preset=name, optimize_field=opt)


# ---------------------------------------------------------------- config I/O

_PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
_SPEC_KEYS = ("axis", "start", "stop", "points", "preset", "optimize_field")


def spec_to_config(spec: SweepSpec) -> dict:
    """Flat key-value mapping with the SystemParams and SweepSpec field names."""
    cfg = spec.base.to_dict()
    cfg.update({k: getattr(spec, k) for k in _SPEC_KEYS})
    return cfg


def spec_from_config(cfg: dict) -> SweepSpec:
    """Inverse of :func:`spec_to_config`. Unknown keys are rejected."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a flat mapping")
    unknown = sorted(set(cfg) - set(_PARAM_KEYS) - set(_SPEC_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for k, v in cfg.items():
        if isinstance(v, (dict, list)):
            raise ConfigError(f"config value for {k!r} must be a scalar")
    try:
        base = SystemParams(**{k: cfg[k] for k in _PARAM_KEYS if k in cfg})
        return SweepSpec(base=base, **{k: cfg[k] for k in _SPEC_KEYS if k in cfg})
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def save_config(spec: SweepSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_config(spec), indent=2) + "\n")


def load_config(path: str | Path) -> SweepSpec:
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return spec_from_config(cfg)


# ---------------------------------------------------------------- output

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    return repr(float(x))


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for x, row in zip(result.axis_values, result.rows):
        rec = asdict(row)
        w.writerow([_fmt(float(x))] + [_fmt(rec[c]) for c in CSV_COLUMNS[1:]])
    return buf.getvalue()


def write_csv(result: SweepResult, path: str | Path) -> None:
    Path(path).write_text(csv_text(result))


def write_metadata(result: SweepResult, path: str | Path) -> None:
    Path(path).write_text(json.dumps(result.metadata(), indent=2, sort_keys=True) + "\n")
