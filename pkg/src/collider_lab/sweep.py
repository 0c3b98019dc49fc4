"""Parameter sweeps, region fractions, and CSV emission.

A :class:`GridSpec` fixes a scenario family, one or two grid axes (inclusive
endpoints, evenly spaced), tie patterns mapping scenario parameters to a
multiple of an axis (e.g. a = b = x and c = d = 0.5 * x), and fixed values
for the rest.  :func:`run_sweep` evaluates feasibility and both closed-form
biases at every grid point with vectorized arithmetic; the value at any cell
is bit-identical to calling the bias formulas directly with those
parameters.

Rows are emitted in row-major order (first axis outermost), so output is
deterministic regardless of how the evaluation is executed.  Cells that
violate a feasibility constraint keep their axis coordinates but carry no
bias values.  Warn-level cells (nonzero standardization cross-terms, or no
exact unit-variance realization) are swept like any other: the surfaces are
defined by the formulas alone.

:func:`region_fraction` reports the share of feasible cells satisfying a
predicate; ties count as not satisfying for ``adjusted_smaller``.
"""

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import formulas
from .errors import DomainError, EmptyRegionError, RealizabilityError
from .scenarios import FAMILIES, SCENARIO_TYPES

__all__ = [
    "GridAxis",
    "GridSpec",
    "SweepTable",
    "run_sweep",
    "predicate_mask",
    "region_fraction",
    "emit_csv",
    "Predicate",
    "ADJUSTED_SMALLER",
    "abs_below",
    "below_min_frac",
]


@dataclass(frozen=True)
class GridAxis:
    """One sweep axis: ``points`` evenly spaced values from lo to hi inclusive."""

    name: str
    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"axis {self.name!r} bounds must be finite")
        if self.points < 1:
            raise DomainError(f"axis {self.name!r} needs at least 1 point")
        if self.points == 1 and self.lo != self.hi:
            raise DomainError(f"single-point axis {self.name!r} requires lo == hi")
        if self.lo > self.hi:
            raise DomainError(f"axis {self.name!r} has lo > hi")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class GridSpec:
    """Sweep description: family, axes, parameter ties, fixed parameters.

    ``ties`` maps a scenario parameter to ``(axis_name, multiplier)``.
    Every family parameter must be covered by exactly one tie or fixed
    value; an axis named after an otherwise uncovered parameter ties that
    parameter to itself.
    """

    family: str
    axes: tuple[GridAxis, ...]
    ties: Mapping[str, tuple[str, float]] = field(default_factory=dict)
    fixed: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if not 1 <= len(self.axes) <= 2:
            raise DomainError("a grid has one or two axes")
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise DomainError("axis names must be unique")
        params = FAMILIES[self.family].params
        ties = dict(self.ties)
        for name in names:
            if name in params and name not in ties and name not in self.fixed:
                ties[name] = (name, 1.0)
        object.__setattr__(self, "ties", ties)
        assigned = set(self.ties) | set(self.fixed)
        if set(self.ties) & set(self.fixed):
            overlap = sorted(set(self.ties) & set(self.fixed))
            raise DomainError(f"parameters both tied and fixed: {', '.join(overlap)}")
        if assigned != set(params):
            missing = sorted(set(params) - assigned)
            extra = sorted(assigned - set(params))
            detail = []
            if missing:
                detail.append("missing: " + ", ".join(missing))
            if extra:
                detail.append("not a parameter: " + ", ".join(extra))
            raise DomainError(f"grid does not cover the family parameters ({'; '.join(detail)})")
        for param, (axis_name, mult) in self.ties.items():
            if axis_name not in names:
                raise DomainError(f"tie for {param!r} references unknown axis {axis_name!r}")
            if not math.isfinite(mult):
                raise DomainError(f"tie multiplier for {param!r} must be finite")
        for param, value in self.fixed.items():
            if not math.isfinite(value):
                raise DomainError(f"fixed value for {param!r} must be finite")


@dataclass(frozen=True)
class SweepTable:
    """Sweep results in row-major grid order."""

    spec: GridSpec
    axis_values: dict[str, np.ndarray]
    feasible: np.ndarray
    warning: np.ndarray
    bias_unadjusted: np.ndarray
    bias_adjusted: np.ndarray
    ratio: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.feasible.shape[0]

    def column_names(self) -> tuple[str, ...]:
        axis_names = tuple(axis.name for axis in self.spec.axes)
        return axis_names + ("feasible", "warning", "bias_unadj", "bias_adj", "ratio")


_UNADJUSTED_FNS = {
    "m": lambda p: formulas.m_unadjusted_value(p["a"], p["b"], p["c"], p["d"], p["rho"]),
    "butterfly": lambda p: formulas.butterfly_unadjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["e"], p["f"]
    ),
    "binary_m": lambda p: formulas.binary_m_unadjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["rho"], p["alpha"]
    ),
    "binary_butterfly": lambda p: formulas.binary_butterfly_unadjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["e"], p["f"], p["alpha"]
    ),
    "w_to_t": lambda p: formulas.w_to_t_unadjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["g"], p["rho"]
    ),
}

_ADJUSTED_FNS = {
    "m": lambda p: formulas.m_adjusted_value(p["a"], p["b"], p["c"], p["d"], p["rho"]),
    "butterfly": lambda p: formulas.butterfly_adjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["e"], p["f"]
    ),
    "binary_m": lambda p: formulas.binary_m_adjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["rho"], p["alpha"]
    ),
    "binary_butterfly": lambda p: formulas.binary_butterfly_adjusted_value(
        p["a"], p["b"], p["c"], p["d"], p["e"], p["f"], p["alpha"]
    ),
}


def _w_to_t_adjusted(params: dict, feasible: np.ndarray) -> np.ndarray:
    """Adjusted bias for W->T grids: closed form at rho = 0, engine elsewhere."""
    a, b, c, d, g, rho = (params[k] for k in ("a", "b", "c", "d", "g", "rho"))
    with np.errstate(all="ignore"):
        closed = (d * g - c * d * (a * b + c * g)) / (1.0 - (a * b + c * g) ** 2)
    out = np.where(rho == 0.0, closed, np.nan)
    engine_cells = np.flatnonzero((rho != 0.0) & feasible)
    if engine_cells.size:
        from . import sem

        scenario_type = SCENARIO_TYPES["w_to_t"]
        for i in engine_cells:
            scenario = scenario_type(
                a=float(a[i]), b=float(b[i]), c=float(c[i]),
                d=float(d[i]), g=float(g[i]), rho=float(rho[i]),
            )
            try:
                out[i] = sem.scenario_bias(scenario, "adjusted")
            except RealizabilityError:
                out[i] = np.nan
    return out


def run_sweep(spec: GridSpec) -> SweepTable:
    """Evaluate feasibility, warnings, and both biases over the grid."""
    family = FAMILIES[spec.family]
    grids = np.meshgrid(*(axis.values() for axis in spec.axes), indexing="ij")
    shape = grids[0].shape
    n_rows = int(np.prod(shape))
    axis_flat = {
        axis.name: grid.reshape(n_rows) for axis, grid in zip(spec.axes, grids)
    }

    params: dict[str, np.ndarray] = {}
    for param, (axis_name, mult) in spec.ties.items():
        params[param] = mult * axis_flat[axis_name]
    for param, value in spec.fixed.items():
        params[param] = np.full(n_rows, float(value))

    feasible = np.ones(n_rows, dtype=bool)
    for constraint in family.constraints:
        margin = np.broadcast_to(np.asarray(constraint.margin(params), dtype=float), (n_rows,))
        feasible &= (margin < 0.0) if constraint.strict else (margin <= 0.0)

    warning = np.zeros(n_rows, dtype=bool)
    for _, term in family.cross_terms:
        warning |= np.broadcast_to(np.asarray(term(params), dtype=float), (n_rows,)) != 0.0
    for _, square in family.loading_squares:
        warning |= np.broadcast_to(np.asarray(square(params), dtype=float), (n_rows,)) < 0.0

    with np.errstate(all="ignore"):
        unadjusted = np.broadcast_to(
            np.asarray(_UNADJUSTED_FNS[spec.family](params), dtype=float), (n_rows,)
        ).copy()
        if spec.family == "w_to_t":
            adjusted = _w_to_t_adjusted(params, feasible)
        else:
            adjusted = np.broadcast_to(
                np.asarray(_ADJUSTED_FNS[spec.family](params), dtype=float), (n_rows,)
            ).copy()
        unadjusted[~feasible] = np.nan
        adjusted[~feasible] = np.nan
        ratio = np.abs(adjusted) / np.abs(unadjusted)
        ratio[unadjusted == 0.0] = np.nan

    return SweepTable(spec, axis_flat, feasible, warning, unadjusted, adjusted, ratio)


@dataclass(frozen=True)
class Predicate:
    """Region predicate over a sweep table (see module docstring)."""

    kind: str
    value: float | None = None

    def label(self) -> str:
        if self.value is None:
            return self.kind
        return f"{self.kind}({self.value:g})"


ADJUSTED_SMALLER = Predicate("adjusted_smaller")


def abs_below(threshold: float) -> Predicate:
    """|adjusted bias| < threshold."""
    if not (math.isfinite(threshold) and threshold > 0):
        raise DomainError("abs_below threshold must be positive and finite")
    return Predicate("abs_below", float(threshold))


def below_min_frac(fraction: float) -> Predicate:
    """|adjusted bias| < fraction * min over axes of |axis value|."""
    if not (math.isfinite(fraction) and fraction > 0):
        raise DomainError("below_min_frac fraction must be positive and finite")
    return Predicate("below_min_frac", float(fraction))


def predicate_mask(table: SweepTable, predicate: Predicate) -> np.ndarray:
    """Boolean mask of cells satisfying the predicate (feasibility aside).

    Comparisons are strict, so exact ties do not satisfy
    ``adjusted_smaller``; cells with undefined biases never satisfy.
    """
    with np.errstate(invalid="ignore"):
        if predicate.kind == "adjusted_smaller":
            return np.abs(table.bias_adjusted) < np.abs(table.bias_unadjusted)
        if predicate.kind == "abs_below":
            return np.abs(table.bias_adjusted) < predicate.value
        if predicate.kind == "below_min_frac":
            bound = np.min(
                np.stack([np.abs(table.axis_values[a.name]) for a in table.spec.axes]), axis=0
            )
            return np.abs(table.bias_adjusted) < predicate.value * bound
    raise DomainError(f"unknown predicate {predicate.kind!r}")


def region_fraction(table: SweepTable, predicate: Predicate) -> float:
    """Share of feasible cells satisfying the predicate.

    Raises :class:`EmptyRegionError` when no cell is feasible.
    """
    n_feasible = int(table.feasible.sum())
    if n_feasible == 0:
        raise EmptyRegionError("no feasible grid cells in the sweep")
    hits = predicate_mask(table, predicate)
    return float((hits & table.feasible).sum() / n_feasible)


def format_value(x: float) -> str:
    """Numeric formatting used by every emitter: 12 significant digits."""
    return f"{x:.12g}"


def _csv_lines(table: SweepTable, extra: dict[str, np.ndarray] | None = None):
    axis_names = [axis.name for axis in table.spec.axes]
    header = list(table.column_names())
    extra = extra or {}
    header += list(extra)
    yield ",".join(header)
    for i in range(table.n_rows):
        row = [format_value(float(table.axis_values[name][i])) for name in axis_names]
        row.append("1" if table.feasible[i] else "0")
        row.append("1" if table.warning[i] else "0")
        for column in (table.bias_unadjusted, table.bias_adjusted, table.ratio):
            value = float(column[i])
            row.append("" if math.isnan(value) else format_value(value))
        for values in extra.values():
            row.append(format_value(float(values[i])))
        yield ",".join(row)


def write_table(table: SweepTable, path, extra: dict[str, np.ndarray] | None = None) -> int:
    payload = "\n".join(_csv_lines(table, extra)) + "\n"
    data = payload.encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(data)
    return len(data)


def emit_csv(table: SweepTable, path) -> int:
    """Write the sweep as CSV; returns the number of bytes written.

    Columns: one per axis, then feasible, warning, bias_unadj, bias_adj,
    ratio.  Infeasible rows keep coordinates but have empty bias fields;
    ratio is empty whenever undefined.
    """
    return write_table(table, path)
