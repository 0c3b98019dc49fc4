"""Built-in sensitivity-figure datasets.

Each panel of the bundled figure suite is a sweep over one structure with a
named tie pattern; this module materializes them as ``figN[panel].csv``
files plus a companion ``figstats.csv`` holding the region-fraction
annotations.  Renderers are expected to read both and never recompute:
every number that appears in a figure, including the annotated percentage
strings, comes from these files.

Two-dimensional panels are written at a plot-friendly resolution while
their annotated fractions are computed on a separate 1000 x 1000 grid (the
resolution at which the captioned values are quoted); one-dimensional
panels use a single 1000-point grid for both. The 1-D grids deliberately
use an even point count so the degenerate a = 0 tie (both biases zero) is
never sampled.

The ``COLLIDER_LAB_THREADS`` environment variable caps how many panels are
built concurrently (0 or unset = one worker per CPU).  Output bytes do not
depend on the worker count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import DomainError
from .sweep import (
    ADJUSTED_SMALLER,
    GridAxis,
    GridSpec,
    Predicate,
    abs_below,
    below_min_frac,
    format_value,
    predicate_mask,
    region_fraction,
    run_sweep,
    write_table,
)

__all__ = ["FigurePanel", "FIGURE_PANELS", "write_figure_datasets", "thread_cap"]

_HALF_SQRT2 = math.sqrt(2.0) / 2.0
_BUTTERFLY_HI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FigurePanel:
    """One CSV dataset: a grid, its shading predicate, and 1-D/2-D layout."""

    name: str
    build: Callable[[int], GridSpec]  # points per axis -> grid
    predicate: Predicate
    two_dee: bool


def _m_line(rho: float) -> Callable[[int], GridSpec]:
    ties = {k: ("a", 1.0) for k in ("a", "b", "c", "d")}
    return lambda n: GridSpec(
        "m", (GridAxis("a", -_HALF_SQRT2, _HALF_SQRT2, n),), ties, {"rho": rho}
    )


def _binary_m_line(rho: float) -> Callable[[int], GridSpec]:
    ties = {k: ("a", 1.0) for k in ("a", "b", "c", "d")}
    return lambda n: GridSpec(
        "binary_m",
        (GridAxis("a", -_HALF_SQRT2, _HALF_SQRT2, n),),
        ties,
        {"rho": rho, "alpha": 0.0},
    )


def _fig2(mults: dict[str, float], axis: str) -> Callable[[int], GridSpec]:
    ties = {k: (axis, m) for k, m in mults.items()}
    return lambda n: GridSpec("m", (GridAxis(axis, -1.0, 1.0, n),), ties, {"rho": 0.0})


def _butterfly_line(family: str) -> Callable[[int], GridSpec]:
    params = ("a", "b", "c", "d", "e", "f")
    ties = {k: ("a", 1.0) for k in params}
    fixed = {"alpha": 0.0} if family == "binary_butterfly" else {}
    return lambda n: GridSpec(
        family, (GridAxis("a", -_HALF_SQRT2, _BUTTERFLY_HI, n),), ties, fixed
    )


def _butterfly_plane(family: str) -> Callable[[int], GridSpec]:
    ties = {k: ("a", 1.0) for k in ("a", "b", "c", "d")} | {"e": ("e", 1.0), "f": ("e", 1.0)}
    fixed = {"alpha": 0.0} if family == "binary_butterfly" else {}
    return lambda n: GridSpec(
        family,
        (GridAxis("a", -_HALF_SQRT2, _HALF_SQRT2, n), GridAxis("e", -1.0, 1.0, n)),
        ties,
        fixed,
    )


FIGURE_PANELS: tuple[FigurePanel, ...] = (
    # adjusted bias along a, three relative predictiveness patterns
    FigurePanel("fig2_a", _fig2({"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0}, "a"), abs_below(0.01), False),
    FigurePanel("fig2_b", _fig2({"a": 1.0, "b": 1.0, "c": 0.5, "d": 0.5}, "a"), abs_below(0.01), False),
    FigurePanel("fig2_c", _fig2({"a": 0.5, "b": 0.5, "c": 1.0, "d": 1.0}, "c"), abs_below(0.01), False),
    # adjusted bias small relative to the weaker arm, over (a=b, c=d)
    FigurePanel(
        "fig3_a",
        lambda n: GridSpec(
            "m",
            (GridAxis("a", -1.0, 1.0, n), GridAxis("c", -1.0, 1.0, n)),
            {"a": ("a", 1.0), "b": ("a", 1.0), "c": ("c", 1.0), "d": ("c", 1.0)},
            {"rho": 0.0},
        ),
        below_min_frac(1.0 / 20.0),
        True,
    ),
    # adjusted-superior region over (a=b=c, rho); the comparison is d-free
    FigurePanel(
        "fig3_b",
        lambda n: GridSpec(
            "m",
            (GridAxis("a", -_HALF_SQRT2, _HALF_SQRT2, n), GridAxis("rho", -1.0, 1.0, n)),
            {"a": ("a", 1.0), "b": ("a", 1.0), "c": ("a", 1.0)},
            {"d": 0.5},
        ),
        ADJUSTED_SMALLER,
        True,
    ),
    FigurePanel("fig4_a", _m_line(0.1), ADJUSTED_SMALLER, False),
    FigurePanel("fig4_b", _m_line(0.2), ADJUSTED_SMALLER, False),
    FigurePanel("fig4_c", _m_line(0.4), ADJUSTED_SMALLER, False),
    FigurePanel("fig5_a", _butterfly_line("butterfly"), ADJUSTED_SMALLER, False),
    FigurePanel("fig5_b", _butterfly_plane("butterfly"), ADJUSTED_SMALLER, True),
    FigurePanel("fig6_a", _binary_m_line(0.1), ADJUSTED_SMALLER, False),
    FigurePanel("fig6_b", _binary_m_line(0.2), ADJUSTED_SMALLER, False),
    FigurePanel("fig6_c", _binary_m_line(0.4), ADJUSTED_SMALLER, False),
    FigurePanel(
        "fig7_b",
        lambda n: GridSpec(
            "w_to_t",
            (GridAxis("a", -_HALF_SQRT2, _HALF_SQRT2, n),),
            {k: ("a", 1.0) for k in ("a", "b", "c", "d", "g")},
            {"rho": 0.0},
        ),
        ADJUSTED_SMALLER,
        False,
    ),
    FigurePanel("fig8_a", _butterfly_line("binary_butterfly"), ADJUSTED_SMALLER, False),
    FigurePanel("fig8_b", _butterfly_plane("binary_butterfly"), ADJUSTED_SMALLER, True),
)


def thread_cap() -> int:
    """Worker cap from COLLIDER_LAB_THREADS (0 or unset = one per CPU)."""
    raw = os.environ.get("COLLIDER_LAB_THREADS", "0").strip()
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"COLLIDER_LAB_THREADS must be an integer, got {raw!r}") from None
    if cap < 0:
        raise DomainError(f"COLLIDER_LAB_THREADS must be >= 0, got {cap}")
    if cap == 0:
        return os.cpu_count() or 1
    return cap


def _build_panel(panel: FigurePanel, outdir: Path, points_1d: int, points_2d: int,
                 stats_points_2d: int):
    plot_points = points_2d if panel.two_dee else points_1d
    table = run_sweep(panel.build(plot_points))
    grey = (predicate_mask(table, panel.predicate) & table.feasible).astype(float)
    path = outdir / f"{panel.name}.csv"
    write_table(table, path, extra={"grey": grey})

    stats_table = table if not panel.two_dee else run_sweep(panel.build(stats_points_2d))
    fraction = region_fraction(stats_table, panel.predicate)
    return path, (panel.name, panel.predicate.label(), fraction)


def write_figure_datasets(
    outdir, points_1d: int = 1000, points_2d: int = 201, stats_points_2d: int = 1000
) -> list[Path]:
    """Write every panel CSV plus figstats.csv into ``outdir``.

    Returns the written paths.  Panel order (and therefore figstats row
    order) is fixed; worker count never affects output bytes.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    workers = min(thread_cap(), len(FIGURE_PANELS))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda p: _build_panel(p, outdir, points_1d, points_2d, stats_points_2d),
                    FIGURE_PANELS,
                )
            )
    else:
        results = [
            _build_panel(p, outdir, points_1d, points_2d, stats_points_2d)
            for p in FIGURE_PANELS
        ]

    paths = [path for path, _ in results]
    stats_path = outdir / "figstats.csv"
    lines = ["figure,predicate,fraction,percent"]
    for name, predicate_label, fraction in (stats for _, stats in results):
        lines.append(
            f"{name},{predicate_label},{format_value(fraction)},{100.0 * fraction:.1f}%"
        )
    stats_path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    paths.append(stats_path)
    return paths
