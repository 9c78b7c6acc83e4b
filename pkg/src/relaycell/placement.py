"""Relay-distance sweep maximising the supportable user density."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError
from .geometry import area_ratio, region_areas
from .partition import partition_bandwidth
from .sir import worst_case_sir

GRID_START = 0.10
GRID_STOP = 0.95


class PlacementSample(NamedTuple):
    dr_ratio: float
    lam: float
    w1: float
    w2: float
    w3: float
    i_bm: float
    i_br: float
    i_rm: float


@dataclass(frozen=True)
class PlacementResult:
    dr_star_ratio: float
    lambda_star: float
    curve: tuple[PlacementSample, ...]


def placement_grid(step):
    if not 0.0 < step <= 0.05:
        raise ConfigError(f"grid step must lie in (0, 0.05], got {step}", key="grid_step")
    n = int(np.floor((GRID_STOP - GRID_START) / step + 1e-9)) + 1
    grid = np.round(GRID_START + step * np.arange(n), 12)
    if grid.size == 0:
        raise ConfigError("placement grid is empty", key="grid_step")
    return grid


def evaluate_placement(dr_ratio, scenario):
    layout = scenario.layout(dr_ratio)
    sirs = worst_case_sir(layout, scenario.propagation, scenario.backend, scenario.noise_floor)
    part = partition_bandwidth(scenario.W, sirs, area_ratio(layout), scenario.omit_area_factor)
    a1, _ = region_areas(layout)
    lam = part.r1 / (scenario.r_bar * a1)
    return PlacementSample(float(dr_ratio), lam, part.w1, part.w2, part.w3,
                           sirs.i_bm, sirs.i_br, sirs.i_rm)


def user_density(dr_ratio, scenario):
    """Users per square metre at per-user rate ``scenario.r_bar``.

    Inner- and outer-region densities coincide because the partition already
    makes rates proportional to area.
    """
    return evaluate_placement(dr_ratio, scenario).lam


def argmax_first(values):
    values = np.asarray(values)
    return int(np.flatnonzero(values == values.max())[0])


def optimize_placement(scenario, grid_step=None, workers=1):
    grid = placement_grid(scenario.grid_step if grid_step is None else grid_step)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curve = tuple(pool.map(lambda r: evaluate_placement(r, scenario), grid))
    else:
        curve = tuple(evaluate_placement(r, scenario) for r in grid)
    best = argmax_first([s.lam for s in curve])
    return PlacementResult(curve[best].dr_ratio, curve[best].lam, curve)
