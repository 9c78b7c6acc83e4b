"""Per-figure experiments, written as CSV files.

Each file starts with one ``#`` metadata line followed by a header row.
Floats are written with 9 significant digits. Monte Carlo figures draw from
a stream derived from (seed, figure name), so running a figure alone or as
part of ``all`` gives the same numbers.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
import zlib
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .geometry import area_ratio
from .outage import Scheme, analytic_outage, monte_carlo_outage
from .partition import partition_bandwidth
from .placement import argmax_first, evaluate_placement, placement_grid
from .sir import worst_case_sir

FIG7_PAIRS = ((3.5, 3.0), (4.0, 2.0), (3.0, 3.0), (2.5, 2.5))
FIG9_GAMMA_R = (2.0, 2.5)
FIG6_GAMMA = 3.0
THRESHOLDS_DB = np.arange(-20.0, 21.0, 1.0)


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".9g")
    return str(value)


def _pair_label(pair):
    return "_".join(format(g, "g") for g in pair)


def figure_seed(seed, name):
    return np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(name.encode()),))


def _metadata(name, config, **extra):
    items = {
        "figure": name,
        "seed": config.seed,
        "backend": config.sir_backend,
        "df_mode": config.df_mode,
        "version": __version__,
    }
    items.update(extra)
    return "# " + " ".join(f"{k}={_fmt(v)}" for k, v in items.items())


def render_csv(meta, header, rows):
    buf = io.StringIO()
    buf.write(meta + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _fig5(config):
    rows = []
    for r in placement_grid(config.grid_step):
        layout = config.layout(r)
        sirs = worst_case_sir(layout, config.propagation, config.backend, config.noise_floor)
        rows.append((r, *sirs.as_db()))
    return ["dr_ratio", "sir_bm_db", "sir_br_db", "sir_rm_db"], rows, {}


def _fig6(config):
    cfg = config.replace(gamma_b=FIG6_GAMMA, gamma_m=FIG6_GAMMA)
    rows = []
    for r in placement_grid(cfg.grid_step):
        s = evaluate_placement(r, cfg)
        rows.append((r, s.w1 * np.log2(1 + s.i_bm), s.w2 * np.log2(1 + s.i_rm)))
    extra = {"gamma_override": f"gamma_b=gamma_m={FIG6_GAMMA:g}"}
    return ["dr_ratio", "r1", "r2"], rows, extra


def _fig7(config):
    grid = placement_grid(config.grid_step)
    columns, optima = [], []
    for gm, gr in FIG7_PAIRS:
        cfg = config.replace(gamma_b=gm, gamma_m=gm, gamma_r=gr)
        lam = [evaluate_placement(r, cfg).lam for r in grid]
        columns.append(lam)
        optima.append(f"{_pair_label((gm, gr))}:{grid[argmax_first(lam)]:g}")
    header = ["dr_ratio"] + [f"lambda_{_pair_label(p)}" for p in FIG7_PAIRS]
    rows = [(r, *vals) for r, *vals in zip(grid, *columns)]
    return header, rows, {"dr_star": ",".join(optima)}


def _fig8(config):
    rows = []
    for r in placement_grid(config.grid_step):
        s = evaluate_placement(r, config)
        rows.append((r, s.w1, s.w2, s.w3))
    return ["dr_ratio", "w1", "w2", "w3"], rows, {}


def _fig9(config):
    layout = config.layout()
    rows = []
    for gr in FIG9_GAMMA_R:
        params = config.replace(gamma_r=gr).propagation
        sirs = worst_case_sir(layout, params, config.backend, config.noise_floor)
        part = partition_bandwidth(config.W, sirs, area_ratio(layout), config.omit_area_factor)
        rows.append((gr, layout.dr_ratio, part.w1, part.w2, part.w3))
    return ["gamma_r", "dr_ratio", "w1", "w2", "w3"], rows, {}


def _mc(config, seed, scheme, sector):
    return monte_carlo_outage(
        config.layout(), config.propagation, scheme, THRESHOLDS_DB, config.n_samples, seed,
        sector=sector, backend=config.backend, df_mode=config.df_mode,
        worker_count=config.worker_count,
    ).p_out


def _analytic(config, scheme, sector):
    return analytic_outage(
        config.layout(), config.propagation, scheme, THRESHOLDS_DB, sector=sector,
        backend=config.backend, df_mode=config.df_mode,
    ).p_out


def _outage_extra(config):
    return {"samples": config.n_samples, "dr_ratio": config.dr_ratio,
            "workers": config.worker_count, "norelay_baseline": "ms_bs_at_d=D"}


def _fig10_with(seed):
    def run(config):
        cols = [_mc(config, seed, Scheme.NO_RELAY, 0)]
        sectors = (0, 120, 60)
        cols += [_mc(config, seed, Scheme.AF, s) for s in sectors]
        header = ["threshold_db", "p_norelay"] + [f"p_af_sector{s}" for s in sectors]
        return header, list(zip(THRESHOLDS_DB, *cols)), _outage_extra(config)
    return run


def _df_figure(sector_of):
    def make(seed):
        def run(config):
            sector = sector_of(config)
            cols = [
                _mc(config, seed, Scheme.NO_RELAY, 0),
                _analytic(config, Scheme.NO_RELAY, 0),
                _mc(config, seed, Scheme.DF, sector),
                _analytic(config, Scheme.DF, sector),
            ]
            header = ["threshold_db", "p_norelay_mc", "p_norelay_analytic",
                      f"p_df_sector{sector}_mc", f"p_df_sector{sector}_analytic"]
            extra = _outage_extra(config) | {"sector": sector}
            return header, list(zip(THRESHOLDS_DB, *cols)), extra
        return run
    return make


_DETERMINISTIC = {"fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8, "fig9": _fig9}
_STOCHASTIC = {
    "fig10": _fig10_with,
    "fig11": _df_figure(lambda cfg: cfg.sector),
    "fig12": _df_figure(lambda cfg: 120),
}
EXPERIMENTS = tuple(_DETERMINISTIC) + tuple(_STOCHASTIC)


def build_figure(name, config):
    """Return the CSV text for one figure."""
    if name in _DETERMINISTIC:
        header, rows, extra = _DETERMINISTIC[name](config)
    elif name in _STOCHASTIC:
        header, rows, extra = _STOCHASTIC[name](figure_seed(config.seed, name))(config)
    else:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}, all")
    return render_csv(_metadata(name, config, **extra), header, rows)


def run_experiment(name, config, out_dir):
    """Write the CSV for ``name`` (or every figure for ``all``); return the paths."""
    names = EXPERIMENTS if name == "all" else (name,)
    for n in names:
        if n not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {n!r}; choose from {', '.join(EXPERIMENTS)}, all")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for n in names:
        path = out / f"{n}.csv"
        write_atomic(path, build_figure(n, config))
        paths.append(path)
    return paths


def csv_body(text):
    """CSV text without its metadata comment line."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
