"""End-to-end acceptance checks, one test per criterion.

Each test also enforces its runtime budget. ``conftest.py`` prints a one-line
PASS/FAIL summary per criterion at the end of the session.
"""

import time

import numpy as np
import pytest

from relaycell.config import ScenarioConfig
from relaycell.experiments import build_figure, csv_body
from relaycell.geometry import build_layout
from relaycell.outage import (
    DfMode,
    Scheme,
    SumMethod,
    analytic_outage,
    lognormal_sum_moments,
    monte_carlo_outage,
    q_function,
)
from relaycell.partition import partition_bandwidth
from relaycell.placement import optimize_placement
from relaycell.propagation import PropagationParams, correlated_normals
from relaycell.sir import (
    Backend,
    WorstCaseSir,
    direct_link_distances,
    sir_closed_form_bm,
    sir_from_distances,
    worst_case_sir,
)

TABLE = ScenarioConfig()
SWEEP_DB = np.arange(-20.0, 21.0, 1.0)
INNER_SWEEP_DB = np.arange(-10.0, 11.0, 1.0)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


def test_criterion_1_partition_conservation():
    rng = np.random.default_rng(20240601)
    with Budget(1.0):
        for _ in range(1000):
            W = 10 ** rng.uniform(3, 9)
            bm, br, rm = 10 ** rng.uniform(-2, 4, size=3)
            a = 10 ** rng.uniform(-3, 2)
            part = partition_bandwidth(W, WorstCaseSir(bm, br, rm), a)
            l_bm, l_br, l_rm = np.log2(1 + bm), np.log2(1 + br), np.log2(1 + rm)
            assert abs(part.total - W) <= 1e-9 * W
            assert abs(part.w2 * l_rm - part.w3 * l_br) <= 1e-12 * part.w3 * l_br
            assert abs(part.w1 * l_bm - a * part.w2 * l_rm) <= 1e-12 * part.w1 * l_bm
            # the sum is also one of the three identities held to 1e-12
            assert abs(part.total - W) <= 1e-12 * W


def test_criterion_2_optimal_placement_landmarks():
    with Budget(10.0):
        star = {}
        for gm, gr in ((3.5, 3.0), (4.0, 2.0), (3.0, 3.0), (2.5, 2.5)):
            cfg = TABLE.replace(gamma_b=gm, gamma_m=gm, gamma_r=gr, grid_step=0.01)
            star[(gm, gr)] = optimize_placement(cfg).dr_star_ratio
    print(f"dr*/D by (gamma_b=gamma_m, gamma_r): {star}")
    failures = []
    for pair in ((3.5, 3.0), (4.0, 2.0)):
        if not 0.63 <= star[pair] <= 0.77:
            failures.append(f"{pair}: {star[pair]} not in [0.63, 0.77]")
    for pair in ((3.0, 3.0), (2.5, 2.5)):
        if not 0.48 <= star[pair] <= 0.62:
            failures.append(f"{pair}: {star[pair]} not in [0.48, 0.62]")
    if not star[(3.5, 3.0)] > star[(3.0, 3.0)]:
        failures.append(f"ordering: {star[(3.5, 3.0)]} is not > {star[(3.0, 3.0)]}")
    assert not failures, "; ".join(failures)


def test_criterion_3_sir_monotonicity():
    params = TABLE.propagation
    x_grid = np.round(np.arange(0.10, 0.9001, 0.01), 10)
    with Budget(1.0):
        closed_bm = [sir_closed_form_bm(x, params.gamma_b) for x in x_grid]
        geo_bm = [sir_from_distances(*direct_link_distances(1000.0, 1000.0 * x, Backend.GEOMETRIC),
                                     params.gamma_b) for x in x_grid]
        assert np.all(np.diff(closed_bm) < 0)
        assert np.all(np.diff(geo_bm) < 0)
        for backend in Backend:
            rm = [worst_case_sir(build_layout(1000.0, r), params, backend).i_rm for r in x_grid]
            assert np.all(np.diff(rm) > 0)
            for r in (0.2, 0.5, 0.8):
                a = worst_case_sir(build_layout(1000.0, r), params, backend)
                b = worst_case_sir(build_layout(10_000.0, r), params, backend)
                np.testing.assert_allclose([b.i_bm, b.i_br, b.i_rm], [a.i_bm, a.i_br, a.i_rm],
                                           rtol=1e-12)


def test_criterion_4_lognormal_sum_moments():
    with Budget(30.0):
        rng = np.random.default_rng(4)
        x = 8.0 * correlated_normals(rng, 1_000_000, 18, 0.5)
        s = 10 * np.log10((10 ** (x / 10)).sum(axis=1))
        ref_mean, ref_std = s.mean(), s.std()
        for method in SumMethod:
            mean, std = lognormal_sum_moments(np.zeros(18), np.full(18, 8.0), 0.5, method)
            assert abs(mean - ref_mean) <= 0.5, (method, mean, ref_mean)
            assert abs(std - ref_std) <= 1.0, (method, std, ref_std)
            assert lognormal_sum_moments([-4.0], [8.0], 0.5, method) == (-4.0, 8.0)


def test_criterion_5_analytic_vs_monte_carlo():
    layout, params = TABLE.layout(), TABLE.propagation
    with Budget(60.0):
        an = analytic_outage(layout, params, Scheme.NO_RELAY, INNER_SWEEP_DB, SumMethod.FW).p_out
        mc = monte_carlo_outage(layout, params, Scheme.NO_RELAY, INNER_SWEEP_DB, 1_000_000, seed=5).p_out
        assert np.max(np.abs(an - mc)) <= 0.03
        an = analytic_outage(layout, params, Scheme.DF, INNER_SWEEP_DB, SumMethod.FW,
                             df_mode=DfMode.PRODUCT, cell_average=False).p_out
        mc = monte_carlo_outage(layout, params, Scheme.DF, INNER_SWEEP_DB, 1_000_000, seed=5,
                                df_mode=DfMode.PRODUCT, cell_average=False).p_out
        assert np.max(np.abs(an - mc)) <= 0.03


def test_criterion_6_af_improvement_landmark():
    layout, params = TABLE.layout(), TABLE.propagation
    with Budget(60.0):
        nr = monte_carlo_outage(layout, params, Scheme.NO_RELAY, SWEEP_DB, 1_000_000, seed=6).p_out
        af = monte_carlo_outage(layout, params, Scheme.AF, SWEEP_DB, 1_000_000, seed=6).p_out
    at0 = int(np.flatnonzero(SWEEP_DB == 0.0)[0])
    print(f"outage at 0 dB: no relay {nr[at0]:.4f}, AF {af[at0]:.4f}")
    assert 0.75 <= nr[at0] <= 1.0
    assert np.all(af < nr)
    assert 0.15 <= af[at0] <= 0.45


@pytest.mark.parametrize("scheme", [Scheme.AF, Scheme.DF])
def test_criterion_7_sectoring_ordering(scheme):
    layout, params = TABLE.layout(), TABLE.propagation
    with Budget(60.0):
        p = {s: monte_carlo_outage(layout, params, scheme, SWEEP_DB, 200_000, seed=7, sector=s).p_out
             for s in (0, 120, 60)}
    assert np.all(p[60] <= p[120] + 0.02)
    assert np.all(p[120] <= p[0] + 0.02)


def test_criterion_8_q_function():
    assert abs(q_function(0.0) - 0.5) == 0.0
    assert abs(q_function(1.0) - 0.158655) <= 1e-6
    x = np.linspace(-6.0, 6.0, 1201)
    assert np.max(np.abs(q_function(x) + q_function(-x) - 1.0)) <= 1e-12


def test_criterion_9_determinism():
    from relaycell.experiments import EXPERIMENTS

    def bodies(cfg):
        return {n: csv_body(build_figure(n, cfg)) for n in EXPERIMENTS}

    first = bodies(TABLE)
    assert bodies(TABLE) == first
    assert bodies(TABLE.replace(worker_count=4)) == first
