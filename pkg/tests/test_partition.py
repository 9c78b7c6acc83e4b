import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relaycell.config import ScenarioConfig
from relaycell.errors import DomainError
from relaycell.geometry import area_ratio
from relaycell.partition import link_rates, partition_bandwidth
from relaycell.placement import evaluate_placement, placement_grid
from relaycell.sir import WorstCaseSir, worst_case_sir

W = 25.6e6
sir_vals = st.floats(1e-3, 1e4)


def _sirs(bm, br, rm):
    return WorstCaseSir(i_bm=bm, i_br=br, i_rm=rm)


def _eff(v):
    return np.log2(1.0 + v)


class TestExamples:
    def test_symmetric_case(self):
        # log2(1 + 3) = 2 on every link, a = 1: each band carries a third
        part = partition_bandwidth(W, _sirs(3.0, 3.0, 3.0), 1.0)
        np.testing.assert_allclose([part.w1, part.w2, part.w3], [W / 3] * 3, rtol=1e-15)
        assert part.delta == pytest.approx(3.0)

    def test_no_inner_region(self):
        part = partition_bandwidth(W, _sirs(10.0, 7.0, 3.0), 0.0)
        assert part.w1 == 0.0
        assert part.w2 + part.w3 == pytest.approx(W, rel=1e-15)

    def test_linear_solve_oracle(self):
        cfg = ScenarioConfig()
        layout = cfg.layout()
        sirs = worst_case_sir(layout, cfg.propagation)
        a = area_ratio(layout)
        l_bm, l_br, l_rm = _eff(sirs.i_bm), _eff(sirs.i_br), _eff(sirs.i_rm)
        A = np.array([
            [1.0, 1.0, 1.0],
            [0.0, l_rm, -l_br],
            [l_bm, -a * l_rm, 0.0],
        ])
        expected = np.linalg.solve(A, [W, 0.0, 0.0])
        part = partition_bandwidth(W, sirs, a)
        np.testing.assert_allclose([part.w1, part.w2, part.w3], expected, rtol=1e-12)

    def test_variant_without_area_factor(self):
        sirs = _sirs(20.0, 3.0, 8.0)
        fixed = partition_bandwidth(W, sirs, 0.25)
        unfixed = partition_bandwidth(W, sirs, 0.25, omit_area_factor=True)
        assert unfixed.w1 == pytest.approx(fixed.w1 / 0.25)
        assert unfixed.w2 == fixed.w2 and unfixed.w3 == fixed.w3
        assert unfixed.total != pytest.approx(W)

    def test_link_rates(self):
        sirs = _sirs(20.0, 3.0, 8.0)
        part = partition_bandwidth(W, sirs, 0.3)
        r1, r2, r3 = link_rates(part, sirs)
        assert r2 == r3 == part.r_chain
        assert r1 == pytest.approx(part.r1)

    @pytest.mark.parametrize("W_bad, sirs, a", [
        (0.0, (1.0, 1.0, 1.0), 0.5),
        (W, (0.0, 1.0, 1.0), 0.5),
        (W, (1.0, -1.0, 1.0), 0.5),
        (W, (1.0, 1.0, 1.0), -0.1),
    ])
    def test_rejects(self, W_bad, sirs, a):
        with pytest.raises(DomainError):
            partition_bandwidth(W_bad, _sirs(*sirs), a)


class TestProperties:
    @given(st.floats(1e3, 1e9), sir_vals, sir_vals, sir_vals, st.floats(1e-4, 1e3))
    def test_conservation_and_constraints(self, w, bm, br, rm, a):
        part = partition_bandwidth(w, _sirs(bm, br, rm), a)
        assert part.total == pytest.approx(w, rel=1e-9)
        assert part.w2 * _eff(rm) == pytest.approx(part.w3 * _eff(br), rel=1e-12)
        assert part.w1 * _eff(bm) == pytest.approx(a * part.w2 * _eff(rm), rel=1e-12)
        assert min(part.w1, part.w2, part.w3) > 0

    @given(sir_vals, sir_vals, sir_vals, st.floats(1e-3, 1e2), st.floats(0.01, 100.0))
    def test_linear_in_bandwidth(self, bm, br, rm, a, k):
        base = partition_bandwidth(W, _sirs(bm, br, rm), a)
        scaled = partition_bandwidth(k * W, _sirs(bm, br, rm), a)
        np.testing.assert_allclose([scaled.w1, scaled.w2, scaled.w3],
                                   [k * base.w1, k * base.w2, k * base.w3], rtol=1e-12)

    @given(sir_vals, sir_vals, sir_vals, st.floats(1e-3, 1e2))
    def test_rate_ratio_is_area_ratio(self, bm, br, rm, a):
        part = partition_bandwidth(W, _sirs(bm, br, rm), a)
        assert part.r1 / part.r_chain == pytest.approx(a, rel=1e-12)

    @settings(max_examples=50)
    @given(sir_vals, sir_vals, sir_vals, st.floats(1e-3, 1e2), st.floats(1e-3, 1e2))
    def test_direct_band_grows_with_area(self, bm, br, rm, a, b):
        lo, hi = sorted((a, b))
        if hi > lo * (1 + 1e-9):
            assert (partition_bandwidth(W, _sirs(bm, br, rm), hi).w1
                    > partition_bandwidth(W, _sirs(bm, br, rm), lo).w1)


def test_sum_rate_peaks_inside_sweep():
    cfg = ScenarioConfig().replace(gamma_b=3.0, gamma_m=3.0)
    grid = placement_grid(0.01)
    total = []
    for r in grid:
        s = evaluate_placement(r, cfg)
        total.append(s.w1 * _eff(s.i_bm) + s.w2 * _eff(s.i_rm))
    best = int(np.argmax(total))
    assert 0 < best < len(grid) - 1
    assert grid[best] == pytest.approx(0.72)
