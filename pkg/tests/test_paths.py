import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bbrisk import GridPath, SeedSpec, bridge_min_sample, drifted, reflect, running_inf, sample_bm
from bbrisk.errors import InvalidGridError, InvalidTaxError
from bbrisk.paths import refined_running_inf


def grid(values, horizon=1.0):
    return GridPath(n_steps=len(values) - 1, horizon=horizon, values=np.asarray(values, float))


class TestSampleBm:
    def test_starts_at_zero(self):
        for seed in (0, 1, 12345):
            assert sample_bm(32, 1.0, SeedSpec(seed)).values[0] == 0.0

    def test_deterministic(self):
        a = sample_bm(256, 2.0, SeedSpec(99, 5))
        b = sample_bm(256, 2.0, SeedSpec(99, 5))
        assert np.array_equal(a.values, b.values)

    def test_streams_differ(self):
        a = sample_bm(256, 1.0, SeedSpec(99, 0))
        b = sample_bm(256, 1.0, SeedSpec(99, 1))
        assert not np.array_equal(a.values, b.values)

    def test_endpoint_variance(self):
        # variance of the Gaussian sample variance: Var(s^2) ~ 2/n for unit variance
        n = 100_000
        rows = np.array([sample_bm(1, 1.0, SeedSpec(5, i)).values[1] for i in range(n)])
        assert rows.var() == pytest.approx(1.0, abs=3 * math.sqrt(2 / n))

    def test_invalid_grid(self):
        with pytest.raises(InvalidGridError):
            sample_bm(0, 1.0, SeedSpec(0))
        with pytest.raises(InvalidGridError):
            sample_bm(8, 0.0, SeedSpec(0))


class TestDrifted:
    def test_zero_drift_identity(self):
        p = sample_bm(16, 1.0, SeedSpec(3))
        assert np.array_equal(drifted(p, 0.0).values, p.values)

    def test_hand_case(self):
        assert np.allclose(drifted(grid([0, 1, 2]), 2.0).values, [0, 0, 0])

    def test_negative_drift(self):
        assert np.allclose(drifted(grid([0, 0, 0]), -1.0).values, [0, 0.5, 1])


class TestRunningInf:
    def test_hand_case(self):
        assert np.allclose(running_inf(grid([0, -1, 0.5])).values, [0, -1, -1])

    def test_monotone_input(self):
        assert np.allclose(running_inf(grid([0, 1, 2])).values, [0, 0, 0])

    def test_constant_input(self):
        assert np.allclose(running_inf(grid([0, 0, 0])).values, [0, 0, 0])

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=30))
    def test_nonincreasing_and_below_input(self, incr):
        p = grid([0.0] + list(np.cumsum(incr)))
        out = running_inf(p).values
        assert (np.diff(out) <= 0).all()
        assert (out <= p.values).all()
        assert out[0] == p.values[0]


class TestReflect:
    def test_gamma_zero_identity(self):
        p = grid([0, -1, 0.5])
        assert np.array_equal(reflect(p, 0.0).values, p.values)

    def test_workload_hand_case(self):
        assert np.allclose(reflect(grid([0, -1, 0.5]), 1.0).values, [0, 0, 1.5])

    def test_half_tax_hand_case(self):
        assert np.allclose(reflect(grid([0, -1, 0.5]), 0.5).values, [0, -0.5, 1.0])

    def test_invalid_tax(self):
        with pytest.raises(InvalidTaxError):
            reflect(grid([0, 0]), 2.0)
        with pytest.raises(InvalidTaxError):
            reflect(grid([0, 0]), -0.5)

    @given(st.lists(st.floats(-5, 5), min_size=1, max_size=30))
    def test_workload_nonnegative(self, incr):
        p = grid([0.0] + list(np.cumsum(incr)))
        assert (reflect(p, 1.0).values >= -1e-12).all()


class TestBridgeMin:
    def test_unif_one_gives_endpoint_min(self):
        assert bridge_min_sample(0.4, -0.3, 0.1, 1.0) == pytest.approx(-0.3, abs=1e-12)
        assert bridge_min_sample(-2.0, 1.0, 0.5, 1.0) == pytest.approx(-2.0, abs=1e-12)

    def test_small_dt_limit(self):
        m = bridge_min_sample(0.0, 0.0, 1e-12, 0.5)
        assert m == pytest.approx(-0.5 * math.sqrt(2e-12 * math.log(2)), rel=1e-9)

    def test_invalid_dt(self):
        with pytest.raises(InvalidGridError):
            bridge_min_sample(0.0, 0.0, 0.0, 0.5)

    @given(x=st.floats(-5, 5), y=st.floats(-5, 5),
           dt=st.floats(1e-6, 10), u=st.floats(1e-9, 1.0))
    def test_below_endpoint_min(self, x, y, dt, u):
        assert bridge_min_sample(x, y, dt, u) <= min(x, y) + 1e-12

    def test_empirical_cdf_matches_closed_form(self):
        # for endpoints x=y=0 over dt the bridge minimum has P(m < b) = exp(-2 b^2 / dt)
        n = 100_000
        rng = np.random.default_rng(17)
        u = 1.0 - rng.random(n)
        m = bridge_min_sample(np.zeros(n), np.zeros(n), 1.0, u)
        target = math.exp(-0.5)  # b = -0.5, dt = 1
        frac = (m < -0.5).mean()
        se = math.sqrt(target * (1 - target) / n)
        assert abs(frac - target) <= 3 * se


def test_refined_inf_below_grid_inf():
    p = drifted(sample_bm(128, 1.0, SeedSpec(21)), 1.0)
    refined = refined_running_inf(p, np.random.default_rng(0)).values
    plain = running_inf(p).values
    assert (refined <= plain + 1e-12).all()
    assert (np.diff(refined) <= 0).all()


def test_pipeline_deterministic():
    def run():
        p = sample_bm(512, 1.0, SeedSpec(77, 13))
        return reflect(drifted(p, 1.3), 0.8).values
    assert np.array_equal(run(), run())


def test_prefix_property_of_streams():
    # drawing a longer block from the same stream extends the shorter block:
    # the lam-coupling of the constant estimator relies on this
    g1 = SeedSpec(5, 2).generator(0).standard_normal(64)
    g2 = SeedSpec(5, 2).generator(0).standard_normal(256)
    assert np.array_equal(g1, g2[:64])
