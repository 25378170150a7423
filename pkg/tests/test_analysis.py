import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvdisturb.analysis import dominant_period, oscillation_report, phase_lag, windowed_stats
from lvdisturb.errors import InsufficientDataError
from lvdisturb.integrators import IntegrationSpec, Trajectory, integrate
from lvdisturb.model import Disturbance, NondimParams, State


def traj_of(t, r, c=None):
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    return Trajectory(t, r, np.asarray(r if c is None else c, dtype=float))


class TestDominantPeriod:
    def test_sine_12(self):
        t = np.arange(0, 120, 0.1)
        pk = dominant_period(np.sin(2 * math.pi * t / 12), 0.1)
        assert pk.period == pytest.approx(12, rel=0.02)
        assert pk.frequency * pk.period == pytest.approx(2 * math.pi, rel=1e-9)
        assert pk.amplitude == pytest.approx(1.0, rel=1e-3)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(5, 50), st.floats(0, 2 * math.pi), st.floats(-5, 5))
    def test_any_period(self, period, phase, offset):
        dt = period / 40
        t = np.arange(0, 10 * period, dt)
        pk = dominant_period(offset + np.sin(2 * math.pi * t / period + phase), dt)
        assert pk.period == pytest.approx(period, rel=0.02)

    def test_constant(self):
        pk = dominant_period(np.full(200, 3.0), 0.1)
        assert pk.period is None and not pk.oscillating

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            dominant_period(np.sin(np.arange(63)), 0.1)

    def test_default_simulation(self, sim_params, sim_dist):
        traj = integrate(sim_params, sim_dist, IntegrationSpec(), State(2, 1))
        assert oscillation_report(traj).dominant_period == pytest.approx(12, rel=0.05)


class TestPhaseLag:
    def series(self):
        t = np.arange(0, 240, 0.1)
        return t, np.sin(2 * math.pi * t / 12) + 0.3 * np.sin(2 * math.pi * t / 5)

    def test_shift_three_samples(self):
        t, r = self.series()
        c = np.roll(r, 3)
        assert phase_lag(r, c, 0.1) == pytest.approx(0.3, abs=0.1)

    def test_identical(self):
        _, r = self.series()
        assert phase_lag(r, r, 0.1) == 0

    def test_antisymmetric(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            t, r = self.series()
            c = np.sin(2 * math.pi * t / 12 - rng.uniform(-2, 2)) + 0.05 * rng.normal(size=len(t))
            assert phase_lag(c, r, 0.1) == -phase_lag(r, c, 0.1)

    def test_forcing_phase_direction(self, sim_params):
        lags = {}
        for phi in (math.pi / 4, -math.pi / 4):
            d = Disturbance(1.0, 1.0, 2 * math.pi / 12, phi)
            traj = integrate(sim_params, d, IntegrationSpec(), State(2, 1))
            half = traj.times >= 60
            lags[phi] = phase_lag(traj.r[half], traj.c[half], 0.05)
        # leading predator forcing pulls the predator peak earlier
        assert lags[math.pi / 4] < lags[-math.pi / 4]


class TestWindowedStats:
    def test_constant(self):
        t = np.linspace(0, 10, 101)
        s = windowed_stats(traj_of(t, np.full(101, 2.5)), (0, 10))
        assert (s.mean_r, s.var_r, s.n) == (2.5, 0.0, 101)

    def test_alternating(self):
        t = np.arange(100.0)
        r = np.where(np.arange(100) % 2 == 0, 1.5, -1.5)
        s = windowed_stats(traj_of(t, r), (0, 99))
        assert s.mean_r == 0 and s.var_r == 2.25

    def test_sine_full_period(self):
        period = 12.0
        dt = period / 1200
        t = np.arange(0, 1200) * dt
        s = windowed_stats(traj_of(t, np.sin(2 * math.pi * t / period)), (0, t[-1]))
        assert abs(s.mean_r) <= 1e-3

    def test_reorder_invariant(self):
        rng = np.random.default_rng(4)
        t = np.arange(50.0)
        r, c = rng.random(50), rng.random(50)
        s = windowed_stats(traj_of(t, r, c), (10, 40))
        perm = rng.permutation(np.arange(10, 41))
        r2, c2 = r.copy(), c.copy()
        r2[10:41], c2[10:41] = r[perm], c[perm]
        s2 = windowed_stats(traj_of(t, r2, c2), (10, 40))
        assert s.mean_r == pytest.approx(s2.mean_r, rel=1e-14)
        assert s.var_c == pytest.approx(s2.var_c, rel=1e-12)

    def test_empty_window(self):
        t = np.arange(0, 10.0)
        with pytest.raises(InsufficientDataError):
            windowed_stats(traj_of(t, t), (3.2, 3.8))
        with pytest.raises(InsufficientDataError):
            windowed_stats(traj_of(t, t), (5, 20))


def test_harvest_monotonicity(sim_dist):
    means = []
    for effort in (0.0, 0.125, 0.25, 0.5):
        p = NondimParams(0.2, 1.0, 0.066, 1.0, effort, 0.1, 0.05, 0.05)
        traj = integrate(p, sim_dist, IntegrationSpec(), State(2, 1))
        means.append(windowed_stats(traj, (60, 120)).mean_r)
    assert all(b <= a for a, b in zip(means, means[1:]))


def test_report_invariants(sim_params, sim_dist):
    rep = oscillation_report(integrate(sim_params, sim_dist, IntegrationSpec(), State(2, 1)))
    assert rep.dominant_frequency * rep.dominant_period == pytest.approx(2 * math.pi, rel=1e-9)
    assert rep.var_r >= 0 and rep.var_c >= 0
    assert rep.sharpness_r > 1 and rep.amplitude_c > 0
