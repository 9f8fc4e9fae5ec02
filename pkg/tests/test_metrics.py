import math

import numpy as np
import pytest

from jjphotond import metrics
from jjphotond.errors import BandwidthRangeError
from jjphotond.liouville import assemble, build_space, pure_state
from jjphotond.params import SimParams, TimeGrid, Tolerances
from jjphotond.propagation import evolve

OMEGA = 2 * np.pi * 0.2


def make_params(**kw):
    base = dict(
        delta=0.0, omega=OMEGA, kappa=1e-3, gamma=0.1,
        gamma_g=1.46e-4, gamma_e=0.073,
        omega_eg=2 * np.pi * 4.8, n_init=1, n_max=1,
        grid=TimeGrid(200.0, 0.05), tol=Tolerances(),
    )
    base.update(kw)
    return SimParams(**base)


class TestSwitchingProbability:
    def test_trace_preserving_trajectory_gives_zero(self):
        p = make_params(gamma_g=0.0, gamma_e=0.0)
        gen = assemble(p)
        traj = evolve(gen, pure_state(gen.space, 0, 1), TimeGrid(10.0, 0.5), p.tol)
        prob = metrics.switching_probability(traj)
        assert np.max(np.abs(prob)) < 1e-9
        # tiny negative round-off is clamped to exactly zero
        assert np.all(prob >= 0.0)

    def test_dark_count_value(self):
        # ground-state tunneling alone: P_0(45 ns) = 1 - exp(-Gamma_g t)
        p = make_params(grid=TimeGrid(45.0, 0.5))
        gen = assemble(p)
        traj = evolve(gen, pure_state(gen.space, 0, 0), p.grid, p.tol)
        prob = metrics.switching_probability(traj)
        assert prob[-1] == pytest.approx(1 - math.exp(-1.46e-4 * 45.0), abs=1e-10)
        assert prob[-1] == pytest.approx(6.55e-3, abs=1e-4)


class TestEfficiencyCurve:
    def test_zero_photons_zero_efficiency(self):
        p = make_params(n_init=0, n_max=0, grid=TimeGrid(20.0, 0.5))
        curve = metrics.efficiency_curve(p)
        assert np.max(np.abs(curve.eta)) < 1e-12

    def test_definition_consistency(self):
        p = make_params(grid=TimeGrid(30.0, 0.5))
        curve = metrics.efficiency_curve(p)
        np.testing.assert_array_equal(curve.eta, curve.p_n - curve.p_0)
        assert np.all(np.diff(curve.p_n) >= -1e-10)
        assert np.all(np.diff(curve.p_0) >= -1e-10)
        assert np.all(curve.eta <= 1.0)

    def test_probabilities_in_range(self):
        p = make_params(grid=TimeGrid(100.0, 1.0))
        curve = metrics.efficiency_curve(p)
        for series in (curve.p_n, curve.p_0):
            assert np.all(series >= 0.0)
            assert np.all(series <= 1.0 + 1e-9)


class TestOptimalDetection:
    def test_synthetic_sine_squared(self):
        times = np.arange(0.0, 3.0, 0.01)
        curve = metrics.EfficiencyCurve(
            times=times, p_n=np.zeros_like(times), p_0=np.zeros_like(times),
            eta=np.sin(times) ** 2, n_init=1, params=make_params())
        opt = metrics.optimal_detection(curve)
        assert opt.t_d == pytest.approx(math.pi / 2, abs=0.01)
        assert not opt.degenerate

    def test_quadratic_refinement_recovers_offgrid_peak(self):
        times = np.arange(0.0, 2.0, 0.1)
        peak = 0.9378
        eta = 1.0 - (times - peak) ** 2
        curve = metrics.EfficiencyCurve(
            times=times, p_n=eta, p_0=np.zeros_like(times), eta=eta,
            n_init=1, params=make_params())
        opt = metrics.optimal_detection(curve)
        assert opt.t_d == pytest.approx(peak, abs=1e-12)
        assert opt.eta_max == pytest.approx(1.0, abs=1e-12)

    def test_flat_zero_curve_flagged(self):
        times = np.arange(0.0, 2.0, 0.1)
        curve = metrics.EfficiencyCurve(
            times=times, p_n=np.zeros_like(times), p_0=np.zeros_like(times),
            eta=np.zeros_like(times), n_init=0, params=make_params())
        opt = metrics.optimal_detection(curve)
        assert (opt.t_d, opt.eta_max, opt.degenerate) == (0.0, 0.0, True)

    def test_tie_breaks_earliest(self):
        times = np.arange(0.0, 1.0, 0.1)
        eta = np.zeros_like(times)
        eta[3] = eta[7] = 0.5
        curve = metrics.EfficiencyCurve(
            times=times, p_n=eta, p_0=np.zeros_like(times), eta=eta,
            n_init=1, params=make_params())
        assert metrics.optimal_detection(curve).t_d == pytest.approx(times[3])


class TestPlateauEstimate:
    def test_equal_rates(self):
        p = make_params(gamma_e=0.1, gamma=0.1)
        assert metrics.plateau_estimate(p) == pytest.approx(0.5)

    def test_quoted_operating_point(self):
        p = make_params(gamma_e=0.073, gamma=0.1)
        assert metrics.plateau_estimate(p) == pytest.approx(0.422, abs=5e-4)

    def test_lossless_limit(self):
        p = make_params(gamma=0.0)
        assert metrics.plateau_estimate(p) == 1.0

    def test_undefined(self):
        p = make_params(gamma=0.0, gamma_e=0.0)
        with pytest.raises(ValueError):
            metrics.plateau_estimate(p)


class TestFindHalfCrossings:
    def test_synthetic_lorentzian(self):
        # eta(delta) = eta0 / (1 + (2 delta / w0)^2) halves at |delta| = w0/2
        w0 = 1.3 * OMEGA
        eta0 = 0.62

        def eta_at(delta):
            return eta0 / (1.0 + (2.0 * delta / w0) ** 2)

        eta_zero, d_minus, d_plus, _, _ = metrics.find_half_crossings(
            eta_at, OMEGA)
        assert eta_zero == pytest.approx(eta0)
        half_width = (d_plus - d_minus) / 2.0
        assert half_width == pytest.approx(w0 / 2.0, abs=1e-3 * OMEGA)
        assert d_plus == pytest.approx(-d_minus, abs=1e-3 * OMEGA)

    def test_no_crossing_raises_with_scan(self):
        def eta_at(delta):
            return 1.0
        with pytest.raises(BandwidthRangeError) as err:
            metrics.find_half_crossings(eta_at, OMEGA)
        assert err.value.deltas is not None
        assert len(err.value.etas) == 81

    def test_crossing_convergence_tolerance(self):
        def eta_at(delta):
            return 1.0 / (1.0 + (delta / OMEGA) ** 2)
        eta_zero, d_minus, d_plus, _, _ = metrics.find_half_crossings(
            eta_at, OMEGA)
        for d in (d_minus, d_plus):
            assert abs(eta_at(d) - eta_zero / 2) < 1e-4


class TestBandwidthSimulated:
    def test_baseline_structure(self):
        # short-horizon smoke run: crossings exist, result is symmetric-ish
        p = make_params()
        result = metrics.bandwidth(p, t_d=20.0, workers=2)
        assert result.eta_zero > 0.2
        assert result.delta_minus < 0 < result.delta_plus
        assert result.width_over_omega > 0
        assert abs(result.eta_zero / 2
                   - np.interp(result.delta_plus / OMEGA,
                               result.scan_delta_over_omega,
                               result.scan_eta)) < 5e-3
        assert len(result.scan_eta) == 81


class TestSweep:
    def test_order_preserved_and_values(self):
        p = make_params(grid=TimeGrid(30.0, 0.5))
        values = [10.0, 20.0]
        result = metrics.sweep(p, "t1_ns", values, workers=1)
        assert [pt.value for pt in result.points] == values
        assert result.n_failed == 0
        assert result.points[1].eta_max > result.points[0].eta_max

    def test_worker_count_invariance(self):
        p = make_params(grid=TimeGrid(25.0, 0.5))
        values = [1.0, 2.0, 3.0]
        serial = metrics.sweep(p, "n_init", values, workers=1)
        threaded = metrics.sweep(p, "n_init", values, workers=4)
        for a, b in zip(serial.points, threaded.points):
            assert a.t_d == b.t_d
            assert a.eta_max == b.eta_max

    def test_failed_point_recorded_sweep_continues(self):
        p = make_params(grid=TimeGrid(25.0, 0.5))
        result = metrics.sweep(p, "bias_x", [2.0, 99.0], workers=1)
        assert result.n_failed == 1
        good, bad = result.points
        assert good.error is None and math.isfinite(good.eta_max)
        assert bad.error is not None
        assert math.isnan(bad.eta_max) and math.isnan(bad.t_d)

    def test_unknown_parameter(self):
        p = make_params()
        with pytest.raises(ValueError, match="unknown sweep parameter"):
            metrics.sweep(p, "kappa", [1.0], workers=1)

    def test_bias_sweep_keeps_frequency(self):
        p = make_params()
        q = metrics.with_parameter(p, "bias_x", 1.7)
        assert q.omega_eg == p.omega_eg
        assert q.gamma_e == pytest.approx(0.4960521, rel=1e-5)
        assert q.gamma_e / q.gamma_g == pytest.approx(432 * 1.7 / math.sqrt(math.pi),
                                                      rel=1e-12)

    def test_n_init_sweep_moves_truncation(self):
        p = make_params()
        q = metrics.with_parameter(p, "n_init", 3)
        assert (q.n_init, q.n_max) == (3, 3)
