import math

import numpy as np
import pytest

from jjphotond import params
from jjphotond.errors import ConfigError
from jjphotond.params import (
    SimParams,
    TimeGrid,
    Tolerances,
    baseline_config,
    seconds_rate_to_internal,
    to_external,
    validate,
)


def minimal_config(**extra):
    raw = {
        "omega_eg_ghz": 4.8,
        "omega_rabi_mhz": 200.0,
        "kappa_per_s": 1e6,
        "t1_ns": 10.0,
        "gamma_g_per_s": 1.46e5,
        "gamma_e_per_s": 7.3e7,
        "n_init": 1,
    }
    raw.update(extra)
    return raw


class TestConversions:
    def test_t1_alias(self):
        p = validate(minimal_config(t1_ns=10.0))
        assert p.gamma == pytest.approx(0.1, abs=0)

    def test_rabi_mhz(self):
        p = validate(minimal_config())
        assert p.omega == pytest.approx(1.2566370614359172, rel=1e-12)

    def test_kappa_quoted_value(self):
        p = validate(minimal_config(kappa_per_s=1e6))
        assert p.kappa == pytest.approx(1e-3, abs=0)

    def test_seconds_rate_examples(self):
        assert seconds_rate_to_internal(1e8) == pytest.approx(0.1, abs=0)
        assert seconds_rate_to_internal(0.0) == 0.0
        assert seconds_rate_to_internal(7.3e7) == pytest.approx(0.073, rel=1e-15)

    def test_power_of_ten_exactness(self):
        # conversion by a power of ten stays within one ulp
        for exp in range(0, 12):
            r = 10.0 ** exp
            got = seconds_rate_to_internal(r)
            want = 10.0 ** (exp - 9)
            assert abs(got - want) <= np.spacing(want)

    def test_negative_rate_rejected(self):
        with pytest.raises(ConfigError):
            seconds_rate_to_internal(-1.0)


class TestValidate:
    def test_baseline_has_anchored_rates(self):
        p = validate(baseline_config())
        assert p.rate_mode == "anchored"
        assert p.gamma_e == pytest.approx(0.073, rel=1e-15)
        assert p.gamma_g == pytest.approx(0.073 * math.sqrt(math.pi) / 864, rel=1e-12)
        assert p.n_init == 1 and p.n_max == 1
        assert p.frame == "rotating-secular"
        assert p.grid == TimeGrid(200.0, 0.05)
        assert p.tol == Tolerances(1e-9, 1e-12)

    def test_missing_tunneling_spec_names_keys(self):
        raw = minimal_config()
        del raw["gamma_g_per_s"], raw["gamma_e_per_s"]
        with pytest.raises(ConfigError, match="gamma_g_per_s"):
            validate(raw)

    def test_conflicting_tunneling_specs_named(self):
        with pytest.raises(ConfigError, match="bias_x"):
            validate(minimal_config(bias_x=2.0, rate_mode="anchored"))

    def test_partial_explicit_pair(self):
        raw = minimal_config()
        del raw["gamma_e_per_s"]
        with pytest.raises(ConfigError, match="gamma_e_per_s"):
            validate(raw)

    def test_partial_physical_triple(self):
        raw = minimal_config()
        del raw["gamma_g_per_s"], raw["gamma_e_per_s"]
        raw["i_over_i0"] = 0.9
        with pytest.raises(ConfigError, match="c_pf"):
            validate(raw)

    def test_negative_rate_range_error(self):
        with pytest.raises(ConfigError):
            validate(minimal_config(kappa_per_s=-1.0))

    def test_gamma_t1_consistency(self):
        p = validate(minimal_config(gamma_per_s=1e8, t1_ns=10.0))
        assert p.gamma == pytest.approx(0.1)
        with pytest.raises(ConfigError, match="inconsistent"):
            validate(minimal_config(gamma_per_s=1e8, t1_ns=11.0))

    def test_delta_variants(self):
        p = validate(minimal_config(delta_ghz=0.1))
        assert p.delta == pytest.approx(2 * math.pi * 0.1)
        p = validate(minimal_config(delta_over_omega=0.5))
        assert p.delta == pytest.approx(0.5 * p.omega)
        with pytest.raises(ConfigError, match="delta"):
            validate(minimal_config(delta_ghz=0.1, delta_over_omega=0.5))

    def test_n_init_exceeds_n_max(self):
        with pytest.raises(ConfigError, match="n_max"):
            validate(minimal_config(n_init=2, n_max=1))

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="voltage"):
            validate(minimal_config(voltage=1.0))

    def test_bias_x_requires_rate_mode(self):
        raw = minimal_config()
        del raw["gamma_g_per_s"], raw["gamma_e_per_s"]
        raw["bias_x"] = 2.0
        with pytest.raises(ConfigError, match="rate_mode"):
            validate(raw)

    def test_anchored_from_bias(self):
        raw = minimal_config()
        del raw["gamma_g_per_s"], raw["gamma_e_per_s"]
        raw.update(bias_x=2.0, rate_mode="anchored")
        p = validate(raw)
        assert p.gamma_e == pytest.approx(0.073, rel=1e-15)

    def test_physical_bias_route(self):
        raw = minimal_config()
        del raw["gamma_g_per_s"], raw["gamma_e_per_s"]
        raw.update(i_over_i0=0.9, i0_ua=1.0, c_pf=1.0)
        p = validate(raw)
        assert p.rate_mode == "raw"
        assert p.gamma_e > p.gamma_g > 0

    def test_grid_divisibility(self):
        with pytest.raises(ConfigError, match="stride"):
            validate(minimal_config(t_end_ns=1.0, stride_ns=0.3))


class TestIdempotence:
    def test_round_trip_preserves_coefficients(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            raw = minimal_config(
                omega_eg_ghz=float(rng.uniform(1, 10)),
                omega_rabi_mhz=float(rng.uniform(50, 500)),
                kappa_per_s=float(rng.uniform(0, 1e7)),
                t1_ns=float(rng.uniform(5, 500)),
                gamma_g_per_s=float(rng.uniform(0, 1e6)),
                gamma_e_per_s=float(rng.uniform(0, 1e9)),
                delta_ghz=float(rng.uniform(-1, 1)),
            )
            p1 = validate(raw)
            p2 = validate(to_external(p1))
            for name in ("delta", "omega", "kappa", "gamma", "gamma_g",
                         "gamma_e", "omega_eg", "n_init", "n_max"):
                assert getattr(p1, name) == pytest.approx(
                    getattr(p2, name), rel=1e-12, abs=1e-300), name
            # second round trip stays within one ulp (unit conversions
            # through powers of ten accumulate no more than that)
            p3 = validate(to_external(p2))
            for name in ("delta", "omega", "kappa", "gamma", "gamma_g",
                         "gamma_e", "omega_eg"):
                a, b = getattr(p2, name), getattr(p3, name)
                assert abs(a - b) <= np.spacing(max(abs(a), abs(b))), name


class TestSimParams:
    def test_immutable(self):
        p = validate(baseline_config())
        with pytest.raises(AttributeError):
            p.omega = 1.0

    def test_updated_returns_copy(self):
        p = validate(baseline_config())
        q = p.updated(gamma=0.002)
        assert q.gamma == 0.002 and p.gamma == 0.1

    def test_invalid_frame(self):
        with pytest.raises(ConfigError, match="frame"):
            validate(minimal_config(frame="interaction"))

    def test_grid_times(self):
        g = TimeGrid(1.0, 0.25)
        assert g.n_points == 5
        np.testing.assert_allclose(g.times(), [0, 0.25, 0.5, 0.75, 1.0])
