import math

import numpy as np
import pytest
import scipy.special

from cyclegas.core import (
    DomainError,
    ThermoState,
    UnitsPolicy,
    bose_integral,
    bose_quadrature,
    polylog,
    riemann_zeta,
)


def rel(a, b):
    return abs(a - b) / abs(b)


class TestRiemannZeta:
    def test_closed_forms(self):
        assert rel(riemann_zeta(2.0), math.pi**2 / 6.0) <= 1e-12
        assert rel(riemann_zeta(4.0), math.pi**4 / 90.0) <= 1e-12

    def test_zeta3_against_partial_sum_oracle(self):
        # independent oracle: 10^6-term partial sum closed with the midpoint
        # integral of x^-3 beyond the truncation
        s = np.arange(1.0, 1e6 + 1.0)
        oracle = float(np.sum(s**-3.0)) + 0.5 * (1e6 + 0.5) ** -2.0
        assert rel(riemann_zeta(3.0), oracle) <= 1e-12
        assert rel(riemann_zeta(3.0), 1.2020569031595943) <= 1e-12

    @pytest.mark.parametrize("r", [1.1, 1.5, 2.0, 2.5, 3.0, 4.5, 6.0, 9.0, 15.0])
    def test_against_scipy_reference(self, r):
        assert rel(riemann_zeta(r), float(scipy.special.zeta(r))) <= 1e-12

    @pytest.mark.parametrize("r", [1.0, 0.5, -2.0, 1.0 + 1e-10])
    def test_domain(self, r):
        with pytest.raises(DomainError):
            riemann_zeta(r)


class TestPolylog:
    def test_empty_sum(self):
        assert polylog(1.5, 0.0) == 0.0

    def test_z_one_is_zeta(self):
        assert rel(polylog(4.0, 1.0), riemann_zeta(4.0)) <= 1e-14
        for r in (2.0, 3.0, 4.0, 5.0):
            assert rel(polylog(r, 1.0), riemann_zeta(r)) <= 1e-12

    def test_direct_summation_oracle(self):
        # 200 explicit terms; the remainder is below 0.5^200
        oracle = sum(0.5**s / s**1.5 for s in range(1, 201))
        value = polylog(1.5, 0.5)
        assert rel(value, oracle) <= 1e-10
        assert rel(value, 0.6248370208199139) <= 1e-12

    def test_near_one_fugacity(self):
        oracle = sum(0.99**s / s**2.5 for s in range(1, 20000))
        assert rel(polylog(2.5, 0.99), oracle) <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            polylog(1.5, 1.2)
        with pytest.raises(DomainError):
            polylog(1.5, -0.1)
        with pytest.raises(DomainError):
            polylog(1.0, 1.0)
        with pytest.raises(DomainError):
            polylog(0.5, 1.0)


class TestBoseIntegral:
    def test_values(self):
        assert rel(bose_integral(3), math.pi**4 / 15.0) <= 1e-12
        assert rel(bose_integral(1), math.pi**2 / 6.0) <= 1e-12
        assert rel(bose_integral(2), 2.0 * riemann_zeta(3.0)) <= 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_quadrature_matches_closed_form(self, n):
        # the executable zeta identity: both routes agree to 1e-10
        closed = math.factorial(n) * riemann_zeta(n + 1.0)
        assert rel(bose_quadrature(n), closed) <= 1e-10
        assert bose_integral(n) == closed

    def test_domain(self):
        with pytest.raises(DomainError):
            bose_integral(0)
        with pytest.raises(DomainError):
            bose_integral(2.5)


class TestThermoState:
    def test_beta_is_exact_reciprocal(self):
        state = ThermoState(temperature=3.0)
        assert state.beta == 1.0 / 3.0

    def test_defaults(self):
        state = ThermoState(temperature=2.0)
        assert state.volume == 1.0 and state.fugacity == 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"temperature": 0.0},
            {"temperature": -1.0},
            {"temperature": 1.0, "volume": 0.0},
            {"temperature": 1.0, "volume": -2.0},
            {"temperature": 1.0, "fugacity": -0.1},
            {"temperature": 1.0, "fugacity": 1.1},
        ],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(DomainError):
            ThermoState(**kwargs)


class TestUnitsPolicy:
    def test_natural_mode_is_identity(self):
        units = UnitsPolicy(mode="natural")
        assert units.temperature_from_si(3.5) == 3.5
        assert units.volume_from_si(2.0) == 2.0
        assert units.frequency_from_si(7.0) == 7.0
        assert units.length_unit_m == 1.0

    def test_si_round_trip(self):
        units = UnitsPolicy(mode="si")
        rng = np.random.default_rng(1)
        for _ in range(20):
            t_kelvin = float(rng.uniform(1.0, 1e4))
            v_m3 = float(rng.uniform(1e-9, 1e3))
            z = float(rng.uniform(0.0, 1.0))
            state = units.state_from_si(t_kelvin, v_m3, z)
            t_back, v_back, z_back = units.state_to_si(state)
            assert rel(t_back, t_kelvin) <= 1e-12
            assert rel(v_back, v_m3) <= 1e-12
            assert z_back == z

    def test_frequency_round_trip(self):
        units = UnitsPolicy(mode="si")
        nu = 5.4e14
        assert rel(units.frequency_to_si(units.frequency_from_si(nu)), nu) <= 1e-12

    def test_dimensionless_ratio_is_mode_independent(self):
        # h*nu / k*T must come out identical through either conversion path
        t_kelvin, nu_hz = 300.0, 3.2e13
        units = UnitsPolicy(mode="si")
        x_si = 6.62607015e-34 * nu_hz / (1.380649e-23 * t_kelvin)
        t = units.temperature_from_si(t_kelvin)
        nu = units.frequency_from_si(nu_hz)
        assert rel(2.0 * math.pi * nu / t, x_si) <= 1e-12

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            UnitsPolicy(mode="imperial")
