"""Thermodynamic state, units policy, and shared special-function numerics.

Everything internal works in natural units with hbar = c = k_B = 1:
temperatures are energies, lengths are inverse energies, and a frequency nu
carries the photon energy 2*pi*nu.  The SI layer is a pure conversion shell
around this core; it fixes the joule as the internal energy unit, so the
internal length unit is hbar*c / (1 J) metres and the internal time unit is
hbar / (1 J) seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

# 2019 SI defining constants (h, c, k_B exact; hbar = h / 2 pi so that
# photon-energy ratios stay consistent to machine precision).
H_SI = 6.62607015e-34      # J s
HBAR_SI = H_SI / (2.0 * math.pi)
C_SI = 299792458.0         # m / s
KB_SI = 1.380649e-23       # J / K


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A series or adaptive quadrature could not reach its tolerance."""


class SizeError(ValueError):
    """An exact-enumeration request exceeds its hard size limit."""


@dataclass(frozen=True)
class ThermoState:
    """Grand-canonical ensemble parameters in natural units.

    temperature is an energy (k_B = 1), volume is a (length)^3 with
    length = 1/energy (hbar = c = 1), and fugacity is dimensionless.
    For the photon gas the fugacity must stay pinned at 1.
    """

    temperature: float
    volume: float = 1.0
    fugacity: float = 1.0

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise DomainError(f"temperature must be > 0, got {self.temperature}")
        if not self.volume > 0.0:
            raise DomainError(f"volume must be > 0, got {self.volume}")
        if not 0.0 <= self.fugacity <= 1.0:
            raise DomainError(f"fugacity must lie in [0, 1], got {self.fugacity}")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


@dataclass(frozen=True)
class UnitsPolicy:
    """Boundary conversion between natural internal units and SI.

    In "natural" mode every conversion is the identity.  In "si" mode the
    internal energy unit is the joule, hence the internal length unit is
    hbar*c metres and the internal time unit is hbar seconds (numerically,
    because the unit energy is 1 J).
    """

    mode: str = "natural"

    def __post_init__(self):
        if self.mode not in ("natural", "si"):
            raise ValueError(f"units mode must be 'natural' or 'si', got {self.mode!r}")

    @property
    def length_unit_m(self) -> float:
        return HBAR_SI * C_SI if self.mode == "si" else 1.0

    @property
    def time_unit_s(self) -> float:
        return HBAR_SI if self.mode == "si" else 1.0

    # --- inputs (SI -> internal) ---

    def temperature_from_si(self, t_kelvin: float) -> float:
        return KB_SI * t_kelvin if self.mode == "si" else t_kelvin

    def volume_from_si(self, v_m3: float) -> float:
        return v_m3 / self.length_unit_m**3

    def frequency_from_si(self, nu_hz: float) -> float:
        return nu_hz * self.time_unit_s

    def mass_from_si(self, m_kg: float) -> float:
        # mass enters formulas as a rest energy once c = 1
        return m_kg * C_SI**2 if self.mode == "si" else m_kg

    def state_from_si(self, t_kelvin, v_m3, fugacity=1.0) -> ThermoState:
        return ThermoState(
            temperature=self.temperature_from_si(t_kelvin),
            volume=self.volume_from_si(v_m3),
            fugacity=fugacity,
        )

    # --- outputs (internal -> SI) ---

    def temperature_to_si(self, t: float) -> float:
        return t / KB_SI if self.mode == "si" else t

    def volume_to_si(self, v: float) -> float:
        return v * self.length_unit_m**3

    def energy_to_si(self, e: float) -> float:
        # the internal energy unit is the joule, so the number passes through
        return e

    def frequency_to_si(self, nu: float) -> float:
        return nu / self.time_unit_s

    def number_density_to_si(self, n: float) -> float:
        return n / self.length_unit_m**3

    def energy_density_to_si(self, u: float) -> float:
        return u / self.length_unit_m**3

    def spectral_density_to_si(self, u_nu: float) -> float:
        # energy per volume per frequency: J / (m^3 Hz)
        return u_nu * self.time_unit_s / self.length_unit_m**3

    def state_to_si(self, state: ThermoState):
        return (
            self.temperature_to_si(state.temperature),
            self.volume_to_si(state.volume),
            state.fugacity,
        )


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

_ZETA_TRUNCATIONS = (256, 1024, 4096, 16384, 65536)
_ZETA_REL_TOL = 1e-13


def riemann_zeta(r: float) -> float:
    """Sum of s**(-r) over s >= 1 for r > 1, relative error below 1e-12.

    A direct partial sum over s <= S is closed with the integral of x**(-r)
    from S + 1/2 to infinity (the midpoint-rule image of the tail) plus the
    first Euler-Maclaurin correction.  The remainder after both corrections
    is bounded by ~ r(r+1)(r+2) * (S + 1/2)**(-(r+3)); S grows until that
    bound drops below 1e-13 of the running value, which happens by S = 4096
    for every r above the domain cutoff.
    """
    if not r > 1.0 + 1e-9:
        raise DomainError(f"zeta series diverges for r <= 1 (got r = {r})")
    value = math.inf
    for n_terms in _ZETA_TRUNCATIONS:
        s = np.arange(1.0, n_terms + 1.0)
        partial = float(np.sum(s ** (-r)))
        m = n_terms + 0.5
        value = partial + m ** (1.0 - r) / (r - 1.0) - (r / 24.0) * m ** (-r - 1.0)
        remainder_bound = 0.01 * r * (r + 1.0) * (r + 2.0) * m ** (-r - 3.0)
        if remainder_bound <= _ZETA_REL_TOL * value:
            return value
    return value


def polylog(r: float, z: float, max_terms: int = 10**7) -> float:
    """Bose-Einstein function g_r(z) = sum of z**s / s**r, for z in [0, 1].

    For z < 1 the series is summed directly and cut off once a geometric
    tail bound falls below 1e-13 of the partial sum; at z = 1 it reduces to
    the zeta function (requiring r > 1).
    """
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"polylog requires 0 <= z <= 1, got z = {z}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        if not r > 1.0 + 1e-9:
            raise DomainError(f"polylog diverges at z = 1 for r <= 1 (got r = {r})")
        return riemann_zeta(r)

    log_z = math.log(z)
    total = 0.0
    start = 1
    chunk = 4096
    while start <= max_terms:
        s = np.arange(start, start + chunk, dtype=float)
        total += float(np.sum(np.exp(s * log_z) * s ** (-r)))
        nxt = start + chunk
        # terms t_s = z^s / s^r decay at least geometrically with ratio q
        q = z * ((nxt + 1.0) / nxt) ** max(-r, 0.0)
        if q < 1.0:
            t_next = math.exp(nxt * log_z) * nxt ** (-r)
            if t_next / (1.0 - q) <= 1e-13 * total:
                return total
        start = nxt
    raise ConvergenceError(
        f"polylog({r}, {z}) did not converge within {max_terms} terms"
    )


def bose_quadrature(n: int, upper: float = 40.0) -> float:
    """Integral of x**n / (e**x - 1) on [0, inf) by adaptive quadrature.

    The finite part [0, upper] goes to an adaptive scheme (expm1 keeps the
    small-x integrand exact); the tail beyond `upper` is summed analytically
    as sum_k Gamma(n+1, k*upper) / k**(n+1) via e**(-kx) expansion of the
    Bose factor.
    """
    if n < 1:
        raise DomainError(f"integrand x**n/(e**x - 1) requires n >= 1, got {n}")

    def integrand(x):
        if x == 0.0:
            return 1.0 if n == 1 else 0.0
        return x**n / math.expm1(x)

    value, abserr = quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=200)
    if abserr > 1e-10 * abs(value):
        raise ConvergenceError(
            f"adaptive quadrature for bose_quadrature({n}) reports error {abserr:g}"
        )

    fact = math.factorial(n)
    tail = 0.0
    for k in range(1, 60):
        y = k * upper
        incomplete = fact * math.exp(-y) * sum(y**j / math.factorial(j) for j in range(n + 1))
        term = incomplete / k ** (n + 1)
        tail += term
        if term < 1e-18 * (value + tail):
            break
    return value + tail


def bose_integral(n: int) -> float:
    """Integral of x**n / (e**x - 1) over [0, inf), n a positive integer.

    Evaluated two independent ways, by adaptive quadrature with an analytic
    exponential tail and as Gamma(n+1) * zeta(n+1); the two must agree to
    1e-10 relative, and the closed form is returned.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"bose_integral requires an integer n >= 1, got {n}")
    n = int(n)
    closed = math.factorial(n) * riemann_zeta(n + 1)
    numeric = bose_quadrature(n)
    if abs(numeric - closed) > 1e-10 * closed:
        raise ConvergenceError(
            f"bose_integral({n}): quadrature {numeric!r} disagrees with "
            f"Gamma(n+1)*zeta(n+1) = {closed!r}"
        )
    return closed
