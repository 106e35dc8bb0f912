"""Per-volume statistical weights of s-particle exchange cycles.

An s-cycle is a group of s particles sharing one momentum and polarization
in the symmetrized many-body state.  Its weight per unit volume is the
momentum integral of exp(-beta * energy(p) * s) over 4*pi*p^2 dp / (2*pi)^3
times the internal degeneracy.  For light (energy = p) the closed form is

    f_s = (2 / pi^2) * T^3 / s^3,

and for a nonrelativistic massive particle (energy = p^2 / 2m)

    f'_s = (m T / 2 pi)^(3/2) / s^(3/2),

both in natural units.  The quadrature route below evaluates the same
integrals numerically and is the independent check on the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import ConvergenceError, DomainError, ThermoState

TWO_OVER_PI_SQUARED = 2.0 / math.pi**2


@dataclass(frozen=True)
class CycleWeight:
    """Weight of an s-cycle: `value` has units (length)^-3."""

    s: int
    value: float


@dataclass(frozen=True)
class Dispersion:
    """Single-particle energy law plus internal degeneracy.

    kind "photon" means energy(p) = p with two helicity states; kind
    "massive" means energy(p) = p^2 / (2 mass) with degeneracy 1 unless
    overridden.
    """

    kind: str
    mass: float | None = None
    internal_degeneracy: int | None = None

    def __post_init__(self):
        if self.kind not in ("photon", "massive"):
            raise DomainError(f"dispersion kind must be 'photon' or 'massive', got {self.kind!r}")
        if self.kind == "massive":
            if self.mass is None or not self.mass > 0.0:
                raise DomainError("massive dispersion requires mass > 0")
        if self.internal_degeneracy is None:
            default = 2 if self.kind == "photon" else 1
            object.__setattr__(self, "internal_degeneracy", default)
        elif self.internal_degeneracy < 1:
            raise DomainError("internal_degeneracy must be >= 1")

    @classmethod
    def photon(cls, internal_degeneracy: int | None = None) -> "Dispersion":
        return cls(kind="photon", internal_degeneracy=internal_degeneracy)

    @classmethod
    def massive(cls, mass: float, internal_degeneracy: int | None = None) -> "Dispersion":
        return cls(kind="massive", mass=mass, internal_degeneracy=internal_degeneracy)


def _check_cycle_size(s):
    if int(s) != s or s < 1:
        raise DomainError(f"cycle size must be an integer >= 1, got {s}")
    return int(s)


def photon_cycle_weight(state: ThermoState, s: int) -> CycleWeight:
    """Closed-form photon cycle weight (2/pi^2) * T^3 / s^3."""
    s = _check_cycle_size(s)
    value = TWO_OVER_PI_SQUARED * state.temperature**3 / s**3
    return CycleWeight(s=s, value=value)


def matter_cycle_weight(state: ThermoState, mass: float, s: int) -> CycleWeight:
    """Closed-form matter-wave cycle weight (m T / 2 pi)^(3/2) / s^(3/2)."""
    s = _check_cycle_size(s)
    if not mass > 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    value = (mass * state.temperature / (2.0 * math.pi)) ** 1.5 / s**1.5
    return CycleWeight(s=s, value=value)


def _exp_moment(power: float) -> float:
    """Integral of u**power * e**(-u) over [0, inf) to 1e-9 relative."""
    value, abserr = quad(
        lambda u: u**power * math.exp(-u), 0.0, np.inf, epsabs=0.0, epsrel=1e-11
    )
    if abserr > 1e-9 * abs(value):
        raise ConvergenceError(
            f"adaptive quadrature for exponential moment {power} reports error {abserr:g}"
        )
    return value


def cycle_weight_by_quadrature(dispersion: Dispersion, state: ThermoState, s: int) -> CycleWeight:
    """Numerical momentum integral g * int exp(-beta*energy(p)*s) 4 pi p^2 dp/(2 pi)^3.

    The substitution u = beta * energy(p) * s removes every parameter from
    the quadrature itself, so the accuracy is uniform in s and T; the
    remaining scale factor is exact arithmetic.  Serves as the independent
    oracle for the two closed-form weights.
    """
    s = _check_cycle_size(s)
    g = dispersion.internal_degeneracy
    beta = state.beta
    if dispersion.kind == "photon":
        # p = u/(beta s):  p^2 dp -> (beta s)^-3 u^2 du
        moment = _exp_moment(2.0)
        value = g / (2.0 * math.pi**2) * (state.temperature / s) ** 3 * moment
    else:
        # u = beta s p^2/(2m):  p^2 dp -> (2m/(beta s))^(3/2) sqrt(u)/2 du
        moment = _exp_moment(0.5)
        value = g / (4.0 * math.pi**2) * (2.0 * dispersion.mass / (beta * s)) ** 1.5 * moment
    return CycleWeight(s=s, value=value)


def decay_comparison(s_max: int) -> np.ndarray:
    """Normalized decay of photon vs matter cycle weights, rows (s, f_s/f_1, f'_s/f'_1).

    Checks that the photon column decays strictly faster for every s >= 2
    and that the two log-log slopes are -3 and -3/2.
    """
    if int(s_max) != s_max or s_max < 2:
        raise DomainError(f"s_max must be an integer >= 2, got {s_max}")
    s_max = int(s_max)
    state = ThermoState(temperature=1.0)
    f1 = photon_cycle_weight(state, 1).value
    fp1 = matter_cycle_weight(state, 2.0 * math.pi, 1).value
    rows = np.empty((s_max, 3))
    for s in range(1, s_max + 1):
        rows[s - 1, 0] = s
        rows[s - 1, 1] = photon_cycle_weight(state, s).value / f1
        rows[s - 1, 2] = matter_cycle_weight(state, 2.0 * math.pi, s).value / fp1
    if not np.all(rows[1:, 1] < rows[1:, 2]):
        raise AssertionError("photon cycle weights must decay faster than matter ones")
    log_s = np.log(rows[:, 0])
    slope_photon = np.polyfit(log_s, np.log(rows[:, 1]), 1)[0]
    slope_matter = np.polyfit(log_s, np.log(rows[:, 2]), 1)[0]
    if abs(slope_photon + 3.0) > 1e-9 or abs(slope_matter + 1.5) > 1e-9:
        raise AssertionError(
            f"decay exponents off: photon {slope_photon:.12f}, matter {slope_matter:.12f}"
        )
    return rows
