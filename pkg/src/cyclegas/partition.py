"""The grand and canonical partition functions of an ideal Bose system,
built from exchange-cycle sums.

Four equivalent routes are implemented and cross-checked against each other:

* integral route: log Z from the quadrature of p^3/(e^p - 1) (photon gas),
* cycle series:   log Z = V * sum_s f_s / s with a certified tail bracket,
* product form:   Z = prod_s exp(V f_s / s), each factor summed as an
                  explicit exponential series,
* canonical form: Z_N as a sum over all cycle distributions {xi_s} with
                  sum_s s*xi_s = N, evaluated both by exact enumeration of
                  integer partitions and by the standard recursion
                  Z_N = (1/N) sum_k C_k Z_{N-k}.

Substituting the matter-wave weight with fugacity z^s into the cycle series
reproduces the familiar Bose-Einstein momentum integrals; both sides of that
identity are exposed so tests can drive them independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln as scipy_gammaln

from .core import ConvergenceError, DomainError, SizeError, ThermoState, bose_integral, polylog
from .cycle_weights import TWO_OVER_PI_SQUARED

ENUMERATION_LIMIT = 25  # p(25) = 1958 cycle types, factorials < 2**128


@dataclass(frozen=True)
class CycleDistribution:
    """One cycle type: xi_s cycles of size s, with sum_s s*xi_s = n_total."""

    multiplicities: dict
    n_total: int

    def __post_init__(self):
        total = 0
        for s, xi in self.multiplicities.items():
            if s < 1 or xi < 1:
                raise DomainError("cycle sizes and multiplicities must be >= 1")
            total += s * xi
        if total != self.n_total:
            raise DomainError(
                f"sum of s * xi_s is {total}, does not match n_total = {self.n_total}"
            )


@dataclass(frozen=True)
class CycleSumSequence:
    """Per-system cycle sums C_s for s = 1..s_max (index 0 holds C_1).

    For the continuum photon gas C_s = V * f_s; for a discrete spectrum
    C_s = sum_j g_j exp(-beta e_j s).
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise DomainError("cycle sums must form a nonempty 1-d sequence")
        if not np.all(values > 0.0):
            raise DomainError("cycle sums must be strictly positive")
        object.__setattr__(self, "values", values)

    @property
    def s_max(self) -> int:
        return self.values.size

    def __getitem__(self, s: int) -> float:
        if s < 1 or s > self.values.size:
            raise IndexError(f"cycle sum C_{s} not available (s_max = {self.values.size})")
        return float(self.values[s - 1])

    @classmethod
    def from_photon_gas(cls, state: ThermoState, s_max: int) -> "CycleSumSequence":
        s = np.arange(1, s_max + 1, dtype=float)
        f_s = TWO_OVER_PI_SQUARED * state.temperature**3 / s**3
        return cls(values=state.volume * f_s)

    @classmethod
    def from_spectrum(cls, energies, degeneracies, beta: float, s_max: int) -> "CycleSumSequence":
        e = np.asarray(energies, dtype=float)
        g = np.asarray(degeneracies, dtype=float)
        s = np.arange(1, s_max + 1, dtype=float)
        return cls(values=np.exp(-beta * np.outer(s, e)) @ g)


def tail_bracket(s_max: int, power: float):
    """Two-sided integral bounds on sum_{s > s_max} s**(-power).

    Returns (lo, hi) with lo = integral from s_max+1 and hi = integral from
    s_max of x**(-power); the true tail lies strictly between them.
    """
    if power <= 1.0:
        raise DomainError("tail bracket requires power > 1")
    lo = (s_max + 1.0) ** (1.0 - power) / (power - 1.0)
    hi = float(s_max) ** (1.0 - power) / (power - 1.0)
    return lo, hi


def _require_photon_fugacity(state: ThermoState):
    if state.fugacity != 1.0:
        raise DomainError(
            "photon gas has no conserved particle number: fugacity must be 1, "
            f"got {state.fugacity}"
        )


def log_grand_partition_integral(state: ThermoState) -> float:
    """log Z of the photon gas from the momentum integral of p^3/(e^p - 1)."""
    _require_photon_fugacity(state)
    # volume multiplies last so that log Z(V) = V * log Z(1) holds exactly
    per_volume = state.temperature**3 / (3.0 * math.pi**2) * bose_integral(3)
    return state.volume * per_volume


def log_grand_partition_cycle_series(
    state: ThermoState, s_max: int | None = None, include_tail: bool = True
) -> float:
    """log Z of the photon gas as V * sum_s f_s / s.

    With include_tail the truncated series is closed by the midpoint of the
    two-sided integral bracket on sum_{s > s_max} s**(-4); by default s_max
    grows until the bracket width is below 1e-12 of the sum, which brings
    the result within 1e-10 relative of the integral route.
    """
    _require_photon_fugacity(state)
    if s_max is None:
        s_max = 64
        while tail_bracket(s_max, 4.0)[1] - tail_bracket(s_max, 4.0)[0] > 1e-12:
            s_max *= 2
    if s_max < 1:
        raise DomainError(f"s_max must be >= 1, got {s_max}")
    s = np.arange(1, s_max + 1, dtype=float)
    total = float(np.sum(s ** (-4.0)))
    if include_tail:
        lo, hi = tail_bracket(s_max, 4.0)
        total += 0.5 * (lo + hi)
    return state.volume * (TWO_OVER_PI_SQUARED * state.temperature**3 * total)


def _checked_factor_log(lam: float) -> float:
    """Validate the inner sum over xi of lam**xi / xi! against exp(lam).

    For moderate lam the series is summed explicitly to a 1e-14 term
    tolerance; for lam too large for linear-space floats the same identity
    is checked in scaled form (the Poisson weights lam**xi e^-lam / xi!
    must carry total mass 1).  Returns log of the factor, i.e. lam itself.
    """
    if lam <= 700.0:
        term = 1.0
        factor = 1.0
        k = 1
        while term > 1e-14 * factor:
            term *= lam / k
            factor += term
            k += 1
        if abs(factor - math.exp(lam)) > 1e-12 * math.exp(lam):
            raise ConvergenceError(f"exponential series self-check failed at lam = {lam}")
    else:
        half_width = int(12.0 * math.sqrt(lam)) + 1
        xi = np.arange(max(int(lam) - half_width, 0), int(lam) + half_width)
        mass = float(np.sum(np.exp(xi * math.log(lam) - lam - scipy_gammaln(xi + 1.0))))
        if abs(mass - 1.0) > 1e-9:
            raise ConvergenceError(f"scaled series self-check failed at lam = {lam}")
    return lam


def log_grand_partition_product_form(state: ThermoState, s_max: int) -> np.ndarray:
    """Running log of the partial products of Z = prod_s exp(V f_s / s).

    Each factor's exponential-series identity is self-checked (see
    _checked_factor_log); the running sums increase monotonically toward
    the cycle-series log Z and remain finite for any system size.
    """
    _require_photon_fugacity(state)
    if s_max < 1:
        raise DomainError(f"s_max must be >= 1, got {s_max}")
    per_volume = TWO_OVER_PI_SQUARED * state.temperature**3
    logs = np.empty(s_max)
    for s in range(1, s_max + 1):
        logs[s - 1] = _checked_factor_log(state.volume * per_volume / s**4)
    return np.cumsum(logs)


def grand_partition_product_form(state: ThermoState, s_max: int) -> np.ndarray:
    """Partial products of Z = prod_s sum_xi (V f_s / s)**xi / xi!.

    Linear-space view of log_grand_partition_product_form; overflows double
    precision once log Z exceeds ~709, so use the log form for large V*T^3.
    """
    return np.exp(log_grand_partition_product_form(state, s_max))


@lru_cache(maxsize=None)
def cycle_types(n: int):
    """All integer partitions of n as tuples of (cycle size, multiplicity)."""

    def generate(remaining, largest):
        if remaining == 0:
            yield {}
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in generate(remaining - part, part):
                grown = dict(rest)
                grown[part] = grown.get(part, 0) + 1
                yield grown

    return tuple(tuple(sorted(d.items())) for d in generate(n, n))


def canonical_partition_recursive(C: CycleSumSequence, N: int) -> float:
    """Z_N from Z_0 = 1, Z_N = (1/N) sum_{k=1..N} C_k Z_{N-k}.

    This closed recursion evaluates the full sum over cycle distributions
    without enumerating them.
    """
    return canonical_partition_table(C, N)[N]


def canonical_partition_table(C: CycleSumSequence, N: int) -> np.ndarray:
    """Array of Z_0, Z_1, ..., Z_N from the cycle-sum recursion."""
    if N < 0 or int(N) != N:
        raise DomainError(f"particle number must be an integer >= 0, got {N}")
    N = int(N)
    if N > 0 and C.s_max < N:
        raise DomainError(f"need cycle sums up to s = {N}, have s_max = {C.s_max}")
    Z = np.empty(N + 1)
    Z[0] = 1.0
    for n in range(1, N + 1):
        acc = 0.0
        for k in range(1, n + 1):
            acc += C[k] * Z[n - k]
        Z[n] = acc / n
    return Z


def canonical_partition_enumerated(C: CycleSumSequence, N: int):
    """Z_N as an explicit sum over all cycle distributions of N particles.

    Returns (total, breakdown) where breakdown lists each CycleDistribution
    with its weight prod_s C_s**xi_s / (xi_s! * s**xi_s).  Along the way the
    cycle-type counting identity sum over distributions of
    N!/(prod_s xi_s! s**xi_s) = N! is verified in exact integer arithmetic.
    """
    if N < 0 or int(N) != N:
        raise DomainError(f"particle number must be an integer >= 0, got {N}")
    N = int(N)
    if N > ENUMERATION_LIMIT:
        raise SizeError(
            f"enumeration is limited to N <= {ENUMERATION_LIMIT}, got N = {N}"
        )
    if N > 0 and C.s_max < N:
        raise DomainError(f"need cycle sums up to s = {N}, have s_max = {C.s_max}")
    fact_n = math.factorial(N)
    total = 0.0
    count_total = 0
    breakdown = []
    for ctype in cycle_types(N):
        weight = 1.0
        denominator = 1
        for s, xi in ctype:
            weight *= C[s] ** xi / (math.factorial(xi) * float(s) ** xi)
            denominator *= math.factorial(xi) * s**xi
        if fact_n % denominator:
            raise RuntimeError(f"cycle-type count for {ctype} is not an integer")
        count_total += fact_n // denominator
        total += weight
        breakdown.append((CycleDistribution(dict(ctype), N), weight))
    if count_total != fact_n:
        raise RuntimeError(
            f"cycle-type counts sum to {count_total}, expected {N}! = {fact_n}"
        )
    return total, breakdown


def grand_partition_from_canonical(
    C: CycleSumSequence, z: float, rel_cutoff: float = 1e-16
) -> float:
    """Grand sum sum_N z**N Z_N built from the canonical recursion.

    Truncates once a term drops below rel_cutoff of the running sum; raises
    if the available cycle sums run out first.
    """
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"fugacity must lie in [0, 1], got {z}")
    Z = [1.0]
    total = 1.0
    z_power = 1.0
    for n in range(1, C.s_max + 1):
        acc = 0.0
        for k in range(1, n + 1):
            acc += C[k] * Z[n - k]
        Z.append(acc / n)
        z_power *= z
        term = z_power * Z[n]
        total += term
        if n >= 8 and term < rel_cutoff * total:
            return total
    raise ConvergenceError(
        f"grand sum not converged by N = {C.s_max}; extend the cycle sums"
    )


def bose_number_density_cycle(state: ThermoState, mass: float) -> float:
    """Massive-boson number density from the fugacity-weighted cycle sum.

    n = sum_s z**s f'_s = (m T / 2 pi)^(3/2) * g_{3/2}(z).  At z = 1 the
    series still converges (to zeta(3/2)); z > 1 is rejected upstream.
    """
    if not mass > 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    scale = (mass * state.temperature / (2.0 * math.pi)) ** 1.5
    return scale * polylog(1.5, state.fugacity)


def bose_number_density_integral(state: ThermoState, mass: float) -> float:
    """Independent momentum-integral route to the Bose number density.

    Integrates 4 pi p^2 dp/(2 pi)^3 * z e^{-beta p^2/2m} / (1 - z e^{-beta
    p^2/2m}) by adaptive quadrature after substituting u = p sqrt(beta/2m).
    """
    if not mass > 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    z = state.fugacity
    if z == 0.0:
        return 0.0

    if z == 1.0:
        # u^2 e^{-u^2} / (1 - e^{-u^2}); -expm1(-u^2) keeps the u -> 0 end exact
        def integrand(u):
            if u == 0.0:
                return 1.0
            return u * u * math.exp(-u * u) / -math.expm1(-u * u)

    else:

        def integrand(u):
            w = z * math.exp(-u * u)
            return u * u * w / (1.0 - w)

    value, abserr = quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-11, limit=200)
    if abserr > 1e-9 * abs(value):
        raise ConvergenceError(
            f"Bose density quadrature at z = {z} reports error {abserr:g}"
        )
    scale = (2.0 * mass * state.temperature) ** 1.5 / (2.0 * math.pi**2)
    return scale * value
