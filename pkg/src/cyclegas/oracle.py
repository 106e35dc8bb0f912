"""Brute-force ground truth on finite discrete mode spectra.

Everything here is exact up to floating point and deliberately dumb: the
grand partition function as a literal product over modes, the canonical
partition function as a literal sum over occupation vectors, and the same
canonical function as a literal sum over permutation cycle types.  These
three must agree with each other and with the cycle-sum recursion, which is
how the cycle expansion is validated end to end.

Occupation enumeration and the mode product expand degeneracies into
repeated modes internally, so a mode with degeneracy 2 and two coincident
modes follow bit-identical arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConvergenceError, DomainError, SizeError
from .partition import CycleSumSequence, cycle_types

OCCUPATION_VECTOR_LIMIT = 10**7
PERMUTATION_SUM_LIMIT = 25
EXPANSION_LIMIT = 10**7


@dataclass(frozen=True)
class ModeSpectrum:
    """Finite list of single-particle energies with integer degeneracies."""

    energies: np.ndarray
    degeneracies: np.ndarray

    def __post_init__(self):
        e = np.atleast_1d(np.asarray(self.energies, dtype=float))
        g = np.atleast_1d(np.asarray(self.degeneracies, dtype=int))
        if e.size == 0:
            raise DomainError("spectrum must contain at least one mode")
        if e.shape != g.shape:
            raise DomainError("energies and degeneracies must have equal length")
        if np.any(e < 0.0):
            raise DomainError("mode energies must be >= 0")
        if np.any(np.diff(e) < 0.0):
            raise DomainError("mode energies must be sorted ascending")
        if np.any(g < 1):
            raise DomainError("degeneracies must be positive integers")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "degeneracies", g)

    @classmethod
    def from_modes(cls, energies, degeneracies=None) -> "ModeSpectrum":
        e = np.atleast_1d(np.asarray(energies, dtype=float))
        g = (
            np.ones(e.size, dtype=int)
            if degeneracies is None
            else np.atleast_1d(np.asarray(degeneracies, dtype=int))
        )
        order = np.argsort(e, kind="stable")
        return cls(energies=e[order], degeneracies=g[order])

    @classmethod
    def from_file(cls, path) -> "ModeSpectrum":
        """Read "energy degeneracy" pairs, one per line; '#' starts a comment.

        The degeneracy may be omitted (defaults to 1); modes are sorted by
        energy on load.
        """
        energies = []
        degeneracies = []
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                fields = line.split()
                if len(fields) > 2:
                    raise ValueError(
                        f"{path}:{line_no}: expected 'energy [degeneracy]', got {raw!r}"
                    )
                try:
                    energies.append(float(fields[0]))
                    degeneracies.append(int(fields[1]) if len(fields) == 2 else 1)
                except ValueError as exc:
                    raise ValueError(f"{path}:{line_no}: {exc}") from exc
        if not energies:
            raise ValueError(f"{path}: no modes found")
        return cls.from_modes(energies, degeneracies)

    def expanded_energies(self) -> np.ndarray:
        """Energies with degeneracies unrolled into repeated entries."""
        total = int(np.sum(self.degeneracies))
        if total > EXPANSION_LIMIT:
            raise SizeError(f"expanded spectrum would hold {total} modes")
        return np.repeat(self.energies, self.degeneracies)

    def cycle_sums(self, beta: float, s_max: int) -> CycleSumSequence:
        """C_s = sum_j g_j exp(-beta e_j s) for s = 1..s_max."""
        return CycleSumSequence.from_spectrum(self.energies, self.degeneracies, beta, s_max)


def load_spectrum(path) -> ModeSpectrum:
    return ModeSpectrum.from_file(path)


def grand_partition_product(spectrum: ModeSpectrum, z: float, beta: float) -> float:
    """Textbook mode product prod_j (1 - z e^{-beta e_j})^(-g_j), exact."""
    occupancies = z * np.exp(-beta * spectrum.expanded_energies())
    if np.any(occupancies >= 1.0):
        raise DomainError(
            "grand partition diverges: z * exp(-beta * e_min) must be < 1"
        )
    result = 1.0
    for q in occupancies:
        result *= 1.0 / (1.0 - q)
    return result


def grand_partition_cycle(
    spectrum: ModeSpectrum, z: float, beta: float, s_max: int | None = None
) -> float:
    """Discrete cycle expansion exp(sum_s z^s C_s / s) of the grand product.

    The series terms decay at least geometrically with ratio
    q = z * exp(-beta * e_min), which must stay <= 0.9; when s_max is not
    given the sum stops once the geometric tail bound drops below 1e-13.
    """
    g = spectrum.degeneracies.astype(float)
    # z^s C_s = sum_j g_j q_j^s with q_j = z e^{-beta e_j}, every q_j below 1
    q_modes = z * np.exp(-beta * spectrum.energies)
    q = float(np.max(q_modes)) if z > 0.0 else 0.0
    if q > 0.9:
        raise ConvergenceError(
            f"z * exp(-beta * e_min) = {q:g} exceeds the 0.9 convergence margin"
        )
    total = 0.0
    s = 0
    hard_cap = s_max if s_max is not None else 10**5
    while s < hard_cap:
        s += 1
        term = float(np.sum(g * q_modes**s)) / s
        total += term
        if s_max is None and q > 0.0 and term * q / (1.0 - q) <= 1e-13 * total:
            break
        if z == 0.0:
            break
    return math.exp(total)


def canonical_by_occupation(spectrum: ModeSpectrum, N: int, beta: float) -> float:
    """Sum of exp(-beta * sum_j n_j e_j) over all occupation vectors with sum n_j = N.

    Pure enumeration over the degeneracy-expanded modes; the number of
    vectors, binom(N + M - 1, N), is capped at 10^7 as a hard API limit.
    """
    if N < 0 or int(N) != N:
        raise DomainError(f"particle number must be an integer >= 0, got {N}")
    N = int(N)
    if N == 0:
        return 1.0
    energies = spectrum.expanded_energies()
    m = energies.size
    n_vectors = math.comb(N + m - 1, N)
    if n_vectors > OCCUPATION_VECTOR_LIMIT:
        raise SizeError(
            f"{n_vectors} occupation vectors exceed the {OCCUPATION_VECTOR_LIMIT} limit"
        )
    weights = np.exp(-beta * energies)

    def branch(j: int, n_left: int) -> float:
        if j == m - 1:
            return weights[j] ** n_left
        acc = 0.0
        for n in range(n_left + 1):
            acc += weights[j] ** n * branch(j + 1, n_left - n)
        return acc

    return branch(0, N)


def canonical_by_permutations(spectrum: ModeSpectrum, N: int, beta: float) -> float:
    """Z_N as the explicit sum over permutation cycle types.

    Each integer partition {xi_s} of N contributes
    prod_s C_s**xi_s / (xi_s! * s**xi_s) with C_s = sum_j g_j e^{-beta e_j s};
    the prefactor is the count of permutations of that cycle type divided
    by N!.
    """
    if N < 0 or int(N) != N:
        raise DomainError(f"particle number must be an integer >= 0, got {N}")
    N = int(N)
    if N > PERMUTATION_SUM_LIMIT:
        raise SizeError(f"cycle-type sum is limited to N <= {PERMUTATION_SUM_LIMIT}")
    if N == 0:
        return 1.0
    e = spectrum.energies
    g = spectrum.degeneracies.astype(float)
    s_values = np.arange(1, N + 1, dtype=float)
    c = np.exp(-beta * np.outer(s_values, e)) @ g
    total = 0.0
    for ctype in cycle_types(N):
        weight = 1.0
        for s, xi in ctype:
            weight *= c[s - 1] ** xi / (math.factorial(xi) * float(s) ** xi)
        total += weight
    return total
