from __future__ import annotations

import math
import typing

import numpy as np

from .. import exceptions
from . import wigner

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


def validate_qubit_count(n: int, minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise exceptions.InvalidArgument(
            'n must be an integer >= ' + str(minimum) + ', got ' + str(n)
        )
    return int(n)


def validate_eigenvalue(p: float) -> float:
    if not 0.5 <= p <= 1:
        raise exceptions.InvalidArgument(
            'p must be in [1/2, 1], got ' + str(p)
            + ' (use the symmetry p <-> 1 - p upstream)'
        )
    return float(p)


def spin_values(n: int) -> list[float]:
    """total spins J = n/2, n/2 - 1, ..., (n mod 2)/2"""
    n = validate_qubit_count(n, minimum=0)
    return [(n - 2 * i) / 2 for i in range(n // 2 + 1)]


def multiplicity(n: int, J: float) -> int:
    """dimension m_J of the permutation register paired with spin J

    zero when J is not a spin of n qubits
    """
    n = validate_qubit_count(n, minimum=0)
    two_j = wigner.validate_spin(J)
    if two_j > n or (n - two_j) % 2 != 0:
        return 0
    lower = (n - two_j) // 2
    numerator = math.comb(n, lower) * (two_j + 1)
    denominator = (n + two_j) // 2 + 1
    value, remainder = divmod(numerator, denominator)
    assert remainder == 0, 'hook-length value must be an integer'
    return value


def log_multiplicity(n: int, J: float) -> float:
    value = multiplicity(n, J)
    if value == 0:
        return -math.inf
    return math.log(value)


def schur_weights(n: int, p: float) -> NDArray[np.float64]:
    """probabilities q_J of each spin sector of n qubits with eigenvalue p

    q_J = m_J * sum_{m=-J}^{J} p^(n/2 + m) (1 - p)^(n/2 - m), evaluated in
    log domain; entries follow the order of spin_values(n)
    """
    import scipy.special

    n = validate_qubit_count(n)
    p = validate_eigenvalue(p)

    log_weights = []
    for J in spin_values(n):
        m = wigner.m_values(J)
        terms = scipy.special.xlogy(n / 2 + m, p)
        terms = terms + scipy.special.xlogy(n / 2 - m, 1 - p)
        if np.all(np.isneginf(terms)):
            log_weights.append(-math.inf)
        else:
            log_sum = scipy.special.logsumexp(terms)
            log_weights.append(log_multiplicity(n, J) + log_sum)

    weights = np.exp(np.array(log_weights) - np.max(log_weights))
    return weights / weights.sum()


def schur_weights_closed_form(n: int, p: float) -> NDArray[np.float64]:
    """asymptotic closed form (2J + 1) / (2 J0) [B(n/2 + J + 1) - B(n/2 - J)]

    B is the binomial(n, p) mass and J0 = (p - 1/2)(n + 1); only meant as a
    cross-check of schur_weights in the high-probability region, it is not
    normalized and misplaces the mass at p = 1
    """
    import scipy.stats

    n = validate_qubit_count(n)
    p = validate_eigenvalue(p)
    if p == 0.5:
        raise exceptions.InvalidArgument('closed form is undefined at p = 1/2')

    J0 = (p - 0.5) * (n + 1)
    spins = np.array(spin_values(n))
    upper = scipy.stats.binom.pmf(np.rint(n / 2 + spins + 1), n, p)
    lower = scipy.stats.binom.pmf(np.rint(n / 2 - spins), n, p)
    return (2 * spins + 1) / (2 * J0) * (upper - lower)


def concentration_center(n: int, p: float) -> float:
    return (validate_eigenvalue(p) - 0.5) * (validate_qubit_count(n) + 1)
