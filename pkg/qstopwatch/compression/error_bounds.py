"""analytic bounds on the error of the frequency projection"""

from __future__ import annotations

import dataclasses
import math

from .. import exceptions


def projection_error_bound(J: float, p: float, s: float = 0.5) -> float:
    """pre-asymptotic bound on the projection error of one spin sector

    (3/2) sqrt(exp[-ln^2 J / (4 ln^2 2) + a ln(2J) + a ln(s / (1 - s))]
    + ((1 - p) / p)^(a + 1)) with a = floor(ln(J) / 4); infinite at p = 1/2
    """
    if J < 2:
        raise exceptions.InvalidArgument('bound requires J >= 2, got ' + str(J))
    if not 0.5 <= p <= 1:
        raise exceptions.InvalidArgument('p must be in [1/2, 1], got ' + str(p))
    if not 0 < s < 1:
        raise exceptions.InvalidArgument('s must be in (0, 1), got ' + str(s))
    if p == 0.5:
        return math.inf

    log_j = math.log(J)
    a = math.floor(log_j / 4)
    exponent = -(log_j**2) / (4 * math.log(2) ** 2)
    exponent += a * math.log(2 * J) + a * math.log(s / (1 - s))
    mixed_term = ((1 - p) / p) ** (a + 1)
    return 1.5 * math.sqrt(math.exp(exponent) + mixed_term)


def single_shot_error_bound(n: int, p: float) -> float:
    """(3/2)(2 / ((2p - 1) n))^((1/8) ln(p / (1 - p)))"""
    if n < 2:
        raise exceptions.InvalidArgument('n must be at least 2')
    if not 0.5 < p < 1:
        raise exceptions.InvalidArgument('p must be in (1/2, 1), got ' + str(p))
    base = 2 / ((2 * p - 1) * n)
    return 1.5 * base ** (math.log(p / (1 - p)) / 8)


def overall_error_bound(n: int, k: int, T: float, gamma: float) -> float:
    """bound on the storage error accumulated over k compressions

    (3k/2)(2 exp(gamma T) / n)^((1/8) ln coth(gamma T / 2)); without
    dephasing the exponent diverges and the pure-state bound of the top spin
    sector is used instead
    """
    if n < 2:
        raise exceptions.InvalidArgument('n must be at least 2')
    if k < 1:
        raise exceptions.InvalidArgument('k must be at least 1')
    if T < 0 or gamma < 0:
        raise exceptions.InvalidArgument('T and gamma must be non-negative')

    x = gamma * T
    if x == 0:
        J = n / 2
        if J < 2:
            return 1.5 * k
        return k * projection_error_bound(J, 1.0)
    exponent = math.log(1 / math.tanh(x / 2)) / 8
    return 1.5 * k * (2 * math.exp(x) / n) ** exponent


@dataclasses.dataclass(frozen=True)
class CircuitErrorBudget:
    trace_error: float
    inaccuracy_penalty: float


def circuit_error_budget(k: int, eps1: float, n: int) -> CircuitErrorBudget:
    """gate-error accounting for k encode/decode rounds of n qubits

    the Schur transform costs n^4 log2(n) gates per round; the accumulated
    trace error adds trace_error / sqrt(n) to the inaccuracy
    """
    if k < 1 or n < 2 or eps1 < 0:
        raise exceptions.InvalidArgument('need k >= 1, n >= 2, eps1 >= 0')
    trace_error = k * eps1 * n**4 * math.log2(n)
    return CircuitErrorBudget(
        trace_error=trace_error,
        inaccuracy_penalty=trace_error / math.sqrt(n),
    )
