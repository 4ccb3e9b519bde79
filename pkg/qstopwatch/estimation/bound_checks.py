from __future__ import annotations

import dataclasses
import logging
import math

from .. import exceptions


logger = logging.getLogger(__name__)


def size_accuracy_bound(D: int, delta_T: float, P: float) -> float:
    """P delta_T / (D + 1): floor on the inaccuracy of a D-dimensional clock"""
    if D < 1:
        raise exceptions.InvalidArgument('D must be at least 1')
    if delta_T <= 0:
        raise exceptions.InvalidArgument('delta_T must be positive')
    if not 0 < P <= 1:
        raise exceptions.InvalidArgument('P must be in (0, 1], got ' + str(P))
    return P * delta_T / (D + 1)


def memory_bound(delta: float, P: float | None = None) -> float:
    """log2(1 / delta) qubits are needed to store time to inaccuracy delta

    P only enters the O(1) slack and is accepted for symmetry with
    size_accuracy_bound
    """
    if delta <= 0:
        raise exceptions.InvalidArgument('delta must be positive')
    if P is not None and not 0 < P <= 1:
        raise exceptions.InvalidArgument('P must be in (0, 1], got ' + str(P))
    return math.log2(1 / delta)


@dataclasses.dataclass(frozen=True)
class BoundCheck:
    name: str
    measured: float
    bound: float
    satisfied: bool
    # distance to the bound, negative on violation
    margin: float


def _finish(check: BoundCheck, strict: bool) -> BoundCheck:
    if not check.satisfied:
        logger.warning(
            '%s violated: measured %.6g, bound %.6g',
            check.name,
            check.measured,
            check.bound,
        )
        if strict:
            raise exceptions.BoundViolation(
                check.name + ': measured ' + str(check.measured)
                + ', bound ' + str(check.bound)
            )
    return check


def check_size_accuracy(
    delta: float,
    D: int,
    delta_T: float,
    P: float,
    *,
    strict: bool = False,
) -> BoundCheck:
    """measured delta(P) must not beat P delta_T / (D + 1)"""
    bound = size_accuracy_bound(D, delta_T, P)
    check = BoundCheck(
        name='size-accuracy',
        measured=delta,
        bound=bound,
        satisfied=delta >= bound,
        margin=delta - bound,
    )
    return _finish(check, strict)


def check_memory_bound(
    memory_qubits: int,
    delta: float,
    slack: float = 2.0,
    *,
    strict: bool = False,
) -> BoundCheck:
    """memory_qubits + slack must reach log2(1 / delta)"""
    if slack < 0:
        raise exceptions.InvalidArgument('slack must be non-negative')
    bound = memory_bound(delta)
    check = BoundCheck(
        name='memory',
        measured=memory_qubits + slack,
        bound=bound,
        satisfied=memory_qubits + slack >= bound,
        margin=memory_qubits + slack - bound,
    )
    return _finish(check, strict)


def check_upper_bound(
    name: str,
    measured: float,
    bound: float,
    *,
    strict: bool = False,
) -> BoundCheck:
    """an exact error must stay below its analytic bound"""
    check = BoundCheck(
        name=name,
        measured=measured,
        bound=bound,
        satisfied=measured <= bound,
        margin=bound - measured,
    )
    return _finish(check, strict)
