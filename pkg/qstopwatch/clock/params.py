from __future__ import annotations

import dataclasses
import math

from .. import exceptions


def eigenvalue_from_dephasing(gamma: float, t: float, tau0: float = 0.0) -> float:
    """p = (1 + exp(-gamma (t + tau0))) / 2"""
    if gamma < 0 or tau0 < 0:
        raise exceptions.InvalidArgument('gamma and tau0 must be non-negative')
    return 0.5 * (1 + math.exp(-gamma * (t + tau0)))


@dataclasses.dataclass(frozen=True)
class ClockParams:
    """i.i.d. clock ensemble, with noise given either as p or as (gamma, tau0)

    T is measured in units of hbar / (E1 - E0)
    """

    n: int
    T: float
    p: float | None = None
    gamma: float | None = None
    tau0: float = 0.0
    s: float = 0.5

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise exceptions.InvalidArgument('n must be a positive integer')
        if (self.p is None) == (self.gamma is None):
            raise exceptions.InvalidArgument(
                'specify exactly one of p or gamma'
            )
        if self.p is not None and not 0.5 <= self.p <= 1:
            raise exceptions.InvalidArgument('p must be in [1/2, 1]')
        if self.gamma is not None and self.gamma < 0:
            raise exceptions.InvalidArgument('gamma must be non-negative')
        if self.tau0 < 0:
            raise exceptions.InvalidArgument('tau0 must be non-negative')
        if self.p is not None and self.tau0 != 0:
            raise exceptions.InvalidArgument('tau0 only applies together with gamma')
        if not 0 < self.s < 1:
            raise exceptions.InvalidArgument('s must be in (0, 1)')
        if self.gamma is not None and self.T + self.tau0 < 0:
            raise exceptions.InvalidArgument('T + tau0 must be non-negative')

    def resolve_p(self) -> float:
        if self.p is not None:
            return float(self.p)
        assert self.gamma is not None
        return eigenvalue_from_dephasing(self.gamma, self.T, self.tau0)

    def with_time(self, T: float) -> ClockParams:
        return dataclasses.replace(self, T=T)
