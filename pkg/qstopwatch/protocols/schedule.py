from __future__ import annotations

import dataclasses
import typing

import numpy as np

from .. import exceptions
from .. import spin

if typing.TYPE_CHECKING:
    from ..estimation import inaccuracy
    from ..spec import typedefs
    from numpy.typing import NDArray


@dataclasses.dataclass(frozen=True)
class EventSchedule:
    """durations T_0, ..., T_{k-1} of the timed events

    between consecutive events the memory idles for lag_durations[j] while
    dephasing at rate lag_dephasing[j]
    """

    durations: tuple[float, ...]
    lag_dephasing: tuple[float, ...] | None = None
    lag_durations: tuple[float, ...] | None = None
    lag_model: typedefs.LagModel = 'uniform'

    def __post_init__(self) -> None:
        durations = tuple(float(T) for T in self.durations)
        object.__setattr__(self, 'durations', durations)
        if len(durations) < 1:
            raise exceptions.InvalidArgument('schedule needs at least one event')
        if any(T <= 0 for T in durations):
            raise exceptions.InvalidArgument('event durations must be positive')
        if self.lag_model not in ('uniform', 'quadratic'):
            raise exceptions.InvalidArgument(
                'unknown lag model: ' + str(self.lag_model)
            )
        for name in ('lag_dephasing', 'lag_durations'):
            values = getattr(self, name)
            if values is None:
                continue
            values = tuple(float(value) for value in values)
            object.__setattr__(self, name, values)
            if len(values) != self.k - 1:
                raise exceptions.InvalidArgument(
                    name + ' needs ' + str(self.k - 1) + ' entries, got '
                    + str(len(values))
                )
            if any(value < 0 for value in values):
                raise exceptions.InvalidArgument(name + ' must be non-negative')

    @property
    def k(self) -> int:
        return len(self.durations)

    @property
    def total(self) -> float:
        return float(sum(self.durations))

    def lag(self, j: int) -> tuple[float, float]:
        """(rate, duration) of the memory idle after event j"""
        if self.lag_dephasing is None or j >= self.k - 1:
            return 0.0, 0.0
        duration = 1.0 if self.lag_durations is None else self.lag_durations[j]
        return self.lag_dephasing[j], duration


def uniform_schedule(T: float, k: int) -> EventSchedule:
    """k events of equal length summing to T"""
    if k < 1:
        raise exceptions.InvalidArgument('k must be at least 1')
    return EventSchedule(durations=tuple([T / k] * k))


@dataclasses.dataclass(frozen=True)
class ProtocolResult:
    # None when no block state is formed, as for qubit-by-qubit readout
    final_state: spin.BlockState | None
    inaccuracy: inaccuracy.InaccuracyReport
    compression_error_total: float
    memory_qubits_peak: int
    ideal_distance: float = 0.0
    step_errors: tuple[float, ...] = ()
    estimates: NDArray[np.float64] | None = None

    def as_row(self) -> dict[str, typing.Any]:
        row: dict[str, typing.Any] = dict(self.inaccuracy.as_dict())
        row['compression_error_total'] = self.compression_error_total
        row['memory_qubits_peak'] = self.memory_qubits_peak
        row['ideal_distance'] = self.ideal_distance
        return row
