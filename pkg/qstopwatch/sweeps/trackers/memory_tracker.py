from __future__ import annotations

import typing

from ... import exceptions
from . import tracker

if typing.TYPE_CHECKING:
    from ...spec import typedefs


class MemoryTracker(tracker.Tracker):
    """keeps rows in the orchestrating process; nothing survives a restart"""

    def __init__(self, **kwargs: typing.Any) -> None:
        self._rows: dict[int, typedefs.Row] = {}
        super().__init__(**kwargs)

    def is_job_complete(self, i: int) -> bool:
        return i in self._rows

    def record_result(self, i: int, row: typedefs.Row) -> None:
        self._rows[i] = dict(row)

    def load_result(self, i: int) -> typedefs.Row:
        if i not in self._rows:
            raise exceptions.StopwatchError('job ' + str(i) + ' has no result')
        return self._rows[i]

    def describe(self) -> str:
        return 'in memory, lost on exit'
