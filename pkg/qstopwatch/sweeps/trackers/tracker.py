from __future__ import annotations

import typing

if typing.TYPE_CHECKING:
    from .. import sweep_class
    from ...spec import typedefs


class Tracker:
    """where the rows of finished jobs live"""

    def __init__(self, sweep: sweep_class.Sweep, **kwargs: typing.Any):
        self.sweep = sweep

    def is_job_complete(self, i: int) -> bool:
        raise NotImplementedError('is_job_complete() not implemented')

    def record_result(self, i: int, row: typedefs.Row) -> None:
        raise NotImplementedError('record_result() not implemented')

    def load_result(self, i: int) -> typedefs.Row:
        raise NotImplementedError('load_result() not implemented')

    def describe(self) -> str:
        return type(self).__name__

    def print_status(self) -> None:
        pass
