from __future__ import annotations

import json
import logging
import os
import typing

from ... import exceptions
from . import tracker

if typing.TYPE_CHECKING:
    from ...spec import typedefs


logger = logging.getLogger(__name__)


def _to_builtin(value: typing.Any) -> typing.Any:
    # numpy scalars in rows
    if hasattr(value, 'item'):
        return value.item()
    raise TypeError('cannot store ' + type(value).__name__ + ' in a result file')


class FileTracker(tracker.Tracker):
    """one JSON file per job, named after the job, so sweeps can resume"""

    output_dir: str

    def __init__(self, output_dir: str, **kwargs: typing.Any) -> None:
        self.output_dir = os.path.abspath(os.path.expanduser(output_dir))
        if not os.path.isdir(self.output_dir):
            logger.info('creating output_dir %s', self.output_dir)
            os.makedirs(self.output_dir)
        super().__init__(**kwargs)

    #
    # # interface methods
    #

    def is_job_complete(self, i: int) -> bool:
        return os.path.exists(self.get_job_output_path(i))

    def record_result(self, i: int, row: typedefs.Row) -> None:
        path = self.get_job_output_path(i)
        temporary = path + '.tmp'
        with open(temporary, 'w') as f:
            json.dump(dict(row), f, sort_keys=True, default=_to_builtin)
        os.replace(temporary, path)

    def load_result(self, i: int) -> typedefs.Row:
        path = self.get_job_output_path(i)
        if not os.path.isfile(path):
            raise exceptions.StopwatchError('job ' + str(i) + ' has no result')
        with open(path) as f:
            row: typedefs.Row = json.load(f)
        return row

    #
    # # filesystem-specific methods
    #

    def get_job_output_filename(self, i: int) -> str:
        return self.sweep.get_job_name(i) + '.json'

    def get_job_output_path(self, i: int) -> str:
        return os.path.join(self.output_dir, self.get_job_output_filename(i))

    def describe(self) -> str:
        return 'one json file per job in ' + self.output_dir

    def print_status(self) -> None:
        import toolstr

        total_size = 0
        for i in range(self.sweep.get_n_jobs()):
            path = self.get_job_output_path(i)
            if os.path.isfile(path):
                total_size += os.path.getsize(path)
        toolstr.print_bullet(
            key='stored results', value=toolstr.format_nbytes(total_size)
        )
