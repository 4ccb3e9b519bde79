from __future__ import annotations

import os
import time
import typing

from .. import exceptions
from . import trackers

if typing.TYPE_CHECKING:
    from ..spec import typedefs


threads_variable = 'STOPWATCH_THREADS'

# row keys that flag a violated bound
violation_keys = ('satisfied', 'bound_satisfied')


def resolve_n_processes(n_processes: int | None = None) -> int | None:
    """worker count, capped by the STOPWATCH_THREADS environment variable"""
    cap = None
    raw = os.environ.get(threads_variable)
    if raw is not None and raw.strip() != '':
        try:
            cap = int(raw)
        except ValueError:
            cap = 0
        if cap < 1:
            raise exceptions.ConfigError(
                threads_variable + ' must be a positive integer, got ' + repr(raw)
            )
    if n_processes is not None and n_processes < 1:
        raise exceptions.ConfigError('n_processes must be positive')
    if cap is None:
        return n_processes
    elif n_processes is None:
        return cap
    else:
        return min(cap, n_processes)


def count_violations(rows: typing.Sequence[typedefs.Row]) -> int:
    return sum(
        any(key in row and not row[key] for key in violation_keys) for row in rows
    )


class Sweep:
    """grid of independent simulation jobs, one result row per job

    rows are collected by the orchestrating process and returned in job
    order, and every job draws its seed from the base seed and its own
    parameters, so results do not depend on the executor or worker count
    """

    name: str | None = None
    jobs: typing.Sequence[typedefs.JobData] | None = None

    #
    # # mandatory implementations
    #

    def execute_job(self, i: int) -> typedefs.Row:
        raise NotImplementedError()

    #
    # # __init__
    #

    def __init__(
        self,
        *,
        jobs: typing.Sequence[typedefs.JobData] | None = None,
        tracker: str | None = None,
        output_dir: str | None = None,
        seed: int = 0,
        name: str | None = None,
        styles: typing.Mapping[str, str] | None = None,
        verbose: bool = True,
    ) -> None:
        if jobs is not None:
            self.jobs = jobs
        if name is not None:
            self.name = name
        self.seed = seed
        if styles is None:
            styles = {}
        self.styles = styles
        self.verbose = verbose
        self.tracker = trackers.create_tracker(
            tracker=tracker,
            output_dir=output_dir,
            sweep=self,
        )

    #
    # # names
    #

    def get_job_list_name(self) -> str:
        if self.name is not None:
            return self.name
        else:
            return type(self).__name__

    def get_job_name(self, i: int) -> str:
        """<sweep>__<key>_<value>__..., used as the result file name"""
        tokens = []
        for key, value in sorted(self.get_job_data(i).items()):
            if not isinstance(value, (str, int, float, bool)):
                raise NotImplementedError(
                    'must define get_job_name() for this type of job_data'
                )
            tokens.append(key + '_' + str(value))
        return '__'.join([self.get_job_list_name()] + tokens)

    #
    # # job data
    #

    def get_n_jobs(self) -> int:
        if self.jobs is None:
            raise NotImplementedError('must specify jobs or implement get_n_jobs()')
        return len(self.jobs)

    def get_job_data(self, i: int) -> typedefs.JobData:
        if self.jobs is None:
            raise NotImplementedError('must specify jobs or implement get_job_data()')
        return self.jobs[i]

    def get_axes(self) -> dict[str, list[typing.Any]]:
        """distinct values of every job parameter, in order of appearance"""
        axes: dict[str, list[typing.Any]] = {}
        for i in range(self.get_n_jobs()):
            for key, value in self.get_job_data(i).items():
                values = axes.setdefault(key, [])
                if value not in values:
                    values.append(value)
        return axes

    def get_remaining_jobs(self) -> typing.Sequence[int]:
        return [
            i
            for i in range(self.get_n_jobs())
            if not self.tracker.is_job_complete(i)
        ]

    #
    # # hashes and seeds
    #

    def get_job_hash(self, i: int) -> str:
        import hashlib
        import json

        job_data_str = json.dumps(self.get_job_data(i), sort_keys=True)
        return hashlib.md5(job_data_str.encode()).hexdigest()

    def get_job_seed(self, i: int) -> int:
        """seed from (base seed, job hash), independent of execution order"""
        import numpy as np

        entropy = [self.seed, int(self.get_job_hash(i), 16)]
        return int(np.random.SeedSequence(entropy).generate_state(1)[0])

    #
    # # execution
    #

    def orchestrate_jobs(
        self,
        executor: typedefs.Executor = 'parallel',
        n_processes: int | None = None,
    ) -> list[typedefs.Row]:
        """run the remaining jobs and return every row in job order"""
        if executor not in ('serial', 'parallel'):
            raise exceptions.ConfigError('unknown executor: ' + str(executor))
        n_processes = resolve_n_processes(n_processes)

        remaining_jobs = self.get_remaining_jobs()
        if self.verbose:
            self.print_status(remaining_jobs, executor, n_processes)
        if len(remaining_jobs) == 0:
            if self.verbose:
                print('\nAll jobs already completed')
            return self.collect_rows()

        start_time = time.time()
        if executor == 'serial':
            self.serial_execute(jobs=remaining_jobs)
        else:
            self.parallel_execute(jobs=remaining_jobs, n_processes=n_processes)

        rows = self.collect_rows()
        if self.verbose:
            self.print_conclusion(start_time, time.time(), remaining_jobs, rows)
        return rows

    def serial_execute(self, jobs: typing.Sequence[int]) -> None:
        import tqdm

        for job in tqdm.tqdm(
            jobs, colour=self.styles.get('content'), disable=not self.verbose
        ):
            self.tracker.record_result(job, self.execute_job(job))

    def parallel_execute(
        self,
        jobs: typing.Sequence[int],
        n_processes: int | None = None,
    ) -> None:
        import concurrent.futures
        import tqdm

        # rows are recorded here, never inside a worker
        with concurrent.futures.ProcessPoolExecutor(n_processes) as executor:
            futures = {executor.submit(self.execute_job, job): job for job in jobs}
            with tqdm.tqdm(
                total=len(jobs),
                colour=self.styles.get('content'),
                disable=not self.verbose,
            ) as pbar:
                for future in concurrent.futures.as_completed(futures):
                    self.tracker.record_result(futures[future], future.result())
                    pbar.update(1)

    def collect_rows(self) -> list[typedefs.Row]:
        return [
            self.tracker.load_result(i)
            for i in range(self.get_n_jobs())
            if self.tracker.is_job_complete(i)
        ]

    #
    # # summary
    #

    def print_header(self, text: str) -> None:
        import toolstr

        toolstr.print_header(
            text,
            text_style=self.styles.get('metavar'),
            style=self.styles.get('content'),
        )

    def print_bullet(self, key: str, value: typing.Any, **kwargs: typing.Any) -> None:
        import toolstr

        toolstr.print_bullet(key=key, value=value, styles=self.styles, **kwargs)

    def print_status(
        self,
        remaining_jobs: typing.Sequence[int],
        executor: str,
        n_processes: int | None,
    ) -> None:
        import toolstr
        import tooltime

        toolstr.print_text_box(
            'Sweep ' + self.get_job_list_name(),
            text_style=self.styles.get('metavar'),
            style=self.styles.get('content'),
        )
        print()
        self.print_header('Grid')
        for key, values in sorted(self.get_axes().items()):
            if len(values) == 1:
                self.print_bullet(key=key, value=values[0])
            else:
                self.print_bullet(key=key, value=str(len(values)) + ' values')
        print()
        self.print_header('Execution')
        self.print_bullet(key='jobs', value=self.get_n_jobs())
        self.print_bullet(key='remaining', value=len(remaining_jobs))
        self.print_bullet(key='base seed', value=self.seed)
        self.print_bullet(key='executor', value=executor)
        if executor == 'parallel':
            self.print_bullet(key='processes', value=n_processes or os.cpu_count())
        self.print_bullet(key='tracker', value=self.tracker.describe())
        self.tracker.print_status()
        self.print_bullet(
            key='start time',
            value=tooltime.timestamp_to_iso_pretty(time.time()),
        )
        print()

    def print_conclusion(
        self,
        start_time: int | float,
        end_time: int | float,
        jobs: typing.Sequence[int],
        rows: typing.Sequence[typedefs.Row],
    ) -> None:
        import toolstr
        import tooltime

        print()
        self.print_header('Summary')
        self.print_bullet(
            key='end time', value=tooltime.timestamp_to_iso_pretty(end_time)
        )
        done_jobs = sum(self.tracker.is_job_complete(i) for i in jobs)
        duration = max(end_time - start_time, 1e-9)
        self.print_bullet(
            'duration', toolstr.format(duration, decimals=3) + ' seconds'
        )
        self.print_bullet('jobs completed', done_jobs)
        if done_jobs > 0:
            self.print_bullet(
                'seconds per job', toolstr.format(duration / done_jobs, decimals=3)
            )
        violations = count_violations(rows)
        if violations > 0:
            self.print_bullet('rows violating a bound', violations)
