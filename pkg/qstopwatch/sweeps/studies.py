"""sweeps over the parameters of the compression, bound, and stopwatch studies"""

from __future__ import annotations

import itertools
import math
import typing

from .. import compression
from .. import protocols
from . import sweep_class

if typing.TYPE_CHECKING:
    from ..spec import typedefs


def grid_jobs(**axes: typing.Sequence[typing.Any]) -> list[dict[str, typing.Any]]:
    """cartesian product of the axes, one dict per grid point"""
    keys = sorted(axes)
    return [
        dict(zip(keys, values))
        for values in itertools.product(*(axes[key] for key in keys))
    ]


class CompressionSweep(sweep_class.Sweep):
    """compression error of the pure or noisy clock for each (n, p, T, window)"""

    def execute_job(self, i: int) -> typedefs.Row:
        job = self.get_job_data(i)
        report = compression.evaluate_compression(
            n=job['n'],
            T=job.get('T', 0.0),
            p=job.get('p', 1.0),
            policy=job.get('window_policy', 'asymptotic'),
        )
        return dict(report.as_dict())


class BoundsSweep(sweep_class.Sweep):
    """exact single-sector projection error against its analytic bound"""

    def execute_job(self, i: int) -> typedefs.Row:
        job = self.get_job_data(i)
        J = job['J']
        p = job['p']
        exact = compression.exact_projection_error(J, p)
        bound = compression.projection_error_bound(J, p)
        return {
            'J': J,
            'p': p,
            'exact': exact,
            'bound': bound,
            'satisfied': exact <= bound,
        }


class StopwatchSweep(sweep_class.Sweep):
    """coherent and incoherent inaccuracy for each (n, k, T, gamma, P)"""

    def execute_job(self, i: int) -> typedefs.Row:
        job = self.get_job_data(i)
        n = job['n']
        k = job['k']
        T = job['T']
        gamma = job.get('gamma', 0.0)
        P = job.get('P', 0.9)
        trials = job.get('trials', 10000)
        seed = self.get_job_seed(i)

        schedule = protocols.uniform_schedule(T, k)
        coherent = protocols.run_stopwatch(
            n,
            schedule,
            gamma,
            job.get('window_policy', 'asymptotic'),
            seed,
            P=P,
            trials=trials,
        )
        incoherent = protocols.run_incoherent(
            n, schedule, gamma, seed + 1, P=P, trials=trials
        )
        delta_coh = coherent.inaccuracy.delta
        delta_inc = incoherent.inaccuracy.delta
        return {
            'n': n,
            'k': k,
            'T': T,
            'gamma': gamma,
            'P': P,
            'delta_coh': delta_coh,
            'delta_inc': delta_inc,
            'ratio': delta_coh / delta_inc if delta_inc > 0 else math.inf,
            'eps_total': coherent.compression_error_total,
            'bound': compression.overall_error_bound(n, k, T, gamma),
            'memory_qubits': coherent.memory_qubits_peak,
        }
