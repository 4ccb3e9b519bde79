"""incoherent competitor: every event is timed by a freshly prepared clock and
the individual estimates are summed classically
"""

from __future__ import annotations

import math
import typing

import numpy as np

from .. import exceptions
from .. import spin
from ..estimation import inaccuracy
from ..estimation import mle
from ..estimation import povm
from . import schedule as schedule_module

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..spec import typedefs


def _local_round(
    n: int,
    T: float,
    p: float,
    p0: float,
    gamma: float,
    trials: int,
    rng: np.random.Generator,
    s: float,
) -> NDArray[np.float64]:
    outcomes = povm.draw_outcomes((trials, n), T, p, rng, s)
    if gamma > 0 and p0 > 0.5:
        # a preparation with 2 p0 - 1 = exp(-gamma tau0) looks like an older clock
        tau0 = -math.log(2 * p0 - 1) / gamma
        T_hat, _ = mle.mle_estimate_batch(outcomes, s=s, gamma_known=gamma, tau0=tau0)
    elif p0 == 1 and gamma == 0:
        T_hat, _ = mle.mle_estimate_batch(outcomes, s=s, gamma_known=0.0)
    else:
        T_hat, _ = mle.mle_estimate_batch(outcomes, s=s)
    return T_hat


def run_incoherent(
    n: int,
    schedule: schedule_module.EventSchedule,
    gamma: float = 0.0,
    seed: int | None = None,
    *,
    P: float = 0.9,
    trials: int = 10000,
    p0: float = 1.0,
    s: float = 0.5,
    measurement: typedefs.IncoherentMeasurement = 'collective',
    n_bootstrap: int = inaccuracy.default_bootstrap,
) -> schedule_module.ProtocolResult:
    """k independent rounds, each on n fresh qubits; total estimate is the sum

    measurement 'collective' applies the covariant measurement to the whole
    ensemble, 'local' measures qubit by qubit and maximizes the likelihood
    """
    n = spin.validate_qubit_count(n, minimum=2)
    if gamma < 0:
        raise exceptions.InvalidArgument('gamma must be non-negative')
    if measurement not in ('collective', 'local'):
        raise exceptions.InvalidArgument('unknown measurement: ' + str(measurement))

    children = np.random.SeedSequence(seed).spawn(schedule.k + 1)
    total_estimate = np.zeros(trials)
    state: spin.BlockState | None = None
    for duration, child in zip(schedule.durations, children[1:]):
        rng = np.random.default_rng(child)
        p = 0.5 * (1 + (2 * p0 - 1) * math.exp(-gamma * duration))
        if measurement == 'collective':
            state = spin.build_block_state(n, duration, p, s)
            estimates = povm.sample_collective(state, trials, rng)
        else:
            estimates = _local_round(n, duration, p, p0, gamma, trials, rng, s)
        total_estimate = total_estimate + estimates

    total_estimate = povm.wrap_phase(total_estimate)

    report = inaccuracy.inaccuracy_from_errors(
        {schedule.total: povm.circular_distance(total_estimate, schedule.total)},
        P,
        n,
        n_bootstrap=n_bootstrap,
        rng=np.random.default_rng(children[0]),
        estimator='incoherent-' + measurement,
        seed=seed,
    )
    return schedule_module.ProtocolResult(
        final_state=state,
        inaccuracy=report,
        compression_error_total=0.0,
        memory_qubits_peak=0,
        estimates=total_estimate,
    )
