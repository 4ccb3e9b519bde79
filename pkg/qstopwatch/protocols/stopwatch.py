"""coherent stopwatch: the clock records each event, a small memory holds the
running total between events, and a single measurement reads the sum
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing

import numpy as np

from .. import clock
from .. import compression
from .. import exceptions
from .. import spin
from ..estimation import inaccuracy
from ..estimation import povm
from . import schedule as schedule_module

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..spec import typedefs


logger = logging.getLogger(__name__)


def damp_memory(
    state: spin.BlockState,
    rate: float,
    duration: float,
    model: typedefs.LagModel = 'uniform',
) -> spin.BlockState:
    """phase damping of the stored levels while the memory idles

    uniform: every coherence decays by exp(-rate * duration)
    quadratic: element (m, m') decays by exp(-rate * duration * (m - m')^2 / 2)
    """
    if rate < 0 or duration < 0:
        raise exceptions.InvalidArgument('rate and duration must be non-negative')
    if rate == 0 or duration == 0:
        return state

    sectors = []
    for sector in state.sectors:
        m = spin.m_values(sector.J)
        gap = np.subtract.outer(m, m)
        if model == 'uniform':
            factors = np.where(gap == 0, 1.0, math.exp(-rate * duration))
        elif model == 'quadratic':
            factors = np.exp(-rate * duration * gap**2 / 2)
        else:
            raise exceptions.InvalidArgument('unknown lag model: ' + str(model))
        block = spin.SpinBlock(J=sector.J, matrix=sector.block.matrix * factors)
        sectors.append(dataclasses.replace(sector, block=block))
    return dataclasses.replace(state, sectors=tuple(sectors))


def ideal_final_state(
    n: int, schedule: schedule_module.EventSchedule, gamma: float, p0: float, s: float
) -> spin.BlockState:
    """uncompressed clock after the whole schedule, lags excluded"""
    contrast = (2 * p0 - 1) * math.exp(-gamma * schedule.total)
    return spin.build_block_state(n, schedule.total, 0.5 * (1 + contrast), s)


def _check_memory(encoded: compression.EncodedState) -> None:
    modal = encoded.records[int(np.argmax(encoded.weights))]
    if modal.memory_qubits < 1:
        raise exceptions.ConfigError(
            'window policy ' + encoded.policy
            + ' leaves fewer than one memory qubit for spin ' + str(modal.J)
        )


def _sample_memory(
    encoded: compression.EncodedState, trials: int, rng: np.random.Generator
) -> NDArray[np.float64]:
    weights = np.clip(np.array(encoded.weights), 0, None)
    weights = weights / weights.sum()
    chosen = rng.choice(len(encoded.records), size=trials, p=weights)
    estimates = np.empty(trials)
    for index in np.unique(chosen):
        mask = chosen == index
        record = encoded.records[index]
        if not record.is_contiguous():
            raise exceptions.InvalidArgument(
                'memory readout needs contiguous levels, spin ' + str(record.J)
                + ' keeps ' + str(record.kept_m)
            )
        estimates[mask] = povm.sample_block(record.kept_block, int(mask.sum()), rng)
    return estimates


def _bounded_report(
    errors: typing.Mapping[float, NDArray[np.float64]],
    P: float,
    epsilon: float,
    n: int,
    n_bootstrap: int,
    rng: np.random.Generator,
    seed: int | None,
) -> inaccuracy.InaccuracyReport:
    confidence = P + epsilon
    if confidence >= 1:
        logger.warning(
            'compression error %.3g leaves no confidence above P=%s', epsilon, P
        )
        return inaccuracy.InaccuracyReport(
            P=P,
            delta=povm.two_pi,
            ci_low=povm.two_pi,
            ci_high=povm.two_pi,
            trials=min(len(values) for values in errors.values()),
            n=n,
            estimator='stopwatch-bound',
            saturated=True,
            seed=seed,
        )
    report = inaccuracy.inaccuracy_from_errors(
        errors,
        confidence,
        n,
        n_bootstrap=n_bootstrap,
        rng=rng,
        estimator='stopwatch-bound',
        seed=seed,
    )
    return dataclasses.replace(report, P=P)


def run_stopwatch(
    n: int,
    schedule: schedule_module.EventSchedule,
    gamma: float = 0.0,
    window_policy: str | compression.WindowPolicy = 'asymptotic',
    seed: int | None = None,
    *,
    P: float = 0.9,
    trials: int = 10000,
    p0: float = 1.0,
    s: float = 0.5,
    compress: bool = True,
    final_compression: bool = True,
    readout: typedefs.Readout = 'decode',
    n_bootstrap: int = inaccuracy.default_bootstrap,
) -> schedule_module.ProtocolResult:
    """simulate the k-event stopwatch and estimate the total duration

    after every event the clock is compressed into the memory; before the
    next event it is decoded back onto the clock qubits. readouts:
    - decode: measure the decoded clock
    - memory: measure the memory register; its outcome density equals the
      decoded clock's, so both readouts agree up to sampling
    - bound: measure the uncompressed clock and report its width at
      confidence P + ideal_distance, which no state within that trace
      distance of the ideal one can exceed
    """
    n = spin.validate_qubit_count(n, minimum=2)
    if gamma < 0:
        raise exceptions.InvalidArgument('gamma must be non-negative')
    if readout not in ('decode', 'memory', 'bound'):
        raise exceptions.InvalidArgument('unknown readout: ' + str(readout))
    if readout == 'memory':
        if not (compress and final_compression):
            raise exceptions.ConfigError('memory readout needs a final compression')
        policy = compression.parse_window_policy(window_policy)
        if policy.kind == 'explicit':
            assert policy.kept_m is not None
            if not compression.levels_contiguous(sorted(policy.kept_m, reverse=True)):
                raise exceptions.InvalidArgument(
                    'memory readout needs a contiguous explicit window'
                )

    state = spin.build_block_state(n, 0.0, p0, s)
    step_errors = []
    memory_peak = 0
    encoded: compression.EncodedState | None = None
    for j, duration in enumerate(schedule.durations):
        state = clock.dephase_block_state(state, duration, gamma)

        last = j == schedule.k - 1
        if compress and (not last or final_compression):
            decoded, encoded = compression.compress(state, window_policy)
            _check_memory(encoded)
            step_errors.append(compression.block_trace_distance(state, decoded))
            memory_peak = max(memory_peak, encoded.memory_qubits_total)
            state = decoded

        rate, lag = schedule.lag(j)
        state = damp_memory(state, rate, lag, schedule.lag_model)

    total = float(sum(step_errors))
    ideal = ideal_final_state(n, schedule, gamma, p0, s)
    ideal_distance = compression.block_trace_distance(state, ideal)
    logger.debug(
        'stopwatch n=%d k=%d: compression error %.3e, distance to ideal %.3e',
        n,
        schedule.k,
        total,
        ideal_distance,
    )

    rng = np.random.default_rng(seed)
    if readout == 'memory':
        assert encoded is not None
        estimates = _sample_memory(encoded, trials, rng)
    elif readout == 'bound':
        estimates = povm.sample_collective(ideal, trials, rng)
    else:
        estimates = povm.sample_collective(state, trials, rng)
    errors = {schedule.total: povm.circular_distance(estimates, schedule.total)}
    if readout == 'bound':
        report = _bounded_report(errors, P, ideal_distance, n, n_bootstrap, rng, seed)
    else:
        report = inaccuracy.inaccuracy_from_errors(
            errors,
            P,
            n,
            n_bootstrap=n_bootstrap,
            rng=rng,
            estimator='stopwatch-' + readout,
            seed=seed,
        )

    return schedule_module.ProtocolResult(
        final_state=state,
        inaccuracy=report,
        compression_error_total=total,
        memory_qubits_peak=memory_peak,
        ideal_distance=ideal_distance,
        step_errors=tuple(step_errors),
        estimates=estimates,
    )
