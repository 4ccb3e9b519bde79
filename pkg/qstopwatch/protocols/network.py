"""sequential frequency network: a compressed clock register visits k nodes,
each node imprints the phase omega_j T0, and the last node reads the sum
"""

from __future__ import annotations

import dataclasses
import logging
import typing

import numpy as np

from .. import compression
from .. import exceptions
from .. import spin
from ..estimation import inaccuracy
from ..estimation import povm


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class NetworkResult:
    estimate: float
    true_total: float
    inaccuracy: inaccuracy.InaccuracyReport
    qubit_cost: int
    baseline_cost: int
    compression_error_total: float
    ambiguous: bool


def network_communication_cost(
    k: int,
    n: int,
    window_policy: str | compression.WindowPolicy = 'asymptotic',
    s: float = 0.5,
) -> tuple[int, int]:
    """(compressed, uncompressed) qubits sent along a chain of k nodes

    the pure clock occupies the top spin sector only, so each hop carries
    one window register and no spin register
    """
    if k < 1:
        raise exceptions.InvalidArgument('k must be at least 1')
    n = spin.validate_qubit_count(n, minimum=2)
    window = compression.projection_window(n / 2, s, window_policy)
    return k * window.memory_qubits, k * n


def network_sequential(
    omegas: typing.Sequence[float],
    T0: float,
    n: int,
    seed: int | None = None,
    *,
    P: float = 0.9,
    trials: int = 10000,
    window_policy: str | compression.WindowPolicy = 'asymptotic',
    s: float = 0.5,
    n_bootstrap: int = inaccuracy.default_bootstrap,
) -> NetworkResult:
    """estimate sum_j omega_j from one measurement after the last node

    every node rotates the received register by omega_j T0 and compresses it
    before forwarding; the total phase is read modulo 2 pi, so a total
    outside [0, 2 pi) is flagged ambiguous
    """
    if len(omegas) < 1:
        raise exceptions.InvalidArgument('need at least one node')
    if T0 <= 0:
        raise exceptions.InvalidArgument('T0 must be positive')
    n = spin.validate_qubit_count(n, minimum=2)

    state = spin.build_block_state(n, 0.0, 1.0, s)
    qubit_cost = 0
    errors = []
    for omega in omegas:
        state = spin.rotate_phase(state, omega * T0)
        decoded, encoded = compression.compress(state, window_policy)
        errors.append(compression.block_trace_distance(state, decoded))
        qubit_cost += encoded.memory_qubits_total
        state = decoded

    true_phase = float(sum(omegas)) * T0
    ambiguous = not 0 <= true_phase < povm.two_pi
    if ambiguous:
        logger.warning(
            'total phase %.4f leaves [0, 2 pi); estimate is known modulo 2 pi / T0',
            true_phase,
        )

    rng = np.random.default_rng(seed)
    phases = povm.sample_collective(state, trials, rng)
    report = inaccuracy.inaccuracy_from_errors(
        {true_phase: povm.circular_distance(phases, true_phase)},
        P,
        n,
        n_bootstrap=n_bootstrap,
        rng=rng,
        estimator='network-sequential',
        seed=seed,
    )
    mean_phase = float(np.angle(np.mean(np.exp(1j * phases))))
    return NetworkResult(
        estimate=float(povm.wrap_phase(mean_phase)) / T0,
        true_total=float(sum(omegas)),
        inaccuracy=report,
        qubit_cost=qubit_cost,
        baseline_cost=len(omegas) * n,
        compression_error_total=float(sum(errors)),
        ambiguous=ambiguous,
    )
