"""when does recording k events coherently beat timing them one by one

with the dephasing rate known, a clock run for T carries Fisher information
F(T) = fisher_noisy_known(gamma, T) per qubit. the coherent protocol measures
once after T, the incoherent one sums k estimates taken after T / k each
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing

import numpy as np

from .. import exceptions
from ..estimation import fisher
from ..estimation import inaccuracy
from ..estimation import povm
from . import incoherent
from . import schedule as schedule_module

if typing.TYPE_CHECKING:
    from typing_extensions import Literal

    from ..spec import typedefs


logger = logging.getLogger(__name__)

default_T_grid = tuple(float(T) for T in np.linspace(0.1, 3.0, 30))
relative_slack = 1e-12


@dataclasses.dataclass(frozen=True)
class AdvantageResult:
    ratio: float
    delta_coherent: float
    delta_incoherent: float
    n: int
    k: int
    T: float
    gamma: float
    P: float
    mode: str
    epsilon: float = 0.0

    @property
    def rescaled_coherent(self) -> float:
        """sqrt(n) delta, independent of n at leading order"""
        return math.sqrt(self.n) * self.delta_coherent

    @property
    def rescaled_incoherent(self) -> float:
        return math.sqrt(self.n) * self.delta_incoherent

    def as_row(self) -> dict[str, typing.Any]:
        return {
            'n': self.n,
            'k': self.k,
            'T': self.T,
            'gamma': self.gamma,
            'P': self.P,
            'mode': self.mode,
            'epsilon': self.epsilon,
            'delta_coh': self.delta_coherent,
            'delta_inc': self.delta_incoherent,
            'ratio': self.ratio,
            'delta_star_coh': self.rescaled_coherent,
            'delta_star_inc': self.rescaled_incoherent,
        }


def _check_inputs(k: int, T: float, gamma: float) -> None:
    if k < 1:
        raise exceptions.InvalidArgument('k must be at least 1')
    if T <= 0:
        raise exceptions.InvalidArgument('T must be positive')
    if gamma < 0:
        raise exceptions.InvalidArgument('gamma must be non-negative')


def advantage_ratio(
    n: int,
    k: int,
    T: float,
    gamma: float,
    P: float = 0.9,
    mode: Literal['analytic', 'simulated'] = 'analytic',
    *,
    trials: int = 10000,
    seed: int | None = None,
    epsilon: float = 0.0,
) -> AdvantageResult:
    """delta_incoherent / delta_coherent for k events of total length T

    analytic: sqrt(k F(T) / F(T / k)) from the leading-order inaccuracies
    simulated: both protocols with qubit-by-qubit measurements and maximum
    likelihood; the coherent protocol keeps its qubits in an ideal memory

    epsilon is the trace distance of the stored state from the ideal one;
    the analytic coherent inaccuracy is then taken at confidence P + epsilon
    and saturates at 2 pi once that reaches 1
    """
    _check_inputs(k, T, gamma)
    if epsilon < 0:
        raise exceptions.InvalidArgument('epsilon must be non-negative')
    if epsilon > 0 and mode != 'analytic':
        raise exceptions.InvalidArgument('epsilon applies to the analytic mode')

    if mode == 'analytic':
        if P + epsilon >= 1:
            delta_coherent = povm.two_pi
        else:
            delta_coherent = inaccuracy.inaccuracy_analytic(
                n, P + epsilon, fisher.fisher_noisy_known(gamma, T)
            )
        delta_incoherent = math.sqrt(k) * inaccuracy.inaccuracy_analytic(
            n, P, fisher.fisher_noisy_known(gamma, T / k)
        )
    elif mode == 'simulated':
        children = np.random.SeedSequence(seed).spawn(2)
        coherent_seed = int(children[0].generate_state(1)[0])
        incoherent_seed = int(children[1].generate_state(1)[0])
        coherent_report = inaccuracy.inaccuracy_empirical(
            inaccuracy.local_estimator(gamma=gamma),
            n,
            [T],
            P,
            trials,
            coherent_seed,
            estimator_name='coherent-local',
        )
        incoherent_result = incoherent.run_incoherent(
            n,
            schedule_module.uniform_schedule(T, k),
            gamma,
            incoherent_seed,
            P=P,
            trials=trials,
            measurement='local',
        )
        delta_coherent = coherent_report.delta
        delta_incoherent = incoherent_result.inaccuracy.delta
    else:
        raise exceptions.InvalidArgument('unknown mode: ' + str(mode))

    return AdvantageResult(
        ratio=delta_incoherent / delta_coherent,
        delta_coherent=delta_coherent,
        delta_incoherent=delta_incoherent,
        n=n,
        k=k,
        T=T,
        gamma=gamma,
        P=P,
        mode=mode,
        epsilon=epsilon,
    )


def advantage_surface(
    gamma: float,
    ks: typing.Sequence[int],
    T_grid: typing.Sequence[float] = default_T_grid,
    *,
    n: int = 1000,
    P: float = 0.9,
) -> list[typedefs.Row]:
    """analytic ratios and rescaled inaccuracies over a (k, T) grid"""
    if gamma <= 0:
        raise exceptions.InvalidArgument('surface needs gamma > 0')
    return [
        advantage_ratio(n, k, float(T), gamma, P).as_row()
        for k in ks
        for T in T_grid
    ]


#
# # crossover
#


def crossover_condition(k: int, T: float, gamma: float) -> bool:
    """k F(T) >= F(T / k): coherent recording is at least as good"""
    _check_inputs(k, T, gamma)
    if gamma * T <= 0:
        raise exceptions.InvalidArgument('crossover needs gamma T > 0')
    coherent = k * fisher.fisher_noisy_known(gamma, T)
    split = fisher.fisher_noisy_known(gamma, T / k)
    return coherent >= split * (1 - relative_slack)


@dataclasses.dataclass(frozen=True)
class CrossoverReport:
    rows: tuple[typedefs.Row, ...]
    counterexamples: tuple[typedefs.Row, ...]

    @property
    def monotone(self) -> bool:
        return len(self.counterexamples) == 0


def crossover_sweep(
    ks: typing.Sequence[int],
    T_grid: typing.Sequence[float],
    gammas: typing.Sequence[float],
) -> CrossoverReport:
    """evaluate the crossover condition and flag any loss of advantage in k

    a counterexample is a (gamma, T, k) where the condition fails although it
    held at some smaller k
    """
    rows = []
    counterexamples = []
    ordered = sorted(ks)
    for gamma in gammas:
        for T in T_grid:
            first_true: int | None = None
            for k in ordered:
                holds = crossover_condition(k, float(T), float(gamma))
                row = {'gamma': float(gamma), 'T': float(T), 'k': k, 'holds': holds}
                rows.append(row)
                # k = 1 holds with equality and starts no advantage region
                if holds and first_true is None and k > 1:
                    first_true = k
                elif not holds and first_true is not None:
                    counterexamples.append(dict(row, first_true=first_true))
                    logger.warning(
                        'advantage lost at k=%d (held at k=%d) for gamma=%g T=%g',
                        k,
                        first_true,
                        gamma,
                        T,
                    )
    return CrossoverReport(rows=tuple(rows), counterexamples=tuple(counterexamples))
