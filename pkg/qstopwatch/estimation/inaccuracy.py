"""inaccuracy delta(P): the smallest interval width, centered on the true time,
that captures the estimate with probability at least P

the worst case over a fiducial interval of true times is reported
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing

import numpy as np

from .. import exceptions
from .. import spin
from . import mle
from . import povm

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..spec import typedefs

    Estimator = typing.Callable[
        [float, int, int, np.random.Generator], NDArray[np.float64]
    ]


logger = logging.getLogger(__name__)

min_trials = 100
default_bootstrap = 1000
confidence_level = 0.95


def erfinv(y: float) -> float:
    """inverse error function, polished by Newton steps on erf to 1e-12"""
    import scipy.special

    if not -1 < y < 1:
        raise exceptions.InvalidArgument('erfinv needs y in (-1, 1), got ' + str(y))
    x = float(scipy.special.erfinv(y))
    for _ in range(3):
        residual = math.erf(x) - y
        if abs(residual) < 1e-15:
            break
        x -= residual / (2 / math.sqrt(math.pi) * math.exp(-(x**2)))
    return x


def inaccuracy_analytic(n: int, P: float, F: float) -> float:
    """leading-order sqrt(8 / (n F)) erfinv(P); infinite when F = 0"""
    if n < 1:
        raise exceptions.InvalidArgument('n must be at least 1')
    if not 0 < P < 1:
        raise exceptions.InvalidArgument('P must be in (0, 1), got ' + str(P))
    if F < 0:
        raise exceptions.InvalidArgument('F must be non-negative')
    if F == 0:
        return math.inf
    return math.sqrt(8 / (n * F)) * erfinv(P)


def default_fiducial_interval(gamma: float = 0.0) -> tuple[float, float]:
    """[0.1, 2 pi - 0.1], shortened to [0.1, 5 / gamma] under dephasing"""
    upper = povm.two_pi - 0.1
    if gamma > 0:
        upper = min(5 / gamma, upper)
    return (0.1, upper)


def fiducial_grid(gamma: float = 0.0, points: int = 8) -> NDArray[np.float64]:
    low, high = default_fiducial_interval(gamma)
    return np.linspace(low, high, points)


@dataclasses.dataclass(frozen=True)
class InaccuracyReport:
    P: float
    delta: float
    ci_low: float
    ci_high: float
    trials: int
    n: int
    estimator: str = 'custom'
    T_worst: float = 0.0
    saturated: bool = False
    seed: int | None = None
    trial_rows: tuple[typedefs.Row, ...] = ()

    def __post_init__(self) -> None:
        if not 0 < self.P < 1:
            raise exceptions.InvalidArgument('P must be in (0, 1)')
        if not 0 <= self.delta <= povm.two_pi:
            raise exceptions.InvalidArgument('delta must be in [0, 2 pi]')
        assert self.ci_low <= self.delta <= self.ci_high

    def as_dict(self) -> typedefs.InaccuracyReportDict:
        return {
            'P': self.P,
            'delta': self.delta,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'trials': self.trials,
            'n': self.n,
            'estimator': self.estimator,
            'T_worst': self.T_worst,
            'saturated': self.saturated,
            'seed': self.seed,
        }


#
# # empirical inaccuracy
#


def coverage_width(errors: NDArray[np.float64], P: float) -> float:
    """smallest delta with fraction(errors <= delta / 2) >= P"""
    return 2 * float(np.quantile(errors, P, method='inverted_cdf'))


def _bootstrap_widths(
    errors: NDArray[np.float64],
    P: float,
    n_bootstrap: int,
    rng: np.random.Generator,
) -> NDArray[np.float64]:
    """percentile-bootstrap replicates of coverage_width

    the P-quantile of a resample is the sorted error at index j with
    probability Pr[Binomial(N, (j + 1) / N) >= ceil(P N)] - (same at j - 1),
    so replicates are drawn from that law without materializing resamples
    """
    import scipy.stats

    ordered = np.sort(errors)
    N = len(ordered)
    rank = math.ceil(P * N - 1e-12)
    cdf = scipy.stats.binom.sf(rank - 1, N, np.arange(1, N + 1) / N)
    cdf[-1] = 1.0
    index = np.searchsorted(cdf, rng.random(n_bootstrap), side='left')
    return 2 * ordered[np.minimum(index, N - 1)]


def inaccuracy_from_errors(
    errors: typing.Mapping[float, NDArray[np.float64]],
    P: float,
    n: int,
    *,
    n_bootstrap: int = default_bootstrap,
    rng: np.random.Generator | None = None,
    estimator: str = 'custom',
    seed: int | None = None,
) -> InaccuracyReport:
    """worst-case coverage width over true times, with a bootstrap interval

    errors maps each true time to the circular distances |T_hat - T|
    """
    if len(errors) == 0:
        raise exceptions.InvalidArgument('need errors for at least one T')
    if not 0 < P < 1:
        raise exceptions.InvalidArgument('P must be in (0, 1), got ' + str(P))
    if rng is None:
        rng = np.random.default_rng(seed)

    widths = {T: coverage_width(values, P) for T, values in errors.items()}
    T_worst = max(widths, key=lambda T: widths[T])
    delta = widths[T_worst]

    replicates = np.max(
        [
            _bootstrap_widths(np.asarray(values), P, n_bootstrap, rng)
            for values in errors.values()
        ],
        axis=0,
    )
    tail = (1 - confidence_level) / 2
    ci_low = min(float(np.quantile(replicates, tail)), delta)
    ci_high = max(float(np.quantile(replicates, 1 - tail)), delta)

    saturated = delta / 2 >= math.pi - 1e-12
    if saturated:
        logger.warning('inaccuracy saturated: P=%s is not reached below 2 pi', P)
        delta = povm.two_pi
        ci_high = povm.two_pi
    ci_high = min(ci_high, povm.two_pi)

    return InaccuracyReport(
        P=P,
        delta=delta,
        ci_low=ci_low,
        ci_high=ci_high,
        trials=min(len(values) for values in errors.values()),
        n=n,
        estimator=estimator,
        T_worst=float(T_worst),
        saturated=saturated,
        seed=seed,
    )


def inaccuracy_empirical(
    estimator: Estimator,
    n: int,
    T_grid: typing.Sequence[float],
    P: float,
    trials: int,
    seed: int | None,
    *,
    n_bootstrap: int = default_bootstrap,
    record_trials: bool = False,
    estimator_name: str = 'custom',
) -> InaccuracyReport:
    """Monte Carlo inaccuracy of estimator(T, n, trials, rng) -> T_hat array

    every true time draws from its own child of SeedSequence(seed), so the
    report does not depend on the order in which times are simulated
    """
    if trials < min_trials:
        raise exceptions.InvalidArgument(
            'need at least ' + str(min_trials) + ' trials, got ' + str(trials)
        )
    if len(T_grid) == 0:
        raise exceptions.InvalidArgument('T_grid is empty')

    children = np.random.SeedSequence(seed).spawn(len(T_grid) + 1)
    errors = {}
    rows: list[typedefs.Row] = []
    for T, child in zip(T_grid, children[1:]):
        estimates = np.asarray(
            estimator(float(T), n, trials, np.random.default_rng(child))
        )
        if estimates.shape != (trials,):
            raise exceptions.InvalidArgument(
                'estimator returned shape ' + str(estimates.shape)
            )
        distances = povm.circular_distance(estimates, T)
        errors[float(T)] = distances
        if record_trials:
            offset = len(rows)
            rows.extend(
                {
                    'trial_id': offset + i,
                    'T': float(T),
                    'T_hat': float(estimate),
                    'abs_err': float(distance),
                }
                for i, (estimate, distance) in enumerate(zip(estimates, distances))
            )

    report = inaccuracy_from_errors(
        errors,
        P,
        n,
        n_bootstrap=n_bootstrap,
        rng=np.random.default_rng(children[0]),
        estimator=estimator_name,
        seed=seed,
    )
    if record_trials:
        report = dataclasses.replace(report, trial_rows=tuple(rows))
    return report


#
# # estimators
#


def local_estimator(
    p: float | None = None,
    gamma: float | None = None,
    *,
    tau0: float = 0.0,
    s: float = 0.5,
    known_gamma: bool = True,
) -> Estimator:
    """qubit-by-qubit covariant measurements followed by maximum likelihood

    with p given, the likelihood is maximized over (T, p); with gamma given,
    p follows (1 + exp(-gamma (T + tau0))) / 2 and is pinned in the
    likelihood unless known_gamma is False
    """
    if (p is None) == (gamma is None):
        raise exceptions.InvalidArgument('give exactly one of p and gamma')

    def estimate(
        T: float, n: int, trials: int, rng: np.random.Generator
    ) -> NDArray[np.float64]:
        if p is not None:
            true_p = p
            pinned = None
        else:
            assert gamma is not None
            true_p = 0.5 * (1 + math.exp(-gamma * (T + tau0)))
            pinned = gamma if known_gamma else None
        outcomes = povm.draw_outcomes((trials, n), T, true_p, rng, s)
        T_hat, _ = mle.mle_estimate_batch(
            outcomes, s=s, gamma_known=pinned, tau0=tau0
        )
        return T_hat

    return estimate


def collective_estimator(p: float, s: float = 0.5) -> Estimator:
    """covariant measurement of the whole ensemble after Schur readout"""

    def estimate(
        T: float, n: int, trials: int, rng: np.random.Generator
    ) -> NDArray[np.float64]:
        state = spin.build_block_state(n, T, p, s)
        return povm.sample_collective(state, trials, rng)

    return estimate


def state_estimator(
    state: spin.BlockState, true_T: float
) -> Estimator:
    """covariant measurement of a fixed block state prepared at true_T"""

    def estimate(
        T: float, n: int, trials: int, rng: np.random.Generator
    ) -> NDArray[np.float64]:
        if abs(T - true_T) > 1e-12:
            raise exceptions.InvalidArgument(
                'state was prepared at T=' + str(true_T) + ', not ' + str(T)
            )
        return povm.sample_collective(state, trials, rng)

    return estimate
