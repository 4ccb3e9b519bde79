"""maximum-likelihood time estimates from single-qubit measurement outcomes

the likelihood of outcomes tau_i is prod_i (1 + c cos(tau_i - T)) / 2 pi with
visibility c = 2 (2p - 1) sqrt(s (1 - s)); with a known dephasing rate the
visibility is tied to T through 2p - 1 = exp(-gamma (T + tau0))
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing

import numpy as np

from .. import exceptions
from . import povm

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


logger = logging.getLogger(__name__)

# p_hat below this is indistinguishable from the flat likelihood at p = 1/2
plateau_threshold = 0.501
max_visibility_margin = 1e-12


@dataclasses.dataclass(frozen=True)
class MLEResult:
    T_hat: float
    p_hat: float
    fallback: bool
    log_likelihood: float


def circular_mean(outcomes: NDArray[np.float64]) -> tuple[float, float]:
    """mean direction in [0, 2 pi) and mean resultant length"""
    resultant = np.mean(np.exp(1j * np.asarray(outcomes)), axis=-1)
    return float(povm.wrap_phase(np.angle(resultant))), float(np.abs(resultant))


def log_likelihood(
    outcomes: NDArray[np.float64], T: float, p: float, s: float = 0.5
) -> float:
    c = povm.visibility(p, s)
    values = 1 + c * np.cos(outcomes - T)
    if np.any(values <= 0):
        return -math.inf
    return float(np.sum(np.log(values)))


def _visibility_to_p(c: float, s: float) -> float:
    return 0.5 + c / (4 * math.sqrt(s * (1 - s)))


def _known_gamma_visibility(
    T: NDArray[np.float64] | float, gamma: float, tau0: float, s: float
) -> NDArray[np.float64]:
    # p <= 1 even when a trial wanders below T = -tau0
    contrast = np.minimum(np.exp(-gamma * (np.asarray(T) + tau0)), 1.0)
    return 2 * contrast * math.sqrt(s * (1 - s))


def mle_estimate(
    sample: povm.MeasurementSample,
    gamma_known: float | None = None,
    tau0: float = 0.0,
) -> MLEResult:
    """maximize the likelihood over T in [0, 2 pi) and p in [1/2, 1]

    with gamma_known, p is pinned to (1 + exp(-gamma (T + tau0))) / 2 and only
    T is optimized
    """
    outcomes = np.asarray(sample.outcomes, dtype=float)
    if len(outcomes) < 2:
        raise exceptions.InvalidArgument('need at least 2 outcomes')
    s = sample.s

    if gamma_known is not None:
        return _known_gamma_estimate(outcomes, gamma_known, tau0, s)

    import scipy.optimize

    T0, resultant = circular_mean(outcomes)
    c_max = povm.visibility(1.0, s) * (1 - max_visibility_margin)
    c0 = min(2 * resultant, 0.99 * c_max)

    def objective(x: NDArray[np.float64]) -> tuple[float, NDArray[np.float64]]:
        T, c = x
        cosines = np.cos(outcomes - T)
        sines = np.sin(outcomes - T)
        denominator = 1 + c * cosines
        value = -np.sum(np.log(denominator))
        gradient = -np.array(
            [np.sum(c * sines / denominator), np.sum(cosines / denominator)]
        )
        return float(value), gradient

    best = None
    for offset in (0.0, -0.5, 0.5):
        start = np.array([T0 + offset, max(c0, 1e-3)])
        result = scipy.optimize.minimize(
            objective,
            start,
            jac=True,
            method='L-BFGS-B',
            bounds=[(T0 - math.pi, T0 + math.pi), (0.0, c_max)],
            options={'ftol': 1e-15, 'gtol': 1e-10, 'maxiter': 500},
        )
        if best is None or result.fun < best.fun:
            best = result
    assert best is not None

    T_hat, c_hat = _newton_polish(outcomes, float(best.x[0]), float(best.x[1]), c_max)
    p_hat = _visibility_to_p(c_hat, s)

    if p_hat < plateau_threshold:
        logger.info(
            'likelihood plateau (p_hat=%.4f), using the circular mean', p_hat
        )
        return MLEResult(
            T_hat=T0,
            p_hat=p_hat,
            fallback=True,
            log_likelihood=log_likelihood(outcomes, T0, 0.5, s),
        )

    T_hat = float(povm.wrap_phase(T_hat))
    return MLEResult(
        T_hat=T_hat,
        p_hat=p_hat,
        fallback=False,
        log_likelihood=log_likelihood(outcomes, T_hat, p_hat, s),
    )


def _newton_polish(
    outcomes: NDArray[np.float64],
    T: float,
    c: float,
    c_max: float,
    iterations: int = 20,
) -> tuple[float, float]:
    """projected Newton steps on (T, c), holding c when it sits on a bound"""
    for _ in range(iterations):
        cosines = np.cos(outcomes - T)
        sines = np.sin(outcomes - T)
        denominator = 1 + c * cosines
        grad_T = np.sum(c * sines / denominator)
        grad_c = np.sum(cosines / denominator)
        h_TT = -np.sum((c * cosines + c**2) / denominator**2)
        h_Tc = np.sum(sines / denominator**2)
        h_cc = -np.sum(cosines**2 / denominator**2)

        at_upper = c >= c_max * (1 - 1e-9) and grad_c > 0
        at_lower = c <= 0 and grad_c < 0
        if at_upper or at_lower or h_TT * h_cc - h_Tc**2 <= 0:
            if h_TT >= 0:
                break
            step_T, step_c = -grad_T / h_TT, 0.0
        else:
            determinant = h_TT * h_cc - h_Tc**2
            step_T = -(h_cc * grad_T - h_Tc * grad_c) / determinant
            step_c = -(h_TT * grad_c - h_Tc * grad_T) / determinant
        step_T = float(np.clip(step_T, -0.1, 0.1))
        T = T + step_T
        c = float(np.clip(c + step_c, 0.0, c_max))
        if abs(step_T) < 1e-13 and abs(step_c) < 1e-13:
            break
    return T, c


def _profile_known_gamma(
    outcomes: NDArray[np.float64],
    T: NDArray[np.float64],
    gamma: float,
    tau0: float,
    s: float,
) -> NDArray[np.float64]:
    c = _known_gamma_visibility(T, gamma, tau0, s)
    values = 1 + c[..., np.newaxis] * np.cos(outcomes[np.newaxis, :] - T[..., np.newaxis])
    values = np.clip(values, 1e-300, None)
    return np.sum(np.log(values), axis=-1)


def _known_gamma_estimate(
    outcomes: NDArray[np.float64], gamma: float, tau0: float, s: float
) -> MLEResult:
    import scipy.optimize

    if gamma < 0:
        raise exceptions.InvalidArgument('gamma must be non-negative')

    grid = np.linspace(0.0, 2 * math.pi, 1024, endpoint=False)
    profile = _profile_known_gamma(outcomes, grid, gamma, tau0, s)
    start = grid[int(np.argmax(profile))]
    width = grid[1] - grid[0]

    def objective(T: float) -> float:
        return -float(_profile_known_gamma(outcomes, np.array([T]), gamma, tau0, s)[0])

    result = scipy.optimize.minimize_scalar(
        objective,
        bounds=(max(0.0, start - width), min(2 * math.pi, start + width)),
        method='bounded',
        options={'xatol': 1e-12},
    )
    T_hat = float(povm.wrap_phase(result.x))
    c_hat = float(_known_gamma_visibility(T_hat, gamma, tau0, s))
    return MLEResult(
        T_hat=T_hat,
        p_hat=_visibility_to_p(c_hat, s),
        fallback=False,
        log_likelihood=-float(result.fun),
    )


#
# # batches of trials
#


def mle_estimate_batch(
    outcomes: NDArray[np.float64],
    s: float = 0.5,
    gamma_known: float | None = None,
    tau0: float = 0.0,
    iterations: int = 30,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """vectorized Newton maximum likelihood over the rows of an outcome array

    returns (T_hat, p_hat) per row; used by Monte Carlo studies where the
    per-sample optimizer of mle_estimate would dominate the run time
    """
    outcomes = np.atleast_2d(np.asarray(outcomes, dtype=float))
    T, resultant = _batch_circular_mean(outcomes)
    c_max = povm.visibility(1.0, s) * (1 - max_visibility_margin)

    if gamma_known is not None:
        T = _batch_known_gamma(outcomes, T, gamma_known, tau0, s, iterations)
        c = _known_gamma_visibility(T, gamma_known, tau0, s)
        return povm.wrap_phase(T), 0.5 + c / (4 * math.sqrt(s * (1 - s)))

    c = np.clip(2 * resultant, 1e-3, 0.99 * c_max)
    for _ in range(iterations):
        cosines = np.cos(outcomes - T[:, None])
        sines = np.sin(outcomes - T[:, None])
        denominator = 1 + c[:, None] * cosines
        grad_T = np.sum(c[:, None] * sines / denominator, axis=1)
        grad_c = np.sum(cosines / denominator, axis=1)
        h_TT = -np.sum((c[:, None] * cosines + c[:, None] ** 2) / denominator**2, axis=1)
        h_Tc = np.sum(sines / denominator**2, axis=1)
        h_cc = -np.sum(cosines**2 / denominator**2, axis=1)

        determinant = h_TT * h_cc - h_Tc**2
        joint = determinant > 0
        safe = np.where(joint, determinant, 1.0)
        step_T = np.where(
            joint, -(h_cc * grad_T - h_Tc * grad_c) / safe, -grad_T / np.minimum(h_TT, -1e-12)
        )
        step_c = np.where(joint, -(h_TT * grad_c - h_Tc * grad_T) / safe, 0.0)
        T = T + np.clip(step_T, -0.1, 0.1)
        c = np.clip(c + np.clip(step_c, -0.2, 0.2), 0.0, c_max)

    return povm.wrap_phase(T), 0.5 + c / (4 * math.sqrt(s * (1 - s)))


def _batch_circular_mean(
    outcomes: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    resultant = np.mean(np.exp(1j * outcomes), axis=1)
    return np.angle(resultant), np.abs(resultant)


def _batch_known_gamma(
    outcomes: NDArray[np.float64],
    T: NDArray[np.float64],
    gamma: float,
    tau0: float,
    s: float,
    iterations: int,
) -> NDArray[np.float64]:
    """Newton iterations on the profile log-likelihood in T"""
    T = povm.wrap_phase(T)
    scale = 2 * math.sqrt(s * (1 - s))
    for _ in range(iterations):
        contrast = np.minimum(np.exp(-gamma * (T + tau0)), 1.0)
        c = scale * contrast
        u = np.cos(outcomes - T[:, None])
        du = np.sin(outcomes - T[:, None])
        f = 1 + c[:, None] * u
        f_prime = c[:, None] * (du - gamma * u)
        f_second = c[:, None] * ((gamma**2 - 1) * u - 2 * gamma * du)
        first = np.sum(f_prime / f, axis=1)
        second = np.sum(f_second / f - (f_prime / f) ** 2, axis=1)
        step = np.where(second < 0, -first / np.where(second < 0, second, -1.0), 0.1 * np.sign(first))
        T = T + np.clip(step, -0.1, 0.1)
    return T
