"""classical Fisher information of the single-qubit covariant measurement

closed forms, with a = exp(-gamma (T + tau0)) the coherence left at time T:
- fisher_local(p) = 1 - 2 sqrt(p (1 - p))
- fisher_noisy_known(gamma, T) = 1 - gamma^2 - sqrt(1 - a^2) + gamma^2 / sqrt(1 - a^2)
- fisher_noisy_nuisance(gamma, T) = 1 - sqrt(1 - a^2)

the nuisance form is 1 / (F^-1)_TT of the (T, gamma) Fisher matrix; in the
(T, p) parametrization the matrix is diagonal and the same number appears
directly as its (T, T) entry
"""

from __future__ import annotations

import math
import typing

import numpy as np

from .. import exceptions
from . import povm

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


def fisher_local(p: float) -> float:
    if not 0.5 <= p <= 1:
        raise exceptions.InvalidArgument('p must be in [1/2, 1], got ' + str(p))
    return 1 - 2 * math.sqrt(p * (1 - p))


def _remaining_coherence(gamma: float, T: float, tau0: float) -> float:
    if gamma < 0:
        raise exceptions.InvalidArgument('gamma must be non-negative')
    if T + tau0 <= 0:
        raise exceptions.InvalidArgument('need T + tau0 > 0 when gamma > 0')
    return math.exp(-gamma * (T + tau0))


def fisher_noisy_known(gamma: float, T: float, tau0: float = 0.0) -> float:
    """information on T when p = (1 + exp(-gamma (T + tau0))) / 2 is known

    the gamma-free limit is 1
    """
    if gamma == 0:
        return 1.0
    _remaining_coherence(gamma, T, tau0)
    root = math.sqrt(-math.expm1(-2 * gamma * (T + tau0)))
    return 1 - gamma**2 - root + gamma**2 / root


def fisher_noisy_nuisance(gamma: float, T: float, tau0: float = 0.0) -> float:
    if gamma == 0:
        return 1.0
    _remaining_coherence(gamma, T, tau0)
    return 1 - math.sqrt(-math.expm1(-2 * gamma * (T + tau0)))


def fisher_matrix_nuisance(
    gamma: float, T: float, tau0: float = 0.0
) -> NDArray[np.float64]:
    """2x2 Fisher matrix in the (T, gamma) coordinates"""
    if gamma <= 0:
        raise exceptions.InvalidArgument('Fisher matrix needs gamma > 0')
    _remaining_coherence(gamma, T, tau0)
    elapsed = T + tau0
    root = math.sqrt(-math.expm1(-2 * gamma * elapsed))
    # c^2 <cos^2 / (1 + c cos)> = 1 / sqrt(1 - c^2) - 1
    cosine_moment = 1 / root - 1
    F_TT = fisher_noisy_known(gamma, T, tau0)
    F_Tg = gamma * elapsed * cosine_moment
    F_gg = elapsed**2 * cosine_moment
    return np.array([[F_TT, F_Tg], [F_Tg, F_gg]])


def nuisance_from_matrix(matrix: NDArray[np.float64]) -> float:
    """1 / (F^-1)_TT, the information left on T after estimating the nuisance"""
    return float(1 / np.linalg.inv(matrix)[0, 0])


#
# # finite-difference oracles
#


def numerical_fisher_information(
    pdf: typing.Callable[[float, float], float],
    theta: float,
    step: float = 1e-5,
    points: typing.Sequence[float] | None = None,
) -> float:
    """integral of (d pdf / d theta)^2 / pdf over [0, 2 pi)

    pdf(tau, theta) is differentiated by central differences; points marks
    near-zeros of the density for the quadrature
    """
    import scipy.integrate

    def integrand(tau: float) -> float:
        value = pdf(tau, theta)
        if value <= 0:
            return 0.0
        derivative = (pdf(tau, theta + step) - pdf(tau, theta - step)) / (2 * step)
        return derivative**2 / value

    result, _ = scipy.integrate.quad(
        integrand,
        0.0,
        povm.two_pi,
        points=points,
        limit=400,
        epsabs=1e-12,
        epsrel=1e-11,
    )
    return float(result)


def numerical_fisher_matrix(
    pdf: typing.Callable[[float, NDArray[np.float64]], float],
    theta: typing.Sequence[float],
    step: float = 1e-5,
    points: typing.Sequence[float] | None = None,
) -> NDArray[np.float64]:
    """Fisher matrix of a multi-parameter pdf(tau, theta) by central differences"""
    import scipy.integrate

    center = np.asarray(theta, dtype=float)
    size = len(center)
    offsets = np.eye(size) * step

    def scores(tau: float) -> tuple[float, NDArray[np.float64]]:
        value = pdf(tau, center)
        gradient = np.array(
            [
                (pdf(tau, center + offsets[i]) - pdf(tau, center - offsets[i]))
                / (2 * step)
                for i in range(size)
            ]
        )
        return value, gradient

    matrix = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):

            def integrand(tau: float, i: int = i, j: int = j) -> float:
                value, gradient = scores(tau)
                if value <= 0:
                    return 0.0
                return float(gradient[i] * gradient[j] / value)

            entry, _ = scipy.integrate.quad(
                integrand,
                0.0,
                povm.two_pi,
                points=points,
                limit=400,
                epsabs=1e-12,
                epsrel=1e-11,
            )
            matrix[i, j] = matrix[j, i] = entry
    return matrix


def known_gamma_pdf(
    gamma: float, tau0: float = 0.0, s: float = 0.5
) -> typing.Callable[[float, float], float]:

    def pdf(tau: float, T: float) -> float:
        p = 0.5 * (1 + math.exp(-gamma * (T + tau0)))
        return float(povm.povm_pdf(tau, T, p, s))

    return pdf


def compare_fisher_forms(
    gamma: float, T: float, tau0: float = 0.0
) -> dict[str, tuple[float, float]]:
    """closed form and finite-difference value of each information

    the local form is evaluated at the p reached after time T
    """
    points = [float(povm.wrap_phase(T + math.pi))]
    p = 0.5 * (1 + math.exp(-gamma * (T + tau0)))

    def local_pdf(tau: float, t: float) -> float:
        return float(povm.povm_pdf(tau, t, p))

    def joint_pdf(tau: float, theta: NDArray[np.float64]) -> float:
        t, rate = theta
        contrast = min(math.exp(-rate * (t + tau0)), 1.0)
        return float((1 + contrast * math.cos(tau - t)) / povm.two_pi)

    comparison = {
        'local': (
            fisher_local(p),
            numerical_fisher_information(local_pdf, T, points=points),
        ),
        'known': (
            fisher_noisy_known(gamma, T, tau0),
            numerical_fisher_information(
                known_gamma_pdf(gamma, tau0), T, points=points
            ),
        ),
    }
    if gamma > 0:
        matrix = numerical_fisher_matrix(joint_pdf, [T, gamma], points=points)
        comparison['nuisance'] = (
            fisher_noisy_nuisance(gamma, T, tau0),
            nuisance_from_matrix(matrix),
        )
    return comparison
