from __future__ import annotations

import math
import typing

import numpy as np

from .. import exceptions

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


# H = -sigma_z / 2 in units where E1 - E0 = 1, so |1> picks up exp(-i t)
hamiltonian = np.diag([-0.5, 0.5]).astype(complex)
sigma_z = np.diag([1.0, -1.0]).astype(complex)


def qubit_clock_state(T: float, p: float, s: float = 0.5) -> NDArray[np.complex128]:
    """p |phi><phi| + (1 - p) |phi_perp><phi_perp|

    with |phi> = sqrt(s)|0> + sqrt(1 - s) exp(-i T)|1>
    """
    if not 0.5 <= p <= 1:
        raise exceptions.InvalidArgument('p must be in [1/2, 1], got ' + str(p))
    if not 0 < s < 1:
        raise exceptions.InvalidArgument('s must be in (0, 1), got ' + str(s))
    coherence = (2 * p - 1) * math.sqrt(s * (1 - s)) * np.exp(1j * T)
    return np.array(
        [
            [p * s + (1 - p) * (1 - s), coherence],
            [np.conj(coherence), p * (1 - s) + (1 - p) * s],
        ],
        dtype=complex,
    )


def validate_density_matrix(
    state: NDArray[np.complex128], atol: float = 1e-10
) -> NDArray[np.complex128]:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 2 or state.shape[0] != state.shape[1]:
        raise exceptions.InvalidArgument('density matrix must be square')
    if not np.allclose(state, state.conj().T, atol=atol):
        raise exceptions.InvalidArgument('density matrix must be Hermitian')
    if abs(np.trace(state).real - 1) > atol:
        raise exceptions.InvalidArgument('density matrix must have unit trace')
    if np.linalg.eigvalsh(state).min() < -atol:
        raise exceptions.InvalidArgument('density matrix must be positive semidefinite')
    return state


def evolve_dephasing(
    state: NDArray[np.complex128], t: float, gamma: float
) -> NDArray[np.complex128]:
    """closed-form solution of the qubit dephasing master equation"""
    if t < 0 or gamma < 0:
        raise exceptions.InvalidArgument('t and gamma must be non-negative')
    state = validate_density_matrix(state)
    if state.shape != (2, 2):
        raise exceptions.InvalidArgument('expected a 2x2 density matrix')
    evolved = state.copy()
    factor = np.exp((1j - gamma) * t)
    evolved[0, 1] = state[0, 1] * factor
    evolved[1, 0] = np.conj(evolved[0, 1])
    return evolved


def dephasing_generator(
    state: NDArray[np.complex128], gamma: float
) -> NDArray[np.complex128]:
    """-i[H, rho] + (gamma / 2)(sigma_z rho sigma_z - rho)"""
    commutator = hamiltonian @ state - state @ hamiltonian
    return -1j * commutator + 0.5 * gamma * (sigma_z @ state @ sigma_z - state)


def integrate_dephasing(
    state: NDArray[np.complex128],
    t: float,
    gamma: float,
    *,
    rtol: float = 1e-12,
    atol: float = 1e-12,
) -> NDArray[np.complex128]:
    """numerical integration of the master equation with an explicit
    Runge-Kutta scheme"""
    import scipy.integrate

    state = validate_density_matrix(state)
    if t == 0:
        return state.copy()

    def rhs(_: float, y: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return dephasing_generator(y.reshape(2, 2), gamma).ravel()

    solution = scipy.integrate.solve_ivp(
        rhs,
        (0.0, t),
        state.ravel().astype(complex),
        method='DOP853',
        rtol=rtol,
        atol=atol,
    )
    if not solution.success:
        raise exceptions.StopwatchError(
            'dephasing integration failed: ' + str(solution.message)
        )
    result: NDArray[np.complex128] = solution.y[:, -1].reshape(2, 2)
    return result


def purity(state: NDArray[np.complex128]) -> float:
    return float(np.real(np.trace(state @ state)))
