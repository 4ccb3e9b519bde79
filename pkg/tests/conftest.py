from __future__ import annotations

import functools

import numpy as np
import pytest

import qstopwatch


def dense_clock_state(n, T, p, s=0.5):
    """rho_{T,p}^(x)n as a full 2^n x 2^n matrix, qubit 0 most significant"""
    qubit = qstopwatch.qubit_clock_state(T, p, s)
    return functools.reduce(np.kron, [qubit] * n)


def level_of_basis_state(n):
    """m = (#zeros - #ones) / 2 for every computational basis state"""
    ones = np.array([bin(i).count('1') for i in range(2**n)])
    return (n - 2 * ones) / 2


def raising_operator(n):
    """J_+ = sum_i sigma_+^(i), with |0> the m = +1/2 level"""
    sigma_plus = np.array([[0.0, 1.0], [0.0, 0.0]])
    total = np.zeros((2**n, 2**n))
    for i in range(n):
        factors = [np.eye(2)] * n
        factors[i] = sigma_plus
        total = total + functools.reduce(np.kron, factors)
    return total


def schur_oracle(dense, n):
    """weighted blocks q_J rho_J of a permutation-invariant dense state

    the spin-J subspace is built from its highest-weight vectors by repeated
    lowering, so the blocks follow the Condon-Shortley phases
    """
    import scipy.linalg

    levels = level_of_basis_state(n)
    J_plus = raising_operator(n)
    J_minus = J_plus.T
    blocks = {}
    for J in qstopwatch.spin_values(n):
        top = np.flatnonzero(np.abs(levels - J) < 1e-9)
        V = np.eye(2**n)[:, top]
        highest = V @ scipy.linalg.null_space(J_plus @ V)
        size = int(round(2 * J)) + 1
        block = np.zeros((size, size), dtype=complex)
        for alpha in range(highest.shape[1]):
            vectors = [highest[:, alpha].astype(complex)]
            m = J
            for _ in range(size - 1):
                lowered = J_minus @ vectors[-1] / np.sqrt((J + m) * (J - m + 1))
                vectors.append(lowered)
                m -= 1
            basis = np.array(vectors).T
            block += basis.conj().T @ dense @ basis
        blocks[J] = block
    return blocks


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def outcome_grid(state, grid_size=8192):
    """midpoints and weights of the covariant measurement on a fine grid

    more points than twice the levels, so the weights sum to a POVM exactly
    """
    width = 2 * np.pi / grid_size
    tau = (np.arange(grid_size) + 0.5) * width
    return tau, qstopwatch.collective_pdf(state, tau) * width


def coverage(state, T, delta):
    """probability that the estimate lands within delta of T"""
    tau, mass = outcome_grid(state)
    return float(mass[qstopwatch.circular_distance(tau, T) <= delta].sum())


def exact_inaccuracy(state, T, P):
    """smallest grid radius around T holding probability P"""
    tau, mass = outcome_grid(state)
    distances = qstopwatch.circular_distance(tau, T)
    order = np.argsort(distances)
    index = np.searchsorted(np.cumsum(mass[order]), P)
    return float(distances[order][min(index, len(tau) - 1)])
