"""rotation matrices and rotated-basis overlaps of a spin-J system

rows and columns are ordered by the energy eigenbasis m = J, J-1, ..., -J,
so index i corresponds to m = J - i
"""

from __future__ import annotations

import dataclasses
import functools
import math
import typing

import numpy as np

from .. import exceptions

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


def validate_spin(J: float) -> int:
    twice = 2 * float(J)
    if J < 0 or abs(twice - round(twice)) > 1e-9:
        raise exceptions.InvalidArgument(
            'J must be a non-negative half-integer, got ' + str(J)
        )
    return int(round(twice))


def m_values(J: float) -> NDArray[np.float64]:
    two_j = validate_spin(J)
    return (two_j - 2 * np.arange(two_j + 1)) / 2.0


def m_index(J: float, m: float) -> int:
    two_j = validate_spin(J)
    offset = J - m
    if abs(m) > J + 1e-9 or abs(offset - round(offset)) > 1e-9:
        raise exceptions.InvalidArgument(
            'm=' + str(m) + ' is not a level of spin J=' + str(J)
        )
    index = int(round(offset))
    assert 0 <= index <= two_j
    return index


def rotation_angle(s: float) -> float:
    """angle theta of the rotated basis, with cos^2(theta / 2) = s"""
    if not 0 < s <= 1:
        raise exceptions.InvalidArgument('s must be in (0, 1], got ' + str(s))
    return 2 * math.acos(math.sqrt(s))


@functools.lru_cache(maxsize=128)
def _jx_eigensystem(two_j: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    import scipy.linalg

    J = two_j / 2
    m = m_values(J)
    if two_j == 0:
        return np.zeros(1), np.ones((1, 1))

    # <m|J_x|m-1> = sqrt((J + m)(J - m + 1)) / 2
    upper = m[:-1]
    off_diagonal = 0.5 * np.sqrt((J + upper) * (J - upper + 1))
    eigenvalues, eigenvectors = scipy.linalg.eigh_tridiagonal(
        np.zeros(two_j + 1), off_diagonal
    )

    # spectrum of J_x is exactly -J, ..., J
    exact = -m
    assert np.max(np.abs(eigenvalues - exact)) < 1e-6 * max(1.0, J)
    return exact, eigenvectors


@functools.lru_cache(maxsize=512)
def _wigner_small_d(two_j: int, theta: float) -> NDArray[np.float64]:
    mu, vectors = _jx_eigensystem(two_j)
    m = m_values(two_j / 2)

    # exp(-i theta J_y) = Z exp(-i theta J_x) Z^dagger, Z = diag(exp(-i pi m / 2))
    cos_part = (vectors * np.cos(theta * mu)) @ vectors.T
    sin_part = (vectors * np.sin(theta * mu)) @ vectors.T
    phi = 0.5 * np.pi * (m[:, np.newaxis] - m[np.newaxis, :])
    d = np.cos(phi) * cos_part - np.sin(phi) * sin_part
    d.setflags(write=False)
    return d


def wigner_small_d(J: float, theta: float) -> NDArray[np.float64]:
    """real rotation matrix d^J(theta) = exp(-i theta J_y)

    computed from the spectral decomposition of the tridiagonal J_x
    generator, which stays orthogonal to machine precision for J in the
    thousands where factorial sums overflow

    returned arrays are cached and read-only
    """
    two_j = validate_spin(J)
    return _wigner_small_d(two_j, float(theta))


#
# # rotated basis
#


@dataclasses.dataclass(frozen=True)
class OverlapTable:
    """entries[i, j] = <J, m_i|_s |J, m_j>, both indices in energy order"""

    J: float
    s: float
    entries: NDArray[np.float64]

    def overlap(self, m: float, k: float) -> float:
        return float(self.entries[m_index(self.J, m), m_index(self.J, k)])


def overlap_table(J: float, s: float) -> OverlapTable:
    if not 0 < s <= 1:
        raise exceptions.InvalidArgument('s must be in (0, 1], got ' + str(s))
    d = wigner_small_d(J, rotation_angle(s))
    entries = d.T.copy()
    entries.setflags(write=False)
    return OverlapTable(J=J, s=s, entries=entries)


def symmetric_overlap(J: float, m: float, k: float, s: float) -> float:
    if not 0 < s <= 1:
        raise exceptions.InvalidArgument('s must be in (0, 1], got ' + str(s))
    d = wigner_small_d(J, rotation_angle(s))
    return float(d[m_index(J, k), m_index(J, m)])


def _log_comb(n: float, k: float) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def lemma_overlap_bound(J: float, m: float, k: float, s: float) -> float:
    """analytic upper bound on |symmetric_overlap(J, m, k, s)|"""
    m_index(J, m)
    m_index(J, k)
    if not 0 < s < 1:
        raise exceptions.InvalidArgument('s must be in (0, 1), got ' + str(s))

    log_value = _log_comb(2 * J, J + k) + _log_comb(2 * J, J - m)
    if s >= 0.5:
        log_value += (2 * J + k - m) * math.log(s)
        log_value += (m - k) * math.log(1 - s)
    else:
        log_value += (m + k) * math.log(s)
        log_value += (2 * J - m - k) * math.log(1 - s)
    return math.exp(0.5 * log_value)
