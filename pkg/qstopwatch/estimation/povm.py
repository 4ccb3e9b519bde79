"""covariant time measurements on single qubits and on block states"""

from __future__ import annotations

import dataclasses
import math
import typing

import numpy as np

from .. import exceptions
from .. import spin

if typing.TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray


two_pi = 2 * math.pi


def wrap_phase(values: ArrayLike) -> NDArray[np.float64]:
    wrapped = np.mod(np.asarray(values, dtype=float), two_pi)
    return np.where(wrapped >= two_pi, 0.0, wrapped)


def circular_distance(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    difference = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), two_pi)
    return np.minimum(difference, two_pi - difference)


def visibility(p: float, s: float = 0.5) -> float:
    """amplitude 2 (2p - 1) sqrt(s (1 - s)) of the outcome density modulation"""
    if not 0.5 <= p <= 1:
        raise exceptions.InvalidArgument('p must be in [1/2, 1], got ' + str(p))
    if not 0 < s < 1:
        raise exceptions.InvalidArgument('s must be in (0, 1), got ' + str(s))
    return 2 * (2 * p - 1) * math.sqrt(s * (1 - s))


def povm_pdf(tau: ArrayLike, T: float, p: float, s: float = 0.5) -> NDArray[np.float64]:
    """outcome density (1 + (2p - 1) cos(tau - T)) / 2 pi of one clock qubit"""
    a = visibility(p, s)
    return (1 + a * np.cos(np.asarray(tau, dtype=float) - T)) / two_pi


@dataclasses.dataclass(frozen=True)
class MeasurementSample:
    outcomes: NDArray[np.float64]
    true_T: float
    true_p: float
    rng_seed: int | None
    s: float = 0.5

    def __post_init__(self) -> None:
        outcomes = self.outcomes
        if np.any(outcomes < 0) or np.any(outcomes >= two_pi):
            raise exceptions.InvalidArgument('outcomes must lie in [0, 2 pi)')

    def __len__(self) -> int:
        return len(self.outcomes)


def draw_outcomes(
    shape: int | tuple[int, ...],
    T: float | NDArray[np.float64],
    p: float,
    rng: np.random.Generator,
    s: float = 0.5,
) -> NDArray[np.float64]:
    """simulate the covariant measurement qubit by qubit

    each qubit is measured along a uniformly random direction tau; a
    negative result reports tau + pi
    """
    a = visibility(p, s)
    directions = rng.uniform(0.0, two_pi, size=shape)
    positive = rng.random(size=shape) < 0.5 * (1 + a * np.cos(directions - T))
    return wrap_phase(np.where(positive, directions, directions + math.pi))


def sample_outcomes(
    n: int, T: float, p: float, seed: int | None, s: float = 0.5
) -> MeasurementSample:
    if n < 1:
        raise exceptions.InvalidArgument('n must be at least 1')
    rng = np.random.default_rng(seed)
    outcomes = draw_outcomes(n, T, p, rng, s)
    return MeasurementSample(
        outcomes=outcomes, true_T=T, true_p=p, rng_seed=seed, s=s
    )


#
# # collective measurement of block states
#


def _diagonal_sums(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    size = matrix.shape[0]
    return np.array([np.trace(matrix, offset=d) for d in range(size)])


def block_pdf(matrix: NDArray[np.complex128], tau: ArrayLike) -> NDArray[np.float64]:
    """(1 / 2 pi) sum_{m, m'} rho[m, m'] exp(-i (m - m') tau)

    rows must be levels descending by one, as in a spin block or a
    contiguous memory window; a gapped window gives the wrong density
    """
    tau = np.asarray(tau, dtype=float)
    sums = _diagonal_sums(matrix)
    total = np.full(tau.shape, np.real(sums[0]))
    # element [i, i + d] has m - m' = d
    for d in range(1, len(sums)):
        total = total + 2 * np.real(sums[d] * np.exp(-1j * d * tau))
    return np.clip(total, 0.0, None) / two_pi


def collective_pdf(state: spin.BlockState, tau: ArrayLike) -> NDArray[np.float64]:
    tau = np.asarray(tau, dtype=float)
    total = np.zeros(tau.shape)
    for sector in state.sectors:
        if sector.weight > 0:
            total = total + sector.weight * block_pdf(sector.block.matrix, tau)
    return total


def _sample_from_grid(
    density: NDArray[np.float64], trials: int, rng: np.random.Generator
) -> NDArray[np.float64]:
    grid_size = len(density)
    width = two_pi / grid_size
    cumulative = np.cumsum(density)
    cumulative = cumulative / cumulative[-1]
    bins = np.searchsorted(cumulative, rng.random(trials), side='right')
    bins = np.minimum(bins, grid_size - 1)
    return wrap_phase((bins + rng.random(trials)) * width)


def grid_size_for(max_levels: int, minimum: int = 4096) -> int:
    return max(minimum, 64 * max_levels)


def sample_block(
    matrix: NDArray[np.complex128],
    trials: int,
    rng: np.random.Generator,
    grid_size: int | None = None,
) -> NDArray[np.float64]:
    """outcomes of the covariant measurement on a single register"""
    if grid_size is None:
        grid_size = grid_size_for(matrix.shape[0])
    width = two_pi / grid_size
    midpoints = (np.arange(grid_size) + 0.5) * width
    density = block_pdf(matrix, midpoints)
    return _sample_from_grid(density, trials, rng)


def sample_collective(
    state: spin.BlockState,
    trials: int,
    rng: np.random.Generator,
    grid_size: int | None = None,
) -> NDArray[np.float64]:
    """time estimates T_hat = tau from repeated collective measurements

    the spin J is read out first with probability q_J, then tau is drawn
    from the block's outcome density
    """
    weights = np.clip(state.weights, 0, None)
    weights = weights / weights.sum()
    sectors = rng.choice(len(state.sectors), size=trials, p=weights)
    estimates = np.empty(trials)
    for index in np.unique(sectors):
        mask = sectors == index
        block = state.sectors[index].block.matrix
        estimates[mask] = sample_block(block, int(mask.sum()), rng, grid_size)
    return estimates
