from __future__ import annotations

import functools
import logging
import math
import typing

import numpy as np

from .. import exceptions
from .. import spin
from . import params as params_module

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


logger = logging.getLogger(__name__)


def ensemble_state(params: params_module.ClockParams) -> spin.BlockState:
    return spin.block_state(params)


def mixture_state(
    components: typing.Sequence[params_module.ClockParams],
    mixing: typing.Sequence[float],
) -> spin.BlockState:
    """exchangeable mixture of i.i.d. ensembles"""
    states = [ensemble_state(component) for component in components]
    return spin.mix_block_states(states, mixing)


#
# # collective dephasing
#


@functools.lru_cache(maxsize=64)
def _branching_ratios(n: int) -> dict[float, tuple[float, float]]:
    ratios = {}
    for J in spin.spin_values(n):
        total = spin.multiplicity(n, J)
        below = spin.multiplicity(n - 1, J - 0.5) if J >= 0.5 else 0
        above = spin.multiplicity(n - 1, J + 0.5)
        assert below + above == total
        ratios[J] = (below / total, above / total)
    return ratios


def _coupling_matrix(
    n: int, spins: typing.Sequence[float], M: float, Mp: float
) -> NDArray[np.float64]:
    """sum_i sigma_z^(i) (.) sigma_z^(i) restricted to levels (M, M')

    column j is the source spin spins[j]; adjacent spins differ by one
    """
    ratios = _branching_ratios(n)
    size = len(spins)
    coupling = np.zeros((size, size))
    for j, J in enumerate(spins):
        down, up = ratios[J]
        diagonal = 0.0
        if J > 0:
            diagonal += down * M * Mp / J**2
        diagonal += up * M * Mp / (J + 1) ** 2
        coupling[j, j] = n * diagonal

        # spins are in descending order
        if j + 1 < size and J > 0:
            coupling[j + 1, j] = (
                n * down * math.sqrt((J**2 - M**2) * (J**2 - Mp**2)) / J**2
            )
        if j > 0:
            outer = (J + 1) ** 2
            coupling[j - 1, j] = (
                n * up * math.sqrt((outer - M**2) * (outer - Mp**2)) / outer
            )
    return coupling


def dephase_block_state(
    state: spin.BlockState, t: float, gamma: float
) -> spin.BlockState:
    """evolve every qubit of a permutation-invariant state under dephasing

    local dephasing keeps the block structure but moves weight between
    neighbouring spin sectors; at fixed levels (m, m') the weighted blocks
    q_J rho_J[m, m'] evolve under a small linear system over J
    """
    import scipy.linalg

    if t < 0 or gamma < 0:
        raise exceptions.InvalidArgument('t and gamma must be non-negative')
    if gamma == 0 or t == 0:
        return spin.rotate_phase(state, t)

    n = state.n
    spins = state.spins
    weighted = state.weighted_blocks()
    evolved = [np.zeros_like(block) for block in weighted]
    decay = math.exp(-0.5 * gamma * n * t)

    levels = spin.m_values(n / 2)
    for M in levels:
        for Mp in levels:
            chain = [
                j
                for j, J in enumerate(spins)
                if J + 1e-9 >= max(abs(M), abs(Mp))
            ]
            chain_spins = [spins[j] for j in chain]
            values = np.array(
                [
                    weighted[j][spin.m_index(spins[j], M), spin.m_index(spins[j], Mp)]
                    for j in chain
                ]
            )
            if not np.any(values):
                continue
            coupling = _coupling_matrix(n, chain_spins, M, Mp)
            propagator = scipy.linalg.expm(0.5 * gamma * t * coupling)
            rotated = np.exp(1j * (M - Mp) * t) * decay * (propagator @ values)
            for j, value in zip(chain, rotated):
                J = spins[j]
                evolved[j][spin.m_index(J, M), spin.m_index(J, Mp)] = value

    result = spin.from_weighted_blocks(
        n, spins, evolved, s=state.s, fallback=state
    )
    logger.debug(
        'dephased %d-qubit block state for t=%g at gamma=%g', n, t, gamma
    )
    return result
