from __future__ import annotations

import dataclasses
import typing

import numpy as np

from .. import exceptions
from . import schur
from . import wigner

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..clock import params as params_module


max_block_qubits = 4096


@dataclasses.dataclass(frozen=True)
class SpinBlock:
    """density matrix of a spin-J register in the energy eigenbasis"""

    J: float
    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        size = wigner.validate_spin(self.J) + 1
        if self.matrix.shape != (size, size):
            raise exceptions.InvalidArgument(
                'block of spin ' + str(self.J) + ' must be '
                + str(size) + 'x' + str(size)
            )

    @property
    def levels(self) -> NDArray[np.float64]:
        return wigner.m_values(self.J)

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def is_valid(self, atol: float = 1e-10) -> bool:
        matrix = self.matrix
        if not np.allclose(matrix, matrix.conj().T, atol=1e-12):
            return False
        if abs(self.trace() - 1) > atol:
            return False
        return bool(np.linalg.eigvalsh(matrix).min() >= -atol)


@dataclasses.dataclass(frozen=True)
class SpinSector:
    J: float
    weight: float
    block: SpinBlock
    multiplicity: int


@dataclasses.dataclass(frozen=True)
class BlockState:
    """permutation-invariant state sum_J q_J |J><J| (x) rho_J (x) I / m_J"""

    n: int
    sectors: tuple[SpinSector, ...]
    s: float = 0.5

    @property
    def spins(self) -> list[float]:
        return [sector.J for sector in self.sectors]

    @property
    def weights(self) -> NDArray[np.float64]:
        return np.array([sector.weight for sector in self.sectors])

    def get_sector(self, J: float) -> SpinSector:
        for sector in self.sectors:
            if abs(sector.J - J) < 1e-9:
                return sector
        raise exceptions.InvalidArgument(
            'spin ' + str(J) + ' is not a sector of ' + str(self.n) + ' qubits'
        )

    def weighted_blocks(self) -> list[NDArray[np.complex128]]:
        return [sector.weight * sector.block.matrix for sector in self.sectors]

    def trace(self) -> float:
        return float(sum(sector.weight for sector in self.sectors))

    def is_valid(self, atol: float = 1e-10) -> bool:
        if abs(self.trace() - 1) > 1e-12 + atol:
            return False
        if any(sector.weight < -atol for sector in self.sectors):
            return False
        for sector in self.sectors:
            if sector.multiplicity != schur.multiplicity(self.n, sector.J):
                return False
            if not sector.block.is_valid(atol=atol):
                return False
        return True

    def to_dense(self) -> NDArray[np.complex128]:
        """full 2^n x 2^n matrix in the Schur basis, for small n"""
        if self.n > 10:
            raise exceptions.InvalidArgument('dense embedding is limited to n <= 10')
        import scipy.linalg

        pieces = [
            np.kron(
                sector.weight * sector.block.matrix,
                np.eye(sector.multiplicity) / sector.multiplicity,
            )
            for sector in self.sectors
        ]
        return np.asarray(scipy.linalg.block_diag(*pieces), dtype=complex)


def from_weighted_blocks(
    n: int,
    spins: typing.Sequence[float],
    weighted: typing.Sequence[NDArray[np.complex128]],
    *,
    s: float = 0.5,
    fallback: BlockState | None = None,
    tolerance: float = 1e-300,
) -> BlockState:
    """assemble a BlockState from unnormalized blocks R_J = q_J rho_J

    sectors with vanishing weight keep the block of fallback, or the
    maximally mixed block when no fallback is given
    """
    sectors = []
    for J, matrix in zip(spins, weighted):
        matrix = 0.5 * (matrix + matrix.conj().T)
        weight = float(np.real(np.trace(matrix)))
        if weight > tolerance:
            block = matrix / weight
        elif fallback is not None:
            block = fallback.get_sector(J).block.matrix
            weight = 0.0
        else:
            size = matrix.shape[0]
            block = np.eye(size, dtype=complex) / size
            weight = 0.0
        sectors.append(
            SpinSector(
                J=J,
                weight=weight,
                block=SpinBlock(J=J, matrix=block),
                multiplicity=schur.multiplicity(n, J),
            )
        )
    return BlockState(n=n, sectors=tuple(sectors), s=s)


#
# # construction
#


def rotated_diagonal_weights(J: float, p: float) -> NDArray[np.float64]:
    """normalized p^(J + m) (1 - p)^(J - m) over m = J, ..., -J"""
    import scipy.special

    m = wigner.m_values(J)
    log_w = scipy.special.xlogy(J + m, p) + scipy.special.xlogy(J - m, 1 - p)
    log_w = log_w - scipy.special.logsumexp(log_w)
    return np.exp(log_w)


def phase_factors(J: float, T: float) -> NDArray[np.complex128]:
    """outer(v, conj(v)) multiplies element (m, m') by exp(i (m - m') T)"""
    v = np.exp(1j * T * wigner.m_values(J))
    return np.outer(v, v.conj())


def clock_block(J: float, T: float, p: float, s: float = 0.5) -> SpinBlock:
    """block rho_{T,p,J}: rotated-basis diagonal state carried to time T"""
    d = wigner.wigner_small_d(J, wigner.rotation_angle(s))
    weights = rotated_diagonal_weights(J, p)
    matrix = (d * weights) @ d.T
    return SpinBlock(J=J, matrix=matrix * phase_factors(J, T))


def build_block_state(n: int, T: float, p: float, s: float = 0.5) -> BlockState:
    """block decomposition of rho_{T,p}^(x)n"""
    n = schur.validate_qubit_count(n)
    p = schur.validate_eigenvalue(p)
    if not 0 < s < 1:
        raise exceptions.InvalidArgument('s must be in (0, 1), got ' + str(s))
    if n > max_block_qubits:
        raise exceptions.InvalidArgument(
            'dense blocks are limited to n <= ' + str(max_block_qubits)
        )

    weights = schur.schur_weights(n, p)
    sectors = tuple(
        SpinSector(
            J=J,
            weight=float(weight),
            block=clock_block(J, T, p, s),
            multiplicity=schur.multiplicity(n, J),
        )
        for J, weight in zip(schur.spin_values(n), weights)
    )
    return BlockState(n=n, sectors=sectors, s=s)


def block_state(params: params_module.ClockParams) -> BlockState:
    return build_block_state(
        n=params.n, T=params.T, p=params.resolve_p(), s=params.s
    )


#
# # transformations
#


def rotate_phase(state: BlockState, t: float) -> BlockState:
    sectors = tuple(
        dataclasses.replace(
            sector,
            block=SpinBlock(
                J=sector.J,
                matrix=sector.block.matrix * phase_factors(sector.J, t),
            ),
        )
        for sector in state.sectors
    )
    return dataclasses.replace(state, sectors=sectors)


def mix_block_states(
    states: typing.Sequence[BlockState],
    mixing: typing.Sequence[float],
) -> BlockState:
    """convex combination of block states of equal n, sector by sector"""
    if len(states) == 0 or len(states) != len(mixing):
        raise exceptions.InvalidArgument('need one mixing weight per state')
    if any(w < 0 for w in mixing) or abs(sum(mixing) - 1) > 1e-12:
        raise exceptions.InvalidArgument('mixing weights must form a distribution')
    n = states[0].n
    if any(state.n != n for state in states):
        raise exceptions.InvalidArgument('all states must have the same n')

    spins = states[0].spins
    weighted = [
        sum(
            w * state.get_sector(J).weight * state.get_sector(J).block.matrix
            for w, state in zip(mixing, states)
        )
        for J in spins
    ]
    return from_weighted_blocks(
        n, spins, weighted, s=states[0].s, fallback=states[0]
    )
