from __future__ import annotations

import dataclasses
import logging
import typing

import numpy as np

from .. import exceptions
from .. import spin
from . import windows

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray


logger = logging.getLogger(__name__)

# spin sectors outside this cumulative probability do not set the memory size
high_probability_coverage = 1 - 1e-9


@dataclasses.dataclass(frozen=True)
class MemoryRecord:
    """content of the memory for spin outcome J

    kept_block is the channel form P rho P + leakage * rho0 restricted to the
    window, with rho0 maximally mixed on the window
    """

    J: float
    kept_m: tuple[float, ...]
    kept_block: NDArray[np.complex128]
    leakage: float
    memory_qubits: int

    @property
    def window_size(self) -> int:
        return len(self.kept_m)

    def is_contiguous(self) -> bool:
        return windows.levels_contiguous(self.kept_m)


@dataclasses.dataclass(frozen=True)
class EncodedState:
    n: int
    s: float
    records: tuple[MemoryRecord, ...]
    weights: tuple[float, ...]
    spin_register_qubits: int
    memory_qubits_total: int
    high_probability_spins: tuple[float, ...]
    policy: str

    @property
    def total_leakage(self) -> float:
        return float(
            sum(w * record.leakage for w, record in zip(self.weights, self.records))
        )

    def get_record(self, J: float) -> MemoryRecord:
        for record in self.records:
            if abs(record.J - J) < 1e-9:
                return record
        raise exceptions.InvalidArgument('no memory record for spin ' + str(J))


def _project(
    block: spin.SpinBlock, window: windows.ProjectionWindow
) -> tuple[NDArray[np.complex128], float]:
    indices = window.indices
    kept = block.matrix[np.ix_(indices, indices)]
    leakage = float(min(max(1 - np.real(np.trace(kept)), 0.0), 1.0))
    size = len(indices)
    kept_block = kept + leakage * np.eye(size) / size
    return kept_block, leakage


def embed_window(
    J: float, kept_m: typing.Sequence[float], kept_block: NDArray[np.complex128]
) -> spin.SpinBlock:
    size = spin.validate_spin(J) + 1
    indices = [spin.m_index(J, m) for m in kept_m]
    matrix = np.zeros((size, size), dtype=complex)
    matrix[np.ix_(indices, indices)] = kept_block
    return spin.SpinBlock(J=J, matrix=matrix)


def frequency_project(
    block: spin.SpinBlock,
    s: float = 0.5,
    policy: str | windows.WindowPolicy = 'asymptotic',
) -> tuple[MemoryRecord, spin.SpinBlock]:
    """pinch a block onto the energy window and replace the lost weight

    returns the memory record and the channel output in the full basis
    """
    if abs(block.trace() - 1) > 1e-8:
        raise exceptions.InvalidArgument('block must be normalized')
    window = windows.projection_window(block.J, s, policy)
    kept_block, leakage = _project(block, window)
    record = MemoryRecord(
        J=block.J,
        kept_m=window.kept_m,
        kept_block=kept_block,
        leakage=leakage,
        memory_qubits=window.memory_qubits,
    )
    return record, embed_window(block.J, window.kept_m, kept_block)


def encode(
    state: spin.BlockState,
    policy: str | windows.WindowPolicy = 'asymptotic',
) -> EncodedState:
    """read out J and compress each occupied sector into the memory"""
    records = []
    weights = []
    for sector in state.sectors:
        if sector.weight <= 0:
            continue
        record, _ = frequency_project(sector.block, state.s, policy)
        records.append(record)
        weights.append(sector.weight)

    spin_register = windows.memory_qubits_for(len(records))

    order = np.argsort(weights)[::-1]
    cumulative = 0.0
    high_probability = []
    for i in order:
        high_probability.append(records[i].J)
        cumulative += weights[i]
        if cumulative >= high_probability_coverage:
            break
    memory = max(
        record.memory_qubits
        for record in records
        if any(abs(record.J - J) < 1e-9 for J in high_probability)
    )

    encoded = EncodedState(
        n=state.n,
        s=state.s,
        records=tuple(records),
        weights=tuple(weights),
        spin_register_qubits=spin_register,
        memory_qubits_total=memory + spin_register,
        high_probability_spins=tuple(high_probability),
        policy=str(windows.parse_window_policy(policy)),
    )
    logger.debug(
        'encoded %d qubits into %d memory qubits, leakage %.3e',
        state.n,
        encoded.memory_qubits_total,
        encoded.total_leakage,
    )
    return encoded


def decode(encoded: EncodedState, n: int | None = None) -> spin.BlockState:
    """re-embed every memory record into its spin sector"""
    if n is not None and n != encoded.n:
        raise exceptions.InvalidArgument(
            'records encode ' + str(encoded.n) + ' qubits, not ' + str(n)
        )
    n = encoded.n
    stored = {
        spin.validate_spin(record.J): (weight, record)
        for weight, record in zip(encoded.weights, encoded.records)
    }
    sectors = []
    for J in spin.spin_values(n):
        multiplicity = spin.multiplicity(n, J)
        if spin.validate_spin(J) not in stored:
            size = spin.validate_spin(J) + 1
            block = spin.SpinBlock(J=J, matrix=np.eye(size, dtype=complex) / size)
            sectors.append(spin.SpinSector(J, 0.0, block, multiplicity))
            continue
        weight, record = stored[spin.validate_spin(J)]
        block = embed_window(J, record.kept_m, record.kept_block)
        sectors.append(spin.SpinSector(J, weight, block, multiplicity))
    return spin.BlockState(n=n, sectors=tuple(sectors), s=encoded.s)


def conditional_state(
    state: spin.BlockState,
    policy: str | windows.WindowPolicy = 'asymptotic',
) -> spin.BlockState:
    """state after a successful projection, P rho P renormalized"""
    spins = state.spins
    weighted = []
    for sector in state.sectors:
        window = windows.projection_window(sector.J, state.s, policy)
        indices = window.indices
        projected = np.zeros_like(sector.block.matrix)
        projected[np.ix_(indices, indices)] = sector.block.matrix[
            np.ix_(indices, indices)
        ]
        weighted.append(sector.weight * projected)
    total = sum(float(np.real(np.trace(w))) for w in weighted)
    if total <= 0:
        raise exceptions.InvalidArgument('window keeps no weight of the state')
    return spin.from_weighted_blocks(
        state.n, spins, [w / total for w in weighted], s=state.s, fallback=state
    )


def compress(
    state: spin.BlockState,
    policy: str | windows.WindowPolicy = 'asymptotic',
) -> tuple[spin.BlockState, EncodedState]:
    """encode then decode, the full storage channel"""
    encoded = encode(state, policy)
    return decode(encoded), encoded

