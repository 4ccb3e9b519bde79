from __future__ import annotations

import dataclasses
import math
import typing

import numpy as np

from .. import exceptions
from .. import spin
from . import channel
from . import error_bounds
from . import windows

if typing.TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..spec import typedefs


def trace_norm(matrix: NDArray[np.complex128]) -> float:
    """sum of absolute eigenvalues of a Hermitian matrix"""
    hermitian = 0.5 * (matrix + matrix.conj().T)
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian))))


# eigenvalues below this are rounding noise of a positive matrix
noise_floor = 1e-14


def _clipped_sqrt(values: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.sqrt(np.where(values > noise_floor, values, 0.0))


def _psd_sqrt(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    values, vectors = np.linalg.eigh(0.5 * (matrix + matrix.conj().T))
    values = _clipped_sqrt(values)
    return (vectors * values) @ vectors.conj().T


def root_fidelity(a: NDArray[np.complex128], b: NDArray[np.complex128]) -> float:
    """Uhlmann fidelity F = tr sqrt(sqrt(a) b sqrt(a)) of positive matrices"""
    if a.shape != b.shape:
        raise exceptions.InvalidArgument(
            'shapes differ: ' + str(a.shape) + ' and ' + str(b.shape)
        )
    root = _psd_sqrt(a)
    inner = root @ b @ root
    values = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(_clipped_sqrt(values)))


@dataclasses.dataclass(frozen=True)
class CompressionReport:
    eps_trace: float
    infidelity: float
    memory_qubits: int = 0
    bound_value: float = math.inf
    bound_satisfied: bool = True
    eps_conditional: float | None = None
    infidelity_conditional: float | None = None
    n: int | None = None
    p: float | None = None
    T: float | None = None
    window_policy: str | None = None

    def as_dict(self) -> typedefs.CompressionReportDict:
        return {
            'n': self.n,
            'p': self.p,
            'T': self.T,
            'window_policy': self.window_policy,
            'memory_qubits': self.memory_qubits,
            'eps_trace': self.eps_trace,
            'infidelity': self.infidelity,
            'eps_conditional': self.eps_conditional,
            'infidelity_conditional': self.infidelity_conditional,
            'bound_value': self.bound_value,
            'bound_satisfied': self.bound_satisfied,
        }


def _paired_sectors(
    a: spin.BlockState, b: spin.BlockState
) -> list[tuple[spin.SpinSector, spin.SpinSector]]:
    if a.n != b.n:
        raise exceptions.InvalidArgument(
            'states have different qubit counts: ' + str(a.n) + ', ' + str(b.n)
        )
    return [(sector, b.get_sector(sector.J)) for sector in a.sectors]


def block_trace_distance(a: spin.BlockState, b: spin.BlockState) -> float:
    """half trace norm of a - b, summed over spin sectors"""
    total = 0.0
    for x, y in _paired_sectors(a, b):
        difference = x.weight * x.block.matrix - y.weight * y.block.matrix
        if np.any(difference):
            total += 0.5 * trace_norm(difference)
    return total


def block_fidelity(a: spin.BlockState, b: spin.BlockState) -> float:
    """Uhlmann root fidelity of two block states"""
    total = 0.0
    for x, y in _paired_sectors(a, b):
        if x.weight <= 0 or y.weight <= 0:
            continue
        total += math.sqrt(x.weight * y.weight) * root_fidelity(
            x.block.matrix, y.block.matrix
        )
    return min(total, 1.0)


def compression_error(a: spin.BlockState, b: spin.BlockState) -> CompressionReport:
    eps = block_trace_distance(a, b)
    fidelity = block_fidelity(a, b)
    return CompressionReport(eps_trace=eps, infidelity=max(0.0, 1 - fidelity**2))


def evaluate_compression(
    n: int,
    T: float,
    p: float,
    policy: str | windows.WindowPolicy = 'asymptotic',
    s: float = 0.5,
) -> CompressionReport:
    """run the storage channel on rho_{T,p}^(x)n and measure its error

    the conditional metrics compare against the state after a successful
    projection; the bound is the single-shot analytic bound for (n, p)
    """
    state = spin.build_block_state(n, T, p, s)
    decoded, encoded = channel.compress(state, policy)
    channel_report = compression_error(state, decoded)
    conditional = channel.conditional_state(state, policy)
    conditional_report = compression_error(state, conditional)

    if p == 1:
        bound = error_bounds.overall_error_bound(n, 1, 0.0, 0.0)
    elif p > 0.5:
        bound = error_bounds.single_shot_error_bound(n, p)
    else:
        bound = math.inf

    return CompressionReport(
        eps_trace=channel_report.eps_trace,
        infidelity=channel_report.infidelity,
        memory_qubits=encoded.memory_qubits_total,
        bound_value=bound,
        bound_satisfied=channel_report.eps_trace <= bound,
        eps_conditional=conditional_report.eps_trace,
        infidelity_conditional=conditional_report.infidelity,
        n=n,
        p=p,
        T=T,
        window_policy=encoded.policy,
    )


def exact_projection_error(
    J: float,
    p: float,
    s: float = 0.5,
    T: float = 0.0,
    policy: str | windows.WindowPolicy = 'asymptotic',
) -> float:
    """half trace norm between rho_{T,p,J} and its frequency projection"""
    block = spin.clock_block(J, T, p, s)
    _, projected = channel.frequency_project(block, s, policy)
    return 0.5 * trace_norm(projected.matrix - block.matrix)


#
# # conventions behind small-n fidelity figures
#


@dataclasses.dataclass(frozen=True)
class ConventionValue:
    kept_m: tuple[float, ...]
    metric: str
    value: float
    relative_error: float


def fidelity_conventions(
    n: int,
    qubits: int,
    target: float,
    T: float = 0.0,
) -> list[ConventionValue]:
    """fidelity of the pure n-qubit clock under candidate windows and metrics

    windows: every contiguous run of 2^q - 1 or 2^q levels of the top sector
    metrics:
    - channel_F, channel_F2: Uhlmann F and F^2 of the storage channel output
    - conditional_F2: F^2 of the renormalized projected state
    - projected_F2: |<psi|P|psi>|^2, the overlap with the unnormalized projection
    """
    J = n / 2
    block = spin.clock_block(J, T, 1.0)
    psi_levels = spin.m_values(J)
    size = len(psi_levels)

    values = []
    for length in sorted({2**qubits - 1, 2**qubits}):
        if length < 1 or length > size:
            continue
        for start in range(size - length + 1):
            kept = tuple(float(m) for m in psi_levels[start:start + length])
            policy = windows.explicit_policy(kept)
            record, output = channel.frequency_project(block, 0.5, policy)
            kept_weight = 1 - record.leakage

            channel_F = root_fidelity(block.matrix, output.matrix)
            metrics = {
                'channel_F': channel_F,
                'channel_F2': channel_F**2,
                'conditional_F2': kept_weight,
                'projected_F2': kept_weight**2,
            }
            for metric, value in metrics.items():
                values.append(
                    ConventionValue(
                        kept_m=kept,
                        metric=metric,
                        value=value,
                        relative_error=abs(value - target) / target,
                    )
                )
    return values
