"""level windows kept by the frequency projection

policies:
- asymptotic: |m - (2s - 1)J| <= sqrt(J) log2(J) / 2
- qubit-budget=q: whole shells of equal distance from the center, while at
  most 2^q levels are kept
- qubit-fill=q: exactly min(2^q, 2J + 1) levels nearest the center, ties
  resolved toward larger m
"""

from __future__ import annotations

import dataclasses
import math
import typing

from .. import exceptions
from .. import spin

if typing.TYPE_CHECKING:
    from typing_extensions import Literal

    PolicyKind = Literal['asymptotic', 'qubit-budget', 'qubit-fill', 'explicit']


@dataclasses.dataclass(frozen=True)
class WindowPolicy:
    kind: PolicyKind
    qubits: int | None = None
    kept_m: tuple[float, ...] | None = None

    def __str__(self) -> str:
        if self.kind in ('qubit-budget', 'qubit-fill'):
            return self.kind + '=' + str(self.qubits)
        elif self.kind == 'explicit':
            return 'explicit'
        else:
            return self.kind


@dataclasses.dataclass(frozen=True)
class ProjectionWindow:
    J: float
    center: float
    half_width: float
    kept_m: tuple[float, ...]
    policy: str = 'asymptotic'

    @property
    def size(self) -> int:
        return len(self.kept_m)

    @property
    def memory_qubits(self) -> int:
        return memory_qubits_for(self.size)

    @property
    def indices(self) -> list[int]:
        return [spin.m_index(self.J, m) for m in self.kept_m]

    def is_contiguous(self) -> bool:
        return levels_contiguous(self.kept_m)


def levels_contiguous(kept_m: typing.Sequence[float]) -> bool:
    """levels descend by exactly one"""
    return all(abs(a - b - 1) < 1e-9 for a, b in zip(kept_m, kept_m[1:]))


def memory_qubits_for(levels: int) -> int:
    """qubits needed to hold a register of the given number of levels"""
    if levels < 1:
        raise exceptions.InvalidArgument('a window keeps at least one level')
    return int(math.ceil(math.log2(levels))) if levels > 1 else 0


def parse_window_policy(policy: str | WindowPolicy) -> WindowPolicy:
    if isinstance(policy, WindowPolicy):
        return policy
    text = policy.strip().lower()
    if text == 'asymptotic':
        return WindowPolicy(kind='asymptotic')
    for kind in ('qubit-budget', 'qubit-fill'):
        for separator in ('=', ':'):
            prefix = kind + separator
            if text.startswith(prefix):
                try:
                    qubits = int(text[len(prefix):])
                except ValueError:
                    raise exceptions.InvalidArgument(
                        'invalid qubit count in window policy: ' + policy
                    )
                if qubits < 0:
                    raise exceptions.InvalidArgument(
                        'qubit count must be non-negative: ' + policy
                    )
                return WindowPolicy(kind=kind, qubits=qubits)  # type: ignore
    raise exceptions.InvalidArgument('unknown window policy: ' + str(policy))


def window_center(J: float, s: float) -> float:
    return (2 * s - 1) * J


def asymptotic_half_width(J: float) -> float:
    if J <= 0:
        return 0.0
    return math.sqrt(J) * math.log2(J) / 2


def _by_distance(J: float, center: float) -> list[float]:
    levels = [float(m) for m in spin.m_values(J)]
    return sorted(levels, key=lambda m: (round(abs(m - center), 9), -m))


def asymptotic_window(J: float, s: float = 0.5) -> ProjectionWindow:
    center = window_center(J, s)
    half_width = asymptotic_half_width(J)
    levels = spin.m_values(J)

    # below J = 2 the window is narrower than the level spacing
    if J < 2:
        kept = [float(m) for m in levels]
    else:
        kept = [float(m) for m in levels if abs(m - center) <= half_width + 1e-12]
        if len(kept) == 0:
            kept = _by_distance(J, center)[:1]
    return ProjectionWindow(
        J=J,
        center=center,
        half_width=half_width,
        kept_m=tuple(sorted(kept, reverse=True)),
        policy='asymptotic',
    )


def budget_window(J: float, s: float, qubits: int, fill: bool = False) -> ProjectionWindow:
    center = window_center(J, s)
    capacity = 2**qubits
    ordered = _by_distance(J, center)

    kept: list[float] = []
    i = 0
    while i < len(ordered):
        distance = round(abs(ordered[i] - center), 9)
        shell = [m for m in ordered[i:] if round(abs(m - center), 9) == distance]
        if len(kept) + len(shell) <= capacity:
            kept.extend(shell)
        else:
            if fill or len(kept) == 0:
                kept.extend(shell[: capacity - len(kept)])
            break
        i += len(shell)

    half_width = max(abs(m - center) for m in kept)
    name = ('qubit-fill=' if fill else 'qubit-budget=') + str(qubits)
    return ProjectionWindow(
        J=J,
        center=center,
        half_width=half_width,
        kept_m=tuple(sorted(kept, reverse=True)),
        policy=name,
    )


def explicit_window(J: float, kept_m: typing.Iterable[float], s: float = 0.5) -> ProjectionWindow:
    """levels of J listed in kept_m; the level nearest the center if none is"""
    wanted = [float(m) for m in kept_m]
    center = window_center(J, s)
    kept = [
        float(m)
        for m in spin.m_values(J)
        if any(abs(m - w) < 1e-9 for w in wanted)
    ]
    if len(kept) == 0:
        kept = _by_distance(J, center)[:1]
    return ProjectionWindow(
        J=J,
        center=center,
        half_width=max(abs(m - center) for m in kept),
        kept_m=tuple(kept),
        policy='explicit',
    )


def projection_window(
    J: float, s: float = 0.5, policy: str | WindowPolicy = 'asymptotic'
) -> ProjectionWindow:
    resolved = parse_window_policy(policy)
    if J == 0:
        return ProjectionWindow(J=0.0, center=0.0, half_width=0.0, kept_m=(0.0,), policy=str(resolved))
    if resolved.kind == 'asymptotic':
        return asymptotic_window(J, s)
    elif resolved.kind in ('qubit-budget', 'qubit-fill'):
        assert resolved.qubits is not None
        return budget_window(J, s, resolved.qubits, fill=resolved.kind == 'qubit-fill')
    elif resolved.kind == 'explicit':
        assert resolved.kept_m is not None
        return explicit_window(J, resolved.kept_m, s)
    else:
        raise exceptions.InvalidArgument('unknown window policy: ' + str(policy))


def expected_memory_qubits(J: float) -> int:
    """ceil(log2(sqrt(J) log2(J) + 1)), the leading-order memory of a window"""
    return int(math.ceil(math.log2(2 * asymptotic_half_width(J) + 1)))


def explicit_policy(kept_m: typing.Iterable[float]) -> WindowPolicy:
    return WindowPolicy(kind='explicit', kept_m=tuple(float(m) for m in kept_m))
