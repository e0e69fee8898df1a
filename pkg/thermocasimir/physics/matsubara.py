"""Truncation bookkeeping and differencing shared by the Matsubara sums."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field


@dataclass(slots=True)
class TruncationMonitor:
    """Stops a sum once `patience` consecutive terms are negligible.

    A term is negligible when its magnitude, extended by the geometric tail
    implied by the ratio to its predecessor, stays below rel_tol times the
    running partial sum.
    """

    rel_tol: float
    patience: int = 3
    _small: int = field(default=0, init=False)
    _previous: float | None = field(default=None, init=False)

    def update(self, term: float, partial: float) -> bool:
        magnitude = abs(term)
        tail = magnitude
        if self._previous is not None and 0.0 < magnitude < self._previous:
            tail = magnitude / (1.0 - magnitude / self._previous)
        self._previous = magnitude

        if tail <= self.rel_tol * abs(partial):
            self._small += 1
        else:
            self._small = 0
        return self._small >= self.patience


def richardson_derivative(func: Callable[[float], float], x: float, step: float) -> float:
    """Central difference at steps h and h/2, combined to cancel the h^2 error."""
    coarse = (func(x + step) - func(x - step)) / (2.0 * step)
    half = 0.5 * step
    fine = (func(x + half) - func(x - half)) / (2.0 * half)
    return (4.0 * fine - coarse) / 3.0


def derivative_step(x: float, rel_step: float, floor: float) -> float:
    return max(rel_step * abs(x), floor)
