"""Progress events for parameter sweeps.

A sweep publishes SWEEP_STARTED, one POINT_COMPLETED per grid point (and a
POINT_FLAGGED when the Matsubara cap stopped the sum early), then
SWEEP_COMPLETED with the final tally.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from thermocasimir.core.types import ThermoResult

logger = logging.getLogger(__name__)


class EventType(str, Enum):
    SWEEP_STARTED = "sweep.started"
    POINT_COMPLETED = "point.completed"
    POINT_FLAGGED = "point.flagged"
    SWEEP_COMPLETED = "sweep.completed"


@dataclass(slots=True, frozen=True)
class PointPayload:
    model: str
    a_um: float
    t_kelvin: float
    converged: bool
    terms_used: int

    @classmethod
    def from_result(cls, result: ThermoResult) -> PointPayload:
        return cls(
            model=result.model,
            a_um=result.a_um,
            t_kelvin=result.t_kelvin,
            converged=result.converged,
            terms_used=result.terms_used,
        )


@dataclass(slots=True, frozen=True)
class SweepTally:
    points: int
    flagged: int = 0


@dataclass(slots=True, frozen=True)
class SweepEvent:
    event_type: EventType
    sweep_id: str
    index: int | None = None
    point: PointPayload | None = None
    tally: SweepTally | None = None


SweepHandler = Callable[[SweepEvent], None]


class EventBus:
    """Synchronous dispatch on the emitting thread.

    A handler that raises is logged and skipped.
    """

    def __init__(self) -> None:
        self._by_type: dict[EventType, list[SweepHandler]] = {kind: [] for kind in EventType}
        self._every: list[SweepHandler] = []

    def subscribe(self, event_type: EventType, handler: SweepHandler) -> None:
        self._by_type[event_type].append(handler)

    def subscribe_all(self, handler: SweepHandler) -> None:
        self._every.append(handler)

    def unsubscribe(self, handler: SweepHandler) -> None:
        for handlers in (*self._by_type.values(), self._every):
            while handler in handlers:
                handlers.remove(handler)

    def emit(self, event: SweepEvent) -> None:
        for handler in (*self._by_type[event.event_type], *self._every):
            try:
                handler(event)
            except Exception:
                logger.exception("sweep %s: handler %r failed on %s", event.sweep_id, handler, event.event_type.value)
