"""Tests for sweep progress events."""

from __future__ import annotations

import logging

import pytest

from thermocasimir.core.events import EventBus, EventType, PointPayload, SweepEvent, SweepTally
from thermocasimir.core.types import ThermoResult


def _flagged(index: int = 0) -> SweepEvent:
    point = PointPayload(model="const:1000", a_um=1.0, t_kelvin=300.0, converged=False, terms_used=2)
    return SweepEvent(EventType.POINT_FLAGGED, "s1", index=index, point=point)


def test_typed_subscriber_sees_only_its_type() -> None:
    bus = EventBus()
    flagged: list[SweepEvent] = []
    bus.subscribe(EventType.POINT_FLAGGED, flagged.append)

    bus.emit(SweepEvent(EventType.POINT_COMPLETED, "s1", index=3))
    bus.emit(_flagged(index=3))

    assert len(flagged) == 1
    assert flagged[0].point is not None
    assert flagged[0].point.terms_used == 2


def test_subscribe_all_sees_every_event_in_order() -> None:
    bus = EventBus()
    received: list[SweepEvent] = []
    bus.subscribe_all(received.append)

    bus.emit(SweepEvent(EventType.SWEEP_STARTED, "s1", tally=SweepTally(points=1)))
    bus.emit(_flagged())
    bus.emit(SweepEvent(EventType.SWEEP_COMPLETED, "s1", tally=SweepTally(points=1, flagged=1)))

    assert [event.event_type for event in received] == [
        EventType.SWEEP_STARTED,
        EventType.POINT_FLAGGED,
        EventType.SWEEP_COMPLETED,
    ]
    assert received[-1].tally == SweepTally(points=1, flagged=1)


def test_unsubscribe_removes_handler_everywhere() -> None:
    bus = EventBus()
    received: list[SweepEvent] = []
    bus.subscribe(EventType.POINT_FLAGGED, received.append)
    bus.subscribe_all(received.append)

    bus.unsubscribe(received.append)
    bus.emit(_flagged())

    assert received == []


def test_failing_handler_is_logged_and_skipped(caplog: pytest.LogCaptureFixture) -> None:
    bus = EventBus()
    received: list[SweepEvent] = []

    def broken(event: SweepEvent) -> None:
        raise RuntimeError("boom")

    bus.subscribe(EventType.POINT_FLAGGED, broken)
    bus.subscribe(EventType.POINT_FLAGGED, received.append)

    with caplog.at_level(logging.ERROR, logger="thermocasimir.core.events"):
        bus.emit(_flagged())

    assert len(received) == 1
    assert "point.flagged" in caplog.text


def test_payload_from_result() -> None:
    result = ThermoResult(model="ideal", a_um=0.5, t_kelvin=10.0, terms_used=7, converged=True)
    assert PointPayload.from_result(result) == PointPayload(
        model="ideal", a_um=0.5, t_kelvin=10.0, converged=True, terms_used=7
    )


def test_event_type_values() -> None:
    assert EventType.POINT_FLAGGED.value == "point.flagged"
    assert EventType("sweep.completed") is EventType.SWEEP_COMPLETED
