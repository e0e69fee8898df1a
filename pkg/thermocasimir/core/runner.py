from __future__ import annotations

import logging
import uuid
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable

from thermocasimir.core import units
from thermocasimir.core.errors import ModelSpecError
from thermocasimir.core.events import EventBus, EventType, PointPayload, SweepEvent, SweepTally
from thermocasimir.core.types import (
    DifferentiationConfig,
    DispersionModel,
    Method,
    PlateGeometry,
    QuadratureConfig,
    Quantity,
    SeriesParams,
    SweepPoint,
    ThermoResult,
)
from thermocasimir.physics import lifshitz
from thermocasimir.physics.ideal_metal import ideal_thermo, mim_thermo

logger = logging.getLogger(__name__)

ModelResolver = Callable[[str], DispersionModel]


@dataclass(slots=True)
class RunnerOptions:
    quantity: Quantity = Quantity.FORCE
    method: Method = Method.AUTO
    workers: int = 4


def analytic_result(model: DispersionModel, geom: PlateGeometry, quantity: Quantity) -> ThermoResult:
    """Closed-form ideal-metal series, converted to CLI units."""
    if not model.is_ideal:
        raise ModelSpecError(f"analytic method needs an ideal-metal model, got {model.label or model.kind.value}")
    params = SeriesParams(gamma=geom.gamma)
    series = ideal_thermo(params, geom.a_um) if model.sdm else mim_thermo(params, geom.a_um)

    fields: dict[str, float | None] = {}
    if quantity in (Quantity.FORCE, Quantity.THERMO):
        fields["pressure"] = units.natural_pressure_to_mpa(series.pressure)
    if quantity in (Quantity.FREE_ENERGY, Quantity.THERMO):
        fields["free_energy"] = units.natural_energy_to_nj_m2(series.free_energy)
    if quantity == Quantity.THERMO:
        assert series.internal_energy is not None and series.entropy is not None
        fields["internal_energy"] = units.natural_energy_to_nj_m2(series.internal_energy)
        fields["entropy"] = units.natural_entropy_to_nj_m2_k(series.entropy)

    return ThermoResult(
        model=model.label,
        a_um=geom.a_um,
        t_kelvin=geom.t_kelvin,
        terms_used=series.terms_used,
        converged=series.converged,
        method=Method.ANALYTIC,
        **fields,
    )


class SweepRunner:
    def __init__(
        self,
        *,
        options: RunnerOptions,
        resolve_model: ModelResolver,
        quadrature: QuadratureConfig | None = None,
        differentiation: DifferentiationConfig | None = None,
        event_bus: EventBus | None = None,
    ):
        self.options = options
        self.resolve_model = resolve_model
        self.quadrature = quadrature or QuadratureConfig()
        self.differentiation = differentiation or DifferentiationConfig()
        self.event_bus = event_bus

    def evaluate(self, model: DispersionModel, geom: PlateGeometry) -> ThermoResult:
        method = self.options.method
        if method == Method.ANALYTIC or (method == Method.AUTO and model.is_ideal):
            return analytic_result(model, geom, self.options.quantity)

        quantity = self.options.quantity
        if quantity == Quantity.FORCE:
            return lifshitz.pressure(model, geom, self.quadrature)
        if quantity == Quantity.FREE_ENERGY:
            return lifshitz.free_energy(model, geom, self.quadrature)
        return lifshitz.thermo(model, geom, self.quadrature, self.differentiation)

    def run(self, points: list[SweepPoint]) -> list[ThermoResult]:
        """Evaluate every point; results come back in input order."""
        sweep_id = uuid.uuid4().hex
        models: dict[str, DispersionModel] = {}
        for point in points:
            if point.model_spec not in models:
                models[point.model_spec] = self.resolve_model(point.model_spec)

        self._emit(SweepEvent(EventType.SWEEP_STARTED, sweep_id, tally=SweepTally(points=len(points))))
        results: list[ThermoResult | None] = [None] * len(points)
        with ThreadPoolExecutor(max_workers=max(1, self.options.workers)) as pool:
            futures = {
                pool.submit(
                    self.evaluate,
                    models[point.model_spec],
                    PlateGeometry(a_um=point.a_um, t_kelvin=point.t_kelvin),
                ): index
                for index, point in enumerate(points)
            }
            for future in as_completed(futures):
                index = futures[future]
                result = future.result()
                results[index] = result
                payload = PointPayload.from_result(result)
                self._emit(SweepEvent(EventType.POINT_COMPLETED, sweep_id, index=index, point=payload))
                if not result.converged:
                    self._emit(SweepEvent(EventType.POINT_FLAGGED, sweep_id, index=index, point=payload))

        finished = [result for result in results if result is not None]
        flagged = sum(1 for result in finished if not result.converged)
        tally = SweepTally(points=len(finished), flagged=flagged)
        self._emit(SweepEvent(EventType.SWEEP_COMPLETED, sweep_id, tally=tally))
        return finished

    def _emit(self, event: SweepEvent) -> None:
        if self.event_bus is not None:
            self.event_bus.emit(event)
