from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import typer
from pydantic import ValidationError

from thermocasimir.core.config import CasimirConfig, ConfigError, load_config, load_presets
from thermocasimir.core.csv_export import (
    COEFFICIENT_COLUMNS,
    MODE_COLUMNS,
    NU_COLUMNS,
    THERMO_COLUMNS,
    TOY_COLUMNS,
    coefficient_rows,
    mode_rows,
    render_csv,
    thermo_row,
    toy_row,
)
from thermocasimir.core.errors import CasimirError
from thermocasimir.core.events import EventBus, EventType, SweepEvent
from thermocasimir.core.factory import build_runner, parse_model_spec, resolve_data_dir
from thermocasimir.core.types import (
    CouplingKind,
    DrudeParams,
    Method,
    OscillatorSystem,
    PlateGeometry,
    QuadratureConfig,
    Quantity,
    SweepPoint,
    ThermoResult,
)
from thermocasimir.physics.dispersion import nu_bloch_gruneisen
from thermocasimir.physics.lifshitz import mode_breakdown
from thermocasimir.physics.optical_data import (
    build_spectral_table,
    default_zeta_grid,
    drude_optical_table,
    load_optical_table,
    write_optical_table,
    write_spectral_table,
)
from thermocasimir.physics.oscillator import induced_entropy

logger = logging.getLogger(__name__)

EXIT_FLAGGED = 2
EXIT_USAGE = 2

_run_flagged = False


def _flagged_exit() -> typer.Exit:
    global _run_flagged
    _run_flagged = True
    return typer.Exit(code=EXIT_FLAGGED)


app = typer.Typer(help="Thermal Casimir pressure, free energy and entropy between parallel plates")
tables_app = typer.Typer(help="Build optical-constant and spectral tables")
app.add_typer(tables_app, name="tables")

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def _fail(message: str) -> typer.Exit:
    typer.echo(message, err=True)
    return typer.Exit(code=1)


def _setup(config_path: Path | None, log_level: str | None) -> CasimirConfig:
    try:
        config = load_config(path=config_path).config
    except ConfigError as exc:
        raise _fail(f"config error: {exc}")

    level = (log_level or config.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise _fail(f"unknown log level: {level.lower()}")
    logging.basicConfig(level=getattr(logging, level), format=_LOG_FORMAT)
    return config


def _with_quadrature(
    config: CasimirConfig,
    *,
    y_max: float | None,
    rel_tol: float | None,
    m_max: int | None,
) -> CasimirConfig:
    overrides = {
        key: value
        for key, value in (("y_max", y_max), ("rel_tol", rel_tol), ("m_max", m_max))
        if value is not None
    }
    if not overrides:
        return config
    try:
        quadrature = QuadratureConfig.model_validate({**config.quadrature.model_dump(), **overrides})
    except ValidationError as exc:
        raise _fail(f"invalid quadrature settings: {exc.errors()[0]['msg']}")
    return config.model_copy(update={"quadrature": quadrature})


def _parse_range(text: str, *, name: str, log: bool = False) -> list[float]:
    """``start:stop:count``; a bare number is a one-point range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _fail(f"{name}: expected start:stop:count, got {text!r}")
    if count < 1 or (count > 1 and not stop > start):
        raise _fail(f"{name}: range must be nonempty and increasing")
    if count == 1:
        return [start]
    if log:
        if start <= 0:
            raise _fail(f"{name}: logarithmic spacing needs a positive start")
        return [float(v) for v in np.geomspace(start, stop, count)]
    return [float(v) for v in np.linspace(start, stop, count)]


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        typer.echo(text, nl=False)
        return
    output = output.expanduser()
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    typer.echo(f"wrote {output}", err=True)


def _log_flagged(event: SweepEvent) -> None:
    point = event.point
    if point is None:
        return
    logger.warning(
        "point %s flagged: %s a=%g um T=%g K stopped at %d Matsubara terms",
        event.index,
        point.model,
        point.a_um,
        point.t_kelvin,
        point.terms_used,
    )


def _run_points(
    config: CasimirConfig,
    *,
    quantity: Quantity,
    method: Method,
    points: list[SweepPoint],
    output: Path | None,
) -> None:
    bus = EventBus()
    bus.subscribe(EventType.POINT_FLAGGED, _log_flagged)
    runner = build_runner(config, quantity=quantity, method=method, event_bus=bus)
    try:
        results: list[ThermoResult] = runner.run(points)
    except CasimirError as exc:
        raise _fail(f"error: {exc}")

    _emit(render_csv([thermo_row(result) for result in results], THERMO_COLUMNS), output)
    if any(not result.converged for result in results):
        raise _flagged_exit()


def _points(model: str, a_values: list[float], t_values: list[float]) -> list[SweepPoint]:
    try:
        return [SweepPoint(model_spec=model, a_um=a, t_kelvin=t) for a in a_values for t in t_values]
    except ValidationError as exc:
        raise _fail(f"invalid point: {exc.errors()[0]['msg']}")


_MODEL_HELP = "ideal, ideal-mim, const:<eps>, drude-gold, drude-gold-bg, plasma:<omega_p eV> or table:<path>"


def _single_point_command(quantity: Quantity):
    def command(
        model: str = typer.Option("ideal", "--model", help=_MODEL_HELP),
        a_um: float = typer.Option(..., "--a", help="Gap width in um"),
        t_kelvin: float = typer.Option(..., "--T", help="Temperature in K"),
        output: Path | None = typer.Option(None, "--output", help="CSV output path (default stdout)"),
        method: Method = typer.Option(Method.AUTO, "--method", help="auto, numeric or analytic"),
        y_max: float | None = typer.Option(None, "--y-max", help="Upper integration cutoff"),
        rel_tol: float | None = typer.Option(None, "--rel-tol", help="Relative tolerance"),
        m_max: int | None = typer.Option(None, "--m-max", help="Matsubara term cap"),
        config_path: Path | None = typer.Option(None, "--config", help="YAML config file"),
        log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
    ) -> None:
        config = _with_quadrature(_setup(config_path, log_level), y_max=y_max, rel_tol=rel_tol, m_max=m_max)
        _run_points(
            config,
            quantity=quantity,
            method=method,
            points=_points(model, [a_um], [t_kelvin]),
            output=output,
        )

    return command


app.command("force", help="Casimir pressure (mPa, negative is attractive) at one point.")(
    _single_point_command(Quantity.FORCE)
)
app.command("free-energy", help="Free energy per area (nJ/m^2) at one point.")(
    _single_point_command(Quantity.FREE_ENERGY)
)
app.command("thermo", help="Pressure, free energy, internal energy and entropy at one point.")(
    _single_point_command(Quantity.THERMO)
)


@app.command("sweep")
def sweep_command(
    model: str = typer.Option("ideal", "--model", help=_MODEL_HELP),
    quantity: Quantity = typer.Option(Quantity.FORCE, "--quantity", help="force, free-energy or thermo"),
    a_range: str = typer.Option("1.0", "--a", help="Gap in um, or start:stop:count"),
    t_range: str = typer.Option(..., "--T", help="Temperature in K, or start:stop:count"),
    log_spacing: bool = typer.Option(False, "--log-spacing", help="Geometric spacing for ranges"),
    workers: int | None = typer.Option(None, "--workers", help="Concurrent sweep workers"),
    output: Path | None = typer.Option(None, "--output", help="CSV output path (default stdout)"),
    method: Method = typer.Option(Method.AUTO, "--method", help="auto, numeric or analytic"),
    y_max: float | None = typer.Option(None, "--y-max", help="Upper integration cutoff"),
    rel_tol: float | None = typer.Option(None, "--rel-tol", help="Relative tolerance"),
    m_max: int | None = typer.Option(None, "--m-max", help="Matsubara term cap"),
    config_path: Path | None = typer.Option(None, "--config", help="YAML config file"),
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
) -> None:
    """Evaluate a grid of gaps and temperatures; rows follow input order."""
    config = _with_quadrature(_setup(config_path, log_level), y_max=y_max, rel_tol=rel_tol, m_max=m_max)
    if workers is not None:
        if workers < 1:
            raise _fail("--workers must be >= 1")
        config = config.model_copy(update={"sweep": config.sweep.model_copy(update={"workers": workers})})

    a_values = _parse_range(a_range, name="--a", log=log_spacing)
    t_values = _parse_range(t_range, name="--T", log=log_spacing)
    _run_points(config, quantity=quantity, method=method, points=_points(model, a_values, t_values), output=output)


@app.command("modes")
def modes_command(
    model: str = typer.Option("drude-gold", "--model", help=_MODEL_HELP),
    a_um: float = typer.Option(..., "--a", help="Gap width in um"),
    t_kelvin: float = typer.Option(..., "--T", help="Temperature in K"),
    coefficients: bool = typer.Option(False, "--coefficients", help="Emit A_m, B_m samples instead of shares"),
    output: Path | None = typer.Option(None, "--output", help="CSV output path (default stdout)"),
    y_max: float | None = typer.Option(None, "--y-max", help="Upper integration cutoff"),
    rel_tol: float | None = typer.Option(None, "--rel-tol", help="Relative tolerance"),
    m_max: int | None = typer.Option(None, "--m-max", help="Matsubara term cap"),
    config_path: Path | None = typer.Option(None, "--config", help="YAML config file"),
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
) -> None:
    """Percentage of the pressure carried by each Matsubara mode."""
    config = _with_quadrature(_setup(config_path, log_level), y_max=y_max, rel_tol=rel_tol, m_max=m_max)
    try:
        geom = PlateGeometry(a_um=a_um, t_kelvin=t_kelvin)
    except ValidationError as exc:
        raise _fail(f"invalid point: {exc.errors()[0]['msg']}")

    try:
        dispersion = parse_model_spec(model, data_dir=resolve_data_dir(config))
        breakdown = mode_breakdown(dispersion, geom, config.quadrature)
    except CasimirError as exc:
        raise _fail(f"error: {exc}")

    if coefficients:
        _emit(render_csv(coefficient_rows(breakdown), COEFFICIENT_COLUMNS), output)
    else:
        _emit(render_csv(mode_rows(breakdown), MODE_COLUMNS), output)
    if not breakdown.converged:
        raise _flagged_exit()


@app.command("toy")
def toy_command(
    kind: str = typer.Option("both", "--kind", help="coordinate, momentum or both"),
    t_range: str = typer.Option("0.05:2.0:40", "--T", help="Temperature (oscillator units), or start:stop:count"),
    a1: float | None = typer.Option(None, "--a1", help="Squared frequency of oscillator 1"),
    a2: float | None = typer.Option(None, "--a2", help="Squared frequency of oscillator 2"),
    a3: float | None = typer.Option(None, "--a3", help="Squared frequency of the mediating oscillator"),
    coupling: float | None = typer.Option(None, "--c", help="Coupling strength"),
    output: Path | None = typer.Option(None, "--output", help="CSV output path (default stdout)"),
    config_path: Path | None = typer.Option(None, "--config", help="YAML config file"),
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
) -> None:
    """Induced free energy and entropy curves of the three-oscillator model."""
    config = _setup(config_path, log_level)
    if kind not in ("coordinate", "momentum", "both"):
        raise _fail(f"unknown --kind {kind!r}")
    kinds = [CouplingKind.COORDINATE, CouplingKind.MOMENTUM] if kind == "both" else [CouplingKind(kind)]

    preset = load_presets().oscillator["default"]
    params = {
        "a1": preset.a1 if a1 is None else a1,
        "a2": preset.a2 if a2 is None else a2,
        "a3": preset.a3 if a3 is None else a3,
        "c": preset.c if coupling is None else coupling,
    }
    temperatures = _parse_range(t_range, name="--T")
    if any(t <= 0 for t in temperatures):
        raise _fail("--T must be positive")

    rows = []
    flagged = False
    try:
        for coupling_kind in kinds:
            system = OscillatorSystem(kind=coupling_kind, **params)
            for temperature in temperatures:
                result = induced_entropy(system, temperature, config.differentiation)
                flagged = flagged or not result.converged
                rows.append(toy_row(coupling_kind.value, result))
    except ValidationError as exc:
        raise _fail(f"invalid oscillator system: {exc.errors()[0]['msg']}")
    except CasimirError as exc:
        raise _fail(f"error: {exc}")

    _emit(render_csv(rows, TOY_COLUMNS), output)
    if flagged:
        raise _flagged_exit()


@app.command("nu")
def nu_command(
    preset: str = typer.Option("gold", "--preset", help="Relaxation preset name"),
    t_range: str = typer.Option(..., "--T", help="Temperature in K, or start:stop:count"),
    output: Path | None = typer.Option(None, "--output", help="CSV output path (default stdout)"),
    config_path: Path | None = typer.Option(None, "--config", help="YAML config file"),
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level"),
) -> None:
    """Bloch-Gruneisen relaxation frequency nu(T) in eV."""
    _setup(config_path, log_level)
    presets = load_presets()
    if preset not in presets.relaxation:
        raise _fail(f"unknown relaxation preset {preset!r}; known: {', '.join(sorted(presets.relaxation))}")
    params = presets.relaxation[preset]

    try:
        rows = [
            {"t_kelvin": t, "nu_ev": nu_bloch_gruneisen(t, params)}
            for t in _parse_range(t_range, name="--T")
        ]
    except CasimirError as exc:
        raise _fail(f"error: {exc}")
    _emit(render_csv(rows, NU_COLUMNS), output)


@tables_app.command("synth-drude")
def tables_synth_drude(
    output: Path = typer.Option(..., "--output", help="Optical constants CSV to write"),
    preset: str = typer.Option("gold", "--preset", help="Drude preset name"),
    omega_min: float = typer.Option(1e-4, "--omega-min", help="Lowest real frequency (eV)"),
    omega_max: float = typer.Option(1e3, "--omega-max", help="Highest real frequency (eV)"),
    points: int = typer.Option(400, "--points", help="Logarithmically spaced grid points"),
) -> None:
    """Write synthetic optical constants n(omega) of a Drude metal."""
    presets = load_presets()
    if preset not in presets.drude:
        raise _fail(f"unknown drude preset {preset!r}; known: {', '.join(sorted(presets.drude))}")
    if not (0 < omega_min < omega_max) or points < 2:
        raise _fail("need 0 < omega-min < omega-max and at least 2 points")

    params: DrudeParams = presets.drude[preset]
    table = drude_optical_table(params, np.geomspace(omega_min, omega_max, points))
    path = write_optical_table(table, output.expanduser())
    typer.echo(f"wrote {len(table.entries)} rows to {path}")


@tables_app.command("build")
def tables_build(
    input_path: Path = typer.Option(..., "--input", help="Optical constants CSV (omega_ev,n_re,n_im)"),
    output: Path = typer.Option(..., "--output", help="Spectral table CSV to write (zeta_ev,eps)"),
    points: int = typer.Option(141, "--points", help="Points on the 1e-4..1e3 eV zeta grid"),
) -> None:
    """Kramers-Kronig transform optical data into eps(i zeta)."""
    try:
        optical = load_optical_table(input_path.expanduser())
        spectral = build_spectral_table(optical, default_zeta_grid(points), source=str(input_path))
    except CasimirError as exc:
        raise _fail(f"error: {exc}")
    path = write_spectral_table(spectral, output.expanduser())
    typer.echo(f"wrote {len(spectral.entries)} rows to {path}")


def main() -> None:
    """Console entry point; usage errors exit 1, flagged rows keep exit 2."""
    global _run_flagged
    _run_flagged = False
    try:
        app()
    except SystemExit as exc:
        if exc.code == EXIT_USAGE and not _run_flagged:
            raise SystemExit(1) from exc
        raise


if __name__ == "__main__":
    main()
