#!/usr/bin/env python3
"""
hdrgamut - Command Line Interface
=================================

Main CLI entry point: ``hdr-gamut map | boundary | metrics | curves``.
"""

import logging
from contextlib import contextmanager
from typing import Iterator, List, NoReturn, Optional

import click
import typer
from rich.console import Console
from rich.table import Table
from typer.core import TyperGroup

from ..errors import ConfigurationError, exit_code_for
from .codecs import save_false_colour_png
from .commands import PipelineCommands
from .pipeline import PipelineConfig

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("hdrgamut-cli")


@contextmanager
def _usage_errors_as_input_errors() -> Iterator[None]:
    try:
        yield
    except click.UsageError as error:
        error.exit_code = exit_code_for(ConfigurationError(error.format_message()))
        raise


class InputErrorGroup(TyperGroup):
    """Command group reporting bad or missing options with the input-error exit status"""

    def make_context(self, info_name, args, parent=None, **extra):
        with _usage_errors_as_input_errors():
            return super().make_context(info_name, args, parent=parent, **extra)

    def invoke(self, ctx):
        with _usage_errors_as_input_errors():
            return super().invoke(ctx)


# Create Typer app
app = typer.Typer(cls=InputErrorGroup, help="hdrgamut - HDR tone and gamut management")

# Rich console for pretty output
console = Console()


def _fail(error: Exception) -> NoReturn:
    logger.debug("Command failed", exc_info=error)
    console.print(f"[red]Error: {error}[/]")
    raise typer.Exit(exit_code_for(error))


@app.callback()
def main(debug: bool = typer.Option(False, "--debug", help="Enable debug logging")):
    """HDR gamut and tone management."""
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)


@app.command("map")
def map_command(
    input: str = typer.Option(..., "--input", "-i", help="Scene-referred input (.hdr or .pfm)"),
    output: str = typer.Option(..., "--output", "-o", help="Output PNG"),
    tmo: Optional[str] = typer.Option(None, help="photographic or cusp"),
    key: Optional[float] = typer.Option(None, help="Photographic key"),
    chroma: Optional[str] = typer.Option(None, help="hue-specific, global or none"),
    clip: Optional[str] = typer.Option(None, help="interp, chroma, lightness or none"),
    clip_weight: Optional[float] = typer.Option(None, "--clip-weight", help="Interpolation weight t"),
    target: Optional[str] = typer.Option(None, help="Preset name (srgb) or chromaticities file"),
    anchor: Optional[str] = typer.Option(None, help="HDR anchor for the cusp path: logavg50 or none"),
    diag: Optional[str] = typer.Option(None, help="Directory for diagnostics"),
    config: Optional[str] = typer.Option(None, "--config", help="YAML or JSON pipeline configuration"),
    compression: Optional[str] = typer.Option(None, help="Top-branch function: log, sqrt or reinhard"),
    ceiling: Optional[str] = typer.Option(None, help="Lightness ceiling: cusp or white"),
    global_sg: Optional[bool] = typer.Option(None, "--global-sg/--per-slice-sg", help="Global lightness overshoots"),
    spread_percentile: Optional[float] = typer.Option(None, "--spread-percentile"),
    concentrated_percentile: Optional[float] = typer.Option(None, "--concentrated-percentile"),
    filter_method: Optional[str] = typer.Option(None, "--filter", help="Bilateral filter: auto, direct or grid"),
):
    """Tone map and gamut map an HDR image to a PNG."""
    try:
        cfg = PipelineConfig.resolve(
            config_file=config, input=input, output=output, tmo=tmo, key=key, chroma=chroma, clip=clip,
            clip_weight=clip_weight, target=target, anchor=anchor, diag=diag, compression=compression,
            ceiling=ceiling, global_sg=global_sg, spread_percentile=spread_percentile,
            concentrated_percentile=concentrated_percentile, filter_method=filter_method,
        )
        result = PipelineCommands(cfg.target, cfg.boundary_samples).map_image(cfg)
    except Exception as e:
        _fail(e)

    table = Table(title="Out-of-gamut pixels per stage")
    table.add_column("Stage", style="cyan")
    table.add_column("Fraction", justify="right")
    for stage_name, fraction in result.oog.items():
        table.add_row(stage_name, f"{fraction:.4%}")
    console.print(table)

    if result.chroma is not None:
        console.print(f"[bold]Percentile:[/] {result.chroma.percentile}")
        if result.chroma.global_scale is not None:
            console.print(f"[bold]Global scale:[/] {result.chroma.global_scale:.4f}")
    if result.clip_report is not None:
        console.print(f"[bold]Clipped pixels:[/] {result.clip_report.moved}")
    console.print(f"[bold]Mean hue shift:[/] {result.hue_report.mean_dh:.3f} deg")
    console.print(f"[green]✓[/] Wrote {cfg.output}")


@app.command("boundary")
def boundary_command(
    target: str = typer.Option("srgb", help="Preset name (srgb) or chromaticities file"),
    out: str = typer.Option(..., "--out", help="Output text file"),
    samples: Optional[int] = typer.Option(None, help="Samples per cube edge (>= 64)"),
):
    """Export the cusp table of a target gamut."""
    try:
        summary = PipelineCommands(target, samples).export_boundary(out)
    except Exception as e:
        _fail(e)

    table = Table(title=f"Gamut boundary: {target}")
    table.add_column("Property", style="cyan")
    table.add_column("Value", justify="right")
    for name, value in summary.items():
        table.add_row(name, f"{value:.4f}" if isinstance(value, float) else str(value))
    console.print(table)
    console.print(f"[green]✓[/] Wrote {out}")


@app.command("metrics")
def metrics_command(
    ref: str = typer.Option(..., "--ref", help="Display-referred reference image"),
    test: str = typer.Option(..., "--test", help="Display-referred test image"),
    target: str = typer.Option("srgb", help="Preset name or chromaticities file (for the white point)"),
    map_out: Optional[str] = typer.Option(None, "--map", help="Write the hue-difference map as a PNG"),
):
    """
    Hue differences between two display-referred images.

    HDR inputs are read with unit RGB white at display white.
    """
    try:
        report = PipelineCommands(target).compare(ref, test)
        if map_out:
            save_false_colour_png(map_out, report.map)
    except Exception as e:
        _fail(e)

    table = Table(title="Hue differences (IPT)")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("mean delta h", f"{report.mean_dh:.4f}")
    table.add_row("standard error", f"{report.stderr_dh:.4f}")
    table.add_row("valid pixels", str(report.valid_pixels))
    console.print(table)
    if report.no_chromatic_pixels:
        console.print("[yellow]No chromatic pixels: hue is undefined everywhere[/]")


@app.command("curves")
def curves_command(
    input: str = typer.Option(..., "--input", "-i", help="Scene-referred input (.hdr or .pfm)"),
    out: str = typer.Option(..., "--out", help="Output text file"),
    hue: List[int] = typer.Option([0, 90, 180, 270], "--hue", help="Hue slice to sample (repeatable)"),
    chroma: float = typer.Option(0.0, help="Chroma at which the curves are evaluated"),
    samples: Optional[int] = typer.Option(None, help="Samples per curve"),
    target: Optional[str] = typer.Option(None, help="Preset name (srgb) or chromaticities file"),
    anchor: Optional[str] = typer.Option(None, help="logavg50 or none"),
    compression: Optional[str] = typer.Option(None, help="log, sqrt or reinhard"),
    ceiling: Optional[str] = typer.Option(None, help="cusp or white"),
):
    """Dump cusp-aligned tone curves fitted on an HDR image."""
    try:
        cfg = PipelineConfig.resolve(input=input, target=target, anchor=anchor, compression=compression,
                                     ceiling=ceiling)
        curves = PipelineCommands(cfg.target, cfg.boundary_samples).tone_curves(
            cfg, hue, chroma=chroma, samples=samples, out=out)
    except Exception as e:
        _fail(e)

    table = Table(title="Cusp-aligned tone curves")
    table.add_column("Hue", style="cyan", justify="right")
    table.add_column("Max input L", justify="right")
    table.add_column("Max output L", justify="right")
    for curve in curves:
        table.add_row(str(curve.hue), f"{curve.inputs.max():.2f}", f"{curve.outputs.max():.2f}")
    console.print(table)
    console.print(f"[green]✓[/] Wrote {out}")


if __name__ == "__main__":
    app()
