"""Command-line entry points: verification suites, the circle index demo,
and projection-field export."""

import json
import sys

import click
import numpy as np

from .harness import (
    ConfigError,
    SuiteConfig,
    equivariant_toeplitz_demo,
    run_suite,
    toeplitz_index,
    winding_number,
    write_report,
)


@click.group()
def main():
    """Verification toolkit for star products, quantization and projectors."""


def _load_config(config_path, suite, nmax, tol, report, seed, grid, jobs, no_figures):
    data = {}
    if config_path:
        try:
            with open(config_path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}")
    # command-line flags override file values
    if suite:
        data["suites"] = list(suite)
    if nmax is not None:
        data["N_max"] = nmax
    if report is not None:
        data["report_path"] = report
    if seed is not None:
        data["seed"] = seed
    if grid is not None:
        data["grid_size"] = grid
    if jobs is not None:
        data["jobs"] = jobs
    if no_figures:
        data["figures"] = False
    if tol:
        tols = dict(data.get("tolerances", {}))
        for item in tol:
            if "=" not in item:
                raise ConfigError(f"bad --tol value {item!r}; expected metric=value")
            name, _, val = item.partition("=")
            try:
                tols[name] = float(val)
            except ValueError:
                raise ConfigError(f"bad tolerance value {val!r}")
        data["tolerances"] = tols
    return SuiteConfig.from_json(data)


@main.command()
@click.option("--config", "config_path", type=click.Path(), help="JSON config file.")
@click.option("--suite", multiple=True, help="Suite name (repeatable); default all.")
@click.option("--nmax", type=int, default=None, help="Hermite truncation size.")
@click.option("--tol", multiple=True, help="Tolerance override metric=value.")
@click.option("--report", type=click.Path(), default=None, help="Report output path.")
@click.option("--seed", type=int, default=None, help="Random seed.")
@click.option("--grid", type=int, default=None, help="Chern integration grid size.")
@click.option("--jobs", type=int, default=None, help="Parallel workers (reserved).")
@click.option("--no-figures", is_flag=True, help="Skip figure rendering.")
def verify(config_path, suite, nmax, tol, report, seed, grid, jobs, no_figures):
    """Run verification suites and write a JSON report with side tables."""
    try:
        config = _load_config(
            config_path, suite, nmax, tol, report, seed, grid, jobs, no_figures
        )
        config.active_suites()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    result, side_tables = run_suite(config)
    path = write_report(result, side_tables, config)
    s = result["summary"]
    for check in result["checks"]:
        if not check["pass"]:
            click.echo(f"FAIL {check['id']} metric={check['metric']:.3e} tol={check['tol']:.3e}")
    click.echo(f"{s['passed']}/{s['total']} checks passed; report written to {path}")
    sys.exit(0 if s["failed"] == 0 else 1)


@main.group()
def demo():
    """Worked demonstrations."""


@demo.command()
@click.option("--n-modes", "N", type=int, default=256, help="Fourier truncation.")
@click.option("--k", "ks", multiple=True, type=int, help="Shift powers (repeatable).")
def toeplitz(N, ks):
    """Index-equals-minus-winding for Toeplitz operators on the circle."""
    ks = ks or (-3, -2, -1, 0, 1, 2, 3)
    click.echo(f"{'symbol':>14} {'winding':>8} {'index':>6}")
    for k in ks:
        f = {k: 1.0}
        idx = toeplitz_index(f, N)
        click.echo(f"{f'e^(i {k} theta)':>14} {winding_number(f, N):>8} {idx:>6}")
    for k in (1, 3):
        d = equivariant_toeplitz_demo(k, N)
        click.echo(
            f"equivariant k={k}: cokernel rotation weights {d['coker_weights']}"
            f" (predicted {d['predicted_coker']})"
        )


@main.command("export")
@click.argument("what", type=click.Choice(["field"]))
@click.option("--name", type=click.Choice(["bott", "sphere", "e0"]), default="bott")
@click.option("--tau", type=float, default=1.0, help="Family parameter for e0.")
@click.option("--extent", type=float, default=3.0, help="Half-width of the sample box.")
@click.option("--samples", type=int, default=21, help="Samples per axis.")
@click.option("--out", type=click.Path(), default="field.csv", help="CSV output path.")
def export(what, name, tau, extent, samples, out):
    """Export samples of a projection field to CSV."""
    from .deform import pointwise_family_e0
    from .projectors import bott_projector, export_field_csv, sphere_projector

    if name == "bott":
        field = bott_projector(1)
    elif name == "e0":
        field = pointwise_family_e0(tau)
    else:
        field = sphere_projector(1)
    axis = np.linspace(-extent, extent, samples)
    if name == "sphere":
        us = np.linspace(0.05, np.pi - 0.05, samples)
        phis = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        points = [
            [np.sin(u) * np.cos(p), np.sin(u) * np.sin(p), np.cos(u)]
            for u in us
            for p in phis
        ]
    else:
        points = [[x, y] for x in axis for y in axis]
    export_field_csv(field, points, out)
    click.echo(f"wrote {len(points)} samples to {out}")


if __name__ == "__main__":
    main()
