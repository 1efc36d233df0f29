"""Figure rendering for verification reports.

Uses the Agg backend so figures render headlessly; every function writes a
PNG next to the report and returns the path.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def plot_tau_convergence(table, path):
    """Semilog decay of the family idempotent toward its endpoint."""
    taus = [r["tau"] for r in table["rows"]]
    dists = [r["distance"] for r in table["rows"]]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(taus, dists, "o-", label="distance to limit")
    ref = dists[0] * np.exp(table["log_slope"] * (np.array(taus) - taus[0]))
    ax.semilogy(taus, ref, "--", color="gray", label=f"slope {table['log_slope']:.2f}")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("operator-norm distance")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_lambda_continuity(table, path):
    """Increments of the family along the deformation-parameter grid."""
    mids = [(r["lam_from"] + r["lam_to"]) / 2 for r in table["rows"]]
    incs = [r["increment"] for r in table["rows"]]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(mids, incs, "s-")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("norm increment")
    ax.set_title(f"Lipschitz estimate {table['lipschitz_estimate']:.3f}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_curvature_map(field, path, extent=3.0, samples=81):
    """Heatmap of the curvature 2-form density of a planar projection field."""
    from .projectors import _curvature_form

    xs = np.linspace(-extent, extent, samples)
    ex, ey = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    density = np.zeros((samples, samples))
    for i, y in enumerate(xs):
        for j, x in enumerate(xs):
            val = _curvature_form(field, np.array([x, y]), ex, ey, 1e-5)
            density[i, j] = float(np.imag(val)) / (2 * np.pi)
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(
        density, origin="lower", extent=[-extent, extent, -extent, extent], cmap="viridis"
    )
    fig.colorbar(im, ax=ax, label="curvature density")
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\xi$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_winding(table, path):
    """Continuous argument of the circle symbol versus angle."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(table["thetas"], table["argument"])
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("arg f")
    ax.set_title(f"winding {table['winding']}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(side_tables, out_dir):
    """Render whichever figures the collected side tables support."""
    written = []
    if "tau_convergence" in side_tables:
        written.append(
            plot_tau_convergence(
                side_tables["tau_convergence"], os.path.join(out_dir, "tau_convergence.png")
            )
        )
    if "lambda_continuity" in side_tables:
        written.append(
            plot_lambda_continuity(
                side_tables["lambda_continuity"],
                os.path.join(out_dir, "lambda_continuity.png"),
            )
        )
    if "chern" in side_tables:
        from .projectors import bott_projector

        written.append(
            plot_curvature_map(
                bott_projector(1), os.path.join(out_dir, "berry_curvature.png")
            )
        )
    if "toeplitz" in side_tables:
        written.append(
            plot_winding(side_tables["toeplitz"], os.path.join(out_dir, "toeplitz_winding.png"))
        )
    return written
