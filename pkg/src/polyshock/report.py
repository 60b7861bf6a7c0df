"""Result serialization (CSV) and figure rendering (SVG via matplotlib)."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .shock import ShockProfile

__all__ = [
    "format_profile_csv",
    "write_profile_csv",
    "read_profile_csv",
    "write_closure_csv",
    "plot_profile",
    "plot_profiles",
    "plot_closure",
]

PROFILE_COLUMNS = ("xi", "rho", "u", "T", "Pi", "rho_norm", "u_norm", "T_norm")


def _g17(x: float) -> str:
    return f"{x:.17g}"


def format_profile_csv(profile: ShockProfile) -> str:
    """Render a normalized profile as CSV text.

    One leading ``#`` metadata line carries the conserved fluxes and the
    problem parameters; an empty ``subshock_xi`` marks a continuous
    profile.  Sub-shock profiles contain two consecutive rows at xi = 0
    (pre- and post-jump values).
    """
    if profile.rho_norm is None:
        raise ValueError("profile must be normalized before serialization")
    p = profile.problem
    sub = "" if profile.subshock_xi is None else _g17(profile.subshock_xi)
    meta = (
        f"# J={_g17(profile.fluxes[0])} P={_g17(profile.fluxes[1])} "
        f"Q={_g17(profile.fluxes[2])} M0={_g17(p.mach0)} alpha={_g17(p.alpha)} "
        f"s_star={_g17(p.s_star)} alpha_star={_g17(p.alpha_star)} subshock_xi={sub}"
    )
    buf = io.StringIO()
    buf.write(meta + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROFILE_COLUMNS)
    columns = [profile.xi, profile.rho, profile.u, profile.T, profile.Pi,
               profile.rho_norm, profile.u_norm, profile.T_norm]
    for row in zip(*columns):
        writer.writerow([_g17(v) for v in row])
    return buf.getvalue()


def write_profile_csv(profile: ShockProfile, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_profile_csv(profile), encoding="utf-8")
    return path


def read_profile_csv(path) -> tuple[dict, dict[str, np.ndarray]]:
    """Parse an emitted profile CSV back into metadata and column arrays."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing metadata line")
    meta = {}
    for token in lines[0][1:].split():
        key, _, value = token.partition("=")
        meta[key] = float(value) if value else None
    reader = csv.reader(lines[1:])
    header = next(reader)
    if tuple(header) != PROFILE_COLUMNS:
        raise ValueError(f"{path}: unexpected header {header}")
    rows = [[float(v) for v in row] for row in reader if row]
    data = np.asarray(rows)
    return meta, {name: data[:, i] for i, name in enumerate(PROFILE_COLUMNS)}


def write_closure_csv(rows: list[tuple[str, float]], path) -> Path:
    """Key/value table for a single-state closure evaluation."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("quantity", "value"))
    for name, value in rows:
        writer.writerow((name, _g17(value)))
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


_PANEL_FIELDS = (
    ("rho_norm", "normalized density"),
    ("u_norm", "normalized velocity"),
    ("T_norm", "normalized temperature"),
    ("Pi", "dynamic pressure"),
)


def plot_profiles(profiles: list[tuple[str, ShockProfile]], path) -> Path:
    """Four-panel figure (normalized rho, u, T; raw Pi) for one or more profiles."""
    fig, axes = plt.subplots(2, 2, figsize=(9, 6.5), sharex=True)
    for label, profile in profiles:
        for ax, (attr, _) in zip(axes.flat, _PANEL_FIELDS):
            ax.plot(profile.xi, getattr(profile, attr), lw=1.2, label=label)
    for ax, (_, title) in zip(axes.flat, _PANEL_FIELDS):
        ax.set_ylabel(title)
        ax.grid(alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel(r"$\xi$")
    if len(profiles) > 1 or profiles[0][0]:
        axes[0, 0].legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def plot_profile(profile: ShockProfile, path) -> Path:
    return plot_profiles([("", profile)], path)


def plot_closure(state, xsec, path) -> Path:
    """Non-equilibrium entropy and production term across the admissible
    dynamic-pressure interval of one (rho, e) state."""
    from . import closure

    p = state.pressure
    band = 1e-3 * p
    pis = np.linspace(-p + band, state.pi_upper_bound - band, 401)
    kappas = np.array([closure.kappa(state.with_pi(x)) for x in pis])
    prods = np.array([closure.production(state.with_pi(x), xsec) for x in pis])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(pis, kappas, lw=1.2)
    ax1.axvline(state.Pi, color="k", ls=":", lw=0.8)
    ax1.set_xlabel(r"$\Pi$")
    ax1.set_ylabel("non-equilibrium entropy")
    ax1.grid(alpha=0.3)
    ax2.plot(pis, prods, lw=1.2)
    ax2.axvline(state.Pi, color="k", ls=":", lw=0.8)
    ax2.set_xlabel(r"$\Pi$")
    ax2.set_ylabel("trace production")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
