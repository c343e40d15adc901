"""Figure rendering for the report paths of the CLI.

Every function writes a PNG next to the delimited output and returns its
path.  The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analytics import GridCell
from .capital import CapitalCell
from .session import Session
from .wheel import BiasModel

__all__ = [
    "plot_bankroll",
    "plot_capital_grid",
    "plot_distribution",
    "plot_omega_vs_param",
    "plot_omega_vs_window",
]

_DPI = 120


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_distribution(model: BiasModel, path: str | Path) -> Path:
    """Pocket probabilities against the ideal-wheel level."""
    w = model.wheel.pockets
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(w), model.probabilities, color="#3b6ea5", width=0.85)
    ax.axhline(1.0 / w, color="0.3", lw=1, ls="--", label=f"ideal 1/{w}")
    ax.set_xlabel("pocket index k (sorted by probability)")
    ax.set_ylabel("P(k)")
    ax.set_title(f"{model.kind} wheel, param={model.param:g}")
    ax.legend(frameon=False)
    return _save(fig, path)


def _grouped(cells: list[GridCell], key) -> dict:
    groups = defaultdict(list)
    for c in cells:
        groups[key(c)].append(c)
    return dict(sorted(groups.items()))


def plot_omega_vs_param(cells: list[GridCell], path: str | Path) -> Path:
    """Expected return against the bias parameter, one curve per window."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for window, group in _grouped(cells, lambda c: c.window).items():
        group = sorted(group, key=lambda c: c.param)
        ax.errorbar(
            [c.param for c in group],
            [c.estimate.omega for c in group],
            yerr=[2 * c.estimate.std_error for c in group],
            marker="o",
            ms=3,
            capsize=2,
            label=f"N={window}",
        )
    ax.axhline(0.0, color="0.3", lw=1, ls="--")
    ax.set_xlabel(f"{cells[0].family} bias parameter")
    ax.set_ylabel("expected return per unit staked")
    ax.legend(frameon=False, ncols=2)
    return _save(fig, path)


def plot_omega_vs_window(cells: list[GridCell], path: str | Path) -> Path:
    """Expected return against the window length, one curve per parameter."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for param, group in _grouped(cells, lambda c: c.param).items():
        group = sorted(group, key=lambda c: c.window)
        ax.errorbar(
            [c.window for c in group],
            [c.estimate.omega for c in group],
            yerr=[2 * c.estimate.std_error for c in group],
            marker="o",
            ms=3,
            capsize=2,
            label=f"param={param:g}",
        )
    ax.axhline(0.0, color="0.3", lw=1, ls="--")
    ax.set_xlabel("window length N")
    ax.set_ylabel("expected return per unit staked")
    ax.legend(frameon=False, ncols=2)
    return _save(fig, path)


def plot_capital_grid(cells: list[CapitalCell], path: str | Path) -> Path:
    """Critical capital, safe interval and fatal streak against the return."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharex=True)
    by_j = defaultdict(list)
    for c in cells:
        if c.solution is not None:
            by_j[c.j_avg].append(c)
    for j_avg, group in sorted(by_j.items()):
        group = sorted(group, key=lambda c: c.omega)
        omegas = [c.omega for c in group]
        axes[0].plot(omegas, [c.solution.capital for c in group], marker="o", ms=3, label=f"j={j_avg:g}")
        axes[1].plot(omegas, [c.solution.mean_spins for c in group], marker="o", ms=3)
        axes[2].plot(omegas, [c.solution.losing_streak for c in group], marker="o", ms=3)
    for ax, name in zip(axes, ("critical capital C (bets)", "spins between ruins M", "fatal streak S (spins)")):
        ax.set_xlabel("expected return per unit staked")
        ax.set_ylabel(name)
        ax.set_yscale("log")
    axes[0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_bankroll(session: Session, path: str | Path) -> Path:
    """Bankroll trajectory over the settled spins of one session."""
    xs = [0]
    ys = [session.initial_bankroll]
    bankroll = session.initial_bankroll
    for entry in session.ledger:
        bankroll += entry.collected - entry.stake
        xs.append(entry.spin_index)
        ys.append(bankroll)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.step(xs, ys, where="post", color="#3b6ea5")
    ax.axhline(session.initial_bankroll, color="0.3", lw=1, ls="--", label="starting bankroll")
    ax.set_xlabel("spin index")
    ax.set_ylabel("bankroll (minor units)")
    ax.legend(frameon=False)
    return _save(fig, path)
