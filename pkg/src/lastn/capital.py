"""Critical starting capital for the last-N strategy.

With a positive expected return the bankroll grows on average, but a long
enough losing streak still ruins the player.  The critical capital C is the
stake that the strategy doubles, on average, over the mean interval M between
two such catastrophic streaks.  Writing j for the average number of bets per
spin and base = (W - j(1+omega))/W for the probability that one spin loses
every bet, the model links the quantities by

    C = M * j * omega        (doubling over the safe interval)
    C = S * j                (S losing spins burn the capital)
    f = base ** S            (frequency of a catastrophic streak)
    M = 1 / f

which collapse into one transcendental balance in C:

    j * omega / C = base ** (C / j)

In x = C/j form this reads omega = x * base**x, whose right side rises to a
single maximum and falls, so there are either two positive roots or none.
The small root is degenerate (a capital of about one bet, burned in under a
spin); the large root is the curve a bankroll planner wants, and it is the
one this module returns.  The root count is surfaced so the ambiguity stays
visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .wheel import EUROPEAN, BiasModel, WheelSpec

__all__ = [
    "CapitalCell",
    "CapitalError",
    "CapitalRangeError",
    "CapitalSolution",
    "NoCriticalCapitalError",
    "avg_distinct",
    "capital_grid",
    "fluctuation_frequency",
    "solve_capital",
]

C_MAX_DEFAULT = 1e6  # bet units; larger roots are reported as out of range
_SCAN_POINTS = 512


class CapitalError(ValueError):
    """Invalid inputs to the capital model."""


class NoCriticalCapitalError(CapitalError):
    """No critical capital exists for the given return and bet spread."""


class CapitalRangeError(CapitalError):
    """The balance equation only closes beyond the capital search range."""


@dataclass(frozen=True)
class CapitalSolution:
    """Critical capital and the quantities linked to it.

    ``capital`` is in units of bets; callers round up to whole bets.  ``residual``
    is the absolute gap between the two sides of the balance equation at the
    returned capital.
    """

    capital: float
    mean_spins: float
    losing_streak: float
    frequency: float
    j_avg: float
    omega: float
    residual: float
    roots_found: int


def avg_distinct(model: BiasModel, window: int) -> float:
    """Expected number of distinct values among ``window`` i.i.d. outcomes.

    Each pocket k is present unless all draws miss it, so the expectation is
    sum over k of 1 - (1 - P(k))**window.
    """
    window = int(window)
    if window < 1:
        raise CapitalError(f"window must be >= 1, got {window}")
    p = model.probabilities
    return float(np.sum(1.0 - np.power(1.0 - p, window)))


def _losing_base(j_avg: float, omega: float, wheel: WheelSpec) -> float:
    """Per-spin probability proxy that all j bets lose."""
    w = wheel.pockets
    covered = j_avg * (1.0 + omega)
    if not 0.0 < covered < w:
        raise CapitalError(
            f"j_avg*(1+omega) = {covered:.6g} must lie strictly between 0 and {w}"
        )
    return (w - covered) / w


def fluctuation_frequency(
    j_avg: float, omega: float, streak: float, wheel: WheelSpec = EUROPEAN
) -> float:
    """Frequency of a losing streak of ``streak`` consecutive spins."""
    if streak <= 0:
        raise CapitalError(f"streak length must be positive, got {streak}")
    base = _losing_base(j_avg, omega, wheel)
    return base**streak


def _balance_gap(capital: float, j_avg: float, omega: float, lam: float) -> float:
    """j*omega/C minus base**(C/j), with base = exp(-lam)."""
    return j_avg * omega / capital - math.exp(-lam * capital / j_avg)


def solve_capital(
    j_avg: float,
    omega: float,
    wheel: WheelSpec = EUROPEAN,
    c_max: float = C_MAX_DEFAULT,
) -> CapitalSolution:
    """Solve the capital balance equation and derive M, S and f from the root.

    Scans C on a log grid over (0, c_max], brackets every sign change of the
    balance gap, polishes each with Brent's method, and returns the largest
    root (the planner's curve; the small root is the degenerate sub-spin one).
    """
    if omega <= 0.0:
        raise NoCriticalCapitalError(
            f"no critical capital exists for a non-positive expected return "
            f"(omega = {omega:.6g}); ruin is certain eventually"
        )
    if j_avg <= 0.0:
        raise CapitalError(f"j_avg must be positive, got {j_avg}")
    base = _losing_base(j_avg, omega, wheel)
    lam = -math.log(base)
    # omega = x*base**x peaks at x = 1/lam with value 1/(lam*e); above that
    # the balance never closes for any capital.
    if omega * lam > math.exp(-1.0):
        raise NoCriticalCapitalError(
            f"no critical capital exists: omega = {omega:.6g} exceeds the "
            f"maximum balance {math.exp(-1.0) / lam:.6g} attainable with "
            f"losing-base {base:.6g}"
        )
    c_lo = 0.9 * j_avg * omega  # any root has C/j >= omega since base**x <= 1
    if c_lo >= c_max:
        raise CapitalRangeError(
            f"root beyond range: search cap {c_max:.6g} is below the minimum "
            f"possible capital {j_avg * omega:.6g}"
        )
    grid = np.geomspace(c_lo, c_max, _SCAN_POINTS)
    c_peak = j_avg / lam  # the gap is most negative here; never skip the dip
    if c_lo < c_peak < c_max:
        grid = np.sort(np.append(grid, c_peak))
    gaps = np.array([_balance_gap(c, j_avg, omega, lam) for c in grid])
    roots: list[float] = []
    for i in range(len(grid) - 1):
        a, b = gaps[i], gaps[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0.0:
            roots.append(
                float(
                    brentq(
                        _balance_gap,
                        grid[i],
                        grid[i + 1],
                        args=(j_avg, omega, lam),
                        xtol=1e-12,
                        rtol=8.9e-16,
                    )
                )
            )
    if gaps[-1] == 0.0:
        roots.append(float(grid[-1]))
    if not roots or (len(roots) < 2 and omega * lam < math.exp(-1.0)):
        # the balance admits two roots but the large one sits past c_max
        raise CapitalRangeError(
            f"root beyond range: no capital up to {c_max:.6g} closes the balance "
            f"for j_avg = {j_avg:.6g}, omega = {omega:.6g}"
        )
    capital = max(roots)
    streak = capital / j_avg
    mean_spins = capital / (j_avg * omega)
    frequency = base**streak
    residual = abs(_balance_gap(capital, j_avg, omega, lam))
    return CapitalSolution(
        capital=capital,
        mean_spins=mean_spins,
        losing_streak=streak,
        frequency=frequency,
        j_avg=float(j_avg),
        omega=float(omega),
        residual=residual,
        roots_found=len(roots),
    )


@dataclass(frozen=True)
class CapitalCell:
    """One (omega, j_avg) cell of a capital sweep; holds a solution or the
    reason there is none."""

    omega: float
    j_avg: float
    solution: CapitalSolution | None
    error: str | None


def capital_grid(
    omegas: list[float],
    j_avgs: list[float],
    wheel: WheelSpec = EUROPEAN,
    c_max: float = C_MAX_DEFAULT,
) -> list[CapitalCell]:
    """Cross-product sweep of the capital solver.

    Unsolvable cells are recorded in the table with their error text rather
    than aborting the sweep.
    """
    if not omegas or not j_avgs:
        raise CapitalError("omega and j_avg lists must be nonempty")
    for om in omegas:
        if om <= 0.0:
            raise NoCriticalCapitalError(
                f"no critical capital exists for omega = {om:.6g}; "
                "grid omegas must be positive"
            )
    cells: list[CapitalCell] = []
    for om in omegas:
        for ja in j_avgs:
            try:
                sol = solve_capital(ja, om, wheel, c_max)
            except CapitalError as exc:
                cells.append(CapitalCell(float(om), float(ja), None, str(exc)))
            else:
                cells.append(CapitalCell(float(om), float(ja), sol, None))
    return cells
