"""Expected-return analysis for the last-N equal-stakes strategy.

The per-spin expected return per unit staked is

    omega = payout * E[ S(window) / j(window) ] - 1

where the window is the last N outcomes, j is the number of distinct values
in it and S is the total probability mass sitting on those distinct values.
On an ideal wheel S/j collapses to 1/W for every window, giving the familiar
house edge payout/W - 1 regardless of N.  A biased wheel piles probability on
the pockets that also dominate recent history, pushing omega up and through
zero at a critical spread.

Three estimators are provided: an exact enumerator over all W**N ordered
windows (small N), an independent-trials Monte-Carlo estimator (the default,
matching the i.i.d. derivation above), and a sliding-window simulator of one
long correlated session (matching how the strategy is actually played).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numba
import numpy as np

from .wheel import EUROPEAN, BiasModel, WheelSpec, make_model

__all__ = [
    "CriticalPoint",
    "EnumerationBudgetError",
    "EstimatorError",
    "GridCell",
    "OmegaEstimate",
    "StrategyConfig",
    "critical_spread",
    "exact_omega",
    "mc_omega",
    "mc_omega_session",
    "omega_grid",
]

EXACT_BUDGET = 10**8  # cap on enumerated sequences
MAX_WINDOW = 64
STREAM_TRIALS = 250_000  # trials per seeded stream; fixed so worker count cannot matter
CHUNK_ROWS = 1 << 16

PARAM_MAX = {"gaussian": 0.3, "linear": 0.99}


class EstimatorError(ValueError):
    """Invalid estimator inputs (window, trial count, spin count)."""


class EnumerationBudgetError(EstimatorError):
    """Exact enumeration refused because W**N exceeds the sequence budget."""


@dataclass(frozen=True)
class StrategyConfig:
    """The strategy itself: bet one unit on each distinct value of the last
    ``window`` outcomes."""

    window: int
    wheel: WheelSpec = EUROPEAN
    bet_unit: int = 1

    def __post_init__(self) -> None:
        if not 1 <= self.window <= MAX_WINDOW:
            raise EstimatorError(f"window must be in 1..{MAX_WINDOW}, got {self.window}")
        if self.bet_unit <= 0:
            raise EstimatorError(f"bet_unit must be positive, got {self.bet_unit}")


@dataclass(frozen=True)
class OmegaEstimate:
    """Expected return per unit staked, with its sampling uncertainty.

    ``bunching`` is the probability that the next outcome repeats one of the
    distinct values in the window (exact or estimated, depending on the
    estimator).
    """

    omega: float
    std_error: float
    trials: int
    estimator: str  # "exact" | "independent-trials" | "sliding-window"
    bunching: float | None = None


def _check_window(window: int) -> None:
    if not 1 <= int(window) <= MAX_WINDOW:
        raise EstimatorError(f"window must be in 1..{MAX_WINDOW}, got {window}")


@numba.njit(cache=True)
def _enumerate_windows(probs: np.ndarray, n: int):  # pragma: no cover - jitted
    """Sweep all W**n ordered windows in lexicographic order.

    The first n-1 positions advance like an odometer with incremental
    distinct-set maintenance; the innermost position is a plain loop.  The
    prefix product and prefix distinct-sum are recomputed from scratch after
    every odometer step so no floating-point drift accumulates, and the two
    global accumulators use Kahan compensation.

    Returns (sum of prod*S/j, sum of prod*S) over all windows.
    """
    w = probs.shape[0]
    digits = np.zeros(max(n - 1, 1), np.int64)
    counts = np.zeros(w, np.int64)
    present = np.zeros(max(n, 1), np.int64)
    jp = 0
    if n > 1:
        counts[0] = n - 1
        present[0] = 0
        jp = 1
    om_sum = 0.0
    om_comp = 0.0
    xi_sum = 0.0
    xi_comp = 0.0
    while True:
        pp = 1.0
        for i in range(n - 1):
            pp *= probs[digits[i]]
        sp = 0.0
        for i in range(jp):
            sp += probs[present[i]]
        for v in range(w):
            pv = probs[v]
            if counts[v] > 0:
                j2 = jp
                s2 = sp
            else:
                j2 = jp + 1
                s2 = sp + pv
            term = pp * pv * s2
            y = term - xi_comp
            t = xi_sum + y
            xi_comp = (t - xi_sum) - y
            xi_sum = t
            term /= j2
            y = term - om_comp
            t = om_sum + y
            om_comp = (t - om_sum) - y
            om_sum = t
        if n == 1:
            break
        pos = n - 2
        while pos >= 0 and digits[pos] == w - 1:
            old = digits[pos]
            counts[old] -= 1
            if counts[old] == 0:
                for i in range(jp):
                    if present[i] == old:
                        present[i] = present[jp - 1]
                        break
                jp -= 1
            digits[pos] = 0
            counts[0] += 1
            if counts[0] == 1:
                present[jp] = 0
                jp += 1
            pos -= 1
        if pos < 0:
            break
        old = digits[pos]
        counts[old] -= 1
        if counts[old] == 0:
            for i in range(jp):
                if present[i] == old:
                    present[i] = present[jp - 1]
                    break
            jp -= 1
        digits[pos] += 1
        new = digits[pos]
        counts[new] += 1
        if counts[new] == 1:
            present[jp] = new
            jp += 1
    return om_sum, xi_sum


def exact_omega(model: BiasModel, window: int, budget: int = EXACT_BUDGET) -> OmegaEstimate:
    """Exact expected return by full enumeration of ordered windows.

    Refuses when W**window exceeds ``budget`` sequence evaluations; callers
    above the budget must fall back to :func:`mc_omega`.
    """
    _check_window(window)
    w = model.wheel.pockets
    sequences = w**window
    if sequences > budget:
        raise EnumerationBudgetError(
            f"{w}**{window} = {sequences} ordered windows exceeds the enumeration "
            f"budget of {budget}; use the Monte-Carlo estimator instead"
        )
    om_sum, xi_sum = _enumerate_windows(np.asarray(model.probabilities, dtype=np.float64), int(window))
    omega = model.wheel.payout * om_sum - 1.0
    return OmegaEstimate(
        omega=omega,
        std_error=0.0,
        trials=sequences,
        estimator="exact",
        bunching=xi_sum,
    )


def _stream_rng(seed: int, stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(ss))


def _distinct_counts(windows: np.ndarray) -> np.ndarray:
    ordered = np.sort(windows, axis=1)
    return 1 + (np.diff(ordered, axis=1) > 0).sum(axis=1)


def _run_trial_stream(
    model: BiasModel, window: int, trials: int, seed: int, stream: int
) -> tuple[int, float, float, int]:
    """One seeded stream of independent trials; returns (n, sum r, sum r^2, hits)."""
    rng = _stream_rng(seed, stream)
    cum = model.cumulative
    payout = model.wheel.payout
    total = 0.0
    total_sq = 0.0
    hits = 0
    done = 0
    while done < trials:
        m = min(CHUNK_ROWS, trials - done)
        u = rng.random((m, window + 1))
        k = np.searchsorted(cum, u, side="right")
        win = k[:, :window]
        j = _distinct_counts(win)
        hit = (win == k[:, window : window + 1]).any(axis=1)
        r = payout * hit / j - 1.0
        total += float(r.sum())
        total_sq += float((r * r).sum())
        hits += int(hit.sum())
        done += m
    return trials, total, total_sq, hits


def _stream_sizes(trials: int) -> list[int]:
    """Fixed-size stream partition; independent of how streams are scheduled."""
    n_streams = (trials + STREAM_TRIALS - 1) // STREAM_TRIALS
    return [min(STREAM_TRIALS, trials - i * STREAM_TRIALS) for i in range(n_streams)]


def _merge_trial_streams(results: list[tuple[int, float, float, int]]) -> OmegaEstimate:
    """Combine per-stream (count, sum, sum-of-squares, hits) in stream order."""
    count = 0
    total = 0.0
    total_sq = 0.0
    hits = 0
    for n, s, s2, h in results:
        count += n
        total += s
        total_sq += s2
        hits += h
    mean = total / count
    if count > 1:
        var = max((total_sq - count * mean * mean) / (count - 1), 0.0)
        std_error = math.sqrt(var / count)
    else:
        std_error = 0.0
    return OmegaEstimate(
        omega=mean,
        std_error=std_error,
        trials=count,
        estimator="independent-trials",
        bunching=hits / count,
    )


def mc_omega(
    model: BiasModel,
    window: int,
    trials: int,
    seed: int,
    workers: int = 1,
) -> OmegaEstimate:
    """Independent-trials Monte-Carlo estimate of the expected return.

    Each trial draws ``window`` i.i.d. outcomes, forms their distinct set of
    size j, draws one more outcome, and scores payout*hit/j - 1.  Trials are
    partitioned into fixed-size seeded streams merged in stream order, so the
    result is bit-identical for any ``workers`` count.
    """
    _check_window(window)
    trials = int(trials)
    if trials < 1:
        raise EstimatorError(f"trials must be >= 1, got {trials}")
    sizes = _stream_sizes(trials)
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda args: _run_trial_stream(model, window, args[1], seed, args[0]),
                    enumerate(sizes),
                )
            )
    else:
        results = [
            _run_trial_stream(model, window, size, seed, i)
            for i, size in enumerate(sizes)
        ]
    return _merge_trial_streams(results)


def mc_omega_session(
    model: BiasModel, window: int, spins: int, seed: int
) -> OmegaEstimate:
    """Sliding-window simulation of one long session.

    After the first ``window`` spins every spin stakes one unit on each
    distinct value of the trailing window; omega is the total net result per
    unit staked.  The headline number is the stake-weighted return actually
    experienced at the table; the quoted standard error is that of the mean
    per-spin unit return, which shares its scale.
    """
    _check_window(window)
    spins = int(spins)
    if spins <= window:
        raise EstimatorError(f"spins must exceed the window length, got {spins} <= {window}")
    rng = _stream_rng(seed, 0)
    outcomes = model.sample(rng, spins)
    return _settle_sliding(model, window, outcomes)


def _settle_sliding(model: BiasModel, window: int, outcomes: np.ndarray) -> OmegaEstimate:
    payout = model.wheel.payout
    spins = len(outcomes)
    staked = 0
    collected = 0
    n_bets = 0
    hits = 0
    r_total = 0.0
    r_total_sq = 0.0
    for start in range(window, spins, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, spins)
        # wins[i] is the trailing window for the spin at start + i
        wins = np.lib.stride_tricks.sliding_window_view(
            outcomes[start - window : stop], window
        )[: stop - start]
        nxt = outcomes[start:stop]
        j = _distinct_counts(wins)
        hit = (wins == nxt[:, None]).any(axis=1)
        staked += int(j.sum())
        collected += payout * int(hit.sum())
        hits += int(hit.sum())
        n_bets += stop - start
        r = payout * hit / j - 1.0
        r_total += float(r.sum())
        r_total_sq += float((r * r).sum())
    omega = (collected - staked) / staked
    mean = r_total / n_bets
    if n_bets > 1:
        var = max((r_total_sq - n_bets * mean * mean) / (n_bets - 1), 0.0)
        std_error = math.sqrt(var / n_bets)
    else:
        std_error = 0.0
    return OmegaEstimate(
        omega=omega,
        std_error=std_error,
        trials=n_bets,
        estimator="sliding-window",
        bunching=hits / n_bets,
    )


@dataclass(frozen=True)
class GridCell:
    """One cell of a parameter sweep."""

    family: str
    param: float
    xi: float
    window: int
    estimate: OmegaEstimate


def omega_grid(
    family: str,
    params: list[float],
    windows: list[int],
    trials: int,
    seed: int,
    wheel: WheelSpec = EUROPEAN,
    workers: int = 1,
) -> list[GridCell]:
    """Monte-Carlo sweep over the full (param x window) cross product.

    Every cell gets its own deterministic child seed derived from the master
    seed and the cell's position, so the table is reproducible cell-by-cell.
    """
    if not params or not windows:
        raise EstimatorError("parameter and window lists must be nonempty")
    cells: list[GridCell] = []
    for pi, param in enumerate(params):
        model = make_model(family, param, wheel)
        xi = model.spread_ratio()
        for ni, window in enumerate(windows):
            cell_seed = np.random.SeedSequence(
                entropy=int(seed), spawn_key=(pi, ni)
            ).generate_state(1)[0]
            est = mc_omega(model, window, trials, int(cell_seed), workers=workers)
            cells.append(GridCell(family, float(param), xi, int(window), est))
    return cells


@dataclass(frozen=True)
class CriticalPoint:
    """Bias level at which the expected return crosses zero."""

    family: str
    window: int
    param_critical: float
    xi_critical: float
    bracket_low: float
    bracket_high: float
    trials_per_eval: int
    evaluator: str  # "exact" | "mc"

    @property
    def bracket_width(self) -> float:
        return self.bracket_high - self.bracket_low


class CriticalityError(EstimatorError):
    """The wheel cannot reach a zero expected return in the scanned range."""


SEARCH_EXACT_BUDGET = EXACT_BUDGET  # prefer the exact evaluator whenever it is allowed
_ESCALATION_CAP = 8


def critical_spread(
    family: str,
    window: int,
    trials_per_eval: int = 200_000,
    seed: int = 0,
    wheel: WheelSpec = EUROPEAN,
    param_max: float | None = None,
    evaluator: str = "auto",
    param_tol: float = 1e-6,
) -> CriticalPoint:
    """Locate the critical spread parameter where omega changes sign.

    Bisection on the bias parameter.  With the exact evaluator the bracket is
    driven down to ``param_tol``.  With the Monte-Carlo evaluator, an endpoint
    whose omega is not resolved at two standard errors triggers trial-count
    doubling (up to 8x the base count); once the midpoint stays unresolved at
    the cap, the bracket has reached the noise floor and is reported as-is.
    """
    if family not in PARAM_MAX:
        raise CriticalityError(
            f"family {family!r} has no spread parameter to search (uniform wheels "
            "keep a negative expected return)"
        )
    _check_window(window)
    hi = PARAM_MAX[family] if param_max is None else float(param_max)
    if evaluator == "auto":
        evaluator = "exact" if wheel.pockets**window <= SEARCH_EXACT_BUDGET else "mc"
    if evaluator not in ("exact", "mc"):
        raise EstimatorError(f"unknown evaluator {evaluator!r}")

    eval_index = 0

    def evaluate(param: float) -> tuple[float, float]:
        nonlocal eval_index
        model = make_model(family, param, wheel)
        if evaluator == "exact":
            est = exact_omega(model, window)
            return est.omega, 0.0
        trials = trials_per_eval
        while True:
            eval_index += 1
            est = mc_omega(model, window, trials, seed + eval_index)
            if abs(est.omega) >= 2 * est.std_error or trials >= trials_per_eval * _ESCALATION_CAP:
                return est.omega, est.std_error
            trials *= 2

    lo = 0.0
    om_lo, _ = evaluate(lo)
    if om_lo >= 0.0:
        raise CriticalityError(
            f"omega at {family} parameter 0 is already non-negative ({om_lo:.4g}); "
            "no sign change to bracket"
        )
    om_hi, se_hi = evaluate(hi)
    if om_hi <= 0.0 or (evaluator == "mc" and om_hi < 2 * se_hi):
        raise CriticalityError(
            f"wheel cannot reach criticality in range: omega({family}={hi:.4g}) = "
            f"{om_hi:.4g} is not resolved above zero"
        )
    while hi - lo > param_tol:
        mid = (lo + hi) / 2
        om_mid, se_mid = evaluate(mid)
        if evaluator == "mc" and abs(om_mid) < 2 * se_mid:
            break  # noise floor reached at the escalation cap
        if om_mid < 0.0:
            lo = mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    xi = make_model(family, mid, wheel).spread_ratio()
    return CriticalPoint(
        family=family,
        window=int(window),
        param_critical=mid,
        xi_critical=xi,
        bracket_low=lo,
        bracket_high=hi,
        trials_per_eval=trials_per_eval if evaluator == "mc" else 0,
        evaluator=evaluator,
    )
