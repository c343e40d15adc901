"""Live betting session engine.

A session watches the stream of outcomes a human enters from the table,
maintains the trailing window, recommends the bet set (every distinct value
among the last N outcomes, one unit each), settles those bets against each
new spin, and keeps a running expected-return estimate that drives a
three-way verdict on whether the wheel is worth playing.

All money is in integer minor units so the bankroll ledger balances exactly.
Phases are advisory and derived from current state, never latched: fewer
than N spins is warmup, a bankroll below the next stake is stopped, a
statistically positive running return is confident, anything else is
probing.  The engine never scales bets by itself; the rationale string tells
the player what the state supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytics import OmegaEstimate, StrategyConfig

__all__ = [
    "DecisionReport",
    "InvalidOutcomeError",
    "LedgerEntry",
    "MIN_DECIDED_SPINS",
    "PHASES",
    "Recommendation",
    "Session",
    "SessionError",
    "replay",
]

PHASES = ("warmup", "probing", "confident", "stopped")
MIN_DECIDED_SPINS = 100  # settled spins required before a non-undecided verdict


class SessionError(ValueError):
    """Invalid session construction or use."""


class InvalidOutcomeError(SessionError):
    """Outcome is not a pocket of the session's wheel; state is unchanged."""


@dataclass(frozen=True)
class LedgerEntry:
    """Settlement of one spin's bets.

    ``spin_index`` is the index of the spin the bets were settled against;
    ``stake`` and ``collected`` are in minor currency units.
    """

    spin_index: int
    bets: tuple[int, ...]
    stake: int
    collected: int


@dataclass(frozen=True)
class Recommendation:
    """What to put on the table before the next spin.

    ``bets`` is the sorted distinct trailing-window set, or empty when the
    advice is not to bet (warmup or stop-loss).
    """

    bets: tuple[int, ...]
    stake_per_bet: int
    rationale: str  # warmup-no-bet | probing-minimum | confident-scale-up | stop-loss


@dataclass(frozen=True)
class DecisionReport:
    """Running return and the three-way table verdict."""

    omega: float
    std_error: float
    settled_spins: int
    spins_observed: int
    verdict: str  # above-critical | below-critical | undecided
    phase: str


class Session:
    """One table session: spin history, bankroll ledger, live advice."""

    def __init__(self, config: StrategyConfig, bankroll: int) -> None:
        if bankroll != int(bankroll) or bankroll < 0:
            raise SessionError(f"bankroll must be a non-negative integer amount, got {bankroll}")
        if config.bet_unit != int(config.bet_unit):
            raise SessionError(f"bet_unit must be an integer amount, got {config.bet_unit}")
        self.config = config
        self.initial_bankroll = int(bankroll)
        self.bankroll = int(bankroll)
        self.spins: list[int] = []
        self.ledger: list[LedgerEntry] = []
        self._active: tuple[int, ...] = ()
        self._staked = 0
        self._collected = 0
        self._hits = 0
        self._r_sum = 0.0
        self._r_sumsq = 0.0
        self._refresh_advice()

    # -- state views ------------------------------------------------------

    @property
    def phase(self) -> str:
        return self._phase

    @property
    def recommendation(self) -> Recommendation:
        return self._recommendation

    @property
    def settled_spins(self) -> int:
        return len(self.ledger)

    def window(self) -> tuple[int, ...]:
        """The trailing N outcomes, oldest first (shorter during warmup)."""
        return tuple(self.spins[-self.config.window :]) if self.spins else ()

    def running_omega(self) -> OmegaEstimate:
        """Stake-weighted return over all settled bets.

        The standard error is that of the mean per-spin unit return, the
        same convention the sliding-window simulator uses.
        """
        settled = len(self.ledger)
        if settled == 0 or self._staked == 0:
            return OmegaEstimate(0.0, 0.0, 0, "sliding-window", None)
        omega = (self._collected - self._staked) / self._staked
        if settled > 1:
            mean = self._r_sum / settled
            var = max((self._r_sumsq - settled * mean * mean) / (settled - 1), 0.0)
            se = math.sqrt(var / settled)
        else:
            se = 0.0
        return OmegaEstimate(omega, se, settled, "sliding-window", self._hits / settled)

    def decision_status(self) -> DecisionReport:
        est = self.running_omega()
        return DecisionReport(
            omega=est.omega,
            std_error=est.std_error,
            settled_spins=est.trials,
            spins_observed=len(self.spins),
            verdict=self._verdict(est),
            phase=self._phase,
        )

    # -- engine -----------------------------------------------------------

    def record_spin(self, outcome: int) -> Recommendation:
        """Settle active bets against ``outcome``, append it, re-advise."""
        pockets = self.config.wheel.pockets
        if outcome != int(outcome) or not 0 <= int(outcome) < pockets:
            raise InvalidOutcomeError(
                f"outcome {outcome!r} is not a pocket index in 0..{pockets - 1}"
            )
        outcome = int(outcome)
        if self._active:
            unit = self.config.bet_unit
            j = len(self._active)
            stake = unit * j
            hit = outcome in self._active
            collected = self.config.wheel.payout * unit if hit else 0
            self.bankroll += collected - stake
            self.ledger.append(LedgerEntry(len(self.spins), self._active, stake, collected))
            self._staked += stake
            self._collected += collected
            self._hits += int(hit)
            r = self.config.wheel.payout * (1.0 if hit else 0.0) / j - 1.0
            self._r_sum += r
            self._r_sumsq += r * r
        self.spins.append(outcome)
        self._refresh_advice()
        return self._recommendation

    def _verdict(self, est: OmegaEstimate) -> str:
        if est.trials < MIN_DECIDED_SPINS:
            return "undecided"
        if est.omega - 2.0 * est.std_error > 0.0:
            return "above-critical"
        if est.omega + 2.0 * est.std_error < 0.0:
            return "below-critical"
        return "undecided"

    def _refresh_advice(self) -> None:
        cfg = self.config
        if len(self.spins) < cfg.window:
            self._phase = "warmup"
            self._recommendation = Recommendation((), cfg.bet_unit, "warmup-no-bet")
            self._active = ()
            return
        bets = tuple(sorted(set(self.spins[-cfg.window :])))
        next_stake = cfg.bet_unit * len(bets)
        if self.bankroll < next_stake:
            self._phase = "stopped"
            self._recommendation = Recommendation((), cfg.bet_unit, "stop-loss")
            self._active = ()
            return
        if self._verdict(self.running_omega()) == "above-critical":
            self._phase = "confident"
            rationale = "confident-scale-up"
        else:
            self._phase = "probing"
            rationale = "probing-minimum"
        self._recommendation = Recommendation(bets, cfg.bet_unit, rationale)
        self._active = bets

    # -- persistence helpers -----------------------------------------------

    def to_snapshot(self) -> dict:
        """JSON-safe snapshot of the full state (versioned)."""
        return {
            "version": 1,
            "config": {
                "window": self.config.window,
                "pockets": self.config.wheel.pockets,
                "payout": self.config.wheel.payout,
                "bet_unit": self.config.bet_unit,
            },
            "initial_bankroll": self.initial_bankroll,
            "bankroll": self.bankroll,
            "spins": list(self.spins),
            "ledger": [
                [e.spin_index, list(e.bets), e.stake, e.collected] for e in self.ledger
            ],
            "phase": self._phase,
            "staked": self._staked,
            "collected": self._collected,
        }


def replay(outcomes: list[int], config: StrategyConfig, bankroll: int) -> Session:
    """Fold a recorded spin sequence into a fresh session.

    Produces a state identical to entering the same spins interactively.
    """
    session = Session(config, bankroll)
    for outcome in outcomes:
        session.record_spin(outcome)
    return session
