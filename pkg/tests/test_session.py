"""Session engine: settlement, phases, verdicts, persistence round-trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lastn.analytics import StrategyConfig
from lastn.session import (
    MIN_DECIDED_SPINS,
    InvalidOutcomeError,
    Session,
    SessionError,
    replay,
)
from lastn.store import LOG_HEADER, SessionStore, StoreError, read_log, write_log
from lastn.wheel import AMERICAN, make_model


def cfg(window=3, bet_unit=1, wheel=None):
    if wheel is None:
        return StrategyConfig(window=window, bet_unit=bet_unit)
    return StrategyConfig(window=window, wheel=wheel, bet_unit=bet_unit)


def brute_state(outcomes, window, bet_unit, bankroll, payout=36, pockets=37):
    """Settle the whole stream by the plainest possible loop (oracle route)."""
    ledger = []
    active = ()
    for i, out in enumerate(outcomes):
        if active:
            stake = bet_unit * len(active)
            collected = payout * bet_unit if out in active else 0
            bankroll += collected - stake
            ledger.append((i, active, stake, collected))
        seen = outcomes[: i + 1]
        if len(seen) >= window:
            bets = tuple(sorted(set(seen[-window:])))
            active = bets if bankroll >= bet_unit * len(bets) else ()
        else:
            active = ()
    return bankroll, ledger


class TestWarmup:
    def test_no_bets_until_window_fills(self):
        s = Session(cfg(window=12), 1000)
        for out in range(11):
            rec = s.record_spin(out)
            assert s.phase == "warmup"
            assert rec.rationale == "warmup-no-bet"
            assert rec.bets == ()
        assert s.bankroll == 1000
        assert s.ledger == []
        rec = s.record_spin(11)
        assert s.phase == "probing"
        assert rec.bets == tuple(range(12))

    def test_empty_replay_stays_in_warmup(self):
        s = replay([], cfg(window=5), 700)
        assert s.phase == "warmup"
        assert s.bankroll == 700
        assert s.decision_status().verdict == "undecided"


class TestSettlement:
    def test_repeated_number_collapses_to_one_bet(self):
        s = Session(cfg(window=2), 100)
        s.record_spin(7)
        s.record_spin(7)
        assert s.recommendation.bets == (7,)
        s.record_spin(7)
        entry = s.ledger[-1]
        assert entry.stake == 1
        assert entry.collected == 36
        assert s.bankroll == 100 + 36 - 1

    def test_miss_burns_the_stake(self):
        s = Session(cfg(window=2), 100)
        for out in (4, 9, 20):
            s.record_spin(out)
        entry = s.ledger[-1]
        assert entry.bets == (4, 9)
        assert entry.stake == 2
        assert entry.collected == 0
        assert s.bankroll == 98

    def test_running_omega_is_the_exact_ledger_ratio(self):
        s = Session(cfg(window=4, bet_unit=3), 10_000)
        rng = np.random.default_rng(8)
        for out in rng.integers(0, 37, size=200):
            s.record_spin(int(out))
        staked = sum(e.stake for e in s.ledger)
        collected = sum(e.collected for e in s.ledger)
        assert s.running_omega().omega == (collected - staked) / staked

    @given(
        outcomes=st.lists(st.integers(0, 36), max_size=120),
        window=st.integers(1, 8),
        bet_unit=st.integers(1, 5),
    )
    @settings(max_examples=60, deadline=None)
    def test_engine_matches_plain_loop(self, outcomes, window, bet_unit):
        bankroll = 500
        s = replay(outcomes, cfg(window=window, bet_unit=bet_unit), bankroll)
        want_bankroll, want_ledger = brute_state(outcomes, window, bet_unit, bankroll)
        assert s.bankroll == want_bankroll
        assert [(e.spin_index, e.bets, e.stake, e.collected) for e in s.ledger] == want_ledger
        assert s.bankroll == s.initial_bankroll + sum(e.collected - e.stake for e in s.ledger)
        if s.phase in ("probing", "confident"):
            assert s.recommendation.bets == tuple(sorted(set(outcomes[-window:])))


class TestPhases:
    def test_stop_loss_when_stake_exceeds_bankroll(self):
        s = Session(cfg(window=3), 2)
        for out in (1, 2, 3):
            s.record_spin(out)
        # three distinct numbers want 3 units, only 2 left
        assert s.phase == "stopped"
        assert s.recommendation.rationale == "stop-loss"
        assert s.recommendation.bets == ()
        before = s.bankroll
        s.record_spin(1)
        assert s.bankroll == before  # nothing was staked while stopped

    def test_stop_loss_lifts_when_the_window_narrows(self):
        s = Session(cfg(window=3), 2)
        for out in (1, 2, 3):
            s.record_spin(out)
        assert s.phase == "stopped"
        s.record_spin(5)
        s.record_spin(5)  # window (3, 5, 5) -> two distinct
        assert s.phase == "probing"
        assert s.recommendation.bets == (3, 5)

    def test_confident_needs_a_resolved_positive_run(self):
        s = Session(cfg(window=1), 1000)
        for _ in range(MIN_DECIDED_SPINS + 1):
            s.record_spin(5)  # every settled spin hits the single bet
        assert s.decision_status().verdict == "above-critical"
        assert s.phase == "confident"
        assert s.recommendation.rationale == "confident-scale-up"

    def test_steady_losses_read_below_critical(self):
        s = Session(cfg(window=1), 1000)
        for i in range(MIN_DECIDED_SPINS + 2):
            s.record_spin(i % 37 if i % 37 != (i - 1) % 37 else (i + 1) % 37)
        report = s.decision_status()
        assert report.omega == -1.0
        assert report.verdict == "below-critical"
        assert s.phase == "probing"

    def test_verdict_needs_minimum_evidence(self):
        s = Session(cfg(window=1), 1000)
        for _ in range(MIN_DECIDED_SPINS - 1):
            s.record_spin(5)
        assert s.decision_status().verdict == "undecided"


class TestValidation:
    def test_invalid_outcome_leaves_state_untouched(self):
        s = Session(cfg(window=2), 50)
        s.record_spin(1)
        s.record_spin(2)
        before = s.to_snapshot()
        for bad in (-1, 37, 400):
            with pytest.raises(InvalidOutcomeError):
                s.record_spin(bad)
        assert s.to_snapshot() == before

    def test_american_wheel_accepts_the_extra_pocket(self):
        s = Session(cfg(window=2, wheel=AMERICAN), 50)
        s.record_spin(37)
        assert s.spins == [37]

    def test_rejects_negative_bankroll(self):
        with pytest.raises(SessionError):
            Session(cfg(), -1)


class TestReplayEquivalence:
    def test_replay_equals_interactive_entry(self):
        rng = np.random.default_rng(3)
        outcomes = [int(x) for x in rng.integers(0, 37, size=300)]
        live = Session(cfg(window=6, bet_unit=2), 5000)
        for out in outcomes:
            live.record_spin(out)
        again = replay(outcomes, cfg(window=6, bet_unit=2), 5000)
        assert live.to_snapshot() == again.to_snapshot()

    def test_biased_replay_tracks_the_simulated_return(self):
        model = make_model("gaussian", 0.1)
        rng = np.random.Generator(np.random.PCG64(17))
        outcomes = [int(x) for x in model.sample(rng, 10_000)]
        s = replay(outcomes, cfg(window=12), 10**9)
        est = s.running_omega()
        from lastn.analytics import mc_omega_session

        sim = mc_omega_session(model, 12, 10_000, seed=99)
        sigma = (est.std_error**2 + sim.std_error**2) ** 0.5
        assert abs(est.omega - sim.omega) <= 4 * sigma


class TestStore:
    def test_log_round_trip(self, tmp_path):
        path = tmp_path / "spins.log"
        outcomes = [0, 36, 12, 12, 5]
        write_log(path, outcomes)
        assert read_log(path) == outcomes
        assert path.read_text().startswith(LOG_HEADER + "\n")

    def test_double_zero_token_parses_as_pocket_37(self, tmp_path):
        path = tmp_path / "us.log"
        path.write_text(f"{LOG_HEADER}\n0,2026-01-01T00:00:00+00:00,00\n")
        assert read_log(path) == [37]

    @pytest.mark.parametrize(
        "body,lineno",
        [
            ("not-a-header\n0,t,5\n", 1),
            (f"{LOG_HEADER}\n0,t\n", 2),
            (f"{LOG_HEADER}\n0,t,banana\n", 2),
            (f"{LOG_HEADER}\n1,t,5\n", 2),
            (f"{LOG_HEADER}\n0,t,5\n2,t,6\n", 3),
        ],
    )
    def test_malformed_logs_name_the_line(self, tmp_path, body, lineno):
        path = tmp_path / "bad.log"
        path.write_text(body)
        with pytest.raises(StoreError, match=f"{path.name}:{lineno}"):
            read_log(path)

    def test_persisted_session_reloads_identically(self, tmp_path):
        store = SessionStore(tmp_path)
        sid, session = store.create(cfg(window=4, bet_unit=2), 900)
        rng = np.random.default_rng(5)
        for out in rng.integers(0, 37, size=120):
            session.record_spin(int(out))
            store.record_spin(sid, session, int(out))
        loaded = store.load(sid)
        assert loaded.to_snapshot() == session.to_snapshot()

    def test_reload_interleaves_with_live_entry(self, tmp_path):
        store = SessionStore(tmp_path)
        sid, session = store.create(cfg(window=3), 400)
        outcomes = [4, 4, 9, 30, 4, 9, 9, 2, 2, 11]
        for out in outcomes[:6]:
            session.record_spin(out)
            store.record_spin(sid, session, out)
        session = store.load(sid)  # crash and resume mid-session
        for out in outcomes[6:]:
            session.record_spin(out)
            store.record_spin(sid, session, out)
        assert store.load(sid).to_snapshot() == replay(outcomes, cfg(window=3), 400).to_snapshot()

    def test_snapshot_lagging_the_log_is_tolerated(self, tmp_path):
        store = SessionStore(tmp_path)
        sid, session = store.create(cfg(window=2), 100)
        for out in (1, 2, 3):
            session.record_spin(out)
            store.record_spin(sid, session, out)
        # crash window: one more spin hit the log but not the snapshot
        with store.log_path(sid).open("a") as fh:
            fh.write("3,2026-01-01T00:00:00+00:00,9\n")
        loaded = store.load(sid)
        assert loaded.spins == [1, 2, 3, 9]

    def test_snapshot_ahead_of_the_log_is_corruption(self, tmp_path):
        store = SessionStore(tmp_path)
        sid, session = store.create(cfg(window=2), 100)
        for out in (1, 2, 3):
            session.record_spin(out)
            store.record_spin(sid, session, out)
        log = store.log_path(sid)
        lines = log.read_text().splitlines()
        log.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(StoreError, match="never trail"):
            store.load(sid)

    def test_tampered_snapshot_bankroll_is_rejected(self, tmp_path):
        import json

        store = SessionStore(tmp_path)
        sid, session = store.create(cfg(window=2), 100)
        for out in (1, 2, 3):
            session.record_spin(out)
            store.record_spin(sid, session, out)
        snap_path = store.snapshot_path(sid)
        snap = json.loads(snap_path.read_text())
        snap["bankroll"] += 7
        snap_path.write_text(json.dumps(snap))
        with pytest.raises(StoreError, match="does not match"):
            store.load(sid)

    def test_unknown_session_and_duplicate_create(self, tmp_path):
        store = SessionStore(tmp_path)
        with pytest.raises(StoreError, match="unknown session"):
            store.load("ghost")
        sid, _ = store.create(cfg(), 10, session_id="fixed")
        with pytest.raises(StoreError, match="already exists"):
            store.create(cfg(), 10, session_id="fixed")
        with pytest.raises(StoreError):
            store.create(cfg(), 10, session_id="../escape")
        assert store.list_ids() == ["fixed"]
