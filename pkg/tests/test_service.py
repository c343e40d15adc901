"""HTTP advisor service: lifecycle, conflict handling, simulation parity."""

import concurrent.futures
import json

import pytest
from fastapi.testclient import TestClient

from lastn.analytics import StrategyConfig, mc_omega
from lastn.service import create_app
from lastn.session import replay
from lastn.store import SessionStore
from lastn.wheel import make_model


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "store")
    with TestClient(app) as c:
        yield c


def create_session(client, n=3, bankroll=500, **extra):
    body = {"n": n, "bankroll": bankroll, **extra}
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()


class TestLifecycle:
    def test_create_then_fetch(self, client):
        state = create_session(client, n=4, bankroll=900, bet_unit=3)
        sid = state["id"]
        assert state["phase"] == "warmup"
        assert state["sequence"] == 0
        assert state["config"] == {"n": 4, "bet_unit": 3, "wheel": "european"}
        got = client.get(f"/sessions/{sid}").json()
        assert got == state
        assert sid in client.get("/sessions").json()["sessions"]

    def test_warmup_ends_exactly_when_the_window_fills(self, client):
        sid = create_session(client, n=12, bankroll=10_000)["id"]
        for i in range(12):
            before = client.get(f"/sessions/{sid}").json()
            assert before["phase"] == "warmup", f"spin {i}"
            assert before["recommendation"]["bets"] == []
            resp = client.post(
                f"/sessions/{sid}/spins", json={"outcome": i, "sequence": i}
            )
            assert resp.status_code == 200
        after = client.get(f"/sessions/{sid}").json()
        assert after["phase"] == "probing"
        assert sorted(after["recommendation"]["bets"]) == list(range(12))

    def test_unknown_session_is_404(self, client):
        resp = client.get("/sessions/deadbeef")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown-session"

    def test_decision_endpoint_shape(self, client):
        sid = create_session(client, n=2)["id"]
        for i, out in enumerate([5, 9, 5, 9]):
            client.post(f"/sessions/{sid}/spins", json={"outcome": out, "sequence": i})
        decision = client.get(f"/sessions/{sid}/decision").json()
        assert decision["settled_spins"] == 2
        assert decision["verdict"] == "undecided"
        assert decision["spins_observed"] == 4


class TestConflicts:
    def test_duplicate_sequence_is_409_and_state_is_unchanged(self, client):
        sid = create_session(client)["id"]
        ok = client.post(f"/sessions/{sid}/spins", json={"outcome": 7, "sequence": 0})
        assert ok.status_code == 200
        snapshot = client.get(f"/sessions/{sid}").json()
        dup = client.post(f"/sessions/{sid}/spins", json={"outcome": 31, "sequence": 0})
        assert dup.status_code == 409
        body = dup.json()["error"]
        assert body["code"] == "sequence-conflict"
        assert "expected sequence 1" in body["message"]
        assert client.get(f"/sessions/{sid}").json() == snapshot

    def test_gap_in_sequence_is_409(self, client):
        sid = create_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/spins", json={"outcome": 7, "sequence": 3})
        assert resp.status_code == 409

    def test_concurrent_posts_with_the_same_sequence_admit_exactly_one(self, client):
        sid = create_session(client, n=2, bankroll=10_000)["id"]

        def post(outcome):
            return client.post(
                f"/sessions/{sid}/spins", json={"outcome": outcome, "sequence": 0}
            )

        with concurrent.futures.ThreadPoolExecutor(8) as pool:
            codes = [r.status_code for r in pool.map(post, range(8))]
        assert sorted(codes) == [200] + [409] * 7
        assert client.get(f"/sessions/{sid}").json()["sequence"] == 1


class TestValidation:
    def test_pocket_out_of_range_is_400(self, client):
        sid = create_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/spins", json={"outcome": 37, "sequence": 0})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "invalid-pocket"
        assert client.get(f"/sessions/{sid}").json()["sequence"] == 0

    def test_american_wheel_accepts_its_extra_pocket(self, client):
        sid = create_session(client, wheel="american")["id"]
        resp = client.post(f"/sessions/{sid}/spins", json={"outcome": 37, "sequence": 0})
        assert resp.status_code == 200

    def test_malformed_body_is_400_with_field_context(self, client):
        resp = client.post("/sessions", json={"n": "many", "bankroll": 100})
        assert resp.status_code == 400
        body = resp.json()["error"]
        assert body["code"] == "invalid-params"
        assert "n" in body["message"]

    def test_unknown_wheel_is_rejected(self, client):
        resp = client.post("/sessions", json={"n": 3, "bankroll": 100, "wheel": "martian"})
        assert resp.status_code == 400


class TestSimulate:
    def test_matches_the_library_estimator_bit_for_bit(self, client):
        resp = client.post(
            "/simulate",
            json={"family": "gaussian", "param": 0.05, "n": 4,
                  "trials": 100_000, "seed": 17},
        )
        assert resp.status_code == 200
        got = resp.json()
        model = make_model("gaussian", 0.05)
        want = mc_omega(model, 4, trials=100_000, seed=17)
        assert got["omega"] == want.omega
        assert got["std_error"] == want.std_error
        assert got["trials"] == want.trials

    def test_uniform_wheel_recovers_the_house_edge(self, client):
        resp = client.post(
            "/simulate",
            json={"family": "uniform", "param": 0.0, "n": 10,
                  "trials": 100_000, "seed": 5},
        )
        body = resp.json()
        assert abs(body["omega"] - (-1 / 37)) < 4 * body["std_error"] + 1e-12

    def test_trial_cap(self, client):
        resp = client.post(
            "/simulate",
            json={"family": "uniform", "param": 0.0, "n": 2, "trials": 10**9},
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "trials-too-large"

    def test_nonpositive_trials_rejected(self, client):
        resp = client.post(
            "/simulate", json={"family": "uniform", "param": 0.0, "n": 2, "trials": 0}
        )
        assert resp.status_code == 400


class TestPersistence:
    def test_http_session_equals_a_replay_of_its_log(self, tmp_path):
        store_dir = tmp_path / "store"
        app = create_app(store_dir)
        outcomes = [7, 7, 19, 7, 0, 36, 7, 7, 12, 19]
        with TestClient(app) as client:
            sid = create_session(client, n=3, bankroll=700, bet_unit=2)["id"]
            for i, out in enumerate(outcomes):
                r = client.post(
                    f"/sessions/{sid}/spins", json={"outcome": out, "sequence": i}
                )
                assert r.status_code == 200
            served = client.get(f"/sessions/{sid}").json()
            log_text = client.get(f"/sessions/{sid}/log").text

        want = replay(outcomes, StrategyConfig(window=3, bet_unit=2), 700)
        assert served["bankroll"] == want.bankroll
        assert served["phase"] == want.phase
        assert [int(line.split(",")[2]) for line in log_text.splitlines()[1:]] == outcomes

        fresh = create_app(store_dir)
        with TestClient(fresh) as client:
            again = client.get(f"/sessions/{sid}").json()
        assert again == served

    def test_schema_endpoint(self, tmp_path):
        with TestClient(create_app(tmp_path / "s")) as client:
            schema = client.get("/schema").json()
        assert schema["version"] == 1
        assert "/sessions/{id}/spins" in json.dumps(schema)

    def test_store_rows_survive_on_disk(self, tmp_path):
        store_dir = tmp_path / "store"
        with TestClient(create_app(store_dir)) as client:
            sid = create_session(client, n=2)["id"]
            client.post(f"/sessions/{sid}/spins", json={"outcome": 4, "sequence": 0})
        store = SessionStore(store_dir)
        assert store.exists(sid)
        assert store.load(sid).spins == [4]
