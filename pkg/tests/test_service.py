"""Wire API: task fetch, audio download, judgment submission."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from prosodyqa.collection import JudgmentStore, RatingUnit, TaskAssigner
from prosodyqa.prosody import BUILTIN_PROFILES, SsmlDocument
from prosodyqa.service import create_app
from prosodyqa.synth import AudioCache, MockTtsClient, Synthesizer, SynthRequest


@pytest.fixture
def api(tmp_path):
    cache = AudioCache(tmp_path / "audio")
    synthesizer = Synthesizer(cache, {"google": MockTtsClient()})
    profile = BUILTIN_PROFILES["google-wavenet-f"]
    units = []
    for i in range(3):
        doc = SsmlDocument(
            markup=f"<speak>answer {i}</speak>",
            item_id=f"item{i}",
            kind="rate",
            profile_name=profile.name,
        )
        asset = synthesizer.synthesize(SynthRequest(ssml=doc, profile=profile))
        units.append(
            RatingUnit(
                item_id=f"item{i}",
                kind="rate",
                question=f"Question {i}?",
                audio_asset_id=asset.asset_id,
            )
        )
    store = JudgmentStore(tmp_path / "judgments.jsonl")
    assigner = TaskAssigner(store, units, seed=0, trap_ratio=0.0)
    app = create_app(assigner, store, cache)
    return TestClient(app), store


def complete_body(task, worker_id="w1"):
    return {
        "worker_id": worker_id,
        "item_id": task["item_id"],
        "kind": task["kind"],
        "informativeness": 4,
        "elocution": 2,
        "interruption": 0,
        "length_rating": 0,
        "typed_key": "answer",
    }


class TestTaskEndpoint:
    def test_task_payload_shape(self, api):
        client, _ = api
        resp = client.get("/api/task", params={"worker_id": "w1"})
        assert resp.status_code == 200
        task = resp.json()
        assert set(task) == {"task_id", "item_id", "kind", "question", "audio_asset_id", "audio_url"}
        assert "is_trap" not in task
        assert task["audio_url"] == f"/api/audio/{task['audio_asset_id']}"

    def test_missing_worker_id(self, api):
        client, _ = api
        assert client.get("/api/task").status_code == 400

    def test_no_work_gives_204(self, api):
        client, _ = api
        for _ in range(3):
            task = client.get("/api/task", params={"worker_id": "w1"}).json()
            client.post("/api/judgment", json=complete_body(task))
        resp = client.get("/api/task", params={"worker_id": "w1"})
        assert resp.status_code == 204


class TestAudioEndpoint:
    def test_audio_bytes_and_media_type(self, api):
        client, _ = api
        task = client.get("/api/task", params={"worker_id": "w1"}).json()
        resp = client.get(task["audio_url"])
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("audio/wav")
        assert resp.content[:4] == b"RIFF"

    def test_unknown_asset_404(self, api):
        client, _ = api
        assert client.get("/api/audio/doesnotexist").status_code == 404


class TestRecordedContractFixture:
    """Replay of the fixture the rater UI validates its bodies against."""

    FIXTURE = (
        Path(__file__).resolve().parent.parent
        / "frontend" / "tests" / "fixtures" / "accepted_judgment.json"
    )

    def test_recorded_body_still_accepted(self, tmp_path):
        fixture = json.loads(self.FIXTURE.read_text(encoding="utf-8"))
        unit = fixture["unit"]
        cache = AudioCache(tmp_path / "audio")
        store = JudgmentStore(tmp_path / "judgments.jsonl")
        assigner = TaskAssigner(
            store,
            [
                RatingUnit(
                    item_id=unit["item_id"],
                    kind=unit["kind"],
                    question=unit["question"],
                    audio_asset_id="whatever",
                )
            ],
            seed=7,
            trap_ratio=0.0,
        )
        client = TestClient(create_app(assigner, store, cache))
        task = client.get(
            "/api/task", params={"worker_id": fixture["body"]["worker_id"]}
        ).json()
        assert task["item_id"] == fixture["task"]["item_id"]
        assert task["kind"] == fixture["task"]["kind"]
        resp = client.post("/api/judgment", json=fixture["body"])
        assert resp.status_code == 200
        assert resp.json()["status"] == fixture["response"]["status"]
        assert resp.json()["sequence"] == fixture["response"]["sequence"]


class TestJudgmentEndpoint:
    def test_accepted_with_sequence(self, api):
        client, store = api
        task = client.get("/api/task", params={"worker_id": "w1"}).json()
        resp = client.post("/api/judgment", json=complete_body(task))
        assert resp.status_code == 200
        assert resp.json()["status"] == "accepted"
        assert resp.json()["sequence"] == 1
        assert len(store.judgments()) == 1

    def test_validation_error_lists_problems(self, api):
        client, _ = api
        task = client.get("/api/task", params={"worker_id": "w1"}).json()
        body = complete_body(task)
        body["informativeness"] = 9
        resp = client.post("/api/judgment", json=body)
        assert resp.status_code == 400
        assert any("informativeness" in p for p in resp.json()["problems"])

    def test_duplicate_submission_409(self, api):
        client, _ = api
        task = client.get("/api/task", params={"worker_id": "w1"}).json()
        body = complete_body(task)
        assert client.post("/api/judgment", json=body).status_code == 200
        assert client.post("/api/judgment", json=body).status_code == 409

    def test_unknown_item_404(self, api):
        client, _ = api
        body = {
            "worker_id": "w1",
            "item_id": "never-assigned",
            "informativeness": 1,
            "elocution": 1,
            "interruption": 0,
            "length_rating": 0,
            "typed_key": "x",
        }
        assert client.post("/api/judgment", json=body).status_code == 404
