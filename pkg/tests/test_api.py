import json
import time

import pytest
from fastapi.testclient import TestClient

from discoursekit.api import create_app
from discoursekit.cli import run_cli
from discoursekit.workspace import Workspace


@pytest.fixture
def ready_workspace(workspace):
    """Workspace with ingest/filter/train/merge already run."""
    assert run_cli(["-w", str(workspace), "ingest"]) == 0
    assert run_cli(["-w", str(workspace), "filter"]) == 0
    assert run_cli(["-w", str(workspace), "train"]) == 0
    mapping = workspace / "mapping.json"
    mapping.write_text(json.dumps({"0": "keep", "1": "merge:0"}), encoding="utf-8")
    assert run_cli(["-w", str(workspace), "merge", "--mapping", str(mapping)]) == 0
    return workspace


@pytest.fixture
def client(ready_workspace):
    return TestClient(create_app(Workspace(ready_workspace)))


class TestTopics:
    def test_schema_version_header_on_every_response(self, client):
        assert client.get("/topics").headers["X-Schema-Version"] == "1"
        assert client.get("/topics/999").headers["X-Schema-Version"] == "1"

    def test_list_and_detail(self, client):
        listing = client.get("/topics").json()
        assert listing["total"] == 1
        card = listing["items"][0]
        assert card["k"] == 5 and len(card["keywords"]) == 5
        detail = client.get("/topics/0").json()
        assert detail == card

    def test_unknown_topic_404(self, client):
        assert client.get("/topics/7").status_code == 404

    def test_pagination(self, client):
        out = client.get("/topics", params={"offset": 1}).json()
        assert out["total"] == 1 and out["items"] == []


class TestDescriptionGate:
    def test_empty_description_rejected(self, client):
        r = client.post("/topics/0/description", json={"text": "   "})
        assert r.status_code == 422

    def test_label_blocked_until_description(self, client):
        assert client.post("/label/0").status_code == 409

    def test_description_round_trip_feeds_topic_prompt(self, client, ready_workspace):
        r = client.post("/topics/0/description",
                        json={"text": "medal-centric success framing"})
        assert r.status_code == 200
        assert r.json()["manual_description"] == "medal-centric success framing"
        r = client.post("/label/0")
        assert r.status_code == 200
        assert r.json()["implication"].startswith("Mock implication paragraph")
        # the saved description must appear in the stage-2 prompt that was sent
        log = Workspace(ready_workspace).exchange_log()
        stage2 = [rec for rec in log.records if rec.stage == "implication"]
        assert len(stage2) == 1
        assert "Analyst description: medal-centric success framing" in stage2[0].prompt
        # and all keywords with 4-decimal weights plus their senses
        cards = Workspace(ready_workspace).load_cards()
        for (word, weight), sense in zip(cards[0].keywords, cards[0].senses):
            assert f"{word} (weight={weight:.4f}): {sense}" in stage2[0].prompt

    def test_skip_unblocks_label(self, client):
        assert client.post("/topics/0/description",
                           json={"skipped": True}).status_code == 200
        detail = client.get("/topics/0").json()
        assert detail["description_skipped"] is True
        assert client.post("/label/0").status_code == 200


class TestPhraseologyEndpoints:
    def test_kwic_counts_match_frequency(self, client, ready_workspace):
        out = client.get("/kwic", params={"node": "medal"}).json()
        idx = Workspace(ready_workspace).index()
        assert out["frequency"] == idx.frequency("medal")
        assert out["total"] == len(out["items"]) == out["frequency"]

    def test_absent_node_404(self, client):
        assert client.get("/kwic", params={"node": "zzz"}).json()["frequency"] == 0
        assert client.get("/collocates", params={"node": "zzz"}).status_code == 404

    def test_collocates(self, client):
        out = client.get("/collocates",
                         params={"node": "medal", "measure": "mi"}).json()
        assert out["total"] >= 1
        assert all({"form", "stat", "freq"} <= set(i) for i in out["items"])

    def test_pattern_listing_and_matches_persisted(self, client, ready_workspace):
        names = [p["name"] for p in client.get("/patterns").json()["items"]]
        assert names == ["bare", "v_gold"]
        out = client.get("/patterns/v_gold/matches", params={"node": "medal"}).json()
        assert out["total"] == 2
        assert Workspace(ready_workspace).has_artifact("matches.json")

    def test_unknown_pattern_404(self, client):
        r = client.get("/patterns/nope/matches", params={"node": "medal"})
        assert r.status_code == 404


class TestAnnotationsAndProsody:
    def test_annotate_then_summary(self, client):
        out = client.get("/patterns/v_gold/matches", params={"node": "medal"}).json()
        mid = out["items"][0]["match_id"]
        r = client.post("/annotations", json={"match_id": mid, "label": "positive",
                                              "annotator": "a1"})
        assert r.status_code == 200
        summary = client.get("/prosody", params={"pattern": "v_gold"}).json()
        assert summary["counts"]["positive"] == 1
        assert summary["unannotated"] == 1

    def test_unknown_match_404(self, client):
        r = client.post("/annotations", json={"match_id": "zzz", "label": "positive",
                                              "annotator": "a1"})
        assert r.status_code == 404


class TestReportAndJobs:
    def test_report_markdown(self, client):
        r = client.get("/report")
        assert r.status_code == 200
        assert r.text.startswith("# Discourse analysis report")

    def test_job_lifecycle(self, client, ready_workspace):
        r = client.post("/jobs", json={"kind": "train"})
        assert r.status_code == 200
        job_id = r.json()["id"]
        for _ in range(100):
            status = client.get(f"/jobs/{job_id}").json()["status"]
            if status != "running":
                break
            time.sleep(0.05)
        assert status == "done"
        assert Workspace(ready_workspace).has_artifact("model.json")

    def test_bad_job_kind(self, client):
        assert client.post("/jobs", json={"kind": "explode"}).status_code == 422

    def test_unknown_job_404(self, client):
        assert client.get("/jobs/doesnotexist").status_code == 404

    def test_cli_written_artifacts_visible_without_restart(self, client, ready_workspace):
        # another process (the CLI) re-trains; the API sees the new artifact
        # because every request re-reads the manifest
        before = client.get("/topics").json()
        assert run_cli(["-w", str(ready_workspace), "train", "--seed", "99"]) == 0
        r = client.get("/kwic", params={"node": "medal"})
        assert r.status_code == 200
