"""JSON-over-HTTP API backing the analyst UI.

All mutations go through the same workspace stores the CLI uses, so any state
reachable via the API is identical to the same sequence of CLI commands."""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException, Query, Request, Response
from pydantic import BaseModel

from .colloc import collocates
from .errors import DiscourseKitError, NodeAbsent, UnknownMatch
from .labeling import generate_topic_implication, retrieve_keyword_senses
from .prosody import prosody_summary

SCHEMA_VERSION = "1"


class DescriptionBody(BaseModel):
    text: str = ""
    skipped: bool = False


class AnnotationBody(BaseModel):
    match_id: str
    label: str
    annotator: str
    note: str = ""


class JobBody(BaseModel):
    kind: str  # train | sweep


def _card_json(card):
    return {
        "topic_id": card.topic_id,
        "keywords": [{"word": w, "weight": v} for w, v in card.keywords],
        "senses": card.senses,
        "manual_description": None if card.description_skipped else card.manual_description,
        "description_skipped": card.description_skipped,
        "implication": card.implication,
        "k": card.k,
    }


def create_app(ws) -> FastAPI:
    app = FastAPI(title="discoursekit API")
    jobs: dict[str, dict] = {}
    job_lock = threading.Lock()
    mutate_lock = threading.Lock()

    @app.middleware("http")
    async def schema_version_header(request: Request, call_next):
        ws.refresh()
        response: Response = await call_next(request)
        response.headers["X-Schema-Version"] = SCHEMA_VERSION
        return response

    @app.exception_handler(DiscourseKitError)
    async def domain_error(request, exc):
        from fastapi.responses import JSONResponse
        status = 404 if isinstance(exc, (UnknownMatch, NodeAbsent)) else 400
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__, "message": str(exc)},
                            headers={"X-Schema-Version": SCHEMA_VERSION})

    def _cards():
        if not ws.has_artifact("cards.json"):
            return []
        return ws.load_cards()

    def _card(topic_id: int):
        for c in _cards():
            if c.topic_id == topic_id:
                return c
        raise HTTPException(status_code=404, detail=f"no topic {topic_id}")

    @app.get("/topics")
    def get_topics(offset: int = 0, limit: int = Query(default=100, le=1000)):
        cards = _cards()
        return {"total": len(cards),
                "items": [_card_json(c) for c in cards[offset:offset + limit]]}

    @app.get("/topics/{topic_id}")
    def get_topic(topic_id: int):
        return _card_json(_card(topic_id))

    @app.post("/topics/{topic_id}/description")
    def set_description(topic_id: int, body: DescriptionBody):
        _card(topic_id)
        if not body.skipped and not body.text.strip():
            raise HTTPException(status_code=422,
                                detail="description text required unless skipped")
        with mutate_lock:
            card = ws.set_description(topic_id, body.text, skipped=body.skipped)
        return _card_json(card)

    @app.post("/label/{topic_id}")
    def label_topic(topic_id: int):
        card = _card(topic_id)
        if card.manual_description is None:
            raise HTTPException(status_code=409,
                                detail="description must be saved or skipped before labeling")
        client = ws.llm_client()
        isets = ws.instruction_sets()
        log = ws.exchange_log()
        with mutate_lock:
            if not card.senses:
                card = retrieve_keyword_senses(client, card, isets["I1"], log)
            card = generate_topic_implication(client, card, isets["I2"], log)
            cards = [card if c.topic_id == topic_id else c for c in _cards()]
            ws.save_cards(cards, "api:label", {"cards.json": ws.artifact_hash("cards.json")})
        return _card_json(card)

    @app.get("/kwic")
    def get_kwic(node: str, window: int = 5, offset: int = 0,
                 limit: int = Query(default=50, le=500)):
        index = ws.index()
        lines = index.kwic(node, window=window)
        items = [{
            "doc_id": l.doc_id,
            "node_index": l.node_index,
            "left": [t.surface for t in l.left],
            "right": [t.surface for t in l.right],
            "node": l.node_surface,
        } for l in lines[offset:offset + limit]]
        return {"node": node, "frequency": index.frequency(node),
                "total": len(lines), "items": items}

    @app.get("/collocates")
    def get_collocates(node: str, window: int = 5, min_freq: int = 1,
                       measure: str = "raw", offset: int = 0,
                       limit: int = Query(default=50, le=500)):
        out = collocates(ws.index(), node, window=window, min_freq=min_freq, measure=measure)
        return {"total": len(out),
                "items": [{"form": c.form, "stat": c.stat, "freq": c.freq}
                          for c in out[offset:offset + limit]]}

    @app.get("/patterns")
    def get_patterns():
        return {"items": [{"name": name, "source": p.source}
                          for name, p in sorted(ws.patterns().items())]}

    @app.get("/patterns/{name}/matches")
    def get_matches(name: str, node: str, offset: int = 0,
                    limit: int = Query(default=50, le=500)):
        from .patterns import match_pattern
        patterns = ws.patterns()
        if name not in patterns:
            raise HTTPException(status_code=404, detail=f"no pattern {name!r}")
        matches = match_pattern(ws.index(), patterns[name], node)
        with mutate_lock:
            ws.save_matches(matches, "api:pattern")
        items = [{
            "match_id": m.match_id,
            "doc_id": m.doc_id,
            "span": list(m.span),
            "fillers": {str(k): [t.surface for t in v] for k, v in m.slot_fillers.items()},
        } for m in matches[offset:offset + limit]]
        return {"total": len(matches), "items": items}

    @app.post("/annotations")
    def post_annotation(body: AnnotationBody):
        with mutate_lock:
            ann = ws.annotation_store().annotate(body.match_id, body.label,
                                                 body.annotator, body.note)
        return {"match_id": ann.match_id, "label": ann.label,
                "annotator": ann.annotator, "timestamp": ann.timestamp}

    @app.get("/prosody")
    def get_prosody(pattern: str | None = None, node: str | None = None):
        return prosody_summary(ws.annotation_store(), pattern_name=pattern, node=node)

    @app.get("/report")
    def get_report(format: str = "markdown"):
        from .report import render_report
        cards = _cards() or None
        text = render_report(cards, [], [], format=format)
        return Response(content=text,
                        media_type="text/markdown" if format == "markdown" else "text/csv")

    def _run_job(job_id: str, kind: str):
        from .cli import run_cli
        try:
            code = run_cli(["-w", str(ws.root), kind])
            jobs[job_id]["status"] = "done" if code == 0 else "failed"
            jobs[job_id]["exit_code"] = code
        except Exception as exc:
            jobs[job_id]["status"] = "failed"
            jobs[job_id]["message"] = str(exc)

    @app.post("/jobs")
    def post_job(body: JobBody):
        if body.kind not in ("train", "sweep"):
            raise HTTPException(status_code=422, detail="kind must be train or sweep")
        with job_lock:
            if any(j["status"] == "running" for j in jobs.values()):
                raise HTTPException(status_code=409, detail="a job is already running")
            job_id = uuid.uuid4().hex[:12]
            jobs[job_id] = {"id": job_id, "kind": body.kind, "status": "running"}
        thread = threading.Thread(target=_run_job, args=(job_id, body.kind), daemon=True)
        thread.start()
        return jobs[job_id]

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        if job_id not in jobs:
            raise HTTPException(status_code=404, detail=f"no job {job_id}")
        return jobs[job_id]

    return app
