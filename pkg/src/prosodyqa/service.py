"""HTTP face of the judgment collection module.

JSON wire API:
  GET  /api/task?worker_id=W   next task (204 when the worker is done)
  GET  /api/audio/{asset_id}   audio bytes with the stored media type
  POST /api/judgment           submit one judgment, returns a receipt

The trap flag and timestamp are server-authoritative: values posted by
the client are ignored.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .collection import (
    DuplicateSubmissionError,
    JudgmentStore,
    NoWork,
    TaskAssigner,
    UnknownTaskError,
    ValidationError,
)
from .synth import AudioCache


def create_app(
    assigner: TaskAssigner,
    store: JudgmentStore,
    cache: AudioCache,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="prosodyqa rating service")

    @app.get("/api/task")
    def get_task(worker_id: str = ""):
        worker_id = worker_id.strip()
        if not worker_id:
            return JSONResponse({"error": "worker_id is required"}, status_code=400)
        try:
            task = assigner.next_task(worker_id)
        except NoWork:
            return Response(status_code=204)
        payload = task.public_payload()
        payload["audio_url"] = f"/api/audio/{task.audio_asset_id}"
        return payload

    @app.get("/api/audio/{asset_id}")
    def get_audio(asset_id: str):
        asset = cache.get(asset_id)
        if asset is None:
            return JSONResponse({"error": "unknown asset"}, status_code=404)
        path = cache.media_path(asset_id)
        return FileResponse(path, media_type=asset.media_type)

    @app.post("/api/judgment")
    def post_judgment(payload: dict):
        try:
            receipt = store.submit_judgment(payload)
        except ValidationError as exc:
            return JSONResponse(
                {"error": "validation", "problems": exc.problems}, status_code=400
            )
        except UnknownTaskError as exc:
            return JSONResponse({"error": str(exc.args[0])}, status_code=404)
        except DuplicateSubmissionError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        return {"status": "accepted", **receipt}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
