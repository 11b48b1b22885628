"""HTTP front door: the same pipeline the CLI uses, behind three endpoints.

POST /search takes multipart form data: a `query` part holding a JSON
object (lyrics/title/artist/album/genre/before/after/limit/weights) and an
optional `audio` part with WAV bytes — multipart keeps multi-second clips
out of base64. GET /songs/{id} returns one record's metadata and GET
/health reports liveness. Requests are isolated: indexes are frozen at
serve time and a failing audio decode in one request cannot affect others.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import SearchEngine
from .errors import (
    MetatuneError,
    QueryFieldError,
    QueryValidationError,
    WavError,
)
from .model import FieldKind, Query, parse_release_date
from .wavio import decode_wav


def build_query(spec: dict, audio_bytes: bytes | None = None) -> tuple[Query, int | None]:
    """Turn a decoded query JSON object (+ optional WAV bytes) into a Query.

    Returns the query and the requested result limit (None = server default).
    Raises QueryValidationError for malformed parts and WavError for bad audio.
    """
    if not isinstance(spec, dict):
        raise QueryValidationError(["query part must be a JSON object"])
    unknown = set(spec) - {"lyrics", "title", "artist", "album", "genre",
                           "before", "after", "limit", "weights"}
    if unknown:
        raise QueryValidationError([f"unknown query keys: {sorted(unknown)}"])

    def text(key: str) -> str | None:
        value = spec.get(key)
        if value is None:
            return None
        return str(value)

    def bound(key: str):
        value = spec.get(key)
        if value is None:
            return None
        try:
            return parse_release_date(str(value))
        except ValueError:
            raise QueryValidationError([f"{key}: {value!r} is not a valid date"])

    weights = None
    if spec.get("weights") is not None:
        raw = spec["weights"]
        if not isinstance(raw, dict):
            raise QueryValidationError(["weights must be an object of field: number"])
        weights = {}
        for name, value in raw.items():
            try:
                field = FieldKind(name)
            except ValueError:
                raise QueryValidationError([f"weights: unknown field {name!r}"])
            try:
                weights[field] = float(value)
            except (TypeError, ValueError):
                raise QueryValidationError([f"weights: {name} must be a number"])

    limit = spec.get("limit")
    if limit is not None:
        try:
            limit = int(limit)
        except (TypeError, ValueError):
            raise QueryValidationError(["limit must be an integer"])

    audio = decode_wav(audio_bytes) if audio_bytes else None
    query = Query(
        lyrics=text("lyrics"),
        title=text("title"),
        artist=text("artist"),
        album=text("album"),
        genre=text("genre"),
        released_before=bound("before"),
        released_after=bound("after"),
        audio=audio,
        weight_overrides=weights,
    )
    return query, limit


def create_app(engine: SearchEngine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="metatune", version="0.1.0")

    @app.get("/health")
    def health():
        return {"status": "ok", "songs": len(engine.records)}

    @app.get("/songs/{song_id}")
    def song(song_id: int):
        try:
            record = engine.song(song_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no song with id {song_id}")
        return {
            "id": record.id,
            "title": record.title,
            "artist": record.artist,
            "album": record.album,
            "genre": record.genre,
            "release_date": record.release_date.isoformat(),
            "lyrics": record.lyrics,
        }

    @app.post("/search")
    async def search(query: str = Form(...), audio: UploadFile | None = File(default=None)):
        try:
            spec = json.loads(query)
        except json.JSONDecodeError as exc:
            raise HTTPException(status_code=400, detail=f"query part is not valid JSON: {exc.msg}")
        audio_bytes = await audio.read() if audio is not None else None
        try:
            parsed, limit = build_query(spec, audio_bytes)
            response = engine.execute(parsed, limit=limit)
        except (QueryValidationError, QueryFieldError, WavError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except MetatuneError as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return JSONResponse(response.to_dict())

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(engine: SearchEngine, host: str = "127.0.0.1", port: int = 8080,
          ui_dir: str | Path | None = None) -> None:
    """Run the HTTP service until interrupted (requires the indexes loaded)."""
    import uvicorn

    uvicorn.run(create_app(engine, ui_dir=ui_dir), host=host, port=port, log_level="info")
