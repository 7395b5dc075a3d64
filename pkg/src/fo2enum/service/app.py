"""FastAPI service wrapping the enumeration engine.

Sentences are registered once (POST /sentences) and kept compiled in memory;
the id is a content hash, so re-registering the same text is idempotent and
every later query reuses the tables and the memoized template cache. Model
streams are served as NDJSON: one header record with the vocabulary and the
domain size, then one record per model.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterator

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse

from fo2enum.config import ConfigError
from fo2enum.engine import CompiledSentence, render_model
from fo2enum.formula import FormulaError, render_atom
from fo2enum.oracle import OracleError, oracle_models
from fo2enum.service import schemas


def _sentence_id(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _dumps(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


def create_app() -> FastAPI:
    app = FastAPI(title="fo2enum", version="0.1.0")
    registry: dict[str, CompiledSentence] = {}

    def get(sid: str) -> CompiledSentence:
        try:
            return registry[sid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown sentence id {sid!r}") from None

    def info(sid: str, cs: CompiledSentence) -> dict:
        data = cs.type_info()
        return {
            "id": sid,
            "predicates": data["predicates"],
            "equality": data["equality"],
            "m": data["m"],
            "betas": data["betas"],
            "delta": data["delta"],
            "delta_eff": data["delta_eff"],
            "u": data["u"],
        }

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sentences", response_model=schemas.SentenceInfo)
    def register(req: schemas.SentenceRequest):
        sid = _sentence_id(req.text)
        if sid not in registry:
            try:
                registry[sid] = CompiledSentence(req.text)
            except FormulaError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
        return info(sid, registry[sid])

    @app.get("/sentences/{sid}", response_model=schemas.SentenceInfo)
    def sentence_info(sid: str):
        return info(sid, get(sid))

    @app.get("/sentences/{sid}/types", response_model=schemas.TypeInfo)
    def types(sid: str):
        cs = get(sid)
        data = cs.type_info()
        return {**info(sid, cs), "aux_predicates": data["aux_predicates"],
                "compatible_one_types": data["compatible_one_types"]}

    @app.post("/sentences/{sid}/check-config", response_model=schemas.SatResponse)
    def check_config(sid: str, req: schemas.ConfigRequest):
        cs = get(sid)
        try:
            return {"satisfiable": cs.check_config(tuple(req.config))}
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.post("/sentences/{sid}/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(sid: str, req: schemas.SpectrumRequest):
        return {"in_spectrum": get(sid).spectrum(req.n)}

    @app.post("/sentences/{sid}/count", response_model=schemas.CountResponse)
    def count(sid: str, req: schemas.CountRequest):
        return {"count": get(sid).count(req.n)}

    @app.post("/sentences/{sid}/enumerate")
    def enumerate_(sid: str, req: schemas.EnumerateRequest):
        cs = get(sid)

        def stream() -> Iterator[str]:
            header = {
                "vocabulary": [f"{p.name}/{p.arity}" for p in cs.sentence.vocabulary.predicates],
                "n": req.n,
            }
            yield _dumps(header) + "\n"
            for i, model in enumerate(cs.models(req.n, limit=req.limit)):
                yield _dumps({"index": i, "model": render_model(model)}) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.post("/sentences/{sid}/bench", response_model=schemas.BenchResponse)
    def bench(sid: str, req: schemas.BenchRequest):
        if not req.sizes:
            raise HTTPException(status_code=400, detail="empty size list")
        report = get(sid).bench(req.sizes, limit=req.limit)
        return {
            "rows": [
                {
                    "n": r.n,
                    "models": r.models,
                    "mean_delay": r.mean_delay,
                    "max_delay": r.max_delay,
                    "p99_delay": r.p99_delay,
                }
                for r in report.rows
            ],
            "slope": report.slope,
        }

    @app.post("/sentences/{sid}/oracle", response_model=schemas.OracleResponse)
    def oracle(sid: str, req: schemas.OracleRequest):
        cs = get(sid)
        try:
            result = oracle_models(cs.snf, req.n)
        except OracleError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        rendered = sorted(
            sorted(render_atom(pred, args) for pred, args in key) for key in result.models
        )
        return {"count": result.count, "models": rendered}

    return app


app = create_app()
