"""HTTP surface: query endpoint, session log download, health and stats.

In-band failures (out-of-scope, unknown place, bad time cue) come back as
HTTP 200 fallback responses; the conversation continuing is the success
mode. Only malformed transport-level requests get 4xx.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from servicenav.config import ServiceConfig
from servicenav.engine import Engine, EngineAnswer
from servicenav.geo import GeoPoint
from servicenav.sessions import UnknownSession
from servicenav.understanding import MAX_QUERY_CHARS


class ClientLocation(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class QueryRequest(BaseModel):
    session_id: str = Field(min_length=1)
    text: str = Field(max_length=MAX_QUERY_CHARS)
    client_location: ClientLocation | None = None


class CardModel(BaseModel):
    org_name: str
    distance_mi: str | None
    phone: str
    address: str
    hours_line: str
    services: list[str]
    lat: float
    lon: float
    directions_url: str
    details: dict


class StopModel(BaseModel):
    index: int
    label: str
    cards: list[CardModel]


class StopPlanModel(BaseModel):
    stops: list[StopModel]
    message: str | None


class FallbackModel(BaseModel):
    reason: str
    user_message: str


class MapMarker(BaseModel):
    label: str
    lat: float
    lon: float
    distance_mi: str | None


class QueryResponse(BaseModel):
    kind: str  # "answer" | "fallback"
    stop_plan: StopPlanModel | None = None
    fallback: FallbackModel | None = None
    compiled_query: str | None = None
    map_markers: list[MapMarker] = []
    latency_ms: float


def _to_response(answer: EngineAnswer) -> QueryResponse:
    if answer.kind == "fallback":
        return QueryResponse(
            kind="fallback",
            fallback=FallbackModel(
                reason=answer.fallback.reason.value,
                user_message=answer.fallback.user_message,
            ),
            map_markers=[],
            latency_ms=answer.latency_ms,
        )
    plan = answer.stop_plan
    stops = []
    markers = []
    for stop in plan.stops:
        cards = []
        for card in stop.cards:
            cards.append(
                CardModel(
                    org_name=card.org_name,
                    distance_mi=card.distance_mi,
                    phone=card.phone,
                    address=card.address,
                    hours_line=card.hours_line,
                    services=list(card.services),
                    lat=card.point.lat,
                    lon=card.point.lon,
                    directions_url=card.directions,
                    details={
                        "description": card.details.description,
                        "eligibility": card.details.eligibility,
                        "weekly_hours": list(card.details.weekly_hours),
                        "all_services": list(card.details.all_services),
                        "neighborhood": card.details.neighborhood,
                    },
                )
            )
            markers.append(
                MapMarker(
                    label=card.org_name,
                    lat=card.point.lat,
                    lon=card.point.lon,
                    distance_mi=card.distance_mi,
                )
            )
        stops.append(StopModel(index=stop.index, label=stop.label, cards=cards))
    return QueryResponse(
        kind="answer",
        stop_plan=StopPlanModel(stops=stops, message=plan.message),
        compiled_query=answer.compiled_query,
        map_markers=markers,
        latency_ms=answer.latency_ms,
    )


def create_app(config: ServiceConfig | None = None, engine: Engine | None = None) -> FastAPI:
    engine = engine or Engine(config)
    app = FastAPI(title="servicenav", version="0.1.0")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[engine.config.cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    def malformed_body(_request, exc: RequestValidationError):
        # Malformed transport-level input is a plain 400; in-band pipeline
        # failures still ride back as 200 fallbacks.
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.post("/api/query", response_model=QueryResponse)
    def query(body: QueryRequest) -> QueryResponse:
        loc = None
        if body.client_location is not None:
            loc = GeoPoint(body.client_location.lat, body.client_location.lon)
        answer = engine.handle_query(body.session_id, body.text, loc)
        return _to_response(answer)

    @app.get("/api/session/{session_id}/log", response_class=PlainTextResponse)
    def session_log(session_id: str) -> str:
        try:
            return engine.export_log(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail="unknown session") from None

    @app.get("/api/health")
    def health() -> dict:
        return engine.health()

    @app.get("/api/stats")
    def stats() -> dict:
        return engine.stats()

    return app
