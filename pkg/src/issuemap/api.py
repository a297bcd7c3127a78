"""HTTP facade over the link-map service.

Endpoints (JSON over HTTP/1.1, UTF-8):

    GET  /issues/{key}                      issue detail (?comments=true)
    GET  /issues/{key}/map                  depth-bounded link map (+filters)
    GET  /issues/{key}/recommendations      pending link recommendations
    POST /issues/{key}/recommendations/{c}  accept/reject a recommendation
    GET  /issues/{key}/consistency          release-plan consistency report
    GET  /stats                             whole-graph counts and metrics

Errors carry a machine-readable code and a human message:
    {"error": {"code": "unknown-issue", "message": "..."}}
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.routing import APIRouter

from issuemap.errors import (
    AlreadyDecidedError,
    MalformedKeyError,
    NoPendingRecommendationError,
    UnknownIssueError,
)
from issuemap.graph import IssueFilter
from issuemap.ingestion import DecisionKind
from issuemap.model import IssueKey, IssueType, LinkType, parse_issue_key
from issuemap.service import (
    DEFAULT_DEPTH,
    LinkMapService,
    consistency_payload,
    issue_payload,
    map_payload,
    recommendations_payload,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _parse_key(text: str) -> IssueKey:
    try:
        return parse_issue_key(text)
    except MalformedKeyError as exc:
        raise ApiError(400, "malformed-key", str(exc)) from None


def _parse_depth(raw: str | None, cap: int) -> int:
    if raw is None:
        return min(DEFAULT_DEPTH, cap)
    try:
        depth = int(raw)
    except ValueError:
        raise ApiError(400, "invalid-depth", f"depth must be an integer, got {raw!r}") from None
    if depth < 0:
        raise ApiError(400, "invalid-depth", f"depth must be non-negative, got {depth}")
    if depth > cap:
        raise ApiError(400, "invalid-depth", f"depth {depth} exceeds the maximum of {cap}")
    return depth


def _split(raw: str | None) -> list[str]:
    if raw is None:
        return []
    return [part for part in (piece.strip() for piece in raw.split(",")) if part]


def _parse_filter(
    type_raw: str | None,
    priority_raw: str | None,
    release_raw: str | None,
    project_raw: str | None,
    status_raw: str | None,
) -> tuple[IssueFilter, dict]:
    """Build an IssueFilter from query values plus the echo reported back."""
    types = None
    type_names = _split(type_raw)
    if type_names:
        types = set()
        for name in type_names:
            try:
                types.add(IssueType(name))
            except ValueError:
                raise ApiError(400, "invalid-filter", f"unknown issue type {name!r}") from None

    priority_min = priority_max = None
    if priority_raw is not None and priority_raw.strip():
        text = priority_raw.strip()
        low, _, high = text.partition("-")
        try:
            priority_min = int(low)
            priority_max = int(high) if high else priority_min
        except ValueError:
            raise ApiError(
                400, "invalid-filter", f"priority must be RANK or MIN-MAX, got {text!r}"
            ) from None
        if not (0 <= priority_min <= priority_max <= 5):
            raise ApiError(400, "invalid-filter", f"priority range {text!r} is out of 0-5")

    releases = None
    release_names = _split(release_raw)
    if release_names:
        # the literal "none" selects unscheduled issues
        releases = frozenset(None if name == "none" else name for name in release_names)

    projects = frozenset(_split(project_raw)) or None
    status = status_raw if status_raw else None

    issue_filter = IssueFilter(
        types=frozenset(types) if types else None,
        priority_min=priority_min,
        priority_max=priority_max,
        releases=releases,
        projects=projects,
        status=status,
    )
    echo = {
        "type": sorted(t.value for t in types) if types else None,
        "priority": priority_raw if priority_raw else None,
        "release": sorted(release_names) if release_names else None,
        "project": sorted(projects) if projects else None,
        "status": status,
    }
    return issue_filter, echo


def create_app(
    service: LinkMapService,
    base_path: str = "",
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="issuemap", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    router = APIRouter(prefix=base_path.rstrip("/"))

    @app.exception_handler(ApiError)
    async def handle_api_error(_request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(UnknownIssueError)
    async def handle_unknown_issue(_request, exc: UnknownIssueError):
        return _error_response(404, "unknown-issue", str(exc))

    @router.get("/issues/{key}")
    def issue_detail(key: str, comments: bool = False):
        issue = service.issue(_parse_key(key))
        return issue_payload(issue, include_comments=comments)

    @router.get("/issues/{key}/map")
    def issue_map(
        key: str,
        depth: str | None = None,
        type: str | None = None,
        priority: str | None = None,
        release: str | None = None,
        project: str | None = None,
        status: str | None = None,
    ):
        center = _parse_key(key)
        bounded = _parse_depth(depth, service.depth_cap)
        issue_filter, echo = _parse_filter(type, priority, release, project, status)
        sub, graph = service.map(center, bounded, issue_filter)
        return map_payload(sub, echo, graph.version)

    @router.get("/issues/{key}/recommendations")
    def issue_recommendations(key: str):
        return recommendations_payload(service.recommendations(_parse_key(key)))

    @router.post("/issues/{key}/recommendations/{candidate}")
    async def decide_recommendation(key: str, candidate: str, request: Request):
        source = _parse_key(key)
        target = _parse_key(candidate)
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "invalid-body", "request body must be a JSON object") from None
        if not isinstance(body, dict):
            raise ApiError(400, "invalid-body", "request body must be a JSON object")

        decision = body.get("decision")
        if decision not in ("accept", "reject"):
            raise ApiError(
                400, "invalid-decision", 'decision must be "accept" or "reject"'
            )
        link_type = None
        if decision == "accept":
            type_name = body.get("type")
            if not type_name:
                raise ApiError(
                    400, "missing-link-type", "accepting a link requires a link type"
                )
            try:
                link_type = LinkType(type_name)
            except ValueError:
                raise ApiError(
                    400, "invalid-link-type", f"unknown link type {type_name!r}"
                ) from None
        elif body.get("type"):
            raise ApiError(400, "invalid-decision", "a rejection does not carry a link type")

        kind = DecisionKind.ACCEPTED if decision == "accept" else DecisionKind.REJECTED
        try:
            graph = service.decide(source, target, kind, link_type)
        except AlreadyDecidedError as exc:
            raise ApiError(409, "already-decided", str(exc)) from None
        except NoPendingRecommendationError as exc:
            raise ApiError(404, "no-pending-recommendation", str(exc)) from None
        return {"status": decision + "ed", "version": graph.version}

    @router.get("/issues/{key}/consistency")
    def issue_consistency(key: str, depth: str | None = None):
        center = _parse_key(key)
        bounded = _parse_depth(depth, service.depth_cap)
        return consistency_payload(service.consistency(center, bounded))

    @router.get("/stats")
    def stats():
        return service.stats()

    app.include_router(router)
    return app
