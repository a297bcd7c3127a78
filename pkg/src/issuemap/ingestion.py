"""Issue dump loading/serialization and the append-only decision log.

The dump is one UTF-8 JSON document:

    {"projects": [{"code": ..., "releases": [...]}, ...],
     "issues":   [{"key", "project", "type", "status", "title", "description",
                   "comments": [...], "priority": 0-5, "release": null|name}, ...],
     "links":    [{"source", "target",
                   "type": "parent-child"|"requires"|"duplicates"|"relates"}, ...]}

Field names are normative and case-sensitive. Decisions are persisted as
newline-delimited JSON records, append-only; replay over a fresh graph
reproduces accepted links and rejection suppressions.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable

from issuemap.errors import (
    DecisionLogError,
    DumpIntegrityError,
    DumpParseError,
    MalformedKeyError,
)
from issuemap.graph import GraphStore, LinkGraph, build_graph
from issuemap.model import (
    Issue,
    IssueKey,
    IssueType,
    Link,
    LinkOrigin,
    LinkType,
    Priority,
    ReleaseOrder,
    parse_issue_key,
)

logger = logging.getLogger(__name__)

_ISSUE_FIELDS = {
    "key",
    "project",
    "type",
    "status",
    "title",
    "description",
    "comments",
    "priority",
    "release",
}
_LINK_FIELDS = {"source", "target", "type"}
_PROJECT_FIELDS = {"code", "releases"}


@dataclass(frozen=True)
class IssueDump:
    projects: tuple[ReleaseOrder, ...]
    issues: tuple[Issue, ...]
    links: tuple[Link, ...]

    @property
    def orders(self) -> dict[str, ReleaseOrder]:
        return {order.project: order for order in self.projects}

    def to_graph(self) -> LinkGraph:
        return build_graph(self.issues, self.links)


def _expect(value, kind, location: str):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DumpParseError(
            f"expected {kind.__name__}, got {type(value).__name__}", location
        )
    return value


def _expect_fields(record: dict, allowed: set[str], location: str) -> None:
    unknown = sorted(set(record) - allowed)
    if unknown:
        raise DumpParseError(f"unknown fields: {unknown}", location)
    missing = sorted(allowed - set(record))
    if missing:
        raise DumpParseError(f"missing fields: {missing}", location)


def _parse_key(text, location: str) -> IssueKey:
    try:
        return parse_issue_key(_expect(text, str, location))
    except MalformedKeyError as exc:
        raise DumpParseError(str(exc), location) from None


def _parse_project(record, index: int) -> ReleaseOrder:
    location = f"projects[{index}]"
    _expect(record, dict, location)
    _expect_fields(record, _PROJECT_FIELDS, location)
    code = _expect(record["code"], str, f"{location}.code")
    releases = _expect(record["releases"], list, f"{location}.releases")
    names = [_expect(name, str, f"{location}.releases[{i}]") for i, name in enumerate(releases)]
    try:
        return ReleaseOrder(project=code, releases=tuple(names))
    except ValueError as exc:
        raise DumpIntegrityError(str(exc), location) from None


def _parse_issue(record, index: int, orders: dict[str, ReleaseOrder]) -> Issue:
    location = f"issues[{index}]"
    _expect(record, dict, location)
    _expect_fields(record, _ISSUE_FIELDS, location)
    key = _parse_key(record["key"], f"{location}.key")
    project = _expect(record["project"], str, f"{location}.project")
    if project not in orders:
        raise DumpIntegrityError(f"undeclared project {project!r}", location)
    if key.project != project:
        raise DumpIntegrityError(
            f"key {key} does not belong to project {project!r}", location
        )
    type_name = _expect(record["type"], str, f"{location}.type")
    try:
        issue_type = IssueType(type_name)
    except ValueError:
        raise DumpParseError(f"unknown issue type {type_name!r}", f"{location}.type") from None
    rank = _expect(record["priority"], int, f"{location}.priority")
    if not 0 <= rank <= 5:
        raise DumpParseError(f"priority must be 0-5, got {rank}", f"{location}.priority")
    release = record["release"]
    if release is not None:
        _expect(release, str, f"{location}.release")
        if release not in orders[project].releases:
            raise DumpIntegrityError(
                f"release {release!r} is not in project {project}'s release order",
                location,
            )
    comments = _expect(record["comments"], list, f"{location}.comments")
    return Issue(
        key=key,
        title=_expect(record["title"], str, f"{location}.title"),
        description=_expect(record["description"], str, f"{location}.description"),
        comments=tuple(
            _expect(c, str, f"{location}.comments[{i}]") for i, c in enumerate(comments)
        ),
        type=issue_type,
        status=_expect(record["status"], str, f"{location}.status"),
        priority=Priority(rank),
        release=release,
        project=project,
    )


def _parse_link(record, index: int, known: set[IssueKey]) -> Link:
    location = f"links[{index}]"
    _expect(record, dict, location)
    _expect_fields(record, _LINK_FIELDS, location)
    source = _parse_key(record["source"], f"{location}.source")
    target = _parse_key(record["target"], f"{location}.target")
    type_name = _expect(record["type"], str, f"{location}.type")
    try:
        link_type = LinkType(type_name)
    except ValueError:
        raise DumpParseError(f"unknown link type {type_name!r}", f"{location}.type") from None
    for endpoint in (source, target):
        if endpoint not in known:
            raise DumpIntegrityError(f"link references undeclared issue {endpoint}", location)
    if source == target:
        raise DumpIntegrityError(f"link endpoints must differ: {source}", location)
    return Link(source=source, target=target, type=link_type, origin=LinkOrigin.IMPORTED)


def load_dump(data: bytes | str) -> IssueDump:
    """Parse and fully validate a dump document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DumpParseError(
            f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}"
        ) from None

    _expect(document, dict, "document")
    _expect_fields(document, {"projects", "issues", "links"}, "document")

    orders: dict[str, ReleaseOrder] = {}
    for i, record in enumerate(_expect(document["projects"], list, "projects")):
        order = _parse_project(record, i)
        if order.project in orders:
            raise DumpIntegrityError(f"duplicate project code {order.project!r}", f"projects[{i}]")
        orders[order.project] = order

    issues: list[Issue] = []
    seen_keys: set[IssueKey] = set()
    for i, record in enumerate(_expect(document["issues"], list, "issues")):
        issue = _parse_issue(record, i, orders)
        if issue.key in seen_keys:
            raise DumpIntegrityError(f"duplicate issue key {issue.key}", f"issues[{i}]")
        seen_keys.add(issue.key)
        issues.append(issue)

    links: list[Link] = []
    seen_triples: set[tuple[IssueKey, IssueKey, LinkType]] = set()
    for i, record in enumerate(_expect(document["links"], list, "links")):
        link = _parse_link(record, i, seen_keys)
        triple = link.triple
        mirrored = (link.target, link.source, link.type)
        if triple in seen_triples or (link.type is LinkType.RELATES and mirrored in seen_triples):
            raise DumpIntegrityError(
                f"duplicate link {link.source} -> {link.target} ({link.type.value})",
                f"links[{i}]",
            )
        seen_triples.add(triple)
        links.append(link)

    return IssueDump(projects=tuple(orders.values()), issues=tuple(issues), links=tuple(links))


def load_dump_path(path: str | Path) -> IssueDump:
    return load_dump(Path(path).read_bytes())


def serialize_dump(dump: IssueDump) -> str:
    """Inverse of load_dump, field-for-field."""
    document = {
        "projects": [
            {"code": order.project, "releases": list(order.releases)}
            for order in dump.projects
        ],
        "issues": [
            {
                "key": str(issue.key),
                "project": issue.project,
                "type": issue.type.value,
                "status": issue.status,
                "title": issue.title,
                "description": issue.description,
                "comments": list(issue.comments),
                "priority": issue.priority.rank,
                "release": issue.release,
            }
            for issue in dump.issues
        ],
        "links": [
            {"source": str(link.source), "target": str(link.target), "type": link.type.value}
            for link in dump.links
        ],
    }
    return json.dumps(document, ensure_ascii=False, indent=2)


class DecisionKind(Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass(frozen=True)
class DecisionRecord:
    source: IssueKey
    candidate: IssueKey
    decision: DecisionKind
    link_type: LinkType | None
    timestamp: datetime

    def __post_init__(self):
        if (self.link_type is not None) != (self.decision is DecisionKind.ACCEPTED):
            raise ValueError("link_type is present exactly for accepted decisions")

    @classmethod
    def now(
        cls, source: IssueKey, candidate: IssueKey, decision: DecisionKind,
        link_type: LinkType | None = None,
    ) -> DecisionRecord:
        return cls(source, candidate, decision, link_type, datetime.now(timezone.utc))

    def to_json(self) -> str:
        payload = {
            "source": str(self.source),
            "candidate": str(self.candidate),
            "decision": self.decision.value,
            "timestamp": self.timestamp.isoformat().replace("+00:00", "Z"),
        }
        if self.link_type is not None:
            payload["type"] = self.link_type.value
        return json.dumps(payload, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> DecisionRecord:
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DecisionLogError(f"unreadable decision record: {exc.msg}") from None
        if not isinstance(payload, dict):
            raise DecisionLogError("decision record is not an object")
        try:
            kind = DecisionKind(payload["decision"])
            link_type = LinkType(payload["type"]) if "type" in payload else None
            timestamp = datetime.fromisoformat(payload["timestamp"].replace("Z", "+00:00"))
            return cls(
                source=parse_issue_key(payload["source"]),
                candidate=parse_issue_key(payload["candidate"]),
                decision=kind,
                link_type=link_type,
                timestamp=timestamp,
            )
        except (KeyError, ValueError, MalformedKeyError, AttributeError) as exc:
            raise DecisionLogError(f"unreadable decision record: {exc}") from None


class DecisionStore:
    """Append-only decision log with an in-memory view of decided pairs.

    A pair counts as decided regardless of which side a recommendation was
    shown on, so a rejection suppresses both directions permanently.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._records: list[DecisionRecord] = []
        self._decided: dict[frozenset[IssueKey], DecisionRecord] = {}
        if self.path is not None and self.path.exists():
            for record in self._read_existing():
                self._remember(record)

    def _read_existing(self) -> Iterable[DecisionRecord]:
        with self.path.open("r", encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text:
                    continue
                try:
                    yield DecisionRecord.from_json(text)
                except DecisionLogError as exc:
                    logger.warning("%s:%d skipped: %s", self.path, number, exc)

    def _remember(self, record: DecisionRecord) -> None:
        self._records.append(record)
        self._decided[frozenset((record.source, record.candidate))] = record

    @property
    def records(self) -> tuple[DecisionRecord, ...]:
        return tuple(self._records)

    def is_decided(self, a: IssueKey, b: IssueKey) -> bool:
        return frozenset((a, b)) in self._decided

    def decision_for(self, a: IssueKey, b: IssueKey) -> DecisionRecord | None:
        return self._decided.get(frozenset((a, b)))

    def rejected_candidates(self, source: IssueKey) -> frozenset[IssueKey]:
        rejected = set()
        for pair, record in self._decided.items():
            if record.decision is DecisionKind.REJECTED and source in pair:
                (other,) = pair - {source}
                rejected.add(other)
        return frozenset(rejected)

    def append(self, record: DecisionRecord) -> None:
        """Durably append one record; the line is written in a single call."""
        if self.path is not None:
            line = record.to_json() + "\n"
            try:
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(line)
                    handle.flush()
                    os.fsync(handle.fileno())
            except OSError as exc:
                raise DecisionLogError(f"cannot append to {self.path}: {exc}") from None
        self._remember(record)


def replay_decisions(store: DecisionStore, graph_store: GraphStore) -> list[str]:
    """Re-apply persisted accepts onto a fresh graph; idempotent and tolerant.

    Returns warnings for records that no longer apply (unknown issues,
    already-present links).
    """
    warnings: list[str] = []
    for record in store.records:
        if record.decision is not DecisionKind.ACCEPTED:
            continue
        graph = graph_store.snapshot()
        if record.source not in graph.issues or record.candidate not in graph.issues:
            warnings.append(
                f"skipped decision {record.source} -> {record.candidate}:"
                " issue not in dump"
            )
            continue
        if graph.has_link(record.source, record.candidate, record.link_type):
            continue
        graph_store.add_link(
            Link(record.source, record.candidate, record.link_type, LinkOrigin.USER_ACCEPTED)
        )
    for warning in warnings:
        logger.warning("%s", warning)
    return warnings
