"""Export a project from a Jira-compatible REST endpoint into an issue dump.

Speaks a documented subset of the Jira v2 REST API:

    GET /rest/api/2/search?jql=project=CODE&startAt=N&maxResults=M&fields=...
    GET /rest/api/2/project/CODE/versions

Issues are mapped field for field: summary becomes the title, the first
fixVersion becomes the release, priority names go through a fixed rank table,
and issue links go through a fixed relationship-phrase table. Unmapped link
type phrases become Relates with a warning; unknown priority names become
rank 3 with a warning.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass

import requests

from issuemap.errors import FetchError, PaginationError
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
from issuemap.ingestion import IssueDump

logger = logging.getLogger(__name__)

ENV_BASE_URL = "ISSUEMAP_TRACKER_URL"
ENV_TOKEN = "ISSUEMAP_TRACKER_TOKEN"

DEFAULT_PAGE_SIZE = 100
DEFAULT_RETRIES = 3
_UNKNOWN_PRIORITY_RANK = 3

# Priority-name table; canonical labels round-trip (rank -> label -> rank).
PRIORITY_RANKS = {
    "blocker": 0,
    "highest": 0,
    "critical": 1,
    "high": 1,
    "major": 2,
    "normal": 3,
    "medium": 3,
    "minor": 4,
    "low": 4,
    "trivial": 5,
    "lowest": 5,
}

# Relationship phrase -> (link type, True when this issue is the source).
LINK_PHRASES = {
    "duplicates": (LinkType.DUPLICATES, True),
    "is duplicated by": (LinkType.DUPLICATES, False),
    "requires": (LinkType.REQUIRES, True),
    "is required by": (LinkType.REQUIRES, False),
    "depends on": (LinkType.REQUIRES, True),
    "is depended on by": (LinkType.REQUIRES, False),
    "is blocked by": (LinkType.REQUIRES, True),
    "blocks": (LinkType.REQUIRES, False),
    "is parent of": (LinkType.PARENT_CHILD, True),
    "is child of": (LinkType.PARENT_CHILD, False),
    "relates to": (LinkType.RELATES, True),
}

ISSUE_TYPE_NAMES = {
    "epic": IssueType.EPIC,
    "story": IssueType.STORY,
    "user story": IssueType.STORY,
    "task": IssueType.TASK,
    "sub-task": IssueType.TASK,
    "bug": IssueType.BUG,
    "feature request": IssueType.FEATURE_REQUEST,
    "suggestion": IssueType.FEATURE_REQUEST,
}

_FIELDS = "summary,description,comment,priority,fixVersions,issuetype,status,issuelinks"


@dataclass(frozen=True)
class TrackerConfig:
    base_url: str
    token: str | None = None

    @classmethod
    def from_env(cls) -> TrackerConfig:
        base_url = os.environ.get(ENV_BASE_URL, "")
        if not base_url:
            raise FetchError(f"{ENV_BASE_URL} is not set")
        return cls(base_url=base_url, token=os.environ.get(ENV_TOKEN) or None)


def _get_json(session: requests.Session, url: str, params: dict, retries: int) -> dict:
    last_error = None
    for attempt in range(1, retries + 1):
        try:
            response = session.get(url, params=params, timeout=30)
            if response.status_code >= 500:
                last_error = f"server error {response.status_code}"
            else:
                response.raise_for_status()
                return response.json()
        except requests.RequestException as exc:
            last_error = str(exc)
        if attempt < retries:
            time.sleep(0.2 * attempt)
    raise FetchError(f"GET {url} failed: {last_error}", attempts=retries)


def map_priority(name: str | None) -> Priority:
    if name is not None:
        rank = PRIORITY_RANKS.get(name.lower())
        if rank is not None:
            return Priority(rank)
        logger.warning("unknown priority name %r mapped to rank %d", name, _UNKNOWN_PRIORITY_RANK)
    return Priority(_UNKNOWN_PRIORITY_RANK)


def map_issue_type(name: str | None) -> IssueType:
    if name is None:
        return IssueType.OTHER
    return ISSUE_TYPE_NAMES.get(name.lower(), IssueType.OTHER)


def _map_links(this_key: IssueKey, raw_links: list) -> list[Link]:
    links = []
    for raw in raw_links:
        if "outwardIssue" in raw:
            phrase = raw.get("type", {}).get("outward", "")
            other_text = raw["outwardIssue"].get("key", "")
        elif "inwardIssue" in raw:
            phrase = raw.get("type", {}).get("inward", "")
            other_text = raw["inwardIssue"].get("key", "")
        else:
            continue
        try:
            other_key = parse_issue_key(other_text)
        except Exception:
            logger.warning("skipping link with unusable key %r on %s", other_text, this_key)
            continue
        mapped = LINK_PHRASES.get(phrase.lower())
        if mapped is None:
            logger.warning(
                "unmapped link type %r on %s treated as relates", phrase, this_key
            )
            mapped = (LinkType.RELATES, True)
        link_type, this_is_source = mapped
        source, target = (this_key, other_key) if this_is_source else (other_key, this_key)
        if link_type is LinkType.RELATES and target < source:
            source, target = target, source  # symmetric: canonicalize endpoint order
        if source == target:
            continue
        links.append(Link(source, target, link_type, LinkOrigin.IMPORTED))
    return links


def fetch_project(
    base_url: str,
    project_code: str,
    token: str | None = None,
    *,
    page_size: int = DEFAULT_PAGE_SIZE,
    retries: int = DEFAULT_RETRIES,
    session: requests.Session | None = None,
) -> IssueDump:
    """Retrieve all issues of one project and build a validated dump."""
    if session is None:
        session = requests.Session()
    if token:
        session.headers["Authorization"] = f"Bearer {token}"
    base = base_url.rstrip("/")

    versions = _get_json(
        session, f"{base}/rest/api/2/project/{project_code}/versions", {}, retries
    )
    release_names = [v.get("name", "") for v in versions if v.get("name")]

    issues: list[Issue] = []
    links: dict[tuple, Link] = {}
    start_at = 0
    total: int | None = None
    while True:
        page = _get_json(
            session,
            f"{base}/rest/api/2/search",
            {
                "jql": f"project={project_code}",
                "startAt": start_at,
                "maxResults": page_size,
                "fields": _FIELDS,
            },
            retries,
        )
        if total is None:
            total = int(page.get("total", 0))
        elif int(page.get("total", 0)) != total:
            raise PaginationError(
                f"result total changed from {total} to {page.get('total')} while paging"
            )
        batch = page.get("issues", [])
        if not batch:
            if start_at < total:
                raise PaginationError(
                    f"search returned no issues at offset {start_at} of {total}"
                )
            break

        for raw in batch:
            key = parse_issue_key(raw["key"])
            fields = raw.get("fields", {})
            fix_versions = fields.get("fixVersions") or []
            release = fix_versions[0].get("name") if fix_versions else None
            if len(fix_versions) > 1:
                logger.warning("%s has %d fix versions; keeping the first", key, len(fix_versions))
            comments = [
                c.get("body", "")
                for c in (fields.get("comment") or {}).get("comments", [])
            ]
            issues.append(
                Issue(
                    key=key,
                    title=fields.get("summary") or "",
                    description=fields.get("description") or "",
                    comments=tuple(comments),
                    type=map_issue_type((fields.get("issuetype") or {}).get("name")),
                    status=(fields.get("status") or {}).get("name", ""),
                    priority=map_priority((fields.get("priority") or {}).get("name")),
                    release=release,
                    project=project_code,
                )
            )
            for link in _map_links(key, fields.get("issuelinks") or []):
                links.setdefault(link.triple, link)

        start_at += len(batch)
        if start_at >= total:
            break

    known = {issue.key for issue in issues}
    kept = [
        link
        for link in links.values()
        if link.source in known and link.target in known
    ]
    dropped = len(links) - len(kept)
    if dropped:
        logger.warning("dropped %d link(s) pointing outside project %s", dropped, project_code)

    # Releases referenced by issues but missing from the versions endpoint are
    # appended (sorted) so the dump stays internally consistent.
    extra = sorted(
        {i.release for i in issues if i.release is not None} - set(release_names)
    )
    if extra:
        logger.warning("appending undeclared release(s) %s to %s", extra, project_code)

    return IssueDump(
        projects=(ReleaseOrder(project=project_code, releases=tuple(release_names + extra)),),
        issues=tuple(issues),
        links=tuple(sorted(kept, key=Link.sort_key)),
    )
