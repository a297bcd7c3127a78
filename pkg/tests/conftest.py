"""Shared fixture builders for the test suite."""

from __future__ import annotations

import json
import random

import pytest

from issuemap.graph import build_graph
from issuemap.ingestion import IssueDump
from issuemap.model import (
    Issue,
    IssueKey,
    IssueType,
    Link,
    LinkType,
    Priority,
    ReleaseOrder,
    parse_issue_key,
)


def key(text: str) -> IssueKey:
    return parse_issue_key(text)


def make_issue(
    key_text: str,
    title: str = "",
    description: str = "",
    comments: tuple[str, ...] = (),
    type: IssueType = IssueType.TASK,
    status: str = "Open",
    rank: int = 3,
    release: str | None = None,
) -> Issue:
    parsed = parse_issue_key(key_text)
    return Issue(
        key=parsed,
        title=title or f"Issue {key_text}",
        description=description,
        comments=comments,
        type=type,
        status=status,
        priority=Priority(rank),
        release=release,
        project=parsed.project,
    )


def chain_graph(n: int, project: str = "PRJ", link_type: LinkType = LinkType.RELATES):
    """PRJ-1 - PRJ-2 - ... - PRJ-n."""
    issues = [make_issue(f"{project}-{i}") for i in range(1, n + 1)]
    links = [
        Link(issues[i].key, issues[i + 1].key, link_type) for i in range(n - 1)
    ]
    return build_graph(issues, links), issues, links


def random_graph(rng: random.Random, max_nodes: int = 60):
    """Random multigraph over one project; returns (graph, issues, links)."""
    n = rng.randint(2, max_nodes)
    issues = [make_issue(f"RND-{i}") for i in range(1, n + 1)]
    links = []
    triples = set()
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.sample(issues, 2)
        link_type = rng.choice(list(LinkType))
        triple = (a.key, b.key, link_type)
        mirrored = (b.key, a.key, link_type)
        if triple in triples or (link_type is LinkType.RELATES and mirrored in triples):
            continue
        triples.add(triple)
        links.append(Link(a.key, b.key, link_type))
    return build_graph(issues, links), issues, links


def dump_document(projects, issues, links) -> dict:
    """Assemble a raw dump document from model objects."""
    return {
        "projects": [
            {"code": order.project, "releases": list(order.releases)} for order in projects
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
            for issue in issues
        ],
        "links": [
            {"source": str(link.source), "target": str(link.target), "type": link.type.value}
            for link in links
        ],
    }


def dump_text(projects, issues, links) -> str:
    return json.dumps(dump_document(projects, issues, links))


def make_dump(projects, issues, links) -> IssueDump:
    return IssueDump(projects=tuple(projects), issues=tuple(issues), links=tuple(links))


@pytest.fixture
def simple_order() -> ReleaseOrder:
    return ReleaseOrder("PRJ", ("1.0", "2.0", "3.0"))


@pytest.fixture
def detection_dump() -> IssueDump:
    """Small project exercising both detectors and the accept/reject loop."""
    order = ReleaseOrder("PRJ", ("1.0", "2.0"))
    issues = (
        make_issue(
            "PRJ-1",
            title="Crash when opening settings dialog",
            description="The settings dialog crashes the app on open",
            type=IssueType.BUG,
            rank=1,
            release="1.0",
        ),
        make_issue(
            "PRJ-2",
            title="Crash when opening settings dialog",
            description="The settings dialog crashes the app on open",
            type=IssueType.BUG,
            rank=2,
            release="2.0",
        ),
        make_issue(
            "PRJ-3",
            title="Dark mode support",
            description="Theme switching for night work",
            comments=("probably a duplicate of PRJ-5",),
            type=IssueType.FEATURE_REQUEST,
            rank=3,
        ),
        make_issue(
            "PRJ-4",
            title="Crash when opening preferences dialog",
            description="Preferences dialog crashes sometimes on open",
            type=IssueType.BUG,
            rank=2,
            release="2.0",
        ),
        make_issue(
            "PRJ-5",
            title="Night theme",
            description="Allow switching the theme",
            type=IssueType.FEATURE_REQUEST,
            rank=3,
        ),
    )
    links = (Link(key("PRJ-4"), key("PRJ-1"), LinkType.RELATES),)
    return make_dump((order,), issues, links)


def transitive_map_dump():
    """Center with 3 direct neighbors and 19 transitively linked issues.

    MAP-1 is the center; MAP-2..MAP-4 are its direct neighbors; MAP-5..MAP-20
    hang off those in branches, all one component of 20. MAP-21 is isolated
    to prove the expansion stops at the component.
    """
    issues = [make_issue(f"MAP-{i}") for i in range(1, 22)]
    links = [
        Link(key("MAP-1"), key("MAP-2"), LinkType.RELATES),
        Link(key("MAP-3"), key("MAP-1"), LinkType.PARENT_CHILD),
        Link(key("MAP-1"), key("MAP-4"), LinkType.REQUIRES),
    ]
    # branch of 8 behind MAP-2, 5 behind MAP-3, 3 behind MAP-4
    branches = {2: range(5, 13), 3: range(13, 18), 4: range(18, 21)}
    for anchor, numbers in branches.items():
        previous = key(f"MAP-{anchor}")
        for number in numbers:
            current = key(f"MAP-{number}")
            links.append(Link(previous, current, LinkType.RELATES))
            previous = current
    order = ReleaseOrder("MAP", ("1.0",))
    return make_dump((order,), issues, links)
