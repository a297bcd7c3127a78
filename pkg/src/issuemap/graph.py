"""Snapshot link graph: depth-bounded neighborhoods, components, and metrics.

Graphs are immutable values. Mutation (add_link) produces a new snapshot with
a higher version; readers holding an older snapshot are unaffected. The
GraphStore wrapper serializes writers and hands out the current snapshot.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping

from issuemap.errors import (
    DanglingEndpointError,
    DisconnectedInputError,
    DuplicateLinkError,
    UnknownIssueError,
)
from issuemap.model import Issue, IssueKey, IssueType, Link, LinkType


class Direction(Enum):
    OUT = "out"
    IN = "in"


@dataclass(frozen=True)
class AdjacencyEntry:
    neighbor: IssueKey
    type: LinkType
    direction: Direction


@dataclass(frozen=True)
class LinkGraph:
    issues: Mapping[IssueKey, Issue]
    adjacency: Mapping[IssueKey, tuple[AdjacencyEntry, ...]]
    links: Mapping[tuple[IssueKey, IssueKey, LinkType], Link]
    version: int = 1

    def issue(self, key: IssueKey) -> Issue:
        try:
            return self.issues[key]
        except KeyError:
            raise UnknownIssueError(key) from None

    def neighbors(self, key: IssueKey) -> tuple[AdjacencyEntry, ...]:
        return self.adjacency.get(key, ())

    def are_linked(self, a: IssueKey, b: IssueKey) -> bool:
        """True if any link of any type connects a and b, in either direction."""
        return any(entry.neighbor == b for entry in self.neighbors(a))

    def has_link(self, source: IssueKey, target: IssueKey, link_type: LinkType) -> bool:
        if (source, target, link_type) in self.links:
            return True
        if link_type is LinkType.RELATES:
            return (target, source, link_type) in self.links
        return False

    def link_list(self) -> list[Link]:
        return sorted(self.links.values(), key=Link.sort_key)


def _existing_triple(
    links: Mapping[tuple[IssueKey, IssueKey, LinkType], Link], link: Link
) -> bool:
    if link.triple in links:
        return True
    # Relates is symmetric: the reversed triple is the same link.
    if link.type is LinkType.RELATES:
        return (link.target, link.source, link.type) in links
    return False


def build_graph(issues: Iterable[Issue], links: Iterable[Link]) -> LinkGraph:
    """Assemble a version-1 snapshot; endpoints must exist and links be unique."""
    issue_map: dict[IssueKey, Issue] = {}
    for issue in issues:
        issue_map[issue.key] = issue

    adjacency: dict[IssueKey, list[AdjacencyEntry]] = {key: [] for key in issue_map}
    link_map: dict[tuple[IssueKey, IssueKey, LinkType], Link] = {}
    for link in links:
        for endpoint in (link.source, link.target):
            if endpoint not in issue_map:
                raise DanglingEndpointError(endpoint)
        if _existing_triple(link_map, link):
            raise DuplicateLinkError(link.source, link.target, link.type)
        link_map[link.triple] = link
        adjacency[link.source].append(AdjacencyEntry(link.target, link.type, Direction.OUT))
        adjacency[link.target].append(AdjacencyEntry(link.source, link.type, Direction.IN))

    frozen = {key: tuple(entries) for key, entries in adjacency.items()}
    return LinkGraph(issues=issue_map, adjacency=frozen, links=link_map, version=1)


def add_link(graph: LinkGraph, link: Link) -> LinkGraph:
    """New snapshot with the link added; the input snapshot is untouched."""
    for endpoint in (link.source, link.target):
        if endpoint not in graph.issues:
            raise DanglingEndpointError(endpoint)
    if _existing_triple(graph.links, link):
        raise DuplicateLinkError(link.source, link.target, link.type)

    links = dict(graph.links)
    links[link.triple] = link
    adjacency = dict(graph.adjacency)
    adjacency[link.source] = adjacency.get(link.source, ()) + (
        AdjacencyEntry(link.target, link.type, Direction.OUT),
    )
    adjacency[link.target] = adjacency.get(link.target, ()) + (
        AdjacencyEntry(link.source, link.type, Direction.IN),
    )
    return LinkGraph(
        issues=graph.issues,
        adjacency=adjacency,
        links=links,
        version=graph.version + 1,
    )


@dataclass(frozen=True)
class Subgraph:
    """Depth-bounded, direction-ignoring neighborhood around a center issue.

    `nodes` carries true shortest-hop distances from the center; `edges` is
    the induced edge set (every graph link between included nodes). `issues`
    gives the full records for included nodes, which downstream consumers
    (consistency checks, serialization) need.
    """

    center: IssueKey
    depth: int | None
    nodes: Mapping[IssueKey, int]
    edges: tuple[Link, ...]
    issues: Mapping[IssueKey, Issue]


def _bfs_distances(
    graph: LinkGraph, start: IssueKey, depth: int | None
) -> dict[IssueKey, int]:
    distances = {start: 0}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        dist = distances[current]
        if depth is not None and dist >= depth:
            continue
        for entry in graph.neighbors(current):
            if entry.neighbor not in distances:
                distances[entry.neighbor] = dist + 1
                queue.append(entry.neighbor)
    return distances


def _induced_edges(graph: LinkGraph, nodes: Iterable[IssueKey]) -> tuple[Link, ...]:
    node_set = set(nodes)
    selected = [
        link
        for link in graph.links.values()
        if link.source in node_set and link.target in node_set
    ]
    return tuple(sorted(selected, key=Link.sort_key))


def neighborhood(graph: LinkGraph, center: IssueKey, depth: int | None) -> Subgraph:
    """Breadth-first expansion from center; depth=None means unbounded."""
    if center not in graph.issues:
        raise UnknownIssueError(center)
    if depth is not None and depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    distances = _bfs_distances(graph, center, depth)
    return Subgraph(
        center=center,
        depth=depth,
        nodes=distances,
        edges=_induced_edges(graph, distances),
        issues={key: graph.issues[key] for key in distances},
    )


def connected_component(graph: LinkGraph, key: IssueKey) -> frozenset[IssueKey]:
    if key not in graph.issues:
        raise UnknownIssueError(key)
    return frozenset(_bfs_distances(graph, key, None))


def longest_shortest_distance(graph: LinkGraph, component: Iterable[IssueKey]) -> int:
    """Diameter of a connected component: max over pairs of hop distance."""
    members = set(component)
    if not members:
        raise DisconnectedInputError("empty component")
    for key in members:
        if key not in graph.issues:
            raise UnknownIssueError(key)
    diameter = 0
    for start in members:
        distances = _bfs_distances(graph, start, None)
        if set(distances) != members:
            raise DisconnectedInputError(
                f"{sorted(map(str, members))} is not a connected component"
            )
        diameter = max(diameter, max(distances.values()))
    return diameter


@dataclass(frozen=True)
class IssueFilter:
    """Conjunction of per-attribute predicates; an empty filter accepts all."""

    types: frozenset[IssueType] | None = None
    priority_min: int | None = None  # most urgent rank allowed (inclusive)
    priority_max: int | None = None
    releases: frozenset[str | None] | None = None
    projects: frozenset[str] | None = None
    status: str | None = None  # case-insensitive substring

    def is_empty(self) -> bool:
        return self == IssueFilter()

    def matches(self, issue: Issue) -> bool:
        if self.types is not None and issue.type not in self.types:
            return False
        if self.priority_min is not None and issue.priority.rank < self.priority_min:
            return False
        if self.priority_max is not None and issue.priority.rank > self.priority_max:
            return False
        if self.releases is not None and issue.release not in self.releases:
            return False
        if self.projects is not None and issue.project not in self.projects:
            return False
        if self.status is not None and self.status.lower() not in issue.status.lower():
            return False
        return True


def apply_filter(sub: Subgraph, issue_filter: IssueFilter) -> Subgraph:
    """Drop failing nodes (center always stays); distances are not re-pathed."""
    if issue_filter.is_empty():
        return sub
    kept = {
        key: dist
        for key, dist in sub.nodes.items()
        if key == sub.center or issue_filter.matches(sub.issues[key])
    }
    kept_set = set(kept)
    edges = tuple(
        link for link in sub.edges if link.source in kept_set and link.target in kept_set
    )
    return replace(
        sub,
        nodes=kept,
        edges=edges,
        issues={key: sub.issues[key] for key in kept},
    )


class GraphStore:
    """Holds the current snapshot: many concurrent readers, one writer at a time."""

    def __init__(self, graph: LinkGraph):
        self._graph = graph
        self._lock = threading.Lock()

    def snapshot(self) -> LinkGraph:
        return self._graph

    def add_link(self, link: Link) -> LinkGraph:
        with self._lock:
            updated = add_link(self._graph, link)
            self._graph = updated
            return updated
