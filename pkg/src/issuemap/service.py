"""Application service tying graph store, detection, and consistency together.

One instance owns the graph snapshots, per-project similarity indexes, the
decision store, and the release orders. The API and the CLI both go through
this layer and share its serializers, so a machine-readable CLI report is
byte-identical to the corresponding HTTP response body.
"""

from __future__ import annotations

import threading

from issuemap.consistency import ConsistencyReport, check_consistency
from issuemap.detection import (
    DEFAULT_RECOMMENDATIONS,
    LinkRecommendation,
    build_index,
    recommend,
    record_decision,
)
from issuemap.errors import AlreadyDecidedError, NoPendingRecommendationError
from issuemap.graph import (
    GraphStore,
    IssueFilter,
    LinkGraph,
    Subgraph,
    apply_filter,
    connected_component,
    longest_shortest_distance,
    neighborhood,
)
from issuemap.ingestion import DecisionKind, DecisionStore, IssueDump, replay_decisions
from issuemap.model import Issue, IssueKey, Link, LinkType

DEFAULT_DEPTH = 2
DEFAULT_DEPTH_CAP = 6


class LinkMapService:
    def __init__(
        self,
        dump: IssueDump,
        decisions: DecisionStore | None = None,
        *,
        depth_cap: int = DEFAULT_DEPTH_CAP,
    ):
        self.orders = dump.orders
        self.store = GraphStore(dump.to_graph())
        self.decisions = decisions if decisions is not None else DecisionStore()
        self.depth_cap = depth_cap
        self.replay_warnings = replay_decisions(self.decisions, self.store)

        by_project: dict[str, list[Issue]] = {order.project: [] for order in dump.projects}
        for issue in dump.issues:
            by_project[issue.project].append(issue)
        self.indexes = {
            project: build_index(issues, project) for project, issues in by_project.items()
        }

        self._stats_lock = threading.Lock()
        self._stats_cache: tuple[int, dict] | None = None

    def graph(self) -> LinkGraph:
        return self.store.snapshot()

    def issue(self, key: IssueKey) -> Issue:
        return self.graph().issue(key)

    def map(
        self, key: IssueKey, depth: int | None, issue_filter: IssueFilter = IssueFilter()
    ) -> tuple[Subgraph, LinkGraph]:
        graph = self.graph()
        sub = neighborhood(graph, key, depth)
        return apply_filter(sub, issue_filter), graph

    def recommendations(
        self, key: IssueKey, k: int = DEFAULT_RECOMMENDATIONS
    ) -> list[LinkRecommendation]:
        graph = self.graph()
        issue = graph.issue(key)
        index = self.indexes[issue.project]
        return recommend(
            key, index, graph, k=k, rejected=self.decisions.rejected_candidates(key)
        )

    def decide(
        self,
        source: IssueKey,
        candidate: IssueKey,
        kind: DecisionKind,
        link_type: LinkType | None = None,
    ) -> LinkGraph:
        """Act on a pending recommendation; raises if none exists for the pair."""
        if self.decisions.is_decided(source, candidate):
            raise AlreadyDecidedError(source, candidate)
        pending = next(
            (rec for rec in self.recommendations(source) if rec.candidate == candidate),
            None,
        )
        if pending is None:
            raise NoPendingRecommendationError(source, candidate)
        return record_decision(pending, kind, self.store, self.decisions, link_type)

    def consistency(self, key: IssueKey, depth: int | None) -> ConsistencyReport:
        sub, _ = self.map(key, depth)
        return check_consistency(sub, self.orders)

    def component_keys(self) -> list[IssueKey]:
        """One representative (smallest key) per connected component."""
        graph = self.graph()
        seen: set[IssueKey] = set()
        representatives = []
        for key in sorted(graph.issues):
            if key in seen:
                continue
            component = connected_component(graph, key)
            seen.update(component)
            representatives.append(min(component))
        return representatives

    def stats(self) -> dict:
        graph = self.graph()
        with self._stats_lock:
            if self._stats_cache is not None and self._stats_cache[0] == graph.version:
                return self._stats_cache[1]

        components: list[frozenset[IssueKey]] = []
        seen: set[IssueKey] = set()
        for key in graph.issues:
            if key in seen:
                continue
            component = connected_component(graph, key)
            seen.update(component)
            components.append(component)

        largest = max(components, key=len) if components else frozenset()
        computed = {
            "issue_count": len(graph.issues),
            "link_count": len(graph.links),
            "issues_with_links": sum(
                1
                for key in graph.issues
                if any(entry.direction.value == "out" for entry in graph.neighbors(key))
            ),
            "component_count": len(components),
            "largest_component": len(largest),
            "largest_component_diameter": (
                longest_shortest_distance(graph, largest) if largest else 0
            ),
        }
        with self._stats_lock:
            self._stats_cache = (graph.version, computed)
        return computed


# ---------------------------------------------------------------------------
# Serialization shared by the HTTP API and the CLI's machine-readable output.

def priority_payload(issue: Issue) -> dict:
    return {"rank": issue.priority.rank, "label": issue.priority.label}


def issue_payload(issue: Issue, include_comments: bool = False) -> dict:
    payload = {
        "key": str(issue.key),
        "project": issue.project,
        "type": issue.type.value,
        "status": issue.status,
        "title": issue.title,
        "description": issue.description,
        "priority": priority_payload(issue),
        "release": issue.release,
        "comment_count": len(issue.comments),
    }
    if include_comments:
        payload["comments"] = list(issue.comments)
    return payload


def link_payload(link: Link) -> dict:
    return {
        "source": str(link.source),
        "target": str(link.target),
        "type": link.type.value,
        "origin": link.origin.value,
    }


def map_payload(sub: Subgraph, filter_echo: dict, version: int) -> dict:
    nodes = []
    for key in sorted(sub.nodes):
        issue = sub.issues[key]
        nodes.append(
            {
                "key": str(key),
                "title": issue.title,
                "type": issue.type.value,
                "status": issue.status,
                "priority": priority_payload(issue),
                "release": issue.release,
                "distance": sub.nodes[key],
            }
        )
    return {
        "center": str(sub.center),
        "depth": sub.depth,
        "nodes": nodes,
        "edges": [link_payload(link) for link in sub.edges],
        "filter": filter_echo,
        "version": version,
    }


def recommendation_payload(rec: LinkRecommendation) -> dict:
    return {
        "source": str(rec.source),
        "candidate": str(rec.candidate),
        "score": rec.score,
        "evidence": rec.evidence.value,
        "detail": rec.evidence_detail,
        "state": rec.state.value,
    }


def recommendations_payload(recs: list[LinkRecommendation]) -> list[dict]:
    return [recommendation_payload(rec) for rec in recs]


def consistency_payload(report: ConsistencyReport) -> dict:
    return {
        "center": str(report.scope.center),
        "depth": report.scope.depth,
        "consistent": report.consistent,
        "violations": [
            {
                "rule": violation.rule.value,
                "link": link_payload(violation.link),
                "explanation": violation.explanation,
            }
            for violation in report.violations
        ],
        "releases_in_scope": {
            project: list(releases)
            for project, releases in report.releases_in_scope.items()
        },
        "notices": list(report.notices),
    }
