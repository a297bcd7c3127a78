"""Missing-link recommendations: text-similarity duplicates and comment cross-references.

Duplicate detection is per project: title+description TF-IDF vectors (title
tokens counted twice, smoothed IDF ln(1 + N/df), L2-normalized) compared by
cosine. Cross-reference detection scans comments and the description for
mentions of other issues' keys. Both feed a merged top-k recommendation list
where explicit mentions outrank any similarity score.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from issuemap.errors import AlreadyDecidedError, MixedProjectError, UnindexedIssueError
from issuemap.graph import GraphStore, LinkGraph
from issuemap.ingestion import DecisionKind, DecisionRecord, DecisionStore
from issuemap.model import Issue, IssueKey, Link, LinkOrigin, LinkType, parse_issue_key

SIMILARITY_THRESHOLD = 0.3
DEFAULT_RECOMMENDATIONS = 5

# Key-shaped tokens are preserved whole; everything else splits on
# non-alphanumerics.
_TOKEN_RE = re.compile(r"[A-Z][A-Z0-9]*-[1-9][0-9]*|[A-Za-z0-9]+")

# Key mentions in prose must not sit inside a larger alphanumeric run.
_MENTION_RE = re.compile(r"(?<![A-Za-z0-9])([A-Z][A-Z0-9]*-[1-9][0-9]*)(?![A-Za-z0-9])")

_STOP_WORDS = frozenset(
    """
    a about above after again against all am an and any are aren as at be
    because been before being below between both but by can cannot could
    couldn did didn do does doesn doing don down during each few for from
    further had hadn has hasn have haven having he her here hers herself him
    himself his how if in into is isn it its itself just ll me more most my
    myself no nor not now of off on once only or other our ours ourselves out
    over own re same she should shouldn so some such than that the their
    theirs them themselves then there these they this those through to too
    under until up ve very was wasn we were weren what when where which while
    who whom why will with won would wouldn you your yours yourself yourselves
    """.split()
)


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens, minus stop words and 1-char tokens."""
    tokens = []
    for raw in _TOKEN_RE.findall(text):
        token = raw.lower()
        if len(token) < 2 or token in _STOP_WORDS:
            continue
        tokens.append(token)
    return tokens


@dataclass(frozen=True)
class SimilarityIndex:
    project: str
    vocabulary: Mapping[str, int]  # token -> document frequency
    vectors: Mapping[IssueKey, Mapping[str, float]]  # L2-normalized TF-IDF
    document_count: int

    def vector(self, key: IssueKey) -> Mapping[str, float]:
        try:
            return self.vectors[key]
        except KeyError:
            raise UnindexedIssueError(key) from None

    def idf(self, token: str) -> float:
        """Smoothed inverse document frequency: ln(1 + N/df)."""
        df = self.vocabulary.get(token, 0)
        if df == 0:
            return 0.0
        return math.log(1.0 + self.document_count / df)


def _issue_term_counts(issue: Issue) -> Counter:
    title_tokens = tokenize(issue.title)
    counts = Counter(title_tokens)
    counts.update(title_tokens)  # title weighted double
    counts.update(tokenize(issue.description))
    return counts


def build_index(issues: Sequence[Issue], project: str | None = None) -> SimilarityIndex:
    """Index one project's issues for duplicate detection."""
    if project is None:
        if not issues:
            raise ValueError("cannot infer project from an empty issue list")
        project = issues[0].project
    for issue in issues:
        if issue.project != project:
            raise MixedProjectError(project, issue.project)

    term_counts = {issue.key: _issue_term_counts(issue) for issue in issues}
    document_frequency: Counter = Counter()
    for counts in term_counts.values():
        document_frequency.update(set(counts))

    total = len(issues)
    vectors: dict[IssueKey, dict[str, float]] = {}
    for key, counts in term_counts.items():
        weights = {
            token: count * math.log(1.0 + total / document_frequency[token])
            for token, count in counts.items()
        }
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm > 0.0:
            weights = {token: w / norm for token, w in weights.items()}
        vectors[key] = weights

    return SimilarityIndex(
        project=project,
        vocabulary=dict(document_frequency),
        vectors=vectors,
        document_count=total,
    )


def similarity(index: SimilarityIndex, a: IssueKey, b: IssueKey) -> float:
    """Cosine of the two issues' normalized vectors, clamped to [0, 1]."""
    vec_a = index.vector(a)
    vec_b = index.vector(b)
    if len(vec_b) < len(vec_a):
        vec_a, vec_b = vec_b, vec_a
    dot = sum(weight * vec_b.get(token, 0.0) for token, weight in vec_a.items())
    return min(1.0, max(0.0, dot))


class Evidence(Enum):
    SIMILARITY = "similarity"
    CROSS_REFERENCE = "cross-reference"


class RecommendationState(Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass
class LinkRecommendation:
    source: IssueKey
    candidate: IssueKey
    score: float
    evidence: Evidence
    evidence_detail: str = ""
    state: RecommendationState = RecommendationState.PENDING
    accepted_type: LinkType | None = None

    def __post_init__(self):
        if self.source == self.candidate:
            raise ValueError("recommendation cannot target its own source")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")
        if (self.accepted_type is not None) != (self.state is RecommendationState.ACCEPTED):
            raise ValueError("accepted_type is set exactly when state is accepted")


def _ranked_duplicates(
    index: SimilarityIndex,
    source: IssueKey,
    graph: LinkGraph,
    exclude: frozenset[IssueKey] = frozenset(),
) -> list[LinkRecommendation]:
    """All above-threshold candidates, best first; ties by candidate key."""
    source_vec = index.vector(source)
    scored = []
    for candidate in index.vectors:
        if candidate == source or candidate in exclude:
            continue
        if graph.are_linked(source, candidate):
            continue
        dot = sum(
            weight * index.vectors[candidate].get(token, 0.0)
            for token, weight in source_vec.items()
        )
        score = min(1.0, max(0.0, dot))
        if score < SIMILARITY_THRESHOLD:
            continue
        scored.append((score, candidate))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [
        LinkRecommendation(
            source=source,
            candidate=candidate,
            score=score,
            evidence=Evidence.SIMILARITY,
            evidence_detail=f"title/description similarity {score:.3f}",
        )
        for score, candidate in scored
    ]


def detect_duplicates(
    index: SimilarityIndex,
    source: IssueKey,
    graph: LinkGraph,
    k: int = DEFAULT_RECOMMENDATIONS,
) -> list[LinkRecommendation]:
    """Top-k likely duplicates of `source`, excluding already-linked issues."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return _ranked_duplicates(index, source, graph)[:k]


def _excerpt(text: str, start: int, end: int, radius: int = 60) -> str:
    lo = max(0, start - radius)
    hi = min(len(text), end + radius)
    prefix = "..." if lo > 0 else ""
    suffix = "..." if hi < len(text) else ""
    return prefix + text[lo:hi].strip() + suffix


def detect_cross_references(issue: Issue, graph: LinkGraph) -> list[LinkRecommendation]:
    """Recommendations for issue keys mentioned in comments or the description.

    Mentions of unknown keys are dropped silently; so are self-mentions and
    issues already linked to this one. One recommendation per distinct key,
    carrying the excerpt around its first mention.
    """
    found: dict[IssueKey, str] = {}
    for text in list(issue.comments) + [issue.description]:
        for match in _MENTION_RE.finditer(text):
            mentioned = parse_issue_key(match.group(1))
            if mentioned in found or mentioned == issue.key:
                continue
            if mentioned not in graph.issues:
                continue
            if graph.are_linked(issue.key, mentioned):
                continue
            found[mentioned] = _excerpt(text, match.start(), match.end())
    return [
        LinkRecommendation(
            source=issue.key,
            candidate=key,
            score=1.0,
            evidence=Evidence.CROSS_REFERENCE,
            evidence_detail=found[key],
        )
        for key in sorted(found)
    ]


def recommend(
    source: IssueKey,
    index: SimilarityIndex,
    graph: LinkGraph,
    k: int = DEFAULT_RECOMMENDATIONS,
    rejected: frozenset[IssueKey] = frozenset(),
) -> list[LinkRecommendation]:
    """Merged recommendation list: cross-references first, then duplicates.

    A candidate found by both detectors appears once, as a cross-reference.
    Pairs the user has already rejected never reappear.
    """
    issue = graph.issue(source)
    cross_refs = [
        rec for rec in detect_cross_references(issue, graph) if rec.candidate not in rejected
    ]
    merged = cross_refs[:k]
    seen = {rec.candidate for rec in cross_refs}
    for rec in _ranked_duplicates(index, source, graph, exclude=rejected | seen):
        if len(merged) >= k:
            break
        merged.append(rec)
    return merged


def record_decision(
    rec: LinkRecommendation,
    kind: DecisionKind,
    graph_store: GraphStore,
    decisions: DecisionStore,
    link_type: LinkType | None = None,
) -> LinkGraph:
    """Apply and persist an accept/reject; accepts enter the graph immediately."""
    if rec.state is not RecommendationState.PENDING:
        raise AlreadyDecidedError(rec.source, rec.candidate)
    if decisions.is_decided(rec.source, rec.candidate):
        raise AlreadyDecidedError(rec.source, rec.candidate)
    if kind is DecisionKind.ACCEPTED:
        if link_type is None:
            raise ValueError("accepting a recommendation requires a link type")
        graph = graph_store.add_link(
            Link(rec.source, rec.candidate, link_type, LinkOrigin.USER_ACCEPTED)
        )
        decisions.append(DecisionRecord.now(rec.source, rec.candidate, kind, link_type))
        rec.state = RecommendationState.ACCEPTED
        rec.accepted_type = link_type
        return graph
    if link_type is not None:
        raise ValueError("a rejection does not carry a link type")
    decisions.append(DecisionRecord.now(rec.source, rec.candidate, kind))
    rec.state = RecommendationState.REJECTED
    return graph_store.snapshot()
