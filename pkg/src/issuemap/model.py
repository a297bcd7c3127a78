"""Domain types: issue keys, priorities, release orders, issues, and typed links."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from issuemap.errors import MalformedKeyError, UnknownReleaseError

# Canonical key form: uppercase project code, dash, positive number without
# leading zeros, e.g. "QTBUG-30".
_KEY_RE = re.compile(r"([A-Z][A-Z0-9]*)-([1-9][0-9]*)")
_CANONICAL_KEY_RE = re.compile(rf"^{_KEY_RE.pattern}$")
_PROJECT_RE = re.compile(r"^[A-Z][A-Z0-9]*$")


@dataclass(frozen=True, order=True)
class IssueKey:
    project: str
    number: int

    def __post_init__(self):
        if not _PROJECT_RE.match(self.project):
            raise MalformedKeyError(f"{self.project}-{self.number}")
        if self.number < 1:
            raise MalformedKeyError(f"{self.project}-{self.number}")

    def __str__(self) -> str:
        return f"{self.project}-{self.number}"


def parse_issue_key(text: str) -> IssueKey:
    """Parse canonical "PROJECT-NUMBER" text; anything else is malformed."""
    match = _CANONICAL_KEY_RE.match(text)
    if not match:
        raise MalformedKeyError(text)
    return IssueKey(project=match.group(1), number=int(match.group(2)))


def format_issue_key(key: IssueKey) -> str:
    return str(key)


PRIORITY_LABELS = ("Blocker", "Critical", "Major", "Normal", "Minor", "Trivial")


@dataclass(frozen=True)
class Priority:
    rank: int  # 0 = most urgent, 5 = least
    label: str = ""

    def __post_init__(self):
        if not 0 <= self.rank <= 5:
            raise ValueError(f"priority rank must be 0-5, got {self.rank}")
        if not self.label:
            object.__setattr__(self, "label", PRIORITY_LABELS[self.rank])


def priority_from_rank(rank: int) -> Priority:
    return Priority(rank=rank)


class PriorityOrder(Enum):
    HIGHER = "higher"
    EQUAL = "equal"
    LOWER = "lower"


def compare_priority(a: Priority, b: Priority) -> PriorityOrder:
    """Is `a` higher, equal, or lower priority than `b`? Lower rank wins."""
    if a.rank < b.rank:
        return PriorityOrder.HIGHER
    if a.rank == b.rank:
        return PriorityOrder.EQUAL
    return PriorityOrder.LOWER


@dataclass(frozen=True)
class ReleaseOrder:
    """Per-project ordered release names, earliest first."""

    project: str
    releases: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "releases", tuple(self.releases))
        if len(set(self.releases)) != len(self.releases):
            raise ValueError(f"duplicate release names in {self.project}'s order")

    def position(self, release: str | None) -> int:
        """Index of a release; absent sorts after every named release."""
        if release is None:
            return len(self.releases)
        try:
            return self.releases.index(release)
        except ValueError:
            raise UnknownReleaseError(release, self.project) from None


class ReleaseRelation(Enum):
    EARLIER = "earlier"
    SAME = "same"
    LATER = "later"
    UNCOMPARABLE = "uncomparable"


def compare_release(a: str | None, b: str | None, order: ReleaseOrder) -> ReleaseRelation:
    """Compare two releases of one project; unscheduled counts as last."""
    pos_a = order.position(a)
    pos_b = order.position(b)
    if pos_a < pos_b:
        return ReleaseRelation.EARLIER
    if pos_a == pos_b:
        return ReleaseRelation.SAME
    return ReleaseRelation.LATER


def compare_release_across(
    a: str | None,
    order_a: ReleaseOrder,
    b: str | None,
    order_b: ReleaseOrder,
) -> ReleaseRelation:
    """Compare releases that may come from different projects.

    Two unscheduled issues are always Same. Otherwise positions are only
    defined when both projects share one release sequence; anything else is
    Uncomparable.
    """
    if a is None and b is None:
        return ReleaseRelation.SAME
    if order_a.releases != order_b.releases:
        return ReleaseRelation.UNCOMPARABLE
    pos_a = order_a.position(a)
    pos_b = order_b.position(b)
    if pos_a < pos_b:
        return ReleaseRelation.EARLIER
    if pos_a == pos_b:
        return ReleaseRelation.SAME
    return ReleaseRelation.LATER


class IssueType(Enum):
    EPIC = "epic"
    STORY = "story"
    TASK = "task"
    BUG = "bug"
    FEATURE_REQUEST = "feature-request"
    OTHER = "other"


@dataclass(frozen=True)
class Issue:
    key: IssueKey
    title: str
    description: str = ""
    comments: tuple[str, ...] = ()
    type: IssueType = IssueType.OTHER
    status: str = ""
    priority: Priority = field(default_factory=lambda: Priority(3))
    release: str | None = None
    project: str = ""

    def __post_init__(self):
        object.__setattr__(self, "comments", tuple(self.comments))
        if not self.project:
            object.__setattr__(self, "project", self.key.project)
        if self.key.project != self.project:
            raise ValueError(
                f"issue {self.key} declares project {self.project!r},"
                f" but its key belongs to {self.key.project!r}"
            )


class LinkType(Enum):
    # Directed: source -> target reads parent -> child, dependent -> required,
    # duplicate -> original. Relates is symmetric.
    PARENT_CHILD = "parent-child"
    REQUIRES = "requires"
    DUPLICATES = "duplicates"
    RELATES = "relates"


class LinkOrigin(Enum):
    IMPORTED = "imported"
    USER_ACCEPTED = "user-accepted"
    INHERITED = "inherited"


@dataclass(frozen=True)
class Link:
    source: IssueKey
    target: IssueKey
    type: LinkType
    origin: LinkOrigin = LinkOrigin.IMPORTED

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"link endpoints must differ: {self.source}")

    @property
    def triple(self) -> tuple[IssueKey, IssueKey, LinkType]:
        return (self.source, self.target, self.type)

    def sort_key(self):
        return (self.source, self.target, self.type.value)
