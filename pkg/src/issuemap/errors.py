"""Domain exception types shared across modules."""

from __future__ import annotations


class IssueMapError(Exception):
    """Base class for all domain errors."""


class MalformedKeyError(IssueMapError):
    def __init__(self, text: str):
        super().__init__(f"malformed issue key: {text!r}")
        self.text = text


class UnknownReleaseError(IssueMapError):
    def __init__(self, release: str, project: str):
        super().__init__(f"release {release!r} is not in project {project}'s release order")
        self.release = release
        self.project = project


class UnknownIssueError(IssueMapError):
    def __init__(self, key):
        super().__init__(f"unknown issue: {key}")
        self.key = key


class DanglingEndpointError(IssueMapError):
    def __init__(self, key):
        super().__init__(f"link endpoint references missing issue: {key}")
        self.key = key


class DuplicateLinkError(IssueMapError):
    def __init__(self, source, target, link_type):
        super().__init__(f"duplicate link: {source} -> {target} ({link_type.value})")
        self.source = source
        self.target = target
        self.link_type = link_type


class DisconnectedInputError(IssueMapError):
    """Raised when a node set passed as a connected component is not one."""


class MixedProjectError(IssueMapError):
    def __init__(self, expected: str, found: str):
        super().__init__(f"expected issues of project {expected}, found {found}")
        self.expected = expected
        self.found = found


class UnindexedIssueError(IssueMapError):
    def __init__(self, key):
        super().__init__(f"issue not in similarity index: {key}")
        self.key = key


class AlreadyDecidedError(IssueMapError):
    def __init__(self, source, candidate):
        super().__init__(f"recommendation {source} -> {candidate} was already decided")
        self.source = source
        self.candidate = candidate


class NoPendingRecommendationError(IssueMapError):
    def __init__(self, source, candidate):
        super().__init__(f"no pending recommendation for {source} -> {candidate}")
        self.source = source
        self.candidate = candidate


class DumpError(IssueMapError):
    """Problem with an issue dump; `location` names the offending record."""

    def __init__(self, message: str, location: str | None = None):
        full = f"{location}: {message}" if location else message
        super().__init__(full)
        self.location = location


class DumpParseError(DumpError):
    pass


class DumpIntegrityError(DumpError):
    pass


class FetchError(IssueMapError):
    def __init__(self, message: str, attempts: int = 1):
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts


class PaginationError(IssueMapError):
    """Total result count changed while paging through a search."""


class DecisionLogError(IssueMapError):
    pass
