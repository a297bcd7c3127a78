"""Release-plan consistency checking over a link map.

Three constraints are evaluated after duplicate-link inheritance:

1. A child with the same or higher priority than its parent must not be
   assigned to a later release.
2. A required issue must not have a later release or lower priority than the
   issue depending on it.
3. A duplicate issue inherits all links of the issue it duplicates, so the
   first two rules also apply through duplicates.

The rules are per-edge predicates, so they are evaluated directly rather than
handed to a constraint solver; swap this module's evaluation loop if richer
constraint classes ever appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from issuemap.graph import Subgraph
from issuemap.model import (
    Issue,
    IssueKey,
    Link,
    LinkOrigin,
    LinkType,
    PriorityOrder,
    ReleaseOrder,
    ReleaseRelation,
    compare_priority,
    compare_release,
    compare_release_across,
)


class Rule(Enum):
    CHILD_RELEASE = "child-release"
    REQUIRED_RELEASE = "required-release"
    REQUIRED_PRIORITY = "required-priority"


_RULE_ORDER = {rule: position for position, rule in enumerate(Rule)}


@dataclass(frozen=True)
class Violation:
    rule: Rule
    link: Link  # the constraint-bearing edge, possibly origin=inherited
    explanation: str

    def sort_key(self):
        return (_RULE_ORDER[self.rule], self.link.source, self.link.target)


@dataclass(frozen=True)
class ConsistencyReport:
    scope: Subgraph
    consistent: bool
    violations: tuple[Violation, ...]
    releases_in_scope: Mapping[str, tuple[str, ...]]
    notices: tuple[str, ...] = ()


def inherit_duplicate_links(edges: Iterable[Link]) -> list[Link]:
    """Copy each duplicated original's links onto its duplicates, to a fixpoint.

    For a Duplicates link D -> O (D is the duplicate), every non-Duplicates
    link incident to O is mirrored onto D, keeping D in O's role. Chains of
    duplicates propagate; cycles terminate because the edge set only grows
    and is bounded. Inherited copies that collide with an existing edge are
    dropped.
    """
    result: dict[tuple[IssueKey, IssueKey, LinkType], Link] = {}
    for link in edges:
        result[link.triple] = link

    def present(source: IssueKey, target: IssueKey, link_type: LinkType) -> bool:
        if (source, target, link_type) in result:
            return True
        return link_type is LinkType.RELATES and (target, source, link_type) in result

    changed = True
    while changed:
        changed = False
        duplicates = [l for l in result.values() if l.type is LinkType.DUPLICATES]
        for dup in duplicates:
            duplicate, original = dup.source, dup.target
            for link in list(result.values()):
                if link.type is LinkType.DUPLICATES:
                    continue
                if link.source == original:
                    source, target = duplicate, link.target
                elif link.target == original:
                    source, target = link.source, duplicate
                else:
                    continue
                if source == target or present(source, target, link.type):
                    continue
                result[(source, target, link.type)] = Link(
                    source, target, link.type, LinkOrigin.INHERITED
                )
                changed = True
    return sorted(result.values(), key=Link.sort_key)


def _describe(issue: Issue) -> str:
    release = issue.release if issue.release is not None else "unscheduled"
    return f"{issue.key} (P{issue.priority.rank}, {release})"


def check_child_release(
    parent: Issue, child: Issue, order: ReleaseOrder, link: Link | None = None
) -> Violation | None:
    """Rule 1: an equally or more urgent child must not land in a later release."""
    if link is None:
        link = Link(parent.key, child.key, LinkType.PARENT_CHILD)
    guard = compare_priority(child.priority, parent.priority)
    if guard not in (PriorityOrder.HIGHER, PriorityOrder.EQUAL):
        return None
    if compare_release(child.release, parent.release, order) is not ReleaseRelation.LATER:
        return None
    return Violation(
        rule=Rule.CHILD_RELEASE,
        link=link,
        explanation=(
            f"child {_describe(child)} has same or higher priority than parent"
            f" {_describe(parent)} but is assigned to a later release"
        ),
    )


def check_required(
    dependent: Issue, required: Issue, order: ReleaseOrder, link: Link | None = None
) -> list[Violation]:
    """Rule 2: a required issue must not be later-released or lower-priority."""
    if link is None:
        link = Link(dependent.key, required.key, LinkType.REQUIRES)
    violations = []
    if compare_release(required.release, dependent.release, order) is ReleaseRelation.LATER:
        violations.append(
            Violation(
                rule=Rule.REQUIRED_RELEASE,
                link=link,
                explanation=(
                    f"required {_describe(required)} is assigned to a later release"
                    f" than dependent {_describe(dependent)}"
                ),
            )
        )
    if compare_priority(required.priority, dependent.priority) is PriorityOrder.LOWER:
        violations.append(
            Violation(
                rule=Rule.REQUIRED_PRIORITY,
                link=link,
                explanation=(
                    f"required {_describe(required)} has lower priority"
                    f" than dependent {_describe(dependent)}"
                ),
            )
        )
    return violations


def _releases_in_scope(
    scope: Subgraph, orders: Mapping[str, ReleaseOrder]
) -> dict[str, tuple[str, ...]]:
    per_project: dict[str, set[str]] = {}
    for issue in scope.issues.values():
        if issue.release is not None:
            per_project.setdefault(issue.project, set()).add(issue.release)
    listed: dict[str, tuple[str, ...]] = {}
    for project in sorted(per_project):
        names = per_project[project]
        order = orders.get(project)
        if order is not None:
            listed[project] = tuple(r for r in order.releases if r in names)
        else:
            listed[project] = tuple(sorted(names))
    return listed


def check_consistency(
    scope: Subgraph, orders: Mapping[str, ReleaseOrder]
) -> ConsistencyReport:
    """Evaluate all three rules over the scope after duplicate inheritance.

    Edges touching an issue whose project has no release order are skipped
    with a notice. Cross-project edges whose projects disagree on the release
    sequence cannot violate a release rule; they are reported as notices, and
    only the priority clause of rule 2 still applies to them.
    """
    violations: list[Violation] = []
    notices: list[str] = []
    edges = inherit_duplicate_links(scope.edges)

    for link in edges:
        if link.type not in (LinkType.PARENT_CHILD, LinkType.REQUIRES):
            continue
        source = scope.issues[link.source]
        target = scope.issues[link.target]
        missing = [i for i in (source, target) if i.project not in orders]
        if missing:
            for issue in missing:
                notices.append(
                    f"skipped {link.source} -> {link.target} ({link.type.value}):"
                    f" project {issue.project} has no release order"
                )
            continue

        if link.type is LinkType.PARENT_CHILD:
            parent, child = source, target
            relation = compare_release_across(
                child.release, orders[child.project],
                parent.release, orders[parent.project],
            )
            if relation is ReleaseRelation.UNCOMPARABLE:
                notices.append(
                    f"{link.source} -> {link.target} (parent-child):"
                    " releases of different projects are not comparable"
                )
                continue
            violation = check_child_release(parent, child, orders[parent.project], link)
            if violation is not None:
                violations.append(violation)
        else:
            dependent, required = source, target
            relation = compare_release_across(
                required.release, orders[required.project],
                dependent.release, orders[dependent.project],
            )
            if relation is ReleaseRelation.UNCOMPARABLE:
                notices.append(
                    f"{link.source} -> {link.target} (requires):"
                    " releases of different projects are not comparable"
                )
                if compare_priority(required.priority, dependent.priority) is PriorityOrder.LOWER:
                    violations.append(
                        Violation(
                            rule=Rule.REQUIRED_PRIORITY,
                            link=link,
                            explanation=(
                                f"required {_describe(required)} has lower priority"
                                f" than dependent {_describe(dependent)}"
                            ),
                        )
                    )
                continue
            violations.extend(check_required(dependent, required, orders[dependent.project], link))

    violations.sort(key=Violation.sort_key)
    return ConsistencyReport(
        scope=scope,
        consistent=not violations,
        violations=tuple(violations),
        releases_in_scope=_releases_in_scope(scope, orders),
        notices=tuple(notices),
    )
