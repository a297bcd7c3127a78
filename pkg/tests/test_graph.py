"""Graph store: construction, neighborhoods, components, filters, snapshots."""

import random
import threading

import pytest

import oracles
from conftest import chain_graph, key, make_issue, random_graph
from issuemap.errors import (
    DanglingEndpointError,
    DisconnectedInputError,
    DuplicateLinkError,
    UnknownIssueError,
)
from issuemap.graph import (
    Direction,
    GraphStore,
    IssueFilter,
    add_link,
    apply_filter,
    build_graph,
    connected_component,
    longest_shortest_distance,
    neighborhood,
)
from issuemap.model import IssueType, Link, LinkType


class TestBuildGraph:
    def test_empty(self):
        graph = build_graph([], [])
        assert graph.issues == {}
        assert graph.links == {}
        assert graph.version == 1

    def test_single_edge_bookkeeping(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        graph = build_graph([a, b], [Link(a.key, b.key, LinkType.PARENT_CHILD)])
        (entry_a,) = graph.neighbors(a.key)
        (entry_b,) = graph.neighbors(b.key)
        assert (entry_a.neighbor, entry_a.type, entry_a.direction) == (
            b.key, LinkType.PARENT_CHILD, Direction.OUT,
        )
        assert (entry_b.neighbor, entry_b.type, entry_b.direction) == (
            a.key, LinkType.PARENT_CHILD, Direction.IN,
        )

    def test_dangling_endpoint(self):
        a = make_issue("P-1")
        with pytest.raises(DanglingEndpointError) as excinfo:
            build_graph([a], [Link(a.key, key("P-3"), LinkType.RELATES)])
        assert excinfo.value.key == key("P-3")

    def test_duplicate_link_rejected(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        link = Link(a.key, b.key, LinkType.REQUIRES)
        with pytest.raises(DuplicateLinkError):
            build_graph([a, b], [link, link])

    def test_reversed_relates_counts_as_duplicate(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        with pytest.raises(DuplicateLinkError):
            build_graph(
                [a, b],
                [Link(a.key, b.key, LinkType.RELATES), Link(b.key, a.key, LinkType.RELATES)],
            )

    def test_edge_symmetry_full_scan(self):
        rng = random.Random(7)
        graph, _, _ = random_graph(rng, max_nodes=40)
        for node, entries in graph.adjacency.items():
            for entry in entries:
                mirrored = [
                    other
                    for other in graph.adjacency[entry.neighbor]
                    if other.neighbor == node
                    and other.type == entry.type
                    and other.direction != entry.direction
                ]
                assert mirrored, f"missing mirror entry for {node} <-> {entry.neighbor}"


class TestNeighborhood:
    def test_depth_one_on_chain(self):
        graph, issues, links = chain_graph(3)
        sub = neighborhood(graph, issues[0].key, 1)
        assert sub.nodes == {issues[0].key: 0, issues[1].key: 1}
        assert sub.edges == (links[0],)

    def test_depth_two_on_chain(self):
        graph, issues, _ = chain_graph(3)
        sub = neighborhood(graph, issues[0].key, 2)
        assert sub.nodes == {issues[0].key: 0, issues[1].key: 1, issues[2].key: 2}

    def test_depth_zero_is_center_only(self):
        graph, issues, _ = chain_graph(3)
        sub = neighborhood(graph, issues[1].key, 0)
        assert sub.nodes == {issues[1].key: 0}
        assert sub.edges == ()

    def test_depth_zero_for_every_node(self):
        rng = random.Random(17)
        graph, issues, _ = random_graph(rng, max_nodes=25)
        for issue in issues:
            assert neighborhood(graph, issue.key, 0).nodes == {issue.key: 0}

    def test_unknown_center(self):
        graph, _, _ = chain_graph(2)
        with pytest.raises(UnknownIssueError):
            neighborhood(graph, key("P-99"), 1)

    def test_expansion_ignores_direction(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        graph = build_graph([a, b], [Link(b.key, a.key, LinkType.REQUIRES)])
        sub = neighborhood(graph, a.key, 1)
        assert b.key in sub.nodes

    def test_monotone_in_depth(self):
        rng = random.Random(11)
        graph, issues, _ = random_graph(rng, max_nodes=30)
        center = issues[0].key
        previous = set()
        for depth in range(6):
            nodes = set(neighborhood(graph, center, depth).nodes)
            assert previous <= nodes
            previous = nodes

    def test_induced_subgraph_property(self):
        rng = random.Random(13)
        graph, issues, _ = random_graph(rng, max_nodes=30)
        sub = neighborhood(graph, issues[0].key, 2)
        node_set = set(sub.nodes)
        expected = {
            link.triple
            for link in graph.links.values()
            if link.source in node_set and link.target in node_set
        }
        assert {link.triple for link in sub.edges} == expected

    def test_distances_match_bfs_oracle_on_random_graphs(self):
        rng = random.Random(1234)
        for _ in range(100):
            graph, issues, links = random_graph(rng, max_nodes=60)
            center = rng.choice(issues).key
            sub = neighborhood(graph, center, None)
            expected = oracles.bfs_distances(
                [i.key for i in issues], oracles.undirected_pairs(links), center
            )
            assert dict(sub.nodes) == expected


class TestComponentsAndDiameter:
    def test_isolated_node(self):
        a = make_issue("P-1")
        graph = build_graph([a], [])
        assert connected_component(graph, a.key) == {a.key}

    def test_chain_component(self):
        graph, issues, _ = chain_graph(3)
        assert connected_component(graph, issues[1].key) == {i.key for i in issues}

    def test_component_matches_union_find_oracle(self):
        rng = random.Random(99)
        graph, issues, links = random_graph(rng)
        components = oracles.union_find_components(
            [i.key for i in issues], oracles.undirected_pairs(links)
        )
        for component in components:
            probe = sorted(component)[0]
            assert connected_component(graph, probe) == component

    def test_single_node_diameter(self):
        a = make_issue("P-1")
        graph = build_graph([a], [])
        assert longest_shortest_distance(graph, {a.key}) == 0

    def test_chain_of_four_diameter(self):
        graph, issues, _ = chain_graph(4)
        component = {i.key for i in issues}
        assert longest_shortest_distance(graph, component) == 3

    def test_disconnected_input_rejected(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        graph = build_graph([a, b], [])
        with pytest.raises(DisconnectedInputError):
            longest_shortest_distance(graph, {a.key, b.key})

    def test_diameter_matches_floyd_warshall_oracle(self):
        rng = random.Random(4321)
        for _ in range(25):
            graph, issues, links = random_graph(rng, max_nodes=50)
            component = connected_component(graph, issues[0].key)
            pairs = [
                (a, b)
                for a, b in oracles.undirected_pairs(links)
                if a in component and b in component
            ]
            expected = oracles.floyd_warshall_diameter(component, pairs)
            assert longest_shortest_distance(graph, component) == expected

    def test_neighborhood_at_diameter_covers_component(self):
        graph, issues, _ = chain_graph(5)
        component = connected_component(graph, issues[0].key)
        diameter = longest_shortest_distance(graph, component)
        sub = neighborhood(graph, issues[0].key, diameter)
        assert set(sub.nodes) == component


class TestFilters:
    def test_empty_filter_is_identity(self):
        graph, issues, _ = chain_graph(3)
        sub = neighborhood(graph, issues[0].key, 2)
        assert apply_filter(sub, IssueFilter()) is sub

    def test_type_filter_keeps_only_center(self):
        graph, issues, _ = chain_graph(3)  # all tasks
        sub = neighborhood(graph, issues[0].key, 2)
        filtered = apply_filter(sub, IssueFilter(types=frozenset({IssueType.BUG})))
        assert set(filtered.nodes) == {issues[0].key}
        assert filtered.edges == ()

    def test_distances_preserved_after_filtering(self):
        graph, issues, _ = chain_graph(4)
        sub = neighborhood(graph, issues[0].key, 3)
        filtered = apply_filter(
            sub, IssueFilter(projects=frozenset({"PRJ"}))  # accepts everything
        )
        assert dict(filtered.nodes) == dict(sub.nodes)

    def test_membership_matches_predicate_scan(self):
        rng = random.Random(5)
        issues = [
            make_issue(
                f"MIX-{i}",
                type=rng.choice(list(IssueType)),
                rank=rng.randint(0, 5),
                status=rng.choice(("Open", "Closed", "In Progress")),
            )
            for i in range(1, 21)
        ]
        links = [
            Link(issues[i].key, issues[i + 1].key, LinkType.RELATES)
            for i in range(len(issues) - 1)
        ]
        graph = build_graph(issues, links)
        sub = neighborhood(graph, issues[0].key, None)
        issue_filter = IssueFilter(
            types=frozenset({IssueType.BUG, IssueType.TASK}),
            priority_min=1,
            priority_max=4,
            status="open",
        )
        filtered = apply_filter(sub, issue_filter)
        expected = {
            issue.key
            for issue in issues
            if issue.key == sub.center or issue_filter.matches(issue)
        }
        assert set(filtered.nodes) == expected


class TestSnapshots:
    def test_add_link_connects_disjoint_issues(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        graph = build_graph([a, b], [])
        updated = add_link(graph, Link(a.key, b.key, LinkType.REQUIRES))
        assert b.key in neighborhood(updated, a.key, 1).nodes

    def test_re_adding_is_duplicate(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        link = Link(a.key, b.key, LinkType.REQUIRES)
        graph = build_graph([a, b], [link])
        with pytest.raises(DuplicateLinkError):
            add_link(graph, link)

    def test_old_snapshot_lacks_new_link(self):
        a, b = make_issue("P-1"), make_issue("P-2")
        old = build_graph([a, b], [])
        new = add_link(old, Link(a.key, b.key, LinkType.RELATES))
        assert new.version == old.version + 1
        assert b.key not in neighborhood(old, a.key, 1).nodes
        assert b.key in neighborhood(new, a.key, 1).nodes

    def test_store_serializes_writers(self):
        issues = [make_issue(f"P-{i}") for i in range(1, 42)]
        store = GraphStore(build_graph(issues, []))
        center = issues[0].key

        def worker(numbers):
            for n in numbers:
                store.add_link(Link(center, key(f"P-{n}"), LinkType.RELATES))

        threads = [
            threading.Thread(target=worker, args=(range(start, 42, 4),))
            for start in range(2, 6)
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        final = store.snapshot()
        assert len(final.links) == 40
        assert final.version == 41
