"""Fetching a project from a Jira-compatible REST endpoint."""

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qs, urlparse

import pytest

from conftest import key
from issuemap.errors import PaginationError
from issuemap.jira import PRIORITY_RANKS, fetch_project, map_priority
from issuemap.model import LinkType, PRIORITY_LABELS


def _issue(number, summary, *, priority="Major", links=(), fix_versions=(), comments=()):
    return {
        "key": f"DEMO-{number}",
        "fields": {
            "summary": summary,
            "description": f"description of DEMO-{number}",
            "priority": {"name": priority},
            "issuetype": {"name": "Bug"},
            "status": {"name": "Open"},
            "fixVersions": [{"name": name} for name in fix_versions],
            "comment": {"comments": [{"body": body} for body in comments]},
            "issuelinks": list(links),
        },
    }


def outward(phrase, other):
    return {"type": {"outward": phrase, "inward": ""}, "outwardIssue": {"key": other}}


def inward(phrase, other):
    return {"type": {"outward": "", "inward": phrase}, "inwardIssue": {"key": other}}


class FakeTracker:
    """Minimal Jira-flavoured search + versions endpoint with pagination."""

    def __init__(self, issues, versions, page_size_limit=2, shifting_total=False):
        self.issues = issues
        self.versions = versions
        self.page_size_limit = page_size_limit
        self.shifting_total = shifting_total
        self.requests = []

        tracker = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_GET(self):
                parsed = urlparse(self.path)
                tracker.requests.append(self.path)
                if parsed.path.endswith("/versions"):
                    payload = tracker.versions
                elif parsed.path.endswith("/search"):
                    params = parse_qs(parsed.query)
                    start = int(params.get("startAt", ["0"])[0])
                    page_size = min(
                        int(params.get("maxResults", ["50"])[0]), tracker.page_size_limit
                    )
                    total = len(tracker.issues)
                    if tracker.shifting_total and start > 0:
                        total += 1
                    payload = {
                        "startAt": start,
                        "maxResults": page_size,
                        "total": total,
                        "issues": tracker.issues[start:start + page_size],
                    }
                else:
                    self.send_error(404)
                    return
                body = json.dumps(payload).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self.server = HTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    def __enter__(self):
        self.thread.start()
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()


class TestFetchProject:
    def test_empty_project(self):
        with FakeTracker([], []) as base_url:
            dump = fetch_project(base_url, "DEMO")
        assert dump.issues == ()
        assert dump.orders["DEMO"].releases == ()

    def test_paginated_retrieval_and_field_mapping(self):
        issues = [
            _issue(1, "first", priority="Blocker", fix_versions=("1.0", "2.0"),
                   comments=("a comment",)),
            _issue(2, "second"),
            _issue(3, "third"),
        ]
        versions = [{"name": "1.0"}, {"name": "2.0"}]
        with FakeTracker(issues, versions) as base_url:
            dump = fetch_project(base_url, "DEMO", page_size=2)
        assert [str(i.key) for i in dump.issues] == ["DEMO-1", "DEMO-2", "DEMO-3"]
        first = dump.issues[0]
        assert first.title == "first"
        assert first.priority.rank == 0  # Blocker
        assert first.release == "1.0"  # first fixVersion wins
        assert first.comments == ("a comment",)
        assert dump.orders["DEMO"].releases == ("1.0", "2.0")

    def test_is_duplicated_by_maps_to_reversed_duplicates(self):
        issues = [
            _issue(1, "original", links=[inward("is duplicated by", "DEMO-2")]),
            _issue(2, "copy", links=[outward("duplicates", "DEMO-1")]),
        ]
        with FakeTracker(issues, []) as base_url:
            dump = fetch_project(base_url, "DEMO")
        # both sides describe one link; it is stored once, copy -> original
        (link,) = dump.links
        assert (link.source, link.target, link.type) == (
            key("DEMO-2"), key("DEMO-1"), LinkType.DUPLICATES,
        )

    def test_blocks_maps_to_requires_dependency(self):
        issues = [
            _issue(1, "blocker", links=[outward("blocks", "DEMO-2")]),
            _issue(2, "blocked", links=[inward("is blocked by", "DEMO-1")]),
        ]
        with FakeTracker(issues, []) as base_url:
            dump = fetch_project(base_url, "DEMO")
        (link,) = dump.links
        # DEMO-1 blocks DEMO-2, so DEMO-2 requires DEMO-1
        assert (link.source, link.target, link.type) == (
            key("DEMO-2"), key("DEMO-1"), LinkType.REQUIRES,
        )

    def test_unmapped_link_type_becomes_relates_with_warning(self, caplog):
        issues = [
            _issue(1, "a", links=[outward("is cloned by", "DEMO-2")]),
            _issue(2, "b"),
        ]
        with FakeTracker(issues, []) as base_url:
            with caplog.at_level(logging.WARNING, logger="issuemap.jira"):
                dump = fetch_project(base_url, "DEMO")
        (link,) = dump.links
        assert link.type is LinkType.RELATES
        assert any("is cloned by" in record.message for record in caplog.records)

    def test_unknown_priority_maps_to_middle_rank_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING, logger="issuemap.jira"):
            priority = map_priority("Showstopper")
        assert priority.rank == 3
        assert any("Showstopper" in record.message for record in caplog.records)

    def test_priority_table_round_trips_canonical_labels(self):
        for rank, label in enumerate(PRIORITY_LABELS):
            assert PRIORITY_RANKS[label.lower()] == rank
        assert map_priority("Blocker").rank == 0

    def test_shifting_total_raises_pagination_error(self):
        issues = [_issue(n, f"issue {n}") for n in range(1, 6)]
        with FakeTracker(issues, [], shifting_total=True) as base_url:
            with pytest.raises(PaginationError):
                fetch_project(base_url, "DEMO", page_size=2)

    def test_undeclared_fix_version_appended_to_order(self, caplog):
        issues = [_issue(1, "a", fix_versions=("9.9",))]
        with FakeTracker(issues, [{"name": "1.0"}]) as base_url:
            with caplog.at_level(logging.WARNING, logger="issuemap.jira"):
                dump = fetch_project(base_url, "DEMO")
        assert dump.orders["DEMO"].releases == ("1.0", "9.9")

    def test_fetched_dump_survives_serialization_round_trip(self):
        from issuemap.ingestion import load_dump, serialize_dump

        issues = [
            _issue(1, "a", links=[outward("relates to", "DEMO-2")], fix_versions=("1.0",)),
            _issue(2, "b", links=[inward("relates to", "DEMO-1")]),
        ]
        with FakeTracker(issues, [{"name": "1.0"}]) as base_url:
            dump = fetch_project(base_url, "DEMO")
        assert load_dump(serialize_dump(dump)) == dump
        assert len(dump.links) == 1  # two-sided relates stored once
