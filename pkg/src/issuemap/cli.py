"""Command-line entry points: serve the API, or run batch analyses on a dump.

Exit codes are stable for CI use: 0 clean, 1 input error, 2 findings
(check found violations).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from issuemap.errors import IssueMapError, MalformedKeyError, UnknownIssueError
from issuemap.ingestion import DecisionStore, load_dump_path
from issuemap.model import parse_issue_key
from issuemap.service import (
    LinkMapService,
    consistency_payload,
    recommendations_payload,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_FINDINGS = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="issuemap",
        description="Issue link map service: map queries, link recommendations,"
        " and release-plan consistency checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dump_args(p):
        p.add_argument(
            "--dump",
            default=os.environ.get("ISSUEMAP_DUMP"),
            help="path to the issue dump JSON file",
        )
        p.add_argument(
            "--decisions",
            default=os.environ.get("ISSUEMAP_DECISIONS"),
            help="path to the append-only decision log (NDJSON)",
        )

    serve = sub.add_parser("serve", help="serve the HTTP API")
    add_dump_args(serve)
    serve.add_argument(
        "--listen",
        default=os.environ.get("ISSUEMAP_LISTEN", "127.0.0.1:8734"),
        help="listen address as HOST:PORT",
    )
    serve.add_argument(
        "--depth-cap",
        type=int,
        default=int(os.environ.get("ISSUEMAP_DEPTH_CAP", "6")),
        help="maximum map depth served by the API",
    )

    for name, help_text in (
        ("detect", "list link recommendations"),
        ("check", "check release-plan consistency"),
        ("stats", "print graph statistics"),
    ):
        analyze = sub.add_parser(name, help=help_text)
        add_dump_args(analyze)
        analyze.add_argument("--issue", help="restrict to one issue key")
        analyze.add_argument("--depth", type=int, help="map depth around --issue")
        analyze.add_argument(
            "--format", choices=("human", "json"), default="human", help="report format"
        )

    fetch = sub.add_parser("fetch", help="export a project from a Jira-compatible tracker")
    fetch.add_argument("--project", required=True, help="project code to export")
    fetch.add_argument(
        "--base-url",
        default=os.environ.get("ISSUEMAP_TRACKER_URL"),
        help="tracker base URL",
    )
    fetch.add_argument(
        "--token",
        default=os.environ.get("ISSUEMAP_TRACKER_TOKEN"),
        help="tracker API token (bearer)",
    )
    fetch.add_argument("--out", help="write the dump here instead of standard output")
    return parser


def _load_service(args) -> LinkMapService:
    if not args.dump:
        raise IssueMapError("no dump file given (use --dump or ISSUEMAP_DUMP)")
    try:
        dump = load_dump_path(args.dump)
    except OSError as exc:
        raise IssueMapError(f"cannot read dump {args.dump}: {exc}") from None
    decisions = DecisionStore(args.decisions) if args.decisions else DecisionStore()
    return LinkMapService(dump, decisions)


def _print_stats_human(stats: dict, out) -> None:
    print(f"issues:             {stats['issue_count']}", file=out)
    print(f"links:              {stats['link_count']}", file=out)
    print(f"issues with links:  {stats['issues_with_links']}", file=out)
    print(f"components:         {stats['component_count']}", file=out)
    print(f"largest component:  {stats['largest_component']}", file=out)
    print(f"largest diameter:   {stats['largest_component_diameter']}", file=out)


def _cmd_serve(args) -> int:
    import uvicorn

    from issuemap.api import create_app

    service = _load_service(args)
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise IssueMapError(f"--listen must be HOST:PORT, got {args.listen!r}")
    service.depth_cap = args.depth_cap
    for warning in service.replay_warnings:
        print(f"replay: {warning}", file=sys.stderr)
    _print_stats_human(service.stats(), sys.stdout)
    app = create_app(service)
    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    return EXIT_OK


def _cmd_detect(args) -> int:
    service = _load_service(args)
    if args.issue:
        key = parse_issue_key(args.issue)
        per_issue = {key: service.recommendations(key)}
    else:
        graph = service.graph()
        per_issue = {key: service.recommendations(key) for key in sorted(graph.issues)}

    if args.format == "json":
        if args.issue:
            payload = recommendations_payload(per_issue[parse_issue_key(args.issue)])
        else:
            payload = {
                str(key): recommendations_payload(recs)
                for key, recs in per_issue.items()
                if recs
            }
        print(json.dumps(payload, indent=2))
        return EXIT_OK

    empty = True
    for key, recs in per_issue.items():
        for rec in recs:
            empty = False
            print(
                f"{key} -> {rec.candidate}  score={rec.score:.3f}"
                f"  [{rec.evidence.value}] {rec.evidence_detail}"
            )
    if empty:
        print("no recommendations")
    return EXIT_OK


def _report_scopes(args, service: LinkMapService):
    if args.issue:
        key = parse_issue_key(args.issue)
        service.issue(key)  # unknown key -> input error
        return [(key, args.depth)]
    return [(key, None) for key in service.component_keys()]


def _cmd_check(args) -> int:
    service = _load_service(args)
    scopes = _report_scopes(args, service)
    reports = [service.consistency(key, depth) for key, depth in scopes]

    if args.format == "json":
        if args.issue:
            print(json.dumps(consistency_payload(reports[0]), indent=2))
        else:
            print(json.dumps([consistency_payload(r) for r in reports], indent=2))
    else:
        total = 0
        for report in reports:
            scope_name = f"{report.scope.center}"
            if report.scope.depth is not None:
                scope_name += f" (depth {report.scope.depth})"
            if report.consistent:
                print(f"{scope_name}: consistent")
            else:
                print(f"{scope_name}: INCONSISTENT")
            for violation in report.violations:
                total += 1
                print(f"  {violation.rule.value}: {violation.explanation}")
            for notice in report.notices:
                print(f"  note: {notice}", file=sys.stderr)
        releases = {}
        for report in reports:
            for project, names in report.releases_in_scope.items():
                releases.setdefault(project, [])
                releases[project] += [n for n in names if n not in releases[project]]
        for project in sorted(releases):
            print(f"releases {project}: {', '.join(releases[project])}")

    has_violations = any(not report.consistent for report in reports)
    return EXIT_FINDINGS if has_violations else EXIT_OK


def _cmd_stats(args) -> int:
    service = _load_service(args)
    stats = service.stats()
    if args.format == "json":
        print(json.dumps(stats, indent=2))
    else:
        _print_stats_human(stats, sys.stdout)
    return EXIT_OK


def _cmd_fetch(args) -> int:
    from issuemap.ingestion import serialize_dump
    from issuemap.jira import fetch_project

    if not args.base_url:
        raise IssueMapError(
            "no tracker base URL given (use --base-url or ISSUEMAP_TRACKER_URL)"
        )
    dump = fetch_project(args.base_url, args.project, token=args.token)
    text = serialize_dump(dump)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        print(f"wrote {len(dump.issues)} issue(s) to {args.out}", file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


_COMMANDS = {
    "serve": _cmd_serve,
    "detect": _cmd_detect,
    "check": _cmd_check,
    "stats": _cmd_stats,
    "fetch": _cmd_fetch,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (MalformedKeyError, UnknownIssueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except IssueMapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
