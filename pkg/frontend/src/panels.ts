// Right-hand side panels: issue info, link detection (accept/reject), and
// the consistency report. All values shown come straight from the server.

import type { ConsistencyReport, IssueDetail, Recommendation } from "./types.js";
import { LINK_TYPES } from "./types.js";

export function renderInfoPanel(container: HTMLElement, issue: IssueDetail): void {
  container.textContent = "";
  const rows: [string, string][] = [
    ["Key", issue.key],
    ["Title", issue.title],
    ["Type", issue.type],
    ["Status", issue.status],
    ["Priority", `${issue.priority.label} (P${issue.priority.rank})`],
    ["Release", issue.release ?? "unscheduled"],
    ["Comments", String(issue.comment_count)],
  ];
  const list = document.createElement("dl");
  list.className = "issue-info";
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    list.append(dt, dd);
  }
  container.appendChild(list);
  if (issue.description) {
    const description = document.createElement("p");
    description.className = "issue-description";
    description.textContent = issue.description;
    container.appendChild(description);
  }
}

export type DecideHandler = (
  candidate: string,
  decision: "accept" | "reject",
  type?: string,
) => Promise<void>;

export function renderDetectionPanel(
  container: HTMLElement,
  recommendations: Recommendation[],
  onDecide: DecideHandler,
): void {
  container.textContent = "";
  if (recommendations.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-note";
    empty.textContent = "No link recommendations for this issue.";
    container.appendChild(empty);
    return;
  }

  const list = document.createElement("ul");
  list.className = "recommendations";
  for (const rec of recommendations) {
    const row = document.createElement("li");
    row.className = "recommendation";
    row.dataset.candidate = rec.candidate;

    const summary = document.createElement("div");
    summary.className = "rec-summary";
    summary.textContent = `${rec.candidate} — score ${rec.score.toFixed(2)} [${rec.evidence}]`;
    const detail = document.createElement("div");
    detail.className = "rec-detail";
    detail.textContent = rec.detail;

    const controls = document.createElement("div");
    controls.className = "rec-controls";

    const typeSelect = document.createElement("select");
    typeSelect.className = "link-type";
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "choose link type…";
    typeSelect.appendChild(placeholder);
    for (const linkType of LINK_TYPES) {
      const option = document.createElement("option");
      option.value = linkType;
      option.textContent = linkType;
      typeSelect.appendChild(option);
    }

    const acceptButton = document.createElement("button");
    acceptButton.className = "accept";
    acceptButton.textContent = "Accept";
    acceptButton.disabled = true; // a link type must be chosen first

    const rejectButton = document.createElement("button");
    rejectButton.className = "reject";
    rejectButton.textContent = "Reject";

    const errorLine = document.createElement("div");
    errorLine.className = "rec-error";

    typeSelect.addEventListener("change", () => {
      acceptButton.disabled = typeSelect.value === "";
    });
    acceptButton.addEventListener("click", () => {
      acceptButton.disabled = true;
      rejectButton.disabled = true;
      onDecide(rec.candidate, "accept", typeSelect.value).catch((error) => {
        errorLine.textContent = String(error?.message ?? error);
        acceptButton.disabled = typeSelect.value === "";
        rejectButton.disabled = false;
      });
    });
    rejectButton.addEventListener("click", () => {
      acceptButton.disabled = true;
      rejectButton.disabled = true;
      onDecide(rec.candidate, "reject").catch((error) => {
        errorLine.textContent = String(error?.message ?? error);
        acceptButton.disabled = typeSelect.value === "";
        rejectButton.disabled = false;
      });
    });

    controls.append(typeSelect, acceptButton, rejectButton);
    row.append(summary, detail, controls, errorLine);
    list.appendChild(row);
  }
  container.appendChild(list);
}

export function renderConsistencyPanel(
  container: HTMLElement,
  report: ConsistencyReport,
  onNavigate: (key: string) => void,
): void {
  container.textContent = "";

  const banner = document.createElement("div");
  banner.className = report.consistent ? "banner consistent" : "banner inconsistent";
  banner.textContent = report.consistent
    ? "The release plan of this link map is consistent."
    : `Inconsistent: ${report.violations.length} violation(s) found.`;
  container.appendChild(banner);

  if (report.violations.length > 0) {
    const list = document.createElement("ul");
    list.className = "violations";
    for (const violation of report.violations) {
      const row = document.createElement("li");
      row.className = `violation rule-${violation.rule}`;

      const heading = document.createElement("div");
      const sourceLink = document.createElement("a");
      sourceLink.href = "#";
      sourceLink.textContent = violation.link.source;
      sourceLink.addEventListener("click", (event) => {
        event.preventDefault();
        onNavigate(violation.link.source);
      });
      const targetLink = document.createElement("a");
      targetLink.href = "#";
      targetLink.textContent = violation.link.target;
      targetLink.addEventListener("click", (event) => {
        event.preventDefault();
        onNavigate(violation.link.target);
      });
      heading.append(
        `${violation.rule}: `,
        sourceLink,
        ` → `,
        targetLink,
        violation.link.origin === "inherited" ? " (via duplicate)" : "",
      );

      const explanation = document.createElement("div");
      explanation.className = "violation-text";
      explanation.textContent = violation.explanation;
      row.append(heading, explanation);
      list.appendChild(row);
    }
    container.appendChild(list);
  }

  const releases = document.createElement("div");
  releases.className = "releases-in-scope";
  const title = document.createElement("h3");
  title.textContent = "Releases in scope";
  releases.appendChild(title);
  const projects = Object.keys(report.releases_in_scope).sort();
  if (projects.length === 0) {
    const none = document.createElement("p");
    none.className = "empty-note";
    none.textContent = "No scheduled releases in this map.";
    releases.appendChild(none);
  }
  for (const project of projects) {
    const line = document.createElement("p");
    line.className = "release-line";
    line.textContent = `${project}: ${report.releases_in_scope[project].join(", ")}`;
    releases.appendChild(line);
  }
  container.appendChild(releases);

  for (const notice of report.notices) {
    const line = document.createElement("p");
    line.className = "notice";
    line.textContent = notice;
    container.appendChild(line);
  }
}
