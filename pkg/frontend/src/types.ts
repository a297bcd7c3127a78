// Payload shapes of the issuemap HTTP API.

export interface PriorityInfo {
  rank: number;
  label: string;
}

export interface IssueDetail {
  key: string;
  project: string;
  type: string;
  status: string;
  title: string;
  description: string;
  priority: PriorityInfo;
  release: string | null;
  comment_count: number;
  comments?: string[];
}

export interface MapNode {
  key: string;
  title: string;
  type: string;
  status: string;
  priority: PriorityInfo;
  release: string | null;
  distance: number;
}

export interface MapEdge {
  source: string;
  target: string;
  type: string;
  origin: string;
}

export interface MapResponse {
  center: string;
  depth: number | null;
  nodes: MapNode[];
  edges: MapEdge[];
  filter: Record<string, unknown>;
  version: number;
}

export interface Recommendation {
  source: string;
  candidate: string;
  score: number;
  evidence: "similarity" | "cross-reference";
  detail: string;
  state: string;
}

export interface ViolationEntry {
  rule: string;
  link: MapEdge;
  explanation: string;
}

export interface ConsistencyReport {
  center: string;
  depth: number | null;
  consistent: boolean;
  violations: ViolationEntry[];
  releases_in_scope: Record<string, string[]>;
  notices: string[];
}

export interface Stats {
  issue_count: number;
  link_count: number;
  issues_with_links: number;
  component_count: number;
  largest_component: number;
  largest_component_diameter: number;
}

export const LINK_TYPES = ["parent-child", "requires", "duplicates", "relates"] as const;
