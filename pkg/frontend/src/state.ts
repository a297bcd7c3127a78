// View state and its URL (hash) round trip. The view is a pure function of
// this state plus the latest server responses, so restoring the hash
// reproduces the same view.

export type Tab = "info" | "detection" | "consistency";

export interface Filters {
  type?: string;
  priority?: string;
  release?: string;
  project?: string;
  status?: string;
}

export interface ViewState {
  selectedKey: string | null;
  depth: number;
  tab: Tab;
  filters: Filters;
}

export const MIN_DEPTH = 1;
export const MAX_DEPTH = 6;
export const DEFAULT_DEPTH = 2;

const FILTER_NAMES: (keyof Filters)[] = ["type", "priority", "release", "project", "status"];
const TABS: Tab[] = ["info", "detection", "consistency"];

export function initialState(): ViewState {
  return { selectedKey: null, depth: DEFAULT_DEPTH, tab: "info", filters: {} };
}

export function selectIssue(state: ViewState, key: string): ViewState {
  return { ...state, selectedKey: key };
}

export function setDepth(state: ViewState, depth: number): ViewState {
  const clamped = Math.min(MAX_DEPTH, Math.max(MIN_DEPTH, Math.round(depth)));
  return { ...state, depth: clamped };
}

export function setTab(state: ViewState, tab: Tab): ViewState {
  return { ...state, tab };
}

export function setFilters(state: ViewState, filters: Filters): ViewState {
  const cleaned: Filters = {};
  for (const name of FILTER_NAMES) {
    const value = filters[name]?.trim();
    if (value) cleaned[name] = value;
  }
  return { ...state, filters: cleaned };
}

export function clearFilters(state: ViewState): ViewState {
  return { ...state, filters: {} };
}

export function hasFilters(state: ViewState): boolean {
  return Object.keys(state.filters).length > 0;
}

export function toHash(state: ViewState): string {
  if (!state.selectedKey) return "";
  const params = new URLSearchParams();
  params.set("depth", String(state.depth));
  params.set("tab", state.tab);
  for (const name of FILTER_NAMES) {
    const value = state.filters[name];
    if (value) params.set(name, value);
  }
  return `#/${state.selectedKey}?${params}`;
}

export function fromHash(hash: string): ViewState {
  const state = initialState();
  const match = /^#\/([^?]+)(?:\?(.*))?$/.exec(hash);
  if (!match) return state;
  state.selectedKey = decodeURIComponent(match[1]);
  const params = new URLSearchParams(match[2] ?? "");
  const depth = Number(params.get("depth"));
  if (Number.isFinite(depth) && depth >= MIN_DEPTH) {
    state.depth = Math.min(MAX_DEPTH, Math.round(depth));
  }
  const tab = params.get("tab");
  if (tab && (TABS as string[]).includes(tab)) state.tab = tab as Tab;
  const filters: Filters = {};
  for (const name of FILTER_NAMES) {
    const value = params.get(name);
    if (value) filters[name] = value;
  }
  state.filters = filters;
  return state;
}
