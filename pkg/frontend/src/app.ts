// Application shell: map on the left, tabbed panel on the right, controls on
// top. Stale responses are discarded by per-panel sequence numbers, so a
// quick series of navigations settles on the newest request's result.

import { ApiClient } from "./api.js";
import { renderErrorBanner, renderMap } from "./render.js";
import {
  renderConsistencyPanel,
  renderDetectionPanel,
  renderInfoPanel,
} from "./panels.js";
import {
  clearFilters,
  hasFilters,
  initialState,
  selectIssue,
  setDepth,
  setFilters,
  setTab,
  toHash,
  MAX_DEPTH,
  MIN_DEPTH,
  type Filters,
  type Tab,
  type ViewState,
} from "./state.js";

const TAB_LABELS: Record<Tab, string> = {
  info: "Info",
  detection: "Link Detection",
  consistency: "Consistency",
};

export class App {
  state: ViewState;

  private readonly mapContainer: HTMLElement;
  private readonly panelContainer: HTMLElement;
  private readonly controlsContainer: HTMLElement;
  private readonly tabsContainer: HTMLElement;
  private mapSequence = 0;
  private panelSequence = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    initial?: ViewState,
  ) {
    this.state = initial ?? initialState();
    this.root.classList.add("issuemap-app");
    this.controlsContainer = document.createElement("header");
    this.controlsContainer.className = "controls";
    const main = document.createElement("main");
    this.mapContainer = document.createElement("section");
    this.mapContainer.className = "map-pane";
    const side = document.createElement("aside");
    side.className = "side-pane";
    this.tabsContainer = document.createElement("nav");
    this.tabsContainer.className = "tabs";
    this.panelContainer = document.createElement("section");
    this.panelContainer.className = "panel";
    side.append(this.tabsContainer, this.panelContainer);
    main.append(this.mapContainer, side);
    this.root.append(this.controlsContainer, main);
    this.renderControls();
    this.renderTabs();
  }

  async start(): Promise<void> {
    if (this.state.selectedKey) {
      await this.refresh();
    }
  }

  async navigate(key: string): Promise<void> {
    this.state = selectIssue(this.state, key);
    await this.refresh();
  }

  async changeDepth(depth: number): Promise<void> {
    this.state = setDepth(this.state, depth);
    this.renderControls();
    await this.refresh();
  }

  async changeTab(tab: Tab): Promise<void> {
    this.state = setTab(this.state, tab);
    this.renderTabs();
    this.syncHash();
    await this.refreshPanel();
  }

  async applyFilters(filters: Filters): Promise<void> {
    this.state = setFilters(this.state, filters);
    this.renderControls();
    await this.refreshMap();
    this.syncHash();
  }

  async resetFilters(): Promise<void> {
    this.state = clearFilters(this.state);
    this.renderControls();
    await this.refreshMap();
    this.syncHash();
  }

  async refresh(): Promise<void> {
    this.syncHash();
    await Promise.all([this.refreshMap(), this.refreshPanel()]);
  }

  async refreshMap(): Promise<void> {
    const key = this.state.selectedKey;
    if (!key) return;
    const sequence = ++this.mapSequence;
    try {
      const map = await this.api.map(key, this.state.depth, this.state.filters);
      if (sequence !== this.mapSequence) return; // superseded by a newer fetch
      renderMap(this.mapContainer, map, {
        onNodeClick: (clicked) => void this.navigate(clicked),
      });
    } catch (error) {
      if (sequence !== this.mapSequence) return;
      renderErrorBanner(this.mapContainer, `Could not load map: ${String(error)}`);
    }
  }

  async refreshPanel(): Promise<void> {
    const key = this.state.selectedKey;
    if (!key) return;
    const sequence = ++this.panelSequence;
    try {
      if (this.state.tab === "info") {
        const issue = await this.api.issue(key);
        if (sequence !== this.panelSequence) return;
        renderInfoPanel(this.panelContainer, issue);
      } else if (this.state.tab === "detection") {
        const recommendations = await this.api.recommendations(key);
        if (sequence !== this.panelSequence) return;
        renderDetectionPanel(this.panelContainer, recommendations, (candidate, decision, type) =>
          this.decide(candidate, decision, type),
        );
      } else {
        const report = await this.api.consistency(key, this.state.depth);
        if (sequence !== this.panelSequence) return;
        renderConsistencyPanel(this.panelContainer, report, (clicked) =>
          void this.navigate(clicked),
        );
      }
    } catch (error) {
      if (sequence !== this.panelSequence) return;
      renderErrorBanner(this.panelContainer, `Could not load panel: ${String(error)}`);
    }
  }

  async decide(
    candidate: string,
    decision: "accept" | "reject",
    type?: string,
  ): Promise<void> {
    const key = this.state.selectedKey;
    if (!key) return;
    await this.api.decide(key, candidate, decision, type);
    // the accepted edge must show up without a page reload
    await Promise.all([this.refreshMap(), this.refreshPanel()]);
  }

  private renderControls(): void {
    this.controlsContainer.textContent = "";

    const depthLabel = document.createElement("label");
    depthLabel.textContent = "Depth ";
    const depthSelect = document.createElement("select");
    depthSelect.className = "depth-select";
    for (let depth = MIN_DEPTH; depth <= MAX_DEPTH; depth++) {
      const option = document.createElement("option");
      option.value = String(depth);
      option.textContent = String(depth);
      option.selected = depth === this.state.depth;
      depthSelect.appendChild(option);
    }
    depthSelect.addEventListener("change", () => {
      void this.changeDepth(Number(depthSelect.value));
    });
    depthLabel.appendChild(depthSelect);

    const typeInput = document.createElement("input");
    typeInput.className = "filter-type";
    typeInput.placeholder = "type (e.g. bug)";
    typeInput.value = this.state.filters.type ?? "";
    const statusInput = document.createElement("input");
    statusInput.className = "filter-status";
    statusInput.placeholder = "status contains";
    statusInput.value = this.state.filters.status ?? "";
    const releaseInput = document.createElement("input");
    releaseInput.className = "filter-release";
    releaseInput.placeholder = "release (none = backlog)";
    releaseInput.value = this.state.filters.release ?? "";

    const applyButton = document.createElement("button");
    applyButton.className = "apply-filters";
    applyButton.textContent = "Apply filters";
    applyButton.addEventListener("click", () => {
      void this.applyFilters({
        ...this.state.filters,
        type: typeInput.value,
        status: statusInput.value,
        release: releaseInput.value,
      });
    });

    const clearButton = document.createElement("button");
    clearButton.className = "clear-filters";
    clearButton.textContent = "Clear filters";
    clearButton.addEventListener("click", () => void this.resetFilters());

    const summary = document.createElement("span");
    summary.className = "filter-summary";
    summary.textContent = hasFilters(this.state)
      ? "filters: " +
        Object.entries(this.state.filters)
          .map(([name, value]) => `${name}=${value}`)
          .join(" ")
      : "no filters";

    const refreshButton = document.createElement("button");
    refreshButton.className = "refresh";
    refreshButton.textContent = "Refresh";
    refreshButton.addEventListener("click", () => void this.refresh());

    this.controlsContainer.append(
      depthLabel,
      typeInput,
      statusInput,
      releaseInput,
      applyButton,
      clearButton,
      refreshButton,
      summary,
    );
  }

  private renderTabs(): void {
    this.tabsContainer.textContent = "";
    for (const tab of Object.keys(TAB_LABELS) as Tab[]) {
      const button = document.createElement("button");
      button.className = tab === this.state.tab ? "tab active" : "tab";
      button.dataset.tab = tab;
      button.textContent = TAB_LABELS[tab];
      button.addEventListener("click", () => void this.changeTab(tab));
      this.tabsContainer.appendChild(button);
    }
  }

  private syncHash(): void {
    if (typeof location !== "undefined") {
      location.hash = toHash(this.state);
    }
  }
}
