// SVG rendering of a link map. Nodes are labeled circles, edges are lines
// styled per link type, the center is visually distinguished, and every node
// is clickable for navigation.

import { layoutPositions } from "./layout.js";
import type { MapResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 720;
const HEIGHT = 480;
const NODE_RADIUS = 16;

export interface MapCallbacks {
  onNodeClick: (key: string) => void;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    element.setAttribute(name, value);
  }
  return element;
}

export function renderMap(
  container: HTMLElement,
  map: MapResponse,
  callbacks: MapCallbacks,
): void {
  container.textContent = "";
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "issue-map",
    role: "img",
  });
  svg.dataset.center = map.center;
  svg.dataset.version = String(map.version);

  const positions = layoutPositions(
    map.center,
    map.depth ?? 0,
    map.nodes.map((node) => node.key),
    map.edges.map((edge) => [edge.source, edge.target]),
    WIDTH,
    HEIGHT,
  );

  for (const edge of map.edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (!from || !to) continue;
    const line = svgElement("line", {
      x1: String(from.x),
      y1: String(from.y),
      x2: String(to.x),
      y2: String(to.y),
      class: `edge edge-${edge.type} origin-${edge.origin}`,
    });
    line.dataset.source = edge.source;
    line.dataset.target = edge.target;
    line.dataset.type = edge.type;
    svg.appendChild(line);
  }

  for (const node of map.nodes) {
    const point = positions.get(node.key);
    if (!point) continue;
    const group = svgElement("g", {
      class: node.key === map.center ? "node center" : "node",
      transform: `translate(${point.x}, ${point.y})`,
    });
    group.dataset.key = node.key;
    const circle = svgElement("circle", {
      r: String(node.key === map.center ? NODE_RADIUS + 4 : NODE_RADIUS),
      class: `type-${node.type}`,
    });
    const title = svgElement("title", {});
    title.textContent = `${node.key}: ${node.title} (distance ${node.distance})`;
    const label = svgElement("text", { y: String(NODE_RADIUS + 14), class: "node-label" });
    label.textContent = node.key;
    group.append(circle, title, label);
    group.addEventListener("click", () => callbacks.onNodeClick(node.key));
    svg.appendChild(group);
  }

  container.appendChild(svg);
  container.appendChild(renderLegend(map));
}

function renderLegend(map: MapResponse): HTMLElement {
  const legend = document.createElement("div");
  legend.className = "map-legend";
  const types = [...new Set(map.edges.map((edge) => edge.type))].sort();
  legend.textContent = types.length
    ? `link types: ${types.join(", ")}`
    : "no links in view";
  return legend;
}

export function renderErrorBanner(container: HTMLElement, message: string): void {
  container.textContent = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = message;
  container.appendChild(banner);
}
