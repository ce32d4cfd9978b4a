// SVG rendering of one graph view. Core members sit on an inner ring,
// everyone else on an outer ring; colors distinguish core, recommended,
// and users accepted during this session.

import type { GraphData } from "./api.js";

const SIZE = 640;
const CENTER = SIZE / 2;
const INNER_RADIUS = 130;
const OUTER_RADIUS = 280;
const SVG_NS = "http://www.w3.org/2000/svg";

interface Point {
  x: number;
  y: number;
}

function ringLayout(ids: string[], radius: number): Map<string, Point> {
  const points = new Map<string, Point>();
  const sorted = [...ids].sort();
  sorted.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(sorted.length, 1) - Math.PI / 2;
    points.set(id, {
      x: CENTER + radius * Math.cos(angle),
      y: CENTER + radius * Math.sin(angle),
    });
  });
  return points;
}

export function renderGraph(
  container: HTMLElement,
  data: GraphData,
  acceptedThisSession: ReadonlySet<string>,
): SVGSVGElement {
  container.textContent = "";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute("class", `graph graph-${data.view}`);

  const core = data.nodes.filter((n) => n.core).map((n) => n.id);
  const rest = data.nodes.filter((n) => !n.core).map((n) => n.id);
  const positions = new Map([...ringLayout(core, INNER_RADIUS), ...ringLayout(rest, OUTER_RADIUS)]);

  const maxWeight = data.edges.reduce((acc, e) => Math.max(acc, e.weight), 1);
  for (const edge of data.edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", from.x.toFixed(1));
    line.setAttribute("y1", from.y.toFixed(1));
    line.setAttribute("x2", to.x.toFixed(1));
    line.setAttribute("y2", to.y.toFixed(1));
    line.setAttribute("class", "edge");
    line.setAttribute("stroke-width", (0.5 + 2 * (edge.weight / maxWeight)).toFixed(2));
    svg.appendChild(line);
  }

  for (const node of data.nodes) {
    const at = positions.get(node.id);
    if (!at) continue;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", at.x.toFixed(1));
    circle.setAttribute("cy", at.y.toFixed(1));
    circle.setAttribute("r", node.core ? "7" : "5");
    const classes = ["node"];
    if (node.core) classes.push("core");
    if (node.recommended) classes.push("recommended");
    if (acceptedThisSession.has(node.id)) classes.push("accepted");
    circle.setAttribute("class", classes.join(" "));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.id;
    circle.appendChild(title);
    svg.appendChild(circle);
  }

  container.appendChild(svg);
  return svg;
}
