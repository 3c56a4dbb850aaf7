/**
 * DOM scene builder. Renders exactly what the server reported — the
 * marking as dot-and-line diagrams per place, history keys as [k]
 * badges, the four enabled sets as button groups — and wires clicks
 * back through the supplied handlers. No semantics are computed here;
 * the only derived data is visual (columns, dot coordinates,
 * component grouping for line drawing).
 */

import { Component, componentsOf } from "./components.js";
import {
  EnabledSets,
  Mode,
  NetDescription,
  StateJson,
  TraceInfo,
} from "./types.js";

export interface ViewState {
  net: NetDescription;
  columns: string[][];
  state: StateJson;
  /** Exact bytes of the server response the state came from. */
  raw: string;
  enabled: EnabledSets;
  trace: TraceInfo;
  banner: string | null;
}

export interface Handlers {
  act(transition: string, direction: "forward" | "reverse", mode?: Mode): void;
  undo(): void;
  reset(): void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function svg(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

// --- place diagrams ---

interface Point {
  x: number;
  y: number;
}

function ringPositions(count: number, center: Point, radius: number): Point[] {
  if (count === 1) return [center];
  const points: Point[] = [];
  for (let i = 0; i < count; i++) {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / count;
    points.push({
      x: center.x + radius * Math.cos(angle),
      y: center.y + radius * Math.sin(angle),
    });
  }
  return points;
}

function dotPositions(components: Component[]): Map<string, Point> {
  const positions = new Map<string, Point>();
  const centers = ringPositions(components.length, { x: 75, y: 50 }, 26);
  components.forEach((component, i) => {
    const spots = ringPositions(
      component.bases.length,
      centers[i],
      component.bases.length > 1 ? 7 + 4 * component.bases.length : 0,
    );
    component.bases.forEach((base, j) => positions.set(base, spots[j]));
  });
  return positions;
}

function placeCard(
  name: string,
  view: ViewState,
  homeOf: Map<string, string>,
): HTMLElement {
  const held = view.state.marking[name] ?? { bases: [], bonds: [] };
  const components = componentsOf(held);
  const positions = dotPositions(components);

  const scene = svg("svg", {
    viewBox: "0 0 150 110",
    class: "place-svg",
    "data-place": name,
  });
  scene.append(
    svg("ellipse", {
      cx: "75",
      cy: "50",
      rx: "70",
      ry: "46",
      class: "place-outline",
    }),
  );
  for (const [a, b] of held.bonds) {
    const pa = positions.get(a);
    const pb = positions.get(b);
    if (!pa || !pb) continue;
    scene.append(
      svg("line", {
        x1: String(pa.x),
        y1: String(pa.y),
        x2: String(pb.x),
        y2: String(pb.y),
        class: "bond",
        "data-bond": a < b ? `${a}-${b}` : `${b}-${a}`,
      }),
    );
  }
  for (const base of held.bases) {
    const p = positions.get(base)!;
    const dot = svg("circle", {
      cx: String(p.x),
      cy: String(p.y),
      r: "7",
      class: "base-dot",
      "data-base": base,
    });
    const title = svg("title");
    title.textContent = `${base} — home: ${homeOf.get(base) ?? "?"}`;
    dot.append(title);
    scene.append(dot);
    const label = svg("text", {
      x: String(p.x),
      y: String(p.y + 3),
      class: "base-label",
      "text-anchor": "middle",
    });
    label.textContent = base;
    scene.append(label);
  }

  return el(
    "div",
    { class: "place" },
    scene,
    el("div", { class: "place-name" }, name),
  );
}

function board(view: ViewState, homeOf: Map<string, string>): HTMLElement {
  const wrap = el("div", { class: "board" });
  for (const column of view.columns) {
    const col = el("div", { class: "column" });
    for (const place of column) col.append(placeCard(place, view, homeOf));
    wrap.append(col);
  }
  return wrap;
}

// --- transitions panel ---

const GROUPS: { id: keyof EnabledSets; label: string }[] = [
  { id: "forward", label: "fire" },
  { id: "bt", label: "reverse · backtracking" },
  { id: "co", label: "reverse · causal order" },
  { id: "o", label: "reverse · out of causal order" },
];

function keysStrip(view: ViewState): HTMLElement {
  const strip = el("div", { class: "keys" });
  for (const t of view.net.transitions) {
    const key = view.state.history[t];
    strip.append(
      el(
        "span",
        { class: "key", "data-key-of": t },
        `${t} `,
        el("b", {}, key === null || key === undefined ? "[–]" : `[${key}]`),
      ),
    );
  }
  return strip;
}

function transitionsPanel(view: ViewState, handlers: Handlers): HTMLElement {
  const panel = el(
    "aside",
    { class: "panel transitions" },
    el("h2", {}, "transitions"),
    keysStrip(view),
  );
  for (const group of GROUPS) {
    const row = el("div", { class: "action-row" });
    for (const t of view.net.transitions) {
      const allowed = view.enabled[group.id].includes(t);
      const button = el(
        "button",
        { class: "action", "data-action": `${group.id}:${t}` },
        t,
      );
      if (!allowed) {
        button.disabled = true; // disabled buttons send nothing
      } else {
        button.addEventListener("click", () => {
          if (group.id === "forward") handlers.act(t, "forward");
          else handlers.act(t, "reverse", group.id);
        });
      }
      row.append(button);
    }
    panel.append(el("h3", {}, group.label), row);
  }
  return panel;
}

// --- trace, state, chrome ---

function tracePanel(view: ViewState): HTMLElement {
  const chips = el("div", { class: "chips" });
  for (const action of view.trace.actions) {
    const text =
      action.direction === "forward"
        ? action.transition
        : `~${action.transition}:${action.mode}`;
    chips.append(el("span", { class: "chip" }, text));
  }
  if (view.trace.actions.length === 0) {
    chips.append(el("span", { class: "chip empty" }, "(empty)"));
  }
  return el(
    "section",
    { class: "panel trace" },
    el("h2", {}, "trace"),
    chips,
    el("code", { class: "trace-string", "data-trace": view.trace.trace },
      view.trace.trace || "—"),
  );
}

function statePanel(view: ViewState): HTMLElement {
  const pre = el("pre", { "data-state-json": "" });
  pre.textContent = view.raw;
  return el(
    "section",
    { class: "panel state" },
    el("details", {}, el("summary", {}, "state JSON (exact server bytes)"), pre),
  );
}

function header(view: ViewState, handlers: Handlers): HTMLElement {
  const undo = el("button", { class: "tool", "data-action": "undo" }, "undo");
  undo.addEventListener("click", () => handlers.undo());
  const reset = el("button", { class: "tool", "data-action": "reset" }, "reset");
  reset.addEventListener("click", () => handlers.reset());
  return el(
    "header",
    { class: "top" },
    el("h1", {}, `net ${view.net.name}`),
    el("div", { class: "tools" }, undo, reset),
  );
}

function banner(view: ViewState): HTMLElement {
  const box = el("div", { class: "banner", role: "alert" }, view.banner ?? "");
  if (!view.banner) box.setAttribute("hidden", "");
  return box;
}

export function render(
  root: HTMLElement,
  view: ViewState,
  handlers: Handlers,
): void {
  const homeOf = new Map<string, string>();
  for (const [place, held] of Object.entries(view.net.initial)) {
    for (const base of held.bases) homeOf.set(base, place);
  }
  root.textContent = "";
  root.append(
    header(view, handlers),
    banner(view),
    el(
      "main",
      { class: "layout" },
      board(view, homeOf),
      transitionsPanel(view, handlers),
    ),
    tracePanel(view),
    statePanel(view),
  );
}
