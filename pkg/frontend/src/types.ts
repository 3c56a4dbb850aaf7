/**
 * Shapes of the HTTP session API, with narrow runtime decoders.
 *
 * The UI never invents any of this data: every value rendered on
 * screen decodes from a server response. Decoders throw ShapeError on
 * anything unexpected rather than guessing.
 */

export interface PlaceContents {
  bases: string[];
  bonds: [string, string][];
}

export interface StateJson {
  marking: Record<string, PlaceContents>;
  history: Record<string, number | null>;
}

export interface EnabledSets {
  forward: string[];
  bt: string[];
  co: string[];
  o: string[];
}

export const REVERSAL_MODES = ["bt", "co", "o"] as const;
export type Mode = (typeof REVERSAL_MODES)[number];

export interface Arc {
  source: string;
  target: string;
  kind: "in" | "out";
  bases: string[];
  bonds: [string, string][];
  neg_bases: string[];
  neg_bonds: [string, string][];
}

export interface NetDescription {
  name: string;
  bases: string[];
  places: string[];
  transitions: string[];
  arcs: Arc[];
  initial: Record<string, PlaceContents>;
}

export interface TraceAction {
  transition: string;
  direction: "forward" | "reverse";
  mode: Mode | null;
}

export interface TraceInfo {
  trace: string;
  actions: TraceAction[];
}

export interface RefusalBody {
  error: string;
  action?: string;
  enabled?: EnabledSets;
}

export class ShapeError extends Error {
  constructor(what: string) {
    super(`unexpected response shape: ${what}`);
    this.name = "ShapeError";
  }
}

// --- decoding helpers ---

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function strings(x: unknown, what: string): string[] {
  if (!Array.isArray(x) || x.some((v) => typeof v !== "string")) {
    throw new ShapeError(`${what} should be a string array`);
  }
  return x as string[];
}

function pairs(x: unknown, what: string): [string, string][] {
  if (
    !Array.isArray(x) ||
    x.some(
      (v) =>
        !Array.isArray(v) ||
        v.length !== 2 ||
        typeof v[0] !== "string" ||
        typeof v[1] !== "string",
    )
  ) {
    throw new ShapeError(`${what} should be an array of string pairs`);
  }
  return x as [string, string][];
}

function contents(x: unknown, what: string): PlaceContents {
  if (!isRecord(x)) throw new ShapeError(`${what} should be an object`);
  return {
    bases: strings(x.bases, `${what}.bases`),
    bonds: pairs(x.bonds, `${what}.bonds`),
  };
}

export function decodeState(x: unknown): StateJson {
  if (!isRecord(x) || !isRecord(x.marking) || !isRecord(x.history)) {
    throw new ShapeError("state should have marking and history objects");
  }
  const marking: Record<string, PlaceContents> = {};
  for (const [place, held] of Object.entries(x.marking)) {
    marking[place] = contents(held, `marking.${place}`);
  }
  const history: Record<string, number | null> = {};
  for (const [t, key] of Object.entries(x.history)) {
    if (key !== null && typeof key !== "number") {
      throw new ShapeError(`history.${t} should be a number or null`);
    }
    history[t] = key;
  }
  return { marking, history };
}

export function decodeEnabled(x: unknown): EnabledSets {
  if (!isRecord(x)) throw new ShapeError("enabled should be an object");
  return {
    forward: strings(x.forward, "enabled.forward"),
    bt: strings(x.bt, "enabled.bt"),
    co: strings(x.co, "enabled.co"),
    o: strings(x.o, "enabled.o"),
  };
}

export function decodeNet(x: unknown): NetDescription {
  if (!isRecord(x) || typeof x.name !== "string" || !isRecord(x.initial)) {
    throw new ShapeError("net should have a name and an initial marking");
  }
  if (!Array.isArray(x.arcs)) throw new ShapeError("net.arcs should be an array");
  const arcs = x.arcs.map((raw, i): Arc => {
    if (!isRecord(raw)) throw new ShapeError(`arcs[${i}] should be an object`);
    const kind = raw.kind;
    if (
      typeof raw.source !== "string" ||
      typeof raw.target !== "string" ||
      (kind !== "in" && kind !== "out")
    ) {
      throw new ShapeError(`arcs[${i}] should have source, target, kind`);
    }
    return {
      source: raw.source,
      target: raw.target,
      kind,
      bases: strings(raw.bases, `arcs[${i}].bases`),
      bonds: pairs(raw.bonds, `arcs[${i}].bonds`),
      neg_bases: strings(raw.neg_bases, `arcs[${i}].neg_bases`),
      neg_bonds: pairs(raw.neg_bonds, `arcs[${i}].neg_bonds`),
    };
  });
  const initial: Record<string, PlaceContents> = {};
  for (const [place, held] of Object.entries(x.initial)) {
    initial[place] = contents(held, `initial.${place}`);
  }
  return {
    name: x.name,
    bases: strings(x.bases, "net.bases"),
    places: strings(x.places, "net.places"),
    transitions: strings(x.transitions, "net.transitions"),
    arcs,
    initial,
  };
}

export function decodeTrace(x: unknown): TraceInfo {
  if (!isRecord(x) || typeof x.trace !== "string" || !Array.isArray(x.actions)) {
    throw new ShapeError("trace should have a trace string and actions");
  }
  const actions = x.actions.map((raw, i): TraceAction => {
    if (
      !isRecord(raw) ||
      typeof raw.transition !== "string" ||
      (raw.direction !== "forward" && raw.direction !== "reverse")
    ) {
      throw new ShapeError(`actions[${i}] should have transition and direction`);
    }
    const mode = raw.mode;
    if (mode !== null && mode !== "bt" && mode !== "co" && mode !== "o") {
      throw new ShapeError(`actions[${i}].mode should be bt/co/o or null`);
    }
    return { transition: raw.transition, direction: raw.direction, mode };
  });
  return { trace: x.trace, actions };
}

export function decodeRefusal(x: unknown): RefusalBody {
  if (!isRecord(x) || typeof x.error !== "string") {
    throw new ShapeError("refusal should carry an error code");
  }
  const out: RefusalBody = { error: x.error };
  if (typeof x.action === "string") out.action = x.action;
  if (x.enabled !== undefined) out.enabled = decodeEnabled(x.enabled);
  return out;
}
