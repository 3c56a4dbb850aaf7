/**
 * Connected components of one place's contents, for display grouping
 * only — which dots cluster together and which lines join them. The
 * data itself is exactly what the server reported.
 */

import { PlaceContents } from "./types.js";

export interface Component {
  bases: string[];
  bonds: [string, string][];
}

export function componentsOf(held: PlaceContents): Component[] {
  const adjacency = new Map<string, Set<string>>();
  for (const base of held.bases) adjacency.set(base, new Set());
  for (const [a, b] of held.bonds) {
    adjacency.get(a)?.add(b);
    adjacency.get(b)?.add(a);
  }

  const seen = new Set<string>();
  const components: Component[] = [];
  for (const start of [...held.bases].sort()) {
    if (seen.has(start)) continue;
    const bases: string[] = [];
    const frontier = [start];
    seen.add(start);
    while (frontier.length > 0) {
      const base = frontier.pop()!;
      bases.push(base);
      for (const next of adjacency.get(base) ?? []) {
        if (!seen.has(next)) {
          seen.add(next);
          frontier.push(next);
        }
      }
    }
    bases.sort();
    const members = new Set(bases);
    const bonds = held.bonds
      .filter(([a]) => members.has(a))
      .map(([a, b]): [string, string] => (a < b ? [a, b] : [b, a]))
      .sort((x, y) => x[0].localeCompare(y[0]) || x[1].localeCompare(y[1]));
    components.push({ bases, bonds });
  }
  return components;
}
