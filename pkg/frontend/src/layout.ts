/**
 * Fixed column layout: places ordered by longest-path depth, so
 * tokens visually flow left to right. Back edges of cyclic nets are
 * cut rather than followed, so every place still lands in a column.
 */

import { NetDescription } from "./types.js";

/** Places grouped into columns by depth; names sorted within a column. */
export function topologicalColumns(net: NetDescription): string[][] {
  const insOf = new Map<string, string[]>(); // transition -> in-places
  const outsTo = new Map<string, string[]>(); // place -> transitions feeding it
  for (const arc of net.arcs) {
    if (arc.kind === "in") {
      const ins = insOf.get(arc.target) ?? [];
      ins.push(arc.source);
      insOf.set(arc.target, ins);
    } else {
      const feeds = outsTo.get(arc.target) ?? [];
      feeds.push(arc.source);
      outsTo.set(arc.target, feeds);
    }
  }

  const depth = new Map<string, number>();
  const visiting = new Set<string>();
  const depthOf = (place: string): number => {
    const known = depth.get(place);
    if (known !== undefined) return known;
    if (visiting.has(place)) return 0; // cut the back edge
    visiting.add(place);
    let d = 0;
    for (const t of outsTo.get(place) ?? []) {
      for (const input of insOf.get(t) ?? []) {
        d = Math.max(d, depthOf(input) + 1);
      }
    }
    visiting.delete(place);
    depth.set(place, d);
    return d;
  };

  const columns: string[][] = [];
  for (const place of net.places) {
    const d = depthOf(place);
    while (columns.length <= d) columns.push([]);
    columns[d].push(place);
  }
  for (const column of columns) column.sort();
  return columns.filter((column) => column.length > 0);
}
