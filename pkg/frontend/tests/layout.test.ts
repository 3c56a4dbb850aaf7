import { describe, expect, it } from "vitest";
import { topologicalColumns } from "../src/layout.js";
import { Arc, NetDescription } from "../src/types.js";

function inArc(place: string, t: string): Arc {
  return {
    source: place,
    target: t,
    kind: "in",
    bases: [],
    bonds: [],
    neg_bases: [],
    neg_bonds: [],
  };
}

function outArc(t: string, place: string): Arc {
  return {
    source: t,
    target: place,
    kind: "out",
    bases: [],
    bonds: [],
    neg_bases: [],
    neg_bonds: [],
  };
}

function net(
  places: string[],
  transitions: string[],
  arcs: Arc[],
): NetDescription {
  return { name: "n", bases: [], places, transitions, arcs, initial: {} };
}

describe("topologicalColumns", () => {
  it("lays a three-stage chain out in three columns", () => {
    const n = net(
      ["u", "v", "w", "x", "y"],
      ["t1", "t2"],
      [
        inArc("u", "t1"),
        inArc("v", "t1"),
        outArc("t1", "x"),
        inArc("x", "t2"),
        inArc("w", "t2"),
        outArc("t2", "y"),
      ],
    );
    expect(topologicalColumns(n)).toEqual([["u", "v", "w"], ["x"], ["y"]]);
  });

  it("groups places of equal depth into one column", () => {
    const n = net(
      ["u1", "u2", "u3", "u4", "x", "y", "z"],
      ["t1", "t2", "t3"],
      [
        inArc("u1", "t1"),
        inArc("u2", "t1"),
        outArc("t1", "x"),
        inArc("u3", "t2"),
        inArc("u4", "t2"),
        outArc("t2", "y"),
        inArc("x", "t3"),
        inArc("y", "t3"),
        outArc("t3", "z"),
      ],
    );
    expect(topologicalColumns(n)).toEqual([
      ["u1", "u2", "u3", "u4"],
      ["x", "y"],
      ["z"],
    ]);
  });

  it("puts isolated places in the first column", () => {
    const n = net(["p", "q"], [], []);
    expect(topologicalColumns(n)).toEqual([["p", "q"]]);
  });

  it("keeps every place exactly once even on a cycle", () => {
    const n = net(
      ["p", "q"],
      ["t1", "t2"],
      [
        inArc("p", "t1"),
        outArc("t1", "q"),
        inArc("q", "t2"),
        outArc("t2", "p"),
      ],
    );
    const columns = topologicalColumns(n);
    const flat = columns.flat().sort();
    expect(flat).toEqual(["p", "q"]);
  });
});
