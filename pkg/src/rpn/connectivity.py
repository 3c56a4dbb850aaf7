"""Bond-graph connectivity inside a single set of contents.

Tokens bonded together move as one unit, so most of the execution rules
are phrased in terms of the maximal connected component around a base.
"""

from __future__ import annotations

from .model import Bond, Contents, EMPTY_CONTENTS


def connected(base: str, held: Contents) -> Contents:
    """Maximal component of `held` containing `base`, following bonds.

    Returns empty contents when the base is not present at all. The
    result's bonds are exactly those of `held` with both ends reached.
    """
    if base not in held.bases:
        return EMPTY_CONTENTS
    adjacency: dict[str, set[str]] = {}
    for bond in held.bonds:
        adjacency.setdefault(bond.a, set()).add(bond.b)
        adjacency.setdefault(bond.b, set()).add(bond.a)
    reached = {base}
    frontier = [base]
    while frontier:
        current = frontier.pop()
        for neighbor in adjacency.get(current, ()):
            if neighbor in held.bases and neighbor not in reached:
                reached.add(neighbor)
                frontier.append(neighbor)
    bonds = frozenset(b for b in held.bonds if b.a in reached and b.b in reached)
    return Contents(frozenset(reached), bonds)


def components(held: Contents) -> list[Contents]:
    """All maximal components of `held`, each a Contents of its own."""
    remaining = set(held.bases)
    out: list[Contents] = []
    while remaining:
        base = min(remaining)
        comp = connected(base, held)
        out.append(comp)
        remaining -= comp.bases
    return out


def component_union(bases: set[str], held: Contents) -> Contents:
    """Union of the components of every base in `bases` within `held`."""
    merged = EMPTY_CONTENTS
    for base in sorted(bases):
        if base not in merged.bases:
            merged = merged.union(connected(base, held))
    return merged
