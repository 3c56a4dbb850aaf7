"""Core domain types: nets, markings, histories, states, actions.

Tokens ("bases") are named and persistent: exactly one instance of each
lives somewhere in the net at all times. Bonds are undirected pairs of
bases, created and destroyed by transitions. Arc labels carry positive
items (required/produced) and, on in-arcs only, negative items (required
absent).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

Mode = str  # "bt" | "co" | "o"
MODES = ("bt", "co", "o")

FORWARD = "forward"
REVERSE = "reverse"


@dataclass(frozen=True, order=True)
class Bond:
    """Undirected bond between two distinct bases, stored endpoint-sorted."""

    a: str
    b: str

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"self-bond on {self.a!r}")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def ends(self) -> frozenset[str]:
        return frozenset((self.a, self.b))

    def __str__(self) -> str:
        return f"{self.a}-{self.b}"


def _bondset(bonds: Iterable[Bond | tuple[str, str]]) -> frozenset[Bond]:
    return frozenset(b if isinstance(b, Bond) else Bond(*b) for b in bonds)


@dataclass(frozen=True)
class ArcLabel:
    """Label on one arc: positive bases/bonds plus negated ones.

    Negative items are only legal on in-arcs (place -> transition); that
    restriction is checked by validate, not here, so that malformed nets
    can be reported rather than crash.
    """

    bases: frozenset[str] = frozenset()
    bonds: frozenset[Bond] = frozenset()
    neg_bases: frozenset[str] = frozenset()
    neg_bonds: frozenset[Bond] = frozenset()

    @staticmethod
    def make(
        bases: Iterable[str] = (),
        bonds: Iterable[Bond | tuple[str, str]] = (),
        neg_bases: Iterable[str] = (),
        neg_bonds: Iterable[Bond | tuple[str, str]] = (),
    ) -> "ArcLabel":
        return ArcLabel(
            frozenset(bases), _bondset(bonds), frozenset(neg_bases), _bondset(neg_bonds)
        )

    @property
    def empty(self) -> bool:
        return not (self.bases or self.bonds or self.neg_bases or self.neg_bonds)


EMPTY_LABEL = ArcLabel()


@dataclass(frozen=True)
class Contents:
    """What one place holds: a set of bases and a set of bonds."""

    bases: frozenset[str] = frozenset()
    bonds: frozenset[Bond] = frozenset()

    @staticmethod
    def make(
        bases: Iterable[str] = (), bonds: Iterable[Bond | tuple[str, str]] = ()
    ) -> "Contents":
        return Contents(frozenset(bases), _bondset(bonds))

    @property
    def empty(self) -> bool:
        return not (self.bases or self.bonds)

    def union(self, other: "Contents") -> "Contents":
        return Contents(self.bases | other.bases, self.bonds | other.bonds)

    def difference(self, other: "Contents") -> "Contents":
        return Contents(self.bases - other.bases, self.bonds - other.bonds)

    def without_bonds(self, bonds: frozenset[Bond]) -> "Contents":
        return Contents(self.bases, self.bonds - bonds)


EMPTY_CONTENTS = Contents()


@dataclass(frozen=True)
class Marking:
    """Distribution of bases and bonds across places (immutable)."""

    contents: Mapping[str, Contents]

    @staticmethod
    def make(distribution: Mapping[str, Contents], places: Iterable[str]) -> "Marking":
        full = {p: distribution.get(p, EMPTY_CONTENTS) for p in places}
        return Marking(full)

    def __getitem__(self, place: str) -> Contents:
        return self.contents.get(place, EMPTY_CONTENTS)

    def places(self) -> Iterator[str]:
        return iter(self.contents)

    def place_of(self, base: str) -> Optional[str]:
        for place, held in self.contents.items():
            if base in held.bases:
                return place
        return None

    def places_of_bond(self, bond: Bond) -> list[str]:
        return [p for p, held in self.contents.items() if bond in held.bonds]

    def replace(self, updates: Mapping[str, Contents]) -> "Marking":
        merged = dict(self.contents)
        merged.update(updates)
        return Marking(merged)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Marking):
            return NotImplemented
        mine = {p: c for p, c in self.contents.items()}
        theirs = {p: c for p, c in other.contents.items()}
        places = set(mine) | set(theirs)
        return all(
            mine.get(p, EMPTY_CONTENTS) == theirs.get(p, EMPTY_CONTENTS) for p in places
        )

    def __hash__(self) -> int:
        return hash(
            frozenset((p, c) for p, c in self.contents.items() if not c.empty)
        )


# A history maps each transition to its execution key, or None for
# "never executed / since reversed". Keys are pairwise distinct.
History = Mapping[str, Optional[int]]


def initial_history(transitions: Iterable[str]) -> dict[str, Optional[int]]:
    return {t: None for t in transitions}


@dataclass(frozen=True)
class State:
    """One point of an execution: marking plus history."""

    marking: Marking
    history: History

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self.marking == other.marking and dict(self.history) == dict(
            other.history
        )

    def __hash__(self) -> int:
        return hash((self.marking, frozenset(self.history.items())))


@dataclass(frozen=True, order=True)
class Action:
    """Forward firing, or reversal tagged with its mode."""

    transition: str
    direction: str = FORWARD
    mode: Optional[Mode] = None

    def __post_init__(self) -> None:
        if self.direction not in (FORWARD, REVERSE):
            raise ValueError(f"bad direction {self.direction!r}")
        if self.direction == REVERSE:
            if self.mode not in MODES:
                raise ValueError(f"reverse action needs a mode, got {self.mode!r}")
        elif self.mode is not None:
            raise ValueError("forward action takes no mode")

    @property
    def is_forward(self) -> bool:
        return self.direction == FORWARD

    def __str__(self) -> str:
        if self.is_forward:
            return self.transition
        return f"~{self.transition}:{self.mode}"


def forward(t: str) -> Action:
    return Action(t, FORWARD)


def reverse(t: str, mode: Mode) -> Action:
    return Action(t, REVERSE, mode)


@dataclass(frozen=True)
class Net:
    """An immutable net: bases, places, transitions, and labeled arcs.

    arcs_in is keyed (place, transition); arcs_out (transition, place).
    A missing key means "no arc" (equivalently, an empty label).
    """

    name: str
    bases: frozenset[str]
    places: frozenset[str]
    transitions: frozenset[str]
    arcs_in: Mapping[tuple[str, str], ArcLabel]
    arcs_out: Mapping[tuple[str, str], ArcLabel]

    def in_label(self, place: str, t: str) -> ArcLabel:
        return self.arcs_in.get((place, t), EMPTY_LABEL)

    def out_label(self, t: str, place: str) -> ArcLabel:
        return self.arcs_out.get((t, place), EMPTY_LABEL)

    def preset(self, t: str) -> frozenset[str]:
        return frozenset(
            p for (p, t2), lab in self.arcs_in.items() if t2 == t and not lab.empty
        )

    def postset(self, t: str) -> frozenset[str]:
        return frozenset(
            p for (t2, p), lab in self.arcs_out.items() if t2 == t and not lab.empty
        )


@dataclass(frozen=True)
class TransitionView:
    """Pre-joined per-transition accessors: presets, label unions, effect."""

    transition: str
    preset: frozenset[str]
    postset: frozenset[str]
    guard: ArcLabel
    effects: ArcLabel
    effect: frozenset[Bond]  # bonds created forward, destroyed on reversal


def transition_views(net: Net, t: str) -> TransitionView:
    if t not in net.transitions:
        raise KeyError(f"unknown transition {t!r}")
    g_bases: set[str] = set()
    g_bonds: set[Bond] = set()
    g_neg_bases: set[str] = set()
    g_neg_bonds: set[Bond] = set()
    for (p, t2), lab in net.arcs_in.items():
        if t2 != t or lab.empty:
            continue
        g_bases |= lab.bases
        g_bonds |= lab.bonds
        g_neg_bases |= lab.neg_bases
        g_neg_bonds |= lab.neg_bonds
    e_bases: set[str] = set()
    e_bonds: set[Bond] = set()
    for (t2, p), lab in net.arcs_out.items():
        if t2 != t or lab.empty:
            continue
        e_bases |= lab.bases
        e_bonds |= lab.bonds
    return TransitionView(
        transition=t,
        preset=net.preset(t),
        postset=net.postset(t),
        guard=ArcLabel.make(g_bases, g_bonds, g_neg_bases, g_neg_bonds),
        effects=ArcLabel.make(e_bases, e_bonds),
        effect=frozenset(e_bonds - g_bonds),
    )


@dataclass(frozen=True)
class Violation:
    """One validation finding, named by rule code."""

    rule: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule} [{self.subject}]: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, subject: str, detail: str) -> None:
        self.violations.append(Violation(rule, subject, detail))

    def sorted(self) -> list[Violation]:
        return sorted(self.violations, key=lambda v: (v.rule, v.subject, v.detail))


def _label_structure(report: ValidationReport, where: str, lab: ArcLabel) -> None:
    overlap = lab.bases & lab.neg_bases
    if overlap:
        report.add(
            "NEG-OVERLAP",
            where,
            f"bases both required and negated: {sorted(overlap)}",
        )
    for bond in lab.bonds:
        missing = bond.ends - lab.bases
        if missing:
            report.add(
                "BOND-CLOSURE",
                where,
                f"bond {bond} endpoint(s) {sorted(missing)} not carried by the label",
            )
    allowed = lab.bases | lab.neg_bases
    for bond in lab.neg_bonds:
        missing = bond.ends - allowed
        if missing:
            report.add(
                "BOND-CLOSURE",
                where,
                f"negated bond {bond} endpoint(s) {sorted(missing)} not in the label",
            )


def _check_acyclic(net: Net, report: ValidationReport) -> None:
    # Bipartite graph: ("p", place) and ("t", transition) nodes, one edge
    # per nonempty arc label. Kahn's algorithm; leftovers form cycles.
    nodes: set[tuple[str, str]] = {("p", p) for p in net.places}
    nodes |= {("t", t) for t in net.transitions}
    succ: dict[tuple[str, str], set[tuple[str, str]]] = {n: set() for n in nodes}
    indeg: dict[tuple[str, str], int] = {n: 0 for n in nodes}

    def edge(u: tuple[str, str], v: tuple[str, str]) -> None:
        if v not in succ[u]:
            succ[u].add(v)
            indeg[v] += 1

    for (p, t), lab in net.arcs_in.items():
        if not lab.empty and ("p", p) in nodes and ("t", t) in nodes:
            edge(("p", p), ("t", t))
    for (t, p), lab in net.arcs_out.items():
        if not lab.empty and ("p", p) in nodes and ("t", t) in nodes:
            edge(("t", t), ("p", p))

    queue = [n for n in nodes if indeg[n] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen != len(nodes):
        stuck = sorted(name for (kind, name), d in indeg.items() if d > 0)
        report.add("ACYCLIC", net.name, f"cycle through {stuck}")


def validate(net: Net, m0: Marking) -> ValidationReport:
    """Structural validation. Violations are data, never exceptions."""
    report = ValidationReport()

    shared = net.places & net.transitions
    if shared:
        report.add(
            "AMBIGUOUS-IDENT",
            net.name,
            f"names declared both place and transition: {sorted(shared)}",
        )

    # Identifier references.
    for (p, t), lab in net.arcs_in.items():
        where = f"{p}->{t}"
        if p not in net.places:
            report.add("UNKNOWN-IDENT", where, f"place {p!r} not declared")
        if t not in net.transitions:
            report.add("UNKNOWN-IDENT", where, f"transition {t!r} not declared")
        for base in sorted((lab.bases | lab.neg_bases) - net.bases):
            report.add("UNKNOWN-IDENT", where, f"base {base!r} not declared")
        for bond in lab.bonds | lab.neg_bonds:
            for base in sorted(bond.ends - net.bases):
                report.add(
                    "UNKNOWN-IDENT", where, f"base {base!r} (in {bond}) not declared"
                )
        _label_structure(report, where, lab)
    for (t, p), lab in net.arcs_out.items():
        where = f"{t}->{p}"
        if p not in net.places:
            report.add("UNKNOWN-IDENT", where, f"place {p!r} not declared")
        if t not in net.transitions:
            report.add("UNKNOWN-IDENT", where, f"transition {t!r} not declared")
        for base in sorted((lab.bases | lab.neg_bases) - net.bases):
            report.add("UNKNOWN-IDENT", where, f"base {base!r} not declared")
        if lab.neg_bases or lab.neg_bonds:
            report.add(
                "NEG-ON-OUT-ARC",
                where,
                "negative items are only allowed on arcs into a transition",
            )
        _label_structure(report, where, lab)

    # Per-transition well-formedness.
    for t in sorted(net.transitions):
        view = transition_views(net, t)
        if view.guard.bases != view.effects.bases:
            report.add(
                "WF1",
                t,
                "consumed and produced bases differ: "
                f"in {sorted(view.guard.bases)}, out {sorted(view.effects.bases)}",
            )
        for bond in sorted(view.guard.bonds - view.effects.bonds):
            report.add("WF2", t, f"incoming bond {bond} dropped by every out-arc")
        outs = sorted(
            ((p, lab) for (t2, p), lab in net.arcs_out.items() if t2 == t and not lab.empty),
        )
        for i, (p1, lab1) in enumerate(outs):
            for p2, lab2 in outs[i + 1 :]:
                clash_bases = lab1.bases & lab2.bases
                clash_bonds = lab1.bonds & lab2.bonds
                if clash_bases or clash_bonds:
                    items = sorted(clash_bases) + [str(b) for b in sorted(clash_bonds)]
                    report.add(
                        "WF3", t, f"out-arcs to {p1} and {p2} both carry {items}"
                    )

    _check_acyclic(net, report)

    # Initial marking.
    for place in m0.places():
        if place not in net.places:
            report.add("UNKNOWN-IDENT", place, "marked place not declared")
    seen_bases: dict[str, list[str]] = {b: [] for b in net.bases}
    seen_bonds: dict[Bond, list[str]] = {}
    for place in sorted(m0.places()):
        held = m0[place]
        for base in held.bases:
            if base in seen_bases:
                seen_bases[base].append(place)
            else:
                report.add("UNKNOWN-IDENT", place, f"base {base!r} not declared")
        for bond in held.bonds:
            seen_bonds.setdefault(bond, []).append(place)
            missing = bond.ends - held.bases
            if missing:
                report.add(
                    "BOND-CLOSURE",
                    place,
                    f"bond {bond} present without endpoint(s) {sorted(missing)}",
                )
    for base in sorted(seen_bases):
        where = seen_bases[base]
        if len(where) != 1:
            report.add(
                "UNIQUE-TOKEN",
                base,
                f"must occupy exactly one place initially, found in {where}",
            )
    for bond in sorted(seen_bonds):
        where = seen_bonds[bond]
        if len(where) > 1:
            report.add("UNIQUE-TOKEN", str(bond), f"bond in several places: {where}")

    return report
