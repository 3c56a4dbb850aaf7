"""Bounded state-space exploration, property and theorem checkers, and a
seed-deterministic generator of well-formed nets for property testing.

States are stored canonically: the marking as-is (it is already a value)
and the history rank-compressed, since raw keys grow without bound under
fire/reverse cycles while no enabledness predicate reads anything but
their relative order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

from .connectivity import components
from .equivalence import (
    EQUIVALENT,
    INEQUIVALENT,
    c_equiv,
    causal_equivalent,
    history_equiv,
)
from .model import (
    Action,
    ArcLabel,
    Bond,
    Contents,
    EMPTY_CONTENTS,
    Marking,
    Net,
    State,
    forward,
    reverse,
    transition_views,
    validate,
)
from .semantics import (
    action_enabled,
    bt_enabled,
    canonicalize_history,
    co_enabled,
    co_enabled_outplace,
    fire_forward,
    fire_reverse_btco,
    fire_reverse_o,
    forward_enabled,
    initial_state,
    last_transition,
    o_enabled,
    o_reverse_literal,
    step,
)

MODES = ("forward", "bt", "co", "o")


def mode_actions(net: Net, mode: str) -> list[Action]:
    """The action universe of a discipline: forward firings plus, except
    in pure-forward mode, reversals of that one mode."""
    acts = [forward(t) for t in sorted(net.transitions)]
    if mode != "forward":
        acts += [reverse(t, mode) for t in sorted(net.transitions)]
    return acts


def canon(state: State) -> State:
    return State(state.marking, canonicalize_history(state.history))


@dataclass
class StateSpace:
    net: Net
    m0: Marking
    mode: str
    depth: int
    states: list[State]  # canonical, BFS order
    edges: list[tuple[State, Action, State]]
    truncated: bool  # depth cut off at least one enabled action

    @property
    def initial(self) -> State:
        return self.states[0]

    def signatures(self) -> set:
        """(marking, executed-set) pairs — history keys abstracted away."""
        return {
            (s.marking, frozenset(t for t, k in s.history.items() if k is not None))
            for s in self.states
        }


def explore(net: Net, m0: Marking, mode: str, depth: int = 6) -> StateSpace:
    """BFS of the reachable states under one discipline, up to depth."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    actions = mode_actions(net, mode)
    start = canon(initial_state(net, m0))
    seen: dict[State, None] = {start: None}
    edges: list[tuple[State, Action, State]] = []
    level = [start]
    truncated = False
    for layer in range(depth + 1):
        last_layer = layer == depth
        nxt: list[State] = []
        for s in level:
            for a in actions:
                if not action_enabled(net, s, a):
                    continue
                if last_layer:
                    truncated = True
                    break
                target = canon(step(net, m0, s, a))
                edges.append((s, a, target))
                if target not in seen:
                    seen[target] = None
                    nxt.append(target)
        level = nxt
        if not level:
            break
    return StateSpace(net, m0, mode, depth, list(seen), edges, truncated)


def find_state(space: StateSpace, pred: Callable[[Net, State], bool]) -> Optional[State]:
    """First state in BFS order satisfying pred, or None."""
    for s in space.states:
        if pred(space.net, s):
            return s
    return None


### property checkers

@dataclass
class Report:
    subject: str
    ok: bool
    detail: str = ""
    checked: int = 0

    def __str__(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        tail = f" — {self.detail}" if self.detail else ""
        return f"{self.subject}: {verdict} ({self.checked} checks){tail}"


def _fmt_state(state: State) -> str:
    parts = []
    for p in sorted(state.marking.places()):
        held = state.marking[p]
        if held.empty:
            continue
        items = sorted(held.bases) + [str(b) for b in sorted(held.bonds)]
        parts.append(f"{p}:{{{','.join(items)}}}")
    hist = ",".join(
        f"{t}={k}" for t, k in sorted(state.history.items()) if k is not None
    )
    return " ".join(parts) + (f" [{hist}]" if hist else " [fresh]")


def _bond_places(marking: Marking, bond: Bond) -> list[str]:
    return marking.places_of_bond(bond)


def check_preservation(space: StateSpace) -> Report:
    """Each base lives in exactly one place; each bond in at most one.
    Along every edge, bonds in effect(t) are created by forward steps and
    destroyed by reversals, and all other bonds keep existing (possibly
    relocating with their component)."""
    net = space.net
    all_bases = sorted(net.bases)
    checked = 0
    for s in space.states:
        for a in all_bases:
            places = [p for p in sorted(s.marking.places()) if a in s.marking[p].bases]
            checked += 1
            if len(places) != 1:
                return Report(
                    "preservation", False,
                    f"base {a} in places {places} at {_fmt_state(s)}", checked,
                )
        seen_bonds: dict[Bond, int] = {}
        for p in sorted(s.marking.places()):
            held = s.marking[p]
            for b in held.bonds:
                seen_bonds[b] = seen_bonds.get(b, 0) + 1
                checked += 1
                if not b.ends <= held.bases:
                    return Report(
                        "preservation", False,
                        f"bond {b} in {p} away from its bases at {_fmt_state(s)}",
                        checked,
                    )
        for b, n in seen_bonds.items():
            checked += 1
            if n > 1:
                return Report(
                    "preservation", False,
                    f"bond {b} in {n} places at {_fmt_state(s)}", checked,
                )
    for s, a, s2 in space.edges:
        eff = transition_views(net, a.transition).effect
        before = {b for p in s.marking.places() for b in s.marking[p].bonds}
        after = {b for p in s2.marking.places() for b in s2.marking[p].bonds}
        for b in eff:
            checked += 1
            if a.is_forward and not (b not in before and b in after):
                return Report(
                    "preservation", False,
                    f"{a}: created bond {b} not fresh-in-result at {_fmt_state(s)}",
                    checked,
                )
            if not a.is_forward and not (b in before and b not in after):
                return Report(
                    "preservation", False,
                    f"{a}: bond {b} not destroyed at {_fmt_state(s)}", checked,
                )
        for b in before | after:
            if b in eff:
                continue
            checked += 1
            if (b in before) != (b in after):
                return Report(
                    "preservation", False,
                    f"{a}: untouched bond {b} appeared/vanished at {_fmt_state(s)}",
                    checked,
                )
    return Report("preservation", True, "", checked)


def check_loop(space: StateSpace) -> Report:
    """Forward firing then same-mode reversal is the exact identity, and a
    reversal then re-firing restores the marking and the executed set."""
    if space.mode not in ("bt", "co"):
        raise ValueError("loop property needs a bt or co space")
    net, m0 = space.net, space.m0
    checked = 0
    for s in space.states:
        for t in sorted(net.transitions):
            if action_enabled(net, s, forward(t)):
                checked += 1
                fired = fire_forward(net, s, t)
                if action_enabled(net, fired, reverse(t, space.mode)):
                    back = fire_reverse_btco(net, fired, t)
                    if back != s:
                        return Report(
                            "loop", False,
                            f"{t} fire;reverse({space.mode}) != identity at {_fmt_state(s)}",
                            checked,
                        )
                else:
                    return Report(
                        "loop", False,
                        f"{t} not {space.mode}-reversible right after firing at {_fmt_state(s)}",
                        checked,
                    )
            if action_enabled(net, s, reverse(t, space.mode)):
                checked += 1
                undone = fire_reverse_btco(net, s, t)
                if not action_enabled(net, undone, forward(t)):
                    # a causal reversal may return a token that trips some
                    # negative precondition of t; anything else is a bug,
                    # and backtracking restores an exact earlier state in
                    # which t had just fired, so there it always is a bug
                    if space.mode == "bt" or not forward_enabled(
                        net, undone, t, heed_negatives=False
                    ):
                        return Report(
                            "loop", False,
                            f"{t} not re-firable right after {space.mode}-reversal at {_fmt_state(s)}",
                            checked,
                        )
                    continue
                redone = fire_forward(net, undone, t)
                if space.mode == "bt":
                    restored = redone == s
                else:
                    restored = redone.marking == s.marking and history_equiv(
                        redone.history, s.history
                    )
                if not restored:
                    return Report(
                        "loop", False,
                        f"{t} reverse({space.mode});fire lost the state at {_fmt_state(s)}",
                        checked,
                    )
    return Report("loop", True, "", checked)


def check_prop4(space: StateSpace) -> Report:
    """The causal enabledness predicate agrees with its out-place
    formulation (valid on states reached without o-reversals)."""
    if space.mode == "o":
        raise ValueError("the out-place formulation is not claimed on o-mode spaces")
    net = space.net
    checked = 0
    for s in space.states:
        for t in sorted(net.transitions):
            checked += 1
            if co_enabled(net, s, t) != co_enabled_outplace(net, s, t):
                return Report(
                    "prop4", False,
                    f"{t}: causal vs out-place enabledness differ at {_fmt_state(s)}",
                    checked,
                )
    return Report("prop4", True, "", checked)


def check_inclusions(space: StateSpace) -> Report:
    """bt-enabled implies co-enabled implies o-enabled, everywhere; and on
    spaces without o-reversals, reversing a co-enabled transition gives
    the same result in co and o mode."""
    net, m0 = space.net, space.m0
    checked = 0
    for s in space.states:
        for t in sorted(net.transitions):
            checked += 1
            bt, co, o = (
                bt_enabled(net, s, t),
                co_enabled(net, s, t),
                o_enabled(net, s, t),
            )
            if bt and not co:
                return Report(
                    "inclusions", False,
                    f"{t} bt-enabled but not co-enabled at {_fmt_state(s)}", checked,
                )
            if co and not o:
                return Report(
                    "inclusions", False,
                    f"{t} co-enabled but not o-enabled at {_fmt_state(s)}", checked,
                )
            if co and space.mode != "o":
                got_co = fire_reverse_btco(net, s, t)
                got_o = fire_reverse_o(net, m0, s, t)
                if got_co != got_o:
                    return Report(
                        "inclusions", False,
                        f"{t}: co and o reversal disagree at {_fmt_state(s)}", checked,
                    )
    return Report("inclusions", True, "", checked)


def check_homes(space: StateSpace) -> Report:
    """Every component sits either at its initial place (no surviving
    transition touched it) or in an out-place of its last transition that
    actually mentions part of it."""
    net, m0 = space.net, space.m0
    checked = 0
    for s in space.states:
        for p in sorted(s.marking.places()):
            for comp in components(s.marking[p]):
                checked += 1
                t = last_transition(net, comp, s.history)
                if t is None:
                    if not (comp.bases <= m0[p].bases and comp.bonds <= m0[p].bonds):
                        return Report(
                            "homes", False,
                            f"untouched component {sorted(comp.bases)} away from home at {_fmt_state(s)}",
                            checked,
                        )
                else:
                    lab = net.out_label(t, p)
                    touched = bool(comp.bases & lab.bases) or bool(comp.bonds & lab.bonds)
                    if p not in net.postset(t) or not touched:
                        return Report(
                            "homes", False,
                            f"component {sorted(comp.bases)} not at an out-place of {t} at {_fmt_state(s)}",
                            checked,
                        )
    return Report("homes", True, "", checked)


def check_o_literal(space: StateSpace) -> Report:
    """The global-relocation o-reversal matches its place-by-place
    formulation on every reachable state."""
    net, m0 = space.net, space.m0
    checked = 0
    for s in space.states:
        for t in sorted(net.transitions):
            if not o_enabled(net, s, t):
                continue
            checked += 1
            got = fire_reverse_o(net, m0, s, t).marking
            want = o_reverse_literal(net, m0, s, t)
            if got != want:
                return Report(
                    "o-literal", False,
                    f"~{t}:o differs from the local formulation at {_fmt_state(s)}",
                    checked,
                )
    return Report("o-literal", True, "", checked)


PROPERTIES: dict[str, tuple[tuple[str, ...], Callable[[StateSpace], Report]]] = {
    "preservation": (MODES, check_preservation),
    "loop": (("bt", "co"), check_loop),
    "prop4": (("forward", "bt", "co"), check_prop4),
    "inclusions": (MODES, check_inclusions),
    "homes": (MODES, check_homes),
    "o-literal": (MODES, check_o_literal),
}


def check_property(space: StateSpace, prop: str) -> Report:
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; know {sorted(PROPERTIES)}")
    modes, fn = PROPERTIES[prop]
    if space.mode not in modes:
        raise ValueError(f"property {prop!r} needs a space of mode {modes}")
    return fn(space)


### trace enumeration and the two theorems

def enumerate_traces(
    net: Net, m0: Marking, mode: str, max_len: int
) -> list[tuple[tuple[Action, ...], State]]:
    """All executable action sequences up to max_len, with final states
    (real keys, not canonicalized), in lexicographic order."""
    actions = mode_actions(net, mode)
    out: list[tuple[tuple[Action, ...], State]] = []

    def walk(prefix: tuple[Action, ...], state: State) -> None:
        out.append((prefix, state))
        if len(prefix) == max_len:
            return
        for a in actions:
            if action_enabled(net, state, a):
                walk(prefix + (a,), step(net, m0, state, a))

    walk((), initial_state(net, m0))
    return out


def _trace_signature(state: State) -> tuple:
    return (
        state.marking,
        frozenset(t for t, k in state.history.items() if k is not None),
    )


def check_theorem_main(
    net: Net,
    m0: Marking,
    max_len: int = 4,
    budget: int = 10_000,
    cross_sample: int = 200,
) -> Report:
    """Trace equivalence agrees with (same final marking and same
    surviving transitions), over all executable forward/co trace pairs.

    Pairs with equal final signature must come out equivalent — the search
    has to actually find the rewrite. Pairs with different signatures are
    inequivalent by the procedure's sound precheck; a deterministic sample
    of them is run through the full procedure as well.
    """
    traces = enumerate_traces(net, m0, "co", max_len)
    groups: dict[tuple, list[tuple[Action, ...]]] = {}
    for trace, final in traces:
        groups.setdefault(_trace_signature(final), []).append(trace)
    ordered = sorted(groups.values(), key=lambda g: g[0])

    checked = 0
    for group in ordered:
        for t1, t2 in combinations(group, 2):
            checked += 1
            verdict = causal_equivalent(net, m0, t1, t2, budget)
            if verdict != EQUIVALENT:
                return Report(
                    "theorem-main", False,
                    f"equal-outcome pair came out {verdict}: [{','.join(map(str, t1))}] vs [{','.join(map(str, t2))}]",
                    checked,
                )
    # cross-signature pairs: the verdict is forced by the final-state
    # precheck; exercise the procedure on a deterministic sample
    sampled = 0
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            if sampled >= cross_sample:
                break
            t1, t2 = ordered[i][0], ordered[j][0]
            checked += 1
            sampled += 1
            verdict = causal_equivalent(net, m0, t1, t2, budget)
            if verdict != INEQUIVALENT:
                return Report(
                    "theorem-main", False,
                    f"different-outcome pair came out {verdict}: [{','.join(map(str, t1))}] vs [{','.join(map(str, t2))}]",
                    checked,
                )
    return Report("theorem-main", True, "", checked)


def _marking_components(marking: Marking) -> set[Contents]:
    return {
        comp for p in marking.places() for comp in components(marking[p])
    }


def check_theorem_second(net: Net, m0: Marking, max_len: int = 4) -> Report:
    """Two executions agree on a component's last transition exactly when
    their final states are component-equivalent.

    C ranges over the components of the two final states — the maximal
    connected complexes both markings hold. A strict subset of a final
    component is out of scope: a transition can relocate a complex it is
    bonded to without mentioning it, moving such a subset while leaving
    its last-transition record untouched.
    """
    traces = enumerate_traces(net, m0, "o", max_len)
    checked = 0
    for (t1, f1), (t2, f2) in combinations(traces, 2):
        shared = _marking_components(f1.marking) & _marking_components(f2.marking)
        for comp in sorted(shared, key=lambda c: sorted(c.bases)):
            checked += 1
            trace_eq = c_equiv(net, f1.history, f2.history, comp, "history")
            state_eq = c_equiv(net, f1, f2, comp, "state")
            if trace_eq != state_eq:
                return Report(
                    "theorem-second", False,
                    f"component {sorted(comp.bases)}: trace-equivalence {trace_eq} "
                    f"but state-equivalence {state_eq} "
                    f"for [{','.join(map(str, t1))}] vs [{','.join(map(str, t2))}]",
                    checked,
                )
    return Report("theorem-second", True, "", checked)


def check_theorem(
    net: Net,
    m0: Marking,
    name: str,
    max_len: int = 4,
    depth: int = 6,
    budget: int = 10_000,
) -> list[Report]:
    """Named checker bundles for the CLI: the two trace theorems, or a
    property run across every compatible exploration mode."""
    if name == "main":
        return [check_theorem_main(net, m0, max_len, budget)]
    if name == "second":
        return [check_theorem_second(net, m0, max_len)]
    if name in PROPERTIES:
        modes, fn = PROPERTIES[name]
        out = []
        for mode in modes:
            space = explore(net, m0, mode, depth)
            rep = fn(space)
            rep.subject = f"{name}[{mode}]"
            out.append(rep)
        return out
    raise ValueError(
        f"unknown theorem {name!r}; know main, second, {', '.join(sorted(PROPERTIES))}"
    )


### random well-formed nets

def generate_net(
    seed: int,
    max_bases: int = 6,
    max_places: int = 8,
    max_transitions: int = 5,
    negatives: bool = True,
) -> tuple[Net, Marking]:
    """A random validated net, deterministic in the seed.

    Construction keeps every rule by design: places are leveled so arcs
    only ever climb (acyclic), out-labels partition the consumed content
    along component boundaries plus fresh bonds, and a greedy simulated
    run guarantees at least one executable firing sequence. negatives=False
    skips negative preconditions, for properties that do not survive them.
    """
    for attempt in range(50):
        built = _try_generate(
            random.Random(f"net-{seed}-{attempt}"),
            max_bases, max_places, max_transitions, negatives,
        )
        if built is None:
            continue
        net, m0 = built
        if validate(net, m0).ok:
            return net, m0
    raise RuntimeError(f"could not generate a valid net for seed {seed}")


def _try_generate(
    rng: random.Random,
    max_bases: int,
    max_places: int,
    max_transitions: int,
    negatives: bool,
) -> Optional[tuple[Net, Marking]]:
    n_bases = rng.randint(2, max_bases)
    n_trans = rng.randint(1, max_transitions)
    bases = [chr(ord("a") + i) for i in range(n_bases)]

    # homes: group bases into initial places
    n_homes = rng.randint(1, min(len(bases), max(1, max_places - n_trans)))
    homes: dict[str, list[str]] = {f"p{i}": [] for i in range(n_homes)}
    for i, b in enumerate(bases):
        homes[f"p{i % n_homes}"].append(b)
    level = {p: 0 for p in homes}
    current: dict[str, Contents] = {
        p: Contents.make(bs) for p, bs in homes.items()
    }
    places = list(homes)
    arcs_in: dict[tuple[str, str], ArcLabel] = {}
    arcs_out: dict[tuple[str, str], ArcLabel] = {}
    existing_bonds: set[Bond] = set()

    for ti in range(n_trans):
        t = f"t{ti}"
        # pick 1..3 whole components from the current marking
        pool = [
            (p, comp)
            for p in sorted(current)
            for comp in components(current[p])
        ]
        if not pool:
            return None
        picks_n = rng.randint(1, min(3, len(pool)))
        picks = rng.sample(pool, picks_n)

        # in-labels: full listing of each picked component, grouped by place
        in_by_place: dict[str, Contents] = {}
        for p, comp in picks:
            in_by_place[p] = in_by_place.get(p, EMPTY_CONTENTS).union(comp)
        max_in_level = max(level[p] for p in in_by_place)

        # out-groups: partition of the picked components
        n_groups = rng.randint(1, len(picks))
        group_of = [rng.randrange(n_groups) for _ in picks]
        if len(set(group_of)) != n_groups:
            n_groups = len(set(group_of))
            remap = {g: i for i, g in enumerate(sorted(set(group_of)))}
            group_of = [remap[g] for g in group_of]
        grouped: list[Contents] = [EMPTY_CONTENTS] * n_groups
        for (p, comp), g in zip(picks, group_of):
            grouped[g] = grouped[g].union(comp)

        # a destination place per group: reuse a strictly higher place or mint one
        out_by_place: dict[str, Contents] = {}
        for g, content in enumerate(grouped):
            reusable = sorted(
                p for p in places if level[p] > max_in_level and p not in out_by_place
            )
            if reusable and (rng.random() < 0.3 or len(places) >= max_places):
                dest = rng.choice(reusable)
            elif len(places) < max_places:
                dest = f"q{len(places)}"
                places.append(dest)
                level[dest] = max_in_level + 1
                current[dest] = EMPTY_CONTENTS
            else:
                return None
            out_by_place[dest] = content

        # fresh bonds inside one out-group become the transition's effect
        for dest in sorted(out_by_place):
            content = out_by_place[dest]
            candidates = sorted(
                Bond(x, y)
                for x, y in combinations(sorted(content.bases), 2)
                if Bond(x, y) not in content.bonds and Bond(x, y) not in existing_bonds
            )
            for bond in rng.sample(candidates, min(len(candidates), rng.randint(0, 2))):
                content = Contents(content.bases, content.bonds | {bond})
                existing_bonds.add(bond)
            out_by_place[dest] = content

        # optional negative base on one in-arc, absent there right now
        neg_by_place: dict[str, frozenset[str]] = {}
        if negatives and rng.random() < 0.3:
            p = rng.choice(sorted(in_by_place))
            absent = sorted(
                b for b in bases
                if b not in current[p].bases and b not in in_by_place[p].bases
            )
            if absent:
                neg_by_place[p] = frozenset({rng.choice(absent)})

        for p, content in in_by_place.items():
            arcs_in[(p, t)] = ArcLabel(
                content.bases, content.bonds, neg_by_place.get(p, frozenset())
            )
        for p, content in out_by_place.items():
            arcs_out[(t, p)] = ArcLabel(content.bases, content.bonds)

        # simulate the firing so later transitions see live contents
        for p in in_by_place:
            current[p] = current[p].difference(in_by_place[p])
        for p, content in out_by_place.items():
            current[p] = current[p].union(content)

    net = Net(
        name=f"gen{rng.getrandbits(16)}",
        bases=frozenset(bases),
        places=frozenset(places),
        transitions=frozenset(f"t{i}" for i in range(n_trans)),
        arcs_in=arcs_in,
        arcs_out=arcs_out,
    )
    m0 = Marking.make({p: Contents.make(bs) for p, bs in homes.items()}, net.places)
    return net, m0
