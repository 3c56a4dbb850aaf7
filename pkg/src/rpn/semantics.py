"""Execution rules: forward firing and the three reversal disciplines.

A transition moves whole bond-components of tokens from its in-places to
its out-places and may create bonds. Reversal undoes the created bonds;
backtracking (bt) and causal-order (co) reversal also send the involved
components back to the in-places, while out-of-causal-order (o) reversal
relocates every stranded component to wherever its own last transition
put it (or to its initial place if it has none left).
"""

from __future__ import annotations

from typing import Iterable, Optional

from .connectivity import components, connected
from .model import (
    Action,
    ArcLabel,
    Contents,
    EMPTY_CONTENTS,
    Marking,
    Net,
    State,
    initial_history,
    transition_views,
)


class NotEnabledError(Exception):
    """Raised when an action is attempted in a state that does not enable it."""

    def __init__(self, action: Action, detail: str = "") -> None:
        self.action = action
        self.index: Optional[int] = None
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"{action} is not enabled{suffix}")


class HomelessComponentError(Exception):
    """A relocated component has no unique place to return to.

    Only reachable from corrupted states or nets whose initial marking
    splits a component across places; never from valid executions.
    """


def initial_state(net: Net, m0: Marking) -> State:
    return State(Marking.make(dict(m0.contents), net.places), initial_history(net.transitions))


def _touches(comp: Contents, bases: frozenset[str], bonds) -> bool:
    return bool(comp.bases & bases) or bool(comp.bonds & bonds)


def _label_in_marking(lab: ArcLabel, held: Contents) -> bool:
    return lab.bases <= held.bases and lab.bonds <= held.bonds


### enabledness

def forward_enabled(net: Net, state: State, t: str, *, heed_negatives: bool = True) -> bool:
    m = state.marking
    view = transition_views(net, t)
    for x in view.preset:
        lab = net.in_label(x, t)
        held = m[x]
        if not _label_in_marking(lab, held):
            return False
        if heed_negatives and lab.neg_bases & held.bases:
            return False
        if heed_negatives and lab.neg_bonds & held.bonds:
            return False
    # Bases headed to different out-places must not already be connected.
    outs = [(y, net.out_label(t, y)) for y in sorted(view.postset)]
    for i, (y1, lab1) in enumerate(outs):
        for y2, lab2 in outs[i + 1 :]:
            for a in lab1.bases:
                for x in view.preset:
                    if connected(a, m[x]).bases & lab2.bases:
                        return False
    # A produced bond already present in an in-place must be consumed there.
    for y, lab in outs:
        for bond in lab.bonds:
            for x in view.preset:
                if bond in m[x].bonds and bond not in net.in_label(x, t).bonds:
                    return False
    return True


def bt_enabled(net: Net, state: State, t: str) -> bool:
    """Backtracking: only the transition holding the highest key may reverse."""
    key = state.history.get(t)
    if key is None:
        return False
    return all(k is None or k <= key for k in state.history.values())


def co_enabled(net: Net, state: State, t: str) -> bool:
    """Causal order: no later transition still depends on t's tokens.

    A later dependency is any executed transition with a higher key whose
    guard touches the component around a base that t produced.
    """
    key = state.history.get(t)
    if key is None:
        return False
    m = state.marking
    for x in net.postset(t):
        for a in net.out_label(t, x).bases:
            y = m.place_of(a)
            if y is None:
                return False
            comp = connected(a, m[y])
            for t2 in net.transitions:
                k2 = state.history.get(t2)
                if k2 is None or k2 <= key:
                    continue
                guard = transition_views(net, t2).guard
                if _touches(comp, guard.bases, guard.bonds):
                    return False
    return True


def co_enabled_outplace(net: Net, state: State, t: str) -> bool:
    """Out-place formulation of co-enabledness: everything t produced is
    still sitting in t's out-places. Equivalent to co_enabled on states
    reached without out-of-causal-order reversal."""
    if state.history.get(t) is None:
        return False
    m = state.marking
    return all(
        _label_in_marking(net.out_label(t, x), m[x]) for x in net.postset(t)
    )


def o_enabled(net: Net, state: State, t: str) -> bool:
    return state.history.get(t) is not None


def action_enabled(net: Net, state: State, action: Action) -> bool:
    if action.is_forward:
        return forward_enabled(net, state, action.transition)
    if action.mode == "bt":
        return bt_enabled(net, state, action.transition)
    if action.mode == "co":
        return co_enabled(net, state, action.transition)
    return o_enabled(net, state, action.transition)


def enabled_sets(net: Net, state: State) -> dict[str, list[str]]:
    """Transitions enabled per discipline, each list sorted by name."""
    ts = sorted(net.transitions)
    return {
        "forward": [t for t in ts if forward_enabled(net, state, t)],
        "bt": [t for t in ts if bt_enabled(net, state, t)],
        "co": [t for t in ts if co_enabled(net, state, t)],
        "o": [t for t in ts if o_enabled(net, state, t)],
    }


### firing

def _next_key(history) -> int:
    return max((k for k in history.values() if k is not None), default=0) + 1


def fire_forward(net: Net, state: State, t: str) -> State:
    """Apply a forward firing (assumes forward_enabled)."""
    m = state.marking
    view = transition_views(net, t)
    updates: dict[str, Contents] = {}
    for x in view.preset:
        removed = EMPTY_CONTENTS
        for a in net.in_label(x, t).bases:
            removed = removed.union(connected(a, m[x]))
        updates[x] = m[x].difference(removed)
    for y in view.postset:
        lab = net.out_label(t, y)
        gained = Contents(lab.bases, lab.bonds)
        for a in lab.bases:
            for x in view.preset:
                gained = gained.union(connected(a, m[x]))
        base = updates.get(y, m[y])
        updates[y] = base.union(gained)
    history = dict(state.history)
    history[t] = _next_key(state.history)
    return State(m.replace(updates), history)


def fire_reverse_btco(net: Net, state: State, t: str) -> State:
    """Shared update for bt and co reversal (assumes the matching
    enabledness): produced components return to the in-places, minus the
    bonds t created."""
    m = state.marking
    view = transition_views(net, t)
    updates: dict[str, Contents] = {}
    for x in view.preset:
        gained = EMPTY_CONTENTS
        for y in view.postset:
            shared = net.in_label(x, t).bases & net.out_label(t, y).bases
            for a in shared:
                gained = gained.union(connected(a, m[y].without_bonds(view.effect)))
        updates[x] = m[x].union(gained)
    for x in view.postset:
        removed = EMPTY_CONTENTS
        for a in net.out_label(t, x).bases:
            removed = removed.union(connected(a, m[x]))
        base = updates.get(x, m[x])
        updates[x] = base.difference(removed)
    history = dict(state.history)
    history[t] = None
    return State(m.replace(updates), history)


def last_transition(net: Net, comp: Contents, history) -> Optional[str]:
    """The executed transition with the highest key whose output touches
    the component, or None when no executed transition does."""
    best: Optional[tuple[int, str]] = None
    for t in net.transitions:
        key = history.get(t)
        if key is None:
            continue
        effects = transition_views(net, t).effects
        if _touches(comp, effects.bases, effects.bonds):
            if best is None or key > best[0]:
                best = (key, t)
    return best[1] if best else None


def _initial_home(m0: Marking, comp: Contents) -> str:
    homes = {m0.place_of(a) for a in comp.bases}
    if len(homes) != 1 or None in homes:
        raise HomelessComponentError(
            f"component {sorted(comp.bases)} has no single initial place: {sorted(str(h) for h in homes)}"
        )
    (home,) = homes
    return home


def _output_home(net: Net, tlast: str, comp: Contents) -> str:
    targets = [
        x
        for x in sorted(net.postset(tlast))
        if _touches(comp, net.out_label(tlast, x).bases, net.out_label(tlast, x).bonds)
    ]
    if len(targets) != 1:
        raise HomelessComponentError(
            f"component {sorted(comp.bases)} matches out-places {targets} of {tlast}"
        )
    return targets[0]


def fire_reverse_o(net: Net, m0: Marking, state: State, t: str) -> State:
    """Out-of-causal-order reversal (assumes o_enabled): delete the bonds
    t created, then send every component back to the out-place of its own
    last surviving transition, or to its initial place if none survives."""
    view = transition_views(net, t)
    history = dict(state.history)
    history[t] = None
    placed: dict[str, Contents] = {p: EMPTY_CONTENTS for p in net.places}
    for place in sorted(net.places):
        held = state.marking[place].without_bonds(view.effect)
        for comp in components(held):
            tlast = last_transition(net, comp, history)
            if tlast is None:
                target = _initial_home(m0, comp)
            else:
                target = _output_home(net, tlast, comp)
            placed[target] = placed[target].union(comp)
    return State(Marking(placed), history)


def o_reverse_literal(net: Net, m0: Marking, state: State, t: str) -> Marking:
    """Place-by-place formulation of o-reversal, kept as a cross-check.

    Spelled exactly as a local update of each place: drop the deleted
    bonds, evict components that no longer belong, and pull in every
    component whose last transition outputs here (or whose initial place
    this is). Agrees with fire_reverse_o on reachable states.
    """
    view = transition_views(net, t)
    history = dict(state.history)
    history[t] = None
    stripped = {p: state.marking[p].without_bonds(view.effect) for p in net.places}
    pieces = [
        (p, comp, last_transition(net, comp, history))
        for p in sorted(net.places)
        for comp in components(stripped[p])
    ]
    incoming = {
        p: frozenset(t2 for t2 in net.transitions if p in net.postset(t2))
        for p in net.places
    }

    result: dict[str, Contents] = {}
    for x in net.places:
        removed = EMPTY_CONTENTS
        added = EMPTY_CONTENTS
        for p, comp, tlast in pieces:
            if p == x and any(t2 != tlast for t2 in incoming[x]):
                removed = removed.union(comp)
            if tlast is not None:
                lab = net.out_label(tlast, x)
                if _touches(comp, lab.bases, lab.bonds):
                    added = added.union(comp)
            elif comp.bases <= m0[x].bases and comp.bonds <= m0[x].bonds:
                added = added.union(comp)
        result[x] = stripped[x].difference(removed).union(added)
    return Marking(result)


### sequencing

def canonicalize_history(history) -> dict[str, Optional[int]]:
    """Rank-compress the present keys to 1..k, preserving their order."""
    present = sorted((k, t) for t, k in history.items() if k is not None)
    rank = {t: i + 1 for i, (k, t) in enumerate(present)}
    return {t: rank.get(t) for t in history}


def step(net: Net, m0: Marking, state: State, action: Action) -> State:
    """Check enabledness and apply one action."""
    if not action_enabled(net, state, action):
        raise NotEnabledError(action)
    if action.is_forward:
        return fire_forward(net, state, action.transition)
    if action.mode in ("bt", "co"):
        return fire_reverse_btco(net, state, action.transition)
    return fire_reverse_o(net, m0, state, action.transition)


def execute(
    net: Net,
    m0: Marking,
    actions: Iterable[Action],
    start: Optional[State] = None,
) -> State:
    """Run a sequence of actions from the initial state (or from `start`).

    Raises NotEnabledError with .index set to the failing position.
    """
    state = start if start is not None else initial_state(net, m0)
    for i, action in enumerate(actions):
        try:
            state = step(net, m0, state, action)
        except NotEnabledError as err:
            err.index = i
            raise
    return state
