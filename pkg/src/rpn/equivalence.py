"""Concurrency of actions and the equivalence relations over traces,
histories, markings, and states.

Trace equivalence is the closure of two rewrites: swapping adjacent
concurrent actions and cancelling an action against its own inverse. The
decision procedure is a bounded bidirectional search over executable
traces; it answers "inequivalent" only on the sound shortcut (different
final marking or different surviving transitions) and "unknown" when the
budget runs out.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .connectivity import connected
from .model import Action, Contents, Marking, Net, State, forward, reverse
from .semantics import (
    NotEnabledError,
    action_enabled,
    execute,
    initial_state,
    last_transition,
    step,
)

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Trace:
    """An ordered sequence of actions, executable or not."""

    actions: tuple[Action, ...] = ()

    @staticmethod
    def of(*actions: Action) -> "Trace":
        return Trace(tuple(actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.actions)


def _as_actions(trace) -> tuple[Action, ...]:
    if isinstance(trace, Trace):
        return trace.actions
    return tuple(trace)


def concurrent_at(net: Net, s: State, m0: Marking, a1: Action, a2: Action) -> bool:
    """Local diamond: each action stays enabled after the other and both
    orders reach the same marking (histories may differ).

    Both actions must be enabled in s; raises NotEnabledError otherwise.
    """
    if not action_enabled(net, s, a1):
        raise NotEnabledError(a1, "concurrent_at precondition")
    if not action_enabled(net, s, a2):
        raise NotEnabledError(a2, "concurrent_at precondition")
    s1 = step(net, m0, s, a1)
    s2 = step(net, m0, s, a2)
    if not action_enabled(net, s1, a2) or not action_enabled(net, s2, a1):
        return False
    s12 = step(net, m0, s1, a2)
    s21 = step(net, m0, s2, a1)
    return s12.marking == s21.marking


def concurrent(net: Net, m0: Marking, a1: Action, a2: Action, depth: int = 6) -> bool:
    """Whether the local diamond holds at every reachable state (within
    depth) where both actions are enabled; vacuously true elsewhere.

    Reachability uses the widest discipline mentioned by either action so
    no relevant state is missed.
    """
    from .explorer import explore  # local import: explorer builds on this module

    order = {None: 0, "bt": 1, "co": 2, "o": 3}
    widest = max((a1.mode, a2.mode), key=lambda m: order[m])
    mode = widest if widest is not None else "forward"
    space = explore(net, m0, mode, depth)
    for s in space.states:
        if action_enabled(net, s, a1) and action_enabled(net, s, a2):
            if not concurrent_at(net, s, m0, a1, a2):
                return False
    return True


def history_equiv(h1, h2) -> bool:
    """Same transitions currently executed-and-not-reversed, keys ignored."""
    if set(h1) != set(h2):
        raise ValueError("histories range over different transitions")
    return all((h1[t] is None) == (h2[t] is None) for t in h1)


def _signature(state: State) -> tuple:
    present = frozenset(t for t, k in state.history.items() if k is not None)
    return (state.marking, present)


def _inverse_forms(action: Action) -> list[Action]:
    if action.is_forward:
        return [reverse(action.transition, m) for m in ("bt", "co", "o")]
    return [forward(action.transition)]


class _Side:
    """One frontier of the bidirectional search."""

    def __init__(self, start: tuple[Action, ...]):
        self.queue: deque[tuple[Action, ...]] = deque([start])
        self.seen: set[tuple[Action, ...]] = {start}


def causal_equivalent(net: Net, m0: Marking, s1, s2, budget: int = 10_000) -> str:
    """Decide trace equivalence by bounded bidirectional rewriting.

    Moves: swap adjacent actions that form a diamond at their actual
    intermediate state, delete an adjacent mutually-cancelling pair, and
    insert such a pair (up to a length cap). Cancellation is judged up
    to key renumbering — marking and executed set restored — because
    re-firing a reversed transition draws a fresh history key. Every
    candidate must itself re-execute to the shared final marking and
    executed set.
    """
    t1 = _as_actions(s1)
    t2 = _as_actions(s2)
    final1 = execute(net, m0, t1)
    final2 = execute(net, m0, t2)
    if final1.marking != final2.marking or not history_equiv(
        final1.history, final2.history
    ):
        return INEQUIVALENT
    if t1 == t2:
        return EQUIVALENT

    target_sig = _signature(final1)
    cap = max(len(t1), len(t2)) + 2
    transitions = sorted(net.transitions)
    spent = 0

    def states_along(trace: tuple[Action, ...]) -> list[State]:
        out = [initial_state(net, m0)]
        for action in trace:
            out.append(step(net, m0, out[-1], action))
        return out

    def expansions(trace: tuple[Action, ...]) -> Iterable[tuple[Action, ...]]:
        states = states_along(trace)
        sigs = [_signature(s) for s in states]
        # swaps
        for i in range(len(trace) - 1):
            a, b = trace[i], trace[i + 1]
            if a == b:
                continue
            here = states[i]
            if not action_enabled(net, here, b):
                continue
            after_b = step(net, m0, here, b)
            if not action_enabled(net, after_b, a):
                continue
            if _signature(step(net, m0, after_b, a)) != sigs[i + 2]:
                continue
            yield trace[:i] + (b, a) + trace[i + 2 :]
        # deletions of cancelling pairs
        for i in range(len(trace) - 1):
            a, b = trace[i], trace[i + 1]
            if a.transition != b.transition or a.is_forward == b.is_forward:
                continue
            if sigs[i + 2] == sigs[i]:
                yield trace[:i] + trace[i + 2 :]
        # insertions of cancelling pairs
        if len(trace) + 2 <= cap:
            for i in range(len(trace) + 1):
                here = states[i]
                for t in transitions:
                    for first in [forward(t), reverse(t, "bt"), reverse(t, "co"), reverse(t, "o")]:
                        if not action_enabled(net, here, first):
                            continue
                        mid = step(net, m0, here, first)
                        for second in _inverse_forms(first):
                            if not action_enabled(net, mid, second):
                                continue
                            if _signature(step(net, m0, mid, second)) == sigs[i]:
                                yield trace[:i] + (first, second) + trace[i:]

    def reaches_target(cand: tuple[Action, ...]) -> bool:
        try:
            return _signature(execute(net, m0, cand)) == target_sig
        except NotEnabledError:
            return False

    sides = (_Side(t1), _Side(t2))
    while sides[0].queue or sides[1].queue:
        # expand the smaller live frontier first
        side = min(
            (s for s in sides if s.queue), key=lambda s: len(s.queue)
        )
        other = sides[1] if side is sides[0] else sides[0]
        trace = side.queue.popleft()
        for cand in expansions(trace):
            if cand in side.seen or not reaches_target(cand):
                continue
            if cand in other.seen:
                return EQUIVALENT
            side.seen.add(cand)
            side.queue.append(cand)
            spent += 1
            if spent >= budget:
                return UNKNOWN
    return UNKNOWN


### equivalence relative to one component

def locate(marking: Marking, comp: Contents) -> Optional[str]:
    """The unique place wholly containing comp; None when absent entirely.

    Raises ValueError when comp is split across places or only partially
    present.
    """
    hits = []
    partial = []
    for place in marking.places():
        held = marking[place]
        if comp.bases <= held.bases and comp.bonds <= held.bonds:
            hits.append(place)
        elif comp.bases & held.bases or comp.bonds & held.bonds:
            partial.append(place)
    if len(hits) == 1 and not partial:
        return hits[0]
    if not hits and not partial:
        return None
    raise ValueError(
        f"component {sorted(comp.bases)} is split across places {sorted(hits + partial)}"
    )


def c_equiv(net: Net, item1, item2, comp: Contents, kind: str, m0: Optional[Marking] = None) -> bool:
    """Equivalence of two traces / histories / markings / states relative
    to one component: do they agree on the component's last transition
    (traces, histories), its place (markings), or both (states)?

    Trace inputs are executed from m0, which must then be provided.
    """
    if kind == "trace":
        if m0 is None:
            raise ValueError("kind='trace' needs m0 to execute the traces")
        f1 = execute(net, m0, _as_actions(item1))
        f2 = execute(net, m0, _as_actions(item2))
        return last_transition(net, comp, f1.history) == last_transition(
            net, comp, f2.history
        )
    if kind == "history":
        return last_transition(net, comp, item1) == last_transition(net, comp, item2)
    if kind == "marking":
        p1 = locate(item1, comp)
        p2 = locate(item2, comp)
        if p1 is None and p2 is None:
            raise ValueError("component absent from both markings")
        return p1 == p2 and p1 is not None
    if kind == "state":
        return c_equiv(net, item1.marking, item2.marking, comp, "marking") and c_equiv(
            net, item1.history, item2.history, comp, "history"
        )
    raise ValueError(f"unknown kind {kind!r}")


def base_components(state1: State, state2: State) -> dict[str, Contents]:
    """Per base, the intersection of its components in the two markings —
    the component universe used when comparing two executions."""
    out: dict[str, Contents] = {}
    bases = {b for p in state1.marking.places() for b in state1.marking[p].bases}
    for a in sorted(bases):
        p1 = state1.marking.place_of(a)
        p2 = state2.marking.place_of(a)
        if p1 is None or p2 is None:
            continue
        c1 = connected(a, state1.marking[p1])
        c2 = connected(a, state2.marking[p2])
        out[a] = Contents(c1.bases & c2.bases, c1.bonds & c2.bonds)
    return out
