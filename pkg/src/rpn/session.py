"""Interactive sessions: a net plus a cursor over its evolving state.

A session applies forward firings and reversals to a current state and
keeps the full action log.  It also offers tool-level undo, which
restores the exact prior state from a snapshot stack.  Undo is
bookkeeping on top of the semantics: reversing a transition is a move
*inside* the net (it consumes an entry in the history function), while
undo rewinds the session itself, log included.

Trace strings give actions a concrete syntax:

    t1            fire t1 forward
    ~t1:co        reverse t1 in causal order (bt / co / o)
    ~t1           reverse t1 in the session's default mode

Actions are comma-separated; whitespace is ignored; the empty string is
the empty trace.
"""

from dataclasses import dataclass, field

from .equivalence import Trace
from .model import MODES, Action, Marking, Net, State, forward, reverse
from .semantics import NotEnabledError, enabled_sets, initial_state, step

__all__ = [
    "EmptyUndoError",
    "Session",
    "TraceNotEnabled",
    "format_trace",
    "parse_trace",
]


class EmptyUndoError(Exception):
    """Raised by undo when there is nothing to undo."""

    def __init__(self) -> None:
        super().__init__("nothing to undo")


class TraceNotEnabled(Exception):
    """A trace stopped at an action its state did not enable.

    Carries the failing position, the action itself, and the enabled
    sets of the state it was attempted in.
    """

    def __init__(self, index: int, action: Action, enabled: dict) -> None:
        self.index = index
        self.action = action
        self.mode = action.mode if action.mode else "forward"
        self.enabled = enabled
        super().__init__(f"NOT-ENABLED at index {index}: {action}")


def parse_trace(text: str, default_mode: str = "co") -> tuple[Action, ...]:
    """Parse a comma-separated trace string into actions."""
    if default_mode not in MODES:
        raise ValueError(f"default mode must be one of {MODES}, got {default_mode!r}")
    if not text.strip():
        return ()
    actions = []
    for raw in text.split(","):
        token = raw.strip()
        if not token:
            raise ValueError("empty action in trace string")
        if token.startswith("~"):
            name, sep, mode = token[1:].partition(":")
            if not sep:
                mode = default_mode
            if mode not in MODES:
                raise ValueError(f"unknown reversal mode {mode!r} in {token!r}")
            if not name:
                raise ValueError(f"missing transition name in {token!r}")
            actions.append(reverse(name, mode))
        else:
            actions.append(forward(token))
    return tuple(actions)


def format_trace(actions) -> str:
    """Render actions back into the trace-string syntax."""
    return ",".join(str(a) for a in actions)


@dataclass
class Session:
    """A live run over one net: current state, action log, undo stack."""

    net: Net
    m0: Marking
    current: State
    log: Trace = Trace()
    _undo: list = field(default_factory=list, repr=False)

    @classmethod
    def open(cls, net: Net, m0: Marking) -> "Session":
        return cls(net=net, m0=m0, current=initial_state(net, m0))

    ### mutations — each one is a single undoable step

    def apply(self, action: Action) -> State:
        """Apply one action to the current state; undoable."""
        if action.transition not in self.net.transitions:
            raise NotEnabledError(action, "unknown transition")
        nxt = step(self.net, self.m0, self.current, action)
        self._undo.append((self.current, self.log))
        self.current = nxt
        self.log = Trace(self.log.actions + (action,))
        return nxt

    def fire(self, t: str) -> State:
        return self.apply(forward(t))

    def reverse(self, t: str, mode: str) -> State:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        return self.apply(reverse(t, mode))

    def undo(self) -> State:
        """Restore the exact state and log before the last mutation."""
        if not self._undo:
            raise EmptyUndoError()
        self.current, self.log = self._undo.pop()
        return self.current

    def reset(self) -> State:
        """Return to the initial state; undoable like any mutation."""
        self._undo.append((self.current, self.log))
        self.current = initial_state(self.net, self.m0)
        self.log = Trace()
        return self.current

    ### views

    def enabled(self) -> dict:
        return enabled_sets(self.net, self.current)

    def can_undo(self) -> bool:
        return bool(self._undo)


def run_trace(session: Session, spec: str, default_mode: str = "co") -> Session:
    """Apply a trace string to the session, action by action.

    On a disabled action, raises TraceNotEnabled with the failing index
    and the enabled sets at that point; actions before it stay applied
    (each is individually undoable).
    """
    for index, action in enumerate(parse_trace(spec, default_mode)):
        try:
            session.apply(action)
        except NotEnabledError:
            raise TraceNotEnabled(index, action, session.enabled()) from None
    return session
