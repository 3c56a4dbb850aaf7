"""The net description language: parser, canonical printer, state JSON.

Grammar (comments run from '#' to end of line):

    file    := "net" IDENT "{" section* "}"
    section := "bases" ":" idents ";"
             | "places" ":" idents ";"
             | "transitions" ":" idents ";"
             | "arc" IDENT "->" IDENT "{" items? "}"
             | "initial" "{" pentry ("," pentry)* "}"
    items   := item ("," item)*
    item    := "!"? IDENT ("-" IDENT)?        # base or bond, "!" negates
    pentry  := IDENT ":" "{" items? "}"       # positives only
    idents  := IDENT ("," IDENT)*

Arc direction is positional: one endpoint must be a place and the other a
transition. Parsing is followed by validation; structural rule violations
surface as InvalidNetError carrying the full report.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .model import (
    ArcLabel,
    Bond,
    Contents,
    Marking,
    Net,
    State,
    ValidationReport,
    validate,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = ("->", "{", "}", ":", ";", ",", "-", "!")


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, code: str = "SYNTAX"):
        super().__init__(f"{code} at line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.code = code


class InvalidNetError(Exception):
    """The text parsed, but the net breaks structural rules."""

    def __init__(self, report: ValidationReport):
        lines = "; ".join(str(v) for v in report.violations)
        super().__init__(f"invalid net: {lines}")
        self.report = report


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "punct" | "eof"
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            ch = line[pos]
            if ch.isspace():
                pos += 1
                continue
            m = _IDENT.match(line, pos)
            if m:
                tokens.append(_Token("ident", m.group(), lineno, pos + 1))
                pos = m.end()
                continue
            for p in _PUNCT:
                if line.startswith(p, pos):
                    tokens.append(_Token("punct", p, lineno, pos + 1))
                    pos += len(p)
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", lineno, pos + 1)
    last_line = len(text.splitlines()) or 1
    tokens.append(_Token("eof", "", last_line, 1))
    return tokens


@dataclass(frozen=True)
class _Item:
    neg: bool
    a: str
    b: Optional[str]
    line: int
    col: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, value: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            got = tok.value if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == value

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    ### grammar

    def file(self) -> tuple[Net, Marking]:
        kw = self.take("ident")
        if kw.value != "net":
            raise ParseError(f"expected 'net', found {kw.value!r}", kw.line, kw.col)
        name = self.take("ident").value
        self.take("punct", "{")

        bases: list[str] = []
        places: list[str] = []
        transitions: list[str] = []
        arcs: list[tuple[_Token, _Token, list[_Item]]] = []
        initial: dict[str, tuple[_Token, list[_Item]]] = {}

        while not self.at("}"):
            tok = self.peek()
            if tok.kind != "ident":
                raise ParseError(
                    f"expected a section, found {tok.value!r}", tok.line, tok.col
                )
            if tok.value in ("bases", "places", "transitions"):
                self.take("ident")
                self.take("punct", ":")
                names = self.idents()
                self.take("punct", ";")
                {"bases": bases, "places": places, "transitions": transitions}[
                    tok.value
                ].extend(names)
            elif tok.value == "arc":
                self.take("ident")
                src = self.take("ident")
                self.take("punct", "->")
                dst = self.take("ident")
                self.take("punct", "{")
                items = [] if self.at("}") else self.items()
                self.take("punct", "}")
                arcs.append((src, dst, items))
            elif tok.value == "initial":
                self.take("ident")
                self.take("punct", "{")
                while True:
                    place = self.take("ident")
                    self.take("punct", ":")
                    self.take("punct", "{")
                    items = [] if self.at("}") else self.items()
                    self.take("punct", "}")
                    if place.value in initial:
                        raise ParseError(
                            f"place {place.value!r} listed twice in initial",
                            place.line, place.col,
                        )
                    initial[place.value] = (place, items)
                    if not self.at(","):
                        break
                    self.take("punct", ",")
                self.take("punct", "}")
            else:
                raise ParseError(
                    f"expected a section, found {tok.value!r}", tok.line, tok.col
                )
        self.take("punct", "}")
        self.take("eof")
        return self.build(name, bases, places, transitions, arcs, initial)

    def idents(self) -> list[str]:
        names = [self.take("ident").value]
        while self.at(","):
            self.take("punct", ",")
            names.append(self.take("ident").value)
        return names

    def items(self) -> list[_Item]:
        out = [self.item()]
        while self.at(","):
            self.take("punct", ",")
            out.append(self.item())
        return out

    def item(self) -> _Item:
        neg = False
        start = self.peek()
        if self.at("!"):
            self.take("punct", "!")
            neg = True
        a = self.take("ident")
        b: Optional[str] = None
        if self.at("-"):
            self.take("punct", "-")
            b = self.take("ident").value
        return _Item(neg, a.value, b, start.line, start.col)

    ### resolution

    def build(self, name, bases, places, transitions, arcs, initial):
        base_set = frozenset(bases)
        place_set = frozenset(places)
        trans_set = frozenset(transitions)

        arcs_in: dict[tuple[str, str], ArcLabel] = {}
        arcs_out: dict[tuple[str, str], ArcLabel] = {}
        for src, dst, items in arcs:
            src_kind = self.endpoint_kind(src, place_set, trans_set)
            dst_kind = self.endpoint_kind(dst, place_set, trans_set)
            if src_kind == dst_kind:
                raise ParseError(
                    "arc must connect a place and a transition",
                    src.line, src.col,
                )
            label = self.label_of(items, base_set)
            if src_kind == "place":
                key = (src.value, dst.value)
                if key in arcs_in:
                    raise ParseError(
                        f"duplicate arc {src.value} -> {dst.value}",
                        src.line, src.col,
                    )
                arcs_in[key] = label
            else:
                key = (src.value, dst.value)
                if key in arcs_out:
                    raise ParseError(
                        f"duplicate arc {src.value} -> {dst.value}",
                        src.line, src.col,
                    )
                arcs_out[key] = label

        distribution: dict[str, Contents] = {}
        for pname, (ptok, items) in initial.items():
            if pname not in place_set:
                raise ParseError(
                    f"unknown place {pname!r} in initial", ptok.line, ptok.col,
                    code="UNKNOWN-IDENT",
                )
            held_bases: set[str] = set()
            held_bonds: set[Bond] = set()
            for it in items:
                if it.neg:
                    raise ParseError(
                        "negative items are not allowed in the initial marking",
                        it.line, it.col,
                    )
                self.check_base(it.a, base_set, it)
                if it.b is None:
                    held_bases.add(it.a)
                else:
                    self.check_base(it.b, base_set, it)
                    held_bonds.add(self.bond_of(it))
            distribution[pname] = Contents(frozenset(held_bases), frozenset(held_bonds))

        net = Net(
            name=name,
            bases=base_set,
            places=place_set,
            transitions=trans_set,
            arcs_in=arcs_in,
            arcs_out=arcs_out,
        )
        m0 = Marking.make(distribution, place_set)
        report = validate(net, m0)
        if not report.ok:
            raise InvalidNetError(report)
        return net, m0

    def endpoint_kind(self, tok: _Token, places, transitions) -> str:
        is_place = tok.value in places
        is_trans = tok.value in transitions
        if is_place and is_trans:
            raise ParseError(
                f"{tok.value!r} is declared both place and transition",
                tok.line, tok.col, code="AMBIGUOUS-IDENT",
            )
        if is_place:
            return "place"
        if is_trans:
            return "transition"
        raise ParseError(
            f"unknown identifier {tok.value!r}", tok.line, tok.col,
            code="UNKNOWN-IDENT",
        )

    def check_base(self, name: str, base_set, it: _Item) -> None:
        if name not in base_set:
            raise ParseError(
                f"unknown identifier {name!r}", it.line, it.col,
                code="UNKNOWN-IDENT",
            )

    def bond_of(self, it: _Item) -> Bond:
        try:
            return Bond(it.a, it.b)
        except ValueError:
            raise ParseError(
                "a bond needs two distinct bases", it.line, it.col
            ) from None

    def label_of(self, items: list[_Item], base_set) -> ArcLabel:
        pos_bases: set[str] = set()
        pos_bonds: set[Bond] = set()
        neg_bases: set[str] = set()
        neg_bonds: set[Bond] = set()
        for it in items:
            self.check_base(it.a, base_set, it)
            if it.b is not None:
                self.check_base(it.b, base_set, it)
                (neg_bonds if it.neg else pos_bonds).add(self.bond_of(it))
            else:
                (neg_bases if it.neg else pos_bases).add(it.a)
        return ArcLabel(
            frozenset(pos_bases), frozenset(pos_bonds),
            frozenset(neg_bases), frozenset(neg_bonds),
        )


def parse_net(text: str) -> tuple[Net, Marking]:
    """Parse and validate one net document."""
    return _Parser(text).file()


### canonical printing

def _item_strs(label: ArcLabel) -> list[str]:
    out = sorted(label.bases)
    out += [str(b) for b in sorted(label.bonds)]
    out += [f"!{a}" for a in sorted(label.neg_bases)]
    out += [f"!{b}" for b in sorted(label.neg_bonds)]
    return out


def _contents_strs(held: Contents) -> list[str]:
    return sorted(held.bases) + [str(b) for b in sorted(held.bonds)]


def print_net(net: Net, m0: Marking) -> str:
    """Canonical text for a net: sorted sections, in-arcs before out-arcs,
    empty labels and empty initial entries omitted. parse(print(·)) is the
    identity, and printing is idempotent."""
    lines = [f"net {net.name} {{"]
    for section, names in (
        ("bases", net.bases), ("places", net.places), ("transitions", net.transitions)
    ):
        if names:
            lines.append(f"  {section}: {', '.join(sorted(names))};")
    arc_lines = []
    for (p, t) in sorted(net.arcs_in):
        label = net.arcs_in[(p, t)]
        if not label.empty:
            arc_lines.append(f"  arc {p} -> {t} {{ {', '.join(_item_strs(label))} }}")
    for (t, p) in sorted(net.arcs_out):
        label = net.arcs_out[(t, p)]
        if not label.empty:
            arc_lines.append(f"  arc {t} -> {p} {{ {', '.join(_item_strs(label))} }}")
    if arc_lines:
        lines.append("")
        lines.extend(arc_lines)
    entries = [
        f"{p}: {{{', '.join(_contents_strs(m0[p]))}}}"
        for p in sorted(net.places)
        if not m0[p].empty
    ]
    if entries:
        lines.append("")
        lines.append(f"  initial {{ {', '.join(entries)} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


### state serialization

def state_dict(net: Net, state: State) -> dict:
    return {
        "marking": {
            p: {
                "bases": sorted(state.marking[p].bases),
                "bonds": sorted([b.a, b.b] for b in state.marking[p].bonds),
            }
            for p in sorted(net.places)
        },
        "history": {t: state.history.get(t) for t in sorted(net.transitions)},
    }


def state_json(net: Net, state: State) -> str:
    """Byte-stable JSON for one state: every place and transition listed,
    every set sorted."""
    return json.dumps(state_dict(net, state), indent=2, sort_keys=True)
