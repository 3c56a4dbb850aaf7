"""Shared net builders for the test suite.

These mirror the bundled .rpn files; the DSL tests assert that parsing
those files yields exactly these structures.
"""

from __future__ import annotations

from rpn.model import ArcLabel, Bond, Contents, Marking, Net


def label(bases=(), bonds=(), neg_bases=(), neg_bonds=()) -> ArcLabel:
    return ArcLabel.make(bases, bonds, neg_bases, neg_bonds)


def contents(bases=(), bonds=()) -> Contents:
    return Contents.make(bases, bonds)


def marking(net: Net, **places) -> Marking:
    dist = {p: contents(*spec) if isinstance(spec, tuple) else contents(spec) for p, spec in places.items()}
    return Marking.make(dist, net.places)


def build_net(name, bases, places, transitions, arcs_in, arcs_out) -> Net:
    return Net(
        name=name,
        bases=frozenset(bases),
        places=frozenset(places),
        transitions=frozenset(transitions),
        arcs_in={k: v for k, v in arcs_in.items()},
        arcs_out={k: v for k, v in arcs_out.items()},
    )


def catalysis_net() -> tuple[Net, Marking]:
    """Catalyst c helps bind a to b: t1 bonds a-c, t2 bonds a-b."""
    net = build_net(
        "catalysis",
        bases="abc",
        places=["u", "v", "w", "x", "y"],
        transitions=["t1", "t2"],
        arcs_in={
            ("u", "t1"): label("c"),
            ("v", "t1"): label("a"),
            ("x", "t2"): label("a"),
            ("w", "t2"): label("b"),
        },
        arcs_out={
            ("t1", "x"): label("ac", [("a", "c")]),
            ("t2", "y"): label("ab", [("a", "b")]),
        },
    )
    return net, marking(net, u="c", v="a", w="b")


def assembly_net() -> tuple[Net, Marking]:
    """Two-stage assembly: t1 bonds a-b, t2 extends with b-c."""
    net = build_net(
        "assembly",
        bases="abc",
        places=["u", "v", "w", "x", "y"],
        transitions=["t1", "t2"],
        arcs_in={
            ("u", "t1"): label("a"),
            ("v", "t1"): label("b"),
            ("x", "t2"): label("b"),
            ("w", "t2"): label("c"),
        },
        arcs_out={
            ("t1", "x"): label("ab", [("a", "b")]),
            ("t2", "y"): label("bc", [("b", "c")]),
        },
    )
    return net, marking(net, u="a", v="b", w="c")


def parallel_net() -> tuple[Net, Marking]:
    """Independent t1 and t2 feed t3, which joins their products."""
    net = build_net(
        "parallel",
        bases="abcd",
        places=["u1", "u2", "u3", "u4", "x", "y", "z"],
        transitions=["t1", "t2", "t3"],
        arcs_in={
            ("u1", "t1"): label("a"),
            ("u2", "t1"): label("b"),
            ("u3", "t2"): label("c"),
            ("u4", "t2"): label("d"),
            ("x", "t3"): label("b"),
            ("y", "t3"): label("c"),
        },
        arcs_out={
            ("t1", "x"): label("ab", [("a", "b")]),
            ("t2", "y"): label("cd", [("c", "d")]),
            ("t3", "z"): label("bc", [("b", "c")]),
        },
    )
    return net, marking(net, u1="a", u2="b", u3="c", u4="d")


def polymer_net() -> tuple[Net, Marking]:
    """Chain growth a-b, b-c, then d-a closes onto the far end."""
    net = build_net(
        "polymer",
        bases="abcd",
        places=["ua", "ub", "uc", "ud", "x", "y", "z"],
        transitions=["t1", "t2", "t3"],
        arcs_in={
            ("ua", "t1"): label("a"),
            ("ub", "t1"): label("b"),
            ("x", "t2"): label("b"),
            ("uc", "t2"): label("c"),
            ("y", "t3"): label("a"),
            ("ud", "t3"): label("d"),
        },
        arcs_out={
            ("t1", "x"): label("ab", [("a", "b")]),
            ("t2", "y"): label("bc", [("b", "c")]),
            ("t3", "z"): label("ad", [("d", "a")]),
        },
    )
    return net, marking(net, ua="a", ub="b", uc="c", ud="d")


def transaction_net() -> tuple[Net, Marking]:
    """Transaction with success path s, failure loop f1;f2, and a
    compensation c that requires the agent a to be gone."""
    net = build_net(
        "transaction",
        bases=["i", "a", "s", "f", "c"],
        places=["pi", "pa", "ps", "pf", "pc", "v", "vs", "w", "u", "z"],
        transitions=["a", "s", "f1", "f2", "c"],
        arcs_in={
            ("pi", "a"): label("i"),
            ("pa", "a"): label("a"),
            ("v", "s"): label("a"),
            ("ps", "s"): label("s"),
            ("v", "f1"): label("a"),
            ("pf", "f1"): label("f"),
            ("w", "f2"): label(["i", "f"]),
            ("u", "c"): label("i", neg_bases="a"),
            ("pc", "c"): label("c"),
        },
        arcs_out={
            ("a", "v"): label(["i", "a"], [("i", "a")]),
            ("s", "vs"): label(["a", "s"], [("a", "s")]),
            ("f1", "w"): label(["a", "f"], [("a", "f")]),
            ("f2", "u"): label(["i", "f"], [("i", "f")]),
            ("c", "z"): label(["i", "c"], [("i", "c")]),
        },
    )
    return net, marking(net, pi="i", pa="a", ps="s", pf="f", pc="c")


ALL_NETS = {
    "catalysis": catalysis_net,
    "assembly": assembly_net,
    "parallel": parallel_net,
    "polymer": polymer_net,
    "transaction": transaction_net,
}
