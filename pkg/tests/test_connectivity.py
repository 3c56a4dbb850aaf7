"""Component computation, checked against a brute-force oracle."""

from hypothesis import given, strategies as st

from rpn.connectivity import component_union, components, connected
from rpn.model import Bond, Contents

from helpers import contents


def brute_connected(base: str, held: Contents) -> Contents:
    """Oracle: expand reachability one adjacency sweep at a time."""
    if base not in held.bases:
        return Contents()
    reached = {base}
    while True:
        grown = set(reached)
        for bond in held.bonds:
            if bond.a in grown and bond.b in held.bases:
                grown.add(bond.b)
            if bond.b in grown and bond.a in held.bases:
                grown.add(bond.a)
        if grown == reached:
            break
        reached = grown
    bonds = frozenset(b for b in held.bonds if b.a in reached and b.b in reached)
    return Contents(frozenset(reached), bonds)


def test_connected_simple_chain():
    held = contents("abcd", [("a", "b"), ("b", "c")])
    comp = connected("a", held)
    assert comp.bases == frozenset("abc")
    assert comp.bonds == frozenset({Bond("a", "b"), Bond("b", "c")})
    assert connected("d", held).bases == frozenset("d")
    assert connected("missing", held).empty


def test_connected_ignores_dangling_bond_ends():
    # bond to a base that is not present must not pull it in
    held = Contents(frozenset("ab"), frozenset({Bond("a", "b"), Bond("b", "z")}))
    comp = connected("a", held)
    assert comp.bases == frozenset("ab")
    assert comp.bonds == frozenset({Bond("a", "b")})


def test_components_partition():
    held = contents("abcde", [("a", "b"), ("d", "e")])
    comps = components(held)
    assert sorted(sorted(c.bases) for c in comps) == [["a", "b"], ["c"], ["d", "e"]]


def test_component_union_merges():
    held = contents("abcd", [("a", "b"), ("c", "d")])
    merged = component_union({"a", "c"}, held)
    assert merged.bases == frozenset("abcd")


names = st.sampled_from("abcdefgh")


@st.composite
def random_contents(draw):
    bases = frozenset(draw(st.sets(names, max_size=6)))
    pairs = draw(
        st.sets(
            st.tuples(names, names).filter(lambda p: p[0] != p[1]),
            max_size=8,
        )
    )
    bonds = frozenset(Bond(*p) for p in pairs if set(p) <= bases)
    return Contents(bases, bonds)


@given(random_contents(), names)
def test_connected_matches_oracle(held, base):
    assert connected(base, held) == brute_connected(base, held)


@given(random_contents())
def test_components_cover_exactly(held):
    comps = components(held)
    all_bases = [b for c in comps for b in c.bases]
    assert sorted(all_bases) == sorted(held.bases)
    all_bonds = [b for c in comps for b in c.bonds]
    assert sorted(all_bonds) == sorted(held.bonds)
    for comp in comps:
        for b in comp.bases:
            assert connected(b, held) == comp
