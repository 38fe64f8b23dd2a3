import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitetopo import InputError, Poset


def diamond() -> Poset:
    return Poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def fence() -> Poset:
    # a < b > c, the three-element zigzag
    return Poset("abc", [("a", "b"), ("c", "b")])


class TestConstruction:
    def test_elements_are_sorted_and_deduplicated(self):
        p = Poset(["b", "a", "b"], [("a", "b")])
        assert p.elements == ("a", "b")

    def test_relations_generate_transitive_order(self):
        p = Poset("abc", [("a", "b"), ("b", "c")])
        assert p.le("a", "c")
        assert not p.le("c", "a")

    def test_cycle_is_rejected(self):
        with pytest.raises(InputError, match="cycle"):
            Poset("ab", [("a", "b"), ("b", "a")])

    def test_unknown_element_in_relation(self):
        with pytest.raises(InputError, match="unknown element"):
            Poset("ab", [("a", "z")])

    def test_empty_name_rejected(self):
        with pytest.raises(InputError):
            Poset(["", "a"])

    def test_self_relation_is_ignored(self):
        p = Poset("ab", [("a", "a"), ("a", "b")])
        assert p.cover_pairs == frozenset({("a", "b")})

    def test_equality_ignores_relation_presentation(self):
        p = Poset("abc", [("a", "b"), ("b", "c")])
        q = Poset("abc", [("a", "b"), ("b", "c"), ("a", "c")])
        assert p == q
        assert hash(p) == hash(q)


class TestOrderQueries:
    def test_le_lt_comparable(self):
        p = diamond()
        assert p.le("a", "d") and p.lt("a", "d")
        assert p.le("b", "b") and not p.lt("b", "b")
        assert not p.comparable("b", "c")

    def test_cover_pairs_are_transitive_reduction(self):
        p = diamond()
        assert set(p.cover_pairs) == {("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")}
        assert not p.covers("a", "d")
        assert p.covers("a", "b")

    def test_cover_neighbours(self):
        p = diamond()
        assert p.cover_successors("a") == ("b", "c")
        assert p.cover_predecessors("d") == ("b", "c")

    def test_min_max(self):
        p = fence()
        assert p.minimal_elements() == ("a", "c")
        assert p.maximal_elements() == ("b",)

    def test_down_up_sets(self):
        p = diamond()
        assert set(p.down_set("b")) == {"a", "b"}
        assert set(p.up_set("b")) == {"b", "d"}
        assert set(p.punctured_down("d")) == {"a", "b", "c"}
        assert set(p.punctured_up("a")) == {"b", "c", "d"}

    def test_closure_and_open_hull(self):
        p = diamond()
        assert set(p.closure(["b"])) == {"b", "d"}
        assert set(p.open_hull(["b", "c"])) == {"a", "b", "c"}

    def test_containment_protocol(self):
        p = diamond()
        assert "a" in p and "z" not in p
        assert len(p) == 4
        assert list(p) == ["a", "b", "c", "d"]


class TestSubstructures:
    def test_induced_preserves_order(self):
        p = diamond()
        q = p.induced(["a", "d"])
        assert q.le("a", "d")
        assert q.cover_pairs == frozenset({("a", "d")})

    def test_opposite_swaps_order(self):
        p = diamond()
        op = p.opposite()
        assert op.le("d", "a")
        assert op.opposite() == p

    def test_connected_components(self):
        p = Poset("abcd", [("a", "b"), ("c", "d")])
        comps = p.connected_components()
        assert sorted(sorted(c.members) for c in comps) == [["a", "b"], ["c", "d"]]
        assert not p.is_connected()
        assert diamond().is_connected()


class TestElementSet:
    def test_set_algebra(self):
        p = diamond()
        s = p.subset(["a", "b"])
        t = p.subset(["b", "c"])
        assert set(s.union(t)) == {"a", "b", "c"}
        assert set(s.intersection(t)) == {"b"}
        assert set(s.difference(t)) == {"a"}

    def test_down_up_predicates(self):
        p = diamond()
        assert p.subset(["a", "b"]).is_down_set()
        assert not p.subset(["b"]).is_down_set()
        assert p.subset(["b", "d"]).is_up_set()

    def test_maximum_minimum(self):
        p = diamond()
        assert p.down_set("d").maximum() == "d"
        assert p.down_set("d").minimum() == "a"
        assert p.subset(["b", "c"]).maximum() is None
        assert p.subset([]).maximum() is None

    def test_cross_poset_mix_rejected(self):
        s = diamond().subset(["a"])
        t = fence().subset(["a"])
        with pytest.raises(InputError):
            s.union(t)

    def test_induced_round_trip(self):
        p = diamond()
        q = p.subset(["a", "b", "d"]).induced()
        assert q.elements == ("a", "b", "d")
        assert q.le("a", "d")


# -- randomized order laws ----------------------------------------------------


@st.composite
def posets(draw, max_size: int = 7) -> Poset:
    n = draw(st.integers(min_value=1, max_value=max_size))
    names = [f"e{i}" for i in range(n)]
    pairs = draw(
        st.sets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda ij: ij[0] < ij[1]),
            max_size=3 * n,
        )
    )
    return Poset(names, [(names[i], names[j]) for i, j in pairs])


@given(posets())
def test_order_axioms(p: Poset):
    for a in p.elements:
        assert p.le(a, a)
        for b in p.elements:
            if p.le(a, b) and p.le(b, a):
                assert a == b
            for c in p.elements:
                if p.le(a, b) and p.le(b, c):
                    assert p.le(a, c)


@given(posets())
def test_linear_extension_is_order_preserving(p: Poset):
    ext = p.linear_extension()
    assert sorted(ext) == list(p.elements)
    pos = {e: i for i, e in enumerate(ext)}
    for a in p.elements:
        for b in p.elements:
            if p.lt(a, b):
                assert pos[a] < pos[b]


@given(posets())
def test_opposite_reverses_le(p: Poset):
    op = p.opposite()
    for a in p.elements:
        for b in p.elements:
            assert p.le(a, b) == op.le(b, a)


@given(posets(), st.data())
def test_closure_smallest_up_set(p: Poset, data):
    members = data.draw(st.sets(st.sampled_from(p.elements)))
    cl = p.closure(members)
    assert cl.is_up_set()
    assert set(members) <= set(cl)
    # minimality: dropping any added element breaks up-closure or containment
    for e in set(cl) - set(members):
        smaller = cl.difference(p.subset([e]))
        assert not smaller.is_up_set() or not set(members) <= set(smaller)


@given(posets(), st.data())
def test_open_hull_is_closure_in_opposite(p: Poset, data):
    members = data.draw(st.sets(st.sampled_from(p.elements)))
    hull = p.open_hull(members)
    assert hull.is_down_set()
    assert set(hull) == set(p.opposite().closure(members))


@given(posets())
def test_components_partition(p: Poset):
    comps = p.connected_components()
    seen: set[str] = set()
    for c in comps:
        assert c.members
        assert not (seen & set(c))
        seen |= set(c)
    assert seen == set(p.elements)


@given(posets())
def test_cover_pairs_regenerate_poset(p: Poset):
    assert Poset(p.elements, p.cover_pairs) == p
