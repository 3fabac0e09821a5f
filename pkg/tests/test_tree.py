import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_path_length, exhaustive_sheaves
from treewave import (Edge, MetricTree, PotentialProfile, enumerate_sheaves,
                      interval, path_distance, peel, star, two_level_tree,
                      validate)
from treewave.errors import CycleDetected, NonPositiveLength, RootNotBoundary, UnknownVertex


def caterpillar():
    """g1-v1-v2-g4 chain with extra leaves g2@v1, g3@v2; root g4."""
    edges = (
        Edge("a", ("g1", "v1"), 1.5),
        Edge("b", ("v1", "g2"), 0.5),
        Edge("c", ("v1", "v2"), 2.0),
        Edge("d", ("v2", "g3"), 0.25),
        Edge("e", ("v2", "g4"), 1.0),
    )
    return validate(MetricTree(edges, ("g1", "g2", "g3", "g4"), "g4"))


def test_validate_accepts_star(star123):
    assert validate(star123) is star123
    assert len(star123.vertices) == 4
    assert star123.degree("v0") == 3


def test_validate_accepts_single_edge(single_edge):
    assert validate(single_edge) is single_edge


def test_validate_rejects_triangle():
    edges = (
        Edge("e1", ("a", "b"), 1.0),
        Edge("e2", ("b", "c"), 1.0),
        Edge("e3", ("c", "a"), 1.0),
    )
    with pytest.raises(CycleDetected):
        validate(MetricTree(edges, ("a",), "a"))


def test_validate_rejects_bad_length():
    edges = (Edge("e1", ("a", "b"), -1.0),)
    with pytest.raises(NonPositiveLength):
        validate(MetricTree(edges, ("a", "b"), "b"))


def test_validate_rejects_nonboundary_root(star123):
    with pytest.raises(RootNotBoundary):
        validate(MetricTree(star123.edges, star123.boundary, "v0"))


def test_path_distance_star(star123):
    assert path_distance(star123, "g1", "g2") == pytest.approx(3.0)
    assert path_distance(star123, "g1", "g1") == 0.0
    with pytest.raises(UnknownVertex):
        path_distance(star123, "g1", "nope")


def test_path_distance_matches_bfs_oracle():
    t = caterpillar()
    raw = [(e.ends[0], e.ends[1], e.length) for e in t.edges]
    for a in ("g1", "g2", "g3", "g4", "v1", "v2"):
        for b in ("g1", "g4", "v2"):
            assert path_distance(t, a, b) == pytest.approx(bfs_path_length(raw, a, b))


def test_sheaves_star(star123):
    sheaves = enumerate_sheaves(star123)
    assert len(sheaves) == 1
    s = sheaves[0]
    assert s.vertex == "v0"
    assert s.members == ("g1", "g2")
    assert s.stem == "e3"
    assert s.lengths == (1.0, 2.0)


def test_sheaves_single_edge(single_edge):
    assert enumerate_sheaves(single_edge) == []


def test_sheaves_match_exhaustive_oracle():
    for t in (caterpillar(), two_level_tree(), star([1.0, 2.0, 3.0, 4.0])):
        got = {s.vertex: tuple(sorted(s.members)) for s in enumerate_sheaves(t)}
        want = exhaustive_sheaves([(e.id, *e.ends) for e in t.edges], t.boundary, t.root)
        assert got == want


def test_sheaf_orientation_flips_potential():
    q = PotentialProfile.piecewise([0.3], [1.0, 2.0])
    edges = (
        Edge("e1", ("g1", "v0"), 1.0, q),   # x=0 at the boundary end
        Edge("e2", ("v0", "g2"), 1.0),
        Edge("e3", ("v0", "g3"), 1.0),
    )
    t = validate(MetricTree(edges, ("g1", "g2", "g3"), "g3"))
    s = enumerate_sheaves(t)[0]
    qs = dict(zip(s.members, s.potentials))
    # seen from v0, the piece of value 2.0 comes first
    assert qs["g1"](0.1) == pytest.approx(2.0)
    assert qs["g1"](0.9) == pytest.approx(1.0)


def test_peel_star_to_interval(star123):
    s = enumerate_sheaves(star123)[0]
    peeled = validate(peel(star123, s))
    assert len(peeled.edges) == 1
    assert peeled.boundary == ("v0", "g3")
    assert peeled.root == "g3"


def test_peel_five_edge_twice(five_edge):
    s = enumerate_sheaves(five_edge)
    assert len(s) == 1 and s[0].vertex == "v1"
    once = validate(peel(five_edge, s[0]))
    assert len(once.edges) == 3
    assert once.boundary == ("v1", "g3", "gr")
    s2 = enumerate_sheaves(once)
    assert len(s2) == 1 and s2[0].vertex == "v2"
    assert s2[0].members == ("v1", "g3")
    twice = validate(peel(once, s2[0]))
    assert len(twice.edges) == 1
    assert twice.boundary == ("v2", "gr")


def test_peel_counts_invariant():
    for t in (caterpillar(), two_level_tree(), star([1, 2, 3, 4])):
        for s in enumerate_sheaves(t):
            p = validate(peel(t, s))
            assert len(p.edges) == len(t.edges) - s.size
            assert len(p.boundary) == len(t.boundary) - s.size + 1


@st.composite
def random_trees(draw):
    """Random tree by sequential attachment; boundary = leaves."""
    n = draw(st.integers(min_value=2, max_value=9))
    lengths = draw(st.lists(st.floats(0.1, 3.0), min_size=n, max_size=n))
    parents = [draw(st.integers(0, k)) for k in range(n)]
    edges = tuple(Edge(f"e{k}", (f"v{parents[k]}", f"v{k + 1}"), lengths[k])
                  for k in range(n))
    tree = MetricTree(edges, (), "")
    inc = tree.incidence()
    leaves = tuple(v for v in tree.vertices if len(inc[v]) == 1)
    return validate(MetricTree(edges, leaves, leaves[-1]))


@given(random_trees())
@settings(max_examples=40, deadline=None)
def test_distance_metric_properties(t):
    vs = t.vertices
    a, b = vs[0], vs[-1]
    assert path_distance(t, a, b) == pytest.approx(path_distance(t, b, a))
    from treewave.tree import path_vertices
    mid = path_vertices(t, a, b)[len(path_vertices(t, a, b)) // 2]
    assert path_distance(t, a, b) == pytest.approx(
        path_distance(t, a, mid) + path_distance(t, mid, b))


@given(random_trees())
@settings(max_examples=40, deadline=None)
def test_sheaves_nonempty_property(t):
    non_root = len(t.boundary) - 1
    if len(t.edges) >= 2 and non_root >= 2:
        internal_deg2plus = all(True for _ in t.internal_vertices())
        assert internal_deg2plus
        assert len(enumerate_sheaves(t)) >= 1
