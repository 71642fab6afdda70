from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from src.floyd.errors import InvalidAddress, InvalidConfig
from src.floyd.tree_core import (
    INFINITE,
    AxisCoordinate,
    BoundaryAddress,
    EdgeInterior,
    EdgeRef,
    TreeConfig,
    VertexAddress,
    boundary_lcp_depth,
    canonical_boundary,
    combinatorial_distance,
    from_axis,
    geodesic,
    in_cone,
    lcp_depth,
    ray_prefix,
    to_axis,
)


def ball_graph(tree: TreeConfig, depth: int) -> nx.Graph:
    graph = nx.Graph()
    for v in tree.vertices(depth):
        graph.add_node(v)
        if not v.is_root:
            graph.add_edge(v, v.parent)
    return graph


# -------- Адреса --------
@pytest.mark.parametrize("n", [0, 1, 2])
def test_tree_needs_valency_three(n):
    with pytest.raises(InvalidConfig):
        TreeConfig(n)


@pytest.mark.parametrize("letters", [(3,), (0, 2), (-1,), (1, 0, 5)])
def test_letter_constraints(letters):
    with pytest.raises(InvalidAddress):
        VertexAddress(letters, 3)


def test_ball_size_matches_enumeration(t3):
    for depth in range(6):
        assert len(list(t3.vertices(depth))) == t3.ball_size(depth)
    assert t3.ball_size(2) == 10
    assert TreeConfig(4).ball_size(1) == 5


def test_vertices_are_lexicographic(t3):
    words = [v.letters for v in t3.vertices(3)]
    assert words == sorted(words)


def test_neighbors(t3):
    assert t3.neighbors(t3.root) == [t3.vertex(0), t3.vertex(1), t3.vertex(2)]
    assert t3.neighbors(t3.vertex(2)) == [t3.root, t3.vertex(2, 0), t3.vertex(2, 1)]


def test_edge_ref(t3):
    edge = EdgeRef(t3.vertex(0, 1))
    assert edge.parent == t3.vertex(0)
    assert edge.depth == 1
    with pytest.raises(InvalidAddress):
        EdgeRef(t3.root)


@pytest.mark.parametrize("t", [Fraction(0), Fraction(1), Fraction(3, 2)])
def test_edge_interior_parameter(t3, t):
    with pytest.raises(InvalidAddress):
        EdgeInterior(EdgeRef(t3.vertex(0)), t)


# -------- Комбинаторное расстояние --------
def test_lcp_examples(t3):
    assert lcp_depth(t3.root, t3.vertex(1, 0)) == 0
    assert lcp_depth(t3.vertex(0, 1, 1), t3.vertex(0, 1, 0)) == 2
    assert combinatorial_distance(t3.vertex(0), t3.vertex(1)) == 2
    assert combinatorial_distance(t3.vertex(0, 1), t3.vertex(0, 0, 1)) == 3


def test_combinatorial_distance_matches_bfs(t3):
    graph = ball_graph(t3, 4)
    oracle = dict(nx.all_pairs_shortest_path_length(graph))
    for u in graph.nodes:
        for v in graph.nodes:
            assert combinatorial_distance(u, v) == oracle[u][v]


def test_distance_is_a_metric_on_depth_five(t3):
    vertices = list(t3.vertices(5))
    assert len(vertices) == 94
    dist = [[combinatorial_distance(u, v) for v in vertices] for u in vertices]
    size = len(vertices)
    for i in range(size):
        for j in range(size):
            assert dist[i][j] == dist[j][i]
            assert (dist[i][j] == 0) == (i == j)
            assert all(dist[i][j] <= dist[i][k] + dist[k][j] for k in range(size))


def test_mismatched_valency(t3):
    with pytest.raises(InvalidAddress):
        lcp_depth(t3.vertex(0), TreeConfig(4).vertex(0))


def test_geodesic_examples(t3):
    assert geodesic(t3.root, t3.root) == [t3.root]
    assert geodesic(t3.vertex(0), t3.vertex(1)) == [t3.vertex(0), t3.root, t3.vertex(1)]
    assert geodesic(t3.vertex(0, 1), t3.vertex(0, 0)) == [t3.vertex(0, 1), t3.vertex(0), t3.vertex(0, 0)]


def test_geodesic_properties(t3):
    graph = ball_graph(t3, 3)
    for u, v in combinations(list(t3.vertices(3)), 2):
        path = geodesic(u, v)
        assert len(path) == combinatorial_distance(u, v) + 1
        assert all(graph.has_edge(a, b) for a, b in zip(path, path[1:]))
        assert list(reversed(path)) == geodesic(v, u)


# -------- Граница --------
@pytest.mark.parametrize(
    "pre, per, canon_pre, canon_per",
    [
        ((0,), (0,), (), (0,)),
        ((), (0, 0), (), (0,)),
        ((0, 1), (1, 1), (0,), (1,)),
        ((1, 0), (1, 0), (), (1, 0)),
        ((2,), (0,), (2,), (0,)),
    ],
)
def test_canonical_boundary(t3, pre, per, canon_pre, canon_per):
    point = canonical_boundary(t3, pre, per)
    assert (point.preperiod, point.period) == (canon_pre, canon_per)
    assert point.word(10) == tuple(
        (pre + per * 10)[i] for i in range(10)
    )
    assert canonical_boundary(t3, point.preperiod, point.period) == point


def test_boundary_letter_constraints(t3):
    with pytest.raises(InvalidAddress):
        t3.boundary((), ())
    with pytest.raises(InvalidAddress):
        t3.boundary((0,), (2,))


def test_ray_prefix(t3):
    zero = t3.boundary((), (0,))
    assert ray_prefix(zero, 0) == t3.root
    assert ray_prefix(zero, 3) == t3.vertex(0, 0, 0)
    assert ray_prefix(t3.boundary((1,), (0,)), 2) == t3.vertex(1, 0)
    for point in t3.boundary_points(1, 2):
        for K in range(6):
            assert ray_prefix(point, K).is_prefix_of(ray_prefix(point, K + 1))


def test_boundary_lcp_depth(t3):
    zero = t3.boundary((), (0,))
    assert boundary_lcp_depth(zero, t3.boundary((1,), (0,))) == 0
    assert boundary_lcp_depth(zero, zero) is INFINITE
    assert boundary_lcp_depth(zero, t3.boundary((0, 1), (1,))) == 1


def test_boundary_lcp_depth_against_words(t3):
    points = t3.boundary_points(2, 2)
    for p, q in combinations(points, 2):
        L = boundary_lcp_depth(p, q)
        assert p.word(L) == q.word(L)
        assert p.letter(L) != q.letter(L)


def test_boundary_point_enumeration(t3):
    points = t3.boundary_points(1, 2)
    assert len(points) == 12
    assert len(set(points)) == 12
    assert points[0] == t3.boundary((), (0,))
    assert all(len(p.preperiod) <= 1 and len(p.period) <= 2 for p in points)


def test_in_cone(t3):
    p = t3.boundary((0, 1), (0,))
    assert in_cone(t3.root, p)
    assert in_cone(t3.vertex(0, 1, 0), p)
    assert not in_cone(t3.vertex(0, 0), p)


# -------- Координаты вдоль оси --------
@pytest.mark.parametrize(
    "letters, m, departure",
    [
        ((), 0, ()),
        ((0,), 1, ()),
        ((1,), -1, ()),
        ((0, 0), 2, ()),
        ((1, 0, 0), -3, ()),
        ((2,), 0, (0,)),
        ((0, 1), 1, (0,)),
        ((1, 0, 1, 1), -2, (0, 1)),
    ],
)
def test_axis_coordinates(t3, letters, m, departure):
    c = to_axis(t3.vertex(*letters))
    assert (c.m, c.departure) == (m, departure)
    assert from_axis(c) == t3.vertex(*letters)


@pytest.mark.parametrize("n", [3, 4])
def test_axis_coordinates_are_a_bijection(n):
    tree = TreeConfig(n)
    seen = set()
    for v in tree.vertices(6 if n == 3 else 4):
        c = to_axis(v)
        assert from_axis(c) == v
        seen.add(c)
    assert len(seen) == tree.ball_size(6 if n == 3 else 4)


def test_from_axis_then_to_axis(t3):
    for m in range(-6, 7):
        for departure in [(), (0,), (0, 1), (0, 0, 1)]:
            c = AxisCoordinate(m, departure, 3)
            assert to_axis(from_axis(c)) == c


def test_departure_constraints():
    with pytest.raises(InvalidAddress):
        AxisCoordinate(0, (1,), 3)


def test_boundary_str(t3):
    assert str(t3.boundary((0, 1), (1, 1))) == "b:0;1"
    assert str(BoundaryAddress((), (0,), 3)) == "b:;0"
    assert str(t3.vertex()) == "v:"
