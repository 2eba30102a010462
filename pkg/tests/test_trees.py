import time

import pytest

from hodgecorr.trees import (
    DecoratedPolygon, PlaneTree, TreeError,
    enumerate_trees, classify_edges, vertex_stars, edge_endpoint_order,
    rotate_tree,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]


def test_triangle_single_tree():
    trees = enumerate_trees(3)
    assert len(trees) == 1
    t = trees[0]
    assert t.triangles == ((0, 1, 2),)
    assert t.diagonals == ()


def test_square_two_trees():
    trees = enumerate_trees(4)
    assert len(trees) == 2
    diags = sorted(t.diagonals for t in trees)
    assert diags == [(((0, 2),)), ((1, 3),)]


def test_pentagon_five_trees():
    assert len(enumerate_trees(5)) == 5


def test_catalan_counts_up_to_twelve():
    for n in range(3, 13):
        assert len(enumerate_trees(n)) == CATALAN[n - 2]


def test_counts_three_to_seven_fast():
    start = time.monotonic()
    counts = [len(enumerate_trees(n)) for n in range(3, 8)]
    assert counts == [1, 2, 5, 14, 42]
    assert time.monotonic() - start < 1.0


def test_enumeration_deterministic():
    a = enumerate_trees(7)
    b = enumerate_trees(7)
    assert a == b


def test_euler_bookkeeping():
    for n in range(3, 9):
        for t in enumerate_trees(n):
            internal, external = classify_edges(t)
            assert len(t.triangles) == len(t.diagonals) + 1
            assert len(external) == n
            assert len(internal) == n - 3
            # trivalence: each triangle meets exactly 3 edges
            for tri in t.triangles:
                inc = sum(1 for d in t.diagonals if set(d) <= set(tri))
                ext = sum(
                    1 for s in range(n)
                    if s in tri and (s + 1) % n in tri and t.side_vertex(s) == tri
                )
                assert inc + ext == 3


def test_edge_labels():
    trees = enumerate_trees(4)
    for t in trees:
        internal, external = classify_edges(t)
        assert len(internal) == 1
        assert len(external) == 4
    hexes = enumerate_trees(6)
    for t in hexes:
        internal, external = classify_edges(t)
        assert len(internal) == 3
        assert len(external) == 6
    assert external[5] == (5, 0)


def test_vertex_stars_square():
    tree = [t for t in enumerate_trees(4) if t.diagonals == ((0, 2),)][0]
    stars = vertex_stars(tree)
    assert set(stars.values()) == {(0, 1, 2), (0, 2, 3)}


def test_stars_rotate_with_polygon():
    for n in (4, 5, 6):
        for t in enumerate_trees(n):
            rt = rotate_tree(t, 1)
            rotated_stars = {tuple(sorted((x + 1) % n for x in s))
                             for s in vertex_stars(t).values()}
            assert rotated_stars == set(vertex_stars(rt).values())


def test_rotation_is_bijection_of_trees():
    for n in (4, 5, 6, 7):
        trees = enumerate_trees(n)
        for r in range(1, n):
            images = sorted(rotate_tree(t, r).triangles for t in trees)
            assert images == sorted(t.triangles for t in trees)


def test_edge_endpoint_order_square():
    tree = [t for t in enumerate_trees(4) if t.diagonals == ((0, 2),)][0]
    xm, xp = edge_endpoint_order((0, 2), tree)
    # apex 1 lies between 0 and 2
    assert xm == (0, 1, 2)
    assert xp == (0, 2, 3)


def test_edge_endpoint_order_pentagon_unique():
    for t in enumerate_trees(5):
        seen = set()
        for d in t.diagonals:
            pair = edge_endpoint_order(d, t)
            assert pair[0] != pair[1]
            seen.add(pair)
        assert len(seen) == len(t.diagonals)


def test_external_edge_rejected():
    tree = enumerate_trees(4)[0]
    with pytest.raises(TreeError):
        edge_endpoint_order((0, 1), tree)


def test_too_small_polygon():
    with pytest.raises(TreeError):
        enumerate_trees(2)


def test_side_vertex_assignment():
    tree = [t for t in enumerate_trees(4) if t.diagonals == ((0, 2),)][0]
    assert tree.side_vertex(0) == (0, 1, 2)
    assert tree.side_vertex(1) == (0, 1, 2)
    assert tree.side_vertex(2) == (0, 2, 3)
    assert tree.side_vertex(3) == (0, 2, 3)


def test_decorated_polygon_rotation():
    p = DecoratedPolygon(("A", "B", "C", "D"))
    q = p.rotated(1)
    assert q.vertex_labels == ("B", "C", "D", "A")
    assert p.m == 3
