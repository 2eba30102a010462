"""Plane trivalent trees dual to triangulations of a decorated polygon.

The polygon has vertices V_0 .. V_m indexed clockwise.  A triangulation is
stored as its set of diagonals; the dual tree has one internal vertex per
triangle, one internal edge per diagonal and one external edge per polygon
side.  The complement regions of the tree correspond to the polygon
vertices, so every tree edge separates two vertex labels (V_-, V_+), with
V_- before V_+ in the clockwise order for external edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class DecoratedPolygon:
    """Cyclic vertex decorations V_0..V_m plus one slot per side V_i V_{i+1}."""

    vertex_labels: tuple
    side_slots: tuple = None

    def __post_init__(self):
        labels = tuple(self.vertex_labels)
        object.__setattr__(self, "vertex_labels", labels)
        slots = self.side_slots
        if slots is None:
            slots = tuple(range(len(labels)))
        object.__setattr__(self, "side_slots", tuple(slots))
        if len(self.side_slots) != len(labels):
            raise ValueError("need one side slot per polygon side")

    @property
    def n(self) -> int:
        return len(self.vertex_labels)

    @property
    def m(self) -> int:
        return self.n - 1

    def rotated(self, r: int) -> "DecoratedPolygon":
        n = self.n
        return DecoratedPolygon(
            tuple(self.vertex_labels[(i + r) % n] for i in range(n)),
            tuple(self.side_slots[(i + r) % n] for i in range(n)),
        )


@dataclass(frozen=True)
class PlaneTree:
    """Dual tree of one triangulation of an n-gon.

    * triangles: sorted tuple of vertex triples (i, j, k), i < j < k; these
      are the internal vertices of the tree;
    * diagonals: sorted tuple of chords (u, v), u < v; the internal edges;
    * sides: tuple of polygon sides (i, i+1 mod n) in side order; the
      external edges.
    """

    n: int
    triangles: tuple
    diagonals: tuple

    @property
    def internal_vertices(self):
        return self.triangles

    def side_vertex(self, side_index: int):
        """The internal vertex (triangle) carrying polygon side side_index."""
        i = side_index
        j = (side_index + 1) % self.n
        for t in self.triangles:
            if i in t and j in t:
                return t
        raise ValueError("side %d not found" % side_index)

    def edge_triangles(self, diagonal):
        """The two triangles sharing a diagonal."""
        u, v = diagonal
        pair = [t for t in self.triangles if u in t and v in t]
        if len(pair) != 2:
            raise ValueError("diagonal %r not interior" % (diagonal,))
        return tuple(pair)


class TreeError(ValueError):
    pass


def _triangulations(lo: int, hi: int):
    """Triangulations of the fan polygon on vertices lo..hi (inclusive).

    Yields (triangles, diagonals) with the edge (lo, hi) on the boundary.
    """
    if hi - lo < 2:
        yield (), ()
        return
    for k in range(lo + 1, hi):
        for lt, ld in _triangulations(lo, k):
            for rt, rd in _triangulations(k, hi):
                tri = lt + ((lo, k, hi),) + rt
                diag = ld + rd
                if k - lo >= 2:
                    diag = diag + ((lo, k),)
                if hi - k >= 2:
                    diag = diag + ((k, hi),)
                yield tri, diag


def enumerate_trees(polygon) -> list:
    """All plane trivalent trees dual to triangulations of the polygon.

    Accepts a DecoratedPolygon or the number of polygon vertices.  Output
    order is deterministic (sorted triangle tuples).
    """
    if isinstance(polygon, DecoratedPolygon):
        n = polygon.n
    else:
        n = int(polygon)
    if n < 3:
        raise TreeError("polygon needs at least 3 vertices, got %d" % n)
    out = []
    for tri, diag in _triangulations(0, n - 1):
        out.append(PlaneTree(n, tuple(sorted(tri)), tuple(sorted(diag))))
    out.sort(key=lambda t: t.triangles)
    return out


def classify_edges(tree: PlaneTree):
    """Label every edge with its separating vertex pair (V_-, V_+).

    Returns (internal, external):
    * internal: dict diagonal -> (u, v); the diagonal (u, v) separates the
      regions at polygon vertices u and v;
    * external: dict side_index -> (i, (i+1) mod n), clockwise order.
    """
    n = tree.n
    expected_tris = n - 2
    if len(tree.triangles) != expected_tris or len(tree.diagonals) != expected_tris - 1:
        raise TreeError("malformed tree: %d triangles, %d diagonals for n=%d"
                        % (len(tree.triangles), len(tree.diagonals), n))
    internal = {d: d for d in tree.diagonals}
    external = {s: (s, (s + 1) % n) for s in range(n)}
    return internal, external


def vertex_stars(tree: PlaneTree):
    """Clockwise triple of surrounding region labels per internal vertex.

    Regions are labelled by polygon vertices; with clockwise polygon
    indexing the triangle (i, j, k), i < j < k, is surrounded clockwise by
    the regions i, j, k.  The canonical representative starts at the
    smallest label, which the sorted triple already does.
    """
    return {t: t for t in tree.triangles}


def edge_endpoint_order(edge, tree: PlaneTree):
    """Ordered internal endpoints (x_-, x_+) of an internal edge.

    For the diagonal (u, v), u < v, the clockwise cyclic order around the
    edge is (V_u, x_-, V_v, x_+) where x_- is the triangle whose apex lies
    strictly between u and v.
    """
    if edge not in tree.diagonals:
        raise TreeError("edge %r is not an internal edge" % (edge,))
    u, v = edge
    t1, t2 = tree.edge_triangles(edge)

    def apex(t):
        return next(w for w in t if w != u and w != v)

    if u < apex(t1) < v:
        return t1, t2
    return t2, t1


def rotate_tree(tree: PlaneTree, r: int) -> PlaneTree:
    """Relabel the polygon by the rotation i -> i + r (mod n)."""
    n = tree.n

    def rot(t):
        return tuple(sorted((x + r) % n for x in t))

    return PlaneTree(
        n,
        tuple(sorted(rot(t) for t in tree.triangles)),
        tuple(sorted(rot(d) for d in tree.diagonals)),
    )
