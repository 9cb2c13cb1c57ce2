"""Stock graphs used by tests, fixtures and the CLI."""

from __future__ import annotations

from .ribbon import (BLACK, WHITE, QuadSpec, RibbonGraph, Triangulation,
                     build_graph, glue_triangulation)


def single_edge():
    g, _ = build_graph([WHITE, BLACK], [["a"], ["b"]], [("a", "b")])
    return g


def hex_torus():
    """Honeycomb fundamental domain: one white, one black, three edges.
    Zig-zag homology classes are the sides of the unit triangle."""
    rings = [[("e", 0, 0), ("e", 1, 0), ("e", 2, 0)],
             [("e", 0, 1), ("e", 1, 1), ("e", 2, 1)]]
    pairs = [(("e", i, 0), ("e", i, 1)) for i in range(3)]
    disp = {("e", 0, 0): (0, 0), ("e", 1, 0): (1, 0), ("e", 2, 0): (0, 1)}
    g, _ = build_graph([WHITE, BLACK], rings, pairs, disp)
    return g


def square_torus(width=2, height=2):
    """Square-lattice torus with checkerboard coloring; width and height must
    be even so the coloring closes up."""
    if width % 2 or height % 2:
        raise ValueError("need even dimensions for a bipartite checkerboard")
    idx = {}
    colors = []
    for y in range(height):
        for x in range(width):
            idx[(x, y)] = len(colors)
            colors.append(WHITE if (x + y) % 2 == 0 else BLACK)

    def east(x, y):
        return ("h", x, y)

    def north(x, y):
        return ("v", x, y)

    rings = []
    pairs = []
    disp = {}
    for y in range(height):
        for x in range(width):
            e = (east(x, y), 0)
            n = (north(x, y), 0)
            w = (east((x - 1) % width, y), 1)
            s = (north(x, (y - 1) % height), 1)
            rings.append([e, n, w, s])
    for y in range(height):
        for x in range(width):
            pairs.append(((east(x, y), 0), (east(x, y), 1)))
            pairs.append(((north(x, y), 0), (north(x, y), 1)))
            disp[(east(x, y), 0)] = (1, 0) if x == width - 1 else (0, 0)
            disp[(north(x, y), 0)] = (0, 1) if y == height - 1 else (0, 0)
    order = [(x, y) for y in range(height) for x in range(width)]
    assert [idx[c] for c in order] == list(range(len(order)))
    g, _ = build_graph(colors, rings, pairs, disp)
    return g


def doubled_edge_torus():
    """Torus graph with a parallel bigon: edges c and d bound a two-sided
    face, so a zig-zag repeats an edge and minimality fails."""
    rings = [[("a", 0), ("b", 0), ("c", 0), ("d", 0)],
             [("a", 1), ("b", 1), ("d", 1), ("c", 1)]]
    pairs = [(("a", 0), ("a", 1)), (("b", 0), ("b", 1)),
             (("c", 0), ("c", 1)), (("d", 0), ("d", 1))]
    disp = {("a", 0): (0, 0), ("b", 0): (1, 0),
            ("c", 0): (0, 1), ("d", 0): (0, 1)}
    g, _ = build_graph([WHITE, BLACK], rings, pairs, disp)
    return g


def quad_graph():
    """Standalone square-move pattern: whites p1, s1, p2, s2 (cyclic) around
    the quad face, black b1 carrying pendant p1 and b2 carrying p2.  Matches
    QuadSpec(0, 1, 2, 3)."""
    P1, S1, P2, S2, B1, B2 = 0, 1, 2, 3, 4, 5
    colors = [WHITE, WHITE, WHITE, WHITE, BLACK, BLACK]
    rings = [
        [("p1b1", 0)],
        [("b1s1", 1), ("s1b2", 0)],
        [("p2b2", 0)],
        [("b2s2", 1), ("s2b1", 0)],
        [("s2b1", 1), ("b1s1", 0), ("p1b1", 1)],
        [("s1b2", 1), ("b2s2", 0), ("p2b2", 1)],
    ]
    pairs = [(("p1b1", 0), ("p1b1", 1)), (("b1s1", 0), ("b1s1", 1)),
             (("s1b2", 0), ("s1b2", 1)), (("b2s2", 0), ("b2s2", 1)),
             (("s2b1", 0), ("s2b1", 1)), (("p2b2", 0), ("p2b2", 1))]
    g, sid = build_graph(colors, rings, pairs,
                         labels=["p1", "s1", "p2", "s2", "b1", "b2"])
    return g, QuadSpec(P1, S1, P2, S2)


def quad_graph_with_legs():
    """Quad pattern with a boundary leg at every white vertex, so the white
    monomial relations hold through trivialization scalars on the legs."""
    P1, S1, P2, S2, B1, B2 = 0, 1, 2, 3, 4, 5
    colors = [WHITE, WHITE, WHITE, WHITE, BLACK, BLACK]
    rings = [
        [("p1b1", 0), ("L", 0)],
        [("b1s1", 1), ("s1b2", 0), ("L", 1)],
        [("p2b2", 0), ("L", 2)],
        [("b2s2", 1), ("s2b1", 0), ("L", 3)],
        [("s2b1", 1), ("b1s1", 0), ("p1b1", 1)],
        [("s1b2", 1), ("b2s2", 0), ("p2b2", 1)],
    ]
    pairs = [(("p1b1", 0), ("p1b1", 1)), (("b1s1", 0), ("b1s1", 1)),
             (("s1b2", 0), ("s1b2", 1)), (("b2s2", 0), ("b2s2", 1)),
             (("s2b1", 0), ("s2b1", 1)), (("p2b2", 0), ("p2b2", 1))]
    g, _sid = build_graph(colors, rings, pairs,
                          labels=["p1", "s1", "p2", "s2", "b1", "b2"])
    return g, QuadSpec(P1, S1, P2, S2)


def polygon_graph(n_sides, fan_root=0):
    """GL_2 graph of the fan triangulation of a convex n-gon, with the glue
    bridges shrunk: one white vertex per polygon corner and one trivalent
    black per triangle."""
    from .ribbon import build_graph
    tris = [(fan_root, (fan_root + i) % n_sides, (fan_root + i + 1) % n_sides)
            for i in range(1, n_sides - 1)]
    return polygon_graph_from_triangles(n_sides, tris)


def polygon_graph_from_triangles(n_sides, tris):
    """Whites 0..n-1 at the corners; one black per (ccw) triangle, joined to
    its three corners.  Rings from the convex position of the corners."""
    from fractions import Fraction
    from .ribbon import sort_ccw

    # corner k at angle 2 pi k / n: use exact rational points on a convex
    # curve instead of the circle (convexity is all that matters)
    def corner(k):
        t = Fraction(2 * k, n_sides) - 1          # t in [-1, 1)
        return (t, t * t)                          # parabola, convex, ccw

    pos = {("w", k): corner(k) for k in range(n_sides)}
    for t, (a, b, c) in enumerate(tris):
        pa, pb, pc = corner(a), corner(b), corner(c)
        pos[("b", t)] = (Fraction(pa[0] + pb[0] + pc[0], 3),
                         Fraction(pa[1] + pb[1] + pc[1], 3))
    colors = [WHITE] * n_sides + [BLACK] * len(tris)
    stubs = {("w", k): [] for k in range(n_sides)}
    stubs.update({("b", t): [] for t in range(len(tris))})
    pairs = []
    for t, tri in enumerate(tris):
        for v in tri:
            sw, sb = ("e", t, v, 0), ("e", t, v, 1)
            pw, pb = pos[("w", v)], pos[("b", t)]
            stubs[("w", v)].append(((pb[0] - pw[0], pb[1] - pw[1]), sw))
            stubs[("b", t)].append(((pw[0] - pb[0], pw[1] - pb[1]), sb))
            pairs.append((sw, sb))
    rings = []
    labels = []
    for k in range(n_sides):
        ring = sort_ccw(stubs[("w", k)], key=lambda it: it[0])
        rings.append([s for _d, s in ring])
        labels.append(("corner", k))
    for t in range(len(tris)):
        ring = sort_ccw(stubs[("b", t)], key=lambda it: it[0])
        rings.append([s for _d, s in ring])
        labels.append(("triangle", tuple(tris[t])))
    g, sid = build_graph(colors, rings, pairs, labels=labels)
    return g, sid


def rectangle_triangulation():
    """Two triangles glued along one side (the diagonal of a rectangle)."""
    return Triangulation(((0, 1, 2), (0, 2, 3)), ((((0, 2), (1, 0))),))


def torus_triangulation():
    """Two triangles glued along all three sides: the one-vertex torus."""
    return Triangulation(((0, 1, 2), (0, 1, 2)),
                         (((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2))))


def grid_torus_triangulation(nx=3, ny=3):
    """Torus triangulated by an nx-by-ny grid of squares split along
    diagonals; every triangle has three distinct vertices when nx, ny >= 3."""
    def v(x, y):
        return (x % nx) + nx * (y % ny)

    tris = []
    index = {}
    for y in range(ny):
        for x in range(nx):
            index[("L", x, y)] = len(tris)
            tris.append((v(x, y), v(x + 1, y), v(x, y + 1)))
            index[("U", x, y)] = len(tris)
            tris.append((v(x + 1, y), v(x + 1, y + 1), v(x, y + 1)))
    glu = []
    for y in range(ny):
        for x in range(nx):
            glu.append(((index[("L", x, y)], 1), (index[("U", x, y)], 2)))
            glu.append(((index[("L", x, y)], 0), (index[("U", x, (y - 1) % ny)], 1)))
            glu.append(((index[("L", x, y)], 2), (index[("U", (x - 1) % nx, y)], 0)))
    return Triangulation(tuple(tris), tuple(glu))


def gamma2_rectangle():
    return glue_triangulation(rectangle_triangulation(), 2)


def gamma2_torus():
    return glue_triangulation(torus_triangulation(), 2)
