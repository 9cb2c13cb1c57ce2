"""Bipartite ribbon graphs as half-edge (dart) structures.

A graph is a fixed-point-free partial involution `pairing` on darts (legs =
unpaired darts), a permutation `sigma` rotating the darts at each vertex
counterclockwise, a dart -> vertex map, and a two-coloring.  Optional per-dart
ZxZ displacements encode torus embeddings; displacement(pairing(d)) =
-displacement(d).

Conventions used throughout:

* A path is a sequence of darts d0, d1, ... where each dart is traversed away
  from its vertex and vertex(d_{i+1}) = vertex(pairing(d_i)).
* Zig-zag paths turn one way at white vertices (sigma) and the other way at
  black ones (sigma inverse).  They terminate when they run off an unpaired
  dart or arrive at a 1-valent white vertex (a marked corner); a 1-valent
  black vertex bounces the path back.
* Face paths are the same with sigma at every vertex, so zig-zag paths of g
  are literally the face paths of conjugate(g).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .errors import (Disconnected, GluingMismatch, MalformedGraph, NoTorusData,
                     NotAQuad, NotBivalent, ParseError)

WHITE = "w"
BLACK = "b"


@dataclass(frozen=True)
class RibbonGraph:
    pairing: tuple          # dart -> opposite dart, or None for a leg
    sigma: tuple            # dart -> next dart ccw at the same vertex
    dart_vertex: tuple      # dart -> vertex id
    color: tuple            # vertex -> "w" | "b"
    displacement: tuple = None   # dart -> (int, int), or None
    vertex_labels: tuple = None

    def __post_init__(self):
        n = len(self.pairing)
        if len(self.sigma) != n or len(self.dart_vertex) != n:
            raise MalformedGraph("dart arrays disagree in length")
        for d in range(n):
            p = self.pairing[d]
            if p is not None:
                if p == d or self.pairing[p] != d:
                    raise MalformedGraph("pairing is not a fixed-point-free involution")
                cu = self.color[self.dart_vertex[d]]
                cv = self.color[self.dart_vertex[p]]
                if cu == cv:
                    raise MalformedGraph("edge joins two vertices of one color")
            if self.dart_vertex[self.sigma[d]] != self.dart_vertex[d]:
                raise MalformedGraph("sigma moves a dart off its vertex")
        seen = [False] * n
        for d in range(n):
            if not seen[d]:
                e = d
                while not seen[e]:
                    seen[e] = True
                    e = self.sigma[e]
                if e != d:
                    raise MalformedGraph("sigma orbit does not close")
        if self.displacement is not None:
            for d in range(n):
                p = self.pairing[d]
                if p is not None:
                    dx, dy = self.displacement[d]
                    ex, ey = self.displacement[p]
                    if (dx + ex, dy + ey) != (0, 0):
                        raise MalformedGraph("displacement not antisymmetric")

    # -- basic accessors ------------------------------------------------

    @property
    def n_darts(self):
        return len(self.pairing)

    @property
    def n_vertices(self):
        return len(self.color)

    def rings(self):
        """Per-vertex dart rings in sigma order, starting at the least dart."""
        out = [None] * self.n_vertices
        seen = [False] * self.n_darts
        for d in range(self.n_darts):
            if not seen[d]:
                ring = []
                e = d
                while not seen[e]:
                    seen[e] = True
                    ring.append(e)
                    e = self.sigma[e]
                out[self.dart_vertex[d]] = ring
        for v in range(self.n_vertices):
            if out[v] is None:
                out[v] = []
        return out

    def valence(self, v):
        return sum(1 for d in range(self.n_darts) if self.dart_vertex[d] == v)

    def sigma_inv(self, d):
        e = d
        while self.sigma[e] != d:
            e = self.sigma[e]
        return e

    def edges(self):
        """List of (d, pairing[d]) with d < pairing[d]."""
        return [(d, self.pairing[d]) for d in range(self.n_darts)
                if self.pairing[d] is not None and d < self.pairing[d]]

    def legs(self):
        return [d for d in range(self.n_darts) if self.pairing[d] is None]

    def edge_of(self, d):
        p = self.pairing[d]
        if p is None:
            return (d,)
        return (min(d, p), max(d, p))

    def is_connected(self):
        if self.n_vertices == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in range(self.n_darts):
                if self.dart_vertex[d] == v and self.pairing[d] is not None:
                    w = self.dart_vertex[self.pairing[d]]
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == self.n_vertices

    # -- turning rules ---------------------------------------------------

    def _white_terminal(self, v):
        return self.color[v] == WHITE and self.valence(v) == 1

    def zig_next(self, d):
        """Successor dart on the zig-zag path, or None at the boundary."""
        p = self.pairing[d]
        if p is None:
            return None
        w = self.dart_vertex[p]
        if self._white_terminal(w):
            return None
        if self.color[w] == WHITE:
            return self.sigma[p]
        return self.sigma_inv(p)

    def face_next(self, d):
        p = self.pairing[d]
        if p is None:
            return None
        w = self.dart_vertex[p]
        if self._white_terminal(w):
            return None
        return self.sigma[p]

    def _paths(self, step):
        """Orbit decomposition of a partial successor map on darts."""
        succ = {d: step(d) for d in range(self.n_darts)}
        has_pred = set(x for x in succ.values() if x is not None)
        paths, used = [], set()
        for d in range(self.n_darts):
            if d in used or d in has_pred:
                continue
            path = []
            e = d
            while e is not None and e not in used:
                used.add(e)
                path.append(e)
                e = succ[e]
            paths.append((tuple(path), False))
        for d in range(self.n_darts):
            if d in used:
                continue
            cyc, e = [], d
            while e not in used:
                used.add(e)
                cyc.append(e)
                e = succ[e]
            paths.append((tuple(cyc), True))
        return paths

    def zigzag_paths(self, include_bare_legs=False):
        """Zig-zag paths as dart tuples; (darts, closed) pairs.

        Paths that traverse no actual edge (a lone boundary leg) are omitted
        unless include_bare_legs is set.
        """
        out = []
        for darts, closed in self._paths(self.zig_next):
            if not include_bare_legs and all(self.pairing[d] is None for d in darts):
                continue
            out.append((darts, closed))
        return out

    def face_paths(self, include_bare_legs=False):
        out = []
        for darts, closed in self._paths(self.face_next):
            if not include_bare_legs and all(self.pairing[d] is None for d in darts):
                continue
            out.append((darts, closed))
        return out

    def _bounce_next(self, d):
        """Face successor that never terminates: legs and 1-valent vertices
        bounce.  Orbits are the boundary circles of the thickened graph."""
        p = self.pairing[d]
        if p is None:
            return self.sigma[d]
        return self.sigma[p]

    def bounce_face_orbits(self):
        succ = [self._bounce_next(d) for d in range(self.n_darts)]
        orbits, used = [], set()
        for d in range(self.n_darts):
            if d in used:
                continue
            cyc, e = [], d
            while e not in used:
                used.add(e)
                cyc.append(e)
                e = succ[e]
            orbits.append(tuple(cyc))
        return orbits

    def zigzag_homology(self, darts):
        if self.displacement is None:
            raise NoTorusData("graph carries no displacement data")
        x = sum(self.displacement[d][0] for d in darts)
        y = sum(self.displacement[d][1] for d in darts)
        return (x, y)

    def to_json(self):
        rings = self.rings()
        obj = {
            "darts": self.n_darts,
            "pairing": [self.pairing[d] for d in range(self.n_darts)],
            "sigma": [rings[v] for v in range(self.n_vertices)],
            "colors": list(self.color),
        }
        if self.displacement is not None:
            obj["displacements"] = [list(self.displacement[d]) for d in range(self.n_darts)]
        if self.vertex_labels is not None:
            obj["labels"] = [list(l) if isinstance(l, tuple) else l for l in self.vertex_labels]
        return obj


def graph_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        n = obj["darts"]
        pairing = tuple(obj["pairing"])
        cycles = obj["sigma"]
        colors = tuple(obj["colors"])
    except (KeyError, TypeError) as e:
        raise ParseError(f"bad graph JSON: {e}")
    sigma = [None] * n
    dart_vertex = [None] * n
    for v, cyc in enumerate(cycles):
        for i, d in enumerate(cyc):
            if not (0 <= d < n) or sigma[d] is not None:
                raise ParseError("sigma cycles do not partition darts")
            sigma[d] = cyc[(i + 1) % len(cyc)]
            dart_vertex[d] = v
    if any(s is None for s in sigma):
        raise ParseError("sigma cycles do not cover all darts")
    disp = obj.get("displacements")
    if disp is not None:
        disp = tuple((int(a), int(b)) for a, b in disp)
    labels = obj.get("labels")
    if labels is not None:
        labels = tuple(tuple(l) if isinstance(l, list) else l for l in labels)
    try:
        return RibbonGraph(pairing, tuple(sigma), tuple(dart_vertex), colors,
                           disp, labels)
    except MalformedGraph as e:
        raise ParseError(str(e))


# ----------------------------------------------------------------------
# builder

def build_graph(colors, rings, pairs, displacements=None, labels=None):
    """Assemble a RibbonGraph from stub data.

    colors: list of "w"/"b" per vertex.  rings: per vertex, the ccw-ordered
    list of stub keys.  pairs: iterable of (stub, stub) joined into edges;
    stubs not mentioned stay unpaired legs.  displacements: optional map
    stub -> (dx, dy) for one stub per edge (the partner gets the negative).
    """
    stub_id = {}
    sigma, dart_vertex = [], []
    for v, ring in enumerate(rings):
        base = len(sigma)
        k = len(ring)
        for i, stub in enumerate(ring):
            if stub in stub_id:
                raise MalformedGraph(f"stub {stub!r} appears twice")
            stub_id[stub] = base + i
            dart_vertex.append(v)
            sigma.append(base + (i + 1) % k)
    n = len(sigma)
    pairing = [None] * n
    for a, b in pairs:
        da, db = stub_id[a], stub_id[b]
        pairing[da] = db
        pairing[db] = da
    disp = None
    if displacements is not None:
        disp = [(0, 0)] * n
        for stub, (dx, dy) in displacements.items():
            d = stub_id[stub]
            disp[d] = (dx, dy)
            if pairing[d] is not None:
                disp[pairing[d]] = (-dx, -dy)
        disp = tuple(disp)
    g = RibbonGraph(tuple(pairing), tuple(sigma), tuple(dart_vertex),
                    tuple(colors), disp, tuple(labels) if labels else None)
    return g, stub_id


# ----------------------------------------------------------------------
# conjugation and spectral statistics

def conjugate(g):
    """Reverse the cyclic order at every black vertex."""
    rings = g.rings()
    new_sigma = list(g.sigma)
    for v, ring in enumerate(rings):
        if g.color[v] == BLACK:
            for i, d in enumerate(ring):
                new_sigma[d] = ring[(i - 1) % len(ring)]
    return RibbonGraph(g.pairing, tuple(new_sigma), g.dart_vertex, g.color,
                       g.displacement, g.vertex_labels)


def zigzags(g):
    """Zig-zag paths of g (dart tuples)."""
    for d in range(g.n_darts):
        p = g.pairing[d]
        if p is not None and g.color[g.dart_vertex[d]] == g.color[g.dart_vertex[p]]:
            raise MalformedGraph("not bipartite")
    return [darts for darts, _closed in g.zigzag_paths()]


def spectral_stats(g):
    """Topology of the spectral surface: cap the face paths of conjugate(g).

    Returns vertices, edges, faces_of_conjugate (face paths of the conjugate
    graph), euler_characteristic and genus of the compact spectral surface
    (punctures filled), and its boundary circle count.
    """
    if not g.is_connected():
        raise Disconnected("spectral statistics need a connected graph")
    gc = conjugate(g)
    orbits = gc.bounce_face_orbits()

    def touches_boundary(orbit):
        for d in orbit:
            if gc.pairing[d] is None:
                return True
            if gc._white_terminal(gc.dart_vertex[d]) or \
               gc._white_terminal(gc.dart_vertex[gc.pairing[d]]):
                return True
        return False

    boundary = [o for o in orbits if touches_boundary(o)]
    loops = [o for o in orbits if not touches_boundary(o)]
    V = g.n_vertices
    E = len(g.edges())
    chi_closed = V - E + len(orbits)
    genus = (2 - chi_closed) // 2
    fpaths = gc.face_paths(include_bare_legs=True)
    return {
        "vertices": V,
        "edges": E,
        "faces_of_conjugate": len(fpaths),
        "face_loops": len(loops),
        "face_intervals": sum(1 for _p, closed in fpaths if not closed),
        "euler_characteristic": chi_closed - len(boundary),
        "genus": genus,
        "boundary_count": len(boundary),
    }


# ----------------------------------------------------------------------
# exact ccw angular sort

def _half(vec):
    x, y = vec
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def sort_ccw(items, key):
    """Sort items counterclockwise by direction key(item) = (x, y) Fractions."""
    def cmp(a, b):
        va, vb = key(a), key(b)
        ha, hb = _half(va), _half(vb)
        if ha != hb:
            return -1 if ha < hb else 1
        c = _cross(va, vb)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0
    return sorted(items, key=cmp_to_key(cmp))


# ----------------------------------------------------------------------
# Gamma_m graphs from m-triangulated triangles

def _gamma_parts(m):
    """Vertex/edge/leg data for the bipartite graph dual to the
    m-triangulation of a triangle.

    White vertices sit at positive triples summing to m+2 (the tiny
    triangles), black at triples summing to m+1 (the hexagons).  A white
    (a,b,c) with a == 1 sends a leg through the side a = 0, and so on.
    Positions are barycentric with corners A=(0,0), B=(1,0), C=(0,1).
    """
    whites = [(a, b, m + 2 - a - b) for a in range(1, m + 1)
              for b in range(1, m + 2 - a) if m + 2 - a - b >= 1]
    blacks = [(a, b, m + 1 - a - b) for a in range(1, m + 1)
              for b in range(1, m + 1 - a) if m + 1 - a - b >= 1]

    def pos(t):
        a, b, c = t
        s = a + b + c
        return (Fraction(b, s), Fraction(c, s))

    edges = []
    legs = []   # (white, side, order_along_side, direction)
    for w in whites:
        a, b, c = w
        for drop, side in (((1, 0, 0), 1), ((0, 1, 0), 2), ((0, 0, 1), 0)):
            t = (a - drop[0], b - drop[1], c - drop[2])
            if min(t) >= 1:
                edges.append((w, t))
            else:
                # leg through the side where the dropped coordinate vanishes:
                # side 0 = (A,B) ssa c = 0, side 1 = (B,C) at a = 0,
                # side 2 = (C,A) at b = 0
                tgt = tuple(x if x >= 1 else 0 for x in t)
                s = sum(tgt)
                lp = (Fraction(tgt[1], s), Fraction(tgt[2], s))
                if side == 0:
                    along = b      # from A to B
                elif side == 1:
                    along = c      # from B to C
                else:
                    along = a      # from C to A
                legs.append((w, side, along, lp))
    return whites, blacks, pos, edges, legs


def _assemble_triangle(m, tri_key=""):
    """Stub-level data for one triangle: rings computed by exact ccw sort."""
    whites, blacks, pos, edges, legs = _gamma_parts(m)
    stubs = {}          # vertex key -> list of (direction, stub, kind)
    def vk(t, col):
        return (tri_key, col, t)
    for w in whites:
        stubs[vk(w, WHITE)] = []
    for b in blacks:
        stubs[vk(b, BLACK)] = []
    pairs = []
    for w, b in edges:
        sw = (tri_key, "e", w, b, 0)
        sb = (tri_key, "e", w, b, 1)
        pw, pb = pos(w), pos(b)
        stubs[vk(w, WHITE)].append(((pb[0] - pw[0], pb[1] - pw[1]), sw))
        stubs[vk(b, BLACK)].append(((pw[0] - pb[0], pw[1] - pb[1]), sb))
        pairs.append((sw, sb))
    leg_stubs = {}      # (side, order) -> stub key
    for w, side, along, lp in legs:
        s = (tri_key, "leg", side, along)
        pw = pos(w)
        stubs[vk(w, WHITE)].append(((lp[0] - pw[0], lp[1] - pw[1]), s))
        leg_stubs[(side, along)] = s
    order = [vk(w, WHITE) for w in whites] + [vk(b, BLACK) for b in blacks]
    rings = []
    colors = []
    labels = []
    for key in order:
        ring = sort_ccw(stubs[key], key=lambda it: it[0])
        rings.append([stub for _d, stub in ring])
        colors.append(key[1])
        labels.append(key[2])
    return order, colors, rings, pairs, leg_stubs, labels


def gamma_m(m, keep_legs=True):
    """The bipartite graph of the m-triangulated triangle.

    Boundary legs are unpaired darts crossing the triangle sides; zig-zag
    paths run off them.  gamma_m(2) is the claw: one internal trivalent
    black, three white vertices, six legs.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    _order, colors, rings, pairs, _legstubs, labels = _assemble_triangle(m)
    if not keep_legs:
        legness = {s for r in rings for s in r if s[1] == "leg"}
        rings = [[s for s in r if s not in legness] for r in rings]
    g, _sid = build_graph(colors, rings, pairs, labels=labels)
    return g


def gamma_holes(m):
    """Number of independent cycles of gamma_m."""
    return (m - 1) * (m - 2) // 2


# ----------------------------------------------------------------------
# triangulations and gluing

@dataclass(frozen=True)
class Triangulation:
    triangles: tuple       # ((v0, v1, v2), ...)
    gluings: tuple         # (((t, side), (t', side')), ...)

    def __post_init__(self):
        seen = set()
        for (a, b) in self.gluings:
            for tside in (tuple(a), tuple(b)):
                if tside in seen:
                    raise GluingMismatch(f"side {tside} glued twice")
                seen.add(tside)
            if tuple(a) == tuple(b):
                raise GluingMismatch("cannot glue a side to itself")
            for (t, s) in (a, b):
                if not (0 <= t < len(self.triangles)) or s not in (0, 1, 2):
                    raise GluingMismatch(f"no such side {(t, s)}")

    @staticmethod
    def from_json(obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            tris = tuple(tuple(t) for t in obj["triangles"])
            glu = tuple((tuple(a), tuple(b)) for a, b in obj["gluings"])
        except (KeyError, TypeError) as e:
            raise ParseError(f"bad triangulation JSON: {e}")
        return Triangulation(tris, glu)

    def to_json(self):
        return {"triangles": [list(t) for t in self.triangles],
                "gluings": [[list(a), list(b)] for a, b in self.gluings]}

    def marked_points(self):
        """Corner classes under the gluing identifications."""
        corners = [(t, c) for t in range(len(self.triangles)) for c in range(3)]
        parent = {c: c for c in corners}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for (t1, s1), (t2, s2) in self.gluings:
            union((t1, s1), (t2, (s2 + 1) % 3))
            union((t1, (s1 + 1) % 3), (t2, s2))
        classes = {}
        for c in corners:
            classes.setdefault(find(c), []).append(c)
        return list(classes.values())


def glue_triangulation(tri, m):
    """Gamma_m graphs of the triangles glued along the matched sides.

    Each glued side matches its m boundary legs in reverse order
    (orientation-reversing) and joins every matched pair through a fresh
    2-valent black vertex.  Legs on unglued sides stay as unpaired darts.
    """
    n_tri = len(tri.triangles)
    all_colors, all_rings, all_pairs, all_labels = [], [], [], []
    leg_maps = []
    for t in range(n_tri):
        order, colors, rings, pairs, leg_stubs, labels = _assemble_triangle(m, tri_key=t)
        all_colors.extend(colors)
        all_rings.extend(rings)
        all_pairs.extend(pairs)
        all_labels.extend([(t, l) for l in labels])
        leg_maps.append(leg_stubs)
    glued_legs = set()
    for (t1, s1), (t2, s2) in tri.gluings:
        side1 = sorted(k for k in leg_maps[t1] if k[0] == s1)
        side2 = sorted(k for k in leg_maps[t2] if k[0] == s2)
        if len(side1) != m or len(side2) != m:
            raise GluingMismatch("side does not expose m legs")
        for i in range(m):
            k1 = side1[i]
            k2 = side2[m - 1 - i]
            sa = leg_maps[t1][k1]
            sb = leg_maps[t2][k2]
            bridge = ("bridge", t1, s1, i)
            ba = (bridge, 0)
            bb = (bridge, 1)
            all_colors.append(BLACK)
            all_rings.append([ba, bb])
            all_labels.append(bridge)
            all_pairs.append((sa, ba))
            all_pairs.append((sb, bb))
            glued_legs.add(sa)
            glued_legs.add(sb)
    g, _sid = build_graph(all_colors, all_rings, all_pairs, labels=all_labels)
    return g


# ----------------------------------------------------------------------
# the two-by-two move

@dataclass(frozen=True)
class QuadSpec:
    """The square-move pattern: white vertices (p1, s1, p2, s2) in cyclic
    order around the quad face, where s1, s2 are the two whites on the face
    and p1, p2 hang off the two black vertices.  `twist` tracks the central
    sign convention used when A-coordinates ride along a move."""
    p1: int
    s1: int
    p2: int
    s2: int
    twist: bool = False

    def rotated(self):
        """The quad of the mutated graph, labeled for the inverse move."""
        return QuadSpec(self.s1, self.p2, self.s2, self.p1, not self.twist)


def _find_black(g, triple):
    """Black vertex adjacent to exactly the given whites (trivalent)."""
    want = sorted(triple)
    for v in range(g.n_vertices):
        if g.color[v] != BLACK:
            continue
        nb = sorted(g.dart_vertex[g.pairing[d]] for d in range(g.n_darts)
                    if g.dart_vertex[d] == v and g.pairing[d] is not None)
        if nb == want:
            return v
    return None


def _dart_between(g, u, v):
    for d in range(g.n_darts):
        if g.dart_vertex[d] == u and g.pairing[d] is not None \
                and g.dart_vertex[g.pairing[d]] == v:
            return d
    return None


def quad_structure(g, quad):
    """Resolve a QuadSpec against the graph; returns the two black vertices
    and the face darts, raising NotAQuad when the pattern does not match."""
    p1, s1, p2, s2 = quad.p1, quad.s1, quad.p2, quad.s2
    names = (p1, s1, p2, s2)
    if len(set(names)) != 4:
        raise NotAQuad("quad vertices must be distinct")
    for v in names:
        if not (0 <= v < g.n_vertices) or g.color[v] != WHITE:
            raise NotAQuad(f"vertex {v} is not white")
    b1 = _find_black(g, (p1, s1, s2))
    b2 = _find_black(g, (p2, s1, s2))
    if b1 is None or b2 is None or b1 == b2:
        raise NotAQuad("no matching pair of trivalent black vertices")

    def face_step(d):
        return g.sigma[g.pairing[d]]

    def try_cycle(sa, sb):
        # face sa -> b1 -> sb -> b2 -> sa
        cycle = (_dart_between(g, sa, b1), _dart_between(g, b1, sb),
                 _dart_between(g, sb, b2), _dart_between(g, b2, sa))
        if any(d is None for d in cycle):
            return None
        for i in range(4):
            if face_step(cycle[i]) != cycle[(i + 1) % 4]:
                return None
        return cycle

    cycle = try_cycle(s2, s1)
    if cycle is not None:
        return b1, b2, cycle, quad
    # labels may run against the face orientation; mirror s1 <-> s2
    cycle = try_cycle(s1, s2)
    if cycle is not None:
        return b1, b2, cycle, QuadSpec(p1, s2, p2, s1, quad.twist)
    raise NotAQuad("the four edges do not bound a face")


def two_by_two(g, quad):
    """The square move: rehang the two black vertices of the quad onto the
    other diagonal.  Involutive up to canonical relabeling."""
    b1, b2, cycle, quad = quad_structure(g, quad)
    p1, s1, p2, s2 = quad.p1, quad.s1, quad.p2, quad.s2
    rings = g.rings()

    dead = {d for d in range(g.n_darts) if g.dart_vertex[d] in (b1, b2)}
    dead |= {g.pairing[d] for d in dead if g.pairing[d] is not None}

    # stubs: keep every surviving dart under its own id
    def stub(d):
        return ("old", d)

    new_rings = []
    colors = list(g.color)
    labels = list(g.vertex_labels) if g.vertex_labels is not None else None
    pairs = []
    seen_edges = set()
    for d in range(g.n_darts):
        p = g.pairing[d]
        if p is not None and d < p and d not in dead and p not in dead:
            pairs.append((stub(d), stub(p)))

    # new stubs
    nb1 = ("nb1",)   # black vertex with pendant s1, on the (p1, p2) diagonal
    nb2 = ("nb2",)
    f1a, f1b = ("f", 1, 0), ("f", 1, 1)    # p1 - nb1
    f2a, f2b = ("f", 2, 0), ("f", 2, 1)    # nb1 - p2
    f3a, f3b = ("f", 3, 0), ("f", 3, 1)    # p2 - nb2
    f4a, f4b = ("f", 4, 0), ("f", 4, 1)    # nb2 - p1
    q1a, q1b = ("q", 1, 0), ("q", 1, 1)    # nb1 - s1 pendant
    q2a, q2b = ("q", 2, 0), ("q", 2, 1)    # nb2 - s2 pendant
    pairs += [(f1a, f1b), (f2a, f2b), (f3a, f3b), (f4a, f4b),
              (q1a, q1b), (q2a, q2b)]

    for v in range(g.n_vertices):
        ring = [stub(d) for d in rings[v] if d not in dead]
        if v == p1:
            full = rings[v]
            out = []
            for d in full:
                if d in dead:
                    out.extend([f4b, f1a])   # arrive from nb2, depart to nb1
                else:
                    out.append(stub(d))
            ring = out
        elif v == p2:
            out = []
            for d in rings[v]:
                if d in dead:
                    out.extend([f2b, f3a])   # arrive from nb1, depart to nb2
                else:
                    out.append(stub(d))
            ring = out
        elif v == s1:
            out = []
            placed = False
            for d in rings[v]:
                if d in dead:
                    if not placed:
                        out.append(q1b)
                        placed = True
                else:
                    out.append(stub(d))
            ring = out
        elif v == s2:
            out = []
            placed = False
            for d in rings[v]:
                if d in dead:
                    if not placed:
                        out.append(q2b)
                        placed = True
                else:
                    out.append(stub(d))
            ring = out
        new_rings.append(ring)

    new_rings[b1] = [f1b, f2a, q1a]   # arrive from p1, depart to p2, pendant s1
    new_rings[b2] = [f3b, f4a, q2a]   # arrive from p2, depart to p1, pendant s2

    displacements = None
    if g.displacement is not None:
        def disp(d):
            return g.displacement[d]

        def add(*vs):
            return (sum(v[0] for v in vs), sum(v[1] for v in vs))

        def neg(v):
            return (-v[0], -v[1])

        d_s2b1, d_b1s1, d_s1b2, d_b2s2 = cycle
        d_p1b1 = _dart_between(g, p1, b1)
        d_p2b2 = _dart_between(g, p2, b2)
        displacements = {}
        for d in range(g.n_darts):
            p = g.pairing[d]
            if p is not None and d < p and d not in dead:
                displacements[stub(d)] = disp(d)
        # nb1 placed at old b1, nb2 at old b2; route new edges through the
        # old contractible quad face so every face sum stays zero
        displacements[f1a] = disp(d_p1b1)                               # p1 -> b1
        displacements[f2a] = add(disp(d_b1s1), disp(d_s1b2),
                                 neg(disp(d_p2b2)))                     # b1 -> p2
        displacements[f3a] = disp(d_p2b2)                               # p2 -> b2
        displacements[f4a] = add(disp(d_b2s2), disp(d_s2b1),
                                 neg(disp(d_p1b1)))                     # b2 -> p1
        displacements[q1a] = add(disp(d_b1s1))                          # nb1 -> s1
        displacements[q2a] = add(disp(d_b2s2))                          # nb2 -> s2

    g2, sid = build_graph(colors, new_rings, pairs, displacements, labels)
    return g2, sid


# ----------------------------------------------------------------------
# bivalent shrink / expand

def shrink_bivalent(g, v):
    """Merge a 2-valent vertex and its two (same-colored) neighbors into one
    vertex, splicing the rings.  Illegal when the neighbors coincide."""
    rings = g.rings()
    ring_v = rings[v]
    if len(ring_v) != 2:
        raise NotBivalent(f"vertex {v} has valence {len(ring_v)}")
    d1, d2 = ring_v
    if g.pairing[d1] is None or g.pairing[d2] is None:
        raise NotBivalent("bivalent vertex must have two real edges")
    u = g.dart_vertex[g.pairing[d1]]
    w = g.dart_vertex[g.pairing[d2]]
    if u == w or u == v or w == v:
        raise MalformedGraph("cannot identify the merged neighbors consistently")

    def stub(d):
        return ("old", d)

    keep = [x for x in range(g.n_vertices) if x not in (v, w)]
    remap = {x: i for i, x in enumerate(keep)}
    colors = [g.color[x] for x in keep]
    labels = None
    if g.vertex_labels is not None:
        labels = [g.vertex_labels[x] for x in keep]
    du = g.pairing[d1]        # dart of u toward v
    dw = g.pairing[d2]        # dart of w toward v
    ring_u, ring_w = rings[u], rings[w]
    iu = ring_u.index(du)
    iw = ring_w.index(dw)
    spliced = ring_u[:iu] + ring_w[iw + 1:] + ring_w[:iw] + ring_u[iu + 1:]
    new_rings = []
    for x in keep:
        if x == u:
            new_rings.append([stub(d) for d in spliced])
        else:
            new_rings.append([stub(d) for d in rings[x]])
    pairs = []
    dead = {d1, d2, du, dw}
    for d in range(g.n_darts):
        p = g.pairing[d]
        if p is not None and d < p and d not in dead and p not in dead:
            pairs.append((stub(d), stub(p)))
    displacements = None
    if g.displacement is not None:
        displacements = {}
        # w's frame is carried to u along w -> v -> u
        wx = (g.displacement[dw][0] - g.displacement[du][0],
              g.displacement[dw][1] - g.displacement[du][1])
        for d in range(g.n_darts):
            p = g.pairing[d]
            if p is None or d in dead or p in dead or d > p:
                continue
            dd = g.displacement[d]
            if g.dart_vertex[d] == w:
                dd = (dd[0] + wx[0], dd[1] + wx[1])
            if g.dart_vertex[p] == w:
                dd = (dd[0] - wx[0], dd[1] - wx[1])
            displacements[stub(d)] = dd
    g2, sid = build_graph(colors, new_rings, pairs, displacements, labels)
    return g2, remap


def expand_vertex(g, u, start, count, mid_color=None):
    """Split `count` consecutive darts of u (beginning at ring position
    `start`) onto a fresh vertex joined to u through a new 2-valent vertex of
    the opposite color.  Inverse of shrink_bivalent."""
    rings = g.rings()
    ring = rings[u]
    k = len(ring)
    if not (0 <= start < k) or not (1 <= count < k):
        raise ValueError("bad split")
    moved = [ring[(start + i) % k] for i in range(count)]
    kept = [ring[(start + count + i) % k] for i in range(k - count)]
    if mid_color is None:
        mid_color = BLACK if g.color[u] == WHITE else WHITE

    def stub(d):
        return ("old", d)

    colors = list(g.color) + [mid_color, g.color[u]]
    mid, nw = g.n_vertices, g.n_vertices + 1
    labels = None
    if g.vertex_labels is not None:
        labels = list(g.vertex_labels) + [("expanded-mid",), ("expanded",)]
    e1a, e1b = ("x", 1, 0), ("x", 1, 1)    # u - mid
    e2a, e2b = ("x", 2, 0), ("x", 2, 1)    # mid - new
    new_rings = []
    for v in range(g.n_vertices):
        if v == u:
            new_rings.append([e1a] + [stub(d) for d in kept])
        else:
            new_rings.append([stub(d) for d in rings[v]])
    new_rings.append([e1b, e2a])
    new_rings.append([e2b] + [stub(d) for d in moved])
    pairs = [(e1a, e1b), (e2a, e2b)]
    for d in range(g.n_darts):
        p = g.pairing[d]
        if p is not None and d < p:
            pairs.append((stub(d), stub(p)))
    displacements = None
    if g.displacement is not None:
        displacements = {stub(d): g.displacement[d]
                         for d in range(g.n_darts)
                         if g.pairing[d] is not None and d < g.pairing[d]}
        displacements[e1a] = (0, 0)
        displacements[e2a] = (0, 0)
    g2, _sid = build_graph(colors, new_rings, pairs, displacements, labels)
    return g2


# ----------------------------------------------------------------------
# minimality of torus graphs

def is_minimal(g):
    """No zig-zag repeats an edge, and any two zig-zags share exactly
    |h1 x h2| edges, h the homology classes (no parallel bigons)."""
    if g.displacement is None:
        raise NoTorusData("minimality needs torus displacement data")
    zz = zigzags(g)
    edge_sets = []
    for darts in zz:
        es = [g.edge_of(d) for d in darts]
        if len(es) != len(set(es)):
            return False
        edge_sets.append(set(es))
    hom = [g.zigzag_homology(darts) for darts in zz]
    for i in range(len(zz)):
        for j in range(i + 1, len(zz)):
            shared = len(edge_sets[i] & edge_sets[j])
            det = abs(hom[i][0] * hom[j][1] - hom[i][1] * hom[j][0])
            if shared != det:
                return False
    return True


# ----------------------------------------------------------------------
# canonical form / isomorphism

def canonical_form(g):
    """Color-and-rotation canonical relabeling, for isomorphism tests."""
    n = g.n_darts
    best = None
    for root in range(n):
        number = {root: 0}
        order = [root]
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for e in (g.sigma[d], g.pairing[d]):
                if e is not None and e not in number:
                    number[e] = len(number)
                    order.append(e)
        if len(number) != n:
            continue    # disconnected dart structure; try other roots
        sig = tuple(number[g.sigma[d]] for d in order)
        par = tuple(number[g.pairing[d]] if g.pairing[d] is not None else -1
                    for d in order)
        col = tuple(g.color[g.dart_vertex[d]] for d in order)
        cand = (sig, par, col)
        if best is None or cand < best:
            best = cand
    return best


def is_isomorphic(g1, g2):
    if g1.n_darts != g2.n_darts or g1.n_vertices != g2.n_vertices:
        return False
    return canonical_form(g1) == canonical_form(g2)
