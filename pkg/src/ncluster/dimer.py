"""Dimer covers on bipartite torus graphs and the commuting Hamiltonians.

A matching is a set of edges covering each vertex once.  Relative to a
reference cover built from a circular map on the zig-zag classes, every
cover decomposes into disjoint simple loops graded by torus homology, and
the resulting Hamiltonians commute under the bipartite loop bracket.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import NoTorusData, NotCircular, NotMinimalWarning, Unbalanced
from .loopalg import canonical_rotation, chain_add, reduce_walk
from .ribbon import BLACK, WHITE, is_minimal, sort_ccw, zigzags


def enumerate_matchings(g):
    """All perfect matchings, by backtracking over the least uncovered
    vertex."""
    whites = [v for v in range(g.n_vertices) if g.color[v] == WHITE]
    blacks = [v for v in range(g.n_vertices) if g.color[v] == BLACK]
    if len(whites) != len(blacks):
        raise Unbalanced("unequal color classes")
    if any(g.valence(v) == 0 for v in range(g.n_vertices)):
        raise Unbalanced("isolated vertex")
    edges = g.edges()
    incident = {v: [] for v in range(g.n_vertices)}
    for idx, (d, p) in enumerate(edges):
        incident[g.dart_vertex[d]].append(idx)
        incident[g.dart_vertex[p]].append(idx)

    out = []
    covered = [False] * g.n_vertices
    chosen = []

    def ends(idx):
        d, p = edges[idx]
        return g.dart_vertex[d], g.dart_vertex[p]

    def rec():
        v = next((u for u in range(g.n_vertices) if not covered[u]), None)
        if v is None:
            out.append(frozenset(chosen))
            return
        for idx in incident[v]:
            a, b = ends(idx)
            if covered[a] or covered[b]:
                continue
            covered[a] = covered[b] = True
            chosen.append(idx)
            rec()
            chosen.pop()
            covered[a] = covered[b] = False

    rec()
    return edges, out


def matching_boundary_ok(g, edges, matching):
    """Each vertex covered exactly once: d[M] = sum sgn(v) [v]."""
    count = {v: 0 for v in range(g.n_vertices)}
    for idx in matching:
        d, p = edges[idx]
        count[g.dart_vertex[d]] += 1
        count[g.dart_vertex[p]] += 1
    return all(c == 1 for c in count.values())


# ----------------------------------------------------------------------
# Newton polygon

def zigzag_classes(g):
    if g.displacement is None:
        raise NoTorusData("zig-zag homology needs displacements")
    return [(tuple(z), g.zigzag_homology(z)) for z in zigzags(g)]


def newton_polygon(g):
    """Edge vectors = zig-zag homology classes in counterclockwise order;
    vertices are the partial sums from the origin (translation-normalized).
    """
    classes = [h for _z, h in zigzag_classes(g)]
    if any(h == (0, 0) for h in classes):
        raise NoTorusData("a zig-zag has trivial homology")
    ordered = sort_ccw(classes, key=lambda h: (Fraction(h[0]), Fraction(h[1])))
    assert (sum(h[0] for h in ordered), sum(h[1] for h in ordered)) == (0, 0)
    verts = [(0, 0)]
    for h in ordered[:-1]:
        verts.append((verts[-1][0] + h[0], verts[-1][1] + h[1]))
    minx = min(v[0] for v in verts)
    miny = min(v[1] for v in verts)
    verts = [(x - minx, y - miny) for x, y in verts]
    return {"edges": ordered, "vertices": verts}


def polygon_area_twice(verts):
    n = len(verts)
    s = 0
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s)


def interior_lattice_points(verts):
    """Interior points by Pick's theorem: I = A - B/2 + 1."""
    from math import gcd
    A2 = polygon_area_twice(verts)
    B = 0
    n = len(verts)
    for i in range(n):
        dx = verts[(i + 1) % n][0] - verts[i][0]
        dy = verts[(i + 1) % n][1] - verts[i][1]
        B += gcd(abs(dx), abs(dy))
    return (A2 - B + 2) // 2


# ----------------------------------------------------------------------
# reference matchings from circular maps

def reference_weights(g, positions):
    """phi(E) = counterclockwise arc length from the zig-zag through E with
    the black vertex first to the one with the white vertex first.

    positions: value in [0,1) per zig-zag index, circularly ordered the same
    way as the classes."""
    zz = zigzags(g)
    classes = [g.zigzag_homology(z) for z in zz]
    order = sort_ccw(range(len(zz)), key=lambda i: (Fraction(classes[i][0]),
                                                    Fraction(classes[i][1])))
    pos_sorted = sorted(Fraction(positions[i]) for i in range(len(zz)))
    ranked = {idx: pos_sorted[k] for k, idx in enumerate(order)}
    if len(set(pos_sorted)) != len(pos_sorted):
        raise NotCircular("positions must be distinct")
    dart_to_zz = {}
    for i, z in enumerate(zz):
        for d in z:
            dart_to_zz[d] = i
    weights = {}
    for d, p in g.edges():
        # z_r contains the white-first traversal, z_l the black-first one;
        # with this package's turning convention the counterclockwise arc
        # runs from z_r to z_l (the boundary identity pins the direction)
        dw = d if g.color[g.dart_vertex[d]] == WHITE else p
        db = p if dw == d else d
        zr = dart_to_zz[dw]
        zl = dart_to_zz[db]
        arc = (ranked[zl] - ranked[zr]) % 1
        weights[(d, p) if d < p else (p, d)] = arc
    return weights


def vertex_weight_sums(g, weights):
    sums = {v: Fraction(0) for v in range(g.n_vertices)}
    for (d, p), w in weights.items():
        sums[g.dart_vertex[d]] += w
        sums[g.dart_vertex[p]] += w
    return sums


def reference_matching(g, corner=0):
    """The 0/1 circular map at a Newton polygon corner: zig-zags collapse to
    a point except for one unit arc, making phi a perfect matching."""
    zz = zigzags(g)
    classes = [g.zigzag_homology(z) for z in zz]
    order = sort_ccw(range(len(zz)), key=lambda i: (Fraction(classes[i][0]),
                                                    Fraction(classes[i][1])))
    n = len(order)
    corner = corner % n
    # stack positions tightly so the full unit arc sits between order[corner]
    # and order[corner+1]
    eps = Fraction(1, 10 * n)
    ranked = {}
    for k in range(n):
        idx = order[(corner + 1 + k) % n]
        ranked[idx] = Fraction(k) * eps
    positions = [ranked[i] for i in range(n)]
    weights = reference_weights(g, positions)
    matched = set()
    phi = set()
    for e, w in weights.items():
        if w > Fraction(1, 2):
            phi.add(e)
    return phi, weights


# ----------------------------------------------------------------------
# Hamiltonians

def matching_minus(g, edges, m1, m2):
    """[M1] - [M2] as disjoint oriented loops (M1 edges black->white)."""
    sym = set(m1) ^ set(m2)
    if not sym:
        return []
    darts = {}
    for idx in sym:
        d, p = edges[idx]
        db = d if g.color[g.dart_vertex[d]] == BLACK else p
        dw = p if db == d else d
        if idx in m1:
            darts[g.dart_vertex[db]] = db       # traverse black -> white
        else:
            darts[g.dart_vertex[dw]] = dw       # traverse white -> black
    loops = []
    used = set()
    for start_v, start_d in sorted(darts.items()):
        if start_v in used:
            continue
        walk = []
        v = start_v
        while v not in used:
            used.add(v)
            d = darts[v]
            walk.append(d)
            v = g.dart_vertex[g.pairing[d]]
        loops.append(reduce_walk(g, tuple(walk)))
    return loops


def loop_homology(g, loop):
    return g.zigzag_homology(loop)


def hamiltonians(g, phi_edges=None):
    """Map homology class -> loop chain: for every matching M the disjoint
    loops of [M] - [Phi], graded by the total class of the difference."""
    edges, covers = enumerate_matchings(g)
    edge_index = {e: i for i, e in enumerate(edges)}
    if phi_edges is None:
        phi, _w = reference_matching(g)
    else:
        phi = phi_edges
    phi_idx = frozenset(edge_index[e] for e in phi)
    out = {}
    for m in covers:
        loops = matching_minus(g, edges, m, phi_idx)
        total = (sum(loop_homology(g, l)[0] for l in loops),
                 sum(loop_homology(g, l)[1] for l in loops))
        contribution = {}
        if not loops:
            contribution = {(): Fraction(1)}
        for l in loops:
            contribution = chain_add(contribution, {l: Fraction(1)})
        out.setdefault(total, {})
        out[total] = chain_add(out[total], contribution)
    return out


def power_loop(loop, n):
    """Travel a loop n times (reversed for negative n)."""
    if n == 0:
        return ()
    if n < 0:
        loop = tuple(reversed(loop))
        n = -n
    return canonical_rotation(loop * n)


def reverse_loop(g, loop):
    return canonical_rotation(tuple(g.pairing[d] for d in reversed(loop)))


def chain_mod_homotopy(g, chain):
    """Project a loop chain to ambient free-homotopy classes; on the torus
    these are the homology classes."""
    out = {}
    for loop, coef in chain.items():
        key = (0, 0) if not loop else loop_homology(g, loop)
        c = out.get(key, Fraction(0)) + coef
        if c:
            out[key] = c
        elif key in out:
            del out[key]
    return out


def commute_check(g, ha, hb):
    """Bipartite bracket of two Hamiltonian chains, reduced modulo ambient
    homotopy of the torus; empty iff the Hamiltonians commute.  The word
    level bracket spreads each cancelling pair of contributions over loops
    that are homotopic on the torus but not on the graph, so the reduction
    is where the cancellation happens."""
    from .loopalg import bracket_chains
    try:
        if not is_minimal(g):
            warnings.warn("graph is not minimal; commutation not guaranteed",
                          NotMinimalWarning)
    except NoTorusData:
        pass
    return chain_mod_homotopy(g, bracket_chains(g, ha, hb))
