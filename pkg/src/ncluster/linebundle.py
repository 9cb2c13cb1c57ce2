"""Flat line bundles with noncommutative transports on bipartite graphs.

Transports are stored per dart as left-module coefficients: traversing dart d
carries the fiber basis at its vertex to the far vertex with coefficient
t[d], and coefficients along a path multiply in path order.  t[pairing(d)] =
t[d]^{-1}.

The two-by-two move acts through the quad arcs: with the quad labeled
(p1, s1, p2, s2) cyclically (pendants p, shared s) and

    mu_v = -(arc(v -> prev) ... )   the minus of the quad monodromy,

the new arcs are arc'(p1->s1) = arc(p1->s1)(1 + mu_s1), arc'(s1->p2) =
(1 + mu_s1)^{-1} arc(s1->p2), and the same at s2.  Quad monodromies at all
four white vertices are preserved and the move squares to the identity on
arcs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (DegenerateConfig, GraphMismatch, NonGenericAtStep,
                     NotClosed, NotInvertible, NotInvertible1PlusM)
from .linalg import left_kernel, solve_left, vec_is_zero
from .ribbon import QuadSpec, quad_structure, two_by_two
from .scalar import one, random_invertible
from . import standard


@dataclass(frozen=True)
class GraphLineBundle:
    graph: object
    transports: tuple      # dart -> Scalar (None on unpaired darts)

    def __post_init__(self):
        g = self.graph
        for d in range(g.n_darts):
            p = g.pairing[d]
            t = self.transports[d]
            if p is None:
                continue
            if t is None:
                raise NotInvertible(f"missing transport on dart {d}")
            if t * self.transports[p] != one(t.level()):
                raise NotInvertible(f"transports on edge {d} not mutually inverse")

    @property
    def level(self):
        for t in self.transports:
            if t is not None:
                return t.level()
        raise ValueError("empty bundle")

    def transport(self, d):
        return self.transports[d]

    def arc(self, u, black, v):
        """Transport from white u through the black vertex to white v."""
        g = self.graph
        d1 = _dart(g, u, black)
        d2 = _dart(g, black, v)
        return self.transports[d1] * self.transports[d2]


def _dart(g, u, v):
    for d in range(g.n_darts):
        if g.dart_vertex[d] == u and g.pairing[d] is not None \
                and g.dart_vertex[g.pairing[d]] == v:
            return d
    raise GraphMismatch(f"no edge {u} -> {v}")


def trivial_bundle(g, level=("rat",)):
    ts = [one(level) if g.pairing[d] is not None else None for d in range(g.n_darts)]
    return GraphLineBundle(g, tuple(ts))


def random_bundle(g, kind, rng, bound=10):
    ts = [None] * g.n_darts
    for d, p in g.edges():
        t = random_invertible(kind, rng=rng, bound=bound)
        ts[d] = t
        ts[p] = t.inv()
    return GraphLineBundle(g, tuple(ts))


def monodromy(bundle, walk):
    """Ordered product of transports along a closed dart path."""
    g = bundle.graph
    if not walk:
        raise NotClosed("empty walk")
    for d, d2 in zip(walk, walk[1:] + [walk[0]]):
        p = g.pairing[d]
        if p is None or g.dart_vertex[d2] != g.dart_vertex[p]:
            raise NotClosed("walk is not a closed edge path")
    out = None
    for d in walk:
        t = bundle.transports[d]
        out = t if out is None else out * t
    return out


# ----------------------------------------------------------------------
# quad machinery

def quad_arcs(bundle, quad):
    """The four forward arcs of the quad, with the blacks resolved."""
    g = bundle.graph
    b1, b2, _cycle, quad = quad_structure(g, quad)
    p1, s1, p2, s2 = quad.p1, quad.s1, quad.p2, quad.s2
    return {
        ("p1", "s1"): bundle.arc(p1, b1, s1),
        ("s1", "p2"): bundle.arc(s1, b2, p2),
        ("p2", "s2"): bundle.arc(p2, b2, s2),
        ("s2", "p1"): bundle.arc(s2, b1, p1),
    }, quad


def quad_monodromy(bundle, quad, base="s1", oriented=False):
    """Coefficient of the loop based at `base` running s1 -> p1 -> s2 -> p2
    (the direction in which the line-configuration monodromy acts by X).
    With oriented=True the loop is reversed on quads whose twist flag is set,
    which is the orientation a mutated quad carries."""
    reverse = oriented and quad.twist
    arcs, quad = quad_arcs(bundle, quad)
    step = {("s1", "p1"): arcs[("p1", "s1")].inv(),
            ("p1", "s2"): arcs[("s2", "p1")].inv(),
            ("s2", "p2"): arcs[("p2", "s2")].inv(),
            ("p2", "s1"): arcs[("s1", "p2")].inv()}
    order = ["s1", "p1", "s2", "p2"]
    i = order.index(base)
    out = None
    for k in range(4):
        t = step[(order[(i + k) % 4], order[(i + k + 1) % 4])]
        out = t if out is None else out * t
    return out.inv() if reverse else out


def white_monodromy(bundle, quad, base="s1"):
    """Monodromy at a white quad vertex in the orientation the quad carries;
    mutation preserves these on the nose."""
    return quad_monodromy(bundle, quad, base, oriented=True)


def minus_monodromy(bundle, quad, base):
    return -quad_monodromy(bundle, quad, base)


def mutate(bundle, quad):
    """The two-by-two move on a flat line bundle; returns (bundle', quad')
    where quad' names the same square on the mutated graph for the inverse
    move.

    The new arcs follow the line-configuration geometry: with mu_v the minus
    of the quad monodromy at v, the pendant-bound arc picks up (1 + mu) on
    the right, and the continuing arc loses (1 + mu^{-1}) on the left.  This
    is the reading of the move under which it commutes on the nose with the
    four-lines equivalence, squares to the identity, and specializes to the
    classical cluster Poisson mutation."""
    g = bundle.graph
    arcs, quad = quad_arcs(bundle, quad)
    mu_s1 = minus_monodromy(bundle, quad, "s1")
    mu_s2 = minus_monodromy(bundle, quad, "s2")
    lv = bundle.level
    try:
        f1 = (one(lv) + mu_s1.inv()).inv()
        (one(lv) + mu_s1).inv()
    except NotInvertible:
        raise NotInvertible1PlusM("1 + M singular at s1")
    try:
        f2 = (one(lv) + mu_s2.inv()).inv()
        (one(lv) + mu_s2).inv()
    except NotInvertible:
        raise NotInvertible1PlusM("1 + M singular at s2")
    new_arc = {
        ("p1", "s1"): arcs[("p1", "s1")] * (one(lv) + mu_s1),
        ("s1", "p2"): f1 * arcs[("s1", "p2")],
        ("p2", "s2"): arcs[("p2", "s2")] * (one(lv) + mu_s2),
        ("s2", "p1"): f2 * arcs[("s2", "p1")],
    }
    g2, sid = two_by_two(g, quad)
    # dart layout of the rebuilt quad (see ribbon.two_by_two)
    ts = [None] * g2.n_darts

    def set_edge(stub_a, stub_b, t):
        da, db = sid[stub_a], sid[stub_b]
        ts[da] = t
        ts[db] = t.inv()

    for d in range(g.n_darts):
        stub = ("old", d)
        if stub in sid and g.pairing[d] is not None:
            d2 = sid[stub]
            if ts[d2] is None:
                t = bundle.transports[d]
                ts[d2] = t
                ts[sid[("old", g.pairing[d])]] = t.inv()
    # new quad: p1 -> nb1 -> p2 -> nb2 -> p1, pendants s1 at nb1, s2 at nb2
    set_edge(("f", 1, 0), ("f", 1, 1), one(lv))                      # p1 - nb1
    set_edge(("q", 1, 0), ("q", 1, 1), new_arc[("p1", "s1")])        # nb1 - s1
    set_edge(("f", 2, 0), ("f", 2, 1),
             new_arc[("p1", "s1")] * new_arc[("s1", "p2")])          # nb1 - p2
    set_edge(("f", 3, 0), ("f", 3, 1), one(lv))                      # p2 - nb2
    set_edge(("q", 2, 0), ("q", 2, 1), new_arc[("p2", "s2")])        # nb2 - s2
    set_edge(("f", 4, 0), ("f", 4, 1),
             new_arc[("p2", "s2")] * new_arc[("s2", "p1")])          # nb2 - p1
    return GraphLineBundle(g2, tuple(ts)), quad.rotated()


def bundles_equal_on_arcs(b1, b2):
    """Equality of the gauge-free data: transports between white vertices
    through每 black, matched by the black's neighbor multiset."""
    g1, g2 = b1.graph, b2.graph
    if g1.n_vertices != g2.n_vertices:
        return False

    def black_key(g, v):
        nbrs = tuple(sorted(g.dart_vertex[g.pairing[d]]
                            for d in range(g.n_darts)
                            if g.dart_vertex[d] == v and g.pairing[d] is not None))
        return nbrs

    blacks1 = {v: black_key(g1, v) for v in range(g1.n_vertices) if g1.color[v] == "b"}
    blacks2 = {v: black_key(g2, v) for v in range(g2.n_vertices) if g2.color[v] == "b"}
    m2 = {}
    for v, k in blacks2.items():
        m2.setdefault(k, []).append(v)
    for v1, k in blacks1.items():
        cands = m2.get(k, [])
        ok = False
        for v2 in cands:
            if all(b1.arc(u, v1, w) == b2.arc(u, v2, w)
                   for u in k for w in k if u != w):
                ok = True
                break
        if not ok:
            return False
    return True


# ----------------------------------------------------------------------
# four lines in a 2-dimensional space

def lines_to_bundle(vec_a, vec_b, vec_c, vec_d, quad_and_graph=None):
    """Flat bundle on the quad graph from four generic lines in V_2.

    Returns (bundle, quad, X, normalized vectors (a, b, c, d)) where the
    vectors satisfy a + b + d = 0 and d + c + Xb = 0, per black vertex."""
    if quad_and_graph is None:
        g, quad = standard.quad_graph()
    else:
        g, quad = quad_and_graph
    vecs = (vec_a, vec_b, vec_c, vec_d)
    lv = vecs[0][0].level()
    for idx in range(4):
        for jdx in range(idx + 1, 4):
            ker = left_kernel([vecs[idx], vecs[jdx]])
            if ker:
                raise DegenerateConfig("two of the four lines coincide")
    ker = left_kernel([vec_a, vec_b, vec_d])
    if len(ker) != 1:
        raise DegenerateConfig("lines a, b, d are not in general position")
    la, lb, ld = ker[0]
    for lam in (la, lb, ld):
        if lam.is_zero():
            raise DegenerateConfig("three of the four lines are collinear")
    a = tuple(la * x for x in vec_a)
    b = tuple(lb * x for x in vec_b)
    d = tuple(ld * x for x in vec_d)
    sol = solve_left([vec_c, vec_b], tuple(-x for x in d))
    if sol is None:
        raise DegenerateConfig("lines b, c, d are not in general position")
    mc, mb1 = sol
    if mc.is_zero() or mb1.is_zero():
        raise DegenerateConfig("three of the four lines are collinear")
    c = tuple(mc * x for x in vec_c)
    X = mb1 * lb.inv()

    # the X-loop transports b -> a -> d -> c -> b are (-1, -1, -1, -X) with
    # respect to the normalized vectors; stored as forward arcs
    arc = {("p1", "s1"): -one(lv), ("s1", "p2"): (-X).inv(),
           ("p2", "s2"): -one(lv), ("s2", "p1"): -one(lv)}
    ts = _fill_quad_transports(g, quad, arc, lv)
    bundle = GraphLineBundle(g, tuple(ts))
    return bundle, quad, X, (a, b, c, d)


def _fill_quad_transports(g, quad, arc, lv):
    """Per-dart transports realizing the given forward arcs on the quad
    graph, black fibers normalized at the incoming pendant dart."""
    b1, b2, _cycle, quad = quad_structure(g, quad)
    P1, S1, P2, S2 = quad.p1, quad.s1, quad.p2, quad.s2
    ts = [None] * g.n_darts

    def set_edge(u, v, t):
        d1 = _dart(g, u, v)
        ts[d1] = t
        ts[g.pairing[d1]] = t.inv()

    # through b1: forward arcs p1 -> s1 and s2 -> p1
    set_edge(P1, b1, one(lv))
    set_edge(b1, S1, arc[("p1", "s1")])
    set_edge(S2, b1, arc[("s2", "p1")])
    # through b2: forward arcs s1 -> p2 and p2 -> s2
    set_edge(P2, b2, one(lv))
    set_edge(b2, S2, arc[("p2", "s2")])
    set_edge(S1, b2, arc[("s1", "p2")])
    return ts


def quad_bundle_from_arcs(arc, lv, quad_and_graph=None):
    if quad_and_graph is None:
        g, quad = standard.quad_graph()
    else:
        g, quad = quad_and_graph
    ts = _fill_quad_transports(g, quad, arc, lv)
    return GraphLineBundle(g, tuple(ts)), quad


# ----------------------------------------------------------------------
# pentagon

def _pentagon_triangles(diags, n=5):
    edges = {(i, (i + 1) % n) for i in range(n)}
    edges |= {tuple(sorted(d)) for d in diags}
    edges = {tuple(sorted(e)) for e in edges}
    tris = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if {(a, b), (a, c), (b, c)} <= edges:
                    tris.append((a, b, c))
    return tris


def _diag_quad(diags, diag, n=5):
    """QuadSpec of the two triangles sharing the given diagonal."""
    tris = _pentagon_triangles(diags, n)
    i, k = sorted(diag)
    wings = [t for t in tris if i in t and k in t]
    if len(wings) != 2:
        raise NonGenericAtStep(-1, f"diagonal {diag} not flippable")
    pend = sorted(set(wings[0]) | set(wings[1]) - {i, k})
    pend = sorted((set(wings[0]) | set(wings[1])) - {i, k})
    j, l = pend
    # cyclic order around the quad follows the polygon order of (i, j, k, l)
    cyc = sorted([i, j, k, l])
    # rotate so a pendant comes first
    while cyc[0] not in (j, l):
        cyc = cyc[1:] + cyc[:1]
    return QuadSpec(cyc[0], cyc[1], cyc[2], cyc[3]), (j, l)


PENTAGON_FLIP_SLOTS = (1, 0, 1, 0, 1)


def pentagon_check(bundle, return_trace=False):
    """Five two-by-two moves around the pentagon of triangulations return
    the bundle with equal arc transports on the nose."""
    diags = [(0, 2), (0, 3)]
    cur = bundle

    def measure(b, ds):
        out = []
        for dg in ds:
            q, _new = _diag_quad(ds, dg)
            out.append(quad_monodromy(b, q, "s1"))
        return tuple(out)

    trace = [measure(cur, diags)]
    for step, slot in enumerate(PENTAGON_FLIP_SLOTS):
        quad, new_diag = _diag_quad(diags, diags[slot])
        try:
            cur, _ = mutate(cur, quad)
        except NotInvertible1PlusM:
            raise NonGenericAtStep(step)
        diags = list(diags)
        diags[slot] = new_diag
        trace.append(measure(cur, diags))
    ok = bundles_equal_on_arcs(bundle, cur)
    if return_trace:
        return {"ok": ok, "monodromies": trace}
    return ok


def classical_x_mutation(xs, eps, k):
    """Fock-Goncharov cluster Poisson mutation at node k (commutative)."""
    n = len(xs)
    lv = xs[0].level()
    out = list(xs)
    out[k] = xs[k].inv()
    for j in range(n):
        if j == k:
            continue
        e = eps[j][k]
        if e > 0:
            out[j] = xs[j] * (one(lv) + xs[k].inv()).inv() ** e
        elif e < 0:
            out[j] = xs[j] * (one(lv) + xs[k]) ** (-e)
    eps2 = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                eps2[i][j] = -eps[i][j]
            else:
                extra = 0
                if eps[i][k] * eps[k][j] > 0:
                    extra = eps[i][k] * eps[k][j] * (1 if eps[i][k] > 0 else -1)
                eps2[i][j] = eps[i][j] + extra
    return out, eps2


def classical_x_orbit(initial_pair, slots=PENTAGON_FLIP_SLOTS):
    """Orbit of the two pentagon quad monodromies predicted by the classical
    cluster Poisson mutation.  Quad monodromies are minus the cluster
    X-variables (the same sign as M = -X), so the dictionary negates in and
    out around the standard exchange rule."""
    xs = [-x for x in initial_pair]
    eps = [[0, -1], [1, 0]]
    out = [tuple(-x for x in xs)]
    for k in slots:
        xs, eps = classical_x_mutation(xs, eps, k)
        out.append(tuple(-x for x in xs))
    return out


def mutate_line_config(vec_a, vec_b, vec_c, vec_d):
    """The direct recomputation of Lemma OMMO: a' = a, b' = (1 - X)b,
    c' = -c, d' = (1 - X^{-1})d, as vectors."""
    bundle, quad, X, (a, b, c, d) = lines_to_bundle(vec_a, vec_b, vec_c, vec_d)
    lv = X.level()
    try:
        (one(lv) - X).inv()
        (one(lv) - X.inv()).inv()
    except NotInvertible:
        raise DegenerateConfig("1 - X is singular")
    a2 = a
    b2 = tuple((one(lv) - X) * x for x in b)
    c2 = tuple(-x for x in c)
    d2 = tuple((one(lv) - X.inv()) * x for x in d)
    return (a2, b2, c2, d2), X
