"""Flags in R^m over a skew field and their spectral line-bundle description.

A generic triple of flags produces, at every white vertex (a, b, c) of the
triangle graph, the line A^{a-1} cap B^{b-1} cap C^{c-1}; projecting onto the
graded lines of the three flags yields parallel transports whose composite
around every white vertex is +1 and around every internal black vertex is -1.
The inverse direction rebuilds the flags from snake direct sums, with the
snake transition matrices given by sums over downward lattice paths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (AmbientMismatch, BadMonodromySigns, NotASnake,
                     NotGeneric, NotInvertible)
from .linalg import (in_span, left_kernel, row_span_dim, rref, solve_left,
                     vec_is_zero, vec_scale, vec_sub)
from .ribbon import WHITE, gamma_m
from .scalar import Matrix, lift, one, random_scalar, zero


# ----------------------------------------------------------------------
# subspaces and flags

@dataclass(frozen=True)
class Subspace:
    ambient: int
    rows: tuple      # reduced echelon rows

    @staticmethod
    def from_rows(ambient, rows):
        red, _ = rref(list(rows))
        return Subspace(ambient, tuple(tuple(r) for r in red))

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, v):
        return in_span(list(self.rows), tuple(v))

    def __le__(self, other):
        return all(other.contains(r) for r in self.rows)


def intersect(a, b):
    """Exact intersection of two row spans."""
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"{a.ambient} vs {b.ambient}")
    rows = list(a.rows) + list(b.rows)
    na = len(a.rows)
    ker = left_kernel(rows)
    vecs = []
    for x in ker:
        v = None
        for i in range(na):
            t = vec_scale(x[i], a.rows[i])
            v = t if v is None else tuple(p + q for p, q in zip(v, t))
        if v is not None and not vec_is_zero(v):
            vecs.append(v)
    return Subspace.from_rows(a.ambient, vecs)


def intersect_many(spaces):
    out = spaces[0]
    for s in spaces[1:]:
        out = intersect(out, s)
    return out


@dataclass(frozen=True)
class Flag:
    """Descending chain V = F^0 > F^1 > ... > F^m = 0, codim F^i = i."""
    ambient: int
    chain: tuple        # chain[i] = Subspace of dim m - i

    @staticmethod
    def from_basis(rows):
        """F^i is the span of the first m - i basis rows."""
        m = len(rows)
        if row_span_dim(list(rows)) != m:
            raise NotGeneric("basis rows are dependent")
        chain = [Subspace.from_rows(m, rows[:m - i]) for i in range(m + 1)]
        return Flag(m, tuple(chain))

    def step(self, i):
        """F^i as a Subspace (i from 0 to m)."""
        return self.chain[i]

    def graded_rep(self, i):
        """A vector in F^{i-1} not in F^i, representing gr^i."""
        for r in self.chain[i - 1].rows:
            if not self.chain[i].contains(r):
                return r
        raise NotGeneric("flag chain degenerate")


@dataclass(frozen=True)
class DecoratedFlag:
    flag: Flag
    reps: tuple        # reps[i-1] in F^{i-1} \ F^i represents gr^i

    @staticmethod
    def from_basis(rows):
        """Decorations taken from the basis: gr^i gets rows[m - i]."""
        f = Flag.from_basis(rows)
        m = len(rows)
        reps = tuple(rows[m - i] for i in range(1, m + 1))
        return DecoratedFlag(f, reps)

    def rep(self, i):
        return self.reps[i - 1]


def random_flag(kind, m, rng, bound=5, decorated=False):
    while True:
        rows = [tuple(random_scalar(kind, rng=rng, bound=bound) for _ in range(m))
                for _ in range(m)]
        try:
            if row_span_dim(rows) != m:
                continue
        except NotInvertible:
            continue
        return DecoratedFlag.from_basis(rows) if decorated else Flag.from_basis(rows)


# ----------------------------------------------------------------------
# genericity

def is_generic_pair(fa, fb):
    if fa.ambient != fb.ambient:
        raise AmbientMismatch("different ambient dimensions")
    m = fa.ambient
    for a in range(m + 1):
        b = m - a
        if intersect(fa.step(a), fb.step(b)).dim != 0:
            return False
    return True


def is_generic_triple(fa, fb, fc):
    if not (fa.ambient == fb.ambient == fc.ambient):
        raise AmbientMismatch("different ambient dimensions")
    m = fa.ambient
    for a in range(m + 1):
        for b in range(m + 1 - a):
            c = m - a - b
            k = intersect_many([fa.step(a), fb.step(b), fc.step(c)])
            if k.dim != 0:
                return False
    return True


def random_generic_triple(kind, m, rng, bound=5):
    while True:
        fa = random_flag(kind, m, rng, bound)
        fb = random_flag(kind, m, rng, bound)
        fc = random_flag(kind, m, rng, bound)
        if is_generic_triple(fa, fb, fc):
            return fa, fb, fc


# ----------------------------------------------------------------------
# flags -> line bundle on the triangle graph

def _grade_coefficient(flag, i, v):
    """v in F^{i-1}; coefficient of v on the gr^i representative."""
    rep = flag.graded_rep(i)
    rows = [rep] + list(flag.step(i).rows)
    lam = solve_left(rows, tuple(v))
    if lam is None:
        raise NotGeneric("vector does not lie in the expected flag step")
    return lam[0]


@dataclass(frozen=True)
class TriangleLineBundle:
    """Flat-line-bundle data of a flag triple on the gamma_m graph.

    arcs[(w1, w2)] is the transport coefficient of the composite
    L_{w1} -> gr -> L_{w2} through their shared graded line, for white
    vertices w1, w2 = (a, b, c) labels adjacent to a common black vertex.
    side[(w, X)] is the projection coefficient of L_w on gr of flag X.
    Coefficients compose in path order (left modules).
    sign_tag records that black monodromies are -1 (the hexagon twist).
    """
    m: int
    level: tuple
    arcs: dict
    side: dict
    lines: dict        # w -> basis vector of L_w (None when synthetic)
    sign_tag: str = "hexagon-minus-one"

    def graph(self):
        return gamma_m(self.m)

    def whites(self):
        return sorted(self.lines.keys())

    def blacks(self):
        m = self.m
        return [(p, q, r) for p in range(1, m) for q in range(1, m - p + 1)
                for r in [m + 1 - p - q] if r >= 1]

    def black_neighbors(self, b):
        p, q, r = b
        return [(p + 1, q, r), (p, q + 1, r), (p, q, r + 1)]

    def arc(self, key, w2=None):
        if w2 is not None:
            key = (key, w2)
        return self.arcs[key]

    def triangle_monodromy(self, w):
        """Composite of the three graded projections at a white vertex."""
        ca = self.side[(w, "A")]
        cb = self.side[(w, "B")]
        cc = self.side[(w, "C")]
        return ca.inv() * cb * cb.inv() * cc * cc.inv() * ca

    def hexagon_monodromy(self, b):
        """Composite of the six line isomorphisms around a black vertex."""
        l1, l2, l3 = self.black_neighbors(b)
        return self.arc((l1, l2)) * self.arc((l2, l3)) * self.arc((l3, l1))

    def validate_signs(self):
        lv = self.level
        for w in self.whites():
            if self.triangle_monodromy(w) != one(lv):
                raise BadMonodromySigns(f"triangle composite at {w} is not 1")
        for b in self.blacks():
            if self.hexagon_monodromy(b) != -one(lv):
                raise BadMonodromySigns(f"hexagon composite at {b} is not -1")
        return True


def flags_to_bundle(fa, fb, fc, m=None):
    """Lines L_w = A^{a-1} cap B^{b-1} cap C^{c-1} and their transports."""
    if m is None:
        m = fa.ambient
    flag = {"A": fa, "B": fb, "C": fc}
    if not (fa.ambient == fb.ambient == fc.ambient == m):
        raise AmbientMismatch("flags not in R^m")
    if not is_generic_triple(fa, fb, fc):
        raise NotGeneric("triple of flags is not generic")
    lines = {}
    side = {}
    level = fa.step(0).rows[0][0].level()
    whites = [(a, b, m + 2 - a - b) for a in range(1, m + 1)
              for b in range(1, m + 2 - a) if m + 2 - a - b >= 1]
    for w in whites:
        a, b, c = w
        sub = intersect_many([fa.step(a - 1), fb.step(b - 1), fc.step(c - 1)])
        if sub.dim != 1:
            raise NotGeneric(f"line at {w} has dimension {sub.dim}")
        v = sub.rows[0]
        lines[w] = v
        side[(w, "A")] = _grade_coefficient(fa, a, v)
        side[(w, "B")] = _grade_coefficient(fb, b, v)
        side[(w, "C")] = _grade_coefficient(fc, c, v)
    arcs = {}
    blacks = [(p, q, r) for p in range(1, m) for q in range(1, m - p + 1)
              for r in [m + 1 - p - q] if r >= 1]
    for bk in blacks:
        p, q, r = bk
        l1, l2, l3 = (p + 1, q, r), (p, q + 1, r), (p, q, r + 1)
        # shared graded lines: (l1,l2): gr^r C; (l2,l3): gr^p A; (l1,l3): gr^q B
        for wa, wb, X in ((l1, l2, "C"), (l2, l3, "A"), (l3, l1, "B")):
            ca, cb = side[(wa, X)], side[(wb, X)]
            arcs[(wa, wb)] = ca * cb.inv()
            arcs[(wb, wa)] = cb * ca.inv()
    tlb = TriangleLineBundle(m, level, arcs, side, lines)
    tlb.validate_signs()
    return tlb


# ----------------------------------------------------------------------
# snakes

def snakes(m):
    """All monotone snakes as tuples of white labels, level 1 to m."""
    out = [[(m, 1, 1)]]
    for _lvl in range(2, m + 1):
        nxt = []
        for s in out:
            a, b, c = s[-1]
            nxt.append(s + [(a - 1, b + 1, c)])
            nxt.append(s + [(a - 1, b, c + 1)])
        out = nxt
    return [tuple(s) for s in out]


def ab_snake(m):
    return tuple((m + 1 - i, i, 1) for i in range(1, m + 1))


def ac_snake(m):
    return tuple((m + 1 - i, 1, i) for i in range(1, m + 1))


def is_snake(m, pi):
    if len(pi) != m:
        return False
    if pi[0] != (m, 1, 1):
        return False
    for i in range(1, m):
        a, b, c = pi[i - 1]
        if pi[i] not in ((a - 1, b + 1, c), (a - 1, b, c + 1)):
            return False
    return True


def _a_paths(w, target):
    """All strictly-b-decreasing white paths from w to target."""
    if w == target:
        return [[w]]
    a, b, c = w
    if b <= target[1]:
        return []
    out = []
    for nxt in ((a + 1, b - 1, c), (a, b - 1, c + 1)):
        if nxt[0] + nxt[1] + nxt[2] == a + b + c and min(nxt) >= 1:
            for tail in _a_paths(nxt, target):
                out.append([w] + tail)
    return out


def _path_transport(bundle, path):
    t = one(bundle.level)
    for u, v in zip(path, path[1:]):
        t = t * bundle.arc((u, v))
    return t


def transition_by_path_sum(bundle, pi, pi2):
    """Entry [i][j] = sum of transports over all downward paths from snake
    vertex i of pi to vertex j of pi2.  This closed formula computes the
    canonical comparison when the snakes are transversal (checked against
    composites of elementary moves in the suite)."""
    m = bundle.m
    lv = bundle.level
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = zero(lv)
            for path in _a_paths(pi[i], pi2[j]):
                acc = acc + _path_transport(bundle, path)
            row.append(acc)
        rows.append(tuple(row))
    return Matrix(tuple(rows))


def _identity_matrix(m, lv):
    return Matrix(tuple(tuple(one(lv) if i == j else zero(lv) for j in range(m))
                        for i in range(m)))


def elementary_transition(bundle, pi, pi2):
    """Transition across one elementary move: identity away from the pivoted
    vertex, whose line is re-expanded over the previous vertex and the new
    one (the rank-2 relation at their shared black vertex)."""
    m = bundle.m
    diff = [i for i in range(m) if pi[i] != pi2[i]]
    if len(diff) != 1 or diff[0] == 0:
        raise NotASnake("snakes are not related by one elementary move")
    i = diff[0]
    lv = bundle.level
    rows = [list(r) for r in _identity_matrix(m, lv).rows]
    w, w2, prev = pi[i], pi2[i], pi[i - 1]
    rows[i] = [zero(lv)] * m
    rows[i][i - 1] = bundle.arc((w, prev))
    rows[i][i] = bundle.arc((w, w2))
    return Matrix(tuple(tuple(r) for r in rows))


def _snake_chain(pi, pi2):
    """Breadth-first chain of elementary moves from pi to pi2."""
    from collections import deque
    start, goal = tuple(pi), tuple(pi2)
    prev = {start: None}
    q = deque([start])
    while q:
        cur = q.popleft()
        if cur == goal:
            chain = [cur]
            while prev[chain[-1]] is not None:
                chain.append(prev[chain[-1]])
            return list(reversed(chain))
        for nxt in elementary_moves(cur):
            if nxt not in prev:
                prev[nxt] = cur
                q.append(nxt)
    raise NotASnake("snakes are not connected by elementary moves")


def snake_transition(bundle, pi, pi2):
    """Canonical comparison V_pi -> V_pi2: the composite of elementary
    transitions along any chain of moves (chain-independent thanks to the
    hexagon signs); entry [i][j] is a left coefficient, products in path
    order."""
    m = bundle.m
    for s in (pi, pi2):
        if not is_snake(m, tuple(s)):
            raise NotASnake(f"{s} is not a snake")
    lv = bundle.level
    if tuple(pi) == tuple(pi2):
        return _identity_matrix(m, lv)
    chain = _snake_chain(pi, pi2)
    out = None
    for s, s2 in zip(chain, chain[1:]):
        step = elementary_transition(bundle, s, s2)
        out = step if out is None else out * step
    return out


def elementary_moves(pi):
    """Snakes differing from pi by pivoting one vertex."""
    pi = list(pi)
    m = len(pi)
    out = []
    for i in range(1, m):
        pa, pb, pc = pi[i - 1]
        succ = [(pa - 1, pb + 1, pc), (pa - 1, pb, pc + 1)]
        alt = succ[0] if pi[i] == succ[1] else succ[1]
        if min(alt) < 1:
            continue
        if i + 1 < m:
            a, b, c = alt
            if pi[i + 1] not in ((a - 1, b + 1, c), (a - 1, b, c + 1)):
                continue
        cand = pi[:i] + [alt] + pi[i + 1:]
        if is_snake(m, tuple(cand)):
            out.append(tuple(cand))
    return out


# ----------------------------------------------------------------------
# line bundle -> flags

def synthetic_bundle(m, kind, rng, bound=5):
    """Random triangle bundle with the correct +-1 sign pattern, given by
    free arc transports around each black vertex subject to hexagon = -1."""
    from .scalar import random_invertible
    whites = [(a, b, m + 2 - a - b) for a in range(1, m + 1)
              for b in range(1, m + 2 - a) if m + 2 - a - b >= 1]
    blacks = [(p, q, r) for p in range(1, m) for q in range(1, m - p + 1)
              for r in [m + 1 - p - q] if r >= 1]
    lv = None
    arcs = {}
    for bk in blacks:
        p, q, r = bk
        l1, l2, l3 = (p + 1, q, r), (p, q + 1, r), (p, q, r + 1)
        t12 = random_invertible(kind, rng=rng, bound=bound)
        t23 = random_invertible(kind, rng=rng, bound=bound)
        lv = t12.level()
        t31 = (t12 * t23).inv() * lift(-1, lv)
        for (u, v), t in (((l1, l2), t12), ((l2, l3), t23), ((l3, l1), t31)):
            arcs[(u, v)] = t
            arcs[(v, u)] = t.inv()
    side = {}
    lines = {w: None for w in whites}
    return TriangleLineBundle(m, lv, arcs, side, lines)


def check_bundle_signs(bundle):
    lv = bundle.level
    for bk in bundle.blacks():
        if bundle.hexagon_monodromy(bk) != -one(lv):
            raise BadMonodromySigns(f"hexagon composite at {bk} is not -1")
    return True


def bundle_to_flags(bundle, m=None):
    """Build V over the AB snake and read off the three flags."""
    if m is None:
        m = bundle.m
    check_bundle_signs(bundle)
    lv = bundle.level
    pi = ab_snake(m)
    pi2 = ac_snake(m)
    basis = [tuple(one(lv) if j == i else zero(lv) for j in range(m))
             for i in range(m)]
    fa = Flag.from_basis(basis)                      # A^a = lines 1..m-a
    fb = Flag.from_basis(list(reversed(basis)))      # B^b = lines b+1..m
    trans = snake_transition(bundle, pi2, pi)        # V_pi2 -> V_pi
    crows = [tuple(trans.rows[j]) for j in range(m)]
    fc = Flag.from_basis(list(reversed(crows)))      # C^c = lines c+1..m of pi2
    return fa, fb, fc


def gauge_equivalent(b1, b2):
    """White-vertex gauge G with t2(u,v) = G_u^{-1} t1(u,v) G_v on every arc,
    or None.  Tree transports reduce the problem to one intertwiner between
    the two holonomy representations at the root."""
    from .scalar import solve_intertwiner
    if b1.m != b2.m or b1.level != b2.level:
        return None
    lv = b1.level
    whites = sorted(set(k[0] for k in b1.arcs))
    root = whites[0]
    adj = {}
    for (u, v) in b1.arcs:
        adj.setdefault(u, set()).add(v)
    parent = {root: None}
    order = [root]
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in sorted(adj.get(u, ())):
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)

    def tree_path(bundle, w):
        t = one(lv)
        chain = []
        while parent[w] is not None:
            chain.append((parent[w], w))
            w = parent[w]
        for (u, v) in reversed(chain):
            t = t * bundle.arcs[(u, v)]
        return t

    p1 = {w: tree_path(b1, w) for w in whites}
    p2 = {w: tree_path(b2, w) for w in whites}
    pairs = []
    for (u, v), t1 in b1.arcs.items():
        h1 = p1[u] * t1 * p1[v].inv()
        h2 = p2[u] * b2.arcs[(u, v)] * p2[v].inv()
        if h1 != h2:
            pairs.append((h1, h2))
    if not pairs:
        g = one(lv)
    else:
        g = solve_intertwiner(pairs, lv)
        if g is None:
            return None
    gauge = {w: p1[w].inv() * g * p2[w] for w in whites}
    for (u, v), t1 in b1.arcs.items():
        if gauge[u].inv() * t1 * gauge[v] != b2.arcs[(u, v)]:
            return None
    return gauge


def flag_triple_isomorphic(t1, t2):
    """Change of basis carrying one flag triple to another, if any."""
    (a1, b1, c1), (a2, b2, c2) = t1, t2
    m = a1.ambient
    bu1 = flags_to_bundle(a1, b1, c1, m)
    bu2 = flags_to_bundle(a2, b2, c2, m)
    return gauge_equivalent(bu1, bu2) is not None
