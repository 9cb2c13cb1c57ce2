"""Free lattice of loops on a ribbon graph and its Goldman-type bracket.

A loop is a reduced cyclic dart walk (no immediate backtracking), stored at
its lexicographically least rotation; the empty tuple is the class of the
contractible loop and acts as the unit under the trace map.  The local
pairing at a vertex assigns to two passages the half-integer

    delta_v(x, y) = 1/2 * sum_{i<j} (x_i y_j - x_j y_i),

x, y the out-minus-in indicator vectors of the passages in the cyclic dart
order; it is skew, basepoint-independent on degree-zero vectors, and takes
the value 1/2 on adjacent generators.  The bracket of two loops sums
delta_v over all pairs of coincident passages, weighting the rerooted
concatenation; on a bipartite graph the bracket is read through the
conjugate ribbon structure (equivalently, black vertices count negatively).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DartNotAtVertex, GraphMismatch
from .ribbon import BLACK, WHITE, conjugate
from .scalar import trace_rational


def reduce_walk(g, walk):
    """Remove cyclic backtracks to fixpoint; () is the trivial class."""
    word = list(walk)
    changed = True
    while changed and word:
        changed = False
        n = len(word)
        for i in range(n):
            j = (i + 1) % n
            if g.pairing[word[i]] == word[j]:
                if j > i:
                    del word[j]
                    del word[i]
                else:
                    del word[i]
                    del word[j]
                changed = True
                break
    return canonical_rotation(tuple(word))


def canonical_rotation(word):
    if not word:
        return ()
    rots = [word[i:] + word[:i] for i in range(len(word))]
    return min(rots)


def is_closed_walk(g, walk):
    for d, d2 in zip(walk, walk[1:] + (walk[0],) if isinstance(walk, tuple)
                     else list(walk[1:]) + [walk[0]]):
        p = g.pairing[d]
        if p is None or g.dart_vertex[d2] != g.dart_vertex[p]:
            return False
    return True


# ----------------------------------------------------------------------
# loop chains

def chain(*pairs):
    out = {}
    for loop, coef in pairs:
        c = out.get(loop, Fraction(0)) + Fraction(coef)
        if c:
            out[loop] = c
        elif loop in out:
            del out[loop]
    return out


def chain_add(a, b, scale=1):
    out = dict(a)
    for k, v in b.items():
        c = out.get(k, Fraction(0)) + Fraction(scale) * v
        if c:
            out[k] = c
        elif k in out:
            del out[k]
    return out


def chain_is_zero(c):
    return not c


# ----------------------------------------------------------------------
# the local form

def _ring_index(g, v, dart):
    ring = g.rings()[v]
    if dart not in ring:
        raise DartNotAtVertex(f"dart {dart} not at vertex {v}")
    return ring.index(dart), len(ring)


def vertex_form(g, v, chord1, chord2):
    """delta_v of two passages, each given as (in_dart, out_dart) with the
    in-dart pointing back along the arrival edge."""
    ring = g.rings()[v]
    k = len(ring)

    def vec(chord):
        inc, out = chord
        x = [Fraction(0)] * k
        for d, s in ((out, 1), (inc, -1)):
            if d not in ring:
                raise DartNotAtVertex(f"dart {d} not at vertex {v}")
            x[ring.index(d)] += s
        return x

    x, y = vec(chord1), vec(chord2)
    total = Fraction(0)
    for i in range(k):
        for j in range(i + 1, k):
            total += x[i] * y[j] - x[j] * y[i]
    return total / 2


def loop_passages(g, loop):
    """(vertex, in_dart, out_dart, position) for every step of the loop."""
    out = []
    n = len(loop)
    for i in range(n):
        d_prev = loop[i - 1]
        d_next = loop[i]
        v = g.dart_vertex[d_next]
        out.append((v, g.pairing[d_prev], d_next, i))
    return out


def _rotate(loop, i):
    return loop[i:] + loop[:i]


def goldman_bracket(g, alpha, beta):
    """Sum over coincident passages of delta_v times the rerooted
    concatenation (beta first, then alpha), reduced."""
    alpha = reduce_walk(g, alpha)
    beta = reduce_walk(g, beta)
    out = {}
    if not alpha or not beta:
        return out
    pa = loop_passages(g, alpha)
    pb = loop_passages(g, beta)
    for (va, ina, outa, i) in pa:
        for (vb, inb, outb, j) in pb:
            if va != vb:
                continue
            coef = vertex_form(g, va, (ina, outa), (inb, outb))
            if not coef:
                continue
            word = _rotate(beta, j) + _rotate(alpha, i)
            loop = reduce_walk(g, word)
            out = chain_add(out, {loop: coef})
    return out


def bipartite_bracket(g, alpha, beta):
    """The bracket of the conjugate ribbon structure: equivalently the
    goldman sum with black-vertex contributions negated."""
    return goldman_bracket(conjugate(g), alpha, beta)


def bipartite_bracket_signed(g, alpha, beta):
    """Direct form: sgn(v) delta_v with delta read in g's own cyclic orders,
    +1 at white and -1 at black vertices."""
    alpha = reduce_walk(g, alpha)
    beta = reduce_walk(g, beta)
    out = {}
    if not alpha or not beta:
        return out
    for (va, ina, outa, i) in loop_passages(g, alpha):
        for (vb, inb, outb, j) in loop_passages(g, beta):
            if va != vb:
                continue
            coef = vertex_form(g, va, (ina, outa), (inb, outb))
            if g.color[va] == BLACK:
                coef = -coef
            if not coef:
                continue
            word = _rotate(beta, j) + _rotate(alpha, i)
            out = chain_add(out, {reduce_walk(g, word): coef})
    return out


def bracket_chains(g, ca, cb, bracket=bipartite_bracket):
    out = {}
    for la, xa in ca.items():
        for lb, xb in cb.items():
            term = bracket(g, la, lb)
            out = chain_add(out, term, scale=xa * xb)
    return out


def jacobi_check(g, alpha, beta, gamma, bracket=bipartite_bracket):
    """{a,{b,c}} + {b,{c,a}} + {c,{a,b}} = 0 in the loop lattice."""
    total = {}
    for (x, y, z) in ((alpha, beta, gamma), (beta, gamma, alpha),
                      (gamma, alpha, beta)):
        inner = bracket(g, y, z)
        for loop, coef in inner.items():
            if not loop:
                continue
            total = chain_add(total, bracket(g, x, loop), scale=coef)
    return chain_is_zero(total)


# ----------------------------------------------------------------------
# loop enumeration and the trace map

def enumerate_loops(g, max_len):
    """Canonical reduced loops of dart length <= max_len (no unit)."""
    found = set()
    n = g.n_darts

    def extend(word):
        if len(word) > max_len:
            return
        d = word[-1]
        p = g.pairing[d]
        if p is None:
            return
        w = g.dart_vertex[p]
        for e in range(n):
            if g.dart_vertex[e] != w or e == p:
                continue
            if e < word[0]:
                continue
            nxt = word + (e,)
            if g.dart_vertex[g.pairing[nxt[-1]]] == g.dart_vertex[nxt[0]] \
                    and nxt[-1] != g.pairing[nxt[0]]:
                loop = reduce_walk(g, nxt)
                if loop and len(loop) <= max_len:
                    found.add(loop)
            if len(nxt) < max_len:
                extend(nxt)

    for d in range(n):
        if g.pairing[d] is not None:
            extend((d,))
    return sorted(found)


def trace_hom(bundle, loop_chain):
    """Linear extension of loop -> normalized trace of the monodromy; the
    unit class maps to 1."""
    from .linebundle import monodromy
    g = bundle.graph
    total = Fraction(0)
    for loop, coef in loop_chain.items():
        if not loop:
            total += coef
            continue
        for d in loop:
            if d >= g.n_darts:
                raise GraphMismatch("loop uses darts outside the graph")
        m = monodromy(bundle, list(loop))
        total += coef * trace_rational(m)
    return total
