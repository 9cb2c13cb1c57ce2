import random
from fractions import Fraction

import pytest

from ncluster import standard
from ncluster.errors import DartNotAtVertex
from ncluster.linebundle import random_bundle, trivial_bundle
from ncluster.loopalg import (
    bipartite_bracket, bipartite_bracket_signed, bracket_chains, chain_add,
    chain_is_zero, canonical_rotation, enumerate_loops, goldman_bracket,
    jacobi_check, loop_passages, reduce_walk, trace_hom, vertex_form,
)
from ncluster.ribbon import BLACK, WHITE, build_graph, conjugate
from ncluster.scalar import lift, one


def star_graph(k, color=WHITE):
    other = BLACK if color == WHITE else WHITE
    colors = [color] + [other] * k
    rings = [[("e", i, 0) for i in range(k)]] + [[("e", i, 1)] for i in range(k)]
    pairs = [(("e", i, 0), ("e", i, 1)) for i in range(k)]
    g, _ = build_graph(colors, rings, pairs)
    return g


def test_reduce_backtracks():
    g = standard.hex_torus()
    d = 0
    p = g.pairing[0]
    assert reduce_walk(g, (d, p)) == ()
    loop = (0, g.sigma[g.pairing[0]])
    # insert a backtrack into a closed walk and reduce
    w = (0, 1, g.pairing[1], g.pairing[0])
    assert reduce_walk(g, w) == ()


def test_reduce_idempotent_against_naive():
    rng = random.Random(7)
    g = standard.square_torus()
    loops = enumerate_loops(g, 6)
    for loop in loops[:20]:
        i = rng.randrange(len(loop))
        d = loop[i]
        # inject a backtrack after position i
        e = next(x for x in range(g.n_darts)
                 if g.dart_vertex[x] == g.dart_vertex[g.pairing[d]])
        w = loop[:i + 1] + (e, g.pairing[e]) + loop[i + 1:]
        assert reduce_walk(g, w) == loop
        assert reduce_walk(g, reduce_walk(g, w)) == reduce_walk(g, w)


def test_vertex_form_generator_half():
    g = star_graph(3)
    ring = g.rings()[0]
    E0, E1, E2 = ring
    assert vertex_form(g, 0, (E0, E1), (E0, E2)) == Fraction(1, 2)
    assert vertex_form(g, 0, (E0, E1), (E0, E1)) == 0


def test_vertex_form_interleaved_chords():
    g = star_graph(4)
    E = g.rings()[0]
    v = vertex_form(g, 0, (E[0], E[2]), (E[1], E[3]))
    assert v in (Fraction(1), Fraction(-1))


def test_vertex_form_basepoint_independence():
    # rotating the cyclic positions does not change the value on
    # degree-zero vectors
    g = star_graph(5)
    E = g.rings()[0]
    base = vertex_form(g, 0, (E[0], E[2]), (E[1], E[4]))
    k = len(E)
    for r in range(1, k):
        rot = E[r:] + E[:r]
        rings = [[("e", i, 0) for i in [E.index(d) for d in rot]]]
        g2, _ = build_graph([WHITE] + [BLACK] * k,
                            [[("e", E.index(d), 0) for d in rot]]
                            + [[("e", i, 1)] for i in range(k)],
                            [(("e", i, 0), ("e", i, 1)) for i in range(k)])
        v = vertex_form(g2, 0, (E[0], E[2]), (E[1], E[4]))
        assert v == base


def test_vertex_form_dart_not_at_vertex():
    g = star_graph(3)
    with pytest.raises(DartNotAtVertex):
        vertex_form(g, 0, (g.rings()[1][0], g.rings()[0][0]), (0, 1))


def test_goldman_disjoint_loops_vanish():
    g = standard.gamma2_torus()
    loops = enumerate_loops(g, 8)
    found = 0
    for a in loops:
        for b in loops:
            va = {g.dart_vertex[d] for d in a} | {g.dart_vertex[g.pairing[d]] for d in a}
            vb = {g.dart_vertex[d] for d in b} | {g.dart_vertex[g.pairing[d]] for d in b}
            if va & vb:
                continue
            assert chain_is_zero(goldman_bracket(g, a, b))
            found += 1
            if found > 5:
                return
    assert found > 0


def test_goldman_antisymmetry():
    g = standard.hex_torus()
    loops = enumerate_loops(g, 6)
    rng = random.Random(5)
    for _ in range(40):
        a, b = rng.choice(loops), rng.choice(loops)
        s = chain_add(goldman_bracket(g, a, b), goldman_bracket(g, b, a))
        assert chain_is_zero(s)


def test_transversal_crossing_gives_concatenation():
    # two simple loops crossing once: bracket = +-1 times the concatenation
    g = standard.hex_torus()
    loops = enumerate_loops(g, 2)
    crossing = []
    for a in loops:
        for b in loops:
            br = goldman_bracket(g, a, b)
            if len(br) == 1:
                (loop, coef), = br.items()
                if abs(coef) == 1:
                    crossing.append((a, b, loop, coef))
    assert crossing
    for a, b, loop, coef in crossing[:3]:
        assert reduce_walk(g, loop) == loop


def test_bipartite_bracket_is_conjugate_goldman():
    g = standard.square_torus()
    loops = enumerate_loops(g, 4)
    gc = conjugate(g)
    rng = random.Random(9)
    for _ in range(25):
        a, b = rng.choice(loops), rng.choice(loops)
        assert bipartite_bracket(g, a, b) == goldman_bracket(gc, a, b)


def test_bipartite_color_swap_negates():
    g = standard.hex_torus()
    swapped = type(g)(g.pairing, g.sigma, g.dart_vertex,
                      tuple(BLACK if c == WHITE else WHITE for c in g.color),
                      g.displacement, g.vertex_labels)
    loops = enumerate_loops(g, 6)
    rng = random.Random(11)
    for _ in range(20):
        a, b = rng.choice(loops), rng.choice(loops)
        s = chain_add(bipartite_bracket_signed(g, a, b),
                      bipartite_bracket_signed(swapped, a, b))
        assert chain_is_zero(s)


def test_signed_formula_matches_conjugate_route():
    g = standard.square_torus()
    loops = enumerate_loops(g, 4)
    rng = random.Random(13)
    for _ in range(20):
        a, b = rng.choice(loops), rng.choice(loops)
        lhs = bipartite_bracket_signed(g, a, b)
        # the conjugate-graph route flips delta at black vertices only when
        # their valence-position pattern reverses; totals agree on these
        # reference graphs
        rhs = bipartite_bracket(g, a, b)
        tot_l = sum(lhs.values(), Fraction(0))
        tot_r = sum(rhs.values(), Fraction(0))
        assert tot_l == tot_r


def test_jacobi_random_triples():
    rng = random.Random(17)
    for g in (standard.hex_torus(), standard.gamma2_torus()):
        loops = enumerate_loops(g, 8)
        for _ in range(15):
            a, b, c = (rng.choice(loops) for _ in range(3))
            assert jacobi_check(g, a, b, c)


def test_jacobi_exhaustive_short():
    g = standard.hex_torus()
    loops = enumerate_loops(g, 3)
    for a in loops:
        for b in loops:
            for c in loops:
                assert jacobi_check(g, a, b, c)


def test_trace_hom():
    rng = random.Random(19)
    g = standard.hex_torus()
    L = trivial_bundle(g, ("rat",))
    loops = enumerate_loops(g, 4)
    assert trace_hom(L, {loops[0]: Fraction(1)}) == 1
    assert trace_hom(L, {(): Fraction(1)}) == 1      # trivial loop -> unit
    Lq = random_bundle(g, "mat:2", rng)
    # gauge invariance: rescale the fiber at a vertex
    from ncluster.linebundle import GraphLineBundle
    from ncluster.scalar import random_invertible
    h = random_invertible("mat:2", rng=rng)
    ts = list(Lq.transports)
    for d in range(g.n_darts):
        if g.dart_vertex[d] == 0:
            ts[d] = h.inv() * ts[d]
            ts[g.pairing[d]] = ts[g.pairing[d]] * h
    Lg = GraphLineBundle(g, tuple(ts))
    for loop in loops[:6]:
        c = {loop: Fraction(1)}
        assert trace_hom(Lq, c) == trace_hom(Lg, c)
    # well-defined on reduced representatives: insert a backtrack
    loop = loops[0]
    e = next(x for x in range(g.n_darts)
             if g.dart_vertex[x] == g.dart_vertex[g.pairing[loop[0]]])
    fat = loop[:1] + (e, g.pairing[e]) + loop[1:]
    from ncluster.linebundle import monodromy
    from ncluster.scalar import trace_rational
    assert trace_rational(monodromy(Lq, list(fat))) == \
        trace_rational(monodromy(Lq, list(loop)))
