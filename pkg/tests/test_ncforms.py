import random
from fractions import Fraction

import pytest

from ncluster import standard
from ncluster.ncforms import (
    closedness_check, cocycle_check, const, eval_one_form, eval_pair_form,
    frm1_exprs, graph_omega, inv_expr, mutation_invariance_identity, n_form,
    pushforward, quad_point_exprs, var, vertex_form, vertex_form_resolution,
    derivative, _product_expr,
)
from ncluster.scalar import Matrix, Rational, lift, one, random_invertible, random_scalar


def rng_mats(rng, n=3, count=1, bound=5):
    return [random_invertible(f"mat:{n}", rng=rng, bound=bound) for _ in range(count)]


def rng_tangent(rng, names, n=3, bound=5):
    return {nm: random_scalar(f"mat:{n}", rng=rng, bound=bound) for nm in names}


def test_pair_form_commutative_is_dlog_wedge():
    rng = random.Random(1)
    for _ in range(10):
        a, b = rng_mats(rng, n=1, count=2)
        point = {"a": a, "b": b}
        t1 = rng_tangent(rng, ["a", "b"], n=1)
        t2 = rng_tangent(rng, ["a", "b"], n=1)
        val = eval_pair_form(var("a"), var("b"), point, t1, t2)
        da1, db1 = t1["a"].rows[0][0].value, t1["b"].rows[0][0].value
        da2, db2 = t2["a"].rows[0][0].value, t2["b"].rows[0][0].value
        av, bv = a.rows[0][0].value, b.rows[0][0].value
        oracle = (da1 * db2 - da2 * db1) / (av * bv)
        assert val == oracle


def test_pair_form_antisymmetry_and_diagonal():
    rng = random.Random(2)
    a, b = rng_mats(rng, count=2)
    point = {"a": a, "b": b}
    t1 = rng_tangent(rng, ["a", "b"])
    t2 = rng_tangent(rng, ["a", "b"])
    v12 = eval_pair_form(var("a"), var("b"), point, t1, t2)
    v21 = eval_pair_form(var("a"), var("b"), point, t2, t1)
    assert v12 == -v21
    assert eval_pair_form(var("a"), var("b"), point, t1, t1) == 0
    # commutative diagonal: dlog a wedge dlog a = 0
    a1, b1 = rng_mats(random.Random(4), n=1, count=2)
    p1 = {"a": a1, "b": b1}
    s1 = rng_tangent(random.Random(5), ["a", "b"], n=1)
    s2 = rng_tangent(random.Random(6), ["a", "b"], n=1)
    assert eval_pair_form(var("a"), var("a"), p1, s1, s2) == 0


def test_inversion_identity_f2():
    # {a,b} + {b^{-1}, a^{-1}} = 0
    rng = random.Random(3)
    for _ in range(10):
        a, b = rng_mats(rng, count=2)
        point = {"a": a, "b": b}
        t1 = rng_tangent(rng, ["a", "b"])
        t2 = rng_tangent(rng, ["a", "b"])
        v = eval_pair_form(var("a"), var("b"), point, t1, t2)
        w = eval_pair_form(inv_expr(var("b")), inv_expr(var("a")), point, t1, t2)
        assert v + w == 0


def test_cocycle_n1_and_n2():
    rng = random.Random(5)
    for _ in range(6):
        a, b, c = rng_mats(rng, count=3)
        point = {"a": a, "b": b, "c": c}
        t1 = rng_tangent(rng, ["a", "b", "c"])
        t2 = rng_tangent(rng, ["a", "b", "c"])
        # n = 1: {a} - {ab} + {b} = 0
        assert cocycle_check([var("a"), var("b")], point, [t1]) == 0
        # n = 2: {b,c} - {ab,c} + {a,bc} - {a,b} = 0
        assert cocycle_check([var("a"), var("b"), var("c")], point, [t1, t2]) == 0


def test_cocycle_n3():
    rng = random.Random(7)
    a, b, c, d = rng_mats(rng, n=2, count=4)
    point = {"a": a, "b": b, "c": c, "d": d}
    ts = [rng_tangent(rng, list("abcd"), n=2) for _ in range(3)]
    assert cocycle_check([var(x) for x in "abcd"], point, ts) == 0


def test_x_one_plus_x():
    # {x, 1+x} = {1+x, x}
    rng = random.Random(9)
    for _ in range(10):
        x = rng_mats(rng)[0]
        point = {"x": x}
        t1 = rng_tangent(rng, ["x"])
        t2 = rng_tangent(rng, ["x"])
        one_plus = lambda vals: one(vals["x"].level()) + vals["x"]
        v = eval_pair_form(var("x"), one_plus, point, t1, t2)
        w = eval_pair_form(one_plus, var("x"), point, t1, t2)
        assert v == w


def test_cyclic_invariance_given_product_one():
    # a1 a2 a3 = 1: {a1,a2} = {a2,a3} = {a3,a1}
    rng = random.Random(11)
    a1, a2 = rng_mats(rng, count=2)
    point = {"a1": a1, "a2": a2}
    a3 = inv_expr(_product_expr(var("a1"), var("a2")))
    t1 = rng_tangent(rng, ["a1", "a2"])
    t2 = rng_tangent(rng, ["a1", "a2"])
    v1 = eval_pair_form(var("a1"), var("a2"), point, t1, t2)
    v2 = eval_pair_form(var("a2"), a3, point, t1, t2)
    v3 = eval_pair_form(a3, var("a1"), point, t1, t2)
    assert v1 == v2 == v3


def test_closedness_trc():
    rng = random.Random(13)
    for _ in range(5):
        a, b = rng_mats(rng, n=2, count=2)
        point = {"a": a, "b": b}
        ts = [rng_tangent(rng, ["a", "b"], n=2) for _ in range(3)]
        lhs, rhs = closedness_check(var("a"), var("b"), point, *ts)
        assert lhs == rhs


def test_closedness_commutative_zero():
    rng = random.Random(15)
    a, b = rng_mats(rng, n=1, count=2)
    point = {"a": a, "b": b}
    ts = [rng_tangent(rng, ["a", "b"], n=1) for _ in range(3)]
    lhs, rhs = closedness_check(var("a"), var("b"), point, *ts)
    assert lhs == rhs == 0


def test_vertex_form_resolution_independence():
    rng = random.Random(17)
    # 4-valent vertex: product of coordinates = 1
    a1, a2, a3 = rng_mats(rng, count=3)
    point = {"a1": a1, "a2": a2, "a3": a3}
    x4 = inv_expr(_product_expr(_product_expr(var("a1"), var("a2")), var("a3")))
    exprs = [var("a1"), var("a2"), var("a3"), x4]
    t1 = rng_tangent(rng, ["a1", "a2", "a3"])
    t2 = rng_tangent(rng, ["a1", "a2", "a3"])
    left = vertex_form_resolution(exprs, point, t1, t2, "left")
    right = vertex_form_resolution(exprs, point, t1, t2, "right")
    rot = vertex_form_resolution(exprs, point, t1, t2, "rotated")
    assert left == right == rot
    # 5-valent
    a4 = rng_mats(rng)[0]
    point["a4"] = a4
    x5 = lambda vals: (vals["a1"] * vals["a2"] * vals["a3"] * vals["a4"]).inv()
    exprs5 = [var("a1"), var("a2"), var("a3"), var("a4"), x5]
    t1 = rng_tangent(rng, ["a1", "a2", "a3", "a4"])
    t2 = rng_tangent(rng, ["a1", "a2", "a3", "a4"])
    assert vertex_form_resolution(exprs5, point, t1, t2, "left") == \
        vertex_form_resolution(exprs5, point, t1, t2, "right")


def test_mutation_invariance_identity_matrix_points():
    rng = random.Random(19)
    done = 0
    while done < 8:
        vals = rng_mats(rng, n=3, count=4, bound=4)
        point = {f"a{i+1}": v for i, v in enumerate(vals)}
        try:
            for b in frm1_exprs():
                b(point).inv()
        except Exception:
            continue
        t1 = rng_tangent(rng, list(point), n=3)
        t2 = rng_tangent(rng, list(point), n=3)
        lhs, rhs = mutation_invariance_identity(point, t1, t2)
        assert lhs == rhs
        done += 1


def test_mutation_invariance_commutative():
    rng = random.Random(21)
    done = 0
    while done < 10:
        vals = rng_mats(rng, n=1, count=4)
        point = {f"a{i+1}": v for i, v in enumerate(vals)}
        try:
            for b in frm1_exprs():
                b(point).inv()
        except Exception:
            continue
        t1 = rng_tangent(rng, list(point), n=1)
        t2 = rng_tangent(rng, list(point), n=1)
        lhs, rhs = mutation_invariance_identity(point, t1, t2)
        assert lhs == rhs
        done += 1


def test_pushforward_zero_and_chain():
    rng = random.Random(23)
    vals = rng_mats(rng, n=2, count=4, bound=4)
    point = {f"a{i+1}": v for i, v in enumerate(vals)}
    zero_t = {k: v - v for k, v in point.items()}
    assert all(x.is_zero() for x in pushforward(point, zero_t))
    # commutative hand derivative: b2 = (1 + A4)^{-1} a4 with A4 = a4a1a2a3
    vals1 = rng_mats(rng, n=1, count=4)
    p1 = {f"a{i+1}": v for i, v in enumerate(vals1)}
    t = rng_tangent(rng, list(p1), n=1)
    outs = pushforward(p1, t)
    a = {k: v.rows[0][0].value for k, v in p1.items()}
    da = {k: v.rows[0][0].value for k, v in t.items()}
    A4 = a["a4"] * a["a1"] * a["a2"] * a["a3"]
    dA4 = A4 * sum(da[k] / a[k] for k in a)
    b2 = a["a4"] / (1 + A4)
    db2 = da["a4"] / (1 + A4) - a["a4"] * dA4 / (1 + A4) ** 2
    assert outs[1].rows[0][0].value == db2


def test_graph_omega_commutative_matches_classical():
    # quad-with-legs graph, rational 1x1 point: Omega equals the classical
    # sum over vertices of +- dlog wedge dlog
    rng = random.Random(25)
    g, quad = standard.quad_graph_with_legs()
    from ncluster.acluster import random_quad_coordinates, quad_edges
    ac = random_quad_coordinates(g, quad, "rat", rng)
    quad2, b1v, b2v, edges, pend1, pend2 = quad_edges(g, quad)
    point_values = {"face": [Matrix(((ac.delta[e],),)) for e in edges], "legs": {}}
    for e, v in ac.delta.items():
        if len(e) == 1:
            point_values["legs"][e] = Matrix(((v,),))
    exprs, point = quad_point_exprs(g, quad, point_values)
    names = sorted(point)
    t1 = rng_tangent(rng, names, n=1)
    t2 = rng_tangent(rng, names, n=1)
    val = graph_omega(g, exprs, point, t1, t2)

    # classical oracle: sum_v sgn(v) sum_{i<j} dlog x_i wedge dlog x_j
    def dlog(e, tang):
        expr = exprs[e]
        x = expr(point).rows[0][0].value
        dx = derivative(expr, point, tang).rows[0][0].value
        return dx / x

    classical = Fraction(0)
    for v, ring in enumerate(g.rings()):
        sgn = 1 if g.color[v] == "w" else -1
        es = [g.edge_of(d) for d in ring]
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                classical += sgn * (dlog(es[i], t1) * dlog(es[j], t2)
                                    - dlog(es[i], t2) * dlog(es[j], t1))
    assert val == classical


def test_graph_omega_invariance_under_mutation():
    # omega(Gamma', mutate_a(p), pushforward tangents) = omega(Gamma, p, .)
    rng = random.Random(27)
    g, quad = standard.quad_graph_with_legs()
    from ncluster.acluster import ACoordinates, mutate_a, quad_edges, validate
    quadn, b1v, b2v, edges, pend1, pend2 = quad_edges(g, quad)
    done = 0
    while done < 4:
        face = rng_mats(rng, n=2, count=4, bound=4)
        point = {f"a{i+1}": v for i, v in enumerate(face)}
        try:
            for b in frm1_exprs():
                b(point).inv()
        except Exception:
            continue
        done += 1
        lv = face[0].level()
        legs = {}
        for v, ring in enumerate(g.rings()):
            for d in ring:
                if g.pairing[d] is None:
                    legs[g.edge_of(d)] = one(lv)
        exprs, pt = quad_point_exprs(g, quad, {"face": face, "legs": legs})
        t1 = rng_tangent(rng, list(pt), n=2)
        t2 = rng_tangent(rng, list(pt), n=2)
        before = graph_omega(g, exprs, pt, t1, t2)

        # honest mutated graph via mutate_a (legs need coordinate entries)
        delta = {e: v for e, v in zip(edges, face)}
        delta[pend1] = -(face[0] * face[1]).inv()
        delta[pend2] = -(face[2] * face[3]).inv()
        delta.update(legs)
        ac2, quad2 = mutate_a(ACoordinates(g, delta), quad)
        g2 = ac2.graph
        quadm, b1m, b2m, edges2, pend1m, pend2m = quad_edges(g2, quad2)
        new_face = [ac2.delta[e] for e in edges2]
        legs2 = {e: v for e, v in ac2.delta.items() if len(e) == 1}
        exprs2, pt2 = quad_point_exprs(g2, quad2, {"face": new_face, "legs": legs2})
        # stored faces are eps * b_{i+1}; push tangents the same way
        push1 = pushforward(pt, t1)
        push2 = pushforward(pt, t2)
        eps = [1, -1, 1, -1]
        nt1 = {f"a{i+1}": eps[i] * push1[(i + 1) % 4] for i in range(4)}
        nt2 = {f"a{i+1}": eps[i] * push2[(i + 1) % 4] for i in range(4)}
        after = graph_omega(g2, exprs2, pt2, nt1, nt2)
        assert before == after
