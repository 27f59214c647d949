from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from assocfold.affine import AffineForm, ParamSet, g_vectors, propagate_forms, uniform_params
from assocfold.arquiver import knit
from assocfold.polytope import (NonSimpleError, PolytopeError, UnboundedError, affine_rank,
                                enumerate_vertices, f_vector, normal_fan, normalize_ray)
from assocfold.rootsystem import build_quiver, catalan_count, coxeter_data, rational_field
from oracles import brute_force_vertices, mutation_g_fan

Q = rational_field()


def ambient(label, base=1, orientation="bipartite"):
    mq = knit(build_quiver(label, orientation))
    return mq, enumerate_vertices(propagate_forms(mq, uniform_params(mq, base)))


def test_a1_segment():
    _, P = ambient("A1")
    assert sorted(v.point for v in P.vertices) == [(0,), (1,)]
    assert f_vector(P) == (2,)
    fan = normal_fan(P)
    assert fan.ray_set() == {(1,), (-1,)} and len(fan.cones) == 2


def test_a2_pentagon():
    _, P = ambient("A2")
    assert f_vector(P) == (5, 5) and len(P.facets) == 5


def test_a3_polytope_counts_and_initial_cone():
    mq, P = ambient("A3")
    P.check()
    assert f_vector(P) == (14, 21, 9)
    assert 14 - 21 + 9 == 2
    fan = normal_fan(P)
    assert len(fan.rays) == 9 and len(fan.cones) == 14
    init = P.vertex_index()[((1, 1), (1, 2), (1, 3))]
    assert {tuple(fan.rays[i]) for i in fan.cones[init]} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert all(len(v.cluster) == 3 for v in P.vertices)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "E6"])
def test_counting_oracles(label):
    mq, P = ambient(label)
    d = coxeter_data(label)
    assert len(P.vertices) == catalan_count(label)
    n = mq.n
    assert len(P.facets) == n * d.h // 2 + n
    assert all(P.facet_vertices(k) for k in P.facets)


@pytest.mark.parametrize("label", ["A2", "A3", "A4", "D4"])
def test_pivoting_matches_brute_force(label):
    mq, P = ambient(label, Fraction(3, 2))
    lin = {k: f.linear for k, f in P.facets.items()}
    const = {k: f.constant.to_fraction() for k, f in P.facets.items()}
    oracle = brute_force_vertices(lin, const)
    got = {v.cluster: tuple(Fraction(x) if not hasattr(x, "to_fraction") else x.to_fraction()
                            for x in v.point) for v in P.vertices}
    assert got == oracle


@pytest.mark.parametrize("label", ["A3", "A4", "D4", "D5", "E6"])
def test_normal_fan_is_the_mutation_g_fan(label):
    mq, P = ambient(label)
    q = mq.quiver
    B = [[0] * q.rank for _ in range(q.rank)]
    for a, b in q.arrows:
        B[a - 1][b - 1], B[b - 1][a - 1] = 1, -1
    rays, cones = mutation_g_fan(B)
    fan = normal_fan(P)
    assert {tuple(r) for r in fan.rays} == rays
    assert {frozenset(tuple(fan.rays[i]) for i in c) for c in fan.cones} == cones


@pytest.mark.parametrize("label", ["A3", "D4", "A5"])
def test_fan_completeness(label):
    _, P = ambient(label)
    rep = normal_fan(P).check_complete(samples=1000, seed=7)
    assert rep["ok"] and rep["samples"] == 1000


@pytest.mark.parametrize("label", ["A3", "A4", "D4"])
def test_cluster_g_matrices_are_unimodular(label):
    mq, P = ambient(label)
    g = g_vectors(mq)
    from assocfold.linalg import inverse
    for v in P.vertices:
        inv = inverse([list(g[o]) for o in v.cluster])
        assert all(isinstance(a, int) for row in inv for a in row)


@settings(max_examples=100)
@given(st.sampled_from(["A2", "A3", "A4", "D4"]), st.data())
def test_simple_for_random_positive_parameters(label, data):
    mq = knit(build_quiver(label))
    vals = data.draw(st.lists(st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7),
                              min_size=len(mq.meshes), max_size=len(mq.meshes)))
    params = ParamSet(Q, {m.start: Q(v) for m, v in zip(mq.meshes, vals)})
    P = enumerate_vertices(propagate_forms(mq, params))
    P.check()
    assert len(P.vertices) == catalan_count(label)


def _form(a, c):
    return AffineForm(tuple(a), Q(c))


def test_unbounded_is_reported():
    forms = {"x": _form((1, 0), 0), "y": _form((0, 1), 0), "z": _form((1, -1), 1)}
    with pytest.raises(UnboundedError):
        enumerate_vertices(forms)


def test_ties_are_reported():
    forms = {"a": _form((1, 0), 0), "b": _form((0, 1), 0), "c": _form((-1, 0), 1),
             "d": _form((0, -1), 1), "e": _form((-1, -1), 2)}
    with pytest.raises(NonSimpleError):
        enumerate_vertices(forms)


def test_infeasible_origin():
    forms = {"a": _form((1, 0), -1), "b": _form((0, 1), 0), "c": _form((-1, -1), 3)}
    with pytest.raises(PolytopeError):
        enumerate_vertices(forms)


def test_explicit_start():
    mq = knit(build_quiver("A3"))
    forms = propagate_forms(mq, uniform_params(mq))
    P = enumerate_vertices(forms, start=[(3, 1), (3, 2), (3, 3)])
    assert f_vector(P) == (14, 21, 9)


def test_helpers():
    assert normalize_ray((0, -2, 4)) == (0, -1, 2)
    assert normalize_ray((3, 1)) == (1, Fraction(1, 3))
    assert affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_rank([(0, 0, 0), (1, 0, 0), (0, 1, 0)]) == 2
    assert affine_rank([]) == -1
