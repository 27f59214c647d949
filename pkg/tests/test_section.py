from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from assocfold.affine import ParamSet, g_vectors, propagate_forms
from assocfold.arquiver import knit
from assocfold.exactfield import sign
from assocfold.folding import identity_folding, load_folding, project, symmetric_params
from assocfold.polytope import enumerate_vertices, f_vector, normal_fan, normalize_ray
from assocfold.rootsystem import catalan_count, coxeter_data
from assocfold.section import (DimensionError, build_pi, mixed_slice_check, section_polytope,
                               symmetric_vertices, verify_prop_intersections, verify_theorem)
from oracles import folded_exchange_matrix, mutation_g_fan


def setup(target, source=None, params=None):
    fs = load_folding(target, source) if not isinstance(target, tuple) else target[0]
    mq = knit(fs.source)
    plane = build_pi(fs, mq, params(fs, mq) if params else symmetric_params(fs, mq))
    return fs, mq, plane, section_polytope(plane)


def test_c2_plane_and_hexagon():
    fs, mq, plane, sp = setup("C2", "A3")
    assert plane.dim == 2
    for k in (1, 2, 3):
        assert plane.restricted[(k, 1)] == plane.restricted[(k, 3)]
    assert f_vector(sp.polytope) == (6, 6)
    assert len(sp.polytope.facets) == 6
    sp.polytope.check()


def test_c2_symmetric_vertices():
    fs, mq, plane, sp = setup("C2", "A3")
    amb = enumerate_vertices(plane.forms)
    rep = symmetric_vertices(amb, fs, sp)
    assert rep["count"] == 6 and rep["matches_section"]
    clusters = [amb.vertices[i].cluster for i in rep["symmetric"]]
    assert ((1, 1), (1, 2), (1, 3)) in clusters
    assert not any((2, 1) in c and (2, 3) not in c for c in clusters)
    assert any((2, 1) in v.cluster and (2, 3) not in v.cluster for v in amb.vertices)


def test_c2_theorem_and_facets():
    fs, mq, plane, sp = setup("C2", "A3")
    rep = verify_theorem(sp, enumerate_vertices(plane.forms))
    assert rep["ok"]
    assert rep["i_facet_normals_are_projected_g_vectors"]["rays"] == 6
    assert len(normal_fan(sp.polytope).cone_set()) == 6
    prop = verify_prop_intersections(sp)
    assert prop["ok"] and prop["facets"] == 9 and prop["classes"] == 6


def test_asymmetric_parameters_are_rejected():
    fs = load_folding("C2", "A3")
    mq = knit(fs.source)
    F = fs.field
    c = {m.start: F.one for m in mq.meshes}
    c[(1, 1)] = F(2)
    with pytest.raises(DimensionError):
        build_pi(fs, mq, ParamSet(F, c))


def test_trivial_folding_is_the_ambient_polytope():
    fs = identity_folding("A3")
    mq = knit(fs.source)
    plane = build_pi(fs, mq, symmetric_params(fs, mq))
    sp = section_polytope(plane)
    amb = enumerate_vertices(plane.forms)
    assert [v.cluster for v in sp.polytope.vertices] == [v.cluster for v in amb.vertices]
    assert plane.lift((1, 2, 3)) == (1, 2, 3)
    assert verify_theorem(sp, amb)["ok"]


def test_a1_trivial_segment():
    fs = identity_folding("A1")
    mq = knit(fs.source)
    sp = section_polytope(build_pi(fs, mq, symmetric_params(fs, mq)))
    assert f_vector(sp.polytope) == (2,)
    prop = verify_prop_intersections(sp)
    assert prop["ok"] and prop["facets"] == 2


def test_d6_to_h3():
    fs, mq, plane, sp = setup("H3", "D6")
    assert len(sp.polytope.vertices) == 32 and len(sp.polytope.facets) == 18
    rep = verify_theorem(sp)
    assert rep["ok"] and rep["i_facet_normals_are_projected_g_vectors"]["rays"] == 18
    assert len(normal_fan(sp.polytope).cones) == 32
    prop = verify_prop_intersections(sp)
    assert prop["ok"] and prop["facets"] == 36
    assert all(len(sp.polytope.facet_vertices(k)) >= 3 for k in sp.polytope.facets)


@pytest.mark.parametrize("target", ["C2", "C3", "B3", "B4", "F4"])
def test_section_fan_is_the_folded_mutation_fan(target):
    fs, mq, plane, sp = setup(target)
    n = fs.n
    B = [[0] * n for _ in range(n)]
    for a, b in fs.source.arrows:
        B[a - 1][b - 1], B[b - 1][a - 1] = 1, -1
    rays, cones = mutation_g_fan(folded_exchange_matrix(B, fs.blocks))
    fan = normal_fan(sp.polytope)
    as_int = lambda r: tuple(int(x.to_fraction()) for x in r)  # noqa: E731
    assert {as_int(r) for r in fan.rays} == rays
    assert {frozenset(as_int(fan.rays[i]) for i in c) for c in fan.cones} == cones


SECTIONS = [("C2", "A3"), ("C3", "A5"), ("I2(5)", "A4"), ("I2(6)", "A5"), ("B4", "D5"),
            ("B3", "D4"), ("I2(8)", "D5"), ("H3", "D6")]


@pytest.mark.parametrize("pair", SECTIONS)
def test_section_counts_and_identities(pair):
    fs, mq, plane, sp = setup(*pair)
    tgt = fs.target.type_label
    h = coxeter_data(tgt).h
    assert len(sp.polytope.vertices) == catalan_count(tgt)
    assert len(sp.polytope.facets) == fs.n_target * (h + 2) // 2
    for blk in fs.blocks:
        for i in blk:
            for j in blk:
                for (k, r) in mq.roots:
                    if r == i:
                        lhs = plane.restricted[(k, i)].scale(fs.weights[j])
                        rhs = plane.restricted[(k, j)].scale(fs.weights[i])
                        assert (lhs - rhs).is_zero()
    g = g_vectors(mq)
    for obj, rep in sp.orbit.items():
        a = project(fs, g[obj])
        b = sp.polytope.facets[rep].linear
        assert normalize_ray(a) == normalize_ray(b)
        lead = next(k for k, x in enumerate(a) if not x.is_zero())
        assert sign(a[lead]) == sign(b[lead])
    for v in sp.polytope.vertices:
        assert plane.lower(plane.lift(v.point)) == tuple(fs.field(x) for x in v.point)


@pytest.mark.parametrize("pair", [("I2(5)", "A4"), ("I2(7)", "A6"), ("I2(3)", "A2")])
def test_mixed_slice_for_odd_coxeter_number(pair):
    fs, mq, plane, sp = setup(*pair)
    rep = mixed_slice_check(sp, enumerate_vertices(plane.forms))
    assert rep["applicable"] and rep["ok"]


def _random_symmetric(values):
    def build(fs, mq):
        F = fs.field
        keys = sorted({(m.start[0], fs.block_of[m.start[1]]) for m in mq.meshes})
        base = {key: F(v) for key, v in zip(keys, values)}
        return ParamSet(F, {m.start: fs.weights[m.start[1]] * base[(m.start[0], fs.block_of[m.start[1]])]
                            for m in mq.meshes})
    return build


@settings(max_examples=40)
@given(st.sampled_from([("C2", "A3"), ("I2(5)", "A4"), ("C3", "A5"), ("B3", "D4")]),
       st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=8),
                min_size=20, max_size=20))
def test_sections_for_random_symmetric_parameters(pair, values):
    fs, mq, plane, sp = setup(*pair, params=_random_symmetric(values))
    sp.polytope.check()
    assert len(sp.polytope.vertices) == catalan_count(fs.target.type_label)
    assert verify_theorem(sp, samples=100)["ok"]
    assert verify_prop_intersections(sp)["ok"]
