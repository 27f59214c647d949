"""The section of a symmetric simply-laced associahedron by the folding plane.

The plane is cut out by w_j t_{ki} = w_i t_{kj} for i, j in one block. On the
initial column this reads s_j = w_j sigma_[P(j)], which is the parametrization
used for every restricted form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .affine import AffineForm, ParamSet, g_vectors, propagate_forms
from .arquiver import MeshQuiver, Obj
from .exactfield import sign
from .folding import FoldSpec, orthogonal_projection, project, project_w
from .linalg import is_zero, rank
from .polytope import (
    Fan,
    SimplePolytope,
    affine_rank,
    enumerate_vertices,
    normal_fan,
    normalize_ray,
)
from .rootsystem import coxeter_data

__all__ = [
    "SectionError",
    "DimensionError",
    "SectionPlane",
    "SectionPolytope",
    "build_pi",
    "section_polytope",
    "symmetric_vertices",
    "verify_theorem",
    "verify_prop_intersections",
    "mixed_slice_check",
]


class SectionError(RuntimeError):
    """A verification of the section failed."""


class DimensionError(SectionError):
    """The plane does not meet the affine subspace in dimension n'."""


@dataclass(frozen=True)
class SectionPlane:
    fold: FoldSpec
    mesh_quiver: MeshQuiver
    params: ParamSet
    forms: dict            # ambient forms over s
    restricted: dict       # (k, i) -> AffineForm over sigma

    @property
    def dim(self) -> int:
        return self.fold.n_target

    def lift(self, sigma) -> tuple:
        """s_j = w_j sigma_[P(j)]."""
        P = self.fold.block_of
        return tuple(self.fold.weights[j] * sigma[P[j] - 1] for j in range(1, self.fold.n + 1))

    def lower(self, s) -> tuple | None:
        """Inverse of :meth:`lift`, or None when s is not on the plane."""
        F = self.fold.field
        sigma = []
        for blk in self.fold.blocks:
            vals = {F(s[j - 1]) / self.fold.weights[j] for j in blk}
            if len(vals) != 1:
                return None
            sigma.append(vals.pop())
        return tuple(sigma)


@dataclass
class SectionPolytope:
    plane: SectionPlane
    polytope: SimplePolytope
    orbit: dict[Obj, Obj]          # object -> representative of its facet class

    @property
    def classes(self) -> dict[Obj, list[Obj]]:
        out: dict[Obj, list[Obj]] = {}
        for obj, rep in sorted(self.orbit.items()):
            out.setdefault(rep, []).append(obj)
        return out


def _restrict(fs: FoldSpec, form: AffineForm) -> AffineForm:
    return AffineForm(project(fs, form.linear), form.constant)


def build_pi(fs: FoldSpec, mq: MeshQuiver, params: ParamSet) -> SectionPlane:
    """Build the plane and check it meets the affine subspace in dimension n'."""
    F = fs.field
    forms = propagate_forms(mq, params)
    # the equations w_j t_{ki} - w_i t_{kj} = 0 as affine conditions on s
    rows, rhs = [], []
    for (i, j) in fs.same_block_pairs():
        wi, wj = fs.weights[i], fs.weights[j]
        for (k, r) in mq.roots:
            if r != i:
                continue
            if (k, j) not in forms:
                raise DimensionError(f"rows {i} and {j} of one block have different lengths")
            diff = forms[(k, i)].scale(wj) - forms[(k, j)].scale(wi)
            rows.append(list(diff.linear))
            rhs.append(-diff.constant)
    if rows:
        r_lin = rank(rows)
        r_aug = rank([row + [b] for row, b in zip(rows, rhs)])
    else:
        r_lin = r_aug = 0
    if r_aug != r_lin:
        raise DimensionError("the plane misses the affine subspace: parameters are not symmetric")
    dim = fs.n - r_lin
    if dim != fs.n_target:
        raise DimensionError(f"the plane has dimension {dim}, expected {fs.n_target}")

    restricted = {obj: _restrict(fs, f) for obj, f in forms.items()}
    for (i, j) in fs.same_block_pairs():
        wi, wj = fs.weights[i], fs.weights[j]
        for (k, r) in mq.roots:
            if r == i and not (restricted[(k, i)].scale(wj) - restricted[(k, j)].scale(wi)).is_zero():
                raise DimensionError(f"w_j t_{k}{i} != w_i t_{k}{j} on the plane")
    return SectionPlane(fs, mq, params, forms, restricted)


def _form_key(form: AffineForm) -> tuple:
    lead = next(a for a in form.linear if not is_zero(a))
    s = abs(lead)
    return tuple(a / s for a in form.linear) + (form.constant / s,)


def section_polytope(plane: SectionPlane) -> SectionPolytope:
    """Collapse proportional restricted forms into facets and enumerate vertices."""
    fs = plane.fold
    groups: dict[tuple, list[Obj]] = {}
    for obj in sorted(plane.restricted):
        f = plane.restricted[obj]
        if all(is_zero(a) for a in f.linear):
            raise SectionError(f"restricted form of {obj} is constant")
        groups.setdefault(_form_key(f), []).append(obj)
    orbit = {}
    P = fs.block_of
    for objs in groups.values():
        rep = min(objs)
        expected = sorted((rep[0], j) for j in fs.blocks[P[rep[1]] - 1])
        if sorted(objs) != expected:
            raise SectionError(f"facet class {objs} is not the block orbit {expected}")
        for o in objs:
            orbit[o] = rep
    facets = {rep: plane.restricted[rep] for rep in set(orbit.values())}
    meta = {"source": fs.source.type_label, "target": fs.target.type_label}
    poly = enumerate_vertices(facets, meta=meta)
    return SectionPolytope(plane, poly, orbit)


def _expand(sp: SectionPolytope, cluster) -> tuple:
    """All objects whose class lies in the given section cluster."""
    reps = set(cluster)
    return tuple(sorted(o for o, r in sp.orbit.items() if r in reps))


def symmetric_vertices(ambient: SimplePolytope, fs: FoldSpec,
                       section: SectionPolytope | None = None) -> dict:
    """Block-closed ambient clusters, matched against the section vertices."""
    P = fs.block_of
    sym = []
    for idx, v in enumerate(ambient.vertices):
        cl = set(v.cluster)
        if all((k, j) in cl for (k, i) in cl for j in fs.blocks[P[i] - 1]):
            sym.append(idx)
    report = {"symmetric": sym, "count": len(sym)}
    if section is None:
        return report
    plane = section.plane
    amb_points = {}
    for idx in sym:
        sigma = plane.lower(ambient.vertices[idx].point)
        if sigma is None:
            raise SectionError(f"symmetric vertex {ambient.vertices[idx].cluster} is off the plane")
        amb_points[sigma] = _canonical_cluster(ambient.vertices[idx].cluster)
    sec_points = {}
    for v in section.polytope.vertices:
        sec_points[tuple(plane.fold.field(x) for x in v.point)] = _expand(section, v.cluster)
    same = amb_points == sec_points
    report["matches_section"] = same
    if not same:
        report["only_ambient"] = [str(c) for p, c in amb_points.items() if p not in sec_points]
        report["only_section"] = [str(c) for p, c in sec_points.items() if p not in amb_points]
        raise SectionError(f"symmetric vertices do not match the section: {report}")
    return report


def _canonical_cluster(c) -> tuple:
    return tuple(sorted(c))


def _lift_check(sp: SectionPolytope) -> list:
    """Each section vertex, lifted to s, must be an ambient vertex with block-closed cluster."""
    plane = sp.plane
    bad = []
    for v in sp.polytope.vertices:
        s = plane.lift([plane.fold.field(x) for x in v.point])
        tight = []
        for obj, f in plane.forms.items():
            sg = sign(f(s))
            if sg < 0:
                bad.append({"cluster": v.cluster, "negative": obj})
                break
            if sg == 0:
                tight.append(obj)
        if sorted(tight) != list(_expand(sp, v.cluster)) or len(tight) != plane.fold.n:
            bad.append({"cluster": v.cluster, "tight": tight})
        elif rank([plane.forms[o].linear for o in tight]) != plane.fold.n:
            bad.append({"cluster": v.cluster, "dependent": tight})
    return bad


def verify_theorem(sp: SectionPolytope, ambient: SimplePolytope | None = None,
                   samples: int = 1000, seed: int = 0) -> dict:
    """Fan-level checks of the section against scaled projections of g-vectors."""
    plane = sp.plane
    fs = plane.fold
    mq = plane.mesh_quiver
    g = g_vectors(mq)
    sec_fan = normal_fan(sp.polytope)
    report: dict = {"folding": fs.name}

    pw = {obj: project_w(fs, g[obj], obj[1]) for obj in g}
    g_prime = {normalize_ray(v) for v in pw.values()}
    normals = sec_fan.ray_set()
    report["i_facet_normals_are_projected_g_vectors"] = {
        "ok": normals == g_prime, "rays": len(g_prime), "facets": len(normals),
        "witnesses": [str(r) for r in normals ^ g_prime][:5]}

    if ambient is not None:
        clusters = [ambient.vertices[i].cluster for i in symmetric_vertices(ambient, fs)["symmetric"]]
    else:
        bad = _lift_check(sp)
        if bad:
            raise SectionError(f"section vertices do not lift to ambient vertices: {bad[:3]}")
        clusters = [_expand(sp, v.cluster) for v in sp.polytope.vertices]
    sym_cones = set()
    degenerate = []
    for cl in clusters:
        cone = frozenset(normalize_ray(pw[o]) for o in cl)
        if len(cone) != fs.n_target:
            degenerate.append(cl)
        sym_cones.add(cone)
    sec_cones = sec_fan.cone_set()
    report["ii_cones_from_symmetric_clusters"] = {
        "ok": sym_cones == sec_cones and not degenerate,
        "cones": len(sec_cones), "symmetric_clusters": len(clusters),
        "source": "ambient" if ambient is not None else "lifted",
        "witnesses": [sorted(map(str, c)) for c in sym_cones ^ sec_cones][:3]}

    bad_normals = []
    for rep, form in sp.polytope.facets.items():
        amb = orthogonal_projection(fs, g[rep])
        if normalize_ray(amb) != normalize_ray(form.linear) or not _positive_multiple(amb, form.linear):
            bad_normals.append(rep)
    report["iii_projected_ambient_normals"] = {"ok": not bad_normals, "witnesses": bad_normals}

    comp = sec_fan.check_complete(samples=samples, seed=seed)
    report["iv_fan_complete"] = {"ok": comp["ok"], "samples": comp["samples"],
                                 "resampled": comp["resampled"],
                                 "witnesses": comp["failures"][:3]}
    report["ok"] = all(v["ok"] for v in report.values() if isinstance(v, dict))
    return report


def _positive_multiple(a, b) -> bool:
    for x, y in zip(a, b):
        if not is_zero(x):
            return sign(x) == sign(y)
    return False


def verify_prop_intersections(sp: SectionPolytope) -> dict:
    """Every ambient facet meets the section in a face of dimension n' - 1."""
    nt = sp.plane.dim
    poly = sp.polytope
    missed = []
    dims = {}
    for obj in sorted(sp.orbit):
        rep = sp.orbit[obj]
        on = [poly.vertices[i].point for i in poly.facet_vertices(rep)]
        d = affine_rank(on)
        dims[obj] = d
        if len(on) < nt or d != nt - 1:
            missed.append({"object": list(obj), "vertices": len(on), "dim": d})
    return {"ok": not missed, "facets": len(sp.orbit), "classes": len(poly.facets),
            "missed": missed}


def mixed_slice_check(sp: SectionPolytope, ambient: SimplePolytope) -> dict:
    """For odd h: the last column plus the column before it in the missing rows."""
    mq = sp.plane.mesh_quiver
    h = coxeter_data(mq.quiver.type_label).h
    if h % 2 == 0:
        return {"ok": True, "applicable": False}
    k = (h + 3) // 2
    last = [(k, i) for i in mq.quiver.vertices if (k, i) in mq.roots]
    fill = [(k - 1, i) for i in mq.quiver.vertices if (k, i) not in mq.roots]
    cluster = tuple(sorted(last + fill))
    fs = sp.plane.fold
    P = fs.block_of
    is_vertex = cluster in ambient.vertex_index()
    closed = all((kk, j) in cluster for (kk, i) in cluster for j in fs.blocks[P[i] - 1])
    return {"ok": is_vertex and closed, "applicable": True, "cluster": [list(c) for c in cluster],
            "is_vertex": is_vertex, "symmetric": closed}


def fan_of(sp: SectionPolytope) -> Fan:
    return normal_fan(sp.polytope)
