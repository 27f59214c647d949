"""Building the standard artifacts and writing them as JSON or OFF."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import AffineForm, ParamSet, propagate_forms, uniform_params
from .arquiver import MeshQuiver, knit
from .exactfield import ExactScalar, FieldSpec, make_field
from .folding import FoldSpec, load_folding, symmetric_params
from .polytope import SimplePolytope, Vertex, enumerate_vertices
from .rootsystem import build_quiver, rational_field
from .section import SectionPolytope, build_pi, section_polytope

__all__ = [
    "Ambient",
    "build_ambient",
    "build_section",
    "polytope_to_json",
    "polytope_from_json",
    "dumps",
    "write_text",
    "off_text",
]


@dataclass
class Ambient:
    mesh_quiver: MeshQuiver
    params: ParamSet
    forms: dict
    polytope: SimplePolytope


def build_ambient(label: str, orientation="bipartite", base=1) -> Ambient:
    q = build_quiver(label, orientation)
    mq = knit(q)
    params = uniform_params(mq, base)
    forms = propagate_forms(mq, params)
    meta = {"type": q.type_label, "params": params.to_json(), "coordinates": "s"}
    return Ambient(mq, params, forms, enumerate_vertices(forms, meta=meta))


def build_section(target: str, source: str | None = None, orientation="bipartite",
                  base=1, allow_mutations: bool = False) -> SectionPolytope:
    fs = load_folding(target, source, orientation, allow_mutations)
    mq = knit(fs.source)
    sp = section_polytope(build_pi(fs, mq, symmetric_params(fs, mq, base)))
    sp.polytope.meta.update({
        "type": fs.target.type_label,
        "params": sp.plane.params.to_json(),
        "folding": fs.to_json(),
        "coordinates": "sigma",
    })
    return sp


# ---------------------------------------------------------------------------
# JSON


def _scalar(F: FieldSpec, x) -> dict:
    return F(x).to_json()


def _entry(F: FieldSpec, x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _scalar(F, x)
    return x.to_json()


def _field_of(P: SimplePolytope) -> FieldSpec:
    for f in P.facets.values():
        if isinstance(f.constant, ExactScalar):
            return f.constant.field
    return rational_field()


def polytope_to_json(P: SimplePolytope) -> dict:
    F = _field_of(P)
    out = {k: v for k, v in P.meta.items()}
    out.update({
        "field": {"m": F.m, "minimal_polynomial": list(F.minimal_polynomial)},
        "dimension": P.dim,
        "vertices": [{"cluster": [list(o) for o in v.cluster],
                      "coords": [_scalar(F, x) for x in v.point]} for v in P.vertices],
        "edges": [list(e) for e in P.edges],
        "facets": [{"object": list(k),
                    "g": [_entry(F, a) for a in f.linear],
                    "const": _scalar(F, f.constant)} for k, f in sorted(P.facets.items())],
    })
    return out


def _read_entry(F: FieldSpec, x):
    return x if isinstance(x, int) else ExactScalar.from_json(F, x)


def polytope_from_json(data: dict) -> SimplePolytope:
    F = make_field(data["field"]["m"])
    if list(F.minimal_polynomial) != data["field"]["minimal_polynomial"]:
        raise ValueError("field description does not match its order m")
    facets = {}
    for rec in data["facets"]:
        linear = tuple(_read_entry(F, a) for a in rec["g"])
        facets[tuple(rec["object"])] = AffineForm(linear, ExactScalar.from_json(F, rec["const"]))
    vertices = [Vertex(tuple(tuple(o) for o in v["cluster"]),
                       tuple(ExactScalar.from_json(F, x) for x in v["coords"]))
                for v in data["vertices"]]
    edges = [tuple(e) for e in data["edges"]]
    skip = {"field", "dimension", "vertices", "edges", "facets"}
    meta = {k: v for k, v in data.items() if k not in skip}
    return SimplePolytope(data["dimension"], facets, vertices, edges, meta)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def write_text(path: str, text: str) -> None:
    """Write atomically so a failure never leaves a partial file behind."""
    folder = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".part")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# OFF


def _approx(x) -> str:
    if isinstance(x, ExactScalar):
        return x.to_json()["approx"]
    return format(float(x), ".12g")


def _walk_cycle(members: Sequence[int], edges) -> list[int]:
    mem = set(members)
    adj: dict[int, list[int]] = {v: [] for v in members}
    for a, b in edges:
        if a in mem and b in mem:
            adj[a].append(b)
            adj[b].append(a)
    start = min(members)
    cycle, prev, cur = [start], None, start
    while True:
        nxt = [v for v in sorted(adj[cur]) if v != prev]
        if not nxt or nxt[0] == start:
            break
        prev, cur = cur, nxt[0]
        cycle.append(cur)
        if len(cycle) > len(members):
            raise ValueError("face boundary is not a cycle")
    return cycle


def _orient(cycle, pts, center):
    # Newell normal, flipped so it points away from the centroid
    nx = ny = nz = 0.0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        (x1, y1, z1), (x2, y2, z2) = pts[a], pts[b]
        nx += (y1 - y2) * (z1 + z2)
        ny += (z1 - z2) * (x1 + x2)
        nz += (x1 - x2) * (y1 + y2)
    fc = [sum(pts[v][c] for v in cycle) / len(cycle) for c in range(3)]
    if nx * (fc[0] - center[0]) + ny * (fc[1] - center[1]) + nz * (fc[2] - center[2]) < 0:
        return cycle[::-1]
    return cycle


def off_text(P: SimplePolytope, project: Sequence | None = None) -> str:
    """OFF for dimensions up to 3, or the image under three facet forms.

    ``project`` names three facet keys; each vertex is then drawn at the values
    of those forms. In dimension above 3 the projected edges are written as
    two-vertex faces.
    """
    if project is not None:
        forms = [P.facets[k] for k in project]
        coords = [[_approx(f(v.point)) for f in forms] for v in P.vertices]
        dim = min(P.dim, 3) if P.dim <= 3 else 4
    else:
        if P.dim > 3:
            raise ValueError("OFF needs dimension <= 3; pass three facets to project onto")
        coords = [[_approx(x) for x in v.point] + ["0"] * (3 - P.dim) for v in P.vertices]
        dim = P.dim
    pts = [tuple(float(c) for c in row) for row in coords]
    faces: list[list[int]] = []
    if dim == 2:
        cyc = _walk_cycle(list(range(len(P.vertices))), P.edges)
        area = sum(pts[a][0] * pts[b][1] - pts[b][0] * pts[a][1]
                   for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        if project is None and area < 0:
            cyc = cyc[::-1]
        faces.append(cyc)
    elif dim == 3:
        center = [sum(p[c] for p in pts) / len(pts) for c in range(3)]
        for key in sorted(P.facets):
            members = P.facet_vertices(key)
            if len(members) >= 3:
                faces.append(_orient(_walk_cycle(members, P.edges), pts, center))
    elif dim == 4:
        faces = [list(e) for e in P.edges]
    lines = ["OFF", f"{len(pts)} {len(faces)} {len(P.edges)}"]
    lines += [" ".join(row) for row in coords]
    lines += [" ".join(str(x) for x in [len(f)] + f) for f in faces]
    return "\n".join(lines) + "\n"
