"""Knitting the translation quiver whose meshes give the hyperplane equations.

Object (k, i) sits in row i (a vertex of Q) and column k. Column 1 holds the
shifted projectives, labeled by the negative simple roots. Column 2 holds the
projectives, and later columns are obtained by the mesh rule
``root(k+1, i) = sum(middle roots) - root(k, i)`` until a row reaches an
injective, which is detected by the propagated vector becoming non-positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .rootsystem import QuiverSpec, build_root_system

__all__ = ["KnittingError", "Mesh", "MeshQuiver", "knit", "meshes", "obj_name"]

Obj = tuple[int, int]


class KnittingError(RuntimeError):
    """A propagated dimension vector was neither a positive root nor non-positive."""


def obj_name(obj: Obj, prefix: str = "t") -> str:
    k, i = obj
    if k < 10 and i < 10:
        return f"{prefix}{k}{i}"
    return f"{prefix}_{k},{i}"


@dataclass(frozen=True)
class Mesh:
    start: Obj
    middles: tuple[Obj, ...]
    end: Obj

    def equation(self) -> str:
        """The mesh relation in the ``t11 + t21 = t12 + c11`` layout."""
        lhs = f"{obj_name(self.start)} + {obj_name(self.end)}"
        rhs = " + ".join([obj_name(m) for m in self.middles] + [obj_name(self.start, "c")])
        return f"{lhs} = {rhs}"


@dataclass(frozen=True)
class MeshQuiver:
    quiver: QuiverSpec
    roots: dict[Obj, tuple[int, ...]]
    order: tuple[Obj, ...]
    meshes: tuple[Mesh, ...]
    row_lengths: dict[int, int]

    @property
    def objects(self) -> tuple[Obj, ...]:
        return tuple(sorted(self.roots))

    @property
    def N(self) -> int:
        return len(self.roots)

    @property
    def n(self) -> int:
        return self.quiver.rank

    def arrows(self) -> Iterator[tuple[Obj, Obj]]:
        q = self.quiver
        for (k, i) in self.objects:
            for j in q.successors(i):
                if (k, j) in self.roots:
                    yield (k, i), (k, j)
            for j in q.predecessors(i):
                if (k + 1, j) in self.roots:
                    yield (k, i), (k + 1, j)

    def dump(self) -> str:
        """Grid of objects, one line per row of Q, columns indexed by k."""
        width = max(self.row_lengths.values())
        lines = []
        for i in self.quiver.vertices:
            cells = []
            for k in range(1, width + 1):
                r = self.roots.get((k, i))
                cells.append("" if r is None else f"{obj_name((k, i))}:{_root_str(r)}")
            lines.append("  ".join(c.ljust(18) for c in cells).rstrip())
        return "\n".join(lines)


def _root_str(r) -> str:
    return "(" + ",".join(str(c) for c in r) + ")"


def knit(q: QuiverSpec) -> MeshQuiver:
    """Build the mesh quiver of an acyclic simply-laced quiver by knitting."""
    n = q.rank
    topo = q.topological_order()
    rs = build_root_system(q.type_label)
    positive = {tuple(int(c.to_fraction()) for c in v) for v in rs.positive}

    def unit(i, s=1):
        return tuple(s if j == i else 0 for j in range(1, n + 1))

    roots: dict[Obj, tuple[int, ...]] = {}
    order: list[Obj] = []
    for i in topo:
        roots[(1, i)] = unit(i, -1)
        order.append((1, i))
    # projectives: dim P_j = alpha_j + sum over arrows i -> j of dim P_i
    for j in topo:
        v = list(unit(j))
        for i in q.predecessors(j):
            v = [a + b for a, b in zip(v, roots[(2, i)])]
        v = tuple(v)
        if v not in positive:
            raise KnittingError(f"projective at vertex {j} has dimension vector {v}")
        roots[(2, j)] = v
        order.append((2, j))

    alive = set(q.vertices)
    k = 2
    while alive:
        for i in topo:
            if i not in alive:
                continue
            v = [-c for c in roots[(k, i)]]
            for j in q.successors(i):
                if (k, j) in roots:
                    v = [a + b for a, b in zip(v, roots[(k, j)])]
            for j in q.predecessors(i):
                if (k + 1, j) in roots:
                    v = [a + b for a, b in zip(v, roots[(k + 1, j)])]
            v = tuple(v)
            if v in positive:
                roots[(k + 1, i)] = v
                order.append((k + 1, i))
            elif all(c <= 0 for c in v):
                alive.discard(i)
            else:
                raise KnittingError(
                    f"object ({k + 1},{i}) propagated to {v}, which is not a root")
        k += 1

    mesh_list = []
    for (kk, i) in order:
        if kk == 1:
            continue
        start = (kk - 1, i)
        mids = [(kk - 1, j) for j in q.successors(i) if (kk - 1, j) in roots]
        mids += [(kk, j) for j in q.predecessors(i) if (kk, j) in roots]
        mesh_list.append(Mesh(start, tuple(sorted(mids)), (kk, i)))

    knitted = sorted(v for (kk, _), v in roots.items() if kk >= 2)
    if knitted != sorted(positive):
        raise KnittingError("knitted roots do not exhaust the positive roots")
    rows = {i: max(kk for (kk, j) in roots if j == i) for i in q.vertices}
    return MeshQuiver(q, roots, tuple(order), tuple(mesh_list), rows)


def meshes(mq: MeshQuiver) -> tuple[Mesh, ...]:
    return mq.meshes
