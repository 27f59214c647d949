"""Affine forms t_alpha(s) obtained by forward substitution through the meshes.

The free coordinates s_1..s_n are the values on the initial column,
t_{1i} = s_i. Each mesh determines the form of its end object, so the whole
system is solved in knitting order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .arquiver import MeshQuiver, Obj
from .exactfield import ExactScalar, FieldSpec
from .linalg import SingularMatrixError, bareiss_solve
from .rootsystem import rational_field

__all__ = [
    "ParamError",
    "ParamSet",
    "AffineForm",
    "uniform_params",
    "propagate_forms",
    "g_vectors",
    "solve_vertex",
    "NotAClusterError",
]


class ParamError(ValueError):
    pass


class NotAClusterError(ArithmeticError):
    """The chosen facets do not meet in a single point."""


@dataclass(frozen=True)
class ParamSet:
    """Mesh constants c, keyed by the start object (k, i) of each mesh."""

    field: FieldSpec
    c: Mapping[Obj, ExactScalar]

    def __post_init__(self):
        for key, v in self.c.items():
            if v.field is not self.field:
                raise ParamError(f"parameter {key} lives in the wrong field")
            if v.sign() <= 0:
                raise ParamError(f"parameter c{key} = {v} is not positive")

    def scaled(self, factor) -> "ParamSet":
        return ParamSet(self.field, {k: v * factor for k, v in self.c.items()})

    def to_json(self) -> dict:
        return {f"{k},{i}": v.to_json() for (k, i), v in sorted(self.c.items())}


def uniform_params(mq: MeshQuiver, value=1, field: FieldSpec | None = None) -> ParamSet:
    F = field or rational_field()
    v = F(value)
    return ParamSet(F, {m.start: v for m in mq.meshes})


@dataclass(frozen=True)
class AffineForm:
    linear: tuple            # coefficients of s_1..s_n
    constant: ExactScalar

    def __call__(self, point: Sequence) -> ExactScalar:
        acc = self.constant
        for a, x in zip(self.linear, point):
            if a:
                acc = acc + a * x
        return acc

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a + b for a, b in zip(self.linear, other.linear)),
                          self.constant + other.constant)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a - b for a, b in zip(self.linear, other.linear)),
                          self.constant - other.constant)

    def scale(self, factor) -> "AffineForm":
        return AffineForm(tuple(a * factor for a in self.linear), self.constant * factor)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.linear) and self.constant.is_zero()


def propagate_forms(mq: MeshQuiver, params: ParamSet) -> dict[Obj, AffineForm]:
    """t_{tau M} + t_M = sum_E t_E + c, solved for t_M in knitting order."""
    F = params.field
    n = mq.n
    forms: dict[Obj, AffineForm] = {}
    for (k, i) in mq.order:
        if k == 1:
            forms[(1, i)] = AffineForm(tuple(int(j == i) for j in range(1, n + 1)), F.zero)
    for mesh in mq.meshes:
        try:
            c = params.c[mesh.start]
        except KeyError:
            raise ParamError(f"no parameter for the mesh starting at {mesh.start}") from None
        lin = [-a for a in forms[mesh.start].linear]
        const = c - forms[mesh.start].constant
        for mid in mesh.middles:
            f = forms[mid]
            lin = [a + b for a, b in zip(lin, f.linear)]
            const = const + f.constant
        forms[mesh.end] = AffineForm(tuple(lin), const)
    return forms


def g_vectors(mq: MeshQuiver) -> dict[Obj, tuple[int, ...]]:
    """Linear parts of the forms, i.e. the c = 0 solution of the mesh equations."""
    n = mq.n
    g: dict[Obj, tuple[int, ...]] = {}
    for (k, i) in mq.order:
        if k == 1:
            g[(1, i)] = tuple(int(j == i) for j in range(1, n + 1))
    for mesh in mq.meshes:
        v = [-a for a in g[mesh.start]]
        for mid in mesh.middles:
            v = [a + b for a, b in zip(v, g[mid])]
        g[mesh.end] = tuple(v)
    return g


def solve_vertex(cluster, forms: Mapping) -> tuple:
    """Common zero of the n forms in ``cluster``."""
    keys = list(cluster)
    A = [list(forms[key].linear) for key in keys]
    b = [-forms[key].constant for key in keys]
    try:
        return bareiss_solve(A, b)
    except SingularMatrixError:
        raise NotAClusterError(f"{sorted(keys)} is not a cluster: singular system") from None
