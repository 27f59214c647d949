"""Dynkin and Coxeter data, quiver orientations, and root systems.

Vertex numbering (1-based) is fixed per type:

* ``A_n``: the path 1 - 2 - ... - n.
* ``D_n``: the path 1 - ... - (n-2), with the fork (n-2) - (n-1), (n-2) - n.
* ``E_n``: Bourbaki, 1 - 3 - 4 - ... - n with 2 attached to 4.
* ``B_n`` / ``C_n``: the path, with the double bond between n-1 and n;
  alpha_n is short in ``B_n`` and long in ``C_n``.
* ``F4``: 1 - 2 => 3 - 4, alpha_1 and alpha_2 long.
* ``G2``: alpha_1 short, alpha_2 long.
* ``H3``, ``H4``: the path with label 5 between vertices 1 and 2.
* ``I2(m)``: two vertices joined by label m.

Crystallographic roots use the Cartan matrix. Non-crystallographic roots
use the symmetric normalization where every simple root has squared length 2
and adjacent simple roots have inner product -2cos(pi/m).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .exactfield import ExactScalar, FieldSpec, make_field

__all__ = [
    "DiagramError",
    "QuiverSpec",
    "CoxeterData",
    "RootSystem",
    "parse_type",
    "build_quiver",
    "coxeter_data",
    "build_root_system",
    "catalan_count",
    "rational_field",
    "field_for",
    "SOURCE_FAMILIES",
    "TARGET_FAMILIES",
]


class DiagramError(ValueError):
    """Unknown or unsupported Dynkin/Coxeter type, or an invalid orientation."""


SOURCE_FAMILIES = ("A", "D", "E")
TARGET_FAMILIES = ("B", "C", "F", "G", "H", "I")

_LABEL = re.compile(r"^(?:([ABCDEFGH])(\d+)|I2\((\d+)\))$")


def parse_type(label: str) -> tuple[str, int, int]:
    """Return (family, rank, dihedral order or 0). Raises on unknown labels."""
    mo = _LABEL.match(label.strip().replace("_", ""))
    if not mo:
        raise DiagramError(f"unknown type label {label!r}")
    if mo.group(3):
        m = int(mo.group(3))
        if m < 3:
            raise DiagramError(f"I2(m) needs m >= 3, got {label!r}")
        return "I", 2, m
    fam, n = mo.group(1), int(mo.group(2))
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
        "H": n in (3, 4),
    }[fam]
    if not ok:
        raise DiagramError(f"unsupported type {label!r}")
    return fam, n, 0


def canonical_label(label: str) -> str:
    fam, n, m = parse_type(label)
    return f"I2({m})" if fam == "I" else f"{fam}{n}"


def _diagram(label: str) -> tuple[int, dict[tuple[int, int], int]]:
    """Rank and Coxeter labels m_ij > 2 on edges i < j."""
    fam, n, m = parse_type(label)
    edges: dict[tuple[int, int], int] = {}
    if fam in "ABC":
        for i in range(1, n):
            edges[(i, i + 1)] = 3
        if fam in "BC":
            edges[(n - 1, n)] = 4
    elif fam == "D":
        for i in range(1, n - 1):
            edges[(i, i + 1)] = 3
        edges[(n - 2, n)] = 3
    elif fam == "E":
        edges[(1, 3)] = 3
        edges[(2, 4)] = 3
        for i in range(3, n):
            edges[(i, i + 1)] = 3
    elif fam == "F":
        edges = {(1, 2): 3, (2, 3): 4, (3, 4): 3}
    elif fam == "G":
        edges = {(1, 2): 6}
    elif fam == "H":
        edges = {(1, 2): 5}
        for i in range(2, n):
            edges[(i, i + 1)] = 3
    elif fam == "I":
        edges = {(1, 2): m}
    return n, edges


def _cartan_integers(label: str) -> dict[tuple[int, int], int] | None:
    """Off-diagonal Cartan entries <alpha_i^vee, alpha_j> for crystallographic types."""
    fam, n, _ = parse_type(label)
    if fam in "HI":
        return None
    _, edges = _diagram(label)
    out: dict[tuple[int, int], int] = {}
    for (i, j) in edges:
        out[(i, j)] = out[(j, i)] = -1
    if fam == "B":
        out[(n, n - 1)] = -2          # alpha_n short
    elif fam == "C":
        out[(n - 1, n)] = -2          # alpha_n long
    elif fam == "F":
        out[(3, 2)] = -2              # alpha_3 short
    elif fam == "G":
        out[(1, 2)] = -3              # alpha_1 short
    return out


def rational_field() -> FieldSpec:
    """Q, realized as Q(2cos(pi/3)) so every simply-laced entry lives in it."""
    return make_field(3)


def field_for(label: str) -> FieldSpec:
    """Smallest field Q(2cos(pi/m)) holding the Coxeter matrix entries of the type."""
    fam, _, m = parse_type(label)
    if fam == "H":
        return make_field(5)
    if fam == "I":
        return make_field(m)
    return rational_field()


@dataclass(frozen=True)
class QuiverSpec:
    type_label: str
    rank: int
    arrows: tuple[tuple[int, int], ...]
    edge_weights: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def vertices(self) -> range:
        return range(1, self.rank + 1)

    def neighbors(self, i: int) -> list[int]:
        out = [b for a, b in self.arrows if a == i] + [a for a, b in self.arrows if b == i]
        return sorted(out)

    def successors(self, i: int) -> list[int]:
        return sorted(b for a, b in self.arrows if a == i)

    def predecessors(self, i: int) -> list[int]:
        return sorted(a for a, b in self.arrows if b == i)

    def topological_order(self) -> list[int]:
        """Vertices ordered so that every arrow i -> j has i before j."""
        indeg = {v: len(self.predecessors(v)) for v in self.vertices}
        ready = sorted(v for v, d in indeg.items() if d == 0)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for w in self.successors(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
                    ready.sort()
        if len(out) != self.rank:
            raise DiagramError(f"orientation of {self.type_label} has an oriented cycle")
        return out

    def is_bipartite(self) -> bool:
        return all(not self.predecessors(a) and not self.successors(b) for a, b in self.arrows)


def _bipartite_colors(n: int, edges) -> dict[int, int]:
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    color = {1: 0}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
    return color


def build_quiver(type_label: str, orientation="bipartite") -> QuiverSpec:
    """Orient the Dynkin diagram of the given type.

    ``orientation`` is ``"bipartite"`` (the class of vertex 1 are sources),
    ``"bipartite-flip"`` (the class of vertex 1 are sinks), or an explicit list
    of arrows ``(i, j)`` covering each edge exactly once.
    """
    label = canonical_label(type_label)
    n, edges = _diagram(label)
    if orientation in ("bipartite", "bipartite-flip"):
        color = _bipartite_colors(n, edges)
        src = 0 if orientation == "bipartite" else 1
        arrows = []
        for i, j in sorted(edges):
            arrows.append((i, j) if color[i] == src else (j, i))
    else:
        arrows = [tuple(map(int, a)) for a in orientation]
        if sorted(tuple(sorted(a)) for a in arrows) != sorted(edges):
            raise DiagramError(f"arrows {arrows} do not orient the diagram of {label}")
    q = QuiverSpec(label, n, tuple(sorted(arrows)), dict(edges))
    q.topological_order()
    return q


@dataclass(frozen=True)
class CoxeterData:
    h: int
    exponents: tuple[int, ...]
    positive_root_count: int


def coxeter_data(type_label: str) -> CoxeterData:
    fam, n, m = parse_type(type_label)
    if fam == "A":
        h, ex = n + 1, tuple(range(1, n + 1))
    elif fam in "BC":
        h, ex = 2 * n, tuple(range(1, 2 * n, 2))
    elif fam == "D":
        h, ex = 2 * n - 2, tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    elif fam == "E":
        h, ex = {
            6: (12, (1, 4, 5, 7, 8, 11)),
            7: (18, (1, 5, 7, 9, 11, 13, 17)),
            8: (30, (1, 7, 11, 13, 17, 19, 23, 29)),
        }[n]
    elif fam == "F":
        h, ex = 12, (1, 5, 7, 11)
    elif fam == "G":
        h, ex = 6, (1, 5)
    elif fam == "H":
        h, ex = {3: (10, (1, 5, 9)), 4: (30, (1, 11, 19, 29))}[n]
    else:
        h, ex = m, (1, m - 1)
    assert sum(ex) * 2 == n * h
    return CoxeterData(h, ex, n * h // 2)


def catalan_count(type_label: str) -> int:
    """prod_i (e_i + h + 1) / (e_i + 1), asserting it is an integer."""
    cd = coxeter_data(type_label)
    num = prod(e + cd.h + 1 for e in cd.exponents)
    den = prod(e + 1 for e in cd.exponents)
    if num % den:
        raise ArithmeticError(f"Catalan formula not integral for {type_label}")
    return num // den


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    field: FieldSpec
    rank: int
    cartan: tuple[tuple[ExactScalar, ...], ...]
    roots: frozenset
    positive: tuple[tuple[ExactScalar, ...], ...]

    def simple(self, i: int) -> tuple[ExactScalar, ...]:
        F = self.field
        return tuple(F.one if k == i - 1 else F.zero for k in range(self.rank))

    @property
    def almost_positive(self) -> tuple[tuple[ExactScalar, ...], ...]:
        negs = tuple(tuple(-c for c in self.simple(i)) for i in range(1, self.rank + 1))
        return negs + self.positive

    def reflect(self, i: int, v: Sequence[ExactScalar]) -> tuple[ExactScalar, ...]:
        row = self.cartan[i - 1]
        coef = sum((a * x for a, x in zip(row, v)), self.field.zero)
        out = list(v)
        out[i - 1] = out[i - 1] - coef
        return tuple(out)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.roots


def cartan_matrix(type_label: str, F: FieldSpec) -> tuple[tuple[ExactScalar, ...], ...]:
    """A_ij = <alpha_i^vee, alpha_j> as field elements."""
    label = canonical_label(type_label)
    n, edges = _diagram(label)
    ints = _cartan_integers(label)
    mat = [[F(2) if i == j else F.zero for j in range(1, n + 1)] for i in range(1, n + 1)]
    if ints is not None:
        for (i, j), a in ints.items():
            mat[i - 1][j - 1] = F(a)
    else:
        for (i, j), m in edges.items():
            c = -_two_cos(m, F)
            mat[i - 1][j - 1] = mat[j - 1][i - 1] = c
    return tuple(tuple(r) for r in mat)


def _two_cos(m: int, F: FieldSpec) -> ExactScalar:
    """2cos(pi/m) inside F (F must contain it)."""
    if m == 2:
        return F.zero
    if m == 3:
        return F.one
    if F.m == m:
        return F.theta
    # 2cos(pi/m) = T-polynomial in 2cos(pi/M) when m | M
    if F.m % m == 0:
        k = F.m // m
        # 2cos(k x) from 2cos(x) via c_{j+1} = t c_j - c_{j-1}
        prev, cur = F(2), F.theta
        for _ in range(k - 1):
            prev, cur = cur, F.theta * cur - prev
        return cur
    raise ValueError(f"2cos(pi/{m}) is not available in {F!r}")


def build_root_system(type_label: str | QuiverSpec, F: FieldSpec | None = None) -> RootSystem:
    """Close the simple roots under the simple reflections."""
    label = type_label.type_label if isinstance(type_label, QuiverSpec) else canonical_label(type_label)
    F = F or field_for(label)
    cart = cartan_matrix(label, F)
    n = len(cart)
    simples = [tuple(F.one if k == i else F.zero for k in range(n)) for i in range(n)]
    seen = set(simples)
    frontier = list(simples)
    limit = 10000
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                coef = sum((a * x for a, x in zip(cart[i], v)), F.zero)
                if coef.is_zero():
                    continue
                w = list(v)
                w[i] = w[i] - coef
                w = tuple(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if len(seen) > limit:
            raise DiagramError(f"{label} does not look like a finite type")
    positive = sorted((v for v in seen if all(c.sign() >= 0 for c in v)), key=_root_key)
    negative = [v for v in seen if all(c.sign() <= 0 for c in v)]
    if len(positive) + len(negative) != len(seen):
        raise ArithmeticError(f"roots of {label} are not sign-coherent")
    roots = frozenset(seen | {tuple(-c for c in v) for v in seen})
    return RootSystem(label, F, n, cart, roots, tuple(positive))


def _root_key(v):
    # height, then coefficients; both compared exactly
    return (sum(v[1:], v[0]), v)
