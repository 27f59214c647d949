"""Vertex enumeration of simple H-polytopes {x : t_f(x) >= 0} by pivoting.

Starting from a known vertex, every edge is followed by dropping one tight
facet and finding the entering facet with an exact minimum-ratio test. The
polytopes built here are simple, so each vertex is identified by its set of
tight facets (its cluster) and no coordinate comparison is needed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .exactfield import sign
from .linalg import SingularMatrixError, inverse, is_zero, rank

__all__ = [
    "PolytopeError",
    "UnboundedError",
    "NonSimpleError",
    "Vertex",
    "SimplePolytope",
    "Fan",
    "enumerate_vertices",
    "normal_fan",
    "f_vector",
    "normalize_ray",
]


class PolytopeError(RuntimeError):
    pass


class UnboundedError(PolytopeError):
    """An edge ray never meets another facet."""


class NonSimpleError(PolytopeError):
    """More than dim facets are tight at a point reached by pivoting."""


@dataclass(frozen=True)
class Vertex:
    cluster: tuple
    point: tuple


@dataclass
class SimplePolytope:
    dim: int
    facets: dict                      # key -> form with .linear / .constant
    vertices: list[Vertex]
    edges: list[tuple[int, int]]
    meta: dict = field(default_factory=dict)

    def vertex_index(self) -> dict[tuple, int]:
        return {v.cluster: idx for idx, v in enumerate(self.vertices)}

    def facet_vertices(self, key) -> list[int]:
        return [idx for idx, v in enumerate(self.vertices) if key in v.cluster]

    def check(self) -> None:
        """Assert simplicity, feasibility and the flip property exactly."""
        n = self.dim
        for v in self.vertices:
            tight = []
            for key, f in self.facets.items():
                s = sign(f(v.point))
                if s < 0:
                    raise PolytopeError(f"facet {key} negative at vertex {v.cluster}")
                if s == 0:
                    tight.append(key)
            if sorted(tight) != sorted(v.cluster) or len(tight) != n:
                raise NonSimpleError(f"vertex {v.cluster} has tight set {tight}")
        for a, b in self.edges:
            ca, cb = set(self.vertices[a].cluster), set(self.vertices[b].cluster)
            if len(ca - cb) != 1 or len(cb - ca) != 1:
                raise PolytopeError(f"edge {a}-{b} is not a single flip")


def _dot(row, vec):
    acc = 0
    for a, b in zip(row, vec):
        if not is_zero(a) and not is_zero(b):
            acc = acc + a * b
    return acc


def _as_int_matrix(rows) -> np.ndarray | None:
    if all(isinstance(a, int) and abs(a) < 2 ** 31 for row in rows for a in row):
        return np.array(rows, dtype=np.int64)
    return None


def enumerate_vertices(forms: Mapping[Hashable, object], start: Sequence | None = None,
                       meta: dict | None = None) -> SimplePolytope:
    """Breadth-first pivoting over the edge graph of {x : forms >= 0}.

    ``start`` is the cluster of a known vertex; by default the facets whose
    forms vanish at the origin.
    """
    keys = sorted(forms)
    idx_of = {k: i for i, k in enumerate(keys)}
    lin = [tuple(forms[k].linear) for k in keys]
    const = [forms[k].constant for k in keys]
    n = len(lin[0])
    N = len(keys)
    int_lin = _as_int_matrix(lin)
    lin_bound = int(np.abs(int_lin).max()) if int_lin is not None else 0

    if start is None:
        start_idx = [i for i, c in enumerate(const) if is_zero(c)]
        point0 = tuple(0 for _ in range(n))
        slack0 = list(const)
        if any(sign(c) < 0 for c in const):
            raise PolytopeError("the origin is not feasible; pass an explicit start cluster")
    else:
        from .linalg import bareiss_solve
        start_idx = [idx_of[k] for k in start]
        point0 = bareiss_solve([lin[i] for i in start_idx], [-const[i] for i in start_idx])
        slack0 = [_dot(lin[i], point0) + const[i] for i in range(N)]
    if len(start_idx) != n:
        raise NonSimpleError(f"start vertex has {len(start_idx)} tight facets, expected {n}")

    def key_of(idxs):
        return tuple(sorted(keys[i] for i in idxs))

    start_key = key_of(start_idx)
    found: dict[tuple, tuple] = {start_key: (tuple(sorted(start_idx)), point0, slack0)}
    edges: set[tuple[tuple, tuple]] = set()
    queue = deque([start_key])
    _check_slack(slack0, set(start_idx), start_key)

    while queue:
        ckey = queue.popleft()
        tight, point, slack = found[ckey]
        tight = list(tight)
        try:
            minv = inverse([lin[i] for i in tight])
        except SingularMatrixError:
            raise PolytopeError(f"facets {ckey} have dependent normals") from None
        # column r of minv: direction increasing facet tight[r], others fixed at 0
        if (int_lin is not None and all(isinstance(a, int) for row in minv for a in row)
                and lin_bound * n * max(abs(a) for row in minv for a in row) < 2 ** 62):
            slopes_all = (int_lin @ np.array(minv, dtype=np.int64)).tolist()
            slope_col = lambda r: [row[r] for row in slopes_all]  # noqa: E731
        else:
            cols = [[minv[j][r] for j in range(n)] for r in range(n)]
            slope_col = lambda r: [_dot(lin[i], cols[r]) for i in range(N)]  # noqa: E731
        tight_set = set(tight)
        for r, leaving in enumerate(tight):
            slopes = slope_col(r)
            best = None          # (index, slack, -slope)
            ties = []
            for i in range(N):
                if i in tight_set:
                    continue
                sl = slopes[i]
                if sign(sl) >= 0:
                    continue
                a, p = slack[i], -sl
                if best is None:
                    best = (i, a, p)
                    continue
                cmp = sign(a * best[2] - best[1] * p)
                if cmp < 0:
                    best = (i, a, p)
                    ties = []
                elif cmp == 0:
                    ties.append(i)
            if best is None:
                raise UnboundedError(f"edge from {ckey} dropping {keys[leaving]} is unbounded")
            if ties:
                raise NonSimpleError(
                    f"minimum-ratio tie leaving {ckey} via {keys[leaving]}: "
                    f"{[keys[best[0]]] + [keys[t] for t in ties]}")
            entering = best[0]
            new_tight = sorted((tight_set - {leaving}) | {entering})
            nkey = key_of(new_tight)
            edges.add((ckey, nkey) if ckey < nkey else (nkey, ckey))
            if nkey in found:
                continue
            step = best[1] / best[2]
            d = [minv[j][r] for j in range(n)]
            npoint = tuple(x + step * dj if not is_zero(dj) else x for x, dj in zip(point, d))
            nslack = [s + step * sl if not is_zero(sl) else s for s, sl in zip(slack, slopes)]
            _check_slack(nslack, set(new_tight), nkey)
            found[nkey] = (tuple(new_tight), npoint, nslack)
            queue.append(nkey)

    order = sorted(found)
    index = {k: i for i, k in enumerate(order)}
    vertices = [Vertex(k, found[k][1]) for k in order]
    edge_list = sorted((index[a], index[b]) for a, b in edges)
    return SimplePolytope(n, {k: forms[k] for k in keys}, vertices, edge_list, dict(meta or {}))


def _check_slack(slack, tight: set, key) -> None:
    for i, s in enumerate(slack):
        sg = sign(s)
        if sg < 0:
            raise PolytopeError(f"vertex {key} violates a facet inequality")
        if (sg == 0) != (i in tight):
            raise NonSimpleError(f"vertex {key} is not simple")


# ---------------------------------------------------------------------------


def normalize_ray(v: Sequence) -> tuple:
    """Scale so the first nonzero coordinate is +1 or -1."""
    for a in v:
        if not is_zero(a):
            s = abs(a)
            return tuple(_div(x, s) for x in v)
    raise ValueError("zero vector has no direction")


def _div(x, s):
    if isinstance(x, int) and isinstance(s, int):
        q = Fraction(x, s)
        return q.numerator if q.denominator == 1 else q
    return x / s


@dataclass
class Fan:
    rays: list[tuple]
    cones: list[tuple[int, ...]]
    _inv: list = field(default=None, repr=False, compare=False)

    def ray_set(self) -> set:
        return {normalize_ray(r) for r in self.rays}

    def cone_set(self) -> set:
        return {frozenset(normalize_ray(self.rays[i]) for i in c) for c in self.cones}

    def _inverses(self):
        if self._inv is None:
            inv = []
            for c in self.cones:
                cols = [self.rays[i] for i in c]
                mat = [[cols[j][r] for j in range(len(cols))] for r in range(len(cols[0]))]
                inv.append(inverse(mat))
            self._inv = inv
        return self._inv

    def containing(self, direction: Sequence) -> tuple[list[int], bool]:
        """Indices of maximal cones containing ``direction``; flag set on boundary hits."""
        hits, boundary = [], False
        for ci, m in enumerate(self._inverses()):
            inside, zero = True, False
            for row in m:
                s = sign(_dot(row, direction))
                if s < 0:
                    inside = False
                    break
                if s == 0:
                    zero = True
            if inside:
                hits.append(ci)
                boundary = boundary or zero
        return hits, boundary

    def check_complete(self, samples: int = 1000, seed: int = 0, bound: int = 10 ** 6) -> dict:
        """Each random integer direction must lie in exactly one maximal cone."""
        rng = random.Random(seed)
        dim = len(self.rays[0])
        counts = {"samples": 0, "resampled": 0, "failures": []}
        while counts["samples"] < samples:
            y = [rng.randint(-bound, bound) for _ in range(dim)]
            if not any(y):
                continue
            hits, boundary = self.containing(y)
            if boundary:
                counts["resampled"] += 1
                continue
            counts["samples"] += 1
            if len(hits) != 1:
                counts["failures"].append({"direction": y, "cones": hits})
        counts["ok"] = not counts["failures"]
        return counts


def normal_fan(P: SimplePolytope) -> Fan:
    """Rays are the facet linear parts, one cone per vertex."""
    keys = list(P.facets)
    ray_index = {k: i for i, k in enumerate(keys)}
    rays = [tuple(P.facets[k].linear) for k in keys]
    cones = [tuple(sorted(ray_index[k] for k in v.cluster)) for v in P.vertices]
    return Fan(rays, cones)


def f_vector(P: SimplePolytope) -> tuple[int, ...]:
    """(vertices, edges, ..., facets); the full face lattice only when dim <= 3."""
    V, E = len(P.vertices), len(P.edges)
    F = sum(1 for k in P.facets if P.facet_vertices(k))
    if P.dim == 1:
        return (V,)
    if P.dim == 2:
        return (V, E)
    return (V, E, F)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine span of a point set."""
    if not points:
        return -1
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0
