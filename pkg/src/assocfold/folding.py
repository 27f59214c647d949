"""Weighted unfoldings: block maps, weights, and the folding map p.

An unfolding pairs a simply-laced quiver Q with a target diagram Q'. Every
vertex j of Q is sent to a block P(j) (a vertex of Q') and carries a weight
w_j > 0; the folding map is p(alpha_j) = w_j alpha'_{P(j)}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .affine import ParamError, ParamSet
from .arquiver import MeshQuiver
from .exactfield import ExactScalar, FieldSpec, chebyshev_weights, make_field
from .linalg import bareiss_solve
from .rootsystem import (
    QuiverSpec,
    _bipartite_colors,
    _diagram,
    build_quiver,
    build_root_system,
    canonical_label,
    coxeter_data,
    parse_type,
    rational_field,
)

__all__ = [
    "FoldingError",
    "FoldSpec",
    "load_folding",
    "identity_folding",
    "supported_foldings",
    "validate_folding",
    "symmetric_params",
    "fold_root",
    "project",
    "project_w",
    "orthogonal_projection",
    "perron_frobenius_weights",
]


class FoldingError(ValueError):
    pass


@dataclass(frozen=True)
class FoldSpec:
    source: QuiverSpec
    target: QuiverSpec
    blocks: tuple[tuple[int, ...], ...]     # blocks[b-1] = vertices of Q over [b]
    weights: dict                           # vertex j -> ExactScalar
    field: FieldSpec

    @property
    def n(self) -> int:
        return self.source.rank

    @property
    def n_target(self) -> int:
        return self.target.rank

    @property
    def block_of(self) -> dict[int, int]:
        return {j: b for b, blk in enumerate(self.blocks, start=1) for j in blk}

    @property
    def weight_set(self) -> tuple[ExactScalar, ...]:
        out = []
        for j in sorted(self.weights):
            w = self.weights[j]
            if w not in out:
                out.append(w)
        return tuple(sorted(out))

    @property
    def name(self) -> str:
        return f"{self.source.type_label}->{self.target.type_label}"

    def same_block_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for blk in self.blocks for i in blk for j in blk if i < j]

    def to_json(self) -> dict:
        return {
            "source": self.source.type_label,
            "target": self.target.type_label,
            "blocks": [list(b) for b in self.blocks],
            "weights": [self.weights[j].to_json() for j in sorted(self.weights)],
        }


# ---------------------------------------------------------------------------
# data


@lru_cache(maxsize=None)
def _table() -> dict:
    raw = resources.files(__package__).joinpath("data/foldings.json").read_text()
    data = json.loads(raw)
    return {(e["source"], e["target"]): e for e in data["foldings"]}


def perron_frobenius_weights(label: str, F: FieldSpec) -> dict[int, ExactScalar]:
    """Positive solution of theta w_v = sum_{u ~ v} w_u with w_1 = 1."""
    n, edges = _diagram(label)
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    rows, rhs = [], []
    # equations for vertices 1..n-1, plus the normalization w_1 = 1
    for v in range(1, n):
        rows.append([(-F.theta if u == v else (F.one if u in adj[v] else F.zero))
                     for u in range(1, n + 1)])
        rhs.append(F.zero)
    rows.append([F.one if u == 1 else F.zero for u in range(1, n + 1)])
    rhs.append(F.one)
    w = bareiss_solve(rows, rhs)
    last = sum((w[u - 1] for u in adj[n]), F.zero)
    if last != F.theta * w[n - 1]:
        raise FoldingError(f"2cos(pi/{F.m}) is not an eigenvalue of the {label} diagram")
    out = {v: F(w[v - 1]) for v in range(1, n + 1)}
    if any(x.sign() <= 0 for x in out.values()):
        raise FoldingError(f"eigenvector for {label} is not positive")
    return out


def _dihedral(source: str, m: int, orientation) -> FoldSpec:
    F = make_field(m)
    n, edges = _diagram(source)
    fam, rank, _ = parse_type(source)
    if coxeter_data(source).h != m:
        raise FoldingError(f"{source} has Coxeter number {coxeter_data(source).h}, not {m}")
    if fam == "A":
        w = dict(zip(range(1, n + 1), chebyshev_weights(F, n)))
    else:
        w = perron_frobenius_weights(source, F)
    color = _bipartite_colors(n, edges)
    blocks = (tuple(v for v in range(1, n + 1) if color[v] == 0),
              tuple(v for v in range(1, n + 1) if color[v] == 1))
    return _assemble(source, f"I2({m})", blocks, w, F, orientation)


def _crystallographic_series(fam: str, n: int, orientation) -> FoldSpec:
    F = rational_field()
    if fam == "C":
        source = f"A{2 * n - 1}"
        blocks = tuple((i, 2 * n - i) for i in range(1, n)) + ((n,),)
    else:
        if n < 3:
            raise FoldingError("B_n unfoldings start at B3 (from D4); use C2 for rank 2")
        source = f"D{n + 1}"
        blocks = tuple((i,) for i in range(1, n)) + ((n, n + 1),)
    w = {j: F.one for blk in blocks for j in blk}
    return _assemble(source, f"{fam}{n}", blocks, w, F, orientation)


def _from_table(source: str, target: str, orientation) -> FoldSpec:
    e = _table()[(source, target)]
    F = make_field(e["m"])
    w = {j: F(c) for j, c in enumerate(e["weights"], start=1)}
    blocks = tuple(tuple(b) for b in e["blocks"])
    return _assemble(source, target, blocks, w, F, orientation)


def _assemble(source, target, blocks, weights, F, orientation) -> FoldSpec:
    q = build_quiver(source, orientation)
    P = {j: b for b, blk in enumerate(blocks, start=1) for j in blk}
    if sorted(P) != list(q.vertices):
        raise FoldingError(f"blocks {blocks} do not partition the vertices of {source}")
    arrows = set()
    for a, b in q.arrows:
        if P[a] == P[b]:
            raise FoldingError(f"arrow {a}->{b} lies inside a block")
        arrows.add((P[a], P[b]))
    if any((b, a) in arrows for a, b in arrows):
        raise FoldingError(f"orientation of {source} is not compatible with the blocks")
    tq = build_quiver(target, sorted(arrows))
    return FoldSpec(q, tq, tuple(blocks), dict(weights), F)


def identity_folding(label: str, orientation="bipartite") -> FoldSpec:
    q = build_quiver(label, orientation)
    F = rational_field()
    return FoldSpec(q, q, tuple((j,) for j in q.vertices), {j: F.one for j in q.vertices}, F)


def load_folding(target: str, source: str | None = None, orientation="bipartite",
                 allow_mutations: bool = False) -> FoldSpec:
    """The unfolding of ``target``; ``source`` picks among several when needed.

    Supported pairs: D_{n+1} -> B_n, A_{2n-1} -> C_n, E6 -> F4, A_{m-1} -> I2(m)
    (G2 is read as I2(6)), D_{n+1} -> I2(2n), E6/E7/E8 -> I2(12)/I2(18)/I2(30),
    D6 -> H3, E8 -> H4. Non-bipartite orientations need ``allow_mutations``.
    """
    if orientation not in ("bipartite", "bipartite-flip") and not allow_mutations:
        raise FoldingError("folded runs use bipartite orientations unless mutations are allowed")
    if target.strip() == "G2":
        target = "I2(6)"
    target = canonical_label(target)
    fam, n, m = parse_type(target)
    source = canonical_label(source) if source else None
    if source == target:
        return identity_folding(target, orientation)
    if fam in "AD" or fam == "E":
        raise FoldingError(f"{target} is simply-laced; only the identity folding applies")
    if fam == "C":
        exp = f"A{2 * n - 1}"
        if source not in (None, exp):
            raise FoldingError(f"C{n} unfolds from {exp}, not {source}")
        return _crystallographic_series("C", n, orientation)
    if fam == "B":
        exp = f"D{n + 1}"
        if source not in (None, exp):
            raise FoldingError(f"B{n} unfolds from {exp}, not {source}")
        return _crystallographic_series("B", n, orientation)
    if fam in "FH":
        default = {"F4": "E6", "H3": "D6", "H4": "E8"}[target]
        if source not in (None, default):
            raise FoldingError(f"{target} unfolds from {default}, not {source}")
        return _from_table(default, target, orientation)
    if fam == "I":
        source = source or f"A{m - 1}"
        sfam, sn, _ = parse_type(source)
        if sfam not in "ADE":
            raise FoldingError(f"I2({m}) cannot unfold to {source}")
        return _dihedral(source, m, orientation)
    raise FoldingError(f"unsupported target {target}")


def supported_foldings(max_rank: int = 8) -> list[tuple[str, str]]:
    """Representative (source, target) pairs up to the given source rank."""
    out = []
    for n in range(2, max_rank // 2 + 1):
        out.append((f"A{2 * n - 1}", f"C{n}"))
    for n in range(3, max_rank):
        out.append((f"D{n + 1}", f"B{n}"))
    out.append(("E6", "F4"))
    for m in range(3, max_rank + 2):
        out.append((f"A{m - 1}", f"I2({m})"))
    for n in range(3, max_rank):
        out.append((f"D{n + 1}", f"I2({2 * n})"))
    out += [("E6", "I2(12)"), ("E7", "I2(18)"), ("E8", "I2(30)"), ("D6", "H3"), ("E8", "H4")]
    return out


# ---------------------------------------------------------------------------
# the linear maps


def fold_root(fs: FoldSpec, alpha: Sequence) -> tuple[ExactScalar, ...]:
    """p(alpha) in the simple-root coordinates of the target."""
    F = fs.field
    out = [F.zero] * fs.n_target
    P = fs.block_of
    for j, a in enumerate(alpha, start=1):
        if a:
            out[P[j] - 1] = out[P[j] - 1] + fs.weights[j] * a
    return tuple(out)


def project(fs: FoldSpec, lam: Sequence) -> tuple[ExactScalar, ...]:
    """lambda'_[i] = sum over P(j) = [i] of w_j lambda_j."""
    return fold_root(fs, lam)


def project_w(fs: FoldSpec, g: Sequence, row: int) -> tuple[ExactScalar, ...]:
    """pi(g) / w_row for a g-vector of an object in row ``row``."""
    w = fs.weights[row]
    return tuple(x / w for x in project(fs, g))


def orthogonal_projection(fs: FoldSpec, lam: Sequence) -> tuple[ExactScalar, ...]:
    """pi(lambda) in the basis e_[b] = pi(e_i)/w_i, via the normal equations.

    Independent of :func:`project`: builds the projector U (U^T U)^-1 U^T onto
    the span of the block vectors and solves for coordinates in the e_[b] basis.
    """
    F = fs.field
    n, nt = fs.n, fs.n_target
    P = fs.block_of
    U = [[fs.weights[j] if P[j] == b else F.zero for b in range(1, nt + 1)]
         for j in range(1, n + 1)]

    def proj(v):
        rhs = [sum((U[j][b] * v[j] for j in range(n)), F.zero) for b in range(nt)]
        gram = [[sum((U[j][a] * U[j][b] for j in range(n)), F.zero) for b in range(nt)]
                for a in range(nt)]
        coef = bareiss_solve(gram, rhs)
        return [sum((U[j][b] * coef[b] for b in range(nt)), F.zero) for j in range(n)]

    basis = []
    for b, blk in enumerate(fs.blocks, start=1):
        i = blk[0]
        e = [F.one if j == i else F.zero for j in range(1, n + 1)]
        basis.append([x / fs.weights[i] for x in proj(e)])
    target = proj([F(x) for x in lam])
    # express target in the basis: least squares is exact since target is in the span
    gram = [[sum((basis[a][j] * basis[b][j] for j in range(n)), F.zero) for b in range(nt)]
            for a in range(nt)]
    rhs = [sum((basis[a][j] * target[j] for j in range(n)), F.zero) for a in range(nt)]
    return tuple(F(x) for x in bareiss_solve(gram, rhs))


# ---------------------------------------------------------------------------


def symmetric_params(fs: FoldSpec, mq: MeshQuiver, base=1) -> ParamSet:
    """c_{kj} = base * w_j, which satisfies w_i c_{kj} = w_j c_{ki} in every block."""
    F = fs.field
    b = F(base)
    if b.sign() <= 0:
        raise ParamError(f"parameter base must be positive, got {base}")
    return ParamSet(F, {m.start: b * fs.weights[m.start[1]] for m in mq.meshes})


def validate_folding(fs: FoldSpec, mq: MeshQuiver | None = None) -> dict:
    """Run the four consistency checks; each entry carries ok and witnesses."""
    from .arquiver import knit

    mq = mq or knit(fs.source)
    F = fs.field
    P = fs.block_of
    report: dict = {"folding": fs.name}

    bad = [(a, b) for a, b in fs.source.arrows if P[a] == P[b]]
    report["a_no_intra_block_arrows"] = {"ok": not bad, "witnesses": bad}

    src = build_root_system(fs.source.type_label, F)
    tgt = build_root_system(fs.target.type_label, F)
    ws = fs.weight_set
    misses, counts = [], {str(w): 0 for w in ws}
    for alpha in sorted(src.roots, key=lambda v: tuple(c.num for c in v)):
        image = fold_root(fs, alpha)
        hit = [w for w in ws if tuple(x / w for x in image) in tgt.roots]
        if not hit:
            misses.append([str(c) for c in alpha])
        elif all(c.sign() >= 0 for c in alpha):
            counts[str(hit[0])] += 1
    report["b_roots_fold_into_weighted_copies"] = {
        "ok": not misses, "witnesses": misses, "positive_root_weights": counts}

    row_bad = []
    for (k, j), root in sorted(mq.roots.items()):
        image = fold_root(fs, [F(c) for c in root])
        if tuple(x / fs.weights[j] for x in image) not in tgt.roots:
            row_bad.append([k, j])
    report["c_row_weights"] = {"ok": not row_bad, "witnesses": row_bad}

    hs, ht = coxeter_data(fs.source.type_label).h, coxeter_data(fs.target.type_label).h
    report["d_coxeter_numbers"] = {"ok": hs == ht, "source_h": hs, "target_h": ht}
    report["ok"] = all(v["ok"] for k, v in report.items() if isinstance(v, dict))
    return report
