"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input,
3 internal error. Errors are reported as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arquiver import KnittingError, knit
from .exactfield import ExactScalar, FieldError
from .export import (build_ambient, build_section, dumps, off_text, polytope_to_json,
                     write_text)
from .folding import FoldingError, load_folding, supported_foldings, validate_folding
from .affine import ParamError, g_vectors
from .polytope import PolytopeError, f_vector, normal_fan, enumerate_vertices
from .rootsystem import (DiagramError, build_quiver, canonical_label, catalan_count,
                         coxeter_data, parse_type)
from .section import (SectionError, mixed_slice_check, symmetric_vertices, verify_prop_intersections,
                      verify_theorem)

SOURCES = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "D4", "D5", "D6", "D7", "D8",
           "E6", "E7", "E8"]
TARGETS = ["B3", "B4", "B5", "B6", "B7", "C2", "C3", "C4", "F4", "G2", "H3", "H4",
           "I2(m)"]
DEEP_CATALAN = 5000        # ambient polytopes larger than this need --deep
AMBIENT_CHECK_RANK = 7     # fold --verify also enumerates the ambient polytope up to this rank


class InvalidInput(ValueError):
    pass


class VerificationFailed(RuntimeError):
    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


@dataclass
class RunConfig:
    command: str
    type_label: str | None = None
    source: str | None = None
    target: str | None = None
    orientation: object = "bipartite"
    base: Fraction = Fraction(1)
    json_path: str | None = None
    off_path: str | None = None
    project: bool = False
    verify: bool = False
    deep: bool = False
    seed: int = 0
    samples: int = 1000
    dump: bool = False
    listing: bool = False
    allow_mutations: bool = False
    as_json: bool = False


def _default(o):
    if isinstance(o, ExactScalar):
        return o.to_json()
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o, key=str)
    return str(o)


def _emit(obj, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n")


def _orientation(value: str):
    if value in ("bipartite", "bipartite-flip"):
        return value
    try:
        with open(value) as fh:
            arrows = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read orientation file {value}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"orientation file {value} is not JSON: {exc}") from None
    if isinstance(arrows, dict):
        arrows = arrows.get("arrows")
    if not isinstance(arrows, list) or not all(isinstance(a, list) and len(a) == 2 for a in arrows):
        raise InvalidInput("orientation file must hold a list of [tail, head] pairs")
    return [tuple(a) for a in arrows]


def _base(value: str) -> Fraction:
    try:
        c = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"--c expects a rational number, got {value!r}") from None
    if c <= 0:
        raise InvalidInput(f"--c must be positive, got {value}")
    return c


def _target(args) -> str | None:
    t = args.target
    if t is None:
        return None
    if t.strip().upper() == "I2":
        if args.m is None:
            raise InvalidInput("--target I2 needs --m")
        return f"I2({args.m})"
    return t


def _check_deep(label: str, deep: bool) -> None:
    if catalan_count(label) > DEEP_CATALAN and not deep:
        raise InvalidInput(f"{label} has {catalan_count(label)} vertices; pass --deep to build it")


# ---------------------------------------------------------------------------


def cmd_list_types(cfg: RunConfig) -> int:
    rows = []
    for label in SOURCES + [t for t in TARGETS if t != "I2(m)"] + ["I2(5)", "I2(8)"]:
        d = coxeter_data(label)
        rows.append({"type": label, "role": "source" if label in SOURCES else "target",
                     "h": d.h, "exponents": list(d.exponents), "catalan": catalan_count(label)})
    if cfg.as_json:
        _emit(rows)
        return 0
    print(f"{'type':8} {'role':7} {'h':>3}  {'catalan':>7}  exponents")
    for r in rows:
        print(f"{r['type']:8} {r['role']:7} {r['h']:>3}  {r['catalan']:>7}  "
              f"{' '.join(map(str, r['exponents']))}")
    print("I2(m)    target    m  m+2 for any m >= 3; exponents 1 m-1")
    return 0


def cmd_knit(cfg: RunConfig) -> int:
    mq = knit(build_quiver(cfg.type_label, cfg.orientation))
    if cfg.dump:
        print(mq.dump())
        return 0
    if cfg.as_json:
        _emit({"type": mq.quiver.type_label, "objects": len(mq.objects),
               "rows": {str(i): n for i, n in sorted(mq.row_lengths.items())},
               "meshes": [m.equation() for m in mq.meshes]})
        return 0
    for m in mq.meshes:
        print(m.equation())
    return 0


def _ambient_verify(amb, cfg: RunConfig) -> dict:
    P = amb.polytope
    label = amb.mesh_quiver.quiver.type_label
    d = coxeter_data(label)
    report: dict = {"type": label}
    try:
        P.check()
        report["simple_and_feasible"] = {"ok": True}
    except PolytopeError as exc:
        report["simple_and_feasible"] = {"ok": False, "witness": str(exc)}
    report["vertex_count"] = {"ok": len(P.vertices) == catalan_count(label),
                              "found": len(P.vertices), "expected": catalan_count(label)}
    nf = P.dim * d.h // 2 + P.dim
    report["facet_count"] = {"ok": len(P.facets) == nf, "found": len(P.facets), "expected": nf}
    fan = normal_fan(P)
    g = g_vectors(amb.mesh_quiver)
    report["normals_are_g_vectors"] = {
        "ok": all(tuple(P.facets[k].linear) == g[k] for k in P.facets)}
    comp = fan.check_complete(samples=cfg.samples, seed=cfg.seed)
    report["fan_complete"] = {"ok": comp["ok"], "samples": comp["samples"],
                              "witnesses": comp["failures"][:3]}
    report["ok"] = all(v["ok"] for v in report.values() if isinstance(v, dict))
    return report


def _write_outputs(P, cfg: RunConfig, project_keys=None) -> dict:
    written = {}
    if cfg.json_path:
        write_text(cfg.json_path, dumps(polytope_to_json(P)))
        written["json"] = cfg.json_path
    if cfg.off_path:
        if P.dim > 3 and project_keys is None:
            raise InvalidInput("OFF needs dimension <= 3; add --project to use the last slice")
        write_text(cfg.off_path, off_text(P, project_keys))
        written["off"] = cfg.off_path
    return written


def _last_slice(P):
    return sorted(P.facets)[-3:] if len(P.facets) >= 3 else None


def cmd_build(cfg: RunConfig) -> int:
    label = canonical_label(cfg.type_label)
    _check_deep(label, cfg.deep)
    amb = build_ambient(label, cfg.orientation, cfg.base)
    P = amb.polytope
    proj = _last_slice(P) if cfg.project else None
    summary = {"type": label, "dimension": P.dim, "f_vector": list(f_vector(P)),
               "vertices": len(P.vertices), "facets": len(P.facets)}
    if cfg.command == "export" and not (cfg.json_path or cfg.off_path):
        raise InvalidInput("export needs --json and/or --off")
    summary["written"] = _write_outputs(P, cfg, proj)
    if cfg.verify or cfg.command == "verify":
        rep = _ambient_verify(amb, cfg)
        summary["verification"] = rep
        if not rep["ok"]:
            raise VerificationFailed(summary)
    _emit(summary)
    return 0


def fold_report(sp, cfg: RunConfig, ambient=None) -> dict:
    """Counts, the theorem suite and the facet-intersection check for one section."""
    fs = sp.plane.fold
    P = sp.polytope
    tgt = fs.target.type_label
    h = coxeter_data(tgt).h
    nt = fs.n_target
    rep: dict = {"folding": fs.name}
    val = validate_folding(fs, sp.plane.mesh_quiver)
    rep["folding_valid"] = {"ok": val["ok"]}
    rep["vertex_count"] = {"ok": len(P.vertices) == catalan_count(tgt),
                           "found": len(P.vertices), "expected": catalan_count(tgt)}
    rep["facet_count"] = {"ok": len(P.facets) == nt * (h + 2) // 2,
                          "found": len(P.facets), "expected": nt * (h + 2) // 2}
    try:
        P.check()
        rep["simple"] = {"ok": True}
    except PolytopeError as exc:
        rep["simple"] = {"ok": False, "witness": str(exc)}
    try:
        thm = verify_theorem(sp, ambient, samples=cfg.samples, seed=cfg.seed)
        rep["theorem"] = {"ok": thm.pop("ok"), **{k: v for k, v in thm.items() if k != "folding"}}
    except SectionError as exc:
        rep["theorem"] = {"ok": False, "witness": str(exc)}
    rep["facet_intersections"] = verify_prop_intersections(sp)
    if ambient is not None:
        try:
            sv = symmetric_vertices(ambient, fs, sp)
            rep["symmetric_vertices"] = {"ok": sv["matches_section"], "count": sv["count"]}
        except SectionError as exc:
            rep["symmetric_vertices"] = {"ok": False, "witness": str(exc)}
        rep["mixed_slice"] = mixed_slice_check(sp, ambient)
    rep["ok"] = all(v["ok"] for v in rep.values() if isinstance(v, dict))
    return rep


def cmd_fold(cfg: RunConfig) -> int:
    if cfg.listing:
        pairs = [{"source": s, "target": t} for s, t in supported_foldings()]
        if cfg.as_json:
            _emit(pairs)
        else:
            for p in pairs:
                print(f"{p['source']} -> {p['target']}")
        return 0
    if cfg.target is None:
        raise InvalidInput("fold needs --target (or --list)")
    fs = load_folding(cfg.target, cfg.source, cfg.orientation, cfg.allow_mutations)
    if fs.source.type_label == "E8" and not cfg.deep:
        raise InvalidInput("foldings of E8 need --deep")
    sp = build_section(cfg.target, cfg.source, cfg.orientation, cfg.base, cfg.allow_mutations)
    P = sp.polytope
    summary = {"folding": fs.name, "dimension": P.dim, "f_vector": list(f_vector(P)),
               "vertices": len(P.vertices), "facets": len(P.facets),
               "weights": [w.to_json() for w in fs.weight_set]}
    if cfg.command == "export" and not (cfg.json_path or cfg.off_path):
        raise InvalidInput("export needs --json and/or --off")
    summary["written"] = _write_outputs(P, cfg, _last_slice(P) if cfg.project else None)
    if cfg.verify or cfg.command == "verify":
        ambient = None
        if fs.n <= AMBIENT_CHECK_RANK or cfg.deep:
            ambient = enumerate_vertices(sp.plane.forms)
        rep = fold_report(sp, cfg, ambient)
        summary["verification"] = rep
        if not rep["ok"]:
            raise VerificationFailed(summary)
    _emit(summary)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.target:
        return cmd_fold(cfg)
    if cfg.type_label:
        return cmd_build(cfg)
    raise InvalidInput("verify needs --type or --target")


COMMANDS = {"list-types": cmd_list_types, "knit": cmd_knit, "build": cmd_build,
            "fold": cmd_fold, "verify": cmd_verify}


def run(cfg: RunConfig) -> int:
    if cfg.command == "export":
        return cmd_fold(cfg) if cfg.target else cmd_build(cfg)
    return COMMANDS[cfg.command](cfg)


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="assocfold",
                                description="Exact generalized associahedra and their folded sections.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, typed=False, folded=False):
        if typed:
            sp.add_argument("--type", dest="type_label", help="Dynkin type, e.g. A3, D6, E8")
        if folded:
            sp.add_argument("--source", help="simply-laced source type")
            sp.add_argument("--target", help="target type, e.g. C2, H3, I2(5) or I2 with --m")
            sp.add_argument("--m", type=int, help="dihedral order for --target I2")
            sp.add_argument("--allow-mutations", action="store_true",
                            help="accept non-bipartite orientations for folded runs")
        sp.add_argument("--orientation", default="bipartite",
                        help="bipartite, bipartite-flip, or a JSON file of arrows")
        sp.add_argument("--c", default="1", help="positive rational parameter base")
        sp.add_argument("--seed", type=int, default=0, help="seed for fan sampling")
        sp.add_argument("--samples", type=int, default=1000, help="random fan directions")
        sp.add_argument("--deep", action="store_true", help="allow E8-scale runs")
        sp.add_argument("--json", dest="json_path", help="write the polytope as JSON")
        sp.add_argument("--off", dest="off_path", help="write the polytope as OFF")
        sp.add_argument("--project", action="store_true",
                        help="draw OFF output in the values of the last three facet forms")

    lt = sub.add_parser("list-types", help="supported types with h, exponents and Catalan numbers")
    lt.add_argument("--json", dest="as_json", action="store_true")

    kn = sub.add_parser("knit", help="mesh equations of the translation quiver")
    kn.add_argument("--type", dest="type_label", required=True)
    kn.add_argument("--orientation", default="bipartite")
    kn.add_argument("--dump", action="store_true", help="print the grid of roots")
    kn.add_argument("--as-json", dest="as_json", action="store_true")

    b = sub.add_parser("build", help="enumerate the associahedron of a simply-laced type")
    common(b, typed=True)
    b.add_argument("--verify", action="store_true")

    f = sub.add_parser("fold", help="section of a folded associahedron")
    common(f, folded=True)
    f.add_argument("--verify", action="store_true")
    f.add_argument("--list", dest="listing", action="store_true", help="list supported foldings")
    f.add_argument("--as-json", dest="as_json", action="store_true")

    v = sub.add_parser("verify", help="run every check for a type or a folding")
    common(v, typed=True, folded=True)

    e = sub.add_parser("export", help="write JSON/OFF for a type or a folding")
    common(e, typed=True, folded=True)
    return p


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    cfg.as_json = getattr(ns, "as_json", False)
    cfg.dump = getattr(ns, "dump", False)
    cfg.listing = getattr(ns, "listing", False)
    cfg.verify = getattr(ns, "verify", False)
    cfg.deep = getattr(ns, "deep", False)
    cfg.seed = getattr(ns, "seed", 0)
    cfg.samples = getattr(ns, "samples", 1000)
    cfg.json_path = getattr(ns, "json_path", None)
    cfg.off_path = getattr(ns, "off_path", None)
    cfg.project = getattr(ns, "project", False)
    cfg.allow_mutations = getattr(ns, "allow_mutations", False)
    cfg.type_label = getattr(ns, "type_label", None)
    cfg.source = getattr(ns, "source", None)
    if hasattr(ns, "target"):
        cfg.target = _target(ns)
    if hasattr(ns, "orientation"):
        cfg.orientation = _orientation(ns.orientation)
    if hasattr(ns, "c"):
        cfg.base = _base(ns.c)
    if cfg.type_label:
        parse_type(cfg.type_label)
    if cfg.command in ("build",) and not cfg.type_label:
        raise InvalidInput("build needs --type")
    if cfg.command == "export" and not (cfg.type_label or cfg.target):
        raise InvalidInput("export needs --type or --target")
    return cfg


def _fail(code: int, kind: str, message: str, report=None) -> int:
    err = {"error": kind, "message": message, "exit_code": code}
    if report is not None:
        err["report"] = report
    _emit(err, sys.stderr)
    return code


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except VerificationFailed as exc:
        return _fail(1, "verification", str(exc), exc.report)
    except SectionError as exc:
        return _fail(1, "verification", str(exc))
    except (InvalidInput, DiagramError, FoldingError, ParamError, FieldError) as exc:
        return _fail(2, "invalid-input", str(exc))
    except OSError as exc:
        return _fail(2, "io", str(exc))
    except (KnittingError, PolytopeError, ArithmeticError, AssertionError) as exc:
        return _fail(3, "internal", f"{type(exc).__name__}: {exc}")
    except Exception as exc:  # noqa: BLE001
        return _fail(3, "internal", f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
