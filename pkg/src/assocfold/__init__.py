"""Exact generalized associahedra from mesh relations, and their folded sections."""

from .exactfield import ExactScalar, FieldError, FieldSpec, make_field, sign
from .rootsystem import (
    QuiverSpec,
    RootSystem,
    build_quiver,
    build_root_system,
    catalan_count,
    coxeter_data,
)
from .arquiver import MeshQuiver, knit, meshes
from .affine import AffineForm, ParamSet, g_vectors, propagate_forms, solve_vertex, uniform_params
from .polytope import Fan, SimplePolytope, enumerate_vertices, f_vector, normal_fan
from .folding import (
    FoldSpec,
    load_folding,
    project,
    project_w,
    supported_foldings,
    symmetric_params,
    validate_folding,
)
from .section import (
    SectionPlane,
    SectionPolytope,
    build_pi,
    section_polytope,
    symmetric_vertices,
    verify_prop_intersections,
    verify_theorem,
)

__version__ = "0.1.0"
