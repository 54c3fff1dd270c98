"""Exact-arithmetic speciality of linear systems with torus-fixed base points.

The package decides speciality (h^1 != 0) of a linear system attached to an
ample invariant divisor and fixed-point multiplicities on a smooth complete
toric variety, two independent ways: by counting lattice points of the
support polytope, and by scanning invariant curves through pairs of fixed
points for intersection <= -2.  A companion Picard-lattice calculus on
blown-up rational surfaces implements Riemann-Roch bookkeeping and the
(-1)-special reduction.

All arithmetic is exact (Python integers); nothing uses floating point
except pixel coordinates in the SVG renderer.
"""

from .divisor import (
    LatticePolytope,
    ToricDivisor,
    curve_degree,
    divisor,
    edge_point_count,
    is_ample,
    lattice_points,
    polytope_of,
)
from .errors import CriterionMismatch, InputError, InternalError, NotAmpleError
from .fan import (
    Fan,
    ValidationReport,
    Wall,
    blowup_fixed_point,
    fan_from_json_dict,
    fan_to_json_dict,
    hirzebruch,
    load_fan,
    make_fan,
    product,
    projective_space,
    save_fan,
    validate,
    walls,
)
from .lattice import (
    determinant,
    dual_basis,
    segment_lattice_count,
    unimodular_inverse,
    unimodular_solve,
)
from .linsys import (
    LinearSystemSpec,
    SpecialityReport,
    conditions_count,
    effective_dim,
    h1,
    linear_system,
    load_system,
    multiplicity_at,
    speciality_report,
    speciality_witness,
    speciality_witnesses,
    split_points,
    system_curve_intersection,
    system_from_json_dict,
    system_to_json_dict,
    virtual_dim,
)
from .picard import (
    CandidateCurve,
    PicardClass,
    ReductionTrace,
    SurfaceModel,
    candidate_curves,
    canonical_class,
    class_from_json_dict,
    class_to_json_dict,
    exceptional,
    explore_orders,
    fa_model,
    genus,
    intersect,
    is_minus_one_special,
    load_class,
    p2_model,
    picard_class,
    picard_class_of_system,
    reduce,
    rr_virtual_dim,
    self_intersection,
)
from .render import build_render_spec, render_svg, render_system_svg, slice_report

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
