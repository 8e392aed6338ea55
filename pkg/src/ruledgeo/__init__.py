"""ruledgeo: computational line geometry on the dual unit sphere.

Ruled surfaces as dual spherical curves (E. Study map), their integral
invariants, and Mannheim offsets with numerically verified
characterizations.
"""

from .dual import DualAngle, DualNumber, DualVector3, dual_acos
from .lines import Line, dual_angle_between_lines, dual_to_line, foot_point, line_from_point_dir, line_to_dual
from .curves import CurveSampler, QuadratureSpec, arclength_reparam, closed_integral, cumulative_integral, differentiate, interpolate_periodic
from .surfaces import (
    FrameField,
    InvariantReport,
    RuledSurface,
    angle_of_pitch,
    area_vector,
    distribution_parameter,
    dual_curve_to_surface,
    invariant_report,
    is_developable,
    moving_frame,
    pitch,
    projected_area,
    ruled_surface,
    steiner_vector,
    striction_curve,
    surface_to_dual_curve,
)
from .offsets import (
    OffsetAngle,
    OffsetResult,
    developability_condition,
    developable_offset_pitch,
    dual_pitch_relation,
    is_mannheim_pair,
    mannheim_angle,
    mannheim_partner_check,
    projected_area_relations,
    rotate_offset,
    tangent_alignment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
