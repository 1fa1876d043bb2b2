"""Time-optimal convexified Reeds-Shepp paths on the unit sphere.

Typical use::

    from sphere_crs import PlanQuery, plan
    res = plan(PlanQuery(r_f, u_max=3.0))
    res.best.word, res.best.angles, res.optimal_time
"""

from .adjoint import (AdjointState, alpha_full_traverse, alpha_small_g, beta, emit_portrait,
                      extremal_controls, simulate_extremal)
from .catalog import (AbstractPathType, ConcreteCandidate, angle_domain, expand_concrete,
                      sufficient_list)
from .errors import (CRSError, DomainError, InvalidConfiguration, NoSolutionFound,
                     UnsupportedRegime)
from .ik import AngleSolution, epsilon_of_mu, solve_candidate, theta_of_mu
from .kernels import BACKEND
from .kinematics import (PathInstance, Segment, duration, forward_kinematics, integrate_state,
                         sample_path)
from .oracle import OracleBudget, random_search
from .planner import PlanQuery, PlanResult, plan, satellite_to_query
from .segments import SegmentKind
from .so3 import (ALL_ANGLES, align_about_axis, axial_vector, euler_zyx_to_rotation,
                  nearest_rotation, rotation_to_euler_zyx, segment_matrix, solve_linear_trig,
                  turn_radius)

__all__ = [
    "AdjointState", "alpha_full_traverse", "alpha_small_g", "beta", "emit_portrait",
    "extremal_controls", "simulate_extremal",
    "AbstractPathType", "ConcreteCandidate", "angle_domain", "expand_concrete", "sufficient_list",
    "CRSError", "DomainError", "InvalidConfiguration", "NoSolutionFound", "UnsupportedRegime",
    "AngleSolution", "epsilon_of_mu", "solve_candidate", "theta_of_mu",
    "BACKEND",
    "PathInstance", "Segment", "duration", "forward_kinematics", "integrate_state", "sample_path",
    "OracleBudget", "random_search",
    "PlanQuery", "PlanResult", "plan", "satellite_to_query",
    "SegmentKind",
    "ALL_ANGLES", "align_about_axis", "axial_vector", "euler_zyx_to_rotation", "nearest_rotation",
    "rotation_to_euler_zyx", "segment_matrix", "solve_linear_trig", "turn_radius",
]

__version__ = "0.1.0"
