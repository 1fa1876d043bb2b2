"""End-to-end planning: hygiene, normalization, catalog solve, and minimum-time selection."""

import math
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np

from .catalog import AbstractPathType, ConcreteCandidate, concrete_candidates
from .errors import NoSolutionFound, UnsupportedRegime
from .ik import FEAS_TOL, AngleSolution, solve_candidate
from .kinematics import PathInstance, Segment
from .so3 import nearest_rotation, turn_radius

TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PlanQuery:
    r_f: np.ndarray
    u_max: float
    r0: np.ndarray = None
    tolerance: float = FEAS_TOL


class FeasiblePath(NamedTuple):
    candidate: ConcreteCandidate
    solution: AngleSolution
    time: float

    @property
    def word(self):
        return self.candidate.word

    @property
    def angles(self):
        return self.solution.angles

    def path(self):
        return PathInstance(tuple(Segment(k, a) for k, a in zip(self.candidate.kinds, self.angles)),
                            self.candidate.u_max)


@dataclass
class PlanResult:
    feasible: list
    optimal: int
    ties: list
    r_net: np.ndarray
    u_max: float
    best_rejected_residual: float = field(default=math.inf)

    @property
    def best(self):
        return self.feasible[self.optimal]

    @property
    def optimal_time(self):
        return self.best.time


def empty_candidate(u_max):
    return ConcreteCandidate(AbstractPathType((), (), (), float(u_max)), ())


def _solve_one(c, r_net, r, tol):
    return c, solve_candidate(c, r_net, r, tol=tol, with_rejects=True)


def _check_regime(u_max):
    if not (isinstance(u_max, (int, float, np.floating)) and math.isfinite(u_max)) or u_max < 1.0:
        raise UnsupportedRegime(f"U_max = {u_max} is below 1; the planner only covers U_max >= 1",
                                u_max=u_max)


def plan(q: PlanQuery, map_fn=map):
    """Solve every candidate type and return all feasible paths, fastest first.

    ``map_fn`` may be any order-preserving or order-scrambling map (e.g. a
    process pool's map); the result does not depend on evaluation order.
    """
    _check_regime(q.u_max)
    u_max = float(q.u_max)
    rf = nearest_rotation(q.r_f)
    r0 = np.eye(3) if q.r0 is None else nearest_rotation(q.r0)
    r_net = r0.T @ rf
    r = turn_radius(u_max)
    tol = q.tolerance

    rows = []
    best_rej = math.inf
    if np.linalg.norm(r_net - np.eye(3)) <= tol:
        rows.append(FeasiblePath(empty_candidate(u_max),
                                 AngleSolution((), float(np.linalg.norm(r_net - np.eye(3))), "empty"),
                                 0.0))
    work = partial(_solve_one, r_net=r_net, r=r, tol=tol)
    for c, (sols, rej) in map_fn(work, concrete_candidates(u_max)):
        best_rej = min(best_rej, rej)
        for s in sols:
            t = sum(a / k.omega(u_max) for a, k in zip(s.angles, c.kinds))
            rows.append(FeasiblePath(c, s, float(t)))
    if not rows:
        raise NoSolutionFound(
            f"no candidate reached the target within {tol:g}; best residual {best_rej:.3e}",
            best_residual=best_rej)
    rows = _order(rows)
    t0 = rows[0].time
    ties = [i for i, fp in enumerate(rows) if fp.time <= t0 + TIE_TOL]
    return PlanResult(rows, 0, ties, r_net, u_max, best_rej)


def _order(rows):
    """Sort by time; rows within TIE_TOL of a group's first time are ordered by word, then angles.

    Distinct paths related by an exact identity have equal times up to rounding,
    so a plain time sort would order them by floating-point noise.
    """
    rows = sorted(rows, key=lambda fp: (fp.time, fp.word, fp.angles))
    out, group = [], []
    for fp in rows:
        if group and fp.time > group[0].time + TIE_TOL:
            out.extend(sorted(group, key=lambda x: (x.word, x.angles)))
            group = []
        group.append(fp)
    out.extend(sorted(group, key=lambda x: (x.word, x.angles)))
    return out


def satellite_to_query(j1, j3, v1max, v2max, r_f, r0=None, tolerance=FEAS_TOL):
    """Map reaction-wheel parameters to a planning query.

    Returns (query, time_scale); physical time = planner time / time_scale.
    """
    for name, val in (("j1", j1), ("j3", j3), ("v1max", v1max), ("v2max", v2max)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val}")
    u_max = v1max * j3 / (v2max * j1)
    if u_max < 1.0:
        raise UnsupportedRegime(f"the satellite parameters give U_max = {u_max:.6g} < 1", u_max=u_max)
    return PlanQuery(np.asarray(r_f, dtype=float), u_max, r0, tolerance), v2max / j3


def physical_time(tau, time_scale):
    return tau / time_scale
