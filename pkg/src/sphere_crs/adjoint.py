"""Costate flow of the time-optimal problem and the traverse-angle closed forms.

The costates (A, B, C) obey A' = vB, B' = -vA + u_g C, C' = -u_g B with the
maximizing controls v = -sgn(C), u_g = -U_max sgn(A). The Casimir
g = A^2 + B^2 + C^2 is conserved and the Hamiltonian -1 - vC - u_g A vanishes
along every normal extremal.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .segments import SegmentKind

EPS_SING = 1e-10
SNAP_TOL = 1e-7
EVENT_XTOL = 1e-12


def beta(u_max):
    """Angle of a completely traversed tight turn at g = 1: arctan(1/sqrt(U^4-1)) + pi/2."""
    if not u_max >= 1.0:
        raise DomainError(f"beta needs U_max >= 1, got {u_max}")
    return math.atan2(1.0, math.sqrt(u_max**4 - 1.0)) + math.pi / 2


def alpha_full_traverse(g, u_max):
    """Arc angle of a completely traversed tight turn for Casimir g >= 1."""
    if not g >= 1.0:
        raise DomainError(f"alpha_full_traverse needs g >= 1, got {g}")
    if not u_max >= 1.0:
        raise DomainError(f"U_max must be >= 1, got {u_max}")
    w2 = 1.0 + u_max * u_max
    t1 = math.atan2(1.0, u_max * math.sqrt(max(0.0, (g - 1.0 / u_max**2) * w2)))
    t2 = math.atan2(-u_max, math.sqrt((g - 1.0) * w2))
    return t1 - t2


def lambda_c_from_g(g, u_max):
    """Amplitude of C(t) about its centre for g < 1 (uses g, not g^2)."""
    w2 = 1.0 + u_max * u_max
    val = (u_max * u_max * g - 1.0) / w2 + 1.0 / w2**2
    if val < 0:
        raise DomainError(f"no real lambda_C for g={g}, U_max={u_max}")
    return math.sqrt(val)


def g_from_lambda_c(lam, u_max):
    w2 = 1.0 + u_max * u_max
    return ((lam * lam - 1.0 / w2**2) * w2 + 1.0) / (u_max * u_max)


def alpha_small_g(lambda_c, u_max):
    """Arc angle of a middle tight turn between two cusps when g < 1."""
    if not u_max >= 1.0:
        raise DomainError(f"U_max must be >= 1, got {u_max}")
    w2 = 1.0 + u_max * u_max
    lo, hi = 1.0 / w2, u_max * u_max / w2
    if not (lo - 1e-15 <= lambda_c < hi):
        raise DomainError(f"lambda_C={lambda_c} outside [{lo}, {hi})")
    return math.pi + 2.0 * math.atan2(1.0, math.sqrt(max(0.0, w2 * w2 * lambda_c**2 - 1.0)))


def _sgn(x):
    return int(x > 0) - int(x < 0)


def extremal_controls(s, u_max, eps=EPS_SING):
    """Pointwise maximizers (v, u_g); each is 0 when its switching function is within eps of 0."""
    A, C = s[0], s[2]
    v = 0.0 if abs(C) <= eps else -float(_sgn(C))
    u = 0.0 if abs(A) <= eps else -u_max * float(_sgn(A))
    return v, u


def lookahead_controls(s, u_max, eps=EPS_SING):
    """Controls used by the simulator.

    At a zero of A (or C) the sign the coordinate is about to take decides the
    switch, so the flow leaves the switching surface instead of stalling on it.
    """
    A, B, C = s[0], s[1], s[2]
    v = None if abs(C) <= eps else -float(_sgn(C))
    u = None if abs(A) <= eps else -u_max * float(_sgn(A))
    if v is None and u is not None:
        dc = -u * B
        v = 0.0 if abs(dc) <= eps else -float(_sgn(dc))
    elif u is None and v is not None:
        da = v * B
        u = 0.0 if abs(da) <= eps else -u_max * float(_sgn(da))
    elif u is None and v is None:
        v, u = 0.0, 0.0
    return v, u


class AdjointState(NamedTuple):
    A: float
    B: float
    C: float

    @property
    def casimir(self):
        return self.A**2 + self.B**2 + self.C**2

    def hamiltonian(self, u_max, controls=None):
        v, u = controls if controls is not None else lookahead_controls(self, u_max)
        return -1.0 - v * self.C - u * self.A


def _step_matrix(v, u, h):
    m = np.array([[0.0, v, 0.0], [-v, 0.0, u], [0.0, -u, 0.0]]) * h
    m2 = m @ m
    m3 = m2 @ m
    # one classic RK4 step of the linear system y' = M y
    return np.eye(3) + m + m2 / 2.0 + m3 / 6.0 + (m3 @ m) / 24.0


@dataclass
class ExtremalTrajectory:
    t: np.ndarray
    states: np.ndarray  # (n, 3): A, B, C
    controls: np.ndarray  # (n, 2): v, u_g in force from this sample on
    u_max: float
    segments: list = field(default_factory=list)  # (kind, angle, t_start, t_end)
    switch_times: list = field(default_factory=list)
    flags: set = field(default_factory=set)

    @property
    def A(self):
        return self.states[:, 0]

    @property
    def B(self):
        return self.states[:, 1]

    @property
    def C(self):
        return self.states[:, 2]

    @property
    def casimir(self):
        return np.sum(self.states**2, axis=1)

    @property
    def hamiltonian(self):
        return -1.0 - self.controls[:, 0] * self.C - self.controls[:, 1] * self.A

    @property
    def dC_dt(self):
        return -self.controls[:, 1] * self.B


def _kind_of(v, u):
    return SegmentKind.from_controls(int(_sgn(v)), int(_sgn(u)))


def _locate(y, v, u, h, idx):
    # bisection on the step length for the zero of coordinate idx
    lo, hi = 0.0, h
    while hi - lo > EVENT_XTOL:
        mid = 0.5 * (lo + hi)
        ym = _step_matrix(v, u, mid) @ y
        if ym[idx] * y[idx] > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _singular_kind(y, snap_tol):
    if abs(y[1]) <= snap_tol and abs(y[0]) <= snap_tol:
        return "singular-G"
    if abs(y[1]) <= snap_tol and abs(y[2]) <= snap_tol:
        return "singular-T"
    return None


def simulate_extremal(s0, u_max, t_end, dt=1e-3, eps=EPS_SING, snap_tol=SNAP_TOL,
                      check_consistency=True):
    """Closed-loop RK4 integration of the costate flow with sharp switching.

    Sign changes of A, B and C inside a step are located by bisection on the
    step length to 1e-12. When B vanishes while A (or C) is within
    ``snap_tol`` of zero the flow sits on a stationary point; it then dwells
    there until t_end on a great-circle (or turn-in-place) arc and the
    trajectory is flagged 'singular-G' (or 'singular-T').
    """
    if not u_max >= 1.0:
        raise DomainError(f"U_max must be >= 1, got {u_max}")
    y = np.array(s0, dtype=float)
    flags = set()
    v, u = lookahead_controls(y, u_max, eps)
    h0 = -1.0 - v * y[2] - u * y[0]
    if check_consistency and abs(h0) > 1e-6:
        warnings.warn(f"initial costate violates the zero-Hamiltonian condition (H={h0:.3e})",
                      RuntimeWarning, stacklevel=2)
        flags.add("inconsistent-start")

    ts, ys, us = [0.0], [y.copy()], [(v, u)]
    segments, switches = [], []
    seg_start, seg_ctrl = 0.0, (v, u)
    t = 0.0

    def close_segment(t_now):
        if t_now > seg_start:
            k = _kind_of(*seg_ctrl)
            segments.append((k, k.omega(u_max) * (t_now - seg_start), seg_start, t_now))

    singular = _singular_kind(y, snap_tol)
    while singular is None and t < t_end - 1e-15:
        h = min(dt, t_end - t)
        y_new = _step_matrix(v, u, h) @ y
        best_tau, best_idx = None, None
        for idx in (0, 2, 1):
            if abs(y[idx]) > eps and y[idx] * y_new[idx] < 0.0:
                tau = _locate(y, v, u, h, idx)
                if best_tau is None or tau < best_tau:
                    best_tau, best_idx = tau, idx
        if best_tau is None:
            t += h
            y = y_new
        else:
            t += best_tau
            y = _step_matrix(v, u, best_tau) @ y
            if best_idx == 1:
                singular = _singular_kind(y, snap_tol)
                if singular is not None:
                    break
            nv, nu = lookahead_controls(y, u_max, eps)
            if (nv, nu) != (v, u):
                switches.append(t)
                close_segment(t)
                seg_start, seg_ctrl = t, (nv, nu)
                v, u = nv, nu
        ts.append(t)
        ys.append(y.copy())
        us.append((v, u))

    if singular is not None:
        flags.add(singular)
        if singular == "singular-G":
            y[0] = y[1] = 0.0
            nv, nu = -float(_sgn(y[2])), 0.0
        else:
            y[1] = y[2] = 0.0
            nv, nu = 0.0, -u_max * float(_sgn(y[0]))
        if t > seg_start:
            switches.append(t)
        close_segment(t)
        seg_start, seg_ctrl = t, (nv, nu)
        v, u = nv, nu
        ts.append(t)
        ys.append(y.copy())
        us.append((v, u))
        if t_end > t:
            n_dwell = max(1, math.ceil((t_end - t) / dt))
            for i in range(1, n_dwell + 1):
                ts.append(t + (t_end - t) * i / n_dwell)
                ys.append(y.copy())
                us.append((v, u))
            t = t_end

    close_segment(t)
    return ExtremalTrajectory(np.array(ts), np.array(ys), np.array(us, dtype=float), u_max,
                              segments, switches, flags)


PORTRAIT_COLUMNS = ["t", "A", "B", "C", "dC_dt", "v", "u_g", "g"]


def emit_portrait(s0, u_max, t_end, dt=1e-3, **kw):
    """Portrait data, one row per sample with columns PORTRAIT_COLUMNS, plus the trajectory."""
    tr = simulate_extremal(s0, u_max, t_end, dt, **kw)
    table = np.column_stack([tr.t, tr.A, tr.B, tr.C, tr.dC_dt,
                             tr.controls[:, 0], tr.controls[:, 1], tr.casimir])
    return table, tr


def small_g_circle_residual(c, dc, g, u_max):
    """Residual of (|C| - 1/(1+U^2))^2 + (dC/dt)^2 / (1+U^2) = lambda_C^2."""
    w2 = 1.0 + u_max * u_max
    lam2 = lambda_c_from_g(g, u_max) ** 2
    return (np.abs(c) - 1.0 / w2) ** 2 + np.asarray(dc) ** 2 / w2 - lam2
