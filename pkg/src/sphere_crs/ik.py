"""Inverse kinematics: all angle assignments of a concrete candidate that reach R_net.

Every candidate has the shape Rot(a_1, phi_1) P Rot(a_n, phi_n) = R_net with
a_1, a_n the signed axes of its end segments. Multiplying by a_1^T on the left
and a_n on the right removes both end angles:

    a_1^T P a_n = a_1^T R_net a_n .

What is left depends on the unknowns inside P:

* none: a consistency check;
* one angle appearing once: a cos(t) + b sin(t) = c, solved in closed form;
* one shared angle appearing several times: a trigonometric polynomial
  scanned on a dense grid with sign-change bisection.

The end angles then follow from rotating one vector onto another about a
known axis. Each assignment is verified with the full forward product.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .adjoint import beta
from .catalog import BETA, ConcreteCandidate
from .errors import DomainError
from .so3 import (ALL_ANGLES, align_about_axis, rodrigues, rotation_axis, segment_matrix,
                  solve_linear_trig, turn_radius, wrap_angle)

FEAS_TOL = 1e-6
N_SCAN = 4096
ROOT_XTOL = 1e-12
ALIGN_TOL = 1e-5


@dataclass(frozen=True)
class AngleSolution:
    angles: tuple
    residual: float
    branch_id: str

    @property
    def as_array(self):
        return np.array(self.angles)


def epsilon_of_mu(mu, r):
    """Middle angle eps = 2 delta of the reflected tight-turn triple for a shared angle mu."""
    _check_mu(mu, r)
    c, s = math.cos(mu), math.sin(mu)
    return 2.0 * math.atan2(s, c * (1.0 - 2.0 * r * r) + 2.0 * r * r)


def theta_of_mu(mu, r):
    """Great-circle angle theta equivalent to L+(mu) R+(eps) L+(mu)."""
    _check_mu(mu, r)
    c, s = math.cos(mu), math.sin(mu)
    r2, r4 = r * r, r**4
    den = (4 * r2 - 8 * r4) * c + (-4 * r2 + 4 * r4) * c * c + 4 * r4 + 1
    ct = ((4 * r2 - 8 * r4) * c + (4 * r2 + 4 * r4) * c * c - 8 * r2 + 4 * r4 + 1) / den
    st = 4 * r * ((1 - 2 * r2) * s + 2 * r2 * c * s) / den
    return math.atan2(st, ct)


def _check_mu(mu, r):
    if not 0.0 < r <= 1.0 / math.sqrt(2.0) + 1e-15:
        raise DomainError(f"turn radius {r} outside (0, 1/sqrt(2)]")
    # the closed forms only need sin(mu) > 0; the catalog itself caps mu below beta
    if not 0.0 < mu < math.pi:
        raise DomainError(f"mu={mu} outside (0, pi)")


def angle_about_axis(axis, m):
    """Angle of the rotation m about ``axis`` (m is assumed to be such a rotation)."""
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[k] = 1.0
    p = np.cross(axis, e)
    p /= np.linalg.norm(p)
    mp = m @ p
    return wrap_angle(math.atan2(float(axis @ np.cross(p, mp)), float(p @ mp)))


@dataclass(frozen=True)
class _Prepared:
    n: int
    r: float
    kinds: tuple
    axes: np.ndarray
    fixed: tuple  # angle or None per position
    mode: str  # 'single', 'none', 'linear', 'scan'
    mid: tuple  # middle positions 1..n-2
    var_pos: tuple  # middle positions carrying the unknown
    p_fixed: np.ndarray = None  # for 'none'
    lin: tuple = None  # (a, b, d) for 'linear'
    grid: tuple = None  # (thetas, values) for 'scan'
    scan_hi: float = 0.0


def _prepare_impl(c, r, n_scan):
    kinds = c.kinds
    n = len(kinds)
    axes = np.array([rotation_axis(k, r) for k in kinds])
    b = beta(c.u_max)
    fixed = tuple(b if cls == BETA else None for cls in c.classes)
    if n == 1:
        return _Prepared(n, r, kinds, axes, fixed, "single", (), ())
    mid = tuple(range(1, n - 1))
    var_pos = tuple(i for i in mid if fixed[i] is None)
    a1, an = axes[0], axes[-1]
    if not var_pos:
        p = np.eye(3)
        for i in mid:
            p = p @ rodrigues(axes[i], fixed[i])
        return _Prepared(n, r, kinds, axes, fixed, "none", mid, var_pos, p_fixed=p)
    if len(var_pos) == 1:
        m = var_pos[0]
        k1 = np.eye(3)
        for i in mid:
            if i < m:
                k1 = k1 @ rodrigues(axes[i], fixed[i])
        k2 = np.eye(3)
        for i in mid:
            if i > m:
                k2 = k2 @ rodrigues(axes[i], fixed[i])
        x = k1.T @ a1
        y = k2 @ an
        am = axes[m]
        d = float((x @ am) * (am @ y))
        lin = (float(x @ y) - d, float(x @ np.cross(am, y)), d)
        return _Prepared(n, r, kinds, axes, fixed, "linear", mid, var_pos, lin=lin)
    # several occurrences of one shared angle
    mid_axes = axes[1:n - 1]
    mid_angles = np.array([fixed[i] if fixed[i] is not None else 0.0 for i in mid])
    var = np.array([fixed[i] is None for i in mid], dtype=np.uint8)
    thetas = np.linspace(0.0, b, n_scan + 1)
    vals = kernels.chain_eval(mid_axes, mid_angles, var, a1, an, thetas)
    return _Prepared(n, r, kinds, axes, fixed, "scan", mid, var_pos,
                     grid=(thetas, vals, mid_axes, mid_angles, var), scan_hi=b)


@lru_cache(maxsize=4096)
def _prepare(c, r, n_scan):
    return _prepare_impl(c, r, n_scan)


def _middle_product(prep, theta):
    p = np.eye(3)
    for i in prep.mid:
        ang = prep.fixed[i] if prep.fixed[i] is not None else theta
        p = p @ rodrigues(prep.axes[i], ang)
    return p


def _end_angles(a1, an, p, rn):
    """(phi_1, phi_n) with Rot(a1, phi_1) p Rot(an, phi_n) = rn, or None."""
    q1 = align_about_axis(a1, p @ an, rn @ an, tol=ALIGN_TOL, degenerate_tol=1e-9)
    if q1 is ALL_ANGLES:
        qn = align_about_axis(an, rn.T @ a1, p.T @ a1, tol=ALIGN_TOL, degenerate_tol=1e-9)
        if qn is ALL_ANGLES:
            phin = angle_about_axis(an, p.T @ rn)
            return 0.0, phin
        if not qn:
            return None
        phin = qn[0]
        phi1 = angle_about_axis(a1, rn @ rodrigues(an, phin).T @ p.T)
        return phi1, phin
    if not q1:
        return None
    phi1 = q1[0]
    phin = angle_about_axis(an, p.T @ rodrigues(a1, phi1).T @ rn)
    return phi1, phin


def _scan_roots(prep, c0):
    thetas, vals, mid_axes, mid_angles, var = prep.grid
    f = vals - c0
    roots = []
    zero = np.abs(f) < 1e-12
    roots.extend(thetas[zero].tolist())
    sc = np.nonzero((f[:-1] * f[1:] < 0.0) & ~zero[:-1] & ~zero[1:])[0]
    for i in sc:
        roots.append(kernels.chain_bisect(mid_axes, mid_angles, var, prep.axes[0], prep.axes[-1],
                                          c0, thetas[i], thetas[i + 1], ROOT_XTOL))
    # tangential contacts: local extrema of |f| that nearly touch zero
    af = np.abs(f)
    inner = np.nonzero((af[1:-1] <= af[:-2]) & (af[1:-1] <= af[2:])
                       & (f[:-2] * f[2:] > 0.0) & (af[1:-1] < 1e-4) & ~zero[1:-1])[0] + 1
    for i in inner:
        def sq(t):
            v = kernels.chain_eval(mid_axes, mid_angles, var, prep.axes[0], prep.axes[-1],
                                   np.array([t]))[0] - c0
            return v * v
        res = minimize_scalar(sq, bounds=(thetas[i - 1], thetas[i + 1]), method="bounded",
                              options={"xatol": 1e-13})
        if res.fun < 1e-18:
            roots.append(float(res.x))
    return sorted(roots)


def _raw_solutions(c, rn, r, n_scan=N_SCAN):
    """Every assignment produced by the elimination, with residuals, before filtering."""
    prep = _prepare(c, r, n_scan)
    axes = prep.axes
    a1, an = axes[0], axes[-1]
    out = []
    if prep.mode == "single":
        phi = angle_about_axis(a1, rn)
        out.append(((phi,), "single"))
    elif prep.mode == "none":
        c0 = float(a1 @ rn @ an)
        if abs(float(a1 @ prep.p_fixed @ an) - c0) <= ALIGN_TOL:
            ends = _end_angles(a1, an, prep.p_fixed, rn)
            if ends is not None:
                out.append((_assemble(prep, ends, None), "direct"))
    else:
        c0 = float(a1 @ rn @ an)
        if prep.mode == "linear":
            a, b, d = prep.lin
            mids = solve_linear_trig(a, b, c0 - d, slack=1e-9)
            if mids is ALL_ANGLES:
                mids = []
        else:
            mids = _scan_roots(prep, c0)
        for j, th in enumerate(mids):
            p = _middle_product(prep, th)
            ends = _end_angles(a1, an, p, rn)
            if ends is not None:
                out.append((_assemble(prep, ends, th), f"root{j}"))
    result = []
    for angles, branch in out:
        m = np.eye(3)
        for k, ang in zip(prep.kinds, angles):
            m = m @ segment_matrix(k, r, ang)
        result.append(AngleSolution(tuple(angles), float(np.linalg.norm(m - rn)), branch))
    return result


def _assemble(prep, ends, theta):
    angles = []
    for i in range(prep.n):
        if i == 0:
            angles.append(ends[0])
        elif i == prep.n - 1:
            angles.append(ends[1])
        elif prep.fixed[i] is not None:
            angles.append(prep.fixed[i])
        else:
            angles.append(theta)
    return angles


def in_domain(c, angles):
    return all(c.domain(i).contains(a) for i, a in enumerate(angles))


def solve_candidate(c: ConcreteCandidate, r_net, r=None, tol=FEAS_TOL, n_scan=N_SCAN,
                    with_rejects=False):
    """All in-domain angle assignments of ``c`` whose forward product is within tol of r_net.

    With ``with_rejects`` the return value is (accepted, best_rejected_residual).
    """
    if r is None:
        r = turn_radius(c.u_max)
    elif abs(r - turn_radius(c.u_max)) > 1e-12:
        raise DomainError("turn radius does not match the candidate's U_max")
    rn = np.asarray(r_net, dtype=float)
    accepted, best_rej = [], math.inf
    seen = []
    for sol in _raw_solutions(c, rn, r, n_scan):
        ok = sol.residual <= tol and in_domain(c, sol.angles)
        if not ok:
            best_rej = min(best_rej, sol.residual)
            continue
        if any(max(abs(x - y) for x, y in zip(sol.angles, s)) < 1e-9 for s in seen):
            continue
        seen.append(sol.angles)
        accepted.append(sol)
    if with_rejects:
        return accepted, best_rej
    return accepted
