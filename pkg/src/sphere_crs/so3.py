"""Rotation algebra for the sphere model.

Segment matrices, their fixed axes, two small trigonometric subproblems used
by the inverse kinematics, and input hygiene for user supplied rotations.
"""

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidConfiguration
from .segments import SegmentKind, as_kind

TWO_PI = 2.0 * math.pi


class _AllAngles:
    """Sentinel: every angle solves the equation."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ALL_ANGLES"

    def __bool__(self):
        return True


ALL_ANGLES = _AllAngles()


def wrap_angle(theta):
    """Map an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


def arctan_ratio(num, den):
    """arctan(num/den) with the pole convention arctan(+-1/0) = +-pi/2.

    Only meaningful for den >= 0, which is how every closed form here uses it.
    """
    if den < 0:
        raise DomainError("arctan_ratio expects a non-negative denominator")
    return math.atan2(num, den)


def turn_radius(u_max):
    """r = 1/sqrt(1 + U_max^2) of a tight turn."""
    if not u_max >= 1.0:
        raise DomainError(f"U_max must be >= 1, got {u_max}")
    return 1.0 / math.sqrt(1.0 + u_max * u_max)


def u_max_from_radius(r):
    return math.sqrt(1.0 / (r * r) - 1.0)


def _check_r(r):
    if not 0.0 < r < 1.0:
        raise DomainError(f"turn radius must lie in (0, 1), got {r}")


def _g_plus(c, s):
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _l_zero(c, s):
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _c_plus(c, s, r, sign):
    # sign=+1 gives L+, sign=-1 gives R+ (axis x-component flipped)
    a = math.sqrt(1.0 - r * r)
    e11 = 1.0 - (1.0 - c) * r * r
    e13 = sign * (1.0 - c) * r * a
    e23 = sign * s * a
    e33 = c + (1.0 - c) * r * r
    return np.array([[e11, -r * s, e13], [r * s, c, -e23], [e13, e23, e33]])


def segment_matrix(kind, r, phi):
    """Rotation produced by a segment of the given kind traversed through angle phi.

    ``r`` is only read for tight turns (L+-, R+-).
    """
    kind = as_kind(kind)
    if phi < 0:
        raise DomainError(f"segment angle must be non-negative, got {phi}")
    c, s = math.cos(phi), math.sin(phi)
    fam = kind.family
    if fam == "C":
        _check_r(r)
    if kind is SegmentKind.G_PLUS:
        return _g_plus(c, s)
    if kind is SegmentKind.G_MINUS:
        return _g_plus(c, s).T.copy()
    if kind is SegmentKind.L_ZERO:
        return _l_zero(c, s)
    if kind is SegmentKind.R_ZERO:
        return _l_zero(c, s).T.copy()
    if kind is SegmentKind.L_PLUS:
        return _c_plus(c, s, r, 1.0)
    if kind is SegmentKind.R_PLUS:
        return _c_plus(c, s, r, -1.0)
    if kind is SegmentKind.L_MINUS:
        return _c_plus(c, s, r, -1.0).T.copy()
    return _c_plus(c, s, r, 1.0).T.copy()  # R-


def axial_vector(kind, r):
    """Unit vector left fixed by every segment matrix of this kind (unsigned)."""
    kind = as_kind(kind)
    if kind.family == "G":
        return np.array([0.0, 0.0, 1.0])
    if kind.family == "T":
        return np.array([1.0, 0.0, 0.0])
    a = math.sqrt(1.0 - r * r)
    if kind in (SegmentKind.L_PLUS, SegmentKind.R_MINUS):
        return np.array([a, 0.0, r])
    return np.array([-a, 0.0, r])


def rotation_axis(kind, r):
    """Signed axis n with segment_matrix(kind, r, phi) = Rot(n, +phi)."""
    kind = as_kind(kind)
    u = axial_vector(kind, r)
    if kind in (SegmentKind.G_MINUS, SegmentKind.R_ZERO,
                SegmentKind.L_MINUS, SegmentKind.R_MINUS):
        return -u
    return u


def hat(w):
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


def rodrigues(axis, theta):
    """Rot(axis, theta) for a unit axis."""
    k = hat(axis)
    return np.eye(3) + math.sin(theta) * k + (1.0 - math.cos(theta)) * (k @ k)


def solve_linear_trig(a, b, c, slack=1e-12):
    """All theta in [0, 2pi) with a*cos(theta) + b*sin(theta) = c.

    Returns a sorted list (possibly empty) or ALL_ANGLES when a = b = c = 0.
    ``slack`` is the relative amount by which |c| may exceed the amplitude
    and still be treated as a tangency.
    """
    amp = math.hypot(a, b)
    scale = max(1.0, abs(a), abs(b), abs(c))
    if amp <= 1e-14 * scale:
        return ALL_ANGLES if abs(c) <= 1e-14 * scale else []
    ratio = c / amp
    if abs(ratio) > 1.0:
        if abs(ratio) - 1.0 > slack:
            return []
        ratio = math.copysign(1.0, ratio)
    base = math.atan2(b, a)
    d = math.acos(ratio)
    t1, t2 = wrap_angle(base + d), wrap_angle(base - d)
    # angular separation on the circle
    gap = abs(t1 - t2)
    gap = min(gap, TWO_PI - gap)
    if gap < 1e-13:
        return [t1]
    return sorted((t1, t2))


def align_about_axis(u, p, q, tol=1e-9, degenerate_tol=None):
    """Angle theta with Rot(u, theta) @ p = q.

    Returns a one element list, an empty list when no rotation about ``u``
    maps p onto q, or ALL_ANGLES when both vectors lie along the axis.
    """
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if degenerate_tol is None:
        degenerate_tol = tol
    up, uq = float(u @ p), float(u @ q)
    if abs(up - uq) > tol or abs(np.linalg.norm(p) - np.linalg.norm(q)) > tol:
        return []
    pp = p - up * u
    qq = q - uq * u
    npp, nqq = np.linalg.norm(pp), np.linalg.norm(qq)
    if npp <= degenerate_tol and nqq <= degenerate_tol:
        return ALL_ANGLES
    if abs(npp - nqq) > tol:
        return []
    theta = math.atan2(float(u @ np.cross(pp, qq)), float(pp @ qq))
    return [wrap_angle(theta)]


def distance(a, b):
    """Frobenius distance between two matrices."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def is_rotation(m, tol=1e-9):
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return (np.linalg.norm(m.T @ m - np.eye(3)) <= tol
            and abs(np.linalg.det(m) - 1.0) <= tol)


def nearest_rotation(m, tol=1e-6):
    """Closest rotation in Frobenius norm (orthogonal polar factor).

    The acceptance test measures the distance in the spectral norm, i.e. the
    largest deviation of a singular value from 1, so a uniform scaling by
    (1 + tol) is still accepted. Raises InvalidConfiguration for reflections
    or matrices farther than tol.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise InvalidConfiguration("expected a finite 3x3 matrix")
    if np.linalg.det(m) <= 0.0:
        raise InvalidConfiguration("matrix has non-positive determinant (reflection)",
                                   distance=float("inf"))
    uu, sv, vt = np.linalg.svd(m)
    p = uu @ vt
    d = float(np.max(np.abs(sv - 1.0)))
    if d > tol:
        raise InvalidConfiguration(
            f"matrix is {d:.3e} away from SO(3) (tolerance {tol:g})", distance=d)
    return p


class EulerZYX(NamedTuple):
    x: float  # yaw, about z
    y: float  # pitch, about y
    z: float  # roll, about x
    gimbal_lock: bool = False


def euler_zyx_to_rotation(x, y, z):
    """R = Rz(x) Ry(y) Rx(z)."""
    cx, sx = math.cos(x), math.sin(x)
    cy, sy = math.cos(y), math.sin(y)
    cz, sz = math.cos(z), math.sin(z)
    return np.array([
        [cx * cy, cx * sy * sz - sx * cz, cx * sy * cz + sx * sz],
        [sx * cy, sx * sy * sz + cx * cz, sx * sy * cz - cx * sz],
        [-sy, cy * sz, cy * cz],
    ])


def rotation_to_euler_zyx(m, gimbal_tol=1e-9):
    """Inverse of euler_zyx_to_rotation; at gimbal lock z is fixed to 0."""
    m = np.asarray(m, dtype=float)
    cy = math.hypot(m[0, 0], m[1, 0])
    y = math.atan2(-m[2, 0], cy)
    if cy < gimbal_tol:
        x = math.atan2(-m[0, 1], m[1, 1])
        return EulerZYX(x, y, 0.0, True)
    x = math.atan2(m[1, 0], m[0, 0])
    z = math.atan2(m[2, 1], m[2, 2])
    return EulerZYX(x, y, z, False)


def quaternion_to_rotation(w, x, y, z):
    """Matrix of a unit quaternion w + xi + yj + zk.

    The input is not normalized, so a non-unit quaternion yields a matrix that
    fails the SO(3) check downstream instead of being silently accepted.
    """
    # homogeneous form: the result is |q|^2 times a rotation
    w2, x2, y2, z2 = w * w, x * x, y * y, z * z
    return np.array([
        [w2 + x2 - y2 - z2, 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), w2 - x2 + y2 - z2, 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), w2 - x2 - y2 + z2],
    ])
