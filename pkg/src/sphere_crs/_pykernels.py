"""Pure numpy versions of the compiled kernels (same signatures and results)."""

import math

import numpy as np


def chain_eval(axes, angles, var, x, y, thetas):
    """x^T Rot(a_1, t_1) ... Rot(a_m, t_m) y for every theta."""
    thetas = np.asarray(thetas, dtype=float)
    ct, st = np.cos(thetas), np.sin(thetas)
    v = np.broadcast_to(np.asarray(y, dtype=float), (thetas.size, 3)).copy()
    for j in range(len(axes) - 1, -1, -1):
        k = np.asarray(axes[j], dtype=float)
        if var[j]:
            c, s = ct[:, None], st[:, None]
        else:
            c, s = math.cos(angles[j]), math.sin(angles[j])
        d = (v @ k)[:, None] * (1.0 - c)
        v = v * c + np.cross(k, v) * s + k * d
    return v @ np.asarray(x, dtype=float)


def _chain_scalar(axes, cf, sf, var, x, y, ct, st):
    v0, v1, v2 = y
    for j in range(len(axes) - 1, -1, -1):
        k0, k1, k2 = axes[j]
        c, s = (ct, st) if var[j] else (cf[j], sf[j])
        cx = k1 * v2 - k2 * v1
        cy = k2 * v0 - k0 * v2
        cz = k0 * v1 - k1 * v0
        d = (k0 * v0 + k1 * v1 + k2 * v2) * (1.0 - c)
        v0, v1, v2 = v0 * c + cx * s + k0 * d, v1 * c + cy * s + k1 * d, v2 * c + cz * s + k2 * d
    return x[0] * v0 + x[1] * v1 + x[2] * v2


def chain_bisect(axes, angles, var, x, y, c0, lo, hi, xtol):
    """Bisection for chain(theta) = c0 on [lo, hi]; assumes a sign change."""
    axes = [tuple(map(float, a)) for a in axes]
    cf = [math.cos(a) for a in angles]
    sf = [math.sin(a) for a in angles]
    x = tuple(map(float, x))
    y = tuple(map(float, y))
    flo = _chain_scalar(axes, cf, sf, var, x, y, math.cos(lo), math.sin(lo)) - c0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fmid = _chain_scalar(axes, cf, sf, var, x, y, math.cos(mid), math.sin(mid)) - c0
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polar_step(x):
    return 0.5 * (x + np.linalg.inv(x).T)


def rk4_rotation(r0, v, u, duration, dt):
    """Integrate dR/dt = R Omega(v, u) with classic RK4 and polar reprojection.

    For constant Omega the four RK4 stages collapse to one step matrix, the
    degree-4 Taylor polynomial of exp(h Omega).
    """
    x = np.array(r0, dtype=float)
    if duration <= 0.0:
        return x
    n = max(1, math.ceil(duration / dt - 1e-12))
    h = duration / n
    w = np.array([[0.0, -v, 0.0], [v, 0.0, -u], [0.0, u, 0.0]]) * h
    w2 = w @ w
    w3 = w2 @ w
    phi = np.eye(3) + w + w2 / 2.0 + w3 / 6.0 + (w3 @ w) / 24.0
    for _ in range(n):
        x = _polar_step(_polar_step(x @ phi))
    return x
