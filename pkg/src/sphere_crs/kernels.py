"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting the environment
variable SPHERE_CRS_PURE_PYTHON=1 forces the numpy fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SPHERE_CRS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython' or 'python'); default is the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def _prep(axes, angles, var, x, y):
    return (np.ascontiguousarray(axes, dtype=np.float64),
            np.ascontiguousarray(angles, dtype=np.float64),
            np.ascontiguousarray(var, dtype=np.uint8),
            np.ascontiguousarray(x, dtype=np.float64),
            np.ascontiguousarray(y, dtype=np.float64))


def chain_eval(axes, angles, var, x, y, thetas, backend=None):
    impl = get_backend(backend)
    return impl.chain_eval(*_prep(axes, angles, var, x, y),
                           np.ascontiguousarray(thetas, dtype=np.float64))


def chain_bisect(axes, angles, var, x, y, c0, lo, hi, xtol=1e-12, backend=None):
    impl = get_backend(backend)
    return impl.chain_bisect(*_prep(axes, angles, var, x, y),
                             float(c0), float(lo), float(hi), float(xtol))


def rk4_rotation(r0, v, u, duration, dt, backend=None):
    impl = get_backend(backend)
    return impl.rk4_rotation(np.ascontiguousarray(r0, dtype=np.float64),
                             float(v), float(u), float(duration), float(dt))
