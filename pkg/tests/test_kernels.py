import math

import numpy as np
import pytest

from sphere_crs import kernels
from sphere_crs.so3 import rotation_axis, segment_matrix

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


def test_backend_names():
    assert kernels.BACKEND in ("python", "cython")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def chain_inputs(rng):
    r = 0.3
    kinds = ["R+", "L-", "L+", "R-"]
    axes = np.array([rotation_axis(k, r) for k in kinds])
    angles = rng.uniform(0, 2, 4)
    var = np.array([1, 0, 1, 1], dtype=np.uint8)
    return axes, angles, var, rotation_axis("L+", r), rotation_axis("R+", r)


@pytest.mark.parametrize("backend", BACKENDS)
def test_chain_eval_matches_matrices(backend, rng):
    axes, angles, var, x, y = chain_inputs(rng)
    thetas = np.linspace(0, 1.6, 50)
    vals = kernels.chain_eval(axes, angles, var, x, y, thetas, backend=backend)
    kinds = ["R+", "L-", "L+", "R-"]
    for t, v in zip(thetas, vals):
        m = np.eye(3)
        for k, a, flag in zip(kinds, angles, var):
            m = m @ segment_matrix(k, 0.3, t if flag else a)
        assert v == pytest.approx(x @ m @ y, abs=1e-13)


def test_backend_parity(rng):
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    axes, angles, var, x, y = chain_inputs(rng)
    thetas = np.linspace(0, 3, 1001)
    a = kernels.chain_eval(axes, angles, var, x, y, thetas, backend="python")
    b = kernels.chain_eval(axes, angles, var, x, y, thetas, backend="cython")
    assert np.max(np.abs(a - b)) < 1e-13
    c0 = float(np.median(a))
    i = int(np.nonzero(np.diff(np.sign(a - c0)))[0][0])
    ra = kernels.chain_bisect(axes, angles, var, x, y, c0, thetas[i], thetas[i + 1], backend="python")
    rb = kernels.chain_bisect(axes, angles, var, x, y, c0, thetas[i], thetas[i + 1], backend="cython")
    assert ra == pytest.approx(rb, abs=1e-12)
    r0 = segment_matrix("L+", 0.3, 0.4)
    pa = kernels.rk4_rotation(r0, 1.0, 2.0, 1.3, 1e-3, backend="python")
    pb = kernels.rk4_rotation(r0, 1.0, 2.0, 1.3, 1e-3, backend="cython")
    assert np.max(np.abs(pa - pb)) < 1e-13


@pytest.mark.parametrize("backend", BACKENDS)
def test_rk4_accuracy(backend):
    out = kernels.rk4_rotation(np.eye(3), 1.0, 3.0, 0.5, 1e-4, backend=backend)
    ref = segment_matrix("L+", 1 / math.sqrt(10), 0.5 * math.sqrt(10))
    assert np.linalg.norm(out - ref) < 1e-10
    assert np.linalg.norm(out.T @ out - np.eye(3)) < 1e-12


@pytest.mark.parametrize("backend", BACKENDS)
def test_bisect_finds_root(backend, rng):
    axes, angles, var, x, y = chain_inputs(rng)
    thetas = np.linspace(0, 3, 3001)
    vals = kernels.chain_eval(axes, angles, var, x, y, thetas, backend=backend)
    c0 = float(np.median(vals))
    i = int(np.nonzero(np.diff(np.sign(vals - c0)))[0][0])
    root = kernels.chain_bisect(axes, angles, var, x, y, c0, thetas[i], thetas[i + 1], backend=backend)
    f = kernels.chain_eval(axes, angles, var, x, y, np.array([root]), backend=backend)[0] - c0
    assert abs(f) < 1e-10
