"""Randomized bang-bang search used to challenge the planner's optimum.

Schedules are sampled as up to ``max_segments`` constant-control pieces with
(v, u_g) drawn from the eight non-idle corner/edge combinations and a random
arc angle in (0, pi] per piece. Endpoints are evaluated in batch with the
exact exponential of each piece; the reported best hit is re-integrated with
the RK4 integrator as a cross-check.

A loose hit (within ``tol`` of the target) does not reach the target, so two
exact upper bounds are also produced:

* certified time: hit time plus the planner's time for the leftover rotation,
  i.e. the duration of a path that really ends at the target;
* polished time: the durations of the nearest samples refined by least squares
  until the endpoint matches to 1e-9.

Either bound falling below the planner optimum would falsify it.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import NoSolutionFound
from .kinematics import integrate_state

CHUNK = 10_000


@dataclass(frozen=True)
class OracleBudget:
    n_samples: int = 100_000
    max_segments: int = 6
    rng_seed: int = 0

    def __post_init__(self):
        if not 1 <= self.max_segments <= 6:
            raise ValueError("max_segments must lie in [1, 6]")
        if self.n_samples < 0:
            raise ValueError("n_samples must be non-negative")


@dataclass
class OracleResult:
    found: bool
    schedule: list = field(default_factory=list)  # [(v, u_g, duration), ...]
    time: float = math.inf
    residual: float = math.inf
    sample_index: int = -1
    n_hits: int = 0
    rk4_residual: float = math.inf
    certified_time: float = math.inf
    polished_time: float = math.inf
    polished_schedule: list = field(default_factory=list)
    polished_residual: float = math.inf

    def to_dict(self):
        def f(x):
            return None if not math.isfinite(x) else x
        return {
            "found": self.found, "time": f(self.time), "residual": f(self.residual),
            "sample_index": self.sample_index, "n_hits": self.n_hits,
            "rk4_residual": f(self.rk4_residual),
            "schedule": [list(p) for p in self.schedule],
            "certified_time": f(self.certified_time),
            "polished_time": f(self.polished_time),
            "polished_residual": f(self.polished_residual),
            "polished_schedule": [list(p) for p in self.polished_schedule],
        }


def control_set(u_max):
    """The eight (v, u_g) pairs with v in {-1, 0, 1}, u_g in {-U, 0, U}, not both zero."""
    return np.array([(v, u) for v in (-1.0, 0.0, 1.0) for u in (-u_max, 0.0, u_max)
                     if (v, u) != (0.0, 0.0)])


def _rot_batch(axes, phi):
    # Rodrigues for a batch of unit axes (n, 3) and angles (n,)
    n = axes.shape[0]
    k = np.zeros((n, 3, 3))
    k[:, 0, 1], k[:, 0, 2] = -axes[:, 2], axes[:, 1]
    k[:, 1, 0], k[:, 1, 2] = axes[:, 2], -axes[:, 0]
    k[:, 2, 0], k[:, 2, 1] = -axes[:, 1], axes[:, 0]
    s = np.sin(phi)[:, None, None]
    c = (1.0 - np.cos(phi))[:, None, None]
    return np.eye(3) + s * k + c * (k @ k)


def _piece_data(u_max):
    ctrl = control_set(u_max)
    w = np.column_stack([ctrl[:, 1], np.zeros(len(ctrl)), ctrl[:, 0]])  # generator (u, 0, v)
    omega = np.linalg.norm(w, axis=1)
    return ctrl, w / omega[:, None], omega


def _sample_chunk(seed, chunk, n, u_max, max_segments):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))
    nseg = rng.integers(1, max_segments + 1, size=n)
    combo = rng.integers(0, 8, size=(n, max_segments))
    phi = math.pi - rng.uniform(0.0, math.pi, size=(n, max_segments))  # (0, pi]
    phi[np.arange(max_segments)[None, :] >= nseg[:, None]] = 0.0
    return nseg, combo, phi


def _evaluate_chunk(nseg, combo, phi, u_max):
    _, axes, omega = _piece_data(u_max)
    n, m = combo.shape
    rot = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
    for j in range(m):
        rot = rot @ _rot_batch(axes[combo[:, j]], phi[:, j])
    times = np.sum(phi / omega[combo], axis=1)
    return rot, times


def _schedule(nseg, combo_row, phi_row, u_max):
    ctrl, _, omega = _piece_data(u_max)
    return [(float(ctrl[c, 0]), float(ctrl[c, 1]), float(p / omega[c]))
            for c, p in zip(combo_row[:nseg], phi_row[:nseg])]


def _schedule_rotation(sched):
    out = np.eye(3)
    for v, u, d in sched:
        w = np.array([u, 0.0, v])
        om = np.linalg.norm(w)
        out = out @ _rot_batch((w / om)[None, :], np.array([om * d]))[0]
    return out


def _polish(sched, r_net):
    """Refine the durations of a fixed control sequence so the endpoint hits r_net."""
    ctrl = [(v, u) for v, u, _ in sched]
    x0 = np.array([d for _, _, d in sched])

    def resid(x):
        return (_schedule_rotation([(v, u, d) for (v, u), d in zip(ctrl, x)]) - r_net).ravel()

    sol = least_squares(resid, x0, bounds=(0.0, np.inf), xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=200)
    res = float(np.linalg.norm(resid(sol.x)))
    return [(v, u, float(d)) for (v, u), d in zip(ctrl, sol.x)], res


def random_search(r_net, u_max, budget=None, tol=5e-2, n_polish=20, n_certify=10,
                  planner_fn=None):
    """Sample bang-bang schedules and report the fastest loose hit plus exact upper bounds.

    ``planner_fn(r, u_max)`` returns the optimal time to reach r; it is used for
    the certified bound and defaults to the package planner.
    """
    budget = budget or OracleBudget()
    r_net = np.asarray(r_net, dtype=float)
    if np.linalg.norm(r_net - np.eye(3)) <= 1e-12:
        return OracleResult(True, [], 0.0, 0.0, -1, 1, 0.0, 0.0, 0.0, [], 0.0)

    best = None  # (time, index, residual, schedule)
    hits = []  # (time, index, schedule, rotation)
    near = []  # (residual, index, schedule) for polishing
    done = 0
    chunk = 0
    while done < budget.n_samples:
        n = min(CHUNK, budget.n_samples - done)
        nseg, combo, phi = _sample_chunk(budget.rng_seed, chunk, n, u_max, budget.max_segments)
        rot, times = _evaluate_chunk(nseg, combo, phi, u_max)
        dist = np.linalg.norm((rot - r_net).reshape(n, 9), axis=1)
        for i in np.nonzero(dist <= tol)[0]:
            idx = done + int(i)
            sched = _schedule(nseg[i], combo[i], phi[i], u_max)
            hits.append((float(times[i]), idx, sched, rot[i]))
            if best is None or (times[i], idx) < (best[0], best[1]):
                best = (float(times[i]), idx, float(dist[i]), sched)
        # keep the nearest multi-piece samples as polishing seeds
        cand = np.nonzero(nseg >= 3)[0]
        if cand.size:
            order = cand[np.argsort(dist[cand], kind="stable")[:n_polish]]
            near.extend((float(dist[i]), done + int(i), _schedule(nseg[i], combo[i], phi[i], u_max))
                        for i in order)
            near.sort(key=lambda x: (x[0], x[1]))
            del near[n_polish:]
        done += n
        chunk += 1

    result = OracleResult(best is not None)
    if best is not None:
        result.time, result.sample_index, result.residual, result.schedule = best
        result.n_hits = len(hits)
        r_rk4 = integrate_state(np.eye(3), result.schedule, dt=1e-4, u_max=u_max)
        result.rk4_residual = float(np.linalg.norm(r_rk4 - r_net))
        if planner_fn is None:
            planner_fn = _planner_time
        hits.sort(key=lambda h: (h[0], h[1]))
        cert = math.inf
        for t, _, _, rot in hits[:n_certify]:
            try:
                cert = min(cert, t + planner_fn(rot.T @ r_net, u_max))
            except NoSolutionFound:
                continue
        result.certified_time = cert

    for _, _, sched in near:
        pol, res = _polish(sched, r_net)
        if res < 1e-9:
            t = sum(d for _, _, d in pol)
            if t < result.polished_time:
                result.polished_time, result.polished_schedule, result.polished_residual = t, pol, res
    return result


def _planner_time(r, u_max):
    from .planner import PlanQuery, plan
    return plan(PlanQuery(r, u_max)).optimal_time
