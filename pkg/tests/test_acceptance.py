"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``; the per-criterion summary
is printed at the end of the session.
"""

import io
import math
import time

import numpy as np

from sphere_crs.adjoint import (alpha_full_traverse, alpha_small_g, beta, g_from_lambda_c,
                                simulate_extremal)
from sphere_crs.catalog import concrete_candidates
from sphere_crs.ik import epsilon_of_mu, theta_of_mu
from sphere_crs.kinematics import (PathInstance, forward_kinematics, integrate_state,
                                   path_schedule, sample_path, write_samples_csv)
from sphere_crs.oracle import OracleBudget, random_search
from sphere_crs.planner import PlanQuery, plan
from sphere_crs.segments import SegmentKind
from sphere_crs.so3 import euler_zyx_to_rotation, nearest_rotation, segment_matrix, turn_radius

from conftest import (OPTIMAL_WORD, RF_EXAMPLE, TABLE_ROWS, random_in_domain, random_rotation,
                      random_start, split_word, start_g_above, start_g_below)


def report(record_criterion, n, failures, detail):
    ok = not failures
    record_criterion(n, ok, detail if ok else f"{detail}; {failures[:3]}")
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, failures


# 1 --------------------------------------------------------------------------

def test_criterion_1_table_reproduction(record_criterion):
    t0 = time.perf_counter()
    res = plan(PlanQuery(RF_EXAMPLE, 3.0))
    wall = time.perf_counter() - t0
    failures = []
    for word, angles, t in TABLE_ROWS:
        rows = [fp for fp in res.feasible if fp.word == word
                and max(abs(a - b) for a, b in zip(fp.angles, angles)) <= 5e-4]
        if not rows:
            failures.append(f"{word} missing")
        elif abs(rows[0].time - t) > 5e-4:
            failures.append(f"{word} time {rows[0].time:.5f}")
    if res.best.word != OPTIMAL_WORD:
        failures.append(f"optimum {res.best.word}")
    if wall >= 1.0:
        failures.append(f"wall {wall:.3f} s")
    report(record_criterion, 1, failures,
           f"5/5 rows within 5e-4, optimum {res.best.word} at {res.optimal_time:.4f} s, "
           f"wall {wall * 1e3:.0f} ms ({len(res.feasible)} feasible rows in total)")


# 2 --------------------------------------------------------------------------

def test_criterion_2_duration_identity(record_criterion):
    u = 3.0
    w = {"C": math.sqrt(1 + u * u), "T": u, "G": 1.0}
    failures = []
    worst = 0.0
    for word, angles, t in TABLE_ROWS:
        kinds = [SegmentKind(k) for k in split_word(word)]
        recomputed = sum(a / w[k.family] for a, k in zip(angles, kinds))
        via_path = PathInstance.from_word(kinds, angles, u).total_time
        worst = max(worst, abs(recomputed - t))
        if abs(recomputed - t) > 5e-4 or abs(via_path - recomputed) > 1e-12:
            failures.append((word, recomputed, t))
    report(record_criterion, 2, failures, f"max |sum(phi/omega) - printed| = {worst:.1e} s")


# 3 --------------------------------------------------------------------------

def test_criterion_3_matrix_identities(record_criterion, rng):
    n = 200
    worst = {}

    def note(name, value):
        worst[name] = max(worst.get(name, 0.0), value)

    failures = []
    for _ in range(n):
        u = float(rng.uniform(1.0, 10.0))
        r, b = turn_radius(u), beta(u)

        def m(kind, phi, r=r):
            return segment_matrix(kind, r, phi)

        # half-circle overshoot: C(pi + a) equals the opposite kind at pi - a
        a = float(rng.uniform(1e-6, math.pi - 1e-6))
        for p, q in (("L-", "R+"), ("R+", "L-"), ("L+", "R-"), ("R-", "L+")):
            note("half-circle", np.linalg.norm(m(p, math.pi + a) - m(q, math.pi - a)))
        # full cusp equivalence and its explicit block
        ll, rr = m("L+", b) @ m("L-", b), m("R+", b) @ m("R-", b)
        u2 = u * u
        s = 2 * math.sqrt(u2 - 1) / u2
        block = np.array([[(u2 - 2) / u2, s, 0], [s, -(u2 - 2) / u2, 0], [0, 0, -1]])
        note("cusp-equivalence", np.linalg.norm(ll - rr))
        note("cusp-block", np.linalg.norm(ll - block))
        note("cusp-equivalence-rev",
             np.linalg.norm(m("L-", b) @ m("L+", b) - m("R-", b) @ m("R+", b)))
        # full cusp pair commutes a great-circle arc across it
        sig = float(rng.uniform(0, 2 * math.pi))
        k = m("L-", b) @ m("L+", b)
        note("great-circle-swap", np.linalg.norm(k @ m("G+", sig) - m("G-", sig) @ k))
        # reflected tight-turn triple collapses onto a great-circle arc
        mu = float(rng.uniform(1e-3, b - 1e-3))
        eps, th = epsilon_of_mu(mu, r), theta_of_mu(mu, r)
        if not 0 < eps < 2 * mu:
            failures.append(("eps range", u, mu, eps))
        c, sm = math.cos(mu), math.sin(mu)
        den = math.hypot(c * (1 - 2 * r * r) + 2 * r * r, sm)
        delta = math.atan2(sm / den, (c * (1 - 2 * r * r) + 2 * r * r) / den)
        note("eps-2delta", abs(eps - 2 * delta))
        note("triple-to-G", np.linalg.norm(m("L+", mu) @ m("R+", eps) @ m("L+", mu)
                                            - m("G+", th % (2 * math.pi))))
        # turn-in-place swap at the unit bound
        r1 = 1 / math.sqrt(2)
        rho = float(rng.uniform(0, 4 * math.pi))
        lhs = segment_matrix("L0", r1, rho) @ segment_matrix("L-", r1, math.pi)
        rhs = segment_matrix("R+", r1, math.pi) @ segment_matrix("G-", r1, rho)
        note("turn-in-place-swap", np.linalg.norm(lhs - rhs))
    for name, v in worst.items():
        if v > 1e-10:
            failures.append((name, v))
    r3 = turn_radius(3.0)
    caps = [(math.pi / 3, 0.61, 0.35), (2 * math.pi / 3, 1.14, 0.42)]
    for mu, e_ref, t_ref in caps:
        e, t = epsilon_of_mu(mu, r3) / math.pi, theta_of_mu(mu, r3) / math.pi
        if abs(e - e_ref) > 0.01 or abs(t - t_ref) > 0.01:
            failures.append(("caption", mu, e, t))
    report(record_criterion, 3, failures,
           f"{n} draws per identity, worst residual {max(worst.values()):.1e}; captions "
           f"eps/pi={epsilon_of_mu(math.pi / 3, r3) / math.pi:.3f},"
           f"{epsilon_of_mu(2 * math.pi / 3, r3) / math.pi:.3f} "
           f"theta/pi={theta_of_mu(math.pi / 3, r3) / math.pi:.3f},"
           f"{theta_of_mu(2 * math.pi / 3, r3) / math.pi:.3f}")


# 4 --------------------------------------------------------------------------

def test_criterion_4_pmp_certificates(record_criterion, rng):
    failures = []
    drift_rate, ham = 0.0, 0.0
    regimes = ["below"] * 7 + ["one"] * 6 + ["above"] * 7
    for i, regime in enumerate(regimes):
        u = (1.5, 2.0, 3.0, 6.0)[i % 4] if regime == "below" else (1.0, 1.5, 3.0, 6.0)[i % 4]
        t_end = 10.0
        tr = simulate_extremal(random_start(rng, regime, u), u, t_end, dt=1e-3)
        drift_rate = max(drift_rate, float(np.max(np.abs(tr.casimir - tr.casimir[0]))) / t_end)
        ham = max(ham, float(np.max(np.abs(tr.hamiltonian))))
    if drift_rate >= 1e-8 or ham >= 1e-8:
        failures.append(("certificates", drift_rate, ham))
    worst_a = 0.0
    for g in (1.0, 1.2, 2.0, 5.0):
        s0 = (1 / 3, math.sqrt(8 / 9), 0.0) if g == 1.0 else start_g_above(g)
        tr = simulate_extremal(s0, 3.0, 4.0, dt=1e-3)
        # at g = 1 the start sits on the A axis, so the first arc is already complete
        err = abs(tr.segments[0][1] - alpha_full_traverse(g, 3.0))
        worst_a = max(worst_a, err)
        if err > 1e-6:
            failures.append(("full traverse", g, tr.segments[0][1]))
    for lam, u in ((0.5, 3.0), (0.6, 1.5)):
        tr = simulate_extremal(start_g_below(g_from_lambda_c(lam, u), u), u, 12.0, dt=1e-3)
        err = abs(tr.segments[0][1] - alpha_small_g(lam, u))
        worst_a = max(worst_a, err)
        if err > 1e-6:
            failures.append(("small g", lam, u, tr.segments[0][1]))
    report(record_criterion, 4, failures,
           f"20 extremals: Casimir drift {drift_rate:.1e}/unit time, |H| {ham:.1e}; "
           f"traverse angles within {worst_a:.1e}")


# 5 --------------------------------------------------------------------------

def test_criterion_5_round_trip_bound(record_criterion, rng):
    failures = []
    slack = -math.inf
    by_u = {u: concrete_candidates(u) for u in (1.0, 1.5, 3.0, 6.0)}
    for i in range(1000):
        u = (1.0, 1.5, 3.0, 6.0)[i % 4]
        cands = by_u[u]
        c = cands[int(rng.integers(len(cands)))]
        angles = random_in_domain(c, rng)
        path = PathInstance.from_word(c.kinds, angles, u)
        t_built = path.total_time
        t_plan = plan(PlanQuery(forward_kinematics(np.eye(3), path), u)).optimal_time
        slack = max(slack, t_plan - t_built)
        if t_plan > t_built + 1e-6:
            failures.append((c.label, u, angles, t_built, t_plan))
    report(record_criterion, 5, failures,
           f"1000 round trips, max(plan - constructed) = {slack:.1e} s")


# 6 --------------------------------------------------------------------------

def test_criterion_6_oracle_falsification(record_criterion, rng):
    failures = []
    hits = certified = polished = 0
    margin = math.inf
    for i in range(50):
        u = (1.0, 1.5, 3.0)[i % 3]
        target = random_rotation(rng)
        opt = plan(PlanQuery(target, u)).optimal_time
        res = random_search(target, u, OracleBudget(100_000, rng_seed=i), tol=5e-2,
                            planner_fn=lambda r, uu: plan(PlanQuery(r, uu)).optimal_time)
        hits += res.found
        certified += math.isfinite(res.certified_time)
        polished += math.isfinite(res.polished_time)
        for name, t in (("raw", res.time), ("certified", res.certified_time),
                        ("polished", res.polished_time)):
            if math.isfinite(t):
                margin = min(margin, t - opt)
                if t < opt - 1e-3:
                    failures.append((i, u, name, t, opt))
    report(record_criterion, 6, failures,
           f"50 targets x 1e5 samples: {hits} with loose hits, {certified} certified and "
           f"{polished} polished exact bounds; smallest (oracle - planner) = {margin:.1e} s")


# 7 --------------------------------------------------------------------------

def test_criterion_7_so3_hygiene(record_criterion, rng):
    emitted = []
    for i in range(30):
        u = (1.0, 1.5, 3.0)[i % 3]
        res = plan(PlanQuery(random_rotation(rng), u, r0=random_rotation(rng)))
        emitted.append(res.r_net)
        for fp in res.feasible:
            path = fp.path()
            emitted.append(forward_kinematics(np.eye(3), path))
            emitted.extend(m for _, m in sample_path(np.eye(3), path, 8))
            emitted.append(integrate_state(np.eye(3), path_schedule(path), dt=1e-3, u_max=u))
    for _ in range(200):
        emitted.append(euler_zyx_to_rotation(*rng.uniform(-3, 3, 3)))
        emitted.append(nearest_rotation(random_rotation(rng) + rng.normal(0, 1e-7, (3, 3))))
    buf = io.StringIO()
    p = PathInstance.from_word(split_word(TABLE_ROWS[4][0]), TABLE_ROWS[4][1], 3.0)
    write_samples_csv(sample_path(np.eye(3), p, 100), buf)
    for line in buf.getvalue().splitlines()[1:]:
        emitted.append(np.array([float(x) for x in line.split(",")[1:]]).reshape(3, 3).T)
    worst = max(max(np.linalg.norm(m.T @ m - np.eye(3)), abs(np.linalg.det(m) - 1))
                for m in emitted)
    failures = [] if worst <= 1e-9 else [("worst", worst)]
    report(record_criterion, 7, failures,
           f"{len(emitted)} emitted rotations, worst orthonormality/det error {worst:.1e}")
