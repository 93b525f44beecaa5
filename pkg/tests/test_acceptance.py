"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete. Each test computes its verdict first, prints the
line, then asserts, so a FAIL line always appears before the traceback.
"""
import math
import time

import numpy as np
import pytest

from helpers import (
    eigenhull_bound_pair,
    lagrange_scalar,
    random_cluster_spec,
    random_nodeset,
    random_polynomial,
)
from rsbl.config import ExperimentConfig
from rsbl.experiments import _matvecs_for_cell, fit_loglog
from rsbl.linalg import RngStream, gaussian_matrix
from rsbl.matpoly import (
    NodeSet,
    block_vandermonde,
    chi_quantities,
    eval_lambda,
    eval_matrix,
    fundamental_via_chain,
    fundamental_via_solve,
    solvent_chain,
)
from rsbl.robustness import (
    ClusterSpec,
    ExperimentFamily,
    chebyshev_accel_check,
    conjecture_experiment,
    sandwich_d2,
    structural_bound_trial,
    tan_angle_krylov,
)

TABLE1_REFERENCE = {
    1.0: {1: 75, 2: 86, 4: 100, 8: 136, 16: 208, 32: 352},
    0.1: {1: 115, 2: 126, 4: 140, 8: 176, 16: 240, 32: 352},
    0.01: {1: 156, 2: 166, 4: 176, 8: 208, 16: 256, 32: 384},
    0.001: {1: 196, 2: 204, 4: 212, 8: 240, 16: 288, 32: 384},
}


def report(criterion: int, ok: bool, detail: str):
    print(f"[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="module")
def table1_medians():
    config = ExperimentConfig(experiment="table1", trials=11, seed=8064113)
    start = time.perf_counter()
    medians = {}
    for beta, row in TABLE1_REFERENCE.items():
        for b in row:
            counts = sorted(_matvecs_for_cell(config, beta, b))
            medians[(beta, b)] = counts[len(counts) // 2]
    return medians, time.perf_counter() - start


def test_criterion_01_table1_reproduction(table1_medians):
    medians, elapsed = table1_medians
    misses = []
    for beta, row in TABLE1_REFERENCE.items():
        for b, ref in row.items():
            med = medians[(beta, b)]
            if abs(med - ref) > b:
                misses.append(f"beta={beta} b={b}: median {med} vs reference {ref}")
    ok = not misses and elapsed <= 300.0
    report(1, ok, f"24-cell grid, 11 seeds, {elapsed:.0f}s; misses: {misses or 'none'}")
    assert elapsed <= 300.0
    assert not misses, misses


def test_criterion_02_overhead_trend(table1_medians):
    medians, _ = table1_medians
    overheads = []
    for beta in (1.0, 0.1, 0.01, 0.001):
        base = medians[(beta, 1)]
        overheads.append((medians[(beta, 2)] - base) / base)
    ok = all(a > b for a, b in zip(overheads, overheads[1:]))
    report(2, ok, "b=2 overhead by beta: " + ", ".join(f"{o:.1%}" for o in overheads))
    assert ok, overheads


def test_criterion_03_vandermonde_counterexample():
    van = block_vandermonde([np.diag([1.0, 2.0]), np.array([[2.0, 1.0], [-1.0, 1.0]])])
    residual = float(np.linalg.norm(van @ np.array([1.0, -2.0, -1.0, 1.0])))
    ok = residual <= 1e-14
    report(3, ok, f"annihilation residual {residual:.2e}")
    assert ok


@pytest.fixture(scope="module")
def oracle_instances():
    rng = np.random.default_rng(20240601)
    instances = []
    for _ in range(200):
        b = int(rng.integers(1, 4))
        d = int(rng.integers(1, 5))
        nodes = random_nodeset(rng, b, d, separation=0.1)
        cond = float(np.linalg.cond(block_vandermonde(nodes)))
        instances.append((nodes, cond, rng.uniform(-0.5, 0.5 * d + 0.5, 20)))
    return instances


def test_criterion_04_fundamental_oracle_equivalence(oracle_instances):
    start = time.perf_counter()
    worst = 0.0
    for nodes, cond, lams in oracle_instances:
        d, b = nodes.d, nodes.b
        for k in range(d):
            chain = solvent_chain(nodes, k)
            solved = fundamental_via_solve(nodes, k)
            for lam in lams:
                ref = eval_lambda(solved, float(lam))
                got = fundamental_via_chain(chain, float(lam))
                rel = np.linalg.norm(got - ref, 2) / max(1.0, np.linalg.norm(ref, 2))
                worst = max(worst, rel / (1e-8 * cond))
            for j in range(d):
                target = np.eye(b) if j == k else np.zeros((b, b))
                for f_elem in (
                    eval_matrix(solved, nodes.bs[j]),
                    _chain_at_matrix(chain, nodes.bs[j], d, b),
                ):
                    err = np.linalg.norm(f_elem - target, 2)
                    worst = max(worst, err / (1e-8 * cond))
    elapsed = time.perf_counter() - start
    ok = worst <= 1.0 and elapsed <= 30.0
    report(4, ok, f"200 instances, worst tolerance fraction {worst:.3f}, {elapsed:.1f}s")
    assert elapsed <= 30.0
    assert worst <= 1.0


def _chain_at_matrix(chain, x, d, b):
    # expand the chain product into lambda-coefficients, then evaluate the
    # right-coefficient polynomial at the matrix argument
    coeffs = _chain_coefficients(chain, d, b)
    out = np.zeros((b, b))
    power = np.eye(b)
    for i, c in enumerate(coeffs):
        if i > 0:
            power = power @ x
        out = out + power @ c
    return out


def _chain_coefficients(chain, d, b):
    # expand prod_i (lam I - Bhat_i) * S^-1 into lambda-coefficients
    coeffs = [np.eye(b)]
    for i in range(d - 1, 0, -1):
        new = [np.zeros((b, b)) for _ in range(len(coeffs) + 1)]
        for deg, c in enumerate(coeffs):
            new[deg + 1] += c  # multiply by lam
            new[deg] -= c @ chain.b_hats[i]
        coeffs = new
    return [c @ chain.s_head_inv for c in coeffs]


def test_criterion_05_interpolation_identity(oracle_instances):
    start = time.perf_counter()
    rng = np.random.default_rng(20240602)
    worst = 0.0
    for nodes, cond, lams in oracle_instances:
        d, b = nodes.d, nodes.b
        if d < 2:
            continue
        phi = random_polynomial(rng, b, d - 1)
        chains = [solvent_chain(nodes, k) for k in range(d)]
        values = [eval_matrix(phi, bmat) for bmat in nodes.bs]
        for lam in lams:
            expect = eval_lambda(phi, float(lam))
            got = np.zeros((b, b))
            for k in range(d):
                got += fundamental_via_chain(chains[k], float(lam)) @ values[k]
            rel = np.linalg.norm(got - expect, 2) / max(1.0, np.linalg.norm(expect, 2))
            worst = max(worst, rel / (1e-8 * cond))
    elapsed = time.perf_counter() - start
    ok = worst <= 1.0 and elapsed <= 30.0
    report(5, ok, f"worst tolerance fraction {worst:.3f}, {elapsed:.1f}s")
    assert elapsed <= 30.0
    assert worst <= 1.0


def test_criterion_06_structural_bound():
    start = time.perf_counter()
    rng = np.random.default_rng(20240603)
    total, held = 0, 0
    route_misses = []
    for b in (1, 2, 3):
        for d in (2, 3):
            for trial in range(20):
                spec = random_cluster_spec(rng, b, d, m=24)
                report_row = structural_bound_trial(spec, seed=1000 * b + 100 * d + trial)
                total += 1
                held += int(report_row.bound_holds)
                t_k, t_v = report_row.tan_angle_krylov, report_row.tan_angle_vandermonde
                if math.isfinite(t_k) and math.isfinite(t_v) and report_row.cond_k < 1e8:
                    if abs(t_k - t_v) > 1e-6 * t_v:
                        route_misses.append((b, d, trial, t_k, t_v))
    elapsed = time.perf_counter() - start
    ok = held == total and not route_misses and elapsed <= 120.0
    report(
        6,
        ok,
        f"bound held {held}/{total}, route mismatches {len(route_misses)}, {elapsed:.0f}s",
    )
    assert elapsed <= 120.0
    assert held == total
    assert not route_misses, route_misses[:3]


def test_criterion_07_conjecture_slopes():
    start = time.perf_counter()
    trials = 200
    failures = []
    lines = []
    for variant in ("exterior", "interior"):
        beta_family = ExperimentFamily(sweep="beta", variant=variant)
        for d in (2, 3, 4, 5):
            summaries = conjecture_experiment(beta_family, trials, 8064113, d_values=(d,))
            slope, _, _ = fit_loglog(
                [s.sweep_value for s in summaries], [s.median for s in summaries]
            )
            lines.append(f"{variant}/beta d={d}: slope {slope:+.3f}")
            if abs(slope) > 0.15:
                failures.append(lines[-1])
        alpha_family = ExperimentFamily(sweep="alpha", variant=variant)
        for d in (2, 3, 4):
            summaries = conjecture_experiment(alpha_family, trials, 8064113, d_values=(d,))
            slope, _, _ = fit_loglog(
                [s.relgap for s in summaries], [s.median for s in summaries]
            )
            lines.append(f"{variant}/alpha d={d}: slope {slope:+.3f} (target {-(d-1)})")
            if abs(slope + (d - 1)) > 0.35:
                failures.append(lines[-1])
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 1200.0
    report(7, ok, f"{'; '.join(lines)}; {elapsed:.0f}s")
    assert elapsed <= 1200.0
    assert not failures, failures


def test_criterion_08_norm_bound_and_sandwich():
    start = time.perf_counter()
    rng = np.random.default_rng(20240604)
    hull_violations = 0
    for _ in range(500):
        b = int(rng.integers(1, 5))
        lam0 = np.sort(rng.uniform(-1.0, 1.0, b))
        omega0 = rng.standard_normal((b, b))
        p = random_polynomial(rng, b, int(rng.integers(1, 5)))
        lhs, rhs = eigenhull_bound_pair(p, omega0, lam0)
        hull_violations += int(lhs > rhs * (1.0 + 1e-10))
    sandwich_fails = 0
    for trial in range(1000):
        b = trial % 4 + 1
        b1 = rng.standard_normal((b, b))
        b2 = rng.standard_normal((b, b))
        _, _, _, holds = sandwich_d2(b1, b2)
        sandwich_fails += int(not holds)
    _, middle, _, anchor_holds = sandwich_d2(np.eye(3), -np.eye(3))
    anchor_ok = anchor_holds and abs(middle - 0.5) <= 1e-12
    elapsed = time.perf_counter() - start
    ok = hull_violations == 0 and sandwich_fails == 0 and anchor_ok and elapsed <= 30.0
    report(
        8,
        ok,
        f"hull bound 500/500, sandwich {1000 - sandwich_fails}/1000, "
        f"anchor middle {middle:.6f}, {elapsed:.1f}s",
    )
    assert elapsed <= 30.0
    assert hull_violations == 0 and sandwich_fails == 0 and anchor_ok


def test_criterion_09_scalar_reduction():
    start = time.perf_counter()
    rng = np.random.default_rng(20240605)
    worst_lagrange = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 6))
        vals = np.sort(rng.uniform(0.0, 1.0, d))
        while np.min(np.diff(vals)) < 0.05:
            vals = np.sort(rng.uniform(0.0, 1.0, d))
        nodes = NodeSet(
            tuple(np.array([v]) for v in vals),
            tuple(rng.standard_normal((1, 1)) for _ in range(d)),
        )
        chains = [solvent_chain(nodes, k) for k in range(d)]
        chi_mono, chi_coef = chi_quantities(nodes, chains, (float(vals[0]), float(vals[-1])))
        assert chi_mono == 1.0
        assert chi_coef <= 1.0 + 1e-12
        for k in range(d):
            solved = fundamental_via_solve(nodes, k)
            for lam in rng.uniform(-0.5, 1.5, 8):
                ref = lagrange_scalar(vals, k, float(lam))
                for got in (
                    fundamental_via_chain(chains[k], float(lam))[0, 0],
                    eval_lambda(solved, float(lam))[0, 0],
                ):
                    worst_lagrange = max(
                        worst_lagrange, abs(got - ref) / max(1.0, abs(ref))
                    )
    elapsed = time.perf_counter() - start
    ok = worst_lagrange <= 1e-12 and elapsed <= 5.0
    report(9, ok, f"chi_mono = 1 exactly, worst Lagrange gap {worst_lagrange:.2e}, {elapsed:.1f}s")
    assert elapsed <= 5.0
    assert worst_lagrange <= 1e-12


def test_criterion_10_chebyshev_acceleration():
    start = time.perf_counter()
    rng = np.random.default_rng(20240606)
    fails = []
    for trial in range(100):
        b = int(rng.integers(1, 4))
        d = int(rng.integers(2, 4))
        spec = random_cluster_spec(rng, b, d, m=int(rng.integers(d + 6, 17)))
        omega = gaussian_matrix(spec.n, b, RngStream(555000 + trial))
        measured, reference, holds = chebyshev_accel_check(spec, omega, d + 5)
        if not holds:
            fails.append((trial, measured, reference))
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed <= 60.0
    report(10, ok, f"held on {100 - len(fails)}/100 specs, {elapsed:.1f}s")
    assert elapsed <= 60.0
    assert not fails, fails[:3]


def test_criterion_11_multiplicity_obstruction():
    start = time.perf_counter()
    rng = np.random.default_rng(20240607)
    finite_hits = 0
    for trial in range(50):
        b = int(rng.integers(1, 4))
        d = int(rng.integers(2, 4))
        repeated = float(rng.uniform(1.0, 2.0))
        # multiplicity b+1 spread across the first two cluster blocks
        blocks = [np.full(b, repeated)]
        second = np.sort(rng.uniform(2.1, 2.4, b))
        second[0] = repeated
        blocks.append(np.sort(second))
        for k in range(2, d):
            blocks.append(np.sort(rng.uniform(2.5 + 0.4 * k, 2.8 + 0.4 * k, b)))
        n = 12 * b
        spec = ClusterSpec(
            n=n,
            b=b,
            d=d,
            lambda_blocks=tuple(blocks),
            lambda_perp=rng.uniform(-1.0, 0.0, n - b * d),
            cluster_min=0.9,
            cluster_max=2.8 + 0.4 * d,
            allow_zero_relgap=True,
        )
        omega = gaussian_matrix(n, b, RngStream(777000 + trial))
        for steps in (d, d + 1, d + 2):
            if not math.isinf(tan_angle_krylov(spec, omega, steps)):
                finite_hits += 1
    elapsed = time.perf_counter() - start
    ok = finite_hits == 0 and elapsed <= 10.0
    report(11, ok, f"infinity marker on all 50 trials x 3 depths, {elapsed:.1f}s")
    assert elapsed <= 10.0
    assert finite_hits == 0
