"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a ``PASS``/``FAIL`` line (plus ``INFO`` lines where a
related, corrected quantity is worth showing next to a failing criterion).
"""

import itertools
import math
import time

import numpy as np
import pytest

from ising_qfi import exact_oracle as xo
from ising_qfi.asymptotics import f_ghz, g_optimal, kink_detect
from ising_qfi.exact_oracle import ModelKind
from ising_qfi.fermion_core import ModelParams, Target, generator_blocks, ghz_leading_term_b, max_variance
from ising_qfi.product_opt import evolved_generator, fit_power_law, optimize
from ising_qfi.verification import COUPLINGS, TIMES, generator_gap_suite, ghz_suite, qfi_two_path_suite

# slopes of G at g = 1 with h = 1e-4 differ by 4.1715 in the quadrature
# oracle run before the build; half of that, rounded down
KINK_THRESHOLD = 2.0

SCAN_N = range(2, 10)
SCAN_RESTARTS = 64


def _line(tag, name, detail, seconds, limit):
    return f"{tag}  {name:<34} {detail}  [{seconds:.1f}s / limit {limit:g}s]"


def _check(report, name, ok, detail, seconds, limit):
    ok = ok and seconds < limit
    report(_line("PASS" if ok else "FAIL", name, detail, seconds, limit))
    assert ok, detail


def test_c1_analytic_prefactor_points(report):
    start = time.perf_counter()
    errs = (abs(g_optimal(0.0) - 1.0), abs(g_optimal(1.0) - 4 / math.pi**2), abs(f_ghz(1.0) - 0.25))
    ok = errs[0] <= 1e-10 and errs[1] <= 1e-8 and errs[2] <= 1e-8
    detail = "errs G(0)={:.1e} G(1)={:.1e} F(1)={:.1e}".format(*errs)
    _check(report, "1 analytic prefactor points", ok, detail, time.perf_counter() - start, 1)


def test_c2_oracle_formula_equality(report):
    start = time.perf_counter()
    res = generator_gap_suite(8)
    detail = f"max rel dev={res.max_dev:.2e} (tol 1e-8, {res.cases} cases)"
    _check(report, "2 generator gap vs closed form", res.passed, detail, time.perf_counter() - start, 120)


def test_c3_ghz_equality(report):
    start = time.perf_counter()
    worst_var = worst_mean = 0.0
    cases = 0
    for N in (2, 4, 6, 8):
        psi = xo.ghz_state(N)
        for (J, B), t in itertools.product(COUPLINGS, TIMES):
            p = ModelParams(N, J, B, t)
            gen = xo.integrated_generator(p, Target.B, ModelKind.FERMION_CYCLIC)
            exact = xo.variance_of(psi, gen).variance
            closed = ghz_leading_term_b(p)
            phi = xo.evolve(gen, psi)
            mean = np.vdot(phi, gen.traceless() @ phi).real
            scale = np.sum(np.abs(generator_blocks(p, Target.B)[0]))
            worst_var = max(worst_var, abs(exact - closed) / closed)
            worst_mean = max(worst_mean, abs(mean) / scale)
            cases += 1
    seconds = time.perf_counter() - start

    t0 = time.perf_counter()
    exact_form = ghz_suite(8)
    report(_line("INFO", "3' GHZ vs (sum A)^2 + 2 sum |B|^2", f"max rel dev={exact_form.max_dev:.2e} "
                 f"({'within' if exact_form.passed else 'outside'} 1e-8)", time.perf_counter() - t0, 60))

    ok = worst_var <= 1e-8 and worst_mean <= 1e-8
    detail = f"var rel dev={worst_var:.2e}, mean dev={worst_mean:.2e} (tol 1e-8, {cases} cases)"
    _check(report, "3 GHZ variance equals (sum A)^2", ok, detail, seconds, 60)


def test_c4_qfi_two_path(report):
    start = time.perf_counter()
    res = qfi_two_path_suite(6)
    detail = f"max rel dev={res.max_dev:.2e} (tol 1e-4, {res.cases} states)"
    _check(report, "4 QFI finite difference vs 4 Var", res.passed, detail, time.perf_counter() - start, 120)


def test_c5_asymptotic_convergence(report):
    start = time.perf_counter()
    worst = 0.0
    for ratio, which in itertools.product((0.0, 0.5, 1.0, 2.0), Target):
        J, B = (1.0, ratio) if which is Target.J else (ratio, 1.0)
        p = ModelParams(512, J, B, 1e4)
        g = g_optimal(ratio)
        normalised = max_variance(p, which).variance / (p.N * p.t) ** 2
        worst = max(worst, abs(normalised - g) / g)
    detail = f"max rel dev={worst:.2e} (tol 1e-2)"
    _check(report, "5 asymptotic convergence N=512", worst <= 0.01, detail, time.perf_counter() - start, 10)


@pytest.fixture(scope="module")
def product_scans():
    start = time.perf_counter()
    scans = {}
    for which in Target:
        scans[which] = {
            N: optimize(ModelParams(N, 1.0, 1.0, 20.0), which, ModelKind.SPIN_OPEN, restarts=SCAN_RESTARTS, seed=0)
            for N in SCAN_N
        }
    return scans, time.perf_counter() - start


@pytest.mark.slow
def test_c6_product_scaling(report, product_scans):
    scans, seconds = product_scans
    t2 = 20.0**2
    fits = {w: fit_power_law([(N, r.best_variance / t2) for N, r in scans[w].items()]) for w in Target}
    ok_j = 0.76 <= fits[Target.J].b <= 1.30
    ok_b = 0.83 <= fits[Target.B].b <= 1.00

    ratios = {}
    same_model = {}
    for w in Target:
        ratios[w] = [max_variance(ModelParams(N, 1.0, 1.0, 20.0), w).variance / scans[w][N].best_variance for N in SCAN_N]
        # exact optimum of the same open chain: half the spread of U^+ O U, squared
        same_model[w] = []
        for N in SCAN_N:
            ev = np.linalg.eigvalsh(evolved_generator(ModelParams(N, 1.0, 1.0, 20.0), w, ModelKind.SPIN_OPEN))
            same_model[w].append(((ev[-1] - ev[0]) / 2) ** 2 / scans[w][N].best_variance)
    increasing = all(np.all(np.diff(ratios[w]) > 0) for w in Target)
    for w in Target:
        report(f"INFO  6  {w.value}: product best/t^2 = "
               + " ".join(f"{scans[w][N].best_variance / t2:.4f}" for N in SCAN_N))
        report(f"INFO  6  {w.value}: fermion-cyclic max_variance / product best = "
               + " ".join(f"{r:.3f}" for r in ratios[w]))
        report(f"INFO  6' {w.value}: open-chain exact optimum / product best = "
               + " ".join(f"{r:.3f}" for r in same_model[w])
               + ("  (strictly increasing)" if np.all(np.diff(same_model[w]) > 0) else "  (not monotone)"))
    fj, fb = fits[Target.J], fits[Target.B]
    detail = (f"b_J={fj.b:.4f}+-{fj.stderr_b:.3f} in [0.76,1.30]: {ok_j}; "
              f"b_B={fb.b:.4f}+-{fb.stderr_b:.3f} in [0.83,1.00]: {ok_b}; ratio strictly increasing: {increasing}")
    _check(report, "6 product-state scaling N=2..9", ok_j and ok_b and increasing, detail, seconds, 1800)


def test_c7_multiplicative_controls(report):
    start = time.perf_counter()
    worst = 0.0
    t = 2.0
    for N in range(2, 7):
        p = ModelParams(N, 0.0, 1.0, t)
        run = optimize(p, Target.B, restarts=8, seed=0)
        worst = max(worst, abs(run.best_variance - N * t * t) / (N * t * t))
        for model in ModelKind:
            gen = xo.integrated_generator(p, Target.B, model)
            qfi = 4 * xo.variance_of(xo.ghz_state(N), gen).variance
            fd = xo.qfi_finite_difference(p, Target.B, model, xo.ghz_state(N), 1e-6)
            ref = 4 * N * N * t * t
            worst = max(worst, abs(qfi - ref) / ref, abs(fd - ref) / ref)
    detail = f"max rel dev={worst:.2e} (tol 1e-4)"
    _check(report, "7 multiplicative-limit controls", worst <= 1e-4, detail, time.perf_counter() - start, 60)


def test_c8_kink(report):
    start = time.perf_counter()
    h = 1e-4
    l1, r1 = kink_detect("G", 1.0, h)
    l5, r5 = kink_detect("G", 0.5, h)
    ok = abs(r1 - l1) > KINK_THRESHOLD and abs(r5 - l5) <= 10 * h
    detail = f"|jump| at 1 = {abs(r1 - l1):.4f} > {KINK_THRESHOLD}; at 0.5 = {abs(r5 - l5):.2e} <= {10 * h:g}"
    _check(report, "8 kink of G at g=1", ok, detail, time.perf_counter() - start, 5)
