"""Cross-checks between the momentum-space closed forms and the matrix oracle.

Each suite returns a :class:`SuiteResult` with the largest deviation seen and
the tolerance it was held to.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import exact_oracle as xo
from .fermion_core import (
    ModelParams,
    Target,
    default_eps_omega,
    eigenvalue_identity,
    generator_blocks,
    generator_spectrum,
    ghz_variance_b,
    mode_arrays,
)

__all__ = ["SuiteResult", "LEVELS", "SUITES", "run_all"]

COUPLINGS = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.5), (0.7, 1.3)]
TIMES = [0.7, 3.1, 20.0]
LEVELS = {"fast": 6, "full": 8}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_dev: float
    tol: float
    cases: int
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name:<18} max_dev={self.max_dev:.3e}  tol={self.tol:.1e}  "
            f"cases={self.cases}  ({self.seconds:.1f}s)"
        )


def _sizes(n_top: int, even_only: bool = False) -> list[int]:
    return [n for n in range(2, n_top + 1) if not (even_only and n % 2)]


def car_suite(n_top: int, **_) -> SuiteResult:
    tol = 1e-12
    worst = 0.0
    cases = 0
    for N in _sizes(min(n_top, 6)):
        modes = [xo.jw_mode_matrix(N, j) for j in range(1, N + 1)]
        eye = np.eye(2**N)
        for (j, (aj, adj)), (k, (ak, adk)) in itertools.product(enumerate(modes), repeat=2):
            mixed = (aj @ adk + adk @ aj).toarray() - (eye if j == k else 0.0)
            same = (aj @ ak + ak @ aj).toarray()
            worst = max(worst, np.max(np.abs(mixed)), np.max(np.abs(same)))
            cases += 1
    return SuiteResult("car", worst <= tol, worst, tol, cases)


def spectrum_suite(n_top: int, **_) -> SuiteResult:
    """Fermion-cyclic spectrum equals ``const + sum_k n_k 2 omega_k``."""
    tol = 1e-8
    worst = 0.0
    cases = 0
    for N in _sizes(n_top):
        for J, B in COUPLINGS:
            p = ModelParams(N, J, B, 0.0)
            ev = np.linalg.eigvalsh(xo.build_hamiltonian(p, xo.ModelKind.FERMION_CYCLIC))
            levels = 2.0 * mode_arrays(p)["omega"]
            occ = np.array(list(itertools.product((0, 1), repeat=N)), dtype=float)
            free = np.sort(occ @ levels)
            dev = np.max(np.abs((ev - ev[0]) - (free - free[0])))
            worst = max(worst, dev / max(1.0, free[-1]))
            cases += 1
    return SuiteResult("spectrum", worst <= tol, worst, tol, cases)


def generator_gap_suite(n_top: int, eps_omega: float | None = None, **_) -> SuiteResult:
    """Half the spectral gap of the exact ``O_i`` equals ``sum_k s_k``."""
    tol = 1e-8
    worst = 0.0
    cases = 0
    for N in _sizes(n_top, even_only=True):
        for (J, B), t, which in itertools.product(COUPLINGS, TIMES, Target):
            p = ModelParams(N, J, B, t)
            total = generator_spectrum(p, which, eps_omega).total
            half_gap = xo.integrated_generator(p, which, xo.ModelKind.FERMION_CYCLIC).spectral_gap() / 2.0
            worst = max(worst, abs(half_gap - total) / total)
            cases += 1
    return SuiteResult("generator-gap", worst <= tol, worst, tol, cases)


def ghz_suite(n_top: int, **_) -> SuiteResult:
    """GHZ variance of ``O_B`` and its vanishing mean, oracle vs closed form."""
    tol = 1e-8
    worst = 0.0
    cases = 0
    for N in _sizes(n_top, even_only=True):
        psi = xo.ghz_state(N)
        for (J, B), t in itertools.product(COUPLINGS, TIMES):
            p = ModelParams(N, J, B, t)
            gen = xo.integrated_generator(p, Target.B, xo.ModelKind.FERMION_CYCLIC)
            closed = ghz_variance_b(p).variance
            exact = xo.variance_of(psi, gen).variance
            diag, _ = generator_blocks(p, Target.B)
            phi = xo.evolve(gen, psi)
            mean = np.vdot(phi, gen.traceless() @ phi).real
            worst = max(worst, abs(exact - closed) / closed, abs(mean) / np.sum(np.abs(diag)))
            cases += 1
    return SuiteResult("ghz", worst <= tol, worst, tol, cases)


def qfi_two_path_suite(n_top: int, seed: int = 7, **_) -> SuiteResult:
    """Finite-difference QFI against ``4 Var(O_i)`` on random product states."""
    tol = 1e-4
    worst = 0.0
    cases = 0
    rng = np.random.default_rng(seed)
    configs = [(1.0, 0.7, 2.0), (0.7, 1.3, 0.7), (1.0, 1.0, 3.1)]
    for N in _sizes(min(n_top, 6)):
        for kind, which, (J, B, t) in itertools.product(xo.ModelKind, Target, configs):
            p = ModelParams(N, J, B, t)
            gen = xo.integrated_generator(p, which, kind)
            for _ in range(10 if n_top >= 6 else 3):
                psi = xo.product_state(rng.uniform(0, np.pi, N), rng.uniform(0, 2 * np.pi, N))
                ref = 4.0 * xo.variance_of(psi, gen).variance
                fd = xo.qfi_finite_difference(p, which, kind, psi, 1e-6)
                worst = max(worst, abs(fd - ref) / max(ref, 1e-12))
                cases += 1
    return SuiteResult("qfi-two-path", worst <= tol, worst, tol, cases)


def block_identity_suite(n_top: int, eps_omega: float | None = None, **_) -> SuiteResult:
    """Block coefficients against the independent ``diag^2 + |offdiag|^2`` formula."""
    worst = 0.0
    cases = 0
    for N in _sizes(max(n_top, 8)):
        for (J, B), t, which in itertools.product(COUPLINGS, TIMES, Target):
            p = ModelParams(N, J, B, t)
            diag, off = generator_blocks(p, which, eps_omega)
            omega = mode_arrays(p)["omega"]
            for k in range(N):
                if omega[k] < default_eps_omega(p):
                    continue
                dev = abs(diag[k] ** 2 + abs(off[k]) ** 2 - eigenvalue_identity(p, k, which))
                worst = max(worst, dev / max(1.0, t * t))
                cases += 1
    return SuiteResult("block-identity", worst <= 1e-12, worst, 1e-12, cases)


def degenerate_limit_suite(n_top: int, eps_omega: float | None = None, **_) -> SuiteResult:
    """Approach ``B -> -J`` and compare every block with the 2x2 reference."""
    tol = 1e-9
    worst = 0.0
    cases = 0
    J = 1.0
    for N, j, t, which in itertools.product((4, 5, 8, 16), range(2, 9), (0.7, 3.1), Target):
        p = ModelParams(N, J, -J + 10.0**-j, t)
        diag, off = generator_blocks(p, which, eps_omega)
        for k in range(N):
            ref = xo.block_integral_oracle(p, k, which)
            dev = max(abs(diag[k] - ref[0, 0].real), abs(abs(off[k]) - abs(ref[0, 1])))
            worst = max(worst, dev / max(1.0, t))
            cases += 1
    return SuiteResult("degenerate-limit", worst <= tol, worst, tol, cases)


SUITES = {
    "car": car_suite,
    "spectrum": spectrum_suite,
    "generator-gap": generator_gap_suite,
    "ghz": ghz_suite,
    "qfi-two-path": qfi_two_path_suite,
    "block-identity": block_identity_suite,
    "degenerate-limit": degenerate_limit_suite,
}


def run_all(level: str = "fast", eps_omega: float | None = None, suites=None) -> list[SuiteResult]:
    n_top = LEVELS[level]
    out = []
    for name in suites or SUITES:
        start = time.perf_counter()
        res = SUITES[name](n_top, eps_omega=eps_omega)
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
