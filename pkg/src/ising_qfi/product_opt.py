"""Best pure product input states for estimating J or B, and power-law fits.

The objective for a product state ``|psi>`` is ``Var(U^+ O_i U)`` on ``|psi>``;
the evolved generator is computed once per configuration and cached.
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize as sopt

from . import kernels
from .exact_oracle import MatrixModel, ModelKind, integrated_generator
from .fermion_core import DomainError, ModelParams, Target

log = logging.getLogger(__name__)

__all__ = [
    "ProductStateAngles",
    "RestartLog",
    "OptRun",
    "FitResult",
    "evolved_generator",
    "product_variance",
    "optimize",
    "fit_power_law",
]

DEFAULT_RESTARTS = 64
DEFAULT_XATOL = 1e-8


@dataclass(frozen=True)
class ProductStateAngles:
    """Bloch angles of a product state, wrapped to ``theta in [0, pi]``, ``phi in [0, 2 pi)``."""

    thetas: np.ndarray
    phis: np.ndarray

    def __post_init__(self) -> None:
        thetas = np.asarray(self.thetas, dtype=float).copy()
        phis = np.asarray(self.phis, dtype=float).copy()
        if thetas.shape != phis.shape or thetas.ndim != 1:
            raise DomainError("thetas and phis must be 1-D and of equal length")
        thetas = np.mod(thetas, 2.0 * np.pi)
        flip = thetas > np.pi
        # theta -> 2 pi - theta is the same state up to a global sign if phi -> phi + pi
        thetas[flip] = 2.0 * np.pi - thetas[flip]
        phis[flip] += np.pi
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "phis", np.mod(phis, 2.0 * np.pi))

    @classmethod
    def from_vector(cls, x) -> "ProductStateAngles":
        x = np.asarray(x, dtype=float)
        n = x.size // 2
        return cls(x[:n], x[n:])

    @property
    def N(self) -> int:
        return self.thetas.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.thetas, self.phis])


@dataclass(frozen=True)
class RestartLog:
    index: int
    variance: float
    converged: bool
    n_evals: int


@dataclass
class OptRun:
    params: ModelParams
    which: Target
    model: ModelKind
    restarts: int
    seed: int
    best_variance: float = math.nan
    best_angles: ProductStateAngles | None = None
    best_restart: int = -1
    per_restart_log: list[RestartLog] = field(default_factory=list)

    @property
    def restarts_converged(self) -> int:
        return sum(r.converged for r in self.per_restart_log)


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of ``a * N**b + c``."""

    a: float
    b: float
    c: float
    stderr_a: float
    stderr_b: float
    stderr_c: float
    rss: float
    flagged: bool = False
    model: str = "a*N^b+c"

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "stderr_a": self.stderr_a,
            "stderr_b": self.stderr_b,
            "stderr_c": self.stderr_c,
            "rss": self.rss,
            "flagged": self.flagged,
        }


@lru_cache(maxsize=32)
def evolved_generator(params: ModelParams, which: Target, model: ModelKind) -> np.ndarray:
    """``U(t)^+ O_i U(t)`` in Fortran order, shared read-only across restarts."""
    gen = integrated_generator(params, which, MatrixModel(model, params.N))
    op = np.asfortranarray(gen.evolved())
    op.setflags(write=False)
    return op


def product_variance(
    angles: ProductStateAngles | np.ndarray,
    params: ModelParams,
    which: Target | str,
    model: ModelKind | str = ModelKind.SPIN_OPEN,
) -> float:
    """Variance of ``O_i`` for the product state with the given Bloch angles."""
    if not isinstance(angles, ProductStateAngles):
        angles = ProductStateAngles.from_vector(angles)
    if angles.N != params.N:
        raise DomainError(f"{angles.N} sites of angles for N={params.N}")
    op = evolved_generator(params, Target.parse(which), ModelKind(model))
    return float(kernels.product_variance(angles.thetas, angles.phis, op))


def _restart(params: ModelParams, which: Target, model: ModelKind, seed: int, index: int, xatol: float, max_iter: int):
    op = evolved_generator(params, which, model)
    N = params.N
    rng = np.random.default_rng([seed, index])
    x0 = np.concatenate([rng.uniform(0.0, np.pi, N), rng.uniform(0.0, 2.0 * np.pi, N)])
    scale = max(float(np.max(np.abs(op))), 1.0) ** 2

    def objective(x):
        return -kernels.product_variance(x[:N], x[N:], op)

    res = sopt.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "xatol": xatol,
            "fatol": 1e-12 * scale,
            "maxiter": max_iter,
            "maxfev": 2 * max_iter,
            "adaptive": True,
        },
    )
    x = np.ascontiguousarray(res.x)
    return -float(res.fun), x, bool(res.success), int(res.nfev)


def optimize(
    params: ModelParams,
    which: Target | str,
    model: ModelKind | str = ModelKind.SPIN_OPEN,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    xatol: float = DEFAULT_XATOL,
    max_iter: int | None = None,
    workers: int = 1,
) -> OptRun:
    """Multi-start Nelder-Mead ascent of the product-state variance.

    Restart ``i`` draws its start from ``default_rng([seed, i])``, so the result
    does not depend on ``workers`` and a run with more restarts extends the
    one with fewer.  Ties go to the lowest restart index.
    """
    which = Target.parse(which)
    model = ModelKind(model)
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    if max_iter is None:
        max_iter = 2000 * params.N
    args = (params, which, model, seed)
    indices = range(restarts)
    if workers == 1:
        results = [_restart(*args, i, xatol, max_iter) for i in indices]
    else:
        n = len(indices)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(_restart, [params] * n, [which] * n, [model] * n, [seed] * n, indices, [xatol] * n, [max_iter] * n)
            )

    out = OptRun(params=params, which=which, model=model, restarts=restarts, seed=seed)
    for i, (value, x, converged, nfev) in enumerate(results):
        out.per_restart_log.append(RestartLog(i, value, converged, nfev))
        if not converged:
            log.debug("restart %d hit the iteration limit (value %.6g)", i, value)
        if out.best_restart < 0 or value > out.best_variance:
            out.best_variance = value
            out.best_angles = ProductStateAngles.from_vector(x)
            out.best_restart = i
    return out


def _power_law(n, a, b, c):
    return a * np.power(n, b) + c


def fit_power_law(points) -> FitResult:
    """Fit ``y = a N^b + c`` by nonlinear least squares.

    Standard errors come from the Jacobian at the optimum.  If the covariance
    is singular the result is flagged and ``b`` is taken from a log-log line.
    """
    pts = sorted((float(n), float(y)) for n, y in points)
    if len(pts) < 4:
        raise DomainError(f"need at least 4 points, got {len(pts)}")
    n = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if len(set(n)) != len(n):
        raise DomainError("N values must be distinct")
    slope = (y[-1] - y[0]) / (n[-1] - n[0])
    p0 = (slope if slope != 0 else 1.0, 1.0, 0.0)
    try:
        with warnings.catch_warnings():
            # a singular covariance is reported through ``flagged`` instead
            warnings.simplefilter("ignore", sopt.OptimizeWarning)
            popt, pcov = sopt.curve_fit(_power_law, n, y, p0=p0, maxfev=20000)
        resid = y - _power_law(n, *popt)
        rss = float(resid @ resid)
        stderr = np.sqrt(np.diag(pcov)) if np.all(np.isfinite(pcov)) else np.full(3, np.inf)
        if np.all(np.isfinite(stderr)) and np.all(np.isfinite(popt)):
            return FitResult(*map(float, popt), *map(float, stderr), rss=rss)
    except (RuntimeError, ValueError, np.linalg.LinAlgError):
        pass
    log.warning("power-law fit is singular; falling back to a log-log line")
    pos = y > 0
    b, log_a = np.polyfit(np.log(n[pos]), np.log(y[pos]), 1)
    a = math.exp(log_a)
    resid = y - a * n**b
    return FitResult(a, float(b), 0.0, math.inf, math.inf, math.inf, rss=float(resid @ resid), flagged=True)
