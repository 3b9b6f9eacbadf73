"""Large-N, large-t prefactors of the normalised variance ``Var(O_i) / (N t)^2``.

``g_optimal`` is the prefactor for the optimal state, ``f_ghz`` for GHZ-type
states.  Both are squared circle averages of a function of ``g * cos x``; with
``g`` the ratio of the *other* coupling to the estimated one.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import integrate

from .fermion_core import DomainError, ModelParams, Target, max_variance

__all__ = [
    "Curve",
    "PrefactorCurve",
    "QUAD_TOL",
    "G_INFINITY",
    "F_INFINITY",
    "g_optimal",
    "f_ghz",
    "prefactor",
    "prefactor_curve",
    "kink_detect",
    "asymptotic_check",
]

QUAD_TOL = 1e-10
# g -> infinity: the integrands tend to |cos x| and cos^2 x
G_INFINITY = 4.0 / math.pi**2
F_INFINITY = 0.25


class Curve(str, enum.Enum):
    OPTIMAL_G = "G"
    GHZ_F = "F"


def _check_g(g: float) -> float:
    g = float(g)
    if not math.isfinite(g) or g < 0:
        raise DomainError(f"g must be finite and >= 0, got {g!r}")
    return g


def _ratio_sq(g: float, x: float) -> float:
    """``(1 + g cos x)^2 / (1 + g^2 + 2 g cos x)``, zero at the removable point."""
    num = 1.0 + g * math.cos(x)
    # (1-g)^2 + 4 g cos^2(x/2) avoids cancellation near g = 1, x = pi
    den = (1.0 - g) ** 2 + 4.0 * g * math.cos(0.5 * x) ** 2
    if den == 0.0:
        return 0.0
    return num * num / den


def _circle_mean(func, g: float, tol: float) -> float:
    # integrand is even about x = pi; for g > 1 the G integrand has a kink
    # where 1 + g cos x changes sign, and quad needs to be told where it is
    points = [math.acos(-1.0 / g)] if g > 1.0 else None
    val, _ = integrate.quad(func, 0.0, math.pi, args=(g,), epsabs=tol, epsrel=0.0, limit=500, points=points)
    return val / math.pi


def g_optimal(g: float, tol: float = QUAD_TOL) -> float:
    """Prefactor for the optimal state."""
    g = _check_g(g)
    if g == 0.0:
        return 1.0
    mean = _circle_mean(lambda x, gg: math.sqrt(_ratio_sq(gg, x)), g, tol)
    return mean * mean


def f_ghz(g: float, tol: float = QUAD_TOL) -> float:
    """Prefactor for GHZ-type states."""
    g = _check_g(g)
    if g == 0.0:
        return 1.0
    mean = _circle_mean(lambda x, gg: _ratio_sq(gg, x), g, tol)
    return mean * mean


def prefactor(curve: Curve | str, g: float, tol: float = QUAD_TOL) -> float:
    curve = Curve(curve)
    return g_optimal(g, tol) if curve is Curve.OPTIMAL_G else f_ghz(g, tol)


class PrefactorCurve:
    """A prefactor curve sampled on a grid, kept in ascending ``g``."""

    def __init__(self, which: Curve | str, grid, quadrature_tol: float = QUAD_TOL):
        self.which = Curve(which)
        self.quadrature_tol = quadrature_tol
        gs = sorted(_check_g(g) for g in grid)
        self.grid = [(g, prefactor(self.which, g, quadrature_tol)) for g in gs]

    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.grid])

    def __repr__(self) -> str:
        return f"PrefactorCurve({self.which.value}, {len(self.grid)} points)"


def prefactor_curve(which: Curve | str, grid, quadrature_tol: float = QUAD_TOL) -> PrefactorCurve:
    return PrefactorCurve(which, grid, quadrature_tol)


def kink_detect(curve_which: Curve | str, g0: float, h: float) -> tuple[float, float]:
    """One-sided difference quotients ``(left, right)`` of a prefactor at ``g0``."""
    if not g0 > h > 0:
        raise DomainError(f"need g0 > h > 0, got g0={g0}, h={h}")
    f0 = prefactor(curve_which, g0)
    left = (f0 - prefactor(curve_which, g0 - h)) / h
    right = (prefactor(curve_which, g0 + h) - f0) / h
    return left, right


def _dual_ratio(params: ModelParams, which: Target) -> float:
    """Other coupling over the estimated one; ``inf`` when the latter vanishes."""
    own, other = (params.J, params.B) if which is Target.J else (params.B, params.J)
    if own == 0.0:
        return math.inf
    return abs(other / own)


def asymptotic_check(params: ModelParams, which: Target | str) -> float:
    """``max_variance / (N t)^2 - G(ratio)``.

    The B-target is evaluated through its dual J-target (couplings swapped), so
    the two estimation problems share one code path.
    """
    which = Target.parse(which)
    if which is Target.B:
        params = params.swapped()
    ratio = _dual_ratio(params, Target.J)
    g_val = G_INFINITY if math.isinf(ratio) else g_optimal(ratio)
    if params.t == 0.0:
        return -g_val
    normalised = max_variance(params, Target.J).variance / (params.N * params.t) ** 2
    return normalised - g_val
