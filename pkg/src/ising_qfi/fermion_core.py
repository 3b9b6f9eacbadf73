"""Momentum-space generators of the transverse-field Ising chain.

The chain ``H = J sum_i X_i X_{i+1} + B sum_i Z_i`` (full Pauli operators) maps
under Jordan-Wigner to the cyclic quadratic form

    H = J sum_j (a_j^+ - a_j)(a_{j+1}^+ + a_{j+1}) + 2B sum_j a_j^+ a_j,

which splits into 2x2 blocks ``h_k = [[alpha_k, i beta_k], [-i beta_k, -alpha_k]]``
acting on ``(b_k, b_{N-k}^+)``.  Every block is counted twice in the sum over
``k``, so the quasiparticle energy of mode ``k`` is ``2 omega_k`` and the block
rotates as ``exp(-2 i s h_k)``.  The integrated generator ``O_i`` inherits the
block structure; its block for mode ``k`` is ``[[diag, offdiag], [offdiag*, -diag]]``
and its single-particle level is ``s_k = sqrt(diag^2 + |offdiag|^2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "DomainError",
    "UnsupportedModeError",
    "Target",
    "ModelParams",
    "MomentumMode",
    "GeneratorBlock",
    "GeneratorSpectrum",
    "VarianceResult",
    "default_eps_omega",
    "mode_params",
    "mode_arrays",
    "generator_block",
    "generator_blocks",
    "generator_spectrum",
    "eigenvalue_identity",
    "max_variance",
    "ghz_variance_b",
    "ghz_leading_term_b",
    "staggered_variance_j",
]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class UnsupportedModeError(DomainError):
    """Closed form requested for a degenerate (omega_k ~ 0) mode."""


class Target(str, enum.Enum):
    """Which coupling is being estimated."""

    J = "J"
    B = "B"

    @classmethod
    def parse(cls, value: "Target | str") -> "Target":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        if key in ("J", "ESTIMATEJ", "ESTIMATE_J"):
            return cls.J
        if key in ("B", "ESTIMATEB", "ESTIMATE_B"):
            return cls.B
        raise DomainError(f"unknown estimation target {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Chain size, couplings and evolution time."""

    N: int
    J: float
    B: float
    t: float

    def __post_init__(self) -> None:
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise DomainError(f"N must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "J", float(self.J))
        object.__setattr__(self, "B", float(self.B))
        object.__setattr__(self, "t", float(self.t))
        if self.N < 2:
            raise DomainError(f"N must be >= 2, got {self.N}")
        if not (math.isfinite(self.J) and math.isfinite(self.B) and math.isfinite(self.t)):
            raise DomainError("J, B and t must be finite")
        if self.t < 0:
            raise DomainError(f"t must be >= 0, got {self.t}")

    def swapped(self) -> "ModelParams":
        """Return the dual parameters with J and B exchanged."""
        return replace(self, J=self.B, B=self.J)


@dataclass(frozen=True)
class MomentumMode:
    k: int
    alpha: float
    beta: float
    omega: float
    # Bogoliubov angle; documentation only, no variance depends on it
    theta: float
    # the Bogoliubov phase is pi/2 for every mode
    phi: float = math.pi / 2


@dataclass(frozen=True)
class GeneratorBlock:
    k: int
    diag: float
    offdiag: complex
    which: Target

    @property
    def singular_value(self) -> float:
        return math.hypot(self.diag, abs(self.offdiag))


@dataclass(frozen=True)
class GeneratorSpectrum:
    which: Target
    values: np.ndarray
    params: ModelParams

    @property
    def total(self) -> float:
        """Half the spectral gap of ``O_i``."""
        return float(np.sum(self.values))


@dataclass(frozen=True)
class VarianceResult:
    """Variance of ``O_i`` with the quantum Fisher information it implies.

    ``nu`` is the number of repetitions of the experiment used for the
    Cramer-Rao bound ``1 / sqrt(nu * qfi)``.
    """

    variance: float
    nu: int = field(default=1)

    def __post_init__(self) -> None:
        if self.nu < 1:
            raise DomainError(f"nu must be >= 1, got {self.nu}")

    @property
    def qfi(self) -> float:
        return 4.0 * self.variance

    @property
    def precision_bound(self) -> float:
        q = self.nu * self.qfi
        return math.inf if q <= 0 else 1.0 / math.sqrt(q)


def default_eps_omega(params: ModelParams) -> float:
    """Threshold below which a mode is treated as degenerate."""
    return 1e-9 * max(abs(params.J), abs(params.B), 1.0)


def _momenta(N: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of 2 pi k / N with exact values on the lattice symmetry points."""
    k = np.arange(N)
    q = 2.0 * np.pi * k / N
    c = np.cos(q)
    s = np.sin(q)
    s[0] = 0.0
    c[0] = 1.0
    if N % 2 == 0:
        c[N // 2] = -1.0
        s[N // 2] = 0.0
    if N % 4 == 0:
        c[N // 4] = 0.0
        s[N // 4] = 1.0
        c[3 * N // 4] = 0.0
        s[3 * N // 4] = -1.0
    return c, s


def mode_arrays(params: ModelParams) -> dict[str, np.ndarray]:
    """Vectorised ``cos q_k, sin q_k, alpha_k, beta_k, omega_k`` for all k."""
    c, s = _momenta(params.N)
    alpha = params.J * c + params.B
    beta = params.J * s
    omega = np.hypot(alpha, beta)
    return {"cos": c, "sin": s, "alpha": alpha, "beta": beta, "omega": omega}


def _check_k(params: ModelParams, k: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 0 <= k < params.N:
        raise DomainError(f"mode index {k!r} outside [0, {params.N - 1}]")
    return int(k)


def mode_params(params: ModelParams, k: int) -> MomentumMode:
    k = _check_k(params, k)
    m = mode_arrays(params)
    alpha = float(m["alpha"][k])
    beta = float(m["beta"][k])
    return MomentumMode(
        k=k,
        alpha=alpha,
        beta=beta,
        omega=float(m["omega"][k]),
        theta=0.5 * math.atan2(beta, alpha),
    )


def generator_blocks(
    params: ModelParams, which: Target | str, eps_omega: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Block coefficients ``(diag_k, offdiag_k)`` of ``O_i`` for every mode.

    For ``Target.J`` these are ``(Omega_k, Delta_k)``; for ``Target.B`` they are
    ``(A_k, B_k)``.  Each splits into a part linear in ``t`` and a bounded
    oscillating part at twice the quasiparticle energy ``e_k = 2 omega_k``.
    Modes with ``omega_k < eps_omega`` take the exact ``R_k -> 1`` limit.
    """
    which = Target.parse(which)
    if eps_omega is None:
        eps_omega = default_eps_omega(params)
    m = mode_arrays(params)
    t = params.t
    c, s = m["cos"], m["sin"]
    # quasiparticle-energy scaling of the block Hamiltonian
    a = 2.0 * m["alpha"]
    b = 2.0 * m["beta"]
    e = 2.0 * m["omega"]

    degenerate = m["omega"] < eps_omega
    e_safe = np.where(degenerate, 1.0, e)
    sin2 = np.sin(2.0 * e_safe * t)
    sinsq = np.sin(e_safe * t) ** 2

    if which is Target.J:
        lin = a * c + b * s
        osc = b * c - a * s
        diag = (a * lin * t + b * osc * sin2 / (2.0 * e_safe)) / e_safe**2
        offdiag = (1j * b * lin * t + osc * (sinsq - 1j * a * sin2 / (2.0 * e_safe))) / e_safe**2
        diag = np.where(degenerate, t * c, diag)
        offdiag = np.where(degenerate, 1j * t * s, offdiag)
    else:
        diag = a**2 * t / e_safe**2 + b**2 * sin2 / (2.0 * e_safe**3)
        offdiag = 1j * a * b * t / e_safe**2 + (2.0 * b * e_safe * sinsq - 1j * a * b * sin2) / (
            2.0 * e_safe**3
        )
        diag = np.where(degenerate, t, diag)
        offdiag = np.where(degenerate, 0.0, offdiag)

    if t == 0.0:
        diag = np.zeros_like(diag)
        offdiag = np.zeros_like(offdiag)
    return diag.astype(float), offdiag.astype(complex)


def generator_block(
    params: ModelParams, k: int, which: Target | str, eps_omega: float | None = None
) -> GeneratorBlock:
    k = _check_k(params, k)
    which = Target.parse(which)
    diag, offdiag = generator_blocks(params, which, eps_omega)
    return GeneratorBlock(k=k, diag=float(diag[k]), offdiag=complex(offdiag[k]), which=which)


def generator_spectrum(
    params: ModelParams, which: Target | str, eps_omega: float | None = None
) -> GeneratorSpectrum:
    """Non-negative single-particle levels of ``O_i`` (vacuum at zero)."""
    which = Target.parse(which)
    diag, offdiag = generator_blocks(params, which, eps_omega)
    values = np.hypot(diag, np.abs(offdiag))
    return GeneratorSpectrum(which=which, values=values, params=params)


def eigenvalue_identity(
    params: ModelParams, k: int, which: Target | str, eps_omega: float | None = None
) -> float:
    """Closed form of ``diag_k^2 + |offdiag_k|^2``, independent of the block formulas."""
    k = _check_k(params, k)
    which = Target.parse(which)
    if eps_omega is None:
        eps_omega = default_eps_omega(params)
    mode = mode_params(params, k)
    if mode.omega < eps_omega:
        raise UnsupportedModeError(f"mode k={k} is degenerate (omega={mode.omega:.3g})")
    t = params.t
    q = 2.0 * math.pi * k / params.N
    a, b, e = 2.0 * mode.alpha, 2.0 * mode.beta, 2.0 * mode.omega
    if which is Target.J:
        osc = b * math.cos(q) - a * math.sin(q)
        lin = a * math.cos(q) + b * math.sin(q)
        num = osc**2 * (1.0 - math.cos(2.0 * e * t)) + 2.0 * t**2 * e**2 * lin**2
    else:
        num = b**2 * (1.0 - math.cos(2.0 * e * t)) + 2.0 * t**2 * a**2 * e**2
    return num / (2.0 * e**4)


def max_variance(params: ModelParams, which: Target | str, nu: int = 1) -> VarianceResult:
    """Largest variance of ``O_i`` over all states: ``(sum_k s_k)^2``.

    Attained by the equal superposition of the quasiparticle vacuum of ``O_i``
    and the state with every mode occupied.
    """
    total = generator_spectrum(params, which).total
    return VarianceResult(variance=total**2, nu=nu)


def ghz_variance_b(params: ModelParams, nu: int = 1) -> VarianceResult:
    """Exact variance of ``O_B`` on the GHZ state.

    In momentum space GHZ is ``(|vac> + e^{i phi}|full>) / sqrt(2)``, so the
    diagonal block entries give ``(sum_k A_k)^2``.  The pair-creation entries
    ``B_k b_k^+ b_{N-k}^+`` add ``2 sum_k |B_k|^2``, which is subleading in N
    at large t and vanishes when J = 0.
    """
    diag, offdiag = generator_blocks(params, Target.B)
    variance = float(np.sum(diag)) ** 2 + 2.0 * float(np.sum(np.abs(offdiag) ** 2))
    return VarianceResult(variance=variance, nu=nu)


def ghz_leading_term_b(params: ModelParams) -> float:
    """``(sum_k A_k)^2``, the diagonal-only part of the GHZ variance."""
    diag, _ = generator_blocks(params, Target.B)
    return float(np.sum(diag)) ** 2


def staggered_variance_j(params: ModelParams, nu: int = 1) -> VarianceResult:
    """Staggered-GHZ variance for J-estimation via the kink duality.

    Evaluated as the GHZ/B result with J and B exchanged; exact in the bulk,
    approximate at finite N.
    """
    return ghz_variance_b(params.swapped(), nu=nu)
