"""Dense 2^N matrix reference for the Ising chain.

Basis ordering: site 1 is the most significant bit of a computational-basis
index, ``|0>`` is the empty fermion mode and ``Z|0> = +|0>``.  All Pauli
operators have eigenvalues +-1.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .fermion_core import DomainError, ModelParams, Target, VarianceResult

__all__ = [
    "ModelKind",
    "MatrixModel",
    "StateKind",
    "IntegratedGenerator",
    "n_max",
    "jw_mode_matrix",
    "build_hamiltonian",
    "build_generator",
    "integrated_generator",
    "evolve",
    "variance_of",
    "qfi_finite_difference",
    "make_state",
    "ghz_state",
    "staggered_ghz_state",
    "product_state",
    "basis_state",
    "block_integral_oracle",
]

DEFAULT_N_MAX = 12
NORM_TOL = 1e-12
FD_EPS_FLOOR = 1e-12


def n_max() -> int:
    """Largest chain size allowed for dense simulation (``ISING_QFI_NMAX``)."""
    raw = os.environ.get("ISING_QFI_NMAX")
    if raw is None:
        return DEFAULT_N_MAX
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"ISING_QFI_NMAX must be an integer, got {raw!r}") from exc
    if value < 2:
        raise DomainError("ISING_QFI_NMAX must be >= 2")
    return value


class ModelKind(str, enum.Enum):
    SPIN_OPEN = "spin-open"
    SPIN_PERIODIC = "spin-periodic"
    FERMION_CYCLIC = "fermion-cyclic"


@dataclass(frozen=True)
class MatrixModel:
    """Boundary/representation choice for a chain of ``N`` sites.

    ``SPIN_OPEN`` has N-1 bonds, ``SPIN_PERIODIC`` adds the bond (N, 1) between
    spins, and ``FERMION_CYCLIC`` closes the chain at the fermion level
    (``a_{N+1} = a_1``), which differs from the periodic spin chain by a
    parity-dependent boundary term.
    """

    kind: ModelKind
    N: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ModelKind(self.kind))
        limit = n_max()
        if not 2 <= self.N <= limit:
            raise DomainError(f"N={self.N} outside [2, {limit}] for dense simulation")


class StateKind(str, enum.Enum):
    GHZ = "ghz"
    STAGGERED_GHZ = "staggered-ghz"
    PRODUCT = "product"
    BASIS = "basis"


# -- operators ---------------------------------------------------------------

_I = sp.identity(2, format="csr", dtype=float)
_X = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_Z = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
# annihilates the occupied state |1>
_LOWER = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


def _site_op(N: int, ops: dict[int, sp.spmatrix]) -> sp.csr_matrix:
    """Kronecker product with ``ops[j]`` on site j (1-based), identity elsewhere."""
    factors = [ops.get(j, _I) for j in range(1, N + 1)]
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)


def jw_mode_matrix(N: int, j: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Jordan-Wigner pair ``(a_j, a_j^+)`` as explicit sparse matrices."""
    if not 1 <= N <= n_max():
        raise DomainError(f"N={N} outside [1, {n_max()}]")
    if not 1 <= j <= N:
        raise DomainError(f"mode j={j} outside [1, {N}]")
    ops = {k: _Z for k in range(1, j)}
    ops[j] = _LOWER
    a = _site_op(N, ops)
    return a, a.T.tocsr()


def _spin_terms(model: MatrixModel) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    N = model.N
    bonds = N if model.kind is ModelKind.SPIN_PERIODIC else N - 1
    h1 = sum(_site_op(N, {i: _X, i % N + 1: _X}) for i in range(1, bonds + 1))
    h2 = sum(_site_op(N, {i: _Z}) for i in range(1, N + 1))
    return h1, h2


def _fermion_terms(N: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    modes = [jw_mode_matrix(N, j) for j in range(1, N + 1)]
    h1 = None
    h2 = None
    for j in range(N):
        a, ad = modes[j]
        a_next, ad_next = modes[(j + 1) % N]
        hop = (ad - a) @ (ad_next + a_next)
        num = 2.0 * (ad @ a)
        h1 = hop if h1 is None else h1 + hop
        h2 = num if h2 is None else h2 + num
    return h1, h2


def _terms(model: MatrixModel) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    if model.kind is ModelKind.FERMION_CYCLIC:
        return _fermion_terms(model.N)
    return _spin_terms(model)


def _model_for(params: ModelParams, model: MatrixModel | ModelKind | str) -> MatrixModel:
    if isinstance(model, MatrixModel):
        if model.N != params.N:
            raise DomainError(f"model has N={model.N} but params have N={params.N}")
        return model
    return MatrixModel(ModelKind(model), params.N)


def build_hamiltonian(params: ModelParams, model: MatrixModel | ModelKind | str) -> np.ndarray:
    """Dense real-symmetric ``H(J, B)``.

    The fermionic model carries ``2B sum a^+ a = B (N - sum Z)``, i.e. its
    spectrum is offset from (and mirrored in B relative to) the spin chain.
    """
    model = _model_for(params, model)
    h1, h2 = _terms(model)
    return (params.J * h1 + params.B * h2).toarray()


def build_generator(which: Target | str, model: MatrixModel | ModelKind | str, N: int | None = None) -> np.ndarray:
    """``dH/dJ`` or ``dH/dB`` as a dense matrix."""
    which = Target.parse(which)
    if not isinstance(model, MatrixModel):
        if N is None:
            raise DomainError("N is required when model is given by kind")
        model = MatrixModel(ModelKind(model), N)
    h1, h2 = _terms(model)
    return (h1 if which is Target.J else h2).toarray()


# -- integrated generator ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class IntegratedGenerator:
    """``O_i = int_0^t U(s) H_i U(s)^+ ds`` with the eigensystem of ``H``."""

    matrix: np.ndarray
    which: Target
    model: MatrixModel
    params: ModelParams
    energies: np.ndarray = field(repr=False)
    eigvecs: np.ndarray = field(repr=False)
    generator: np.ndarray = field(repr=False)

    def propagator(self, t: float | None = None) -> np.ndarray:
        """``U(t) = exp(-i t H)`` (default: the generator's own time)."""
        t = self.params.t if t is None else t
        return (self.eigvecs * np.exp(-1j * t * self.energies)) @ self.eigvecs.conj().T

    def evolved(self) -> np.ndarray:
        """``U^+ O U``: the operator whose variance on the *input* state is the QFI/4."""
        u = self.propagator()
        return u.conj().T @ self.matrix @ u

    def spectral_gap(self) -> float:
        ev = np.linalg.eigvalsh(self.matrix)
        return float(ev[-1] - ev[0])

    def traceless(self) -> np.ndarray:
        dim = self.matrix.shape[0]
        return self.matrix - (np.trace(self.matrix).real / dim) * np.eye(dim)


def _integration_kernel(energies: np.ndarray, t: float, eps_e: float) -> np.ndarray:
    d = energies[:, None] - energies[None, :]
    small = np.abs(d) <= eps_e
    d_safe = np.where(small, 1.0, d)
    kernel = np.expm1(-1j * t * d_safe) / (-1j * d_safe)
    return np.where(small, t, kernel)


def integrated_generator(
    params: ModelParams, which: Target | str, model: MatrixModel | ModelKind | str
) -> IntegratedGenerator:
    """Exact ``O_i`` from the eigendecomposition of ``H``.

    In the eigenbasis of ``H`` the integrand has entries
    ``(H_i)_{mn} exp(-i s (E_m - E_n))``, integrated in closed form; gaps
    below ``1e-9 * max|H|`` use the degenerate kernel ``t``.
    """
    which = Target.parse(which)
    model = _model_for(params, model)
    h1, h2 = _terms(model)
    H = (params.J * h1 + params.B * h2).toarray()
    gen = (h1 if which is Target.J else h2).toarray()
    energies, vecs = np.linalg.eigh(H)
    eps_e = 1e-9 * float(np.max(np.abs(H))) if H.size else 0.0
    gen_eig = vecs.T @ gen @ vecs
    O = vecs @ (gen_eig * _integration_kernel(energies, params.t, eps_e)) @ vecs.conj().T
    O = 0.5 * (O + O.conj().T)
    return IntegratedGenerator(O, which, model, params, energies, vecs, gen)


def evolve(gen: IntegratedGenerator, state: np.ndarray) -> np.ndarray:
    return gen.propagator() @ state


def _check_state(state: np.ndarray, dim: int) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (dim,):
        raise DomainError(f"state has shape {state.shape}, expected ({dim},)")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > NORM_TOL:
        raise DomainError(f"state is not normalised (norm={norm!r})")
    return state


def variance_of(state: np.ndarray, gen: IntegratedGenerator, nu: int = 1) -> VarianceResult:
    """Variance of ``O_i`` on the evolved state ``U(t)|psi>``."""
    psi = _check_state(state, gen.matrix.shape[0])
    phi = evolve(gen, psi)
    o_phi = gen.matrix @ phi
    mean = np.vdot(phi, o_phi).real
    second = np.vdot(o_phi, o_phi).real
    return VarianceResult(variance=max(second - mean * mean, 0.0), nu=nu)


def qfi_finite_difference(
    params: ModelParams,
    which: Target | str,
    model: MatrixModel | ModelKind | str,
    state: np.ndarray,
    eps: float = 1e-6,
) -> float:
    """Pure-state QFI from a central difference of ``U(lambda) |psi>``.

    Independent of the integrated-generator path.  Steps below ``1e-12`` warn
    (``RuntimeWarning``) because of catastrophic cancellation.
    """
    which = Target.parse(which)
    if not eps > 0:
        raise DomainError(f"eps must be > 0, got {eps}")
    if eps < FD_EPS_FLOOR:
        warnings.warn(f"finite-difference step {eps:g} is below {FD_EPS_FLOOR:g}", RuntimeWarning, stacklevel=2)
    model = _model_for(params, model)
    psi = _check_state(state, 2**params.N)
    if params.t == 0.0:
        return 0.0
    h1, h2 = _terms(model)
    h1 = h1.toarray()
    h2 = h2.toarray()

    def evolved(delta: float) -> np.ndarray:
        J = params.J + (delta if which is Target.J else 0.0)
        B = params.B + (delta if which is Target.B else 0.0)
        E, V = np.linalg.eigh(J * h1 + B * h2)
        return V @ (np.exp(-1j * params.t * E) * (V.conj().T @ psi))

    d_psi = (evolved(eps) - evolved(-eps)) / (2.0 * eps)
    psi_t = evolved(0.0)
    overlap = np.vdot(d_psi, psi_t)
    return float(4.0 * (np.vdot(d_psi, d_psi).real - abs(overlap) ** 2))


# -- states ------------------------------------------------------------------


def ghz_state(N: int) -> np.ndarray:
    psi = np.zeros(2**N, dtype=complex)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def staggered_ghz_state(N: int) -> np.ndarray:
    """``(|00...0> + |0101...01>) / sqrt(2)``."""
    if N % 2:
        raise DomainError(f"staggered GHZ needs even N, got {N}")
    psi = np.zeros(2**N, dtype=complex)
    psi[0] = 1.0 / math.sqrt(2.0)
    psi[int("01" * (N // 2), 2)] = 1.0 / math.sqrt(2.0)
    return psi


def product_state(thetas, phis) -> np.ndarray:
    """``prod_i (cos(theta_i/2)|0> + exp(i phi_i) sin(theta_i/2)|1>)``."""
    from .kernels import product_state as _kernel

    thetas = np.ascontiguousarray(thetas, dtype=float)
    phis = np.ascontiguousarray(phis, dtype=float)
    if thetas.shape != phis.shape or thetas.ndim != 1:
        raise DomainError("thetas and phis must be 1-D arrays of equal length")
    return _kernel(thetas, phis)


def basis_state(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(b) for b in bits]
    bits = list(bits)
    if any(b not in (0, 1) for b in bits):
        raise DomainError(f"bits must be 0/1, got {bits!r}")
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int("".join(map(str, bits)), 2)] = 1.0
    return psi


def make_state(kind: StateKind | str, N: int, angles=None, bits=None) -> np.ndarray:
    kind = StateKind(kind)
    if kind is StateKind.GHZ:
        return ghz_state(N)
    if kind is StateKind.STAGGERED_GHZ:
        return staggered_ghz_state(N)
    if kind is StateKind.PRODUCT:
        angles = np.asarray(angles, dtype=float)
        if angles.shape != (2 * N,):
            raise DomainError(f"product state needs 2N={2 * N} angles, got shape {angles.shape}")
        return product_state(angles[:N], angles[N:])
    if bits is None or len(bits) != N:
        raise DomainError(f"basis state needs {N} bits")
    return basis_state(bits)


# -- single-block reference --------------------------------------------------


def block_integral_oracle(params: ModelParams, k: int, which: Target | str) -> np.ndarray:
    """``int_0^t R_k(s)^+ M R_k(s) ds`` for one 2x2 block, by eigen-decomposition.

    ``R_k(s) = exp(-2 i s h_k)``; ``M`` is the block of ``H_1`` or of the
    traceless part of ``H_2``.  No degenerate-mode special-casing: the kernel
    is evaluated directly from the 2x2 eigenvalues.
    """
    which = Target.parse(which)
    q = 2.0 * math.pi * k / params.N
    c, s = math.cos(q), math.sin(q)
    alpha = params.J * c + params.B
    beta = params.J * s
    h = np.array([[alpha, 1j * beta], [-1j * beta, -alpha]])
    if which is Target.J:
        m = np.array([[c, 1j * s], [-1j * s, -c]])
    else:
        m = np.diag([1.0, -1.0]).astype(complex)
    E, V = np.linalg.eigh(2.0 * h)
    m_eig = V.conj().T @ m @ V
    # R^+ M R = V exp(iEs) m_eig exp(-iEs) V^+
    d = E[:, None] - E[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        kernel = np.where(np.abs(d) > 0, np.expm1(1j * params.t * d) / (1j * d), params.t)
    return V @ (m_eig * kernel) @ V.conj().T
