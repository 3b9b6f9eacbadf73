import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ising_qfi import _fallback, kernels

try:
    from ising_qfi import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")

angles = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(-10, 10), min_size=n, max_size=n),
        st.lists(st.floats(-10, 10), min_size=n, max_size=n),
    )
)


def _random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return np.asfortranarray(a + a.conj().T)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    if _kernels is not None:
        assert kernels.BACKEND == "cython"


@needs_ext
@settings(max_examples=100)
@given(angles)
def test_product_state_agree(ang):
    th, ph = (np.array(a, dtype=float) for a in ang)
    np.testing.assert_allclose(_kernels.product_state(th, ph), _fallback.product_state(th, ph), atol=1e-14)


@needs_ext
@settings(max_examples=100)
@given(angles, st.integers(0, 1000))
def test_product_variance_agree(ang, seed):
    th, ph = (np.array(a, dtype=float) for a in ang)
    op = _random_hermitian(2 ** th.size, seed)
    ref = _fallback.product_variance(th, ph, op)
    assert _kernels.product_variance(th, ph, op) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("impl", [_fallback, _kernels], ids=["python", "cython"])
def test_product_state_normalised_and_ordered(impl):
    if impl is None:
        pytest.skip("compiled extension not built")
    th = np.array([np.pi, 0.0, np.pi])
    psi = impl.product_state(th, np.zeros(3))
    # first site is the most significant bit: |101>
    assert abs(psi[0b101]) == pytest.approx(1.0)
    assert np.linalg.norm(psi) == pytest.approx(1.0)


@pytest.mark.parametrize("impl", [_fallback, _kernels], ids=["python", "cython"])
def test_variance_of_read_only_operator(impl):
    if impl is None:
        pytest.skip("compiled extension not built")
    op = _random_hermitian(8, 1)
    op.setflags(write=False)
    th = np.array([0.3, 1.1, 2.0])
    v = impl.product_variance(th, np.array([0.0, 0.5, 4.0]), op)
    assert v >= 0.0


@pytest.mark.parametrize("flag, expected", [("1", "python"), ("0", None)])
def test_env_selects_backend(flag, expected):
    import os
    import subprocess
    import sys

    env = dict(os.environ, ISING_QFI_PURE_PYTHON=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from ising_qfi import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.strip()
    assert out == (expected or kernels.BACKEND)
