"""Hot-loop kernels: compiled extension when available, numpy otherwise.

Set ``ISING_QFI_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

if os.environ.get("ISING_QFI_PURE_PYTHON", "") not in ("", "0"):
    from ._fallback import product_state, product_variance

    BACKEND = "python"
else:
    try:
        from ._kernels import product_state, product_variance

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._fallback import product_state, product_variance

        BACKEND = "python"

__all__ = ["BACKEND", "product_state", "product_variance"]
