"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def product_state(thetas, phis):
    psi = np.ones(1, dtype=complex)
    for theta, phi in zip(thetas, phis):
        site = np.array([np.cos(0.5 * theta), np.exp(1j * phi) * np.sin(0.5 * theta)])
        psi = np.kron(psi, site)
    return psi


def product_variance(thetas, phis, op):
    psi = product_state(thetas, phis)
    y = op @ psi
    mean = np.vdot(psi, y).real
    return np.vdot(y, y).real - mean * mean
