"""Pure numpy versions of the scalar kernels.

Each function mirrors one in ``_kernels.pyx`` exactly; the compiled and
fallback paths are checked against each other in the test suite.
"""
import numpy as np


def clenshaw(coeffs, x):
    """Evaluate ``sum_r coeffs[r] T_r(x)`` by the Clenshaw recurrence."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = coeffs.shape[0]
    if n == 0:
        return np.zeros(x.shape, dtype=np.complex128)
    b1 = np.zeros(x.shape, dtype=np.complex128)
    b2 = np.zeros(x.shape, dtype=np.complex128)
    two_x = 2.0 * x
    for r in range(n - 1, 0, -1):
        b1, b2 = coeffs[r] + two_x * b1 - b2, b1
    return coeffs[0] + x * b1 - b2


def laurent_horner(coeffs, z):
    """Evaluate ``sum_{j=-D}^{D} coeffs[j+D] z^j`` for unimodular ``z``.

    Horner in ``z`` for the non-negative powers, Horner in ``1/z`` for the
    negative ones.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    degree = (coeffs.shape[0] - 1) // 2
    w = 1.0 / z
    pos = np.full(z.shape, coeffs[2 * degree], dtype=np.complex128)
    for j in range(degree - 1, -1, -1):
        pos = pos * z + coeffs[degree + j]
    neg = np.zeros(z.shape, dtype=np.complex128)
    for j in range(degree, 0, -1):
        neg = (neg + coeffs[degree - j]) * w
    return pos + neg


def max_lagged_difference(samples, max_lag):
    """``max |s[i+l] - s[i]|`` over ``1 <= l <= max_lag`` and all valid ``i``."""
    samples = np.ascontiguousarray(samples, dtype=np.complex128)
    n = samples.shape[0]
    best = 0.0
    for lag in range(1, min(int(max_lag), n - 1) + 1):
        diff = np.abs(samples[lag:] - samples[:-lag]).max()
        if diff > best:
            best = float(diff)
    return best
