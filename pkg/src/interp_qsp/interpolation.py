"""Laurent and Chebyshev interpolation on roots of unity.

The averaged interpolant ``f_d`` is a degree ``3d - 1`` Laurent polynomial
whose coefficient of ``z^r`` is ``c_r * F_r / 4d`` with ``F_r`` the length
``4d`` DFT of the node samples and ``c_r`` a triangular weight: 1 for
``|r| <= d``, ``(3d - |r|) / 2d`` for ``d < |r| < 3d``. One FFT builds it.
"""
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AliasingError, InvalidInputError
from .functions import SupNormGrid, lift_interval_function
from .numerics import roots_of_unity

ZERO_THRESHOLD = 1e-13
UNIT_TOL = 1e-12


def _check_power_of_two(d):
    if not isinstance(d, (int, np.integer)) or d < 1 or (d & (d - 1)):
        raise InvalidInputError(f"d must be a power of two, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class LaurentPolynomial:
    """``sum_{j=-D}^{D} coefficients[j + D] z^j``."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.ndim != 1 or c.shape[0] % 2 == 0:
            raise InvalidInputError("coefficient vector must have odd length 2D+1")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_dict(cls, coeffs):
        """From ``{power: coefficient}``."""
        D = max((abs(j) for j in coeffs), default=0)
        c = np.zeros(2 * D + 1, dtype=np.complex128)
        for j, v in coeffs.items():
            c[j + D] = v
        return cls(c)

    @property
    def max_degree(self):
        return (self.coefficients.shape[0] - 1) // 2

    @property
    def degree(self):
        """Largest ``|j|`` with a coefficient above the relative zero threshold."""
        mags = np.abs(self.coefficients)
        peak = mags.max()
        if peak == 0:
            return 0
        live = np.nonzero(mags > ZERO_THRESHOLD * peak)[0]
        return int(np.max(np.abs(live - self.max_degree)))

    def coefficient(self, j):
        D = self.max_degree
        return self.coefficients[j + D] if -D <= j <= D else 0j

    def padded(self, D):
        if D < self.max_degree:
            raise InvalidInputError("cannot pad to a smaller degree")
        out = np.zeros(2 * D + 1, dtype=np.complex128)
        out[D - self.max_degree : D + self.max_degree + 1] = self.coefficients
        return LaurentPolynomial(out)

    def __call__(self, z):
        return evaluate_laurent(self, z)

    def __add__(self, other):
        D = max(self.max_degree, other.max_degree)
        return LaurentPolynomial(self.padded(D).coefficients + other.padded(D).coefficients)

    def __mul__(self, scalar):
        return LaurentPolynomial(self.coefficients * scalar)

    __rmul__ = __mul__

    def to_json(self):
        return json.dumps(
            {
                "degree": self.max_degree,
                "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            }
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        c = np.array([complex(re, im) for re, im in data["coefficients"]])
        if c.shape[0] != 2 * data["degree"] + 1:
            raise InvalidInputError("degree does not match coefficient count")
        return cls(c)


def evaluate_laurent(p, z, check=True):
    """``sum_j beta_j z^j`` at unimodular ``z`` (scalar or array)."""
    z_arr = np.asarray(z, dtype=np.complex128)
    if check and np.any(np.abs(np.abs(z_arr) - 1.0) > UNIT_TOL):
        raise InvalidInputError("evaluation point off the unit circle")
    out = kernels.laurent_horner(p.coefficients, z_arr.ravel()).reshape(z_arr.shape)
    return complex(out) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class NodeSet:
    """The ``4d`` roots of unity used by the averaged interpolant."""

    d: int

    def __post_init__(self):
        _check_power_of_two(self.d)

    @property
    def d1(self):
        return 4 * self.d

    @property
    def angles(self):
        return 2 * np.pi * np.arange(self.d1) / self.d1

    @property
    def nodes(self):
        return roots_of_unity(self.d1)

    @property
    def abscissas(self):
        return self.nodes.real


def reconstruct_laurent(samples, d, d1):
    """Degree ``d`` Laurent polynomial through samples at the ``d1``-th roots of unity.

    ``beta_j = (sum_k f(z_k) z_k^{-j}) / d1``, one FFT of length ``d1``.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape != (d1,):
        raise InvalidInputError(f"expected {d1} samples, got shape {samples.shape}")
    if d1 <= 2 * d:
        raise AliasingError(f"need d1 > 2d, got d1={d1}, d={d}")
    F = np.fft.fft(samples) / d1
    js = np.arange(-d, d + 1)
    return LaurentPolynomial(F[js % d1])


def triangular_weights(d):
    """``c_r`` for ``r = -(3d-1) .. 3d-1``."""
    r = np.abs(np.arange(-(3 * d - 1), 3 * d))
    return np.where(r <= d, 1.0, (3 * d - r) / (2 * d))


def averaged_interpolant_from_samples(samples, d):
    d = _check_power_of_two(d)
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape != (4 * d,):
        raise InvalidInputError(f"expected {4 * d} node samples")
    F = np.fft.fft(samples) / (4 * d)
    rs = np.arange(-(3 * d - 1), 3 * d)
    return LaurentPolynomial(triangular_weights(d) * F[rs % (4 * d)])


def averaged_interpolant_fd(f, d):
    """The degree ``3d - 1`` averaged interpolant of ``f`` at the ``4d`` nodes."""
    d = _check_power_of_two(d)
    return averaged_interpolant_from_samples(f(NodeSet(d).nodes), d)


@dataclass(frozen=True)
class ChebyshevPolynomial:
    """``sum_r coefficients[r] T_r(x)``."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", np.asarray(self.coefficients, dtype=np.complex128)
        )

    @property
    def degree(self):
        return self.coefficients.shape[0] - 1

    def __call__(self, x):
        """Clenshaw evaluation."""
        x_arr = np.asarray(x, dtype=np.float64)
        out = kernels.clenshaw(self.coefficients, x_arr.ravel()).reshape(x_arr.shape)
        return complex(out) if np.ndim(x) == 0 else out

    def evaluate_direct(self, x):
        """``sum beta_r T_r(x)`` with ``T_r`` from the three-term recursion."""
        x = np.asarray(x, dtype=np.float64)
        total = np.zeros(x.shape, dtype=np.complex128)
        t_prev, t_cur = np.ones_like(x), x.copy()
        for r, beta in enumerate(self.coefficients):
            if r == 0:
                total += beta * t_prev
            elif r == 1:
                total += beta * t_cur
            else:
                t_prev, t_cur = t_cur, 2 * x * t_cur - t_prev
                total += beta * t_cur
        return total


def _chebyshev_table(x, degree):
    """Rows ``T_0(x) .. T_degree(x)`` by recursion."""
    T = np.empty((degree + 1, x.shape[0]))
    T[0] = 1.0
    if degree >= 1:
        T[1] = x
    for r in range(2, degree + 1):
        T[r] = 2 * x * T[r - 1] - T[r - 2]
    return T


def chebyshev_form_gd(g, d):
    """Chebyshev coefficients of ``g_d(cos theta) = f_d(e^{i theta})``.

    Node sums ``sum_k g(x_k) T_r(x_k)`` are taken directly (no FFT), so this
    path is independent of ``averaged_interpolant_fd``.
    """
    d = _check_power_of_two(d)
    x = NodeSet(d).abscissas
    gx = g(x)
    T = _chebyshev_table(x, 3 * d - 1)
    sums = T @ gx
    beta = np.empty(3 * d, dtype=np.complex128)
    beta[0] = sums[0] / (4 * d)
    r = np.arange(1, 3 * d)
    weight = np.where(r <= d, 2.0 / (4 * d), 2.0 * (3 * d - r) / (8 * d * d))
    beta[1:] = weight * sums[1:]
    return ChebyshevPolynomial(beta)


def consistency_fd_gd(g, d, grid=None):
    """``max_theta |f_d(e^{i theta}) - g_d(cos theta)|`` on the grid."""
    grid = SupNormGrid(d=d) if grid is None else grid
    fd = averaged_interpolant_fd(lift_interval_function(g), d)
    gd = chebyshev_form_gd(g, d)
    theta = grid.angles
    lhs = evaluate_laurent(fd, np.exp(1j * theta), check=False)
    rhs = gd(np.cos(theta))
    return float(np.max(np.abs(lhs - rhs)))
