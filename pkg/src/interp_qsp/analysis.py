"""Approximation-theory instrumentation.

The best approximation error ``E_d(f)`` is never computed. In its place
``UB_d(f)``, the grid sup of the degree-``d`` Fourier truncation remainder,
is used; ``E_d(f) <= UB_d(f)`` since the truncation is one admissible
degree-``d`` Laurent polynomial.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, InvalidInputError, OutOfRegimeError, PreconditionError
from .functions import SupNormGrid, modulus_of_continuity, sup_norm_difference
from .interpolation import LaurentPolynomial, averaged_interpolant_fd, evaluate_laurent

SQRT2 = math.sqrt(2.0)
NEAR_BEST_FACTOR = 1 + SQRT2
DEFAULT_FFT_POINTS = 2**14


@dataclass(frozen=True)
class BestErrorBound:
    d: int
    upper: float
    method: str = "fourier-truncation"


def _fft_points(d, grid_points):
    n = grid_points
    if n is None:
        n = DEFAULT_FFT_POINTS
        while n < 16 * 3 * d:
            n *= 2
    if n < 16 * 3 * d:
        raise AliasingError(f"grid of {n} points is too small for degree {d}")
    return n


def fourier_coefficients(f, grid_points):
    """Discrete Fourier coefficients ``c_j`` of ``theta -> f(e^{i theta})``, index ``j mod N``."""
    theta = 2 * np.pi * np.arange(grid_points) / grid_points
    samples = f.on_angles(theta)
    return samples, np.fft.fft(samples) / grid_points


def fourier_truncation(f, degree, grid_points=None):
    """Degree-``degree`` Fourier truncation of ``f`` as a ``LaurentPolynomial``."""
    n = _fft_points(degree, grid_points)
    _, c = fourier_coefficients(f, n)
    js = np.arange(-degree, degree + 1)
    return LaurentPolynomial(c[js % n])


def fourier_truncation_upper_bound(f, d, grid_points=None):
    """``UB_d(f)``: grid sup of ``f`` minus its degree-``d`` Fourier truncation."""
    n = _fft_points(d, grid_points)
    samples, c = fourier_coefficients(f, n)
    keep = np.zeros(n, dtype=bool)
    keep[np.arange(-d, d + 1) % n] = True
    truncated = np.fft.ifft(np.where(keep, c, 0.0)) * n
    return BestErrorBound(int(d), float(np.max(np.abs(samples - truncated))))


def interpolant_error(f, d, grid=None):
    """``|| f - f_d ||`` on the grid (default: ``2^14`` points plus the nodes)."""
    grid = SupNormGrid(d=d) if grid is None else grid
    fd = averaged_interpolant_fd(f, d)
    return sup_norm_difference(f, lambda z: evaluate_laurent(fd, z, check=False), grid)


# -- Akhiezer-Krein-Favard constants ------------------------------------------


def _alternating_sum(term, n=40):
    """``sum_{k>=0} (-1)^k term(k)`` for completely monotone terms.

    Cohen-Villegas-Zagier acceleration; the error is at most
    ``2 term(0) / (3 + sqrt 8)^n``.
    """
    e = (3 + math.sqrt(8)) ** n
    e = (e + 1 / e) / 2
    b, c, s = -1.0, -e, 0.0
    for k in range(n):
        c = b - c
        s += c * term(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1))
    return s / e


def akf_constant(r):
    """``C(r) = (4/pi) sum_k (-1)^{k(r+1)} / (2k+1)^{r+1}``.

    Even ``r`` gives an alternating series; odd ``r`` a positive one, which
    is summed through the Dirichlet eta function,
    ``sum 1/(2k+1)^s = (1 - 2^-s) / (1 - 2^(1-s)) * eta(s)``.
    """
    if not isinstance(r, (int, np.integer)) or r < 0:
        raise InvalidInputError("r must be a nonnegative integer")
    s = r + 1
    if r % 2 == 0:
        total = _alternating_sum(lambda k: (2 * k + 1.0) ** -s)
    else:
        eta = _alternating_sum(lambda k: (k + 1.0) ** -s)
        total = (1 - 2.0**-s) / (1 - 2.0 ** (1 - s)) * eta
    return 4 / math.pi * total


@dataclass(frozen=True)
class JacksonBound:
    r: int
    d: int
    C_r: float
    omega: float

    @property
    def value(self):
        return self.C_r * self.omega / self.d**self.r


def central_difference(ftilde, r, step=1e-5):
    """``r``-th derivative of ``ftilde`` by a central difference of step ``step``."""
    coeffs = [(-1) ** i * math.comb(r, i) for i in range(r + 1)]

    def deriv(theta):
        theta = np.asarray(theta, dtype=np.float64)
        acc = np.zeros(theta.shape, dtype=np.complex128)
        for i, w in enumerate(coeffs):
            acc += w * ftilde(theta + (r / 2 - i) * step)
        return acc / step**r

    return deriv


def jackson_bound(f, r, d, derivative=None, resolution=None):
    """``C(r) omega(1/d, ftilde^(r)) / d^r``.

    The derivative comes from ``derivative``, else the function's closed
    form, else central differences with step ``1e-5``.
    """
    if d < 1:
        raise InvalidInputError("d must be positive")
    if derivative is None:
        derivative = f.theta_derivative(r)
    if derivative is None:
        derivative = central_difference(f.on_angles, r)
    delta = 1.0 / d
    resolution = delta / 64 if resolution is None else resolution
    omega = modulus_of_continuity(derivative, delta, resolution)
    return JacksonBound(int(r), int(d), akf_constant(r), float(omega))


# -- scaling experiments ------------------------------------------------------


def fit_loglog_slope(d_values, errors, octaves=4, floor=1e-12):
    """Least-squares slope of ``log err`` vs ``log d`` over the top ``octaves`` of ``d``.

    Points with error below ``floor`` are dropped.
    """
    d = np.asarray(d_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    mask = (d >= d.max() / 2**octaves) & (e >= floor)
    if mask.sum() < 2:
        raise InvalidInputError("need at least two points above the floor to fit")
    slope, intercept = np.polyfit(np.log(d[mask]), np.log(e[mask]), 1)
    return float(slope), float(intercept), d[mask].astype(int).tolist()


@dataclass(frozen=True)
class ScalingFit:
    c: float
    d_values: list
    errors: list
    slope: float
    intercept: float
    fit_d: list = field(default_factory=list)

    @property
    def passes(self):
        return self.slope <= -self.c + 0.3


def abs_power_scaling_experiment(c, d_values, grid_points=2**15):
    """Measure ``|| f - f_d ||`` for ``f = |cos theta|^c`` and fit the log-log slope."""
    from .functions import catalog_function

    c = float(c)
    if c <= 0 or c == int(c):
        raise PreconditionError("c must be a positive non-integer")
    d_values = sorted(int(d) for d in d_values)
    if len(d_values) < 2:
        raise InvalidInputError("need at least two values of d")
    f = catalog_function("abs_power_c", {"c": c})
    errors = [interpolant_error(f, d, SupNormGrid(grid_points, d)) for d in d_values]
    slope, intercept, fit_d = fit_loglog_slope(d_values, errors)
    return ScalingFit(c, d_values, errors, slope, intercept, fit_d)


def hamiltonian_simulation_budget(t, d):
    """``(1 + sqrt 2) (5/4) (e |t| / 2d)^d``, valid for ``d >= |t| - 1``."""
    t = abs(float(t))
    if d < 1:
        raise InvalidInputError("d must be positive")
    if d < t - 1:
        raise OutOfRegimeError(f"bound needs d >= |t| - 1 (d={d}, t={t})")
    return NEAR_BEST_FACTOR * 1.25 * (math.e * t / (2 * d)) ** d


@dataclass(frozen=True)
class ApproxRow:
    d: int
    interp_error: float
    ub: float
    budget: float
    ratio: float
    chebyshev_truncation_error: float


RATIO_FLOOR = 1e-9


def approx_table(f, d_list, grid_points=2**14):
    """Rows of ``||f - f_d||``, ``UB_d``, ``(1+sqrt2) UB_d``, their ratio, and the
    sup error of the degree ``3d - 1`` Fourier (for lifted ``f``: Chebyshev) truncation.

    The ratio's denominator is floored at ``1e-9`` so exact-regime rows stay finite.
    """
    rows = []
    for d in d_list:
        grid = SupNormGrid(grid_points, d)
        err = interpolant_error(f, d, grid)
        ub = fourier_truncation_upper_bound(f, d).upper
        budget = NEAR_BEST_FACTOR * ub
        trunc = fourier_truncation_upper_bound(f, 3 * d - 1).upper
        rows.append(ApproxRow(d, err, ub, budget, err / max(budget, RATIO_FLOOR), trunc))
    return rows
