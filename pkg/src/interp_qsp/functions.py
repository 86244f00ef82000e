"""Functions on the unit circle and on [-1, 1], plus the built-in catalog.

Evaluators are vectorized: they take numpy arrays (complex ``z`` on the
circle, or real ``x`` in [-1, 1]) and return complex arrays of the same
shape. Sup norms are grid maxima, hence lower bounds on the true sup norm.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import InvalidInputError, UnknownFunctionError

DEFAULT_GRID_POINTS = 2**14


@dataclass(frozen=True)
class UnitCircleFunction:
    """``f : S^1 -> C`` with ``|f| <= declared_sup_bound``.

    ``theta_derivatives[r]`` (optional) evaluates the ``r``-th derivative of
    ``theta -> f(exp(i theta))``; index 0 is unused.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str
    declared_sup_bound: float = 1.0
    theta_derivatives: tuple = ()
    params: dict = field(default_factory=dict)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return np.asarray(self.evaluator(z), dtype=np.complex128)

    def on_angles(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=np.float64)))

    def theta_derivative(self, r):
        if r == 0:
            return self.on_angles
        if r < len(self.theta_derivatives) and self.theta_derivatives[r] is not None:
            return self.theta_derivatives[r]
        return None


@dataclass(frozen=True)
class IntervalFunction:
    """``g : [-1, 1] -> C`` with ``|g| <= 1``.

    ``parity`` is 0 (even), 1 (odd) or ``None``. ``derivatives`` holds
    optional closed forms for ``g'`` and ``g''``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str
    parity: Optional[int] = None
    derivatives: tuple = ()
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.asarray(self.evaluator(x), dtype=np.complex128)


def lift_interval_function(g):
    """The circle function ``f(exp(i theta)) = g(cos theta)``.

    ``cos theta`` is taken as ``Re z``, so ``f(z) == f(conj z)`` holds
    bit-for-bit.
    """

    def evaluator(z):
        return g(np.clip(z.real, -1.0, 1.0))

    derivs = [None]
    if len(g.derivatives) >= 1:
        g1 = g.derivatives[0]
        derivs.append(lambda th: -np.sin(th) * g1(np.cos(th)))
        if len(g.derivatives) >= 2:
            g2 = g.derivatives[1]
            derivs.append(
                lambda th: np.sin(th) ** 2 * g2(np.cos(th)) - np.cos(th) * g1(np.cos(th))
            )
    return UnitCircleFunction(
        evaluator=evaluator,
        name=g.name,
        declared_sup_bound=1.0,
        theta_derivatives=tuple(derivs),
        params=dict(g.params),
    )


class SupNormGrid:
    """Uniform angles on ``[0, 2pi)`` merged with the ``4d`` interpolation nodes."""

    def __init__(self, point_count=DEFAULT_GRID_POINTS, d=None):
        if point_count < 1:
            raise InvalidInputError("grid needs at least one point")
        self.point_count = int(point_count)
        self.d = d
        angles = 2 * np.pi * np.arange(self.point_count) / self.point_count
        if d is not None:
            nodes = 2 * np.pi * np.arange(4 * d) / (4 * d)
            angles = np.union1d(angles, nodes)
        self.angles = angles

    @property
    def points(self):
        return np.exp(1j * self.angles)

    def refined(self):
        return SupNormGrid(2 * self.point_count, self.d)

    def __len__(self):
        return self.angles.shape[0]


def sup_norm_difference(f1, f2, grid=None):
    """``max |f1 - f2|`` over the grid (a lower bound on the sup norm)."""
    grid = SupNormGrid() if grid is None else grid
    if len(grid) == 0:
        raise InvalidInputError("empty grid")
    z = grid.points
    return float(np.max(np.abs(f1(z) - f2(z))))


def sup_norm_refinement_check(f1, f2, grid=None, rel_tol=0.01, abs_floor=1e-12):
    """Grid sup norm on ``grid`` and on its doubling; stable if they agree to 1%."""
    grid = SupNormGrid() if grid is None else grid
    coarse = sup_norm_difference(f1, f2, grid)
    fine = sup_norm_difference(f1, f2, grid.refined())
    stable = abs(fine - coarse) <= max(rel_tol * fine, abs_floor)
    return coarse, fine, stable


def modulus_of_continuity(ftilde, delta, resolution=1e-4, domain=(0.0, 2 * np.pi)):
    """``sup |ftilde(x1) - ftilde(x2)|`` over sampled pairs with ``|x1 - x2| <= delta``.

    Samples lie on a fixed lattice of spacing ``resolution`` covering
    ``[domain[0], domain[1] + delta]``; for a ``2 pi``-periodic function this
    covers every pair on the real line. The lattice does not depend on
    ``delta``, so the result is nondecreasing in ``delta``.
    """
    if not delta > 0:
        raise InvalidInputError("delta must be positive")
    if not resolution > 0:
        raise InvalidInputError("resolution must be positive")
    lo, hi = domain
    count = int(np.floor((hi + delta - lo) / resolution + 1e-9)) + 1
    x = lo + resolution * np.arange(count)
    samples = np.asarray(ftilde(x), dtype=np.complex128)
    max_lag = int(np.floor(delta / resolution + 1e-9))
    return kernels.max_lagged_difference(samples, max_lag)


# ---------------------------------------------------------------------------
# catalog


def _exp_it_cos(t=1.0):
    t = float(t)
    return IntervalFunction(
        lambda x: np.exp(1j * t * x),
        "exp_it_cos",
        derivatives=(lambda x: 1j * t * np.exp(1j * t * x), lambda x: -(t**2) * np.exp(1j * t * x)),
        params={"t": t},
    )


def _abs_power_c(c=0.5):
    c = float(c)

    def g1(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = c * np.abs(x) ** (c - 1) * np.sign(x)
        return np.where(x == 0, 0.0 if c > 1 else np.inf, out)

    def g2(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = c * (c - 1) * np.abs(x) ** (c - 2)
        return np.where(x == 0, 0.0 if c > 2 else np.inf, out)

    return IntervalFunction(
        lambda x: np.abs(x) ** c + 0j, "abs_power_c", parity=0, derivatives=(g1, g2), params={"c": c}
    )


def _sign_smooth(kappa=10.0):
    kappa = float(kappa)
    return IntervalFunction(
        lambda x: np.tanh(kappa * x) + 0j,
        "sign_smooth",
        parity=1,
        derivatives=(lambda x: kappa / np.cosh(kappa * x) ** 2 + 0j,),
        params={"kappa": kappa},
    )


def _gibbs(beta=1.0):
    beta = float(beta)
    # normalized so the maximum, at x = -1, is exactly 1
    return IntervalFunction(
        lambda x: np.exp(-beta * (x + 1.0)) + 0j,
        "gibbs",
        derivatives=(lambda x: -beta * np.exp(-beta * (x + 1.0)) + 0j,),
        params={"beta": beta},
    )


def _inverse_capped(kappa=10.0):
    kappa = float(kappa)
    a = 1.0 / kappa

    return IntervalFunction(
        lambda x: 2 * a * x / (x**2 + a**2) + 0j,
        "inverse_capped",
        parity=1,
        derivatives=(lambda x: 2 * a * (a**2 - x**2) / (x**2 + a**2) ** 2 + 0j,),
        params={"kappa": kappa},
    )


def _monomial_k(k=3):
    k = int(k)
    derivs = (lambda x: k * x ** max(k - 1, 0) + 0j if k >= 1 else 0 * x + 0j,)
    return IntervalFunction(
        lambda x: x**k + 0j, "monomial_k", parity=k % 2, derivatives=derivs, params={"k": k}
    )


def random_laurent_coefficients(degree, rng, grid_points=DEFAULT_GRID_POINTS):
    """Random complex coefficients ``beta_{-D..D}`` with grid sup norm below 1."""
    coeffs = rng.standard_normal(2 * degree + 1) + 1j * rng.standard_normal(2 * degree + 1)
    z = np.exp(2j * np.pi * np.arange(grid_points) / grid_points)
    peak = np.max(np.abs(kernels.laurent_horner(coeffs, z)))
    return coeffs / (peak * 1.0000001)


def laurent_function(coeffs, name="laurent"):
    """Circle function for the Laurent polynomial with coefficients ``beta_{-D..D}``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    degree = (coeffs.shape[0] - 1) // 2
    js = np.arange(-degree, degree + 1)

    def deriv(r):
        scaled = coeffs * (1j * js) ** r
        return lambda th: kernels.laurent_horner(scaled, np.exp(1j * np.asarray(th)))

    return UnitCircleFunction(
        lambda z: kernels.laurent_horner(coeffs, z),
        name,
        theta_derivatives=(None, deriv(1), deriv(2)),
        params={"degree": degree},
    )


def _laurent_test(degree=3, seed=0):
    degree, seed = int(degree), int(seed)
    coeffs = random_laurent_coefficients(degree, np.random.default_rng(seed))
    f = laurent_function(coeffs, "laurent_test")
    return UnitCircleFunction(
        f.evaluator,
        "laurent_test",
        theta_derivatives=f.theta_derivatives,
        params={"degree": degree, "seed": seed},
    )


_INTERVAL_CATALOG = {
    "exp_it_cos": (_exp_it_cos, {"t": 1.0}),
    "abs_power_c": (_abs_power_c, {"c": 0.5}),
    "sign_smooth": (_sign_smooth, {"kappa": 10.0}),
    "gibbs": (_gibbs, {"beta": 1.0}),
    "inverse_capped": (_inverse_capped, {"kappa": 10.0}),
    "monomial_k": (_monomial_k, {"k": 3}),
}
_CIRCLE_CATALOG = {
    "laurent_test": (_laurent_test, {"degree": 3, "seed": 0}),
}

CATALOG_NAMES = tuple(_INTERVAL_CATALOG) + tuple(_CIRCLE_CATALOG)


def _coerce_params(name, defaults, params):
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise InvalidInputError(f"{name}: unknown parameter(s) {sorted(unknown)}")
    out = dict(defaults)
    for key, value in params.items():
        kind = type(defaults[key])
        try:
            out[key] = kind(float(value)) if kind is int else kind(value)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"{name}: bad value for {key}: {value!r}") from exc
        if kind is int and float(value) != out[key]:
            raise InvalidInputError(f"{name}: {key} must be an integer")
    return out


def is_interval_function(name):
    if name not in CATALOG_NAMES:
        raise UnknownFunctionError(f"unknown function {name!r}")
    return name in _INTERVAL_CATALOG


def catalog_interval_function(name, params=None):
    """Catalog entry as an ``IntervalFunction``; circle-only entries raise."""
    if name in _CIRCLE_CATALOG:
        raise InvalidInputError(f"{name} is defined on the unit circle only")
    if name not in _INTERVAL_CATALOG:
        raise UnknownFunctionError(f"unknown function {name!r}")
    builder, defaults = _INTERVAL_CATALOG[name]
    return builder(**_coerce_params(name, defaults, params))


def catalog_function(name, params=None):
    """Catalog entry as a ``UnitCircleFunction`` (interval entries are lifted)."""
    if name in _CIRCLE_CATALOG:
        builder, defaults = _CIRCLE_CATALOG[name]
        return builder(**_coerce_params(name, defaults, params))
    return lift_interval_function(catalog_interval_function(name, params))


def grid_sup(f, grid=None):
    grid = SupNormGrid() if grid is None else grid
    return float(np.max(np.abs(f(grid.points))))
