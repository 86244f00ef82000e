import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interp_qsp.analysis import fourier_truncation_upper_bound
from interp_qsp.errors import AliasingError, InvalidInputError
from interp_qsp.functions import (
    IntervalFunction,
    SupNormGrid,
    UnitCircleFunction,
    catalog_function,
    catalog_interval_function,
    laurent_function,
    lift_interval_function,
    random_laurent_coefficients,
    sup_norm_difference,
)
from interp_qsp.interpolation import (
    ChebyshevPolynomial,
    LaurentPolynomial,
    NodeSet,
    averaged_interpolant_fd,
    chebyshev_form_gd,
    consistency_fd_gd,
    evaluate_laurent,
    reconstruct_laurent,
    triangular_weights,
)

from oracles import naive_fd, naive_laurent

GOLDEN = Path(__file__).parent / "golden"
NEAR_BEST = 1 + np.sqrt(2)
powers_of_two = st.sampled_from([1, 2, 4, 8, 16])
seeds = st.integers(0, 2**32 - 1)

INTERVAL_CATALOG = [
    ("exp_it_cos", {"t": 5.0}),
    ("abs_power_c", {"c": 0.5}),
    ("sign_smooth", {"kappa": 10.0}),
    ("gibbs", {"beta": 1.0}),
    ("inverse_capped", {"kappa": 10.0}),
    ("monomial_k", {"k": 3}),
]


def poly_samples(coeffs, d1):
    return naive_laurent(coeffs, np.exp(2j * np.pi * np.arange(d1) / d1))


# reconstruction from samples

def test_reconstruct_constant():
    p = reconstruct_laurent(np.ones(8), 2, 8)
    np.testing.assert_allclose(p.coefficients, [0, 0, 1, 0, 0], atol=1e-15)


def test_reconstruct_symmetric_pair():
    p = reconstruct_laurent(poly_samples(np.array([1, 0, 1]), 8), 1, 8)
    np.testing.assert_allclose(p.coefficients, [1, 0, 1], atol=1e-15)


def test_reconstruct_random_degree_three(rng):
    coeffs = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    p = reconstruct_laurent(poly_samples(coeffs, 16), 3, 16)
    np.testing.assert_allclose(p.coefficients, coeffs, atol=1e-12)


def test_reconstruct_aliasing():
    with pytest.raises(AliasingError):
        reconstruct_laurent(np.ones(6), 3, 6)


# averaged interpolant

@pytest.mark.parametrize("d", [1, 2, 4, 16])
def test_fd_of_z_is_z(d):
    p = averaged_interpolant_fd(UnitCircleFunction(lambda z: z, "z"), d)
    expected = np.zeros(6 * d - 1)
    expected[3 * d] = 1.0
    np.testing.assert_allclose(p.coefficients, expected, atol=1e-14)


def test_fd_rejects_non_power_of_two():
    with pytest.raises(InvalidInputError):
        averaged_interpolant_fd(catalog_function("gibbs"), 6)


@pytest.mark.parametrize("d", [1, 2, 4])
def test_fd_matches_triple_sum(d):
    f = catalog_function("abs_power_c", {"c": 1.5})
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 41))
    np.testing.assert_allclose(averaged_interpolant_fd(f, d)(z), naive_fd(f, d, z), atol=1e-12)


def test_fd_exp_near_best_bound():
    f = catalog_function("exp_it_cos", {"t": 5.0})
    err = sup_norm_difference(f, averaged_interpolant_fd(f, 16), SupNormGrid(d=16))
    assert err <= NEAR_BEST * fourier_truncation_upper_bound(f, 16).upper


@settings(max_examples=30, deadline=None)
@given(d=powers_of_two, seed=seeds)
def test_fd_reproduces_degree_d_polynomials(d, seed):
    coeffs = random_laurent_coefficients(d, np.random.default_rng(seed), grid_points=1024)
    f = laurent_function(coeffs)
    assert sup_norm_difference(f, averaged_interpolant_fd(f, d), SupNormGrid(4096, d=d)) <= 1e-11


@pytest.mark.parametrize("name,params", INTERVAL_CATALOG)
@pytest.mark.parametrize("d", [4, 16])
def test_fd_near_best_on_catalog(name, params, d):
    f = catalog_function(name, params)
    err = sup_norm_difference(f, averaged_interpolant_fd(f, d), SupNormGrid(d=d))
    assert err <= NEAR_BEST * fourier_truncation_upper_bound(f, d).upper + 1e-12


@pytest.mark.parametrize("name,params", INTERVAL_CATALOG)
def test_fd_reflection_symmetric_for_lifts(name, params):
    c = averaged_interpolant_fd(catalog_function(name, params), 8).coefficients
    np.testing.assert_allclose(c, c[::-1], atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(d=powers_of_two, seed=seeds)
def test_fd_degree_cap(d, seed):
    coeffs = np.random.default_rng(seed).standard_normal(41)
    f = laurent_function(coeffs)
    p = averaged_interpolant_fd(f, d)
    assert p.max_degree == 3 * d - 1
    wide = p.padded(3 * d + 4).coefficients
    assert np.all(np.abs(wide[: 5]) <= 1e-13) and np.all(np.abs(wide[-5:]) <= 1e-13)


@settings(max_examples=20, deadline=None)
@given(d=powers_of_two, a=st.complex_numbers(max_magnitude=3), b=st.complex_numbers(max_magnitude=3))
def test_fd_linear(d, a, b):
    f = catalog_function("gibbs", {"beta": 1.0})
    h = catalog_function("sign_smooth", {"kappa": 4.0})
    combo = UnitCircleFunction(lambda z: a * f(z) + b * h(z), "combo")
    lhs = averaged_interpolant_fd(combo, d).coefficients
    rhs = a * averaged_interpolant_fd(f, d).coefficients + b * averaged_interpolant_fd(h, d).coefficients
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_triangular_weights_shape():
    w = triangular_weights(4)
    assert w.shape == (23,)
    assert w[11] == 1.0 and w[0] == pytest.approx(1 / 8)
    np.testing.assert_allclose(w, w[::-1])


def test_nodes_are_roots_of_unity():
    nodes = NodeSet(4).nodes
    np.testing.assert_allclose(nodes**16, 1, atol=1e-13)
    np.testing.assert_allclose(NodeSet(4).abscissas, nodes.real)


# evaluation

def test_evaluate_constant_and_monomial():
    assert evaluate_laurent(LaurentPolynomial.from_dict({0: 1}), np.exp(0.7j)) == pytest.approx(1)
    assert evaluate_laurent(LaurentPolynomial.from_dict({1: 1}), 1j) == pytest.approx(1j, abs=1e-15)


def test_evaluate_matches_term_sum(rng):
    coeffs = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    z = np.exp(0.3j)
    assert abs(evaluate_laurent(LaurentPolynomial(coeffs), z) - naive_laurent(coeffs, z)) <= 1e-13


def test_evaluate_off_circle():
    with pytest.raises(InvalidInputError):
        evaluate_laurent(LaurentPolynomial.from_dict({1: 1}), 1.01)


def test_laurent_degree_and_arithmetic():
    p = LaurentPolynomial.from_dict({-2: 1e-20, 1: 2.0})
    q = LaurentPolynomial.from_dict({0: 1.0})
    assert p.degree == 1 and p.max_degree == 2
    s = p + 2 * q
    assert s.coefficient(0) == 2 and s.coefficient(1) == 2 and s.coefficient(5) == 0


def test_json_round_trip(rng):
    p = LaurentPolynomial(rng.standard_normal(9) + 1j * rng.standard_normal(9))
    q = LaurentPolynomial.from_json(p.to_json())
    np.testing.assert_array_equal(p.coefficients, q.coefficients)


def test_json_rejects_bad_degree():
    with pytest.raises(InvalidInputError):
        LaurentPolynomial.from_json(json.dumps({"degree": 2, "coefficients": [[1, 0]]}))


def test_golden_fd_exp_it_cos():
    frozen = LaurentPolynomial.from_json((GOLDEN / "fd_exp_it_cos_t2_d4.json").read_text())
    p = averaged_interpolant_fd(catalog_function("exp_it_cos", {"t": 2.0}), 4)
    np.testing.assert_allclose(p.coefficients, frozen.coefficients, atol=1e-14)


# Chebyshev form

def test_chebyshev_constant():
    beta = chebyshev_form_gd(IntervalFunction(lambda x: np.ones_like(x) + 0j, "1"), 4).coefficients
    np.testing.assert_allclose(beta, np.eye(12)[0], atol=1e-12)


def test_chebyshev_identity():
    beta = chebyshev_form_gd(IntervalFunction(lambda x: x + 0j, "x"), 4).coefficients
    np.testing.assert_allclose(beta, np.eye(12)[1], atol=1e-12)


def test_chebyshev_square():
    x = NodeSet(4).abscissas
    t2 = 2 * x**2 - 1
    beta_2_brute = 2 / 16 * np.sum(x**2 * t2)
    beta = chebyshev_form_gd(IntervalFunction(lambda x: x**2 + 0j, "x^2"), 4).coefficients
    assert beta_2_brute == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(beta, 0.5 * (np.eye(12)[0] + np.eye(12)[2]), atol=1e-12)


def test_clenshaw_matches_direct(rng):
    p = ChebyshevPolynomial(rng.standard_normal(20) + 1j * rng.standard_normal(20))
    x = np.linspace(-1, 1, 101)
    np.testing.assert_allclose(p(x), p.evaluate_direct(x), atol=1e-12)


def test_consistency_identity():
    assert consistency_fd_gd(IntervalFunction(lambda x: x + 0j, "x"), 2) <= 1e-12


def test_consistency_exp():
    assert consistency_fd_gd(IntervalFunction(lambda x: np.exp(3j * x), "e"), 8) <= 1e-10


@pytest.mark.parametrize("name,params", INTERVAL_CATALOG)
@pytest.mark.parametrize("d", [2, 8, 32])
def test_consistency_catalog(name, params, d):
    assert consistency_fd_gd(catalog_interval_function(name, params), d) <= 1e-10


def test_lifted_fd_agrees_with_chebyshev_form_pointwise():
    g = catalog_interval_function("abs_power_c", {"c": 1.5})
    theta = np.linspace(0, np.pi, 7)
    fd = averaged_interpolant_fd(lift_interval_function(g), 4)
    np.testing.assert_allclose(fd(np.exp(1j * theta)), chebyshev_form_gd(g, 4)(np.cos(theta)), atol=1e-12)
