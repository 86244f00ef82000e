import json

import numpy as np
import pytest

from interp_qsp.analysis import fourier_truncation_upper_bound
from interp_qsp.encoding import build_diagonal_encoding
from interp_qsp.errors import InvalidInputError
from interp_qsp.functions import (
    UnitCircleFunction,
    catalog_function,
    laurent_function,
    random_laurent_coefficients,
)
from interp_qsp.interpolation import averaged_interpolant_fd
from interp_qsp.numerics import (
    dagger,
    hermitian_expm,
    is_unitary,
    matrix_function_oracle,
    operator_norm,
    random_hermitian,
    random_unitary,
)
from interp_qsp.qsp import (
    SQRT2,
    assemble_sqrt_d1_encoding,
    assemble_qsp_block_encoding,
    assemble_qsp_circuit,
    build_indexed_power,
    build_qft,
    build_shift_spectrum_operator,
    circuit_structure_report,
    gates_matrix,
    plus_state,
    prep_gates,
)

from oracles import qft_from_gates, textbook_qpe

Z = np.diag([1.0, -1.0]).astype(complex)


def m_of(d):
    return d.bit_length() - 1


# indexed powers

def test_indexed_power_identity():
    wu = build_indexed_power(np.eye(2), 8)
    np.testing.assert_allclose(wu.matrix, np.eye(16), atol=1e-15)


def test_indexed_power_of_z():
    wu = build_indexed_power(Z, 4)
    for j, block in enumerate(wu.powers):
        np.testing.assert_allclose(block, Z if j % 2 else np.eye(2), atol=1e-15)
    assert wu.ledger.cU_uses == 3


def test_indexed_power_block_five(rng):
    U = random_unitary(4, rng)
    wu = build_indexed_power(U, 8)
    np.testing.assert_allclose(wu.powers[5], np.linalg.matrix_power(U, 5), atol=1e-11)
    W = wu.matrix
    assert is_unitary(W)
    # signal (x) index ordering: block j sits at rows/cols a*d1 + j
    np.testing.assert_allclose(W[5::8, 5::8], wu.powers[5], atol=1e-15)
    assert np.all(W[5::8, 4::8] == 0)


def test_indexed_power_rejects_non_unitary():
    with pytest.raises(InvalidInputError):
        build_indexed_power(np.diag([1.0, 0.5]), 4)


# QFT and the shift operator

def test_qft_one_qubit():
    np.testing.assert_allclose(build_qft(1), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_qft_unitary_and_gate_network(n):
    F = build_qft(n)
    assert operator_norm(F @ dagger(F) - np.eye(1 << n)) <= 1e-11
    np.testing.assert_allclose(F, qft_from_gates(n), atol=1e-12)
    np.testing.assert_allclose(F[:, 0], plus_state(1 << n), atol=1e-15)


@pytest.mark.parametrize("d1", [4, 8, 16])
def test_shift_operator(d1):
    V = build_shift_spectrum_operator(d1)
    Vq = build_shift_spectrum_operator(d1, method="qft")
    assert operator_norm(V - Vq) <= 1e-11
    shift = np.roll(np.eye(d1), -1, axis=0)  # |j> -> |j-1>
    assert np.max(np.abs(V - shift)) <= 1e-12
    assert operator_norm(np.linalg.matrix_power(V, d1) - np.eye(d1)) <= 1e-10
    phi0 = plus_state(d1)
    assert np.vdot(phi0, V @ phi0) == pytest.approx(1.0, abs=1e-14)


def test_shift_operator_bad_method():
    with pytest.raises(InvalidInputError):
        build_shift_spectrum_operator(4, method="taylor")


# preparation networks

@pytest.mark.parametrize("n", [3, 4, 5])
def test_prep_networks(n):
    d1 = 1 << n
    d = d1 // 4
    P4 = gates_matrix(prep_gates(n, False), n)
    P2 = gates_matrix(prep_gates(n, True), n)
    np.testing.assert_allclose(P4[:, 0], plus_state(d1), atol=1e-14)
    np.testing.assert_allclose(P2[:, 0], plus_state(d1, d, 3 * d), atol=1e-14)
    assert is_unitary(P2)


# full circuit

def test_identity_function_gives_u(rng):
    U = random_unitary(2, rng)
    enc = build_diagonal_encoding(UnitCircleFunction(lambda z: z, "z"), 1)
    be, ledger = assemble_qsp_block_encoding(U, enc)
    assert be.alpha == SQRT2 and be.ancillas == 4
    assert operator_norm(be.block() - U) <= 1e-10
    assert ledger.as_tuple() == (7, 7, 1)


def test_random_polynomial_exact(rng):
    d = 4
    U = random_unitary(4, rng)
    coeffs = random_laurent_coefficients(d, rng)
    f = laurent_function(coeffs)
    be, _ = assemble_qsp_block_encoding(U, build_diagonal_encoding(f, m_of(d)))
    assert operator_norm(be.block() - matrix_function_oracle(U, f)) <= 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_exactness_suite(seed):
    rng = np.random.default_rng(1000 + seed)
    d = [2, 4, 8][seed % 3]
    U = random_unitary(2 + 2 * (seed % 2), rng)
    f = laurent_function(random_laurent_coefficients(d, rng))
    be, ledger = assemble_qsp_block_encoding(U, build_diagonal_encoding(f, m_of(d)))
    assert operator_norm(be.block() - matrix_function_oracle(U, f)) <= 1e-9
    assert ledger.as_tuple() == (4 * d - 1, 4 * d - 1, 1)


def test_exp_within_near_best_budget(rng):
    d = 8
    f = catalog_function("exp_it_cos", {"t": 2.0})
    U = hermitian_expm(random_hermitian(4, rng, norm=2.0))
    be, _ = assemble_qsp_block_encoding(U, build_diagonal_encoding(f, m_of(d)))
    ub = fourier_truncation_upper_bound(f, d).upper
    assert be.epsilon == pytest.approx((1 + SQRT2) * ub)
    assert operator_norm(be.block() - matrix_function_oracle(U, f)) <= (1 + SQRT2) * ub + 1e-12


@pytest.mark.parametrize("name,params", [("abs_power_c", {"c": 0.5}), ("sign_smooth", {"kappa": 10.0})])
@pytest.mark.parametrize("d", [2, 8])
def test_block_equals_fd(name, params, d, rng):
    f = catalog_function(name, params)
    U = random_unitary(2, rng)
    circ = assemble_qsp_circuit(U, build_diagonal_encoding(f, m_of(d)))
    fd = averaged_interpolant_fd(f, d)
    assert operator_norm(circ.block() - matrix_function_oracle(U, fd)) <= 1e-9
    assert is_unitary(circ.unitary)


def test_block_matches_direct_formula(rng):
    d, N = 2, 2
    d1 = 4 * d
    f = catalog_function("gibbs", {"beta": 1.0})
    U = random_unitary(N, rng)
    circ = assemble_qsp_circuit(U, build_diagonal_encoding(f, m_of(d)))
    W = build_indexed_power(U, d1).matrix
    fV = matrix_function_oracle(build_shift_spectrum_operator(d1), f)
    middle = dagger(W) @ np.kron(np.eye(N), fV) @ W
    left = np.kron(np.eye(N), plus_state(d1, d, 3 * d)[None, :])
    right = np.kron(np.eye(N), plus_state(d1)[:, None])
    assert operator_norm(circ.block() - SQRT2 * left @ middle @ right) <= 1e-10


def test_circuit_rejects_oversized(rng):
    enc = build_diagonal_encoding(UnitCircleFunction(lambda z: z, "z"), 7)
    with pytest.raises(InvalidInputError):
        assemble_qsp_circuit(random_unitary(128, rng), enc)


def test_circuit_rejects_wrong_encoding(rng):
    with pytest.raises(InvalidInputError):
        assemble_qsp_circuit(random_unitary(2, rng), np.eye(16))


def test_misscaled_extraction_fails(rng):
    U = random_unitary(2, rng)
    enc = build_diagonal_encoding(UnitCircleFunction(lambda z: z, "z"), 1)
    circ = assemble_qsp_circuit(U, enc)
    assert operator_norm(circ.raw_block() - U) >= 0.1


# first construction

def test_sqrt_d1_constant():
    be, ledger = assemble_sqrt_d1_encoding(np.eye(2), UnitCircleFunction(lambda z: np.ones_like(z), "1"), 1)
    np.testing.assert_allclose(be.raw_block(), np.eye(2) / 2, atol=1e-14)
    assert be.alpha == 2.0
    assert ledger.as_tuple() == (3, 1, 1)


def test_sqrt_d1_square_diagonal():
    U = np.diag(np.exp([0.3j, -1.1j]))
    be, _ = assemble_sqrt_d1_encoding(U, UnitCircleFunction(lambda z: z**2, "z2"), 2, 8)
    assert operator_norm(be.block() - U @ U) <= 1e-10


def test_sqrt_d1_index_size_freedom(rng):
    U = random_unitary(2, rng)
    f = laurent_function(random_laurent_coefficients(2, rng))
    target = matrix_function_oracle(U, f)
    for d1 in (8, 16):
        be, ledger = assemble_sqrt_d1_encoding(U, f, 2, d1)
        assert be.alpha == pytest.approx(np.sqrt(d1))
        assert operator_norm(be.block() - target) <= 1e-9
        assert ledger.cU_uses == d1 - 1


def test_sqrt_d1_aliasing_guard(rng):
    with pytest.raises(InvalidInputError):
        assemble_sqrt_d1_encoding(random_unitary(2, rng), lambda z: z, 2, 4)


# structure report

def test_structure_report(rng):
    U = random_unitary(2, rng)
    d = 2
    circ = assemble_qsp_circuit(U, build_diagonal_encoding(catalog_function("gibbs"), m_of(d)))
    report = circuit_structure_report(circ)
    json.dumps(report)
    assert len(report["stages"]) == 3
    assert report["ledger"] == {"cU": 7, "cU_dagger": 7, "U_f": 1}
    assert report["modification"] == [
        {"position": 1, "inverse_qpe_gate": ["H", 1], "modified_gate": ["ZCNOT", 0, 1]}
    ]
    assert report["total_qubits"] == 1 + m_of(d) + 3


def test_stage_one_is_textbook_qpe(rng):
    U = random_unitary(2, rng)
    circ = assemble_qsp_circuit(U, build_diagonal_encoding(catalog_function("gibbs"), 1))
    s1, s2, s3 = circ.stage_operators()
    qpe = np.kron(textbook_qpe(U, 3), np.eye(2))
    assert operator_norm(s1 - qpe) <= 1e-10
    assert operator_norm(s3 @ s2 @ s1 - circ.unitary) <= 1e-10


def test_halves_differ_only_in_projection(rng):
    U = random_unitary(2, rng)
    circ = assemble_qsp_circuit(U, build_diagonal_encoding(catalog_function("gibbs"), 1))
    s1, _, s3 = circ.stage_operators()
    changed = [i for i, (a, b) in enumerate(zip(circ.prep_4d, circ.prep_2d)) if a != b]
    assert changed == [1]
    # undoing the one modified gate turns stage 3 into the exact inverse of stage 1
    P4 = np.kron(np.kron(np.eye(2), gates_matrix(circ.prep_4d, 3)), np.eye(2))
    P2 = np.kron(np.kron(np.eye(2), gates_matrix(circ.prep_2d, 3)), np.eye(2))
    restored = dagger(P4) @ P2 @ s3
    assert operator_norm(restored - dagger(s1)) <= 1e-12
    assert operator_norm(s3 - dagger(s1)) > 0.1
