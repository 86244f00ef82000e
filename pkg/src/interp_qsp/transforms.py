"""Functions of block-encoded Hermitian matrices, and singular value transforms.

Block-encoding ancillas sit in the least significant positions, so a
self-inverse encoding of ``H`` with one ancilla is
``H (x) Z + sqrt(I - H^2) (x) X``.
"""
from dataclasses import dataclass

import numpy as np

from .encoding import BlockEncoding, build_diagonal_encoding
from .errors import InvalidInputError, NormViolationError, ParityError
from .functions import lift_interval_function
from .interpolation import _check_power_of_two
from .numerics import (
    as_matrix,
    dagger,
    is_hermitian,
    matrix_function_oracle,
    num_qubits,
    operator_norm,
    principal_log_unitary,
)
from .qsp import SQRT2, assemble_qsp_circuit

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class HermitianBlockEncoding:
    H: np.ndarray
    unitary: np.ndarray
    ancillas: int = 1

    @property
    def system_dim(self):
        return self.H.shape[0]

    def block(self):
        step = 1 << self.ancillas
        return self.unitary[::step, ::step]


def self_inverse_block_encoding(H):
    """Self-inverse, Hermitian one-ancilla dilation of ``H`` (``||H|| < 1``)."""
    H = as_matrix(H)
    if not is_hermitian(H):
        raise InvalidInputError("H must be Hermitian")
    num_qubits(H.shape[0])
    if operator_norm(H) > 1 - 1e-9:
        raise NormViolationError("need ||H|| <= 1 - 1e-9")
    H = (H + dagger(H)) / 2
    S = matrix_function_oracle(H, lambda x: np.sqrt(np.clip(1 - x**2, 0.0, None)))
    S = (S + dagger(S)) / 2
    return HermitianBlockEncoding(H, np.kron(H, PAULI_Z) + np.kron(S, PAULI_X), 1)


def ancilla_reflection(system_dim, ancillas):
    """``2 Pi - 1`` with ``Pi = 1 (x) |0^a><0^a|``."""
    r = -np.ones(1 << ancillas)
    r[0] = 1.0
    return np.diag(np.tile(r, system_dim)).astype(np.complex128)


def reflected_walk(hbe):
    """``(2 Pi - 1) U_H``."""
    R = ancilla_reflection(hbe.system_dim, hbe.ancillas)
    return R @ hbe.unitary


def _ancilla_block(M, ancillas):
    step = 1 << ancillas
    return M[::step, ::step]


def verify_arccos_lemma(hbe, g):
    """``|| g(H) - <0^a| g(cos G) |0^a> ||`` with ``exp(iG) = (2 Pi - 1) U_H``."""
    G = principal_log_unitary(reflected_walk(hbe))
    lifted = matrix_function_oracle(G, lambda th: g(np.cos(th)))
    target = matrix_function_oracle(hbe.H, g)
    return operator_norm(target - _ancilla_block(lifted, hbe.ancillas))


def fhm_block_encode(hbe, g, d, epsilon=None):
    """``(sqrt 2, a + m + 3, eps)``-block encoding of ``g(H)``.

    Runs the QSP circuit on ``(2 Pi - 1) U_H`` with ``f(e^{i theta}) = g(cos theta)``.
    Returns the block encoding and the query ledger (counted in uses of
    controlled ``U_H`` and ``U_H^dag``).
    """
    d = _check_power_of_two(d)
    m = d.bit_length() - 1
    f = lift_interval_function(g)
    enc = build_diagonal_encoding(f, m)
    circ = assemble_qsp_circuit(reflected_walk(hbe), enc)
    if epsilon is None:
        from .analysis import fourier_truncation_upper_bound

        epsilon = (1 + SQRT2) * fourier_truncation_upper_bound(f, d).upper
    be = BlockEncoding(circ.unitary, SQRT2, hbe.ancillas + m + 3, epsilon, "fhm")
    return be, circ.ledger


@dataclass(frozen=True)
class SingularValueProblem:
    A: np.ndarray
    parity: int
    g: object


def check_parity(g, parity, points=4097, tol=1e-12):
    if parity not in (0, 1):
        raise ParityError(f"parity must be 0 or 1, got {parity!r}")
    x = np.linspace(-1.0, 1.0, points)
    sign = 1.0 if parity == 0 else -1.0
    gap = float(np.max(np.abs(g(x) - sign * g(-x))))
    if gap > tol:
        raise ParityError(f"{getattr(g, 'name', 'g')} is not of parity {parity} (gap {gap:.3g})")
    return gap


def hermitian_dilation(A):
    """``H_A = [[0, A^dag], [A, 0]]`` for a square ``A``."""
    A = as_matrix(A)
    k = A.shape[0]
    Z = np.zeros((k, k), dtype=np.complex128)
    return np.block([[Z, dagger(A)], [A, Z]])


def pad_square(A):
    """Zero-pad to a ``2^q x 2^q`` square."""
    A = as_matrix(A)
    k = max(A.shape)
    k = 1 << max(0, (k - 1).bit_length())
    out = np.zeros((k, k), dtype=np.complex128)
    out[: A.shape[0], : A.shape[1]] = A
    return out


def svd_oracle(A, g, parity):
    """``g^SV(A)``: ``V1^dag g(S) V2`` (odd) or ``V2^dag g(S) V2`` (even)."""
    A = as_matrix(A)
    r, c = A.shape
    W, s, Vh = np.linalg.svd(A, full_matrices=True)
    if parity == 1:
        gs = np.zeros((r, c), dtype=np.complex128)
        k = min(r, c)
        gs[np.arange(k), np.arange(k)] = g(s)
        return W @ gs @ Vh
    full = np.zeros(c)
    full[: s.shape[0]] = s
    return dagger(Vh) @ np.diag(g(full)) @ Vh


@dataclass(frozen=True)
class QsvtResult:
    output: np.ndarray
    block_encoding: BlockEncoding
    ledger: object
    parity: int


def qsvt(problem, d, epsilon=None):
    """Apply ``g`` to the singular values of ``A`` through ``g(H_A)``.

    The parity-``p`` block is ``<p| g(H_A) |0>`` on the leading dilation
    qubit, trimmed back to ``A``'s shape (columns x columns when even).
    """
    A = as_matrix(problem.A)
    if operator_norm(A) > 1 - 1e-9:
        raise NormViolationError("need ||A|| <= 1 - 1e-9")
    check_parity(problem.g, problem.parity)
    r, c = A.shape
    Ap = pad_square(A)
    k = Ap.shape[0]
    hbe = self_inverse_block_encoding(hermitian_dilation(Ap))
    be, ledger = fhm_block_encode(hbe, problem.g, d, epsilon)
    gH = be.block()
    if problem.parity == 0:
        out = gH[:k, :k][:c, :c]
    else:
        out = gH[k:, :k][:r, :c]
    return QsvtResult(out, be, ledger, problem.parity)


def real_valued_on_grid(g, points=4097, tol=1e-12):
    x = np.linspace(-1.0, 1.0, points)
    return bool(np.max(np.abs(np.imag(g(x)))) <= tol)

