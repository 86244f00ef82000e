"""Diagonal function encodings and the block-encoding container.

Qubit order: the ``m + 2``-qubit index register is most significant, the
single flag qubit least significant, so basis state ``|j>|b>`` has index
``2 j + b``. Block encodings keep their ancillas in the least significant
positions: ``<0^a| U |0^a>`` is ``U[::2**a, ::2**a]``.
"""
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError, NormViolationError
from .functions import SupNormGrid, UnitCircleFunction
from .numerics import as_matrix, operator_norm, roots_of_unity

NORM_TOL = 1e-12


def flag_amplitudes(samples):
    """``sqrt(1 - |a|^2)``, the amplitude rotated into the flag."""
    return np.sqrt(np.clip(1.0 - np.abs(np.asarray(samples)) ** 2, 0.0, None))


def rotation_blocks(samples, flag=None):
    """Per-sample 2x2 special unitaries ``[[a, -s], [s, conj(a)]]``, ``s = sqrt(1 - |a|^2)``.

    ``flag`` overrides ``s`` when it is known more accurately than
    ``sqrt(1 - |a|^2)``, which loses half the digits near ``|a| = 1``.
    """
    a = np.asarray(samples, dtype=np.complex128)
    s = flag_amplitudes(a) if flag is None else np.asarray(flag, dtype=np.float64)
    blocks = np.empty(a.shape + (2, 2), dtype=np.complex128)
    blocks[..., 0, 0] = a
    blocks[..., 0, 1] = -s
    blocks[..., 1, 0] = s
    blocks[..., 1, 1] = np.conj(a)
    return blocks


def diagonal_unitary_from_samples(samples, flag=None):
    """Block-diagonal unitary on ``index (x) flag`` with ``<j|<0|U|j>|0> = samples[j]``."""
    samples = np.asarray(samples, dtype=np.complex128)
    if np.any(np.abs(samples) > 1.0 + NORM_TOL):
        raise NormViolationError("sample magnitude exceeds 1")
    n = samples.shape[0]
    blocks = rotation_blocks(samples, flag)
    U = np.zeros((n, 2, n, 2), dtype=np.complex128)
    idx = np.arange(n)
    U[idx, :, idx, :] = blocks
    return U.reshape(2 * n, 2 * n)


@dataclass(frozen=True)
class DiagonalEncoding:
    """``(m + 3)``-qubit unitary whose flag-0 sector is ``diag(f(z_j))``."""

    m: int
    matrix: np.ndarray
    f_samples: np.ndarray
    function: Optional[UnitCircleFunction] = None

    @property
    def d(self):
        return 2**self.m

    @property
    def num_nodes(self):
        return 4 * self.d

    def flag_zero_block(self):
        return self.matrix[::2, ::2]

    def to_json(self):
        return json.dumps(
            {
                "m": self.m,
                "d": self.d,
                "nodes": self.num_nodes,
                "function": None if self.function is None else self.function.name,
                "samples": [[float(v.real), float(v.imag)] for v in self.f_samples],
            }
        )


def _node_samples(f, m):
    d = 2**m
    return f(roots_of_unity(4 * d))


def _check_sup(f, grid_points):
    peak = float(np.max(np.abs(f(SupNormGrid(grid_points).points))))
    if peak > f.declared_sup_bound + NORM_TOL or peak > 1.0 + NORM_TOL:
        raise NormViolationError(f"{f.name}: grid sup norm {peak:.6g} exceeds 1")


def build_diagonal_encoding(f, m, grid_points=2**14):
    """``U_{f,4d}`` for ``d = 2**m`` by direct construction."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidInputError(f"m must be a positive integer, got {m!r}")
    _check_sup(f, grid_points)
    samples = _node_samples(f, m)
    return DiagonalEncoding(int(m), diagonal_unitary_from_samples(samples), samples, f)


def _quantize(samples, bits):
    a = np.asarray(samples, dtype=np.complex128)
    scale = 2.0**bits
    phi = np.arctan2(flag_amplitudes(a), np.abs(a))
    chi = np.angle(a)
    phi_q = np.clip(np.round(phi * scale) / scale, 0.0, np.pi / 2)
    chi_q = np.round(chi * scale) / scale
    return np.cos(phi_q) * np.exp(1j * chi_q), np.sin(phi_q)


def quantize_samples(samples, bits):
    """Round each sample's rotation angle and phase to ``bits`` fractional bits.

    A sample ``a = cos(phi) e^{i chi}`` is rotated into the flag by the
    angle ``phi`` in ``[0, pi/2]``; both ``phi`` and ``chi`` are stored in
    fixed point with step ``2**-bits`` radians.
    """
    return _quantize(samples, bits)[0]


def build_quantized_diagonal_encoding(f, m, bits):
    """``b``-bit approximation of ``U_{f,4d}`` and its deviation ``||U~ - U||``.

    Both operators are block diagonal over the index, so the deviation is
    the largest 2x2 block deviation.
    """
    if bits < 2:
        raise InvalidInputError("need at least 2 bits")
    exact = build_diagonal_encoding(f, m)
    q, flag = _quantize(exact.f_samples, bits)
    approx = DiagonalEncoding(exact.m, diagonal_unitary_from_samples(q, flag), q, f)
    diff = rotation_blocks(q, flag) - rotation_blocks(exact.f_samples)
    delta = float(np.max(np.linalg.svd(diff, compute_uv=False)))
    return approx, delta


@dataclass(frozen=True)
class BlockEncoding:
    """``(alpha, ancillas, epsilon)``-block encoding: ``A ~ alpha <0^a|U|0^a>``."""

    unitary: np.ndarray
    alpha: float
    ancillas: int
    epsilon: float = 0.0
    label: str = ""

    @property
    def target_dim(self):
        return self.unitary.shape[0] >> self.ancillas

    def raw_block(self):
        step = 1 << self.ancillas
        return self.unitary[::step, ::step]

    def block(self):
        return self.alpha * self.raw_block()


def verify_block_encoding(be, target):
    """``|| target - alpha <0^a|U|0^a> ||``."""
    target = as_matrix(target)
    if target.shape != (be.target_dim, be.target_dim):
        raise InvalidInputError(
            f"target shape {target.shape} does not match encoded dimension {be.target_dim}"
        )
    return operator_norm(target - be.block())


def block_encoding_passes(be, target, slack=1e-9):
    return verify_block_encoding(be, target) <= be.epsilon + slack
