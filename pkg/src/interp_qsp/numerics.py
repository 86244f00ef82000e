"""Dense complex-matrix helpers.

Everything here operates on plain ``numpy`` arrays. Spectral work goes
through the complex Schur form, which for a normal matrix is a unitary
diagonalization with orthonormal eigenvectors even under degeneracy.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg as sla
from scipy.stats import unitary_group

from .errors import BranchCutError, InvalidInputError, PreconditionError

UNITARY_TOL = 1e-10
NORMAL_TOL = 1e-9


def as_matrix(M):
    """Return ``M`` as a finite 2-D complex128 array."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")
    return M


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def operator_norm(M):
    """Largest singular value of ``M``, from a full SVD."""
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def tensor(*ops):
    """Kronecker product, leftmost factor most significant."""
    return reduce(np.kron, ops)


def unitarity_defect(M):
    M = as_matrix(M)
    return operator_norm(dagger(M) @ M - np.eye(M.shape[1]))


def is_unitary(M, tol=UNITARY_TOL):
    M = as_matrix(M)
    return M.shape[0] == M.shape[1] and unitarity_defect(M) <= tol


def is_hermitian(M, tol=1e-10):
    M = as_matrix(M)
    return M.shape[0] == M.shape[1] and operator_norm(M - dagger(M)) <= tol


def normality_defect(M):
    M = as_matrix(M)
    Mh = dagger(M)
    return operator_norm(Mh @ M - M @ Mh)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self, values=None):
        values = self.eigenvalues if values is None else values
        V = self.eigenvectors
        return (V * values) @ dagger(V)


def spectral_decomposition(M, tol=NORMAL_TOL):
    """Unitary diagonalization of a normal matrix.

    Raises ``PreconditionError`` when ``M`` is not normal to ``tol``
    (relative to ``max(1, |M|^2)``).
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise InvalidInputError("spectral decomposition needs a square matrix")
    scale = max(1.0, operator_norm(M) ** 2)
    if normality_defect(M) > tol * scale:
        raise PreconditionError("matrix is not normal")
    if is_hermitian(M, tol=1e-13 * max(1.0, scale)):
        w, V = np.linalg.eigh((M + dagger(M)) / 2)
        return SpectralDecomposition(w.astype(np.complex128), V)
    T, Z = sla.schur(M, output="complex")
    return SpectralDecomposition(np.diag(T).copy(), Z)


def matrix_function_oracle(M, phi):
    """``V phi(L) V^dagger`` for normal ``M = V L V^dagger``.

    ``phi`` is applied elementwise to the eigenvalue array; for a Hermitian
    ``M`` it receives real values.
    """
    spec = spectral_decomposition(M)
    values = spec.eigenvalues
    if np.all(values.imag == 0):
        values = values.real
    return spec.reconstruct(np.asarray(phi(values), dtype=np.complex128))


def principal_log_unitary(W, allow_branch_cut=False, cut_tol=1e-8):
    """Hermitian ``G`` with spectrum in ``[-pi, pi)`` and ``exp(iG) = W``."""
    W = as_matrix(W)
    if not is_unitary(W):
        raise PreconditionError("principal_log_unitary needs a unitary matrix")
    spec = spectral_decomposition(W)
    phases = np.angle(spec.eigenvalues)
    near_cut = np.abs(spec.eigenvalues + 1.0) <= cut_tol
    if np.any(near_cut) and not allow_branch_cut:
        raise BranchCutError("eigenvalue on the branch cut at -1")
    phases = np.where(near_cut | (phases >= np.pi), -np.pi, phases)
    G = spec.reconstruct(phases.astype(np.complex128))
    return (G + dagger(G)) / 2


def hermitian_expm(G, scale=1j):
    """``exp(scale * G)`` for Hermitian ``G``."""
    return matrix_function_oracle(G, lambda x: np.exp(scale * x))


def roots_of_unity(n):
    """``exp(2 pi i k / n)`` for ``k = 0 .. n-1`` with the symmetries kept exact.

    Conjugate pairs ``k, n-k`` are exact conjugates and, when ``4 | n``, the
    quarter points are exactly ``+-1, +-i``. Naive ``np.exp`` gives
    ``cos(pi/2) ~ 6e-17``, which non-smooth lifts such as ``|x|^c`` amplify.
    """
    n = int(n)
    if n < 1:
        raise InvalidInputError("n must be positive")
    k = np.arange(n)
    if n % 4:
        z = np.exp(2j * np.pi * k / n)
    else:
        q = n // 4
        r = np.arange(q)
        # first-quadrant values, mirrored about pi/4 so cos/sin swap exactly
        c = np.cos(2 * np.pi * r / n)
        s = np.sin(2 * np.pi * r / n)
        upper = r > q - r
        c[upper], s[upper] = s[q - r[upper]], c[q - r[upper]]
        if q % 2 == 0 and q > 0:
            c[q // 2] = s[q // 2] = np.sqrt(0.5)
        z = np.concatenate([c + 1j * s, -s + 1j * c, -c - 1j * s, s - 1j * c])
    half = (n - 1) // 2
    z[n - half :] = np.conj(z[1 : half + 1][::-1])
    return z


def random_unitary(dim, rng):
    """Haar-random unitary drawn from ``rng`` (a ``numpy.random.Generator``)."""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_hermitian(dim, rng, norm=0.9):
    """Random Hermitian matrix rescaled to operator norm ``norm``."""
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (X + dagger(X)) / 2
    return H * (norm / operator_norm(H))


def random_matrix(rows, cols, rng, norm=0.8):
    """Random complex matrix rescaled to operator norm ``norm``."""
    X = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return X * (norm / operator_norm(X))


def num_qubits(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    return n
