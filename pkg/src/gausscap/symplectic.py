"""Real linear algebra on quadrature space.

Conventions used throughout the package: quadratures are interleaved as
``(q_1, p_1, ..., q_N, p_N)`` and the vacuum has variance 1/2, so a thermal
mode with mean photon number ``n`` has covariance ``(n + 1/2) * I_2``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidStateError, NumericalError

SYMMETRY_TOL = 1e-12
VACUUM_CLAMP_TOL = 1e-10

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2N x 2N block-diagonal form with blocks [[0, 1], [-1, 0]]."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), _J)


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def z_matrix(n_modes: int) -> np.ndarray:
    """diag(1, -1, ..., 1, -1) on n_modes modes."""
    return np.diag(np.tile([1.0, -1.0], n_modes))


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    return (matrix + matrix.T) / 2


def _check_square_even(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[0] % 2:
        raise InvalidStateError(f"expected an even, nonzero dimension, got {matrix.shape[0]}")


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a positive-definite covariance matrix.

    The eigenvalues of ``Omega @ V`` come in pairs ``+/- i nu_k``. The moduli
    are sorted and every second one kept, which gives the N values in
    ascending order. Values a hair below 1/2 (vacuum directions carrying
    rounding noise) are lifted to exactly 1/2.

    Raises:
        InvalidStateError: if ``cov`` is not symmetric or not positive definite.
        NumericalError: if the eigensolver fails.
    """
    cov = np.asarray(cov, dtype=float)
    _check_square_even(cov)
    if not np.allclose(cov, cov.T, rtol=0.0, atol=SYMMETRY_TOL * max(1.0, np.abs(cov).max())):
        raise InvalidStateError("covariance matrix is not symmetric")
    cov = symmetrize(cov)
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise InvalidStateError("covariance matrix is not positive definite") from None

    n_modes = cov.shape[0] // 2
    try:
        eigs = np.linalg.eigvals(symplectic_form(n_modes) @ cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}") from exc
    if not np.all(np.isfinite(eigs)):
        raise NumericalError("eigenvalue solver returned non-finite values")

    nus = np.sort(np.abs(eigs.imag))[::2]
    nus = np.where((nus < 0.5) & (nus >= 0.5 - VACUUM_CLAMP_TOL), 0.5, nus)
    return nus


def is_physical(cov: np.ndarray, tol: float = VACUUM_CLAMP_TOL) -> bool:
    """Uncertainty-principle check via the smallest symplectic eigenvalue."""
    try:
        return bool(symplectic_eigenvalues(cov)[0] >= 0.5 - tol)
    except InvalidStateError:
        return False


def is_orthogonal(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.max(np.abs(matrix @ matrix.T - np.eye(matrix.shape[0]))) <= tol)


def is_symplectic(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        return False
    omega = symplectic_form(matrix.shape[0] // 2)
    return bool(np.max(np.abs(matrix @ omega @ matrix.T - omega)) <= tol)


def gft_symplectic(n_modes: int) -> np.ndarray:
    """Symplectic matrix of the N-mode Gaussian Fourier transform.

    Block (j, k) is ``R(2 pi j k / N) / sqrt(N)``, the real form of the
    unitary ``a_j -> N^{-1/2} sum_k exp(2 pi i j k / N) a_k``.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    n = int(n_modes)
    idx = np.arange(n)
    # reduce jk mod N before scaling so large angles keep full precision
    theta = 2 * np.pi * (np.outer(idx, idx) % n) / n
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty((2 * n, 2 * n))
    out[0::2, 0::2] = c
    out[0::2, 1::2] = -s
    out[1::2, 0::2] = s
    out[1::2, 1::2] = c
    return out / np.sqrt(n)
