"""Small dense matrix kernel: spectra, determinants and Lyapunov solves.

Every routine here targets the fixed, tiny problem sizes of a three-mode
Gaussian system (at most 6x6), so dense direct methods are used throughout.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConvergenceError, ShapeError, SingularSystemError

__all__ = ["as_square", "eigenvalues", "determinant", "solve_lyapunov"]


def as_square(m: ArrayLike, name: str = "matrix") -> NDArray[np.float64]:
    """Return `m` as a finite, square float array or raise ShapeError."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeError(f"{name} has non-finite entries")
    return a


def eigenvalues(m: ArrayLike) -> NDArray[np.complex128]:
    """Eigenvalues of a real square matrix, with multiplicity.

    The result is sorted by descending real part, ties broken by descending
    imaginary part, so conjugate pairs sit next to each other.
    """
    a = as_square(m)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    ev = ev.astype(complex)
    order = np.lexsort((-ev.imag, -ev.real))
    return ev[order]


def determinant(m: ArrayLike) -> float:
    """Determinant of a square matrix of dimension at most 4."""
    a = as_square(m)
    if a.shape[0] > 4:
        raise ShapeError(f"determinant supports at most 4x4 blocks, got {a.shape}")
    return float(np.linalg.det(a))


def solve_lyapunov(m: ArrayLike, d: ArrayLike) -> NDArray[np.float64]:
    r"""Solve :math:`M V + V M^T = -D` for symmetric `V`.

    The equation is vectorised with the Kronecker sum
    :math:`(I \otimes M + M \otimes I)\,\mathrm{vec}(V) = -\mathrm{vec}(D)`
    and solved densely. One step of iterative refinement is applied, then the
    result is symmetrised.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Drift matrix. Must be stable; this is not checked here.
    d : array_like, shape (n, n)
        Symmetric diffusion matrix.

    Returns
    -------
    v : ndarray, shape (n, n)
        Symmetric steady-state covariance matrix.

    Raises
    ------
    SingularSystemError
        If the Kronecker sum is singular, which happens exactly when two
        eigenvalues of `m` sum to zero.
    """
    a = as_square(m, "drift")
    q = as_square(d, "diffusion")
    n = a.shape[0]
    if q.shape != a.shape:
        raise ShapeError(f"drift {a.shape} and diffusion {q.shape} differ in shape")
    eye = np.eye(n)
    # row-major vec: vec(M V) = (M kron I) vec(V), vec(V M^T) = (I kron M) vec(V)
    k = np.kron(a, eye) + np.kron(eye, a)
    rhs = -q.reshape(-1)
    try:
        x = np.linalg.solve(k, rhs)
        x = x + np.linalg.solve(k, rhs - k @ x)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("Lyapunov system is singular (marginal stability)") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("Lyapunov solve produced non-finite values")
    v = x.reshape(n, n)
    return 0.5 * (v + v.T)
