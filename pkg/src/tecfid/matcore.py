"""Dense complex linear algebra kernel.

Hermitian eigensystems, principal-branch eigen-angles of unitaries,
validation predicates, and seeded random ensembles.  Everything works on
plain ``numpy`` arrays of ``complex128``; matrices are row-major and
eigenvalues are always returned in ascending order.

Random constructors accept an integer seed, a ``numpy.random.SeedSequence``
or a ready ``numpy.random.Generator``.  Callers that fan work out to
parallel workers should split streams with ``SeedSequence.spawn`` so that
no two workers ever share generator state; the same seed always reproduces
the same output bit for bit.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotHermitianError,
    NotUnitaryError,
    OutOfRangeError,
)

DEFAULT_TOL = 1e-10

# Eigenvalues of (U + U^dag)/2 closer than this are treated as one cluster
# and resolved through the compressed skew part; see unitary_eigenangles.
_CLUSTER_TOL = 1e-8


class EigenDecomposition(NamedTuple):
    """Eigenvalues (ascending, real) and matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_square_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 matrix.

    Raises
    ------
    DimensionMismatchError
        If the input is not a square 2-D array.
    """
    m = np.ascontiguousarray(np.asarray(a, dtype=np.complex128))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(a) -> float:
    """Max-norm distance from ``a`` to its own adjoint."""
    m = as_square_matrix(a)
    return float(np.max(np.abs(m - m.conj().T)))


def unitarity_defect(u) -> float:
    """Max-norm residual of ``U^dag U - I``."""
    m = as_square_matrix(u)
    eye = np.eye(m.shape[0])
    return float(np.max(np.abs(m.conj().T @ m - eye)))


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    return hermiticity_defect(a) <= tol


def validate_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    return unitarity_defect(u) <= tol


def validate_psd(a, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within ``tol`` and eigenvalues above ``-tol``."""
    m = as_square_matrix(a)
    if hermiticity_defect(m) > tol:
        return False
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return bool(w[0] >= -tol)


def validate_density(rho, tol: float = DEFAULT_TOL) -> bool:
    """PSD with unit trace within ``tol``."""
    m = as_square_matrix(rho)
    if abs(np.trace(m) - 1.0) > max(tol, 1e-12):
        return False
    return validate_psd(m, tol)


def hermitian_eigen(a, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Full eigensystem of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian within ``tol`` (max-norm).
    tol : float
        Hermiticity gate.

    Returns
    -------
    EigenDecomposition
        ``values`` ascending and real, ``vectors`` orthonormal columns with
        ``vectors[:, k]`` belonging to ``values[k]``.
    """
    m = as_square_matrix(a)
    defect = float(np.max(np.abs(m - m.conj().T)))
    if not defect <= tol:  # also rejects NaN
        raise NotHermitianError(defect, tol)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(f"eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(values=w, vectors=v)


def min_eigenpair(a, tol: float = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a matching unit eigenvector."""
    w, v = hermitian_eigen(a, tol)
    return float(w[0]), v[:, 0].copy()


def unitary_eigenangles(u, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal-branch eigen-angles of a unitary, ascending.

    Eigenvalues are written ``exp(-i * theta)`` with ``theta`` in
    ``(-pi, pi]``; a value that lands within 1e-12 of ``-pi`` is reported
    as ``pi``.  The computation stays inside Hermitian eigensolvers: the
    Hermitian part ``(U + U^dag)/2`` is diagonalised first and any
    degenerate cluster is split by diagonalising the compressed skew part
    ``(U - U^dag)/(2i)`` on the cluster subspace.

    Raises
    ------
    NotUnitaryError
        If ``U^dag U`` deviates from the identity beyond ``tol``.
    """
    m = as_square_matrix(u)
    defect = unitarity_defect(m)
    if not defect <= tol:
        raise NotUnitaryError(defect, tol)

    h1 = (m + m.conj().T) / 2.0
    h2 = (m - m.conj().T) / 2.0j
    w, v = hermitian_eigen(h1, tol=1e-8)

    n = m.shape[0]
    basis = np.empty((n, n), dtype=np.complex128)
    col = 0
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= _CLUSTER_TOL:
            stop += 1
        q = v[:, start:stop]
        if stop - start == 1:
            basis[:, col] = q[:, 0]
            col += 1
        else:
            block = q.conj().T @ h2 @ q
            _, bw = np.linalg.eigh((block + block.conj().T) / 2.0)
            refined = q @ bw
            basis[:, col : col + refined.shape[1]] = refined
            col += refined.shape[1]
        start = stop

    # Rayleigh quotients of U on the refined basis are second-order accurate.
    lams = np.einsum("ik,ij,jk->k", basis.conj(), m, basis)
    theta = -np.angle(lams)
    theta[theta <= -np.pi + 1e-12] += 2.0 * np.pi
    return np.sort(theta.real)


def fix_phase(psi, tol: float = 1e-12) -> np.ndarray:
    """Rotate a global phase so the first non-negligible amplitude is
    positive real.  Returns a fresh array; all-zero input is returned as is."""
    v = np.asarray(psi, dtype=np.complex128).copy()
    flat = v.reshape(-1)
    idx = np.flatnonzero(np.abs(flat) > tol)
    if idx.size:
        a = flat[idx[0]]
        v *= a.conjugate() / abs(a)
    return v


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary (QR of a complex Ginibre matrix
    with the R-diagonal phase fix)."""
    if n < 1:
        raise OutOfRangeError(f"dimension must be >= 1, got {n}")
    rng = _rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r).copy()
    d[np.abs(d) < 1e-300] = 1.0
    return q * (d / np.abs(d))


def random_pure_state(n: int, seed=None) -> np.ndarray:
    """Unit vector uniform on the complex sphere."""
    if n < 1:
        raise OutOfRangeError(f"dimension must be >= 1, got {n}")
    rng = _rng(seed)
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return psi / np.linalg.norm(psi)


def random_density(n: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix ``G G^dag / tr`` with ``G`` complex Gaussian
    of shape ``(n, rank)``; ``rank=None`` means full rank."""
    if n < 1:
        raise OutOfRangeError(f"dimension must be >= 1, got {n}")
    r = n if rank is None else int(rank)
    if not 1 <= r <= n:
        raise OutOfRangeError(f"rank must lie in [1, {n}], got {r}")
    rng = _rng(seed)
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
