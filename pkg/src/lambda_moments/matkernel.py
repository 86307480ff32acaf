"""
Dense complex matrix kernel.

Construction, conjugate transpose, Kronecker products, Hermitian spectra,
partial transposition and cyclic permutation operators on tensor powers.

Conventions fixed project-wide:
    - Composite bipartite index (i, j) maps to i * dB + j (A major, B minor).
    - Operators are numpy complex128 arrays and are treated as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from .config import get_config
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NotHermitian,
    NotSquare,
    SizeOverflow,
)

ComplexMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]


@dataclass(frozen=True)
class HermitianSpectrum:
    """Real spectrum of a Hermitian matrix, sorted descending.

    Attributes:
        eigenvalues: Eigenvalues with eigenvalues[i] >= eigenvalues[i + 1]
        eigenvectors: Orthonormal eigenvectors as columns, if requested
    """

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix | None = None

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> ComplexMatrix:
        """Rebuild sum_i λ_i |v_i><v_i| (requires eigenvectors)."""
        if self.eigenvectors is None:
            raise ValueError("Spectrum was computed without eigenvectors")
        vecs = self.eigenvectors
        return (vecs * self.eigenvalues) @ vecs.conj().T


def as_matrix(data: Any) -> ComplexMatrix:
    """
    Build a ComplexMatrix from nested sequences or an array.

    Args:
        data: Anything numpy can turn into a 2-D array

    Returns:
        A fresh complex128 array

    Raises:
        DimensionMismatch: If the data is not two-dimensional
        InvariantViolation: If any entry is NaN or infinite
    """
    mat = np.array(data, dtype=np.complex128)
    if mat.ndim != 2 or 0 in mat.shape:
        raise DimensionMismatch(
            f"Expected a non-empty 2-D matrix, got shape {mat.shape}"
        )
    if not np.all(np.isfinite(mat)):
        raise InvariantViolation("finite", float("inf"))
    return mat


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product with dimensions (rows_a * rows_b, cols_a * cols_b)."""
    return np.kron(a, b)


def kron_power(a: ComplexMatrix, k: int) -> ComplexMatrix:
    """k-fold Kronecker power a ⊗ a ⊗ ... ⊗ a."""
    result = np.ones((1, 1), dtype=np.complex128)
    for _ in range(k):
        result = np.kron(result, a)
    return result


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return a.conj().T


def _require_square(a: ComplexMatrix) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"Expected a square matrix, got shape {a.shape}", shape=a.shape)
    return int(a.shape[0])


def hermitian_residual(a: ComplexMatrix) -> float:
    """Max entry magnitude of a - a†."""
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def hermitian_eigen(
    a: ComplexMatrix,
    herm_tol: float | None = None,
    vectors: bool = False,
) -> HermitianSpectrum:
    """
    Full real spectrum of a Hermitian matrix, sorted descending.

    The matrix is symmetrized before the LAPACK call so round-off in the
    input does not leak into the spectrum.

    Args:
        a: Square matrix
        herm_tol: Allowed max entry residual of a - a† (config default 1e-10)
        vectors: Also return orthonormal eigenvectors

    Returns:
        HermitianSpectrum with descending eigenvalues

    Raises:
        NotSquare: If a is not square
        NotHermitian: If the residual exceeds herm_tol
    """
    _require_square(a)
    tol = get_config().herm_tol if herm_tol is None else herm_tol
    residual = hermitian_residual(a)
    if residual > tol:
        raise NotHermitian(residual, tol)

    sym = (a + dagger(a)) / 2
    if vectors:
        values, vecs = linalg.eigh(sym)
        return HermitianSpectrum(
            eigenvalues=np.ascontiguousarray(values[::-1]),
            eigenvectors=np.ascontiguousarray(vecs[:, ::-1]),
        )
    values = linalg.eigh(sym, eigvals_only=True)
    return HermitianSpectrum(eigenvalues=np.ascontiguousarray(values[::-1]))


def min_eigenvalue(a: ComplexMatrix, herm_tol: float | None = None) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(hermitian_eigen(a, herm_tol).eigenvalues[-1])


def partial_transpose(m: ComplexMatrix, dA: int, dB: int) -> ComplexMatrix:
    """
    Transpose the B subsystem of a bipartite operator.

    Entry ((i, j), (k, l)) moves to ((i, l), (k, j)); only entries are
    permuted, so trace and Hermiticity are preserved exactly.

    Raises:
        DimensionMismatch: If m is not (dA * dB) x (dA * dB)
    """
    d = dA * dB
    if m.shape != (d, d):
        raise DimensionMismatch(
            f"Matrix shape {m.shape} does not match dA*dB = {d}",
            shape=m.shape,
            dA=dA,
            dB=dB,
        )
    return m.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(d, d)


def check_size(size: int, limit: int | None = None) -> None:
    """Raise SizeOverflow if size exceeds the configured dimension limit."""
    cap = get_config().dim_limit if limit is None else limit
    if size > cap:
        raise SizeOverflow(size, cap)


def tensor_axes_permutation(
    dims: tuple[int, ...],
    order: list[int],
) -> NDArray[np.intp]:
    """
    Index map of a tensor-factor reordering.

    For a product basis over factors of sizes ``dims``, returns an array
    ``target`` such that basis state ``s`` (in the original factor order)
    becomes basis state ``target[s]`` when the factors are laid out as
    ``[dims[o] for o in order]``.
    """
    size = int(np.prod(dims))
    new_dims = tuple(dims[o] for o in order)
    flat_new = np.arange(size).reshape(new_dims)
    inverse = np.argsort(order)
    return flat_new.transpose(inverse).ravel()


def permutation_matrix(target: NDArray[np.intp]) -> ComplexMatrix:
    """0/1 matrix P with P|s> = |target[s]>."""
    size = target.shape[0]
    perm = np.zeros((size, size), dtype=np.complex128)
    perm[target, np.arange(size)] = 1.0
    return perm


def cyclic_permutation_operator(
    d: int,
    k: int,
    limit: int | None = None,
) -> ComplexMatrix:
    """
    Cyclic shift of k copies of a d-dimensional space.

    Oriented so that Tr[Π (X_1 ⊗ ... ⊗ X_k)] = Tr[X_1 X_2 ... X_k], which
    means Π|l1, l2, ..., lk> = |l2, ..., lk, l1>. Its adjoint is the
    opposite shift |l1, ..., lk> -> |lk, l1, ..., l(k-1)>.

    Args:
        d: Single-copy dimension
        k: Number of copies
        limit: Max allowed d**k (config default 2048)

    Raises:
        SizeOverflow: If d**k exceeds the limit
    """
    if d < 1 or k < 1:
        raise DimensionMismatch(f"d and k must be positive, got d={d}, k={k}")
    check_size(d**k, limit)
    # basis |l1..lk> goes to |l2..lk l1>: factor order (2, ..., k, 1)
    order = list(range(1, k)) + [0]
    return permutation_matrix(tensor_axes_permutation((d,) * k, order))


def power_trace(a: ComplexMatrix, k: int) -> complex:
    """Tr[a^k] by repeated multiplication (independent of any eigensolver)."""
    _require_square(a)
    if k == 0:
        return complex(a.shape[0])
    power = a.copy()
    for _ in range(k - 1):
        power = power @ a
    return complex(np.trace(power))
