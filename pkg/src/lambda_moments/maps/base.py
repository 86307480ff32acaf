"""
Hermiticity-preserving linear maps on the B subsystem.

A map Λ on d x d matrices is stored as a dense d² x d² superoperator S
acting on column-stacked vectors: vec(Λ(X)) = S vec(X), where
vec([[a, b], [c, d]]) = (a, c, b, d). With this convention the
Hilbert-Schmidt adjoint Λ† is represented by S†.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from ..config import get_config
from ..errors import (
    DegenerateNormalization,
    DimensionMismatch,
    InvariantViolation,
    NegativeNormalization,
)
from ..matkernel import ComplexMatrix, dagger, min_eigenvalue
from ..states import DensityMatrix, random_pure_vector

logger = logging.getLogger(__name__)

Provenance = Literal["builtin", "random", "file", "derived"]

# Seed of the random operators used to verify maps at construction
_CHECK_SEED = 0


def vec(matrix: ComplexMatrix) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(matrix).T.reshape(-1)


def unvec(vector: np.ndarray, dim: int) -> ComplexMatrix:
    """Inverse of vec for a dim x dim matrix."""
    return np.asarray(vector).reshape(dim, dim).T


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x)))


def _random_operators(dim: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(_CHECK_SEED)
    shape = (count, dim, dim)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def infer_trace_scale(superop: ComplexMatrix, dim: int, tol: float) -> float | None:
    """
    Constant c with Tr[Λ(X)] = c Tr[X] for all X, if one exists.

    Tr[Λ(X)] is the linear functional Σ_r S[r(d+1), :] applied to vec(X);
    the map is trace-scaling exactly when that row is a multiple of vec(I).
    """
    diagonal_rows = [r * (dim + 1) for r in range(dim)]
    functional = superop[diagonal_rows, :].sum(axis=0)
    scale = functional[0]
    residual = np.max(np.abs(functional - scale * vec(np.eye(dim))))
    if residual > tol * max(1.0, abs(scale)) or abs(scale.imag) > tol:
        return None
    return float(scale.real)


@dataclass(frozen=True)
class PositiveMapSpec:
    """
    A hermiticity-preserving linear map on dim x dim matrices.

    Construction verifies Λ(X†) = Λ(X)† on seeded random operators and
    either verifies the given trace_scale or infers it.

    Attributes:
        name: Registry name or description
        dim: Input and output dimension
        superop: dim² x dim² column-stacking superoperator
        trace_scale: c0 with Tr[Λ(X)] = c0 Tr[X], or None
        provenance: Where the map came from; only built-in maps have
            positivity established outside this library
        hermiticity_preserving: Always True once constructed
    """

    name: str
    dim: int
    superop: ComplexMatrix = field(repr=False)
    trace_scale: float | None = None
    provenance: Provenance = "builtin"
    hermiticity_preserving: bool = field(init=False, default=False)

    def __post_init__(self) -> None:
        config = get_config()
        superop = np.array(self.superop, dtype=np.complex128)
        size = self.dim * self.dim
        if superop.shape != (size, size):
            raise DimensionMismatch(
                f"Superoperator of map '{self.name}' has shape {superop.shape}, "
                f"expected ({size}, {size})",
                name=self.name,
            )
        if not np.all(np.isfinite(superop)):
            raise InvariantViolation("finite", float("inf"))
        superop.setflags(write=False)
        object.__setattr__(self, "superop", superop)

        samples = _random_operators(self.dim, config.map_check_samples)
        herm_residual = max(
            _max_abs(apply_map(self, dagger(x)) - dagger(apply_map(self, x)))
            for x in samples
        )
        scale = max(1.0, _max_abs(superop)) * self.dim
        if herm_residual > config.map_check_tol * scale:
            raise InvariantViolation("hermiticity_preserving", herm_residual)
        object.__setattr__(self, "hermiticity_preserving", True)

        if self.trace_scale is None:
            inferred = infer_trace_scale(superop, self.dim, config.map_check_tol)
            object.__setattr__(self, "trace_scale", inferred)
        else:
            trace_residual = max(
                abs(np.trace(apply_map(self, x)) - self.trace_scale * np.trace(x))
                for x in samples
            )
            if trace_residual > config.map_check_tol * scale:
                raise InvariantViolation("trace_scale", float(trace_residual))

    @property
    def is_trace_scaling(self) -> bool:
        return self.trace_scale is not None


def superop_from_action(
    action: Callable[[ComplexMatrix], ComplexMatrix],
    dim: int,
) -> ComplexMatrix:
    """Superoperator of a linear action, built column by column on E_rc."""
    size = dim * dim
    superop = np.zeros((size, size), dtype=np.complex128)
    for c in range(dim):
        for r in range(dim):
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[r, c] = 1.0
            superop[:, r + c * dim] = vec(action(unit))
    return superop


def action_tensor(lam: PositiveMapSpec) -> np.ndarray:
    """L[r', c', r, c] with Λ(X)[r', c'] = Σ L[r', c', r, c] X[r, c]."""
    d = lam.dim
    # row index r' + c' d reshapes (C order) to (c', r')
    return lam.superop.reshape(d, d, d, d).transpose(1, 0, 3, 2)


# =============================================================================
# Map operations
# =============================================================================


def apply_map(lam: PositiveMapSpec, x: ComplexMatrix) -> ComplexMatrix:
    """
    Λ(x) = unvec(S vec(x)).

    Raises:
        DimensionMismatch: If x is not dim x dim
    """
    if x.shape != (lam.dim, lam.dim):
        raise DimensionMismatch(
            f"Map '{lam.name}' acts on {lam.dim}x{lam.dim} matrices, got {x.shape}",
            name=lam.name,
        )
    return unvec(lam.superop @ vec(x), lam.dim)


def compose_maps(
    outer: PositiveMapSpec,
    inner: PositiveMapSpec,
    name: str,
) -> PositiveMapSpec:
    """outer ∘ inner."""
    if outer.dim != inner.dim:
        raise DimensionMismatch(
            f"Cannot compose maps of dimensions {outer.dim} and {inner.dim}"
        )
    return PositiveMapSpec(
        name=name,
        dim=outer.dim,
        superop=outer.superop @ inner.superop,
        provenance="derived",
    )


def adjoint_map(lam: PositiveMapSpec) -> PositiveMapSpec:
    """
    Hilbert-Schmidt adjoint Λ†, defined by Tr[Λ(A)† B] = Tr[A† Λ†(B)].

    In the column-stacking representation this is the conjugate transpose
    of the superoperator.
    """
    return PositiveMapSpec(
        name=f"adjoint({lam.name})",
        dim=lam.dim,
        superop=dagger(lam.superop),
        provenance="derived",
    )


def apply_extended(lam: PositiveMapSpec, mat: ComplexMatrix, dA: int) -> ComplexMatrix:
    """
    (I_A ⊗ Λ)(mat) for any (dA * dim) x (dA * dim) matrix.

    Applies Λ to every dim x dim block of mat.
    """
    dB = lam.dim
    d = dA * dB
    if mat.shape != (d, d):
        raise DimensionMismatch(
            f"Matrix shape {mat.shape} does not match dA*dB = {dA}*{dB}",
            name=lam.name,
        )
    blocks = mat.reshape(dA, dB, dA, dB)
    out = np.einsum("xyrc,irkc->ixky", action_tensor(lam), blocks)
    return out.reshape(d, d)


def extend_and_apply(lam: PositiveMapSpec, rho: DensityMatrix) -> ComplexMatrix:
    """
    (I_A ⊗ Λ)(ρ).

    Raises:
        DimensionMismatch: If the map does not act on the B subsystem of ρ
    """
    if lam.dim != rho.dims.dB:
        raise DimensionMismatch(
            f"Map '{lam.name}' has dimension {lam.dim} but dB = {rho.dims.dB}",
            name=lam.name,
            dB=rho.dims.dB,
        )
    return apply_extended(lam, rho.mat, rho.dims.dA)


def normalize_trace(
    raw: ComplexMatrix,
    degenerate_tol: float | None = None,
) -> ComplexMatrix:
    """
    raw / Tr[raw], refusing degenerate or negative traces.

    Raises:
        DegenerateNormalization: If |Tr[raw]| <= degenerate_tol
        NegativeNormalization: If Tr[raw] < 0
    """
    tol = degenerate_tol
    if tol is None:
        tol = get_config().degenerate_trace_tol
    trace = float(np.trace(raw).real)
    if abs(trace) <= tol:
        logger.warning("Degenerate normalization trace %.3e", trace)
        raise DegenerateNormalization(trace)
    if trace < 0:
        logger.warning("Negative normalization trace %.6g", trace)
        raise NegativeNormalization(trace)
    return raw / trace


def normalized_image(
    lam: PositiveMapSpec,
    rho: DensityMatrix,
    degenerate_tol: float | None = None,
) -> ComplexMatrix:
    """Θ(ρ) = (I_A ⊗ Λ)(ρ) / Tr[(I_A ⊗ Λ)(ρ)]."""
    return normalize_trace(extend_and_apply(lam, rho), degenerate_tol)


def choi_matrix(lam: PositiveMapSpec) -> ComplexMatrix:
    """(I ⊗ Λ)(|Ω><Ω|) with the unnormalized |Ω> = Σ_i |ii>."""
    d = lam.dim
    omega = np.zeros((d * d, d * d), dtype=np.complex128)
    diag = [i * d + i for i in range(d)]
    omega[np.ix_(diag, diag)] = 1.0
    return apply_extended(lam, omega, d)


def positivity_probe(lam: PositiveMapSpec, trials: int, seed: int) -> float:
    """
    Smallest eigenvalue of Λ(|ψ><ψ|) over random pure states.

    A negative result certifies that Λ is not positive; a nonnegative one
    is sampling evidence only.
    """
    rng = np.random.default_rng(seed)
    lowest = float("inf")
    for _ in range(trials):
        psi = random_pure_vector(lam.dim, rng)
        image = apply_map(lam, np.outer(psi, psi.conj()))
        lowest = min(lowest, min_eigenvalue(image))
    logger.debug(
        "Positivity probe of %s over %d trials: %.3e", lam.name, trials, lowest
    )
    return lowest


def provenance_note(lam: PositiveMapSpec, probe_min: float | None = None) -> str:
    """
    Where a map came from, e.g. "map transpose (builtin)", for report
    details. A probe result is appended when given.
    """
    note = f"map {lam.name} ({lam.provenance})"
    if probe_min is None:
        return note
    status = "not positive" if probe_min < 0 else "no negative eigenvalue found"
    return f"{note}, positivity probe: {status} (min eigenvalue {probe_min:.3g})"
