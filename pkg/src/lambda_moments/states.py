"""
Bipartite density matrices.

Provides the validated DensityMatrix type, the state families used by the
entanglement criteria (Horodecki's 3x3 family, maximally entangled and
maximally mixed states, random separable mixtures) and the JSON state file
format.

State JSON format:
    {"dA": 3, "dB": 3, "label": "optional",
     "matrix": [[[re, im], ...], ...]}   # d rows of d [re, im] pairs
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError

from .config import get_config
from .errors import InvariantViolation, ParamOutOfRange, ParseError
from .matkernel import ComplexMatrix, dagger, hermitian_eigen, hermitian_residual

logger = logging.getLogger(__name__)

HORODECKI_RANGE = (2.0, 5.0)


class BipartiteDims(BaseModel):
    """Subsystem dimensions of H_A ⊗ H_B."""

    model_config = ConfigDict(frozen=True)

    dA: PositiveInt
    dB: PositiveInt

    @property
    def d(self) -> int:
        """Total dimension dA * dB."""
        return self.dA * self.dB


@dataclass(frozen=True)
class DensityMatrix:
    """
    Validated bipartite quantum state.

    Construction checks Hermiticity, unit trace and positivity against the
    configured tolerances and raises InvariantViolation naming the first
    invariant that fails.

    Attributes:
        dims: Subsystem dimensions
        mat: d x d complex matrix in composite index order i * dB + j
        label: Free-form description carried into reports
    """

    dims: BipartiteDims
    mat: ComplexMatrix = field(repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        config = get_config()
        object.__setattr__(self, "mat", np.array(self.mat, dtype=np.complex128))
        d = self.dims.d
        if self.mat.shape != (d, d):
            raise InvariantViolation("shape", float(abs(self.mat.shape[0] - d)))
        if not np.all(np.isfinite(self.mat)):
            raise InvariantViolation("finite", float("inf"))

        herm = hermitian_residual(self.mat)
        if herm > config.state_herm_tol:
            raise InvariantViolation("hermitian", herm)

        trace_error = abs(complex(np.trace(self.mat)) - 1.0)
        if trace_error > config.state_trace_tol:
            raise InvariantViolation("trace", trace_error)

        spectrum = hermitian_eigen(self.mat, config.state_herm_tol)
        lowest = float(spectrum.eigenvalues[-1])
        if lowest < -config.state_psd_tol:
            raise InvariantViolation("psd", -lowest)

        self.mat.setflags(write=False)

    @property
    def d(self) -> int:
        return self.dims.d

    def purity(self) -> float:
        """Tr[ρ²]."""
        return float(np.real(np.vdot(self.mat, self.mat)))

    def reduced_b(self) -> ComplexMatrix:
        """Partial trace over A."""
        dA, dB = self.dims.dA, self.dims.dB
        return np.einsum("ijik->jk", self.mat.reshape(dA, dB, dA, dB))

    def reduced_a(self) -> ComplexMatrix:
        """Partial trace over B."""
        dA, dB = self.dims.dA, self.dims.dB
        return np.einsum("ijkj->ik", self.mat.reshape(dA, dB, dA, dB))


def _basis_index(i: int, j: int, dB: int) -> int:
    return i * dB + j


# =============================================================================
# State families
# =============================================================================


def max_entangled_state(d: int) -> DensityMatrix:
    """
    Projector onto (1/√d) Σ_i |ii>.

    Args:
        d: Local dimension (d >= 2)

    Raises:
        ParamOutOfRange: If d < 2
    """
    if d < 2:
        raise ParamOutOfRange("d", d, "[2, ∞)")
    mat = np.zeros((d * d, d * d), dtype=np.complex128)
    diag = [_basis_index(i, i, d) for i in range(d)]
    mat[np.ix_(diag, diag)] = 1.0 / d
    dims = BipartiteDims(dA=d, dB=d)
    return DensityMatrix(dims, mat, label=f"max_entangled(d={d})")


def maximally_mixed(dims: BipartiteDims) -> DensityMatrix:
    """I_d / d."""
    mat = np.eye(dims.d, dtype=np.complex128) / dims.d
    return DensityMatrix(dims, mat, label=f"maximally_mixed({dims.dA}x{dims.dB})")


def horodecki_components() -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """
    The three operators mixed in Horodecki's 3x3 family.

    Returns:
        (|Ψ+><Ψ+|, σ+, σ-) with
        σ+ = (|01><01| + |12><12| + |20><20|) / 3 and
        σ- = (|10><10| + |21><21| + |02><02|) / 3
    """
    psi = np.zeros((9, 9), dtype=np.complex128)
    diag = [_basis_index(i, i, 3) for i in range(3)]
    psi[np.ix_(diag, diag)] = 1.0 / 3.0

    sigma_plus = np.zeros((9, 9), dtype=np.complex128)
    sigma_minus = np.zeros((9, 9), dtype=np.complex128)
    for i in range(3):
        up = _basis_index(i, (i + 1) % 3, 3)
        down = _basis_index((i + 1) % 3, i, 3)
        sigma_plus[up, up] = 1.0 / 3.0
        sigma_minus[down, down] = 1.0 / 3.0
    return psi, sigma_plus, sigma_minus


def horodecki_state(a: float) -> DensityMatrix:
    """
    Horodecki's 3x3 family σ_a = (2/7)|Ψ+><Ψ+| + (a/7)σ+ + ((5-a)/7)σ-.

    Separable for 2 <= a <= 3, bound entangled for 3 < a <= 4 and free
    entangled for 4 < a <= 5.

    Args:
        a: Mixing parameter in [2, 5]

    Raises:
        ParamOutOfRange: If a lies outside [2, 5]
    """
    lo, hi = HORODECKI_RANGE
    if not (lo <= a <= hi):
        raise ParamOutOfRange("a", a, f"[{lo:g}, {hi:g}]")
    psi, sigma_plus, sigma_minus = horodecki_components()
    mat = (
        (2.0 / 7.0) * psi
        + (a / 7.0) * sigma_plus
        + ((5.0 - a) / 7.0) * sigma_minus
    )
    return DensityMatrix(BipartiteDims(dA=3, dB=3), mat, label=f"horodecki(a={a:g})")


def classify_horodecki(a: float) -> Literal["separable", "bound", "free"]:
    """Known entanglement class of σ_a (metadata only, never enforced)."""
    if a <= 3.0:
        return "separable"
    if a <= 4.0:
        return "bound"
    return "free"


# =============================================================================
# Random states
# =============================================================================


def random_pure_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unit vector from a complex Gaussian draw."""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def product_state(
    rho_a: ComplexMatrix,
    rho_b: ComplexMatrix,
    label: str = "",
) -> DensityMatrix:
    """ρ_A ⊗ ρ_B as a validated state."""
    dims = BipartiteDims(dA=rho_a.shape[0], dB=rho_b.shape[0])
    return DensityMatrix(dims, np.kron(rho_a, rho_b), label=label or "product")


def random_separable_state(
    dA: int,
    dB: int,
    n_terms: int,
    seed: int,
) -> DensityMatrix:
    """
    Convex mixture of n_terms random pure product states.

    Weights are Dirichlet(1, ..., 1); every draw comes from
    numpy.random.default_rng(seed).
    """
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    mat = np.zeros((dA * dB, dA * dB), dtype=np.complex128)
    for weight in weights:
        psi = np.kron(random_pure_vector(dA, rng), random_pure_vector(dB, rng))
        mat += weight * np.outer(psi, psi.conj())
    mat = (mat + dagger(mat)) / 2
    mat /= np.trace(mat).real
    return DensityMatrix(
        BipartiteDims(dA=dA, dB=dB),
        mat,
        label=f"random_separable(n={n_terms}, seed={seed})",
    )


def random_state(
    dims: BipartiteDims,
    seed: int,
    rank: int | None = None,
) -> DensityMatrix:
    """Random mixed state G G† / Tr[G G†] with a Ginibre matrix G of given rank."""
    rng = np.random.default_rng(seed)
    cols = dims.d if rank is None else rank
    shape = (dims.d, cols)
    ginibre = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    mat = ginibre @ dagger(ginibre)
    mat = (mat + dagger(mat)) / 2
    mat /= np.trace(mat).real
    return DensityMatrix(dims, mat, label=f"random(seed={seed})")


# =============================================================================
# State files
# =============================================================================


class StateFile(BaseModel):
    """On-disk representation of a DensityMatrix."""

    dA: PositiveInt
    dB: PositiveInt
    label: str | None = None
    matrix: list[list[tuple[float, float]]] = Field(
        ...,
        description="d rows of d [re, im] pairs, composite index i*dB + j",
    )


def from_file(path: str | Path) -> DensityMatrix:
    """
    Read and validate a state file.

    Raises:
        ParseError: If the file is unreadable, malformed or its matrix does
            not have dimension dA * dB
        InvariantViolation: If the matrix is not a valid density matrix
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read state file {path}: {e}", path=str(path)) from e

    try:
        stored = StateFile.model_validate_json(raw)
    except ValidationError as e:
        raise ParseError(f"Malformed state file {path}: {e}", path=str(path)) from e

    d = stored.dA * stored.dB
    if len(stored.matrix) != d or any(len(row) != d for row in stored.matrix):
        raise ParseError(
            f"State file {path} declares dA*dB = {d} but the matrix is not "
            f"{d}x{d}",
            path=str(path),
        )

    entries = np.array(stored.matrix, dtype=np.float64)
    mat = entries[..., 0] + 1j * entries[..., 1]
    logger.debug("Loaded %dx%d state from %s", stored.dA, stored.dB, path)
    return DensityMatrix(
        BipartiteDims(dA=stored.dA, dB=stored.dB),
        mat,
        label=stored.label if stored.label is not None else path.stem,
    )


def to_file(rho: DensityMatrix, path: str | Path) -> Path:
    """Write a state in the JSON state format and return the path."""
    path = Path(path)
    stored = StateFile(
        dA=rho.dims.dA,
        dB=rho.dims.dB,
        label=rho.label or None,
        matrix=[
            [(float(z.real), float(z.imag)) for z in row]
            for row in np.asarray(rho.mat)
        ],
    )
    path.write_text(stored.model_dump_json(indent=None), encoding="utf-8")
    return path
