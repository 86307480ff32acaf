"""
Built-in maps and the map registry.

Available maps:
    - identity: X -> X (completely positive, used as a reference)
    - transpose: X -> X^T (positive, not completely positive; PT-moments)
    - lambda1: the 3x3 map with [Λ1(A)]_ij = -a_ij for i != j and
      [Λ1(A)]_ii = a_ii + a_i'i', i' = i + 2 mod 3 (positive, not CP)

Maps can also be read from JSON files:
    {"name": "...", "dim": 3, "superop": [[[re, im], ...], ...],
     "trace_scale": 2.0}            # trace_scale optional
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field, PositiveInt, ValidationError
from scipy import linalg

from ..errors import DimensionMismatch, ParseError, UnknownMap
from ..matkernel import ComplexMatrix, dagger
from .base import PositiveMapSpec, compose_maps, superop_from_action

LAMBDA1_DIM = 3


def identity_map(d: int) -> PositiveMapSpec:
    """X -> X on d x d matrices."""
    return PositiveMapSpec(
        name="identity",
        dim=d,
        superop=np.eye(d * d, dtype=np.complex128),
        trace_scale=1.0,
    )


def transpose_map(d: int) -> PositiveMapSpec:
    """X -> X^T on d x d matrices; its moments are the PT-moments."""
    return PositiveMapSpec(
        name="transpose",
        dim=d,
        superop=superop_from_action(lambda x: x.T, d),
        trace_scale=1.0,
    )


def _lambda1_action(a: ComplexMatrix) -> ComplexMatrix:
    out = -a.copy()
    diag = np.diag(a)
    shifted = (np.arange(LAMBDA1_DIM) + 2) % LAMBDA1_DIM
    out[np.diag_indices(LAMBDA1_DIM)] = diag + diag[shifted]
    return out


def lambda1_map() -> PositiveMapSpec:
    """
    The 3x3 positive but not completely positive map Λ1.

    Off-diagonal entries are negated and the diagonal becomes
    a_ii + a_i'i' with i' = i + 2 mod 3, so Tr[Λ1(X)] = 2 Tr[X].
    """
    return PositiveMapSpec(
        name="lambda1",
        dim=LAMBDA1_DIM,
        superop=superop_from_action(_lambda1_action, LAMBDA1_DIM),
        trace_scale=2.0,
    )


def kraus_superop(kraus_ops: list[ComplexMatrix]) -> ComplexMatrix:
    """Column-stacking superoperator Σ_i conj(K_i) ⊗ K_i of X -> Σ K_i X K_i†."""
    rows, cols = kraus_ops[0].shape
    superop = np.zeros((rows**2, cols**2), dtype=np.complex128)
    for op in kraus_ops:
        superop += np.kron(op.conj(), op)
    return superop


def random_positive_map(d: int, n_kraus: int, seed: int) -> PositiveMapSpec:
    """
    Transpose composed with a random completely positive trace-preserving map.

    The Kraus operators K_i are complex Gaussian draws from
    numpy.random.default_rng(seed), rescaled by (Σ K_i† K_i)^(-1/2) so the
    channel preserves trace. The composition is positive and generically
    not completely positive.
    """
    rng = np.random.default_rng(seed)
    shape = (n_kraus, d, d)
    raw = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    gram = sum(dagger(k) @ k for k in raw)
    values, vecs = linalg.eigh(gram)
    inv_sqrt = (vecs / np.sqrt(values)) @ dagger(vecs)
    kraus = [k @ inv_sqrt for k in raw]

    channel = PositiveMapSpec(
        name=f"kraus(n={n_kraus}, seed={seed})",
        dim=d,
        superop=kraus_superop(kraus),
        provenance="random",
    )
    composed = compose_maps(
        transpose_map(d),
        channel,
        name=f"transpose*kraus(n={n_kraus}, seed={seed})",
    )
    return PositiveMapSpec(
        name=composed.name,
        dim=d,
        superop=composed.superop,
        trace_scale=composed.trace_scale,
        provenance="random",
    )


# =============================================================================
# Registry
# =============================================================================

MAP_BUILDERS: dict[str, Callable[[int], PositiveMapSpec]] = {
    "identity": identity_map,
    "transpose": transpose_map,
    "lambda1": lambda dim: _fixed_dim(lambda1_map(), dim),
}


def _fixed_dim(lam: PositiveMapSpec, dim: int) -> PositiveMapSpec:
    if dim != lam.dim:
        raise DimensionMismatch(
            f"Map '{lam.name}' is only defined for dimension {lam.dim}, "
            f"requested {dim}",
            name=lam.name,
        )
    return lam


def list_maps() -> list[str]:
    """Names of all built-in maps."""
    return list(MAP_BUILDERS.keys())


def get_map(name: str, dim: int) -> PositiveMapSpec:
    """
    Build a registered map for subsystem dimension dim.

    Raises:
        UnknownMap: If name is not registered
        DimensionMismatch: If the map does not exist in that dimension
    """
    if name not in MAP_BUILDERS:
        raise UnknownMap(
            f"Unknown map '{name}'. Available maps: {', '.join(list_maps())}",
            name=name,
        )
    return MAP_BUILDERS[name](dim)


class MapFile(BaseModel):
    """On-disk representation of a PositiveMapSpec."""

    name: str
    dim: PositiveInt
    superop: list[list[tuple[float, float]]] = Field(
        ...,
        description="dim² rows of dim² [re, im] pairs, column-stacking convention",
    )
    trace_scale: float | None = None


def load_map(path: str | Path) -> PositiveMapSpec:
    """
    Read a map file.

    Raises:
        ParseError: If the file is unreadable, malformed or mis-sized
        InvariantViolation: If the map is not hermiticity preserving or its
            declared trace_scale is wrong
    """
    path = Path(path)
    try:
        stored = MapFile.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"Cannot read map file {path}: {e}", path=str(path)) from e
    except ValidationError as e:
        raise ParseError(f"Malformed map file {path}: {e}", path=str(path)) from e

    size = stored.dim * stored.dim
    if len(stored.superop) != size or any(len(row) != size for row in stored.superop):
        raise ParseError(
            f"Map file {path} declares dim {stored.dim} but the superoperator "
            f"is not {size}x{size}",
            path=str(path),
        )
    entries = np.array(stored.superop, dtype=np.float64)
    return PositiveMapSpec(
        name=stored.name,
        dim=stored.dim,
        superop=entries[..., 0] + 1j * entries[..., 1],
        trace_scale=stored.trace_scale,
        provenance="file",
    )


def save_map(lam: PositiveMapSpec, path: str | Path) -> Path:
    """Write a map in the JSON map format."""
    path = Path(path)
    stored = MapFile(
        name=lam.name,
        dim=lam.dim,
        superop=[[(float(z.real), float(z.imag)) for z in row] for row in lam.superop],
        trace_scale=lam.trace_scale,
    )
    path.write_text(stored.model_dump_json(), encoding="utf-8")
    return path


def resolve_map(name_or_path: str, dim: int) -> PositiveMapSpec:
    """
    Registry name or map file path to a map acting on dimension dim.

    Raises:
        UnknownMap: If the argument is neither registered nor an existing file
        DimensionMismatch: If the resolved map has another dimension
    """
    if name_or_path in MAP_BUILDERS:
        return get_map(name_or_path, dim)
    path = Path(name_or_path)
    if not path.is_file():
        raise UnknownMap(
            f"'{name_or_path}' is neither a built-in map "
            f"({', '.join(list_maps())}) nor a map file",
            name=name_or_path,
        )
    return _fixed_dim(load_map(path), dim)
