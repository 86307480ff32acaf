"""
Positive-map layer for lambda-moments.

Maps act on the B subsystem and are stored as column-stacking
superoperators:
- base: PositiveMapSpec and the operations on it
- builtin: identity, transpose, lambda1, random T∘Φ maps and the registry
"""

from .base import (
    PositiveMapSpec,
    adjoint_map,
    apply_extended,
    apply_map,
    choi_matrix,
    compose_maps,
    extend_and_apply,
    normalize_trace,
    normalized_image,
    positivity_probe,
    provenance_note,
    superop_from_action,
    unvec,
    vec,
)
from .builtin import (
    get_map,
    identity_map,
    kraus_superop,
    lambda1_map,
    list_maps,
    load_map,
    random_positive_map,
    resolve_map,
    save_map,
    transpose_map,
)

__all__ = [
    "PositiveMapSpec",
    "adjoint_map",
    "apply_extended",
    "apply_map",
    "choi_matrix",
    "compose_maps",
    "extend_and_apply",
    "normalize_trace",
    "normalized_image",
    "positivity_probe",
    "provenance_note",
    "superop_from_action",
    "unvec",
    "vec",
    "get_map",
    "identity_map",
    "kraus_superop",
    "lambda1_map",
    "list_maps",
    "load_map",
    "random_positive_map",
    "resolve_map",
    "save_map",
    "transpose_map",
]
