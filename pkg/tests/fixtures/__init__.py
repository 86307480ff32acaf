"""Shared builders for lambda-moments tests."""

from .registry import (
    A_GRID_31,
    registry_maps,
    registry_states,
    registry_thetas,
    random_hermitian,
)

__all__ = [
    "A_GRID_31",
    "registry_maps",
    "registry_states",
    "registry_thetas",
    "random_hermitian",
]
