"""
Multi-copy observables whose expectation on ρ^{⊗k} is the Λ-moment q_k.

With Π the cyclic shift on k copies and c the trace scale of Λ,

    V = Π_A ⊗ (Λ†)^{⊗k}(Π_B),    O = (V + V†) / (2 c^k)

satisfies Tr[O ρ^{⊗k}] = Tr[((I ⊗ Λ)(ρ))^k] / c^k = q_k. V is assembled on
A^{⊗k} ⊗ B^{⊗k} and reordered to interleaved copies A1 B1 A2 B2 ... so the
state side is a plain Kronecker power of ρ.

Shot noise is simulated with the Born rule on the eigenbasis of O.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveInt

from .config import get_config
from .errors import (
    DegenerateNormalization,
    DimensionMismatch,
    InvariantViolation,
    NoTraceScale,
    ParamOutOfRange,
    ProbabilityDefect,
)
from .maps import PositiveMapSpec, adjoint_map, apply_map, lambda1_map
from .maps.base import action_tensor
from .matkernel import (
    ComplexMatrix,
    check_size,
    cyclic_permutation_operator,
    dagger,
    hermitian_eigen,
    hermitian_residual,
    kron_power,
    permutation_matrix,
    tensor_axes_permutation,
)
from .moments import MomentVector
from .states import BipartiteDims, DensityMatrix

logger = logging.getLogger(__name__)

OBSERVABLE_HERM_TOL = 1e-11
LAMBDA1_DIMS = BipartiteDims(dA=3, dB=3)


@dataclass(frozen=True)
class MeasurementOperator:
    """
    Hermitian observable on k copies of H_A ⊗ H_B in interleaved order.

    Attributes:
        k: Number of copies
        dims: Single-copy subsystem dimensions
        op: d^k x d^k Hermitian matrix
        norm_const: The c^k divisor applied to the hermitized operator
        label: Description carried into outputs
    """

    k: int
    dims: BipartiteDims
    op: ComplexMatrix = field(repr=False)
    norm_const: float = 1.0
    label: str = ""

    def __post_init__(self) -> None:
        size = self.dims.d**self.k
        if self.op.shape != (size, size):
            raise DimensionMismatch(
                f"Observable shape {self.op.shape} does not match "
                f"({self.dims.d})^{self.k} = {size}"
            )
        residual = hermitian_residual(self.op)
        if residual > OBSERVABLE_HERM_TOL:
            raise InvariantViolation("hermitian", residual)

    @property
    def size(self) -> int:
        return self.dims.d**self.k


class ShotEstimate(BaseModel):
    """Sample mean of measured eigenvalues with its standard error."""

    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: NonNegativeFloat
    shots: PositiveInt
    seed: int


class MomentEstimate(BaseModel):
    """Shot estimates of q2 and q3 and the MomentVector they induce."""

    model_config = ConfigDict(frozen=True)

    estimates: dict[int, ShotEstimate] = Field(default_factory=dict)
    moments: MomentVector


# =============================================================================
# Operator construction
# =============================================================================


def apply_tensor_power(
    lam: PositiveMapSpec,
    op: ComplexMatrix,
    k: int,
) -> ComplexMatrix:
    """Λ^{⊗k}(op) for an operator on k copies of the map's space."""
    d = lam.dim
    if op.shape != (d**k, d**k):
        raise DimensionMismatch(
            f"Operator shape {op.shape} is not ({d}^{k}, {d}^{k})", name=lam.name
        )
    action = action_tensor(lam)
    tensor = op.reshape((d,) * (2 * k))
    for copy in range(k):
        tensor = np.tensordot(action, tensor, axes=([2, 3], [copy, k + copy]))
        tensor = np.moveaxis(tensor, [0, 1], [copy, k + copy])
    return tensor.reshape(d**k, d**k)


def twisted_permutation(lam: PositiveMapSpec, k: int) -> ComplexMatrix:
    """
    (Λ†)^{⊗k}(Π) for the cyclic shift Π on k copies of the B space.

    Tr[result (Y_1 ⊗ ... ⊗ Y_k)] = Tr[Λ(Y_1) ... Λ(Y_k)].

    Raises:
        SizeOverflow: If dim^k exceeds the dimension limit
    """
    shift = cyclic_permutation_operator(lam.dim, k)
    return apply_tensor_power(adjoint_map(lam), shift, k)


def _interleave_target(dA: int, dB: int, k: int) -> np.ndarray:
    # A1..Ak B1..Bk -> A1 B1 A2 B2 ...
    order = [f for copy in range(k) for f in (copy, k + copy)]
    return tensor_axes_permutation((dA,) * k + (dB,) * k, order)


def interleave_permutation(dA: int, dB: int, k: int) -> ComplexMatrix:
    """Permutation P with P|a1..ak b1..bk> = |a1 b1 a2 b2 ... ak bk>."""
    check_size((dA * dB) ** k)
    return permutation_matrix(_interleave_target(dA, dB, k))


def assemble_observable(
    pi_a: ComplexMatrix,
    v_b: ComplexMatrix,
    dims: BipartiteDims,
    k: int,
    trace_scale: float,
    label: str = "",
) -> MeasurementOperator:
    """
    O = (V + V†) / (2 c^k) for V = pi_a ⊗ v_b reordered to interleaved copies.
    """
    size = dims.d**k
    check_size(size)
    target = _interleave_target(dims.dA, dims.dB, k)
    v = np.empty((size, size), dtype=np.complex128)
    v[np.ix_(target, target)] = np.kron(pi_a, v_b)
    norm_const = float(trace_scale**k)
    op = (v + dagger(v)) / (2.0 * norm_const)
    return MeasurementOperator(
        k=k, dims=dims, op=op, norm_const=norm_const, label=label
    )


def build_observable(
    lam: PositiveMapSpec,
    dims: BipartiteDims,
    k: int,
) -> MeasurementOperator:
    """
    Observable O^(k) with Tr[O ρ^{⊗k}] = q_k for the map Λ.

    Raises:
        DimensionMismatch: If Λ does not act on the B subsystem
        NoTraceScale: If Λ has no state-independent trace scale
        DegenerateNormalization: If the trace scale is zero
        SizeOverflow: If (dA dB)^k exceeds the dimension limit
    """
    if lam.dim != dims.dB:
        raise DimensionMismatch(
            f"Map '{lam.name}' has dimension {lam.dim} but dB = {dims.dB}",
            name=lam.name,
        )
    if lam.trace_scale is None:
        raise NoTraceScale(
            f"Map '{lam.name}' has no constant trace scale; measure "
            f"normalization_observable alongside instead",
            name=lam.name,
        )
    if abs(lam.trace_scale) <= get_config().degenerate_trace_tol:
        raise DegenerateNormalization(lam.trace_scale)
    check_size(dims.d**k)

    pi_a = cyclic_permutation_operator(dims.dA, k)
    v_b = twisted_permutation(lam, k)
    return assemble_observable(
        pi_a, v_b, dims, k, lam.trace_scale, label=f"O^({k}) for {lam.name}"
    )


def normalization_observable(
    lam: PositiveMapSpec,
    dims: BipartiteDims,
) -> ComplexMatrix:
    """W = I_A ⊗ Λ†(I_B), so Tr[W ρ] = Tr[(I ⊗ Λ)(ρ)]."""
    if lam.dim != dims.dB:
        raise DimensionMismatch(
            f"Map '{lam.name}' has dimension {lam.dim} but dB = {dims.dB}",
            name=lam.name,
        )
    identity_b = np.eye(dims.dB, dtype=np.complex128)
    image = apply_map(adjoint_map(lam), identity_b)
    return np.kron(np.eye(dims.dA, dtype=np.complex128), image)


# =============================================================================
# Explicit Λ1 operators
# =============================================================================


def _ket3(a: int, b: int, c: int) -> int:
    return 9 * a + 3 * b + c


def explicit_vb2() -> ComplexMatrix:
    """Two-copy operator I + SWAP on the B spaces for Λ1."""
    return np.eye(9, dtype=np.complex128) + cyclic_permutation_operator(3, 2)


def explicit_vb3() -> ComplexMatrix:
    """
    Three-copy operator O1 + O2 + O3 on the B spaces for Λ1.

    With j' = j + 2 mod 3 and l' = l + 2 mod 3:
        O1 = Σ_j Σ_{a,b,c ∈ {j, j'}} |abc><abc|
        O2 = Σ_{j≠l} |jjl><jlj| + |j'jl><j'lj| + |jll><llj|
                     + |jl'l><ll'j| + |jlj><ljj| + |jlj'><ljj'|
        O3 = -Σ_{j,l,v distinct} |jlv><lvj|
    """
    vb = np.zeros((27, 27), dtype=np.complex128)

    def add(ket: tuple[int, int, int], bra: tuple[int, int, int], w: float) -> None:
        vb[_ket3(*ket), _ket3(*bra)] += w

    for j in range(3):
        jp = (j + 2) % 3
        for a in (j, jp):
            for b in (j, jp):
                for c in (j, jp):
                    add((a, b, c), (a, b, c), 1.0)

    for j in range(3):
        jp = (j + 2) % 3
        for l in range(3):
            if l == j:
                continue
            lp = (l + 2) % 3
            add((j, j, l), (j, l, j), 1.0)
            add((jp, j, l), (jp, l, j), 1.0)
            add((j, l, l), (l, l, j), 1.0)
            add((j, lp, l), (l, lp, j), 1.0)
            add((j, l, j), (l, j, j), 1.0)
            add((j, l, jp), (l, j, jp), 1.0)

    for j in range(3):
        for l in range(3):
            for v in range(3):
                if len({j, l, v}) == 3:
                    add((j, l, v), (l, v, j), -1.0)
    return vb


def explicit_observable(k: int) -> MeasurementOperator:
    """
    O^(k) for Λ1 on 3 x 3 states built from the explicit V_B operators.

    The explicit three-copy operator belongs to the opposite shift
    |l1..lk> -> |lk l1 .. l(k-1)>, so it pairs with Π_A†.

    Raises:
        ParamOutOfRange: If k is not 2 or 3
    """
    if k == 2:
        pi_a, v_b = cyclic_permutation_operator(3, 2), explicit_vb2()
    elif k == 3:
        pi_a, v_b = dagger(cyclic_permutation_operator(3, 3)), explicit_vb3()
    else:
        raise ParamOutOfRange("k", k, "{2, 3}")
    return assemble_observable(
        pi_a, v_b, LAMBDA1_DIMS, k, 2.0, label=f"explicit O^({k}) for lambda1"
    )


def explicit_vb3_residuals() -> tuple[float, float]:
    """
    Max entry differences of explicit_vb3() from (Λ1†)^{⊗3}(Π) and its adjoint.
    """
    generic = twisted_permutation(lambda1_map(), 3)
    explicit = explicit_vb3()
    return (
        float(np.max(np.abs(explicit - generic))),
        float(np.max(np.abs(explicit - dagger(generic)))),
    )


# =============================================================================
# Expectations and Born sampling
# =============================================================================


def _copies(obs: MeasurementOperator, rho: DensityMatrix) -> ComplexMatrix:
    if rho.dims != obs.dims:
        raise DimensionMismatch(
            f"Observable acts on {obs.dims.dA}x{obs.dims.dB} copies, "
            f"state is {rho.dims.dA}x{rho.dims.dB}"
        )
    return kron_power(rho.mat, obs.k)


def expectation(obs: MeasurementOperator, rho: DensityMatrix) -> float:
    """Tr[O ρ^{⊗k}]."""
    copies = _copies(obs, rho)
    return float(np.einsum("ij,ji->", obs.op, copies).real)


class BornSampler:
    """
    Outcome distribution of measuring O on ρ^{⊗k}.

    The eigendecomposition and probabilities are computed once, so repeated
    sampling with different seeds or shot counts is cheap.
    """

    def __init__(
        self,
        obs: MeasurementOperator,
        rho: DensityMatrix,
        probability_tol: float | None = None,
    ):
        self.obs = obs
        self.rho = rho
        self.probability_tol = (
            get_config().probability_tol if probability_tol is None else probability_tol
        )

    @cached_property
    def _distribution(self) -> tuple[np.ndarray, np.ndarray]:
        copies = _copies(self.obs, self.rho)
        spectrum = hermitian_eigen(self.obs.op, OBSERVABLE_HERM_TOL, vectors=True)
        vecs = spectrum.eigenvectors
        assert vecs is not None
        probs = np.einsum("ji,ji->i", vecs.conj(), copies @ vecs).real
        probs = np.clip(probs, 0.0, None)
        total = float(probs.sum())
        if abs(total - 1.0) > self.probability_tol:
            raise ProbabilityDefect(total, self.probability_tol)
        if total != 1.0:
            logger.debug("Renormalizing Born probabilities (total %.15g)", total)
            probs = probs / total
        return spectrum.eigenvalues, probs

    @property
    def outcomes(self) -> np.ndarray:
        """Eigenvalues of O, descending."""
        return self._distribution[0]

    @property
    def probabilities(self) -> np.ndarray:
        """Probability of each outcome."""
        return self._distribution[1]

    def exact_mean(self) -> float:
        return float(np.dot(self.outcomes, self.probabilities))

    def sample(self, shots: int, seed: int) -> ShotEstimate:
        """
        Mean of shots Born-rule outcomes drawn with default_rng(seed).

        Raises:
            ParamOutOfRange: If shots < 1
        """
        if shots < 1:
            raise ParamOutOfRange("shots", shots, "[1, ∞)")
        rng = np.random.default_rng(seed)
        draws = rng.choice(self.outcomes, size=shots, p=self.probabilities)
        stderr = float(np.std(draws, ddof=1) / np.sqrt(shots)) if shots > 1 else 0.0
        return ShotEstimate(
            mean=float(np.mean(draws)), stderr=stderr, shots=shots, seed=seed
        )


def born_sample(
    obs: MeasurementOperator,
    rho: DensityMatrix,
    shots: int,
    seed: int,
) -> ShotEstimate:
    """
    Simulated measurement of O on shots copies of ρ^{⊗k}.

    Raises:
        ParamOutOfRange: If shots < 1
        ProbabilityDefect: If the outcome probabilities do not sum to one
    """
    return BornSampler(obs, rho).sample(shots, seed)


def estimate_moments(
    lam: PositiveMapSpec,
    rho: DensityMatrix,
    shots: int,
    seed: int,
) -> MomentEstimate:
    """
    Shot estimates of q2 and q3 as a MomentVector for the criteria.

    q2 is sampled with seed and q3 with seed + 1. q0 is set to the full
    dimension since a rank is not measurable this way.
    """
    estimates = {
        k: born_sample(build_observable(lam, rho.dims, k), rho, shots, seed + k - 2)
        for k in (2, 3)
    }
    moments = MomentVector(
        q=(float(rho.d), 1.0, estimates[2].mean, estimates[3].mean),
        d=rho.d,
        rank_tol=get_config().rank_tol,
        stderr=(0.0, 0.0, estimates[2].stderr, estimates[3].stderr),
    )
    return MomentEstimate(estimates=estimates, moments=moments)
