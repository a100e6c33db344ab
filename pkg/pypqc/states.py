"""Pure states, density matrices, named state families and entropies."""
import logging
import math
from enum import Enum
from functools import reduce
from typing import Sequence, Tuple

import numpy as np

from pypqc.config import DefaultNumericsConfig, NumericsConfig
from pypqc.linalg import (
    ComplexMatrix,
    dagger,
    hermitian_eigenvalues,
    matmul,
    ordered_sum,
    tensor,
    trace,
)
from pypqc.prng import SplitMix64, random_amplitudes, random_unitary

logger = logging.getLogger("pypqc")

SQRT_HALF = 1.0 / math.sqrt(2.0)


class InvalidStateException(Exception):
    """Raised when a vector or matrix violates the state invariants."""

    pass


class PureState:
    """A norm-1 complex vector. Global phase is kept as given."""

    def __init__(
        self,
        amplitudes: Sequence[complex] | np.ndarray,
        config: NumericsConfig = DefaultNumericsConfig,
    ):
        vector = np.array(amplitudes, dtype=np.complex128).ravel()
        if vector.size < 1 or not np.all(np.isfinite(vector)):
            raise InvalidStateException("Amplitudes must be finite and non-empty")
        norm = math.sqrt(float(ordered_sum(np.abs(vector) ** 2).real))
        if abs(norm - 1.0) > config["state_tol"]:
            raise InvalidStateException(f"State has norm {norm}, expected 1")
        vector.setflags(write=False)
        self.amplitudes: np.ndarray = vector

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(vector)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "PureState") -> float:
        """|<self|other>|, the phase-blind equality test for pure states."""
        return abs(ordered_sum(np.conj(self.amplitudes) * other.amplitudes))

    def __repr__(self) -> str:
        return f"PureState({self.amplitudes.tolist()!r})"


class DensityMatrix:
    """A Hermitian, trace-1, positive semidefinite matrix.

    Validation diagonalizes the matrix; pass ``validate=False`` only for
    matrices that are density matrices by construction.
    """

    def __init__(
        self,
        mat: ComplexMatrix | np.ndarray | Sequence[Sequence[complex]],
        config: NumericsConfig = DefaultNumericsConfig,
        validate: bool = True,
    ):
        self.mat: ComplexMatrix = (
            mat if isinstance(mat, ComplexMatrix) else ComplexMatrix(mat)
        )
        if validate:
            self.check(config)

    def check(self, config: NumericsConfig = DefaultNumericsConfig):
        mat = self.mat
        if not mat.isSquare():
            raise InvalidStateException(f"Density matrix must be square, got {mat.shape}")
        if not mat.isHermitian(config["hermitian_tol"]):
            raise InvalidStateException("Density matrix is not Hermitian")
        total = trace(mat)
        if abs(total - 1.0) > config["state_tol"]:
            raise InvalidStateException(f"Density matrix has trace {total}")
        smallest = hermitian_eigenvalues(mat, config)[-1]
        if smallest < -config["state_tol"]:
            raise InvalidStateException(
                f"Density matrix has negative eigenvalue {smallest}"
            )

    @property
    def dim(self) -> int:
        return self.mat.rows

    def eigenvalues(self, config: NumericsConfig = DefaultNumericsConfig) -> list[float]:
        return hermitian_eigenvalues(self.mat, config)

    def maxDistance(self, other: "DensityMatrix") -> float:
        return self.mat.maxDistance(other.mat)

    def conjugate(self, unitary: ComplexMatrix) -> "DensityMatrix":
        """U rho U^dagger."""
        return DensityMatrix(
            matmul(matmul(unitary, self.mat), dagger(unitary)), validate=False
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.mat == other.mat

    def __repr__(self) -> str:
        return f"DensityMatrix({self.mat.data.tolist()!r})"


class RealProductState:
    """The product state (x)_i (cos t_i |0> + sin t_i |1>)."""

    def __init__(self, angles: Sequence[float]):
        if len(angles) < 1:
            raise InvalidStateException("A real product state needs at least one qubit")
        self.angles: Tuple[float, ...] = tuple(
            float(theta) % (2.0 * math.pi) for theta in angles
        )

    @property
    def n(self) -> int:
        return len(self.angles)

    def toPureState(self) -> PureState:
        factors = [
            np.array([math.cos(theta), math.sin(theta)], dtype=np.complex128)
            for theta in self.angles
        ]
        return PureState(reduce(np.kron, factors))


class BellKind(str, Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


def density_of(phi: PureState) -> DensityMatrix:
    """|phi><phi|."""
    return DensityMatrix(
        ComplexMatrix.outer(phi.amplitudes, phi.amplitudes), validate=False
    )


def mix(
    states: Sequence[Tuple[float, DensityMatrix]],
    config: NumericsConfig = DefaultNumericsConfig,
) -> DensityMatrix:
    """The convex combination sum_i w_i rho_i."""
    if not states:
        raise InvalidStateException("Cannot mix an empty ensemble")
    weights = [weight for weight, _ in states]
    if any(weight < 0 for weight in weights):
        raise InvalidStateException(f"Negative mixing weight in {weights}")
    total = math.fsum(weights)
    if abs(total - 1.0) > config["state_tol"]:
        raise InvalidStateException(f"Mixing weights sum to {total}")
    dim = states[0][1].dim
    result = np.zeros((dim, dim), dtype=np.complex128)
    for weight, rho in states:
        if rho.dim != dim:
            raise InvalidStateException("Cannot mix states of different dimensions")
        result += weight * rho.mat.data
    return DensityMatrix(result, config)


def completely_mixed(dim: int) -> DensityMatrix:
    if dim < 1:
        raise InvalidStateException(f"Dimension must be positive, got {dim}")
    return DensityMatrix(ComplexMatrix.identity(dim) * (1.0 / dim), validate=False)


def bell_state(kind: BellKind | str) -> PureState:
    kind = BellKind(kind)
    return PureState(
        {
            BellKind.PHI_PLUS: [SQRT_HALF, 0, 0, SQRT_HALF],
            BellKind.PHI_MINUS: [SQRT_HALF, 0, 0, -SQRT_HALF],
            BellKind.PSI_PLUS: [0, SQRT_HALF, SQRT_HALF, 0],
            BellKind.PSI_MINUS: [0, SQRT_HALF, -SQRT_HALF, 0],
        }[kind]
    )


def tensor_states(first: DensityMatrix, second: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(tensor(first.mat, second.mat), validate=False)


def entropy_term(p: float) -> float:
    return 0.0 if p == 0.0 else -p * math.log2(p)


def von_neumann_entropy(
    rho: DensityMatrix, config: NumericsConfig = DefaultNumericsConfig
) -> float:
    """S(rho) in bits.

    Eigenvalues in [-state_tol, 0) are numerical noise and count as zero;
    anything more negative is an invalid state.
    """
    total = 0.0
    for value in rho.eigenvalues(config):
        if value < -config["state_tol"]:
            raise InvalidStateException(f"Negative eigenvalue {value} in entropy")
        total += entropy_term(max(value, 0.0))
    return total


def shannon_entropy(
    p: Sequence[float], config: NumericsConfig = DefaultNumericsConfig
) -> float:
    """H(p) in bits."""
    if any(value < 0 for value in p):
        raise InvalidStateException(f"Negative probability in {list(p)}")
    total = math.fsum(p)
    if abs(total - 1.0) > config["state_tol"]:
        raise InvalidStateException(f"Probabilities sum to {total}")
    result = 0.0
    for value in p:
        result += entropy_term(value)
    return result


def random_pure_state(dim: int, rng: SplitMix64) -> PureState:
    return PureState(random_amplitudes(dim, rng))


def random_density(dim: int, rng: SplitMix64, rank: int = 0) -> DensityMatrix:
    """A seeded random mixed state of the given rank (full rank by default)."""
    rank = rank or dim
    weights = [rng.nextFloat() + 1e-3 for _ in range(rank)]
    total = math.fsum(weights)
    return mix(
        [
            (weight / total, density_of(random_pure_state(dim, rng)))
            for weight in weights
        ]
    )


def random_real_product(n: int, rng: SplitMix64) -> RealProductState:
    return RealProductState([rng.nextAngle() for _ in range(n)])


def random_conjugation(rho: DensityMatrix, rng: SplitMix64) -> DensityMatrix:
    return rho.conjugate(random_unitary(rho.dim, rng))
