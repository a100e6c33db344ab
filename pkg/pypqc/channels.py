"""Mixed-unitary superoperators E(rho) = sum_i p_i U_i (rho (x) rho_a) U_i^dagger."""
import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np

from pypqc.config import DefaultNumericsConfig, NumericsConfig
from pypqc.linalg import (
    ComplexMatrix,
    DimensionException,
    dagger,
    matmul,
    tensor,
    trace,
)
from pypqc.pauli import PauliString, all_pauli_strings, pauli_matrix, qubit_count
from pypqc.states import DensityMatrix

logger = logging.getLogger("pypqc")

PROCESS_TRACE_TOL = 1e-8


class ChannelException(Exception):
    """Raised when a channel violates its invariants or is misapplied."""

    pass


class ChannelShapeException(ChannelException):
    """Raised when two channels cannot be compared."""

    pass


@dataclass(frozen=True)
class ChannelTerm:
    """One key: unitary U applied with probability p.

    `pauli` records the string when U is exactly a Pauli matrix, so that
    documents can use the compact notation.
    """

    p: float
    unitary: ComplexMatrix
    pauli: Optional[PauliString] = None

    @classmethod
    def fromPauli(cls, p: float, x: PauliString) -> "ChannelTerm":
        return cls(p, pauli_matrix(x), x)


class MixedUnitaryChannel:
    """The superoperator {sqrt(p_i) U_i} on m qubits, n of them input.

    The m - n ancilla qubits start in the fixed state `ancilla`. Terms whose
    probability is below ``probability_floor`` are dropped; `pruned` records
    that this happened.
    """

    def __init__(
        self,
        terms: Sequence[ChannelTerm | Tuple[float, ComplexMatrix]],
        ancilla: Optional[DensityMatrix] = None,
        config: NumericsConfig = DefaultNumericsConfig,
    ):
        normalized = [
            term if isinstance(term, ChannelTerm) else ChannelTerm(*term)
            for term in terms
        ]
        if not normalized:
            raise ChannelException("A channel needs at least one term")

        if any(term.p < 0 for term in normalized):
            raise ChannelException("Channel probabilities must be non-negative")
        total = math.fsum(term.p for term in normalized)
        if abs(total - 1.0) > config["state_tol"]:
            raise ChannelException(f"Channel probabilities sum to {total}")

        kept = [t for t in normalized if t.p >= config["probability_floor"]]
        self.pruned: bool = len(kept) != len(normalized)
        if self.pruned:
            logger.warning(
                f"Dropped {len(normalized) - len(kept)} channel terms with"
                f" probability below {config['probability_floor']}"
            )
        self.terms: Tuple[ChannelTerm, ...] = tuple(kept)

        dim = self.terms[0].unitary.rows
        if dim < 2:
            raise ChannelException("A channel needs at least one input qubit")
        self.m: int = qubit_count(dim)
        for term in self.terms:
            if term.unitary.shape != (dim, dim):
                raise ChannelException("All unitaries must have the same size")
            if not term.unitary.isUnitary(config["state_tol"]):
                raise ChannelException("Channel term is not unitary")

        self.ancilla: Optional[DensityMatrix] = ancilla
        ancillaDim = ancilla.dim if ancilla is not None else 1
        if dim % ancillaDim != 0 or ancillaDim > dim:
            raise ChannelException(
                f"Ancilla of dimension {ancillaDim} does not fit unitaries of {dim}"
            )
        if dim // ancillaDim < 2:
            raise ChannelException("A channel needs at least one input qubit")
        self.n: int = qubit_count(dim // ancillaDim)

    @property
    def inputDim(self) -> int:
        return 2**self.n

    @property
    def outputDim(self) -> int:
        return 2**self.m

    @property
    def probabilities(self) -> list[float]:
        return [term.p for term in self.terms]

    @property
    def unitaries(self) -> list[ComplexMatrix]:
        return [term.unitary for term in self.terms]

    def withTerms(self, terms: Sequence[ChannelTerm]) -> "MixedUnitaryChannel":
        return MixedUnitaryChannel(terms, self.ancilla)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class ProcessMatrix:
    """Block matrix sum_{x,y} |x><y| (x) E(|x><y|) over the input basis."""

    dim: int
    mat: ComplexMatrix

    def __post_init__(self):
        if not self.mat.isSquare() or self.mat.rows % self.dim != 0:
            raise ChannelException(
                f"Process matrix {self.mat.shape} does not split into {self.dim} blocks"
            )
        if not self.mat.isHermitian():
            raise ChannelException("Process matrix is not Hermitian")
        total = trace(self.mat)
        if abs(total - self.dim) > PROCESS_TRACE_TOL:
            raise ChannelException(
                f"Process matrix trace {total} differs from input dimension {self.dim}"
            )


def extend(E: MixedUnitaryChannel, M: ComplexMatrix) -> ComplexMatrix:
    if M.shape != (E.inputDim, E.inputDim):
        raise DimensionException(
            f"Operator {M.shape} does not match channel input {E.inputDim}"
        )
    return M if E.ancilla is None else tensor(M, E.ancilla.mat)


def apply_to_operator(E: MixedUnitaryChannel, M: ComplexMatrix) -> ComplexMatrix:
    """Linear extension of E to any operator; terms summed in ascending order."""
    extended = extend(E, M)
    result = np.zeros((E.outputDim, E.outputDim), dtype=np.complex128)
    for term in E.terms:
        conjugated = matmul(matmul(term.unitary, extended), dagger(term.unitary))
        result += term.p * conjugated.data
    return ComplexMatrix(result)


def apply(
    E: MixedUnitaryChannel,
    rho: DensityMatrix,
    config: NumericsConfig = DefaultNumericsConfig,
) -> DensityMatrix:
    return DensityMatrix(apply_to_operator(E, rho.mat), config)


def process_matrix(E: MixedUnitaryChannel) -> ProcessMatrix:
    d = E.inputDim
    block = E.outputDim
    result = np.zeros((d * block, d * block), dtype=np.complex128)
    for x in range(d):
        for y in range(d):
            image = apply_to_operator(E, ComplexMatrix.unit(d, x, y))
            result[x * block : (x + 1) * block, y * block : (y + 1) * block] = image.data
    mat = ComplexMatrix(result)
    logger.debug(f"Process matrix of side {mat.rows}, trace {trace(mat)}")
    return ProcessMatrix(d, mat)


def channels_equal(
    E1: MixedUnitaryChannel,
    E2: MixedUnitaryChannel,
    tol: float = DefaultNumericsConfig["default_tol"],
) -> bool:
    if (E1.n, E1.m) != (E2.n, E2.m):
        raise ChannelShapeException(
            f"Channels act on (n, m) = {(E1.n, E1.m)} and {(E2.n, E2.m)}"
        )
    if (E1.ancilla is None) != (E2.ancilla is None) or (
        E1.ancilla is not None
        and E2.ancilla is not None
        and E1.ancilla.maxDistance(E2.ancilla) > tol
    ):
        raise ChannelShapeException("Channels use different ancillas")
    distance = process_matrix(E1).mat.maxDistance(process_matrix(E2).mat)
    return distance <= tol


def conjugate_terms(
    E: MixedUnitaryChannel,
    V: ComplexMatrix,
    side: Literal["left", "right", "both"],
    config: NumericsConfig = DefaultNumericsConfig,
) -> MixedUnitaryChannel:
    """Replace every U_i by V U_i, U_i V or V U_i V^dagger."""
    if V.shape != (E.outputDim, E.outputDim):
        raise DimensionException(f"V {V.shape} does not match channel {E.outputDim}")
    if not V.isUnitary(config["state_tol"]):
        raise ChannelException("Conjugating matrix is not unitary")

    def transform(U: ComplexMatrix) -> ComplexMatrix:
        if side == "left":
            return matmul(V, U)
        elif side == "right":
            return matmul(U, V)
        elif side == "both":
            return matmul(matmul(V, U), dagger(V))
        raise ValueError(f"side must be left, right or both, not {side!r}")

    return MixedUnitaryChannel(
        [ChannelTerm(term.p, transform(term.unitary)) for term in E.terms],
        E.ancilla,
        config,
    )


def depolarizing_channel(n: int) -> MixedUnitaryChannel:
    """The uniform Pauli twirl on n qubits."""
    p = 1.0 / 4**n
    return MixedUnitaryChannel(
        [ChannelTerm.fromPauli(p, x) for x in all_pauli_strings(n)]
    )
