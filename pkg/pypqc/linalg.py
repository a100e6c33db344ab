"""Dense complex linear algebra.

Every sum in this module runs in ascending index order so that results are
bit-reproducible from run to run, whatever BLAS numpy is linked against.
"""
import logging
import math
from typing import Literal, Sequence, Tuple, Union

import numpy as np

from pypqc.config import DefaultNumericsConfig, NumericsConfig

logger = logging.getLogger("pypqc")

MatrixLike = Union["ComplexMatrix", np.ndarray, Sequence[Sequence[complex]]]


class LinalgException(Exception):
    """Base class for linear algebra failures."""

    pass


class DimensionException(LinalgException):
    """Raised when operand shapes do not fit the operation."""

    pass


class NonFiniteException(LinalgException):
    """Raised when a matrix would contain NaN or Inf entries."""

    pass


class NotHermitianException(LinalgException):
    """Raised when a Hermitian input deviates from its conjugate transpose."""

    pass


class ConvergenceException(LinalgException):
    """Raised when the Jacobi sweeps do not converge."""

    pass


class ComplexMatrix:
    """An immutable dense complex matrix stored row-major.

    The entries are held in a read-only ``complex128`` ndarray. Construction
    copies its input and rejects non-finite entries and registers larger than
    ``max_qubits``.
    """

    __slots__ = ("data",)

    def __init__(self, data: MatrixLike):
        if isinstance(data, ComplexMatrix):
            array = data.data
        else:
            array = np.array(data, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise DimensionException(f"Expected a non-empty matrix, got {array.shape}")
        limit = 2 ** DefaultNumericsConfig["max_qubits"]
        if max(array.shape) > limit:
            raise DimensionException(f"Matrix {array.shape} exceeds supported size")
        if not np.all(np.isfinite(array)):
            raise NonFiniteException("Matrix has non-finite entries")
        array = array.copy()
        array.setflags(write=False)
        self.data: np.ndarray = array

    @classmethod
    def identity(cls, dim: int) -> "ComplexMatrix":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    @classmethod
    def unit(cls, dim: int, x: int, y: int) -> "ComplexMatrix":
        """The operator |x><y| on a `dim`-dimensional space."""
        array = np.zeros((dim, dim), dtype=np.complex128)
        array[x, y] = 1.0
        return cls(array)

    @classmethod
    def outer(cls, ket: np.ndarray, bra: np.ndarray) -> "ComplexMatrix":
        """The operator |ket><bra|."""
        return cls(np.outer(ket, np.conj(bra)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Tuple[complex, ...]:
        """Row-major entries."""
        return tuple(complex(z) for z in self.data.ravel())

    def isSquare(self) -> bool:
        return self.rows == self.cols

    def maxDistance(self, other: "ComplexMatrix") -> float:
        """Largest absolute entry of ``self - other``."""
        if self.shape != other.shape:
            raise DimensionException(f"Shape mismatch {self.shape} vs {other.shape}")
        return float(np.max(np.abs(self.data - other.data)))

    def isUnitary(self, tol: float = DefaultNumericsConfig["state_tol"]) -> bool:
        if not self.isSquare():
            return False
        product = matmul(dagger(self), self)
        return product.maxDistance(ComplexMatrix.identity(self.rows)) <= tol

    def isHermitian(self, tol: float = DefaultNumericsConfig["hermitian_tol"]) -> bool:
        return self.isSquare() and self.maxDistance(dagger(self)) <= tol

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        if self.shape != other.shape:
            raise DimensionException(f"Shape mismatch {self.shape} vs {other.shape}")
        return ComplexMatrix(self.data + other.data)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        if self.shape != other.shape:
            raise DimensionException(f"Shape mismatch {self.shape} vs {other.shape}")
        return ComplexMatrix(self.data - other.data)

    def __mul__(self, scalar: complex) -> "ComplexMatrix":
        return ComplexMatrix(self.data * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return matmul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"ComplexMatrix({self.data.tolist()!r})"


def ordered_sum(values: np.ndarray) -> complex:
    """Left-to-right sum of a flat array."""
    flat = np.asarray(values, dtype=np.complex128).ravel()
    if flat.size == 0:
        return 0j
    return complex(np.cumsum(flat)[-1])


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Matrix product, accumulating rank-1 updates in ascending inner index."""
    if a.cols != b.rows:
        raise DimensionException(f"Cannot multiply {a.shape} by {b.shape}")
    result = np.zeros((a.rows, b.cols), dtype=np.complex128)
    for k in range(a.cols):
        result += np.outer(a.data[:, k], b.data[k, :])
    return ComplexMatrix(result)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return ComplexMatrix(np.conj(a.data).T)


def tensor(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; block (j, k) of the result is ``a[j, k] * b``."""
    return ComplexMatrix(np.kron(a.data, b.data))


def trace(a: ComplexMatrix) -> complex:
    if not a.isSquare():
        raise DimensionException(f"Trace of non-square matrix {a.shape}")
    return ordered_sum(np.diagonal(a.data))


def partial_trace(
    a: ComplexMatrix,
    dims: Tuple[int, int],
    keep: Literal["first", "second"] = "first",
) -> ComplexMatrix:
    """Trace out one factor of a bipartite operator on C^dA (x) C^dB."""
    dA, dB = dims
    if not a.isSquare() or a.rows != dA * dB:
        raise DimensionException(f"Matrix {a.shape} is not {dA}x{dB} bipartite")
    blocks = a.data.reshape(dA, dB, dA, dB)
    if keep == "first":
        result = np.zeros((dA, dA), dtype=np.complex128)
        for j in range(dB):
            result += blocks[:, j, :, j]
    elif keep == "second":
        result = np.zeros((dB, dB), dtype=np.complex128)
        for i in range(dA):
            result += blocks[i, :, i, :]
    else:
        raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")
    return ComplexMatrix(result)


def hs_inner(a: ComplexMatrix, b: ComplexMatrix) -> complex:
    """Normalized Hilbert-Schmidt inner product Tr(a^dagger b) / dim.

    With this normalization every unitary has unit norm.
    """
    if not a.isSquare() or a.shape != b.shape:
        raise DimensionException(f"Inner product of {a.shape} and {b.shape}")
    return ordered_sum(np.conj(a.data) * b.data) / a.rows


def hs_norm(a: ComplexMatrix) -> float:
    return math.sqrt(max(hs_inner(a, a).real, 0.0))


def off_diagonal_norm(array: np.ndarray) -> float:
    off = array - np.diag(np.diagonal(array))
    return float(math.sqrt(ordered_sum(np.abs(off) ** 2).real))


def hermitian_eigenvalues(
    a: ComplexMatrix, config: NumericsConfig = DefaultNumericsConfig
) -> list[float]:
    """Eigenvalues of a Hermitian matrix, in descending order.

    Cyclic Jacobi: each sweep visits the pairs (p, q), p < q, in row order and
    annihilates a[p, q] with a complex rotation, a phase that makes the pivot
    real followed by a real Givens rotation.
    """
    if not a.isSquare():
        raise DimensionException(f"Eigenvalues of non-square matrix {a.shape}")
    deviation = a.maxDistance(dagger(a))
    if deviation > config["hermitian_tol"]:
        raise NotHermitianException(f"Matrix deviates from Hermitian by {deviation}")

    work = np.array(a.data, dtype=np.complex128)
    work = (work + np.conj(work).T) / 2
    size = work.shape[0]

    sweeps = 0
    while off_diagonal_norm(work) >= config["convergence_tol"]:
        if sweeps >= config["max_sweeps"]:
            raise ConvergenceException(
                f"Jacobi did not converge after {sweeps} sweeps"
                f" (off-diagonal norm {off_diagonal_norm(work)})"
            )
        for p in range(size - 1):
            for q in range(p + 1, size):
                rotate(work, p, q)
        sweeps += 1

    logger.debug(f"Jacobi converged in {sweeps} sweeps for size {size}")
    return sorted((float(x) for x in np.real(np.diagonal(work))), reverse=True)


def rotate(work: np.ndarray, p: int, q: int):
    """Apply the Jacobi rotation that zeroes work[p, q], in place."""
    apq = work[p, q]
    magnitude = abs(apq)
    if magnitude == 0.0:
        return
    phase = apq / magnitude
    app = work[p, p].real
    aqq = work[q, q].real

    theta = (aqq - app) / (2.0 * magnitude)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = work[:, p].copy()
    col_q = work[:, q] * np.conj(phase)
    work[:, p] = c * col_p - s * col_q
    work[:, q] = s * col_p + c * col_q

    row_p = work[p, :].copy()
    row_q = work[q, :] * phase
    work[p, :] = c * row_p - s * row_q
    work[q, :] = s * row_p + c * row_q

    work[p, q] = 0.0
    work[q, p] = 0.0
    work[p, p] = work[p, p].real
    work[q, q] = work[q, q].real
