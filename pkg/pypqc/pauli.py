"""n-qubit Pauli strings and the Pauli operator basis.

Strings are indexed big-endian in base 4: the symbol of qubit 1 is the most
significant digit, so [1, 2] has index 1 * 4 + 2 = 6. Every module uses this
convention, including the compact "IXYZ" letters of the document format.
"""
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence, Tuple

import numpy as np

from pypqc.linalg import ComplexMatrix, DimensionException, hs_inner, tensor

LETTERS = "IXYZ"

SIGMA = (
    ComplexMatrix([[1, 0], [0, 1]]),
    ComplexMatrix([[0, 1], [1, 0]]),
    ComplexMatrix([[0, -1j], [1j, 0]]),
    ComplexMatrix([[1, 0], [0, -1]]),
)


class PauliException(ValueError):
    """Raised for malformed Pauli strings or coefficient vectors."""

    pass


@dataclass(frozen=True)
class PauliString:
    """x in {0,1,2,3}^n naming sigma_x1 (x) ... (x) sigma_xn."""

    symbols: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.symbols) < 1:
            raise PauliException("A Pauli string needs at least one qubit")
        if any(s not in (0, 1, 2, 3) for s in self.symbols):
            raise PauliException(f"Pauli symbols must be in 0..3, got {self.symbols}")

    @classmethod
    def fromLetters(cls, letters: str) -> "PauliString":
        try:
            return cls(tuple(LETTERS.index(c) for c in letters.upper()))
        except ValueError:
            raise PauliException(f"Invalid Pauli letters {letters!r}") from None

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def letters(self) -> str:
        return "".join(LETTERS[s] for s in self.symbols)

    @property
    def index(self) -> int:
        return pauli_index(self)


@dataclass(frozen=True)
class PauliCoefficients:
    """Coefficients of an operator in the basis {sigma_x}, indexed by pauli_index."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.coeffs.shape != (4**self.n,):
            raise PauliException(
                f"Expected {4 ** self.n} coefficients, got {self.coeffs.shape}"
            )

    def __getitem__(self, x: PauliString | int) -> complex:
        index = x if isinstance(x, int) else pauli_index(x)
        return complex(self.coeffs[index])

    def squaredNorm(self) -> float:
        total = 0.0
        for c in self.coeffs:
            total += abs(c) ** 2
        return total


def pauli_index(x: PauliString) -> int:
    index = 0
    for symbol in x.symbols:
        index = 4 * index + symbol
    return index


def pauli_decode(index: int, n: int) -> PauliString:
    if n < 1 or not 0 <= index < 4**n:
        raise PauliException(f"Index {index} out of range for {n} qubits")
    symbols = []
    for _ in range(n):
        index, symbol = divmod(index, 4)
        symbols.append(symbol)
    return PauliString(tuple(reversed(symbols)))


def all_pauli_strings(n: int, alphabet: Sequence[int] = (0, 1, 2, 3)):
    """Strings over `alphabet` in ascending pauli_index order."""
    for index in range(4**n):
        x = pauli_decode(index, n)
        if all(s in alphabet for s in x.symbols):
            yield x


@lru_cache(maxsize=None)
def pauli_matrix(x: PauliString) -> ComplexMatrix:
    return reduce(tensor, (SIGMA[s] for s in x.symbols))


def qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionException(f"Dimension {dim} is not a power of two")
    return n


def pauli_decompose(M: ComplexMatrix) -> PauliCoefficients:
    """coeffs[x] = <sigma_x, M>; Parseval gives sum |coeffs|^2 == ||M||^2."""
    if not M.isSquare():
        raise DimensionException(f"Cannot decompose non-square {M.shape}")
    n = qubit_count(M.rows)
    coeffs = np.array(
        [hs_inner(pauli_matrix(pauli_decode(i, n)), M) for i in range(4**n)],
        dtype=np.complex128,
    )
    return PauliCoefficients(n, coeffs)


def pauli_reconstruct(c: PauliCoefficients) -> ComplexMatrix:
    """sum_x coeffs[x] sigma_x, summed in ascending index."""
    dim = 2**c.n
    result = np.zeros((dim, dim), dtype=np.complex128)
    for index in range(4**c.n):
        result += c.coeffs[index] * pauli_matrix(pauli_decode(index, c.n)).data
    return ComplexMatrix(result)
