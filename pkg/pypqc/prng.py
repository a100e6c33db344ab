"""Seeded pseudo-random streams and random quantum objects.

SplitMix64 is a simulation PRNG. It is NOT a cryptographic key source.
"""
import math

import numpy as np

from pypqc.linalg import ComplexMatrix, matmul

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """The splitmix64 generator, with a draw counter."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.state = self.seed
        self.draws = 0

    def nextUInt64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        self.draws += 1
        return z ^ (z >> 31)

    def nextFloat(self) -> float:
        """Uniform in [0, 1): the top 53 bits over 2**53."""
        return (self.nextUInt64() >> 11) / float(1 << 53)

    def nextGaussian(self) -> float:
        """Approximately standard normal: twelve uniforms minus six."""
        total = 0.0
        for _ in range(12):
            total += self.nextFloat()
        return total - 6.0

    def nextAngle(self) -> float:
        return 2.0 * math.pi * self.nextFloat()

    def nextIndex(self, bound: int) -> int:
        return min(int(self.nextFloat() * bound), bound - 1)


def random_amplitudes(dim: int, rng: SplitMix64) -> np.ndarray:
    """A normalized complex vector from 2 * dim gaussian draws."""
    values = np.array(
        [complex(rng.nextGaussian(), rng.nextGaussian()) for _ in range(dim)],
        dtype=np.complex128,
    )
    norm = math.sqrt(float(np.sum(np.abs(values) ** 2)))
    if norm == 0.0:
        values[0] = 1.0
        return values
    return values / norm


def givens(dim: int, p: int, q: int, theta: float, phi: float) -> np.ndarray:
    """A complex Jacobi rotation acting on coordinates p and q."""
    rotation = np.eye(dim, dtype=np.complex128)
    c = math.cos(theta)
    s = math.sin(theta)
    phase = complex(math.cos(phi), math.sin(phi))
    rotation[p, p] = c
    rotation[p, q] = -s * np.conj(phase)
    rotation[q, p] = s * phase
    rotation[q, q] = c
    return rotation


def random_unitary(dim: int, rng: SplitMix64) -> ComplexMatrix:
    """A random unitary: diagonal phases times one rotation per coordinate pair."""
    result = ComplexMatrix(
        np.diag([np.exp(1j * rng.nextAngle()) for _ in range(dim)])
    )
    for p in range(dim - 1):
        for q in range(p + 1, dim):
            rotation = givens(dim, p, q, rng.nextAngle(), rng.nextAngle())
            result = matmul(result, ComplexMatrix(rotation))
    return result
