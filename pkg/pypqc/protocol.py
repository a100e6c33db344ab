"""Alice, Bob and Eve over a one-way quantum channel.

Alice and Bob share a KeySource seed; each draws the same key sequence from
their own source. Alice encrypts, serializes the ciphertext and puts it on an
asyncio queue that Eve taps passively; Bob parses, decrypts and discards the
ancilla.

Keys come from splitmix64, which is NOT a cryptographic key source.
"""
import asyncio
import json
import logging
import math
from dataclasses import dataclass
from logging import Logger
from typing import Optional, Sequence

import numpy as np

from pypqc.config import DefaultNumericsConfig, NumericsConfig
from pypqc.document_types import TranscriptDocument
from pypqc.documents import density_to_document, parse_density, serialize_density
from pypqc.linalg import ComplexMatrix, dagger, matmul, partial_trace, tensor
from pypqc.pqc import PQCInstance
from pypqc.prng import SplitMix64
from pypqc.states import DensityMatrix, PureState, density_of


class KeyException(ValueError):
    """Raised for invalid keys or key distributions."""

    pass


class KeySource:
    """A seeded stream of key indices distributed as `distribution`.

    Stateful: one source per party.
    """

    def __init__(
        self,
        seed: int,
        distribution: Sequence[float],
        config: NumericsConfig = DefaultNumericsConfig,
    ):
        if not distribution or any(p < 0 for p in distribution):
            raise KeyException(f"Invalid key distribution {list(distribution)}")
        if abs(math.fsum(distribution) - 1.0) > config["state_tol"]:
            raise KeyException("Key distribution does not sum to 1")
        self.seed = seed
        self.distribution = tuple(float(p) for p in distribution)
        self.rng = SplitMix64(seed)
        self.cdf: list[float] = []
        total = 0.0
        for p in self.distribution:
            total += p
            self.cdf.append(total)
        self.lastIndex = max(i for i, p in enumerate(self.distribution) if p > 0)

    @property
    def draws(self) -> int:
        return self.rng.draws

    def draw(self) -> int:
        u = self.rng.nextFloat()
        for index, bound in enumerate(self.cdf):
            if bound > u:
                return index
        return self.lastIndex


def keygen(src: KeySource) -> int:
    """Next key index by inverse CDF over the source's distribution."""
    return src.draw()


@dataclass(frozen=True)
class Transcript:
    key_index: int
    plaintext: DensityMatrix
    ciphertext: DensityMatrix
    recovered: DensityMatrix

    @property
    def deviation(self) -> float:
        return self.recovered.maxDistance(self.plaintext)

    def dumps(self) -> str:
        document: TranscriptDocument = {
            "key_index": self.key_index,
            "plaintext": density_to_document(self.plaintext),
            "ciphertext": density_to_document(self.ciphertext),
            "recovered": density_to_document(self.recovered),
        }
        return json.dumps(document, indent=2) + "\n"


@dataclass(frozen=True)
class EveEstimate:
    estimate: DensityMatrix
    distance: float


def check_key(inst: PQCInstance, key: int):
    if not 0 <= key < len(inst.channel):
        raise KeyException(f"Key {key} out of range for {len(inst.channel)} keys")


def extend_plaintext(inst: PQCInstance, phi: PureState) -> ComplexMatrix:
    if phi.dim != inst.channel.inputDim:
        raise KeyException(
            f"Plaintext of dimension {phi.dim} does not match {inst.channel.inputDim}"
        )
    rho = density_of(phi).mat
    return rho if inst.ancilla is None else tensor(rho, inst.ancilla.mat)


def encrypt(inst: PQCInstance, key: int, phi: PureState) -> DensityMatrix:
    """U_i (|phi><phi| (x) rho_a) U_i^dagger."""
    check_key(inst, key)
    unitary = inst.channel.terms[key].unitary
    extended = extend_plaintext(inst, phi)
    return DensityMatrix(matmul(matmul(unitary, extended), dagger(unitary)), validate=False)


def decrypt(inst: PQCInstance, key: int, cipher: DensityMatrix) -> DensityMatrix:
    """Undo U_i and discard the ancilla."""
    check_key(inst, key)
    if cipher.dim != inst.channel.outputDim:
        raise KeyException(
            f"Ciphertext of dimension {cipher.dim} does not match"
            f" {inst.channel.outputDim}"
        )
    unitary = inst.channel.terms[key].unitary
    restored = matmul(matmul(dagger(unitary), cipher.mat), unitary)
    if inst.ancilla is not None:
        restored = partial_trace(
            restored, (inst.channel.inputDim, inst.ancilla.dim), "first"
        )
    return DensityMatrix(restored, validate=False)


def eve_view(inst: PQCInstance) -> DensityMatrix:
    """What Eve sees on the channel of a private instance, whatever was sent."""
    return inst.target


def estimate_eve_state(
    inst: PQCInstance, phi: PureState, samples: int, seed: int = 0
) -> EveEstimate:
    """Average ciphertext over sampled keys; samples == 0 enumerates all keys exactly."""
    if samples < 0:
        raise KeyException(f"samples must be non-negative, got {samples}")
    outputDim = inst.channel.outputDim
    total = np.zeros((outputDim, outputDim), dtype=np.complex128)
    if samples == 0:
        for key, term in enumerate(inst.channel.terms):
            total += term.p * encrypt(inst, key, phi).mat.data
    else:
        source = KeySource(seed, inst.channel.probabilities)
        for _ in range(samples):
            total += encrypt(inst, keygen(source), phi).mat.data
        total /= samples
    estimate = DensityMatrix(total, validate=False)
    return EveEstimate(estimate, estimate.maxDistance(inst.target))


class ProtocolSession:
    """One run of the one-way protocol between Alice and Bob, tapped by Eve."""

    def __init__(self, inst: PQCInstance, seed: int, logger: Optional[Logger] = None):
        self.inst = inst
        self.seed = seed
        self.logger = logger or logging.getLogger("pypqc")
        self.aliceKeys = KeySource(seed, inst.channel.probabilities)
        self.bobKeys = KeySource(seed, inst.channel.probabilities)
        self.channel: asyncio.Queue[str] = asyncio.Queue()
        self.tapped: list[str] = []

    async def alice(self, phi: PureState) -> tuple[int, DensityMatrix]:
        key = keygen(self.aliceKeys)
        cipher = encrypt(self.inst, key, phi)
        document = serialize_density(cipher)
        self.tapped.append(document)
        self.logger.debug(f"Alice sent ciphertext under key {key}")
        await self.channel.put(document)
        return key, cipher

    async def bob(self) -> tuple[int, DensityMatrix]:
        document = await self.channel.get()
        cipher = parse_density(document)
        key = keygen(self.bobKeys)
        self.logger.debug(f"Bob received ciphertext, decrypting with key {key}")
        return key, decrypt(self.inst, key, cipher)

    async def run(self, phi: PureState) -> Transcript:
        (key, cipher), (bobKey, recovered) = await asyncio.gather(
            self.alice(phi), self.bob()
        )
        if key != bobKey:
            raise KeyException(f"Alice used key {key} but Bob drew {bobKey}")
        transcript = Transcript(key, density_of(phi), cipher, recovered)
        self.logger.debug(f"Round trip deviation {transcript.deviation:.3e}")
        return transcript

    def eveEstimate(self) -> DensityMatrix:
        """Eve's empirical state: the average of everything she tapped."""
        if not self.tapped:
            raise KeyException("Eve has not observed any ciphertext")
        matrices = [parse_density(document).mat.data for document in self.tapped]
        return DensityMatrix(sum(matrices) / len(matrices), validate=False)


async def run_protocol(inst: PQCInstance, phi: PureState, seed: int) -> Transcript:
    return await ProtocolSession(inst, seed).run(phi)
