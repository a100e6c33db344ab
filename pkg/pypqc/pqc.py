"""Private quantum channels [S, E, rho_a, rho_0] and their verifier.

An instance is private when every state of S, extended by the ancilla and sent
through E, comes out as the same target rho_0.
"""
import dataclasses
import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from pypqc.channels import (
    ChannelTerm,
    MixedUnitaryChannel,
    apply_to_operator,
    depolarizing_channel,
)
from pypqc.config import DefaultNumericsConfig, NumericsConfig
from pypqc.linalg import ComplexMatrix, matmul, tensor
from pypqc.pauli import all_pauli_strings, pauli_index, pauli_matrix
from pypqc.prng import SplitMix64
from pypqc.states import (
    SQRT_HALF,
    DensityMatrix,
    PureState,
    RealProductState,
    completely_mixed,
    density_of,
    random_pure_state,
    random_real_product,
    shannon_entropy,
    tensor_states,
)

logger = logging.getLogger("pypqc")

MIN_PAD_QUBITS = 1
MAX_PAD_QUBITS = 5


class PQCException(Exception):
    """Base class for private-channel failures."""

    pass


class PreconditionException(PQCException):
    """Raised when an operation is called outside its domain."""

    pass


class TheoremViolationException(PQCException):
    """Raised when a verified instance contradicts a proven bound.

    This signals a defect in the numerics, never a property of the input.
    """

    pass


class StateSet(ABC):
    """A set S of pure n-qubit states."""

    n: int

    @property
    def dim(self) -> int:
        return 2**self.n

    @abstractmethod
    def randomState(self, rng: SplitMix64) -> PureState:
        """Draw a member of S."""

    def describe(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class FullHilbert(StateSet):
    """Every pure state of n qubits."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise PQCException(f"FullHilbert needs n >= 1, got {self.n}")

    def randomState(self, rng: SplitMix64) -> PureState:
        return random_pure_state(self.dim, rng)

    def describe(self) -> str:
        return f"FullHilbert({self.n})"


@dataclass(frozen=True)
class RealProduct(StateSet):
    """Products of n real-amplitude qubits cos t |0> + sin t |1>."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise PQCException(f"RealProduct needs n >= 1, got {self.n}")

    def randomState(self, rng: SplitMix64) -> PureState:
        return random_real_product(self.n, rng).toPureState()

    def describe(self) -> str:
        return f"RealProduct({self.n})"


@dataclass(frozen=True)
class ClassicalStates(StateSet):
    """The first k basis states |0>, ..., |k-1> of an n-qubit register.

    n defaults to the smallest register holding k states.
    """

    k: int
    n: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise PQCException(f"ClassicalStates needs k >= 2, got {self.k}")
        if self.n == 0:
            object.__setattr__(self, "n", (self.k - 1).bit_length())
        if self.k > 2**self.n:
            raise PQCException(f"{self.k} classical states do not fit {self.n} qubits")

    def state(self, index: int) -> PureState:
        return PureState.basis(self.dim, index)

    def randomState(self, rng: SplitMix64) -> PureState:
        return self.state(rng.nextIndex(self.k))

    def isComplete(self) -> bool:
        return self.k == self.dim

    def describe(self) -> str:
        return f"ClassicalStates({self.k})"


@dataclass(frozen=True)
class ExplicitList(StateSet):
    """A finite list of states of equal dimension."""

    states: Tuple[PureState, ...]
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise PQCException("ExplicitList needs at least one state")
        dim = self.states[0].dim
        if any(state.dim != dim for state in self.states):
            raise PQCException("ExplicitList states must have equal dimension")
        n = dim.bit_length() - 1
        if dim < 2 or 2**n != dim:
            raise PQCException(f"State dimension {dim} is not a qubit register")
        object.__setattr__(self, "n", n)

    def randomState(self, rng: SplitMix64) -> PureState:
        return self.states[rng.nextIndex(len(self.states))]

    def describe(self) -> str:
        return f"ExplicitList({len(self.states)} states)"


@dataclass(frozen=True)
class PQCInstance:
    """The tuple [S, E, rho_a, rho_0]; the ancilla lives in the channel."""

    states: StateSet
    channel: MixedUnitaryChannel
    target: DensityMatrix

    def __post_init__(self):
        if self.channel.n != self.states.n:
            raise PQCException(
                f"Channel input of {self.channel.n} qubits does not match"
                f" {self.states.describe()}"
            )
        if self.target.dim != self.channel.outputDim:
            raise PQCException(
                f"Target of dimension {self.target.dim} does not match channel"
                f" output {self.channel.outputDim}"
            )

    @property
    def n(self) -> int:
        return self.channel.n

    @property
    def m(self) -> int:
        return self.channel.m

    @property
    def ancilla(self) -> Optional[DensityMatrix]:
        return self.channel.ancilla

    def isAncillaFree(self) -> bool:
        return self.channel.ancilla is None


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    worst_deviation: float
    witness: Optional[str]
    tolerance: float
    checked: int


def ket_label(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def format_state(phi: PureState) -> str:
    return "[" + ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in phi.amplitudes) + "]"


def real_product_grid(
    n: int, config: NumericsConfig = DefaultNumericsConfig
) -> Iterator[Tuple[float, ...]]:
    """Angle tuples from {0, 2pi/g, ...}^n, at most grid_cap of them.

    When the full grid is larger than the cap, the tuples are a coarser
    lattice of angles in [0, pi) on every qubit, followed by a sweep of each
    single qubit through all g angles with the others at 0. The sweeps catch
    any deviation confined to one qubit; with three or more lattice angles
    per qubit the lattice alone spans every real product operator.
    """
    count = config["grid_angles"]
    cap = config["grid_cap"]
    angles = [2.0 * math.pi * j / count for j in range(count)]
    if count**n <= cap:
        yield from itertools.product(angles, repeat=n)
        return

    sweeps = n * (count - 1)
    coarse = 1
    while (coarse + 1) ** n + sweeps <= cap:
        coarse += 1
    lattice = [math.pi * j / coarse for j in range(coarse)]
    logger.debug(
        f"Real product grid capped at {cap}: {coarse} angles per qubit"
        f" and {sweeps} single-qubit sweeps"
    )

    def capped() -> Iterator[Tuple[float, ...]]:
        yield from itertools.product(lattice, repeat=n)
        for qubit in range(n):
            for theta in angles[1:]:
                yield tuple(theta if i == qubit else 0.0 for i in range(n))

    yield from itertools.islice(capped(), cap)


def checked_inputs(
    inst: PQCInstance, config: NumericsConfig
) -> Iterator[Tuple[str, ComplexMatrix, bool]]:
    """(label, operator, diagonal) triples the verifier must check.

    Diagonal operators must map to rho_0, off-diagonal ones to zero.
    """
    states = inst.states
    d = states.dim
    if isinstance(states, FullHilbert):
        for x in range(d):
            for y in range(d):
                label = f"|{ket_label(x, states.n)}><{ket_label(y, states.n)}|"
                yield label, ComplexMatrix.unit(d, x, y), x == y
    elif isinstance(states, ClassicalStates):
        for x in range(states.k):
            label = f"|{ket_label(x, states.n)}>"
            yield label, ComplexMatrix.unit(d, x, x), True
    elif isinstance(states, RealProduct):
        for angleTuple in real_product_grid(states.n, config):
            phi = RealProductState(angleTuple).toPureState()
            yield f"angles {angleTuple}", density_of(phi).mat, True
        rng = SplitMix64(config["verify_seed"])
        for _ in range(config["random_tuples"]):
            product = random_real_product(states.n, rng)
            yield f"angles {product.angles}", density_of(product.toPureState()).mat, True
    elif isinstance(states, ExplicitList):
        for phi in states.states:
            yield format_state(phi), density_of(phi).mat, True
    else:
        raise PreconditionException(f"Unsupported state set {states.describe()}")


def verify_pqc(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> VerificationReport:
    """Check E(|phi><phi| (x) rho_a) == rho_0 over the state set.

    FullHilbert sets are checked exactly on the operator basis |x><y|, which
    suffices by linearity. The witness is the first violating input.
    """
    tol = config["default_tol"] if tol is None else tol
    zero = ComplexMatrix.zeros(inst.channel.outputDim, inst.channel.outputDim)
    worst = 0.0
    witness: Optional[str] = None
    checked = 0
    for label, operator, diagonal in checked_inputs(inst, config):
        image = apply_to_operator(inst.channel, operator)
        expected = inst.target.mat if diagonal else zero
        deviation = image.maxDistance(expected)
        checked += 1
        if deviation > worst:
            worst = deviation
        if deviation > tol and witness is None:
            witness = label
    report = VerificationReport(witness is None, worst, witness, tol, checked)
    logger.debug(
        f"Verified {inst.states.describe()} over {checked} inputs:"
        f" ok={report.ok} worst={worst:.3e}"
    )
    return report


def check_pad_size(n: int):
    if not MIN_PAD_QUBITS <= n <= MAX_PAD_QUBITS:
        raise PreconditionException(
            f"n must be between {MIN_PAD_QUBITS} and {MAX_PAD_QUBITS}, got {n}"
        )


def build_pauli_otp(n: int) -> PQCInstance:
    """The quantum one-time pad: 4^n uniform Pauli strings, target I/2^n."""
    check_pad_size(n)
    return PQCInstance(FullHilbert(n), depolarizing_channel(n), completely_mixed(2**n))


def build_real_otp(n: int) -> PQCInstance:
    """The real-amplitude pad: 2^n uniform strings over {I, Y}."""
    check_pad_size(n)
    p = 1.0 / 2**n
    terms = [ChannelTerm.fromPauli(p, x) for x in all_pauli_strings(n, (0, 2))]
    return PQCInstance(
        RealProduct(n), MixedUnitaryChannel(terms), completely_mixed(2**n)
    )


HADAMARD = ComplexMatrix([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]])


def build_example_pqc() -> PQCInstance:
    """A two-state private channel whose target is not completely mixed."""
    states = ExplicitList(
        (PureState([1.0, 0.0]), PureState([SQRT_HALF, SQRT_HALF]))
    )
    channel = MixedUnitaryChannel(
        [(0.5, ComplexMatrix.identity(2)), (0.5, HADAMARD)]
    )
    target = DensityMatrix([[0.75, 0.25], [0.25, 0.25]])
    return PQCInstance(states, channel, target)


def build_classical_otp(bits: int = 1, redundancy: int = 1) -> PQCInstance:
    """The classical one-time pad on C_{2^bits}: X-strings, uniform.

    `redundancy` repeats every key that many times, which adds key entropy
    without adding privacy.
    """
    check_pad_size(bits)
    strings = list(all_pauli_strings(bits, (0, 1)))
    p = 1.0 / (len(strings) * redundancy)
    terms = [
        ChannelTerm.fromPauli(p, x) for x in strings for _ in range(redundancy)
    ]
    return PQCInstance(
        ClassicalStates(2**bits),
        MixedUnitaryChannel(terms),
        completely_mixed(2**bits),
    )


def restrict_states(inst: PQCInstance, states: StateSet) -> PQCInstance:
    """The same channel and target over another state set (not re-verified)."""
    return dataclasses.replace(inst, states=states)


def attach_ancilla(inst: PQCInstance, ancilla: DensityMatrix) -> PQCInstance:
    """Extend each U_i to U_i (x) I on an appended ancilla.

    The result is private with target rho_0 (x) rho_a whenever `inst` is.
    """
    if not inst.isAncillaFree():
        raise PreconditionException("Instance already carries an ancilla")
    identity = ComplexMatrix.identity(ancilla.dim)
    terms = [
        ChannelTerm(term.p, tensor(term.unitary, identity)) for term in inst.channel.terms
    ]
    return PQCInstance(
        inst.states,
        MixedUnitaryChannel(terms, ancilla),
        tensor_states(inst.target, ancilla),
    )


def key_entropy(inst: PQCInstance) -> float:
    """Entropy, in bits, of the key distribution."""
    return shannon_entropy(inst.channel.probabilities)


def lifting_unitary(n: int) -> ComplexMatrix:
    """The 4^n x 4^n encoder |x> -> (sigma_x (x) I) |Phi_n>.

    |Phi_n> = 2^(-n/2) sum_i |i>|i> is n Bell pairs between the two halves.
    Column x (pauli_index order) is the Pauli-displaced pair state; these form
    an orthonormal basis, so the matrix is unitary.
    """
    d = 2**n
    maximally = np.zeros(d * d, dtype=np.complex128)
    for i in range(d):
        maximally[i * d + i] = 1.0 / math.sqrt(d)
    identity = ComplexMatrix.identity(d)
    columns = np.zeros((d * d, d * d), dtype=np.complex128)
    for x in all_pauli_strings(n):
        displaced = tensor(pauli_matrix(x), identity).data @ maximally
        columns[:, pauli_index(x)] = displaced
    return ComplexMatrix(columns)


def lift_to_classical(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> PQCInstance:
    """Turn a private channel for all n-qubit states into one for C_{4^n}.

    U'_i = (I (x) U_i) U keeps the key distribution; the target becomes
    I/2^n (x) rho_0.
    """
    if not isinstance(inst.states, FullHilbert):
        raise PreconditionException(
            f"Lifting needs a FullHilbert instance, got {inst.states.describe()}"
        )
    if not inst.isAncillaFree():
        raise PreconditionException("Lifting needs an ancilla-free instance")
    report = verify_pqc(inst, tol, config)
    if not report.ok:
        raise PreconditionException(f"Base instance is not private: {report.witness}")

    n = inst.n
    encoder = lifting_unitary(n)
    identity = ComplexMatrix.identity(2**n)
    terms = [
        ChannelTerm(term.p, matmul(tensor(identity, term.unitary), encoder))
        for term in inst.channel.terms
    ]
    return PQCInstance(
        ClassicalStates(4**n, 2 * n),
        MixedUnitaryChannel(terms, config=config),
        tensor_states(completely_mixed(2**n), inst.target),
    )
