"""Numerical certificates for the key-size theorems.

Each certifier checks its preconditions, raises PreconditionException when
they fail, and otherwise reports the quantities its theorem bounds.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pypqc.config import DefaultNumericsConfig, NumericsConfig
from pypqc.pauli import pauli_decompose
from pypqc.pqc import (
    ClassicalStates,
    FullHilbert,
    PQCInstance,
    PreconditionException,
    RealProduct,
    TheoremViolationException,
    key_entropy,
    restrict_states,
    verify_pqc,
)
from pypqc.states import completely_mixed, von_neumann_entropy

logger = logging.getLogger("pypqc")


@dataclass(frozen=True)
class Theorem4Report:
    max_p: float
    term_count: int
    parseval_ok: bool
    bound_ok: bool

    @property
    def ok(self) -> bool:
        return self.parseval_ok and self.bound_ok


@dataclass(frozen=True)
class Theorem6Report:
    m: int
    S_rho0: float
    H_p: float
    S_ancilla: float
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def upper_gap(self) -> float:
        return self.H_p + self.S_ancilla - self.S_rho0


def resolve_tol(tol: Optional[float], config: NumericsConfig) -> float:
    return config["default_tol"] if tol is None else tol


def certify_theorem3(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> bool:
    """A private, ancilla-free channel whose state set mixes to I/2^n has rho_0 = I/2^n.

    Only FullHilbert and complete ClassicalStates sets are accepted; there the
    completely mixed state is evidently a mixture of members.
    """
    tol = resolve_tol(tol, config)
    if not inst.isAncillaFree():
        raise PreconditionException("Theorem 3 applies to ancilla-free instances")
    states = inst.states
    if not (
        isinstance(states, FullHilbert)
        or (isinstance(states, ClassicalStates) and states.isComplete())
    ):
        raise PreconditionException(
            f"Cannot establish that {states.describe()} mixes to the identity"
        )

    if not verify_pqc(inst, tol, config).ok:
        return False
    deviation = inst.target.maxDistance(completely_mixed(states.dim))
    if deviation > tol:
        logger.error(f"Verified instance has target {deviation} away from I/2^n")
        raise TheoremViolationException(
            f"Private channel with target {deviation} from the completely mixed state"
        )
    return True


def certify_theorem4(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> Theorem4Report:
    """Bound every key probability of a depolarizing channel by 4^-n.

    Each sqrt(p_i) U_i is expanded in the Pauli basis; Parseval returns p_i,
    and unitary equivalence with the Pauli pad caps it at 4^-n. Hence
    N >= 4^n and H(p) >= 2n.
    """
    tol = resolve_tol(tol, config)
    if not inst.isAncillaFree():
        raise PreconditionException("Theorem 4 applies to ancilla-free instances")
    if not isinstance(inst.states, FullHilbert):
        raise PreconditionException(
            f"Theorem 4 needs a FullHilbert instance, got {inst.states.describe()}"
        )
    if inst.target.maxDistance(completely_mixed(inst.states.dim)) > tol:
        raise PreconditionException("Theorem 4 needs the completely mixed target")
    report = verify_pqc(inst, tol, config)
    if not report.ok:
        raise PreconditionException(f"Instance is not private: {report.witness}")

    bound = 1.0 / 4**inst.n
    parseval_ok = True
    bound_ok = True
    for term in inst.channel.terms:
        coefficients = pauli_decompose(term.unitary * math.sqrt(term.p))
        if abs(coefficients.squaredNorm() - term.p) > tol:
            parseval_ok = False
        if term.p > bound + tol:
            bound_ok = False
    result = Theorem4Report(
        max(inst.channel.probabilities), len(inst.channel), parseval_ok, bound_ok
    )
    if not result.ok:
        logger.error(f"Theorem 4 certificate failed: {result}")
    return result


def certify_theorem6(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> Theorem6Report:
    """The entropy sandwich m + S(rho_a) <= S(rho_0) <= H(p) + S(rho_a).

    Applies to private channels on all 2^m classical m-bit strings.
    """
    tol = resolve_tol(tol, config)
    states = inst.states
    if not isinstance(states, ClassicalStates) or not states.isComplete():
        raise PreconditionException(
            f"Theorem 6 needs ClassicalStates(2^m), got {states.describe()}"
        )
    report = verify_pqc(inst, tol, config)
    if not report.ok:
        raise PreconditionException(f"Instance is not private: {report.witness}")

    S_rho0 = von_neumann_entropy(inst.target, config)
    H_p = key_entropy(inst)
    S_ancilla = 0.0 if inst.ancilla is None else von_neumann_entropy(inst.ancilla, config)
    m = states.n
    result = Theorem6Report(
        m,
        S_rho0,
        H_p,
        S_ancilla,
        lower_ok=S_rho0 >= m + S_ancilla - tol,
        upper_ok=S_rho0 <= H_p + S_ancilla + tol,
    )
    if not result.ok:
        logger.error(f"Entropy sandwich violated by a verified instance: {result}")
    return result


def certify_real_key_bound(
    inst: PQCInstance,
    tol: Optional[float] = None,
    config: NumericsConfig = DefaultNumericsConfig,
) -> Theorem6Report:
    """Key entropy of a real-product private channel is at least n.

    The classical strings are real product states, so the instance restricted
    to C_{2^n} is private and the entropy sandwich applies with m = n.
    """
    if not isinstance(inst.states, RealProduct):
        raise PreconditionException(
            f"Expected a RealProduct instance, got {inst.states.describe()}"
        )
    report = verify_pqc(inst, tol, config)
    if not report.ok:
        raise PreconditionException(f"Instance is not private: {report.witness}")
    classical = restrict_states(inst, ClassicalStates(2**inst.n))
    return certify_theorem6(classical, tol, config)


@dataclass(frozen=True)
class DepolarizerSearchReport:
    min_distance: float
    best_angles: tuple[float, ...]
    channels_checked: int

    def found(self, tol: float) -> bool:
        return self.min_distance <= tol


def euler_unitaries(alpha, beta, gamma) -> np.ndarray:
    """Rz(alpha) Ry(beta) Rz(gamma) for broadcast angle arrays, shape (..., 2, 2)."""
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, dtype=float),
        np.asarray(beta, dtype=float),
        np.asarray(gamma, dtype=float),
    )
    c = np.cos(beta / 2)
    s = np.sin(beta / 2)
    result = np.empty(alpha.shape + (2, 2), dtype=np.complex128)
    result[..., 0, 0] = np.exp(-0.5j * (alpha + gamma)) * c
    result[..., 0, 1] = -np.exp(-0.5j * (alpha - gamma)) * s
    result[..., 1, 0] = np.exp(0.5j * (alpha - gamma)) * s
    result[..., 1, 1] = np.exp(0.5j * (alpha + gamma)) * c
    return result


def choi_vectors(unitaries: np.ndarray) -> np.ndarray:
    """v[2x + j] = U[j, x]; the process matrix of U is the projector on v."""
    return np.swapaxes(unitaries, -1, -2).reshape(unitaries.shape[:-2] + (4,))


def search_three_term_depolarizers(
    step: float = math.pi / 16,
) -> DepolarizerSearchReport:
    """Grid search for a uniform 3-term single-qubit depolarizing channel.

    Depolarization survives U_i -> W U_i V for fixed unitaries W, V, so the
    first unitary is fixed to I and the second to a Z rotation (every unitary
    is conjugate to one up to phase). The third runs over the full Euler grid.
    The distance is the max-entry distance of process matrices.
    """
    full = np.arange(0.0, 2 * math.pi - 1e-12, step)
    half = np.arange(0.0, math.pi + 1e-12, step)
    target = np.eye(4, dtype=np.complex128) / 2

    first = choi_vectors(euler_unitaries(0.0, 0.0, 0.0))
    alpha, beta, gamma = np.meshgrid(full, half, full, indexing="ij")
    third = choi_vectors(euler_unitaries(alpha, beta, gamma)).reshape(-1, 4)
    thirdProjectors = np.einsum("ki,kj->kij", third, np.conj(third))
    firstProjector = np.outer(first, np.conj(first))
    angles = np.stack([alpha.ravel(), beta.ravel(), gamma.ravel()], axis=1)

    best = math.inf
    bestAngles: tuple[float, ...] = ()
    for theta in full:
        second = choi_vectors(euler_unitaries(theta, 0.0, 0.0))
        partial = firstProjector + np.outer(second, np.conj(second))
        process = (partial[np.newaxis] + thirdProjectors) / 3
        distances = np.max(np.abs(process - target), axis=(1, 2))
        index = int(np.argmin(distances))
        if distances[index] < best:
            best = float(distances[index])
            bestAngles = (float(theta),) + tuple(float(a) for a in angles[index])

    checked = len(full) * len(third)
    logger.info(
        f"Searched {checked} three-term channels; closest is {best:.4f} from depolarizing"
    )
    return DepolarizerSearchReport(best, bestAngles, checked)
