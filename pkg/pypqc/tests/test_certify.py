import math

import numpy as np
import pytest

from pypqc.certify import (
    certify_real_key_bound,
    certify_theorem3,
    certify_theorem4,
    certify_theorem6,
    choi_vectors,
    euler_unitaries,
    search_three_term_depolarizers,
)
from pypqc.channels import MixedUnitaryChannel, conjugate_terms
from pypqc.linalg import ComplexMatrix
from pypqc.pauli import SIGMA
from pypqc.pqc import (
    ClassicalStates,
    FullHilbert,
    PQCInstance,
    PreconditionException,
    attach_ancilla,
    build_classical_otp,
    build_example_pqc,
    build_pauli_otp,
    build_real_otp,
    lift_to_classical,
    restrict_states,
)
from pypqc.prng import SplitMix64, random_unitary
from pypqc.states import completely_mixed

I2, X, Y, Z = SIGMA


def conjugated_pad(n: int, side: str, seed: int) -> PQCInstance:
    base = build_pauli_otp(n)
    V = random_unitary(2**n, SplitMix64(seed))
    return PQCInstance(base.states, conjugate_terms(base.channel, V, side), base.target)


def three_term_instance() -> PQCInstance:
    third = 1 / 3
    channel = MixedUnitaryChannel([(third, I2), (third, X), (1 - 2 * third, Z)])
    return PQCInstance(FullHilbert(1), channel, completely_mixed(2))


class TestTheorem3:
    def test_pauli_pad(self):
        assert certify_theorem3(build_pauli_otp(2))

    @pytest.mark.parametrize("side", ["left", "right", "both"])
    def test_conjugated_pads(self, side):
        for seed in range(3):
            assert certify_theorem3(conjugated_pad(1, side, seed))

    def test_classical_pad(self):
        assert certify_theorem3(build_classical_otp(1))

    def test_not_private(self):
        assert not certify_theorem3(three_term_instance())

    def test_preconditions(self):
        with pytest.raises(PreconditionException):
            certify_theorem3(build_real_otp(1))
        with pytest.raises(PreconditionException):
            certify_theorem3(build_example_pqc())
        with pytest.raises(PreconditionException):
            certify_theorem3(attach_ancilla(build_pauli_otp(1), completely_mixed(2)))
        with pytest.raises(PreconditionException):
            certify_theorem3(restrict_states(build_classical_otp(2), ClassicalStates(3)))


class TestTheorem4:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_pauli_pad(self, n):
        report = certify_theorem4(build_pauli_otp(n))
        assert report.ok
        assert report.max_p == 1 / 4**n
        assert report.term_count == 4**n

    @pytest.mark.parametrize("side", ["left", "right"])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_conjugations(self, n, side):
        for seed in range(10):
            report = certify_theorem4(conjugated_pad(n, side, 100 * n + seed))
            assert report.ok
            assert report.parseval_ok
            assert report.max_p == 1 / 4**n

    def test_three_terms_not_private(self):
        with pytest.raises(PreconditionException):
            certify_theorem4(three_term_instance())

    def test_preconditions(self):
        with pytest.raises(PreconditionException):
            certify_theorem4(build_real_otp(1))
        with pytest.raises(PreconditionException):
            certify_theorem4(attach_ancilla(build_pauli_otp(1), completely_mixed(2)))


class TestTheorem6:
    def test_lifted_pad(self):
        report = certify_theorem6(lift_to_classical(build_pauli_otp(1)))
        assert report.ok
        assert report.m == 2
        assert report.S_rho0 == pytest.approx(2.0, abs=1e-9)
        assert report.H_p == 2.0
        assert report.upper_gap == pytest.approx(0.0, abs=1e-9)

    def test_classical_pad(self):
        report = certify_theorem6(build_classical_otp(1))
        assert report.ok
        assert report.S_rho0 == pytest.approx(1.0, abs=1e-9)
        assert report.H_p == 1.0

    def test_padded_key(self):
        report = certify_theorem6(build_classical_otp(1, redundancy=2))
        assert report.ok
        assert report.H_p == 2.0
        assert report.upper_gap >= 0.9

    def test_with_ancilla(self):
        inst = attach_ancilla(build_classical_otp(1), completely_mixed(2))
        report = certify_theorem6(inst)
        assert report.ok
        assert report.m == 1
        assert report.S_rho0 == pytest.approx(2.0, abs=1e-9)
        assert report.S_ancilla == pytest.approx(1.0, abs=1e-9)

    def test_preconditions(self):
        with pytest.raises(PreconditionException):
            certify_theorem6(build_pauli_otp(1))
        with pytest.raises(PreconditionException):
            certify_theorem6(restrict_states(build_classical_otp(2), ClassicalStates(3)))
        not_private = PQCInstance(
            ClassicalStates(2),
            MixedUnitaryChannel([(1.0, ComplexMatrix.identity(2))]),
            completely_mixed(2),
        )
        with pytest.raises(PreconditionException):
            certify_theorem6(not_private)


class TestRealKeyBound:
    @pytest.mark.parametrize("n", [1, 2])
    def test_real_pad(self, n):
        report = certify_real_key_bound(build_real_otp(n))
        assert report.ok
        assert report.m == n
        assert report.H_p >= n

    def test_requires_real_product(self):
        with pytest.raises(PreconditionException):
            certify_real_key_bound(build_pauli_otp(1))


class TestDepolarizerSearch:
    def test_euler_unitaries_are_unitary(self):
        U = euler_unitaries([0.3, 1.1], [0.7, 2.0], [1.9, 0.1])
        for u in U:
            assert ComplexMatrix(u).isUnitary(1e-12)

    def test_choi_vector_of_identity(self):
        v = choi_vectors(euler_unitaries(0.0, 0.0, 0.0))
        assert np.allclose(v, [1, 0, 0, 1])

    def test_no_three_term_depolarizer(self):
        report = search_three_term_depolarizers()
        steps = int(round(2 * math.pi / (math.pi / 16)))
        assert report.channels_checked == steps * (steps * 17 * steps)
        assert report.min_distance > 1e-3
        assert not report.found(1e-3)
        assert len(report.best_angles) == 4
