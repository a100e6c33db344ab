import math

import pytest

from pypqc.channels import (
    ChannelTerm,
    MixedUnitaryChannel,
    apply,
    apply_to_operator,
    conjugate_terms,
)
from pypqc.config import withOverrides
from pypqc.linalg import ComplexMatrix, hermitian_eigenvalues
from pypqc.pauli import PauliString, all_pauli_strings
from pypqc.pqc import (
    HADAMARD,
    ClassicalStates,
    ExplicitList,
    FullHilbert,
    PQCException,
    PQCInstance,
    PreconditionException,
    RealProduct,
    attach_ancilla,
    build_classical_otp,
    build_example_pqc,
    build_pauli_otp,
    build_real_otp,
    key_entropy,
    lift_to_classical,
    lifting_unitary,
    real_product_grid,
    restrict_states,
    verify_pqc,
)
from pypqc.prng import SplitMix64, random_unitary
from pypqc.states import (
    SQRT_HALF,
    BellKind,
    PureState,
    RealProductState,
    bell_state,
    completely_mixed,
    density_of,
    mix,
    tensor_states,
)
from pypqc.tests.pqc_test_data import example_eigenvalues


def random_mixture(inst: PQCInstance, rng: SplitMix64, count: int = 3):
    weights = [rng.nextFloat() + 0.01 for _ in range(count)]
    total = math.fsum(weights)
    return mix(
        [
            (weight / total, density_of(inst.states.randomState(rng)))
            for weight in weights
        ]
    )


class TestStateSets:
    def test_classical_register_size(self):
        assert ClassicalStates(4).n == 2
        assert ClassicalStates(5).n == 3
        assert ClassicalStates(16, 4).dim == 16
        assert ClassicalStates(4).isComplete()
        assert not ClassicalStates(3).isComplete()

    def test_invalid_sets(self):
        with pytest.raises(PQCException):
            ClassicalStates(1)
        with pytest.raises(PQCException):
            ClassicalStates(5, 2)
        with pytest.raises(PQCException):
            FullHilbert(0)
        with pytest.raises(PQCException):
            ExplicitList(())
        with pytest.raises(PQCException):
            ExplicitList((PureState([1, 0]), PureState([1, 0, 0, 0])))

    def test_random_members(self):
        rng = SplitMix64(1)
        assert FullHilbert(2).randomState(rng).dim == 4
        product = RealProduct(2).randomState(rng)
        assert max(abs(a.imag) for a in product.amplitudes) == 0
        basis = ClassicalStates(3).randomState(rng)
        assert sorted(abs(a) for a in basis.amplitudes)[-1] == 1

    def test_instance_dimensions(self):
        with pytest.raises(PQCException):
            PQCInstance(FullHilbert(2), build_pauli_otp(1).channel, completely_mixed(2))
        with pytest.raises(PQCException):
            PQCInstance(FullHilbert(1), build_pauli_otp(1).channel, completely_mixed(4))


class TestVerify:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_pauli_otp(self, n):
        report = verify_pqc(build_pauli_otp(n), 1e-10)
        assert report.ok
        assert report.worst_deviation <= 1e-12
        assert report.checked == 4**n
        assert report.witness is None

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_pauli_otp_random_states(self, n):
        inst = build_pauli_otp(n)
        rng = SplitMix64(500 + n)
        for _ in range(100):
            rho = density_of(inst.states.randomState(rng))
            assert apply(inst.channel, rho).maxDistance(inst.target) <= 1e-10

    def test_identity_channel(self):
        inst = PQCInstance(
            FullHilbert(1), MixedUnitaryChannel([(1.0, ComplexMatrix.identity(2))]), completely_mixed(2)
        )
        report = verify_pqc(inst)
        assert not report.ok
        assert report.witness == "|0><0|"
        assert report.worst_deviation == 1.0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_real_otp(self, n):
        report = verify_pqc(build_real_otp(n), 1e-10)
        assert report.ok
        assert report.checked == min(16**n, 4096) + 100

    def test_real_otp_complex_state_witness(self):
        widened = restrict_states(build_real_otp(1), FullHilbert(1))
        report = verify_pqc(widened)
        assert not report.ok
        assert report.witness == "|0><1|"

    def test_real_otp_leaks_complex_state(self):
        plus_i = PureState([SQRT_HALF, 1j * SQRT_HALF])
        widened = restrict_states(build_real_otp(1), ExplicitList((plus_i,)))
        report = verify_pqc(widened)
        assert not report.ok
        assert report.witness is not None and "0.707107+0j" in report.witness

    def test_real_otp_on_classical_bits(self):
        inst = restrict_states(build_real_otp(2), ClassicalStates(4))
        assert verify_pqc(inst, 1e-10).ok

    def test_real_product_grid_capped(self):
        config = withOverrides(grid_cap=100)
        grid = list(real_product_grid(3, config))
        assert len(grid) == 27 + 45
        assert grid[0] == (0.0, 0.0, 0.0)
        assert len(set(grid)) == len(grid)
        assert len(list(real_product_grid(1))) == 16

    @pytest.mark.parametrize("n", [4, 5])
    def test_capped_grid_moves_every_qubit(self, n):
        grid = list(real_product_grid(n))
        assert len(grid) <= 4096
        sixteenths = {2.0 * math.pi * j / 16 for j in range(16)}
        for qubit in range(n):
            assert sixteenths <= {angles[qubit] for angles in grid}

    def test_capped_grid_catches_last_qubit_leak(self):
        # real pad on the first three qubits, bit flips only on the fourth
        terms = [
            ChannelTerm.fromPauli(1 / 16, PauliString.fromLetters(x.letters + last))
            for x in all_pauli_strings(3, (0, 2))
            for last in "IX"
        ]
        inst = PQCInstance(
            RealProduct(4), MixedUnitaryChannel(terms), completely_mixed(16)
        )
        report = verify_pqc(inst, config=withOverrides(random_tuples=0))
        assert not report.ok
        assert report.worst_deviation == pytest.approx(1 / 16)
        assert report.checked == 7**4 + 4 * 15

    def test_example(self):
        inst = build_example_pqc()
        assert verify_pqc(inst, 1e-10).ok
        for phi in inst.states.states:
            assert apply(inst.channel, density_of(phi)).maxDistance(inst.target) <= 1e-12
        assert hermitian_eigenvalues(inst.target.mat) == pytest.approx(example_eigenvalues, abs=1e-12)

    def test_example_widened(self):
        assert not verify_pqc(restrict_states(build_example_pqc(), FullHilbert(1))).ok

    def test_logs_result(self, mocker):
        debug = mocker.patch("pypqc.pqc.logger.debug")
        verify_pqc(build_pauli_otp(1))
        debug.assert_called_once()

    @pytest.mark.parametrize(
        "inst",
        [build_pauli_otp(1), build_real_otp(1), build_example_pqc(), build_classical_otp(2)],
    )
    def test_sound_on_mixtures(self, inst):
        assert verify_pqc(inst).ok
        rng = SplitMix64(77)
        for _ in range(100):
            rho = random_mixture(inst, rng)
            assert apply(inst.channel, rho).maxDistance(inst.target) <= 1e-8


class TestConstructors:
    def test_pauli_otp_terms(self):
        inst = build_pauli_otp(1)
        assert len(inst.channel) == 4
        assert inst.channel.probabilities == [0.25] * 4
        assert inst.isAncillaFree()

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_pauli_otp_entropy(self, n):
        assert key_entropy(build_pauli_otp(n)) == 2 * n

    def test_real_otp_terms(self):
        inst = build_real_otp(1)
        assert [term.pauli.letters for term in inst.channel.terms] == ["I", "Y"]
        assert inst.channel.probabilities == [0.5, 0.5]
        assert [t.pauli.letters for t in build_real_otp(2).channel.terms] == ["II", "IY", "YI", "YY"]

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_real_otp_entropy(self, n):
        assert key_entropy(build_real_otp(n)) == n

    @pytest.mark.parametrize("n", [0, 6])
    def test_out_of_range(self, n):
        with pytest.raises(PreconditionException):
            build_pauli_otp(n)
        with pytest.raises(PreconditionException):
            build_real_otp(n)

    def test_example(self):
        inst = build_example_pqc()
        assert inst.channel.unitaries[1] == HADAMARD
        assert inst.target.mat == ComplexMatrix([[0.75, 0.25], [0.25, 0.25]])

    def test_single_term_entropy(self):
        inst = PQCInstance(
            ClassicalStates(2), MixedUnitaryChannel([(1.0, ComplexMatrix.identity(2))]), completely_mixed(2)
        )
        assert key_entropy(inst) == 0

    def test_classical_otp(self):
        inst = build_classical_otp(1, redundancy=2)
        assert [t.pauli.letters for t in inst.channel.terms] == ["I", "I", "X", "X"]
        assert key_entropy(inst) == 2
        assert verify_pqc(inst).ok

    def test_attach_ancilla(self):
        ancilla = density_of(PureState([SQRT_HALF, SQRT_HALF]))
        inst = attach_ancilla(build_pauli_otp(1), ancilla)
        assert (inst.n, inst.m) == (1, 2)
        assert inst.target == tensor_states(completely_mixed(2), ancilla)
        assert verify_pqc(inst, 1e-10).ok
        with pytest.raises(PreconditionException):
            attach_ancilla(inst, ancilla)


class TestLift:
    def test_lifting_unitary(self):
        for n in (1, 2):
            U = lifting_unitary(n)
            assert U.shape == (4**n, 4**n)
            assert U.isUnitary(1e-12)

    def test_first_column_is_bell(self):
        U = lifting_unitary(1)
        column = PureState(U.data[:, 0])
        assert column.overlap(bell_state(BellKind.PHI_PLUS)) >= 1 - 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_lifted_pad(self, n):
        base = build_pauli_otp(n)
        lifted = lift_to_classical(base)
        assert lifted.states == ClassicalStates(4**n, 2 * n)
        assert lifted.m == 2 * n
        assert lifted.target.maxDistance(completely_mixed(4**n)) <= 1e-10
        report = verify_pqc(lifted, 1e-10)
        assert report.ok
        assert report.checked == 4**n
        assert key_entropy(lifted) == key_entropy(base)

    @pytest.mark.parametrize("n", [1, 2])
    def test_cross_terms_vanish(self, n):
        base = build_pauli_otp(n)
        d = 2**n
        for y in range(d):
            for z in range(d):
                if y != z:
                    image = apply_to_operator(base.channel, ComplexMatrix.unit(d, y, z))
                    assert image.maxDistance(ComplexMatrix.zeros(d, d)) <= 1e-10

    def test_lifted_conjugated_pad(self):
        V = random_unitary(2, SplitMix64(31))
        base = build_pauli_otp(1)
        conjugated = PQCInstance(
            base.states, conjugate_terms(base.channel, V, "right"), base.target
        )
        lifted = lift_to_classical(conjugated)
        assert verify_pqc(lifted, 1e-10).ok
        assert lifted.target == tensor_states(completely_mixed(2), base.target)

    def test_rejects_example(self):
        with pytest.raises(PreconditionException):
            lift_to_classical(build_example_pqc())
        with pytest.raises(PreconditionException):
            lift_to_classical(restrict_states(build_example_pqc(), FullHilbert(1)))

    def test_rejects_ancilla(self):
        inst = attach_ancilla(build_pauli_otp(1), completely_mixed(2))
        with pytest.raises(PreconditionException):
            lift_to_classical(inst)


def test_real_product_state_in_grid_verifies():
    inst = build_real_otp(2)
    phi = RealProductState([math.pi / 8, 3 * math.pi / 8]).toPureState()
    assert apply(inst.channel, density_of(phi)).maxDistance(inst.target) <= 1e-12
    assert ChannelTerm.fromPauli(0.5, inst.channel.terms[1].pauli).unitary == inst.channel.unitaries[1]
