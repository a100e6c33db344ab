import json

import pytest

from pypqc.linalg import ComplexMatrix
from pypqc.pqc import (
    attach_ancilla,
    build_classical_otp,
    build_example_pqc,
    build_pauli_otp,
    build_real_otp,
)
from pypqc.prng import SplitMix64
from pypqc.protocol import (
    KeyException,
    KeySource,
    ProtocolSession,
    decrypt,
    encrypt,
    estimate_eve_state,
    eve_view,
    keygen,
    run_protocol,
)
from pypqc.states import SQRT_HALF, PureState, completely_mixed, density_of

ZERO = PureState([1, 0])
PLUS = PureState([SQRT_HALF, SQRT_HALF])
MINUS = PureState([SQRT_HALF, -SQRT_HALF])

INSTANCES = {
    "pauli-1": lambda: build_pauli_otp(1),
    "pauli-2": lambda: build_pauli_otp(2),
    "real-1": lambda: build_real_otp(1),
    "real-2": lambda: build_real_otp(2),
    "classical": lambda: build_classical_otp(1, redundancy=2),
    "example": build_example_pqc,
    "ancilla": lambda: attach_ancilla(build_pauli_otp(1), density_of(PLUS)),
}


class TestKeygen:
    def test_single_key(self):
        src = KeySource(5, [1.0])
        assert [keygen(src) for _ in range(20)] == [0] * 20
        assert src.draws == 20

    def test_uniform_counts(self):
        src = KeySource(42, [0.25] * 4)
        draws = 100_000
        counts = [0] * 4
        for _ in range(draws):
            counts[keygen(src)] += 1
        sigma = (draws * 0.25 * 0.75) ** 0.5
        for count in counts:
            assert abs(count - draws / 4) <= 3 * sigma

    def test_skewed_distribution(self):
        src = KeySource(9, [0.0, 1.0, 0.0])
        assert {keygen(src) for _ in range(50)} == {1}

    def test_deterministic(self):
        a = KeySource(11, [0.1, 0.2, 0.3, 0.4])
        b = KeySource(11, [0.1, 0.2, 0.3, 0.4])
        assert [keygen(a) for _ in range(100)] == [keygen(b) for _ in range(100)]

    def test_invalid_distributions(self):
        with pytest.raises(KeyException):
            KeySource(0, [])
        with pytest.raises(KeyException):
            KeySource(0, [0.5, 0.6])
        with pytest.raises(KeyException):
            KeySource(0, [1.5, -0.5])


class TestEncrypt:
    def test_bit_flip(self):
        cipher = encrypt(build_pauli_otp(1), 1, ZERO)
        assert cipher.mat == ComplexMatrix([[0, 0], [0, 1]])

    def test_phase_flip(self):
        cipher = encrypt(build_pauli_otp(1), 3, PLUS)
        assert cipher.maxDistance(density_of(MINUS)) <= 1e-15

    def test_identity_key(self):
        cipher = encrypt(build_pauli_otp(1), 0, PLUS)
        assert cipher.maxDistance(density_of(PLUS)) <= 1e-15

    def test_ancilla_appended(self):
        inst = attach_ancilla(build_pauli_otp(1), completely_mixed(2))
        assert encrypt(inst, 0, ZERO).dim == 4

    def test_bad_inputs(self):
        inst = build_pauli_otp(1)
        with pytest.raises(KeyException):
            encrypt(inst, 4, ZERO)
        with pytest.raises(KeyException):
            encrypt(inst, -1, ZERO)
        with pytest.raises(KeyException):
            encrypt(inst, 0, PureState([1, 0, 0, 0]))
        with pytest.raises(KeyException):
            decrypt(inst, 0, completely_mixed(4))


class TestRoundTrip:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_states(self, n):
        inst = build_pauli_otp(n)
        rng = SplitMix64(300 + n)
        src = KeySource(n, inst.channel.probabilities)
        for _ in range(100):
            phi = inst.states.randomState(rng)
            key = keygen(src)
            recovered = decrypt(inst, key, encrypt(inst, key, phi))
            assert recovered.maxDistance(density_of(phi)) <= 1e-12

    @pytest.mark.parametrize("name", sorted(INSTANCES))
    def test_every_key(self, name):
        inst = INSTANCES[name]()
        rng = SplitMix64(17)
        phi = inst.states.randomState(rng)
        for key in range(len(inst.channel)):
            recovered = decrypt(inst, key, encrypt(inst, key, phi))
            assert recovered.maxDistance(density_of(phi)) <= 1e-12

    def test_example_both_keys(self):
        inst = build_example_pqc()
        for phi in inst.states.states:
            for key in (0, 1):
                recovered = decrypt(inst, key, encrypt(inst, key, phi))
                assert recovered.maxDistance(density_of(phi)) <= 1e-12

    def test_wrong_key(self):
        inst = build_pauli_otp(1)
        recovered = decrypt(inst, 3, encrypt(inst, 1, ZERO))
        assert recovered.maxDistance(density_of(ZERO)) == pytest.approx(1.0)


class TestEve:
    def test_view_is_target(self):
        inst = build_example_pqc()
        assert eve_view(inst) is inst.target

    def test_exact_estimate(self):
        inst = build_pauli_otp(2)
        rng = SplitMix64(8)
        first = estimate_eve_state(inst, inst.states.randomState(rng), 0)
        second = estimate_eve_state(inst, inst.states.randomState(rng), 0)
        assert first.distance <= 1e-10
        assert first.estimate.maxDistance(second.estimate) <= 1e-10

    @pytest.mark.parametrize("name", sorted(INSTANCES))
    def test_exact_estimate_matches_target(self, name):
        inst = INSTANCES[name]()
        phi = inst.states.randomState(SplitMix64(4))
        assert estimate_eve_state(inst, phi, 0).distance <= 1e-10

    def test_sampled_estimate(self):
        inst = build_pauli_otp(1)
        estimate = estimate_eve_state(inst, PLUS, 10_000, seed=3)
        assert estimate.distance <= 0.05

    def test_negative_samples(self):
        with pytest.raises(KeyException):
            estimate_eve_state(build_pauli_otp(1), ZERO, -1)


class TestSession:
    async def test_round_trip(self):
        inst = build_pauli_otp(2)
        phi = inst.states.randomState(SplitMix64(1))
        transcript = await run_protocol(inst, phi, 7)
        assert transcript.deviation <= 1e-12
        assert 0 <= transcript.key_index < 16

    async def test_with_ancilla(self):
        transcript = await run_protocol(INSTANCES["ancilla"](), PLUS, 2)
        assert transcript.deviation <= 1e-12
        assert transcript.ciphertext.dim == 4

    async def test_eve_taps_channel(self):
        inst = build_pauli_otp(1)
        session = ProtocolSession(inst, 3)
        for _ in range(200):
            await session.run(ZERO)
        assert len(session.tapped) == 200
        assert session.channel.empty()
        assert session.eveEstimate().maxDistance(inst.target) <= 0.15

    async def test_eve_needs_traffic(self):
        session = ProtocolSession(build_pauli_otp(1), 3)
        with pytest.raises(KeyException):
            session.eveEstimate()

    async def test_reproducible(self):
        inst = build_pauli_otp(1)
        first = await run_protocol(inst, PLUS, 21)
        second = await run_protocol(inst, PLUS, 21)
        assert first.dumps() == second.dumps()
        document = json.loads(first.dumps())
        assert document["key_index"] == first.key_index
        assert document["recovered"]["kind"] == "density"

    async def test_key_mismatch(self):
        session = ProtocolSession(build_pauli_otp(1), 0)
        session.aliceKeys = KeySource(0, [1.0, 0.0, 0.0, 0.0])
        session.bobKeys = KeySource(0, [0.0, 0.0, 0.0, 1.0])
        with pytest.raises(KeyException):
            await session.run(ZERO)

    async def test_logs(self, mocker):
        logger = mocker.Mock()
        session = ProtocolSession(build_pauli_otp(1), 5, logger)
        await session.run(ZERO)
        assert logger.debug.call_count == 3
