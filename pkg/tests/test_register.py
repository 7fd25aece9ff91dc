import numpy as np
import pytest

from nmlab.qmath import (
    HADAMARD,
    PAULI_X,
    choi_state,
    kron,
    partial_trace,
    superop_from_action,
    trace_distance,
)
from nmlab.register import (
    BLOCK_SWAP,
    GATES_BBC,
    GATES_SWAP,
    KET0,
    KET1,
    CircuitVariant,
    GateSpec,
    alpha_ket,
    bell_basis,
    bloch_ket,
    block_unitaries,
    circuit_unitary,
    e2_reduced_state,
    gate_sequence,
    gate_unitary,
    joint_state,
    propagator,
    propagator_stack,
    system_map,
    system_map_stack,
    werner,
)

from conftest import random_ket

I2 = np.eye(2, dtype=complex)
P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)


def basis8(s, e1, e2):
    v = np.zeros(8, dtype=complex)
    v[4 * s + 2 * e1 + e2] = 1.0
    return v


# blocks written out from their definitions, independent of gate_unitary
def reference_blocks():
    cnot_s_e1 = np.kron(P0, np.kron(I2, I2)) + np.kron(P1, np.kron(PAULI_X, I2))
    cnot_e1_e2 = np.kron(I2, np.kron(P0, I2) + np.kron(P1, PAULI_X))
    cnot_s_e2 = np.kron(P0, np.kron(I2, I2)) + np.kron(P1, np.kron(I2, PAULI_X))
    swap2 = np.eye(4)[[0, 2, 1, 3]].astype(complex)
    u1 = np.kron(HADAMARD, np.eye(4)) @ cnot_s_e1
    u2 = np.kron(I2, swap2) @ np.kron(np.eye(4), HADAMARD) @ cnot_e1_e2
    u3 = np.kron(swap2, I2) @ np.kron(I2, np.kron(HADAMARD, I2)) @ cnot_s_e1
    return u1, u2, u3, cnot_s_e2


class TestGates:
    def test_cnot_flips_target(self):
        g = gate_unitary(GateSpec("cnot", ("S", "E1")))
        assert np.allclose(g @ basis8(1, 0, 0), basis8(1, 1, 0), atol=1e-14)
        assert np.allclose(g @ basis8(0, 0, 0), basis8(0, 0, 0), atol=1e-14)

    def test_swap_exchanges_wires(self, rng):
        g = gate_unitary(GateSpec("swap", ("E1", "E2")))
        a, b = random_ket(rng), random_ket(rng)
        state = kron(KET0.reshape(2, 1), kron(a.reshape(2, 1), b.reshape(2, 1))).ravel()
        target = kron(KET0.reshape(2, 1), kron(b.reshape(2, 1), a.reshape(2, 1))).ravel()
        assert np.allclose(g @ state, target, atol=1e-14)

    def test_hadamard_on_s(self):
        g = gate_unitary(GateSpec("h", ("S",)))
        out = g @ basis8(0, 0, 0)
        expected = (basis8(0, 0, 0) + basis8(1, 0, 0)) / np.sqrt(2)
        assert np.allclose(out, expected, atol=1e-14)

    def test_invalid_wires_rejected(self):
        with pytest.raises(ValueError):
            GateSpec("cnot", ("S", "S"))
        with pytest.raises(ValueError):
            GateSpec("spin", ("S",))


class TestSequence:
    def test_block_products(self):
        u1, u2, u3, _ = reference_blocks()
        gates = [gate_unitary(g) for g in gate_sequence(CircuitVariant.SWAP_TERMINATED)]
        assert np.allclose(gates[1] @ gates[0], u1, atol=1e-12)
        assert np.allclose(gates[4] @ gates[3] @ gates[2], u2, atol=1e-12)
        assert np.allclose(gates[7] @ gates[6] @ gates[5], u3, atol=1e-12)
        b1, b2, b3 = block_unitaries()
        assert np.allclose(b1, u1, atol=1e-12)
        assert np.allclose(b2, u2, atol=1e-12)
        assert np.allclose(b3, u3, atol=1e-12)

    def test_full_product_equals_blocks(self):
        u1, u2, u3, _ = reference_blocks()
        assert np.allclose(circuit_unitary(), u3 @ u2 @ u1, atol=1e-12)

    def test_bbc_tail(self):
        _, _, _, cnot_s_e2 = reference_blocks()
        gates = [gate_unitary(g) for g in gate_sequence(CircuitVariant.ORIGINAL_BBC)]
        assert len(gates) == 6
        assert np.allclose(gates[4], cnot_s_e2, atol=1e-14)
        assert np.allclose(gates[5], np.kron(np.eye(4), HADAMARD), atol=1e-14)

    def test_sequence_lengths(self):
        assert len(gate_sequence(CircuitVariant.SWAP_TERMINATED)) == 8
        assert len(gate_sequence(CircuitVariant.ORIGINAL_BBC)) == 6


class TestStates:
    def test_werner_extremes(self):
        phi = bell_basis()[0]
        assert np.allclose(werner(1.0), np.outer(phi, phi.conj()), atol=1e-14)
        assert np.allclose(werner(0.0), np.eye(4) / 4, atol=1e-14)

    def test_werner_spectrum_half(self):
        lam = np.sort(np.linalg.eigvalsh(werner(0.5)))[::-1]
        assert np.allclose(lam, [0.625, 0.125, 0.125, 0.125], atol=1e-12)

    def test_werner_range(self):
        with pytest.raises(ValueError):
            werner(1.2)
        with pytest.raises(ValueError):
            werner(-0.1)

    def test_bell_orthonormal_complete(self):
        kets = bell_basis()
        gram = np.array([[k1.conj() @ k2 for k2 in kets] for k1 in kets])
        assert np.allclose(gram, np.eye(4), atol=1e-14)
        completeness = sum(np.outer(k, k.conj()) for k in kets)
        assert np.allclose(completeness, np.eye(4), atol=1e-14)

    def test_bell_signs(self):
        psi_minus = bell_basis()[3]
        assert psi_minus[1] == pytest.approx(1 / np.sqrt(2))
        assert psi_minus[2] == pytest.approx(-1 / np.sqrt(2))

    def test_input_kets(self):
        assert np.allclose(alpha_ket(1.0), KET0)
        assert np.allclose(alpha_ket(0.0), KET1)
        assert np.allclose(bloch_ket(0.0, 0.3), KET0)
        with pytest.raises(ValueError):
            alpha_ket(1.5)


class TestPropagator:
    def test_start_is_identity(self):
        for scheme in (BLOCK_SWAP, GATES_SWAP, GATES_BBC):
            assert np.allclose(propagator(scheme, 0.0), np.eye(8), atol=1e-14)

    def test_block_endpoint(self):
        assert np.allclose(propagator(BLOCK_SWAP, 1.0), circuit_unitary(), atol=1e-12)

    def test_gate_endpoint_matches_block(self):
        assert np.allclose(propagator(GATES_SWAP, 8.0), circuit_unitary(), atol=1e-12)

    def test_gate_integer_times_are_prefixes(self):
        gates = [gate_unitary(g) for g in gate_sequence(CircuitVariant.SWAP_TERMINATED)]
        acc = np.eye(8, dtype=complex)
        for i, g in enumerate(gates, start=1):
            acc = g @ acc
            assert np.allclose(propagator(GATES_SWAP, float(i)), acc, atol=1e-12)

    def test_stack_matches_single(self):
        ts = np.array([0.0, 0.31, 2.5, 7.9, 8.0])
        stack = propagator_stack(GATES_SWAP, ts)
        for t, u in zip(ts, stack):
            assert np.allclose(u, propagator(GATES_SWAP, float(t)), atol=1e-13)

    def test_domain_enforced(self):
        with pytest.raises(ValueError):
            propagator(BLOCK_SWAP, 1.5)
        with pytest.raises(ValueError):
            propagator(GATES_BBC, 6.5)
        with pytest.raises(ValueError):
            propagator(BLOCK_SWAP, -0.2)


class TestJointState:
    def test_initial_product(self, rng):
        psi = random_ket(rng)
        st = joint_state(psi, 0.7, BLOCK_SWAP, 0.0)
        expected = kron(np.outer(psi, psi.conj()), werner(0.7))
        assert np.allclose(st, expected, atol=1e-13)

    def test_perfect_resource_teleports(self, rng):
        psi = random_ket(rng)
        st = joint_state(psi, 1.0, BLOCK_SWAP, 1.0)
        out = partial_trace(st, "S")
        assert trace_distance(out, np.outer(psi, psi.conj())) < 1e-12

    def test_useless_resource_depolarizes(self, rng):
        psi = random_ket(rng)
        st = joint_state(psi, 0.0, BLOCK_SWAP, 1.0)
        assert trace_distance(partial_trace(st, "S"), np.eye(2) / 2) < 1e-12


class TestSystemMap:
    def test_initial_identity(self):
        for scheme in (BLOCK_SWAP, GATES_SWAP):
            assert np.allclose(system_map(scheme, 0.6, 0.0).mat, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.37, 1.0])
    def test_final_map_is_depolarizing(self, p):
        # oracle: direct action of the depolarizing channel on matrix units
        expected = superop_from_action(
            lambda r: p * r + (1 - p) * np.trace(r) * np.eye(2) / 2, 2
        )
        assert np.allclose(system_map(BLOCK_SWAP, p, 1.0).mat, expected.mat, atol=1e-10)

    def test_u2_block_acts_trivially_on_s(self):
        _, u2, _, _ = reference_blocks()
        for p in (0.0, 0.7):
            w = werner(p)
            s = superop_from_action(
                lambda r: partial_trace(u2 @ kron(r, w) @ u2.conj().T, "S"), 2
            )
            assert np.allclose(s.mat, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.3, 1 / np.sqrt(2), 1.0])
    def test_state_after_first_block(self, alpha):
        u1 = reference_blocks()[0]
        plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
        minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
        expected = alpha**2 * np.outer(plus, plus) + (1 - alpha**2) * np.outer(minus, minus)
        psi = alpha_ket(alpha)
        outs = []
        for p in (0.2, 0.9):
            rho = kron(np.outer(psi, psi.conj()), werner(p))
            outs.append(partial_trace(u1 @ rho @ u1.conj().T, "S"))
            assert np.allclose(outs[-1], expected, atol=1e-12)
        assert np.allclose(outs[0], outs[1], atol=1e-12)  # p-independent

    def test_sampled_maps_cptp(self):
        ts = np.linspace(0.0, 1.0, 21)
        for p in (0.0, 0.5, 1.0):
            for mat in system_map_stack(BLOCK_SWAP, p, ts):
                from nmlab.qmath import Superoperator

                c = choi_state(Superoperator(mat, 2))
                assert np.linalg.eigvalsh(c)[0] >= -1e-9
                assert np.real(np.trace(c)) == pytest.approx(1.0, abs=1e-9)


class TestE2Dynamics:
    def test_initial_marginal(self, rng):
        psi = random_ket(rng)
        assert np.allclose(e2_reduced_state(psi, 0.4, 0.0), np.eye(2) / 2, atol=1e-13)

    @pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
    def test_final_distance_equals_p(self, p):
        d = trace_distance(e2_reduced_state(KET0, p, 6.0), e2_reduced_state(KET1, p, 6.0))
        assert d == pytest.approx(p, abs=1e-12)

    def test_maximally_mixed_resource_hides_input(self, rng):
        for t in np.linspace(0.0, 6.0, 13):
            a = e2_reduced_state(random_ket(rng), 0.0, float(t))
            b = e2_reduced_state(random_ket(rng), 0.0, float(t))
            assert trace_distance(a, b) < 1e-12
