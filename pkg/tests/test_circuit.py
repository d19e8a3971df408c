import math

import numpy as np
import pandas as pd
import pytest

from synth.circuit import (
    Circuit,
    Gate,
    assemble_generic,
    circuit_to_matrix,
    cnot,
    composite,
    controlled,
    controlled_power_block,
    cost_estimate,
    cost_sweep,
    cphase,
    h,
    qft_circuit,
    simulate,
    simulate_stages,
    split_registers,
    swap,
    two_level_circuit,
    two_level_decompose,
    x,
)
from synth.errors import ConsistencyError, DimensionError, FormError, PreconditionError, ResourceError
from synth.frft import frft_bundle
from synth.funcsynth import FunctionSpec, build_B, linear_combination, synthesize
from synth.matcore import dft_matrix, matrix_power, max_abs, spectral_function_oracle, unitarity_residual

X = np.array([[0, 1], [1, 0]])


def _basis(dim, k):
    v = np.zeros(dim, dtype=complex)
    v[k] = 1
    return v


def _random_circuit(rng, width, depth, random_unitary):
    gates = []
    for _ in range(depth):
        q = [int(v) for v in rng.permutation(width)]
        choice = rng.integers(6)
        if choice == 0:
            gates.append(h(q[0]))
        elif choice == 1 and width > 1:
            gates.append(cnot(q[0], q[1]))
        elif choice == 2 and width > 1:
            gates.append(cphase(q[0], q[1], rng.uniform(-3, 3)))
        elif choice == 3 and width > 1:
            gates.append(swap(q[0], q[1]))
        elif choice == 4 and width > 2:
            gates.append(controlled([q[0]], q[1:3], random_unitary(4), values=[int(rng.integers(2))]))
        else:
            gates.append(composite([q[0]], random_unitary(2)))
    return Circuit(width, tuple(gates))


# ---- gates / circuits ----

def test_gate_rejects_repeated_qubits():
    with pytest.raises(FormError):
        cnot(1, 1)


def test_gate_rejects_non_unitary_matrix():
    with pytest.raises(FormError):
        composite([0], np.diag([1, 2]))


def test_circuit_rejects_out_of_range_qubit():
    with pytest.raises(DimensionError):
        Circuit(2, (h(2),))


def test_gate_counts_and_concat():
    c = Circuit(2, (h(0), h(1), cnot(0, 1)))
    assert c.gate_counts() == {"cnot": 1, "h": 2}
    assert len(c.concat(c)) == 6


# ---- simulate ----

def test_simulate_empty_circuit(random_state):
    psi = random_state(4)
    assert np.allclose(simulate(Circuit(2), psi), psi)


def test_simulate_hadamard():
    out = simulate(Circuit(1, (h(0),)), _basis(2, 0))
    assert np.allclose(out, [1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_simulate_cnot_on_10():
    out = simulate(Circuit(2, (cnot(0, 1),)), _basis(4, 0b10))
    assert np.allclose(out, _basis(4, 0b11))


def test_simulate_dimension_mismatch():
    with pytest.raises(DimensionError):
        simulate(Circuit(2), np.ones(3) / math.sqrt(3))


def test_simulate_requires_unit_norm():
    with pytest.raises(PreconditionError):
        simulate(Circuit(1), np.array([1.0, 1.0]))


def test_simulate_preserves_norm_and_inverse(rng, random_unitary, random_state):
    for width in range(1, 7):
        c = _random_circuit(rng, width, 12, random_unitary)
        psi = random_state(2**width)
        out = simulate(c, psi)
        assert abs(np.linalg.norm(out) - 1) <= 1e-9
        assert max_abs(simulate(c.inverse(), out) - psi) <= 1e-9


def test_controlled_gate_respects_control_values():
    g = controlled([0], [1], X, values=[0])
    c = Circuit(2, (g,))
    assert np.allclose(simulate(c, _basis(4, 0b00)), _basis(4, 0b01))
    assert np.allclose(simulate(c, _basis(4, 0b10)), _basis(4, 0b10))


# ---- circuit_to_matrix ----

def test_circuit_to_matrix_empty():
    assert np.array_equal(circuit_to_matrix(Circuit(2)), np.eye(4))


def test_circuit_to_matrix_x_on_qubit_1():
    assert np.allclose(circuit_to_matrix(Circuit(2, (x(1),))), np.kron(np.eye(2), X))


def test_circuit_to_matrix_width_guard():
    with pytest.raises(ResourceError):
        circuit_to_matrix(Circuit(13))


def test_circuit_to_matrix_columns_match_simulate(rng, random_unitary):
    c = _random_circuit(rng, 4, 15, random_unitary)
    M = circuit_to_matrix(c)
    assert unitarity_residual(M) <= 1e-9
    for k in (0, 5, 15):
        assert max_abs(M[:, k] - simulate(c, _basis(16, k))) <= 1e-12


# ---- QFT ----

@pytest.mark.parametrize("n", range(1, 6))
def test_qft_matches_dft(n):
    assert max_abs(circuit_to_matrix(qft_circuit(n)) - dft_matrix(n)) <= 1e-9


def test_qft_single_qubit_is_hadamard():
    c = qft_circuit(1)
    assert c.gate_counts() == {"h": 1}


@pytest.mark.parametrize("n", range(1, 13))
def test_qft_gate_count(n):
    counts = qft_circuit(n).gate_counts()
    assert counts.get("h", 0) == n
    assert counts.get("cphase", 0) == n * (n - 1) // 2
    assert counts.get("swap", 0) == n // 2
    assert len(qft_circuit(n)) == n + n * (n - 1) // 2 + n // 2


@pytest.mark.parametrize("n", [0, 13])
def test_qft_range(n):
    with pytest.raises(ResourceError):
        qft_circuit(n)


# ---- controlled powers ----

def test_controlled_power_block_mu0():
    assert len(controlled_power_block(np.eye(2), 0)) == 0


def test_controlled_power_block_is_cnot():
    M = circuit_to_matrix(controlled_power_block(X, 1))
    assert np.allclose(M, np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), X]]))


def test_controlled_power_block_f3():
    F3 = dft_matrix(3)
    M = circuit_to_matrix(controlled_power_block(F3, 2))
    for k in range(4):
        block = M[8 * k : 8 * (k + 1), 8 * k : 8 * (k + 1)]
        assert max_abs(block - matrix_power(F3, k)) <= 1e-10
    assert max_abs(M[:8, 8:]) == 0


def test_controlled_power_block_inverse(random_unitary):
    U = random_unitary(4)
    A = circuit_to_matrix(controlled_power_block(U, 3))
    A_dag = circuit_to_matrix(controlled_power_block(U, 3, inverse=True))
    assert max_abs(A_dag @ A - np.eye(32)) <= 1e-10


# ---- generic circuit ----

def _ancilla_zero(state_dim_system, psi, mu):
    full = np.zeros(2**mu * state_dim_system, dtype=complex)
    full[:state_dim_system] = psi
    return full


def test_generic_identity_spec(random_state):
    F3 = dft_matrix(3)
    bundle = synthesize(F3, lambda lam: 1.0, m=4)
    c = assemble_generic(bundle, F3)
    psi = random_state(8)
    system, leak = split_registers(simulate(c, _ancilla_zero(8, psi, 2)), 2, 3)
    assert max_abs(system - psi) <= 1e-8
    assert leak <= 1e-8


def test_generic_lambda_on_f3(random_state):
    F3 = dft_matrix(3)
    c = assemble_generic(synthesize(F3, FunctionSpec.identity()), F3)
    for _ in range(20):
        psi = random_state(8)
        system, leak = split_registers(simulate(c, _ancilla_zero(8, psi, 2)), 2, 3)
        assert max_abs(system - F3 @ psi) <= 1e-8
        assert leak <= 1e-8


def test_generic_frft_quarter_period(random_state):
    F3 = dft_matrix(3)
    c = assemble_generic(frft_bundle(np.pi / 2), F3)
    psi = random_state(8)
    system, _ = split_registers(simulate(c, _ancilla_zero(8, psi, 2)), 2, 3)
    assert max_abs(system - F3 @ psi) <= 1e-8


@pytest.mark.parametrize(
    "U, f",
    [
        (dft_matrix(2), FunctionSpec.frft(0.8)),
        (np.diag([1, 1j, 1j, 1]), FunctionSpec.power(0.5)),
        (np.diag(np.exp(2j * np.pi * np.array([0, 1, 3, 4, 5, 6, 1, 2]) / 7)), FunctionSpec.conjugate()),
        (1j * np.eye(4), FunctionSpec.conjugate()),
    ],
)
def test_generic_matches_oracle(U, f, random_state):
    bundle = synthesize(U, f)
    c = assemble_generic(bundle, U)
    dim = U.shape[0]
    n = int(math.log2(dim))
    oracle = spectral_function_oracle(U, f)
    for _ in range(5):
        psi = random_state(dim)
        system, leak = split_registers(simulate(c, _ancilla_zero(dim, psi, bundle.mu)), bundle.mu, n)
        assert max_abs(system - oracle @ psi) <= 1e-8
        assert leak <= 1e-8


def test_generic_intermediate_states(random_state):
    F3 = dft_matrix(3)
    bundle = frft_bundle(0.3)
    c = assemble_generic(bundle, F3)
    psi = random_state(8)
    stages = simulate_stages(c, _ancilla_zero(8, psi, 2))
    V = linear_combination(bundle.alpha, F3)

    after_B = np.concatenate([psi] * 4) / 2
    after_A = np.concatenate([matrix_power(F3, i) @ psi for i in range(4)]) / 2
    after_M = np.concatenate([matrix_power(F3, k) @ V @ psi for k in range(4)]) / 2
    after_A_dag = np.concatenate([V @ psi] * 4) / 2
    assert max_abs(stages["B"] - after_B) <= 1e-10
    assert max_abs(stages["A"] - after_A) <= 1e-10
    assert max_abs(stages["M"] - after_M) <= 1e-10
    assert max_abs(stages["A_dag"] - after_A_dag) <= 1e-10


def test_generic_m1_has_no_ancillae(random_state):
    U = 1j * np.eye(2)
    bundle = synthesize(U, FunctionSpec.conjugate())
    c = assemble_generic(bundle, U)
    assert c.width == 1 and c.num_ancillae == 0
    psi = random_state(2)
    assert max_abs(simulate(c, psi) - (-1j) * psi) <= 1e-12


def test_generic_rejects_mismatched_unitary():
    bundle = synthesize(dft_matrix(3), FunctionSpec.frft(0.2))
    with pytest.raises(ConsistencyError):
        assemble_generic(bundle, np.diag(np.exp(1j * np.array([0, 0.3, 0, 0, 0, 0, 0, 0]))))
    with pytest.raises(ConsistencyError):
        assemble_generic(bundle, np.exp(1j * np.pi / 8) * dft_matrix(3))


def test_generic_rejects_one_dimensional_unitary():
    U = np.array([[1j]])
    with pytest.raises(DimensionError):
        assemble_generic(synthesize(U, FunctionSpec.conjugate()), U)


# ---- two-level decomposition ----

def test_two_level_identity_is_empty():
    decomposition = two_level_decompose(np.eye(4))
    assert len(decomposition) == 0
    assert not decomposition.has_phase_layer()


def test_two_level_2x2_single_factor(random_unitary):
    W = random_unitary(2)
    decomposition = two_level_decompose(W)
    assert len(decomposition) == 1
    assert not decomposition.has_phase_layer()
    assert max_abs(decomposition.product() - W) <= 1e-10


def test_two_level_build_B():
    B = build_B(4, 2)
    decomposition = two_level_decompose(B)
    assert len(decomposition) <= 6
    assert max_abs(decomposition.product() - B) <= 1e-10


def test_two_level_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        two_level_decompose(np.diag([1, 2]))


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_two_level_random_unitaries(random_unitary, dim):
    for _ in range(50):
        W = random_unitary(dim)
        decomposition = two_level_decompose(W)
        assert len(decomposition) <= dim * (dim - 1) // 2
        assert max_abs(decomposition.product() - W) <= 1e-9


@pytest.mark.parametrize("m", range(2, 9))
def test_two_level_bundle_matrices(m, rng):
    samples = np.exp(1j * rng.uniform(-3, 3, size=m))
    bundle = synthesize(np.diag(np.exp(2j * np.pi * np.arange(m) / m)), FunctionSpec.from_samples(samples), m=m)
    for W in (bundle.B, bundle.M):
        assert max_abs(two_level_decompose(W).product() - W) <= 1e-9


@pytest.mark.parametrize("dim", [2, 4, 8])
def test_two_level_circuit_realizes_matrix(random_unitary, dim):
    W = random_unitary(dim)
    k = int(math.log2(dim))
    gates = two_level_circuit(two_level_decompose(W), list(range(k)))
    assert max_abs(circuit_to_matrix(Circuit(k, tuple(gates))) - W) <= 1e-9


def test_two_level_circuit_on_ancilla_register():
    B = build_B(3, 2)
    gates = two_level_circuit(two_level_decompose(B), [0, 1], tag="B")
    M = circuit_to_matrix(Circuit(3, tuple(gates)))
    assert max_abs(M - np.kron(B, np.eye(2))) <= 1e-9


def test_two_level_circuit_scalar_phase():
    gates = two_level_circuit(two_level_decompose(np.array([[1j]])), [])
    assert len(gates) == 1
    assert gates[0].kind == "composite" and gates[0].qubits == ()
    assert gates[0].local_matrix()[0, 0] == pytest.approx(1j)
    assert two_level_circuit(two_level_decompose(np.eye(1)), []) == []


# ---- cost model ----

def test_cost_examples():
    assert cost_estimate(10, 4).bound_A == 420
    assert cost_estimate(10, 1).bound_A == 0
    assert cost_estimate(100, 8).bound_A == 9800


def test_cost_total_bound():
    report = cost_estimate(10, 5)
    assert report.mu == 3
    assert report.bound_small == 3 * 64 * 3 * 4**3
    assert report.total_bound == 2 * report.bound_A + report.bound_small


def test_cost_rejects_bad_inputs():
    with pytest.raises(PreconditionError):
        cost_estimate(0, 4)


def test_cost_monotone():
    for K in (1, 10, 100):
        totals = [cost_estimate(K, m).total_bound for m in range(1, 65)]
        assert all(a <= b for a, b in zip(totals, totals[1:]))
    for m in (1, 4, 9):
        totals = [cost_estimate(K, m).total_bound for K in range(1, 50)]
        assert all(a <= b for a, b in zip(totals, totals[1:]))


def test_cost_sweep_frame():
    df = cost_sweep(10)
    assert isinstance(df, pd.DataFrame)
    assert list(df.columns) == ["m", "mu", "bound_A", "bound_small", "total_bound"]
    assert df["m"].tolist() == list(range(2, 65))
    assert df["total_bound"].is_monotonic_increasing
