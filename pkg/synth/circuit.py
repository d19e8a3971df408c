# -*- coding: utf-8 -*-
"""
Circuit Model + Statevector Simulator
=====================================

Module Overview (for future devs)
---------------------------------
- Gate / Circuit: immutable gate sequences over n + mu qubits
- simulate(), simulate_stages(), circuit_to_matrix(): dense statevector simulation
- qft_circuit(): F_n with H, controlled phases and the trailing bit-reversal swaps
- controlled_power_block(): A = diag(U^0, U^1, .., U^{2^mu - 1}) from controlled U^{2^eta}
- assemble_generic(): B, A, M, A^dagger, B^dagger on the ancilla / system registers
- two_level_decompose() + two_level_circuit(): Givens factorization of B and M and a
  Gray-code lowering to multi-controlled single-qubit gates
- cost_estimate() / cost_sweep(): gate-count bounds for the whole construction

Conventions (do not change without updating the file formats):
- Qubit 0 is the most significant bit: basis index b = sum bit_q 2^{width-1-q}.
- Ancillae are qubits 0..mu-1, the system register is mu..mu+n-1, so b = a 2^n + s.
- Ancilla bit eta (value 2^eta) lives on qubit mu-1-eta.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from synth.errors import (
    ConsistencyError,
    DimensionError,
    FormError,
    PreconditionError,
    ResourceError,
)
from synth.matcore import (
    DEFAULT_TOL,
    MatrixLike,
    as_matrix,
    frozen,
    max_abs,
    scalar_power_check,
    unitarity_residual,
)

logger = logging.getLogger(__name__)

GATE_TOL = 1e-10
MAX_WIDTH = 12
MAX_QFT_QUBITS = 12
MAX_TWO_LEVEL_DIM = 16

# Elementary-gate constants of the cost model
TOFFOLI_GATES = 14
C_SYN = 64

GATE_KINDS = ("h", "x", "cnot", "cphase", "swap", "composite", "ccomposite")
GENERIC_STAGES = ("B", "A", "M", "A_dag", "B_dag")

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


# -----------------------------------------------------------------------------
# Gate
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Gate:
    """
    One circuit operation.

    kind:
        h, x          single-qubit gate on qubits[0]
        cnot          X on qubits[0] controlled by controls[0]
        cphase        diag(1, e^{i theta}) on qubits[0] controlled by controls[0]
        swap          exchange qubits[0] and qubits[1]
        composite     matrix on the ordered qubits (first listed = most significant)
        ccomposite    matrix on qubits when every control equals its control value
    tag:
        stage label inside the generic circuit (B, A, M, A_dag, B_dag)
    """

    kind: str
    qubits: Tuple[int, ...]
    matrix: Optional[np.ndarray] = None
    controls: Tuple[int, ...] = ()
    control_values: Tuple[int, ...] = ()
    theta: float = 0.0
    tag: str = ""

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise FormError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        controls = tuple(int(c) for c in self.controls)
        values = tuple(int(v) for v in self.control_values) if self.control_values else (1,) * len(controls)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "control_values", values)

        wires = controls + qubits
        if len(set(wires)) != len(wires) or any(w < 0 for w in wires):
            raise FormError(f"{self.kind} gate has repeated or negative qubit indices {wires}")
        if len(values) != len(controls) or any(v not in (0, 1) for v in values):
            raise FormError(f"{self.kind} gate control values {values} do not match controls {controls}")

        expected = {"h": (1, 0), "x": (1, 0), "cnot": (1, 1), "cphase": (1, 1), "swap": (2, 0)}
        if self.kind in expected:
            n_targets, n_controls = expected[self.kind]
            if len(qubits) != n_targets or len(controls) != n_controls:
                raise FormError(f"{self.kind} gate needs {n_targets} target(s) and {n_controls} control(s)")
            return

        if self.kind == "composite" and controls:
            raise FormError("composite gate takes no controls; use ccomposite")
        if self.matrix is None:
            raise FormError(f"{self.kind} gate needs a matrix")
        u = np.asarray(self.matrix, dtype=complex)
        if u.shape != (2 ** len(qubits), 2 ** len(qubits)):
            raise FormError(f"{self.kind} matrix shape {u.shape} does not fit {len(qubits)} qubit(s)")
        residual = unitarity_residual(u)
        if residual > GATE_TOL:
            raise FormError(f"{self.kind} matrix is not unitary (residual {residual:.3e})")
        object.__setattr__(self, "matrix", frozen(u))

    @property
    def wires(self) -> Tuple[int, ...]:
        return self.controls + self.qubits

    def local_matrix(self) -> np.ndarray:
        """Matrix applied to `qubits` when the controls are satisfied."""
        if self.kind == "h":
            return _H
        if self.kind in ("x", "cnot"):
            return _X
        if self.kind == "cphase":
            return np.diag([1.0, np.exp(1j * self.theta)]).astype(complex)
        if self.kind == "swap":
            return _SWAP
        return self.matrix

    def inverse(self) -> "Gate":
        if self.kind in ("h", "x", "cnot", "swap"):
            return self
        if self.kind == "cphase":
            return Gate("cphase", self.qubits, controls=self.controls, theta=-self.theta, tag=self.tag)
        return Gate(
            self.kind,
            self.qubits,
            matrix=self.matrix.conj().T,
            controls=self.controls,
            control_values=self.control_values,
            tag=self.tag,
        )


def h(q: int, tag: str = "") -> Gate:
    return Gate("h", (q,), tag=tag)


def x(q: int, tag: str = "") -> Gate:
    return Gate("x", (q,), tag=tag)


def cnot(control: int, target: int, tag: str = "") -> Gate:
    return Gate("cnot", (target,), controls=(control,), tag=tag)


def cphase(control: int, target: int, theta: float, tag: str = "") -> Gate:
    return Gate("cphase", (target,), controls=(control,), theta=float(theta), tag=tag)


def swap(a: int, b: int, tag: str = "") -> Gate:
    return Gate("swap", (a, b), tag=tag)


def composite(qubits: Sequence[int], u: MatrixLike, tag: str = "") -> Gate:
    return Gate("composite", tuple(qubits), matrix=np.asarray(u, dtype=complex), tag=tag)


def controlled(
    controls: Sequence[int],
    qubits: Sequence[int],
    u: MatrixLike,
    values: Optional[Sequence[int]] = None,
    tag: str = "",
) -> Gate:
    return Gate(
        "ccomposite",
        tuple(qubits),
        matrix=np.asarray(u, dtype=complex),
        controls=tuple(controls),
        control_values=tuple(values) if values is not None else (),
        tag=tag,
    )


# -----------------------------------------------------------------------------
# Circuit
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gates over `width` qubits; ancillae occupy qubits 0..num_ancillae-1."""

    width: int
    gates: Tuple[Gate, ...] = ()
    num_ancillae: int = 0

    def __post_init__(self) -> None:
        if self.width < 1:
            raise DimensionError(f"circuit width must be >= 1, got {self.width}")
        if not 0 <= self.num_ancillae <= self.width:
            raise DimensionError(f"ancilla count {self.num_ancillae} does not fit width {self.width}")
        gates = tuple(self.gates)
        for gate in gates:
            if any(w >= self.width for w in gate.wires):
                raise DimensionError(f"{gate.kind} gate on {gate.wires} exceeds width {self.width}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def dim(self) -> int:
        return 2**self.width

    def concat(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise DimensionError(f"cannot concatenate width {self.width} with width {other.width}")
        return Circuit(self.width, self.gates + other.gates, self.num_ancillae)

    def inverse(self) -> "Circuit":
        return Circuit(self.width, tuple(g.inverse() for g in reversed(self.gates)), self.num_ancillae)

    def gate_counts(self) -> Dict[str, int]:
        return dict(sorted(Counter(g.kind for g in self.gates).items()))


# -----------------------------------------------------------------------------
# Simulation
# -----------------------------------------------------------------------------
def _apply_local(tensor: np.ndarray, u: np.ndarray, axes: List[int]) -> np.ndarray:
    k = len(axes)
    if k == 0:
        return u[0, 0] * tensor
    ut = u.reshape((2,) * (2 * k))
    out = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _apply_gate(tensor: np.ndarray, gate: Gate, width: int) -> np.ndarray:
    u = gate.local_matrix()
    if not gate.controls:
        return _apply_local(tensor, u, list(gate.qubits))

    idx: List[object] = [slice(None)] * tensor.ndim
    for c, v in zip(gate.controls, gate.control_values):
        idx[c] = v
    sel = tuple(idx)
    remaining = [q for q in range(width) if q not in gate.controls]
    axes = [remaining.index(q) for q in gate.qubits]

    out = tensor.copy()
    out[sel] = _apply_local(tensor[sel], u, axes)
    return out


def _run(gates: Iterable[Gate], tensor: np.ndarray, width: int) -> np.ndarray:
    for gate in gates:
        tensor = _apply_gate(tensor, gate, width)
    return tensor


def _check_state(c: Circuit, psi: np.ndarray, tol: float) -> np.ndarray:
    state = np.asarray(psi, dtype=complex).reshape(-1)
    if state.shape[0] != c.dim:
        raise DimensionError(f"state has {state.shape[0]} amplitudes, circuit needs {c.dim}")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > tol:
        raise PreconditionError(f"state norm is {norm:.12g}, expected 1")
    return state


def simulate(c: Circuit, psi: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply the gates of c to psi in order."""
    state = _check_state(c, psi, tol)
    tensor = state.reshape((2,) * c.width + (1,))
    return _run(c.gates, tensor, c.width).reshape(-1)


def simulate_stages(
    c: Circuit,
    psi: np.ndarray,
    stages: Sequence[str] = GENERIC_STAGES,
    tol: float = DEFAULT_TOL,
) -> Dict[str, np.ndarray]:
    """
    State after each tagged stage. A stage with no gates (A for mu = 0)
    carries the previous state forward.
    """
    state = _check_state(c, psi, tol)
    tensor = state.reshape((2,) * c.width + (1,))
    by_tag: Dict[str, List[Gate]] = {tag: [] for tag in stages}
    for gate in c.gates:
        if gate.tag not in by_tag:
            raise ConsistencyError(f"gate tagged {gate.tag!r} is not one of the stages {tuple(stages)}")
        by_tag[gate.tag].append(gate)

    results: Dict[str, np.ndarray] = {}
    for tag in stages:
        tensor = _run(by_tag[tag], tensor, c.width)
        results[tag] = tensor.reshape(-1).copy()
    return results


def circuit_to_matrix(c: Circuit, max_width: int = MAX_WIDTH) -> np.ndarray:
    """Column j = simulate(c, e_j), all columns in one pass."""
    if c.width > max_width:
        raise ResourceError(f"width {c.width} exceeds the dense limit of {max_width} qubits")
    tensor = np.eye(c.dim, dtype=complex).reshape((2,) * c.width + (c.dim,))
    return _run(c.gates, tensor, c.width).reshape(c.dim, c.dim)


def split_registers(state: np.ndarray, mu: int, n: int) -> Tuple[np.ndarray, float]:
    """System amplitudes for ancilla |0>, and the norm of everything outside it."""
    vec = np.asarray(state, dtype=complex).reshape(-1)
    if vec.shape[0] != 2 ** (mu + n):
        raise DimensionError(f"state has {vec.shape[0]} amplitudes, expected 2^{mu + n}")
    block = 2**n
    return vec[:block].copy(), float(np.linalg.norm(vec[block:]))


def num_qubits(U: MatrixLike) -> int:
    """n with dim U = 2^n."""
    dim = as_matrix(U).shape[0]
    n = dim.bit_length() - 1
    if 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


# -----------------------------------------------------------------------------
# QFT
# -----------------------------------------------------------------------------
def qft_circuit(n: int) -> Circuit:
    """
    F_n = 2^{-n/2}(exp(-2 pi i k l / 2^n)): n Hadamards, n(n-1)/2 controlled phases
    with negative angles, floor(n/2) swaps for the bit reversal.
    """
    if not 1 <= n <= MAX_QFT_QUBITS:
        raise ResourceError(f"qft_circuit supports 1 <= n <= {MAX_QFT_QUBITS}, got {n}")

    gates: List[Gate] = []
    for j in range(n):
        gates.append(h(j))
        for k in range(j + 1, n):
            gates.append(cphase(k, j, -2.0 * math.pi / 2 ** (k - j + 1)))
    for j in range(n // 2):
        gates.append(swap(j, n - 1 - j))
    return Circuit(n, tuple(gates))


# -----------------------------------------------------------------------------
# Controlled powers and the generic circuit
# -----------------------------------------------------------------------------
def _controlled_power_gates(U: np.ndarray, mu: int, n: int, inverse: bool, tag: str) -> List[Gate]:
    system = tuple(range(mu, mu + n))
    power = U.conj().T if inverse else U
    gates = []
    for eta in range(mu):
        gates.append(controlled((mu - 1 - eta,), system, power, tag=tag))
        power = power @ power
    return list(reversed(gates)) if inverse else gates


def controlled_power_block(U: MatrixLike, mu: int, inverse: bool = False) -> Circuit:
    """
    A = diag(U^0, U^1, .., U^{2^mu - 1}) in the ancilla-major basis: gate eta applies
    U^{2^eta} (repeated squaring) when ancilla bit eta is 1. With inverse set, the
    reversed sequence of U^{-2^eta} gives A^dagger.
    """
    if mu < 0:
        raise DimensionError(f"mu must be >= 0, got {mu}")
    arr = as_matrix(U)
    residual = unitarity_residual(arr)
    if residual > GATE_TOL:
        raise PreconditionError(f"U is not unitary (residual {residual:.3e})")
    n = num_qubits(arr)
    tag = "A_dag" if inverse else "A"
    return Circuit(mu + n, tuple(_controlled_power_gates(arr, mu, n, inverse, tag)), num_ancillae=mu)


def assemble_generic(bundle, U: MatrixLike, tol: float = DEFAULT_TOL) -> Circuit:
    """
    B on the ancillae, A, M on the ancillae, A^dagger, B^dagger.

    On |0> (x) psi the output is |0> (x) (sum_i alpha_i U^i) psi.

    Raises:
        ConsistencyError: bundle matrices have the wrong size, are not unitary,
            or U^m differs from the bundle's tau I
        DimensionError: U is 1x1 or its size is not a power of two
    """
    arr = as_matrix(U)
    n = num_qubits(arr)
    if n < 1:
        raise DimensionError("U must act on at least one qubit (dim >= 2), got dim 1")
    mu = bundle.mu
    dim = 2**mu

    if bundle.B.shape != (dim, dim) or bundle.M.shape != (dim, dim):
        raise ConsistencyError(f"B / M must be {dim}x{dim} for mu={mu}")
    for name, mat in (("B", bundle.B), ("M", bundle.M)):
        residual = unitarity_residual(mat)
        if residual > GATE_TOL:
            raise ConsistencyError(f"{name} is not unitary (residual {residual:.3e})")

    tau = scalar_power_check(arr, bundle.m, tol)
    if tau is None:
        raise ConsistencyError(f"U^{bundle.m} is not scalar; the bundle does not apply to this U")
    if abs(tau - bundle.tau) > math.sqrt(tol):
        raise ConsistencyError(f"U^{bundle.m} = {tau:.12g} I but the bundle was built for tau = {bundle.tau:.12g}")

    ancillae = tuple(range(mu))
    gates: List[Gate] = [composite(ancillae, bundle.B, tag="B")]
    gates += _controlled_power_gates(arr, mu, n, inverse=False, tag="A")
    gates.append(composite(ancillae, bundle.M, tag="M"))
    gates += _controlled_power_gates(arr, mu, n, inverse=True, tag="A_dag")
    gates.append(composite(ancillae, np.asarray(bundle.B).conj().T, tag="B_dag"))

    logger.debug("assemble_generic: n=%d mu=%d gates=%d", n, mu, len(gates))
    return Circuit(mu + n, tuple(gates), num_ancillae=mu)


# -----------------------------------------------------------------------------
# Two-level decomposition
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class TwoLevelUnitary:
    """2x2 unitary u acting on basis states i < j, identity elsewhere."""

    i: int
    j: int
    u: np.ndarray

    def embed(self, dim: int) -> np.ndarray:
        full = np.eye(dim, dtype=complex)
        full[np.ix_([self.i, self.j], [self.i, self.j])] = self.u
        return full


@dataclass(frozen=True, eq=False)
class TwoLevelDecomposition:
    """W = factors[0] @ factors[1] @ ... @ diag(phases)."""

    dim: int
    factors: Tuple[TwoLevelUnitary, ...]
    phases: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))

    def __len__(self) -> int:
        return len(self.factors)

    def product(self) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for factor in self.factors:
            out = out @ factor.embed(self.dim)
        return out * self.phases[np.newaxis, :]

    def has_phase_layer(self, tol: float = 1e-12) -> bool:
        return bool(np.any(np.abs(self.phases - 1.0) > tol))


def _givens(a: complex, b: complex) -> np.ndarray:
    r = math.hypot(abs(a), abs(b))
    return np.array([[np.conj(a) / r, np.conj(b) / r], [-b / r, a / r]], dtype=complex)


def two_level_decompose(W: MatrixLike, tol: float = DEFAULT_TOL) -> TwoLevelDecomposition:
    """
    Givens elimination on adjacent rows: G_k .. G_1 W = D, so
    W = G_1^dagger .. G_k^dagger D with at most dim(dim-1)/2 factors. A phase layer
    confined to the last factor's pair is folded into that factor.
    """
    arr = as_matrix(W)
    dim = arr.shape[0]
    if dim > MAX_TWO_LEVEL_DIM or 2 ** (dim.bit_length() - 1) != dim:
        raise DimensionError(f"two_level_decompose needs dim = 2^mu <= {MAX_TWO_LEVEL_DIM}, got {dim}")
    residual = unitarity_residual(arr)
    if residual > tol:
        raise PreconditionError(f"matrix is not unitary (residual {residual:.3e})")

    work = arr.copy()
    factors: List[TwoLevelUnitary] = []
    for col in range(dim - 1):
        for row in range(dim - 1, col, -1):
            a, b = work[row - 1, col], work[row, col]
            if abs(b) <= 1e-15:
                continue
            g = _givens(a, b)
            work[[row - 1, row], :] = g @ work[[row - 1, row], :]
            factors.append(TwoLevelUnitary(row - 1, row, g.conj().T))

    phases = np.diag(work).copy()
    if factors:
        last = factors[-1]
        others = np.delete(phases, [last.i, last.j])
        if np.all(np.abs(others - 1.0) <= 1e-12):
            factors[-1] = TwoLevelUnitary(last.i, last.j, last.u @ np.diag(phases[[last.i, last.j]]))
            phases = np.ones(dim, dtype=complex)

    return TwoLevelDecomposition(dim=dim, factors=tuple(factors), phases=phases)


def _bits(value: int, k: int) -> List[int]:
    return [(value >> (k - 1 - p)) & 1 for p in range(k)]


def _gray_path(i: int, j: int, k: int) -> List[int]:
    """Basis states from i to j flipping one differing bit at a time (least significant first)."""
    path = [i]
    current = i
    for p in range(k - 1, -1, -1):
        mask = 1 << (k - 1 - p)
        if (current ^ j) & mask:
            current ^= mask
            path.append(current)
    return path


def _flip_gate(s: int, t: int, qubits: Sequence[int], tag: str, u: np.ndarray) -> Gate:
    """u on the bit where s and t differ, controlled by every other bit matching s."""
    k = len(qubits)
    diff = s ^ t
    pos = k - 1 - (diff.bit_length() - 1)
    bits = _bits(s, k)
    others = [p for p in range(k) if p != pos]
    if bits[pos] == 1:
        u = _X @ u @ _X
    if not others:
        return composite((qubits[pos],), u, tag=tag)
    return controlled(
        [qubits[p] for p in others],
        (qubits[pos],),
        u,
        values=[bits[p] for p in others],
        tag=tag,
    )


def two_level_circuit(decomposition: TwoLevelDecomposition, qubits: Sequence[int], tag: str = "") -> List[Gate]:
    """
    Gray-code lowering: each two-level factor becomes multi-controlled X gates that
    walk basis state i next to j, one multi-controlled u, and the walk undone.
    The gates realize W in circuit order (rightmost factor first).
    """
    k = len(qubits)
    if decomposition.dim != 2**k:
        raise DimensionError(f"decomposition of dim {decomposition.dim} does not fit {k} qubit(s)")

    gates: List[Gate] = []
    if k == 0:
        phase = complex(decomposition.phases[0])
        return [composite((), [[phase]], tag=tag)] if abs(phase - 1.0) > 1e-12 else gates

    if decomposition.has_phase_layer():
        for s, phase in enumerate(decomposition.phases):
            if abs(phase - 1.0) > 1e-12:
                gates.append(_flip_gate(s ^ 1, s, qubits, tag, np.diag([1.0, phase]).astype(complex)))

    for factor in reversed(decomposition.factors):
        path = _gray_path(factor.i, factor.j, k)
        walk = [_flip_gate(path[p], path[p + 1], qubits, tag, _X) for p in range(len(path) - 2)]
        gates += walk
        gates.append(_flip_gate(path[-2], path[-1], qubits, tag, factor.u))
        gates += list(reversed(walk))
    return gates


# -----------------------------------------------------------------------------
# Cost model
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class CostReport:
    K: int
    m: int
    mu: int
    bound_A: int
    bound_small: int
    total_bound: int
    c_syn: int = C_SYN

    def as_row(self) -> Dict[str, int]:
        return {
            "m": self.m,
            "mu": self.mu,
            "bound_A": self.bound_A,
            "bound_small": self.bound_small,
            "total_bound": self.total_bound,
        }


def cost_estimate(K: int, m: int, c_syn: int = C_SYN) -> CostReport:
    """
    bound_A = 14 (2^mu - 1) K       (each Lambda_1(U) costs at most 14K, 2^mu - 1 copies)
    bound_small = 3 c_syn mu 4^mu   (B, M, B^dagger by two-level synthesis)
    total_bound = 2 bound_A + bound_small
    """
    if K < 1 or m < 1:
        raise PreconditionError(f"cost_estimate needs K >= 1 and m >= 1, got K={K}, m={m}")
    mu = (m - 1).bit_length()
    bound_A = TOFFOLI_GATES * (2**mu - 1) * K
    bound_small = 3 * c_syn * mu * 4**mu
    return CostReport(
        K=K,
        m=m,
        mu=mu,
        bound_A=bound_A,
        bound_small=bound_small,
        total_bound=2 * bound_A + bound_small,
        c_syn=c_syn,
    )


def cost_sweep(K: int, m_values: Iterable[int] = range(2, 65), c_syn: int = C_SYN) -> pd.DataFrame:
    """One cost_estimate row per m: columns m, mu, bound_A, bound_small, total_bound."""
    rows = [cost_estimate(K, m, c_syn).as_row() for m in m_values]
    return pd.DataFrame(rows, columns=["m", "mu", "bound_A", "bound_small", "total_bound"])
