# -*- coding: utf-8 -*-
"""
Fractional DFT powers F_n^x through the generic circuit.

U = F_n (built from qft_circuit), m = 4, tau = 1, and the closed-form
coefficients below. x = pi/2 gives F_n itself, so the usual fractional
order is a = 2x/pi.

For n in {1, 2} the minimal polynomial of F_n has degree < 4; the same
coefficients still apply because F_n^4 = I (extend_to_binomial certifies it).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from synth.circuit import Circuit, assemble_generic, circuit_to_matrix, qft_circuit, simulate, split_registers
from synth.errors import DimensionError, FormError, ResourceError
from synth.funcsynth import CoefficientVector, SynthesisBundle, assemble_bundle, extend_to_binomial
from synth.matcore import DEFAULT_TOL

logger = logging.getLogger(__name__)

FRFT_M = 4
MAX_FRFT_QUBITS = 10
QUARTER_ROOTS = (1.0 + 0j, -1j, -1.0 + 0j, 1j)


@dataclass(frozen=True)
class FrftParams:
    n: int
    x: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError(f"frft needs n >= 1 system qubits, got {self.n}")
        if self.n > MAX_FRFT_QUBITS:
            raise ResourceError(f"frft supports n <= {MAX_FRFT_QUBITS} (n + 2 qubits simulated), got {self.n}")
        if not math.isfinite(self.x):
            raise FormError(f"frft angle must be finite, got {self.x}")

    @classmethod
    def from_order(cls, n: int, a: float) -> "FrftParams":
        return cls(n=n, x=frft_angle(a))

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def order(self) -> float:
        return frft_order(self.x)


def frft_order(x: float) -> float:
    """Conventional fractional order a = 2x / pi."""
    return 2.0 * x / math.pi


def frft_angle(a: float) -> float:
    """Inverse of frft_order."""
    return a * math.pi / 2.0


def frft_coefficients(x: float) -> CoefficientVector:
    """
    alpha_0 = (1 + e^{ix}) cos x / 2     alpha_1 = (1 - i e^{ix}) sin x / 2
    alpha_2 = (-1 + e^{ix}) cos x / 2    alpha_3 = (-1 - i e^{ix}) sin x / 2
    """
    e = cmath.exp(1j * x)
    c, s = math.cos(x), math.sin(x)
    alpha = np.array(
        [
            0.5 * (1 + e) * c,
            0.5 * (1 - 1j * e) * s,
            0.5 * (-1 + e) * c,
            0.5 * (-1 - 1j * e) * s,
        ],
        dtype=complex,
    )
    return CoefficientVector(alpha=alpha, m=FRFT_M, tau=1.0)


def frft_phase_map(x: float) -> Dict[complex, complex]:
    """
    Eigenvalue -> phase induced by the coefficients:
    1 -> 1, -i -> e^{-ix}, -1 -> e^{2ix}, i -> e^{ix}.
    """
    coeffs = frft_coefficients(x)
    return {root: coeffs.evaluate(root) for root in QUARTER_ROOTS}


def frft_bundle(x: float) -> SynthesisBundle:
    return assemble_bundle(frft_coefficients(x), label=f"frft(x={x!r})")


def frft_circuit(params: FrftParams, tol: float = DEFAULT_TOL) -> Circuit:
    """Generic circuit for F_n^x on 2 ancillae + n system qubits."""
    F = circuit_to_matrix(qft_circuit(params.n))
    if params.n < 3:
        ext = extend_to_binomial(F, FRFT_M, tol, materialize=False)
        logger.debug("frft_circuit: n=%d via extension, missing roots %s", params.n, ext.missing_roots)
    return assemble_generic(frft_bundle(params.x), F, tol)


def frft_apply(params: FrftParams, psi: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """System register of the generic circuit's output on |00> (x) psi."""
    state = np.asarray(psi, dtype=complex).reshape(-1)
    if state.shape[0] != params.dim:
        raise DimensionError(f"state has {state.shape[0]} amplitudes, F_{params.n} needs {params.dim}")

    circuit = frft_circuit(params, tol)
    full = np.zeros(2**circuit.width, dtype=complex)
    full[: params.dim] = state
    out = simulate(circuit, full, tol)
    system, leak = split_registers(out, circuit.num_ancillae, params.n)
    logger.debug("frft_apply: n=%d x=%.12g ancilla leak %.3e", params.n, params.x, leak)
    return system


def frft_matrix(params: FrftParams, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Dense 2^n x 2^n transform: the ancilla-|0> block of the circuit matrix."""
    circuit = frft_circuit(params, tol)
    return circuit_to_matrix(circuit)[: params.dim, : params.dim]
