# ---------------- verification_agent.py ----------------
# -*- coding: utf-8 -*-
"""
Verification Agent
==================

Page Overview (for future devs)
------------------------------
This module powers `cli.py build` and the "Run synthesis" button on Home.py.

Flow:
1) Compute a deterministic input_hash from the job inputs (U bytes, f, m, tolerances, seed)
2) synthesize(): detect / check U^m = tau I, interpolate alpha, build P, C, M, B
3) assemble_generic(): B, A, M, A^dagger, B^dagger on mu ancillae + n system qubits
4) Run every check and collect residuals vs tolerances:
     - unitarity of B, C, M and (width permitting) the whole circuit
     - the row inner-product identities straight from alpha, and their agreement with C C^dagger
     - states after B, A, M, A^dagger for every sampled psi
     - end-to-end output vs the spectral oracle, and the amplitude left outside ancilla |0>
5) Gate counts (composite level + two-level lowering of B and M) and the cost bounds
6) Return (bundle, circuit, VerificationReport) to the caller

Why input_hash matters:
- Same inputs + same seed => byte-identical report JSON. The hash lets a caller
  recognise a rerun without diffing matrices.

Important:
- Sampled states: `random_states` seeded complex Gaussian unit vectors, plus every
  basis state when dim U <= basis_state_max_dim.
- The verdict is pass iff every residual <= its tolerance.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from synth.circuit import (
    MAX_TWO_LEVEL_DIM,
    Circuit,
    CostReport,
    assemble_generic,
    circuit_to_matrix,
    cost_estimate,
    num_qubits,
    qft_circuit,
    simulate_stages,
    split_registers,
    two_level_circuit,
    two_level_decompose,
)
from synth.frft import frft_phase_map
from synth.funcsynth import (
    FunctionSpec,
    SynthesisBundle,
    check_unitarity_lemma,
    extend_to_binomial,
    linear_combination,
    synthesize,
)
from synth.matcore import (
    as_matrix,
    dft_matrix,
    matrix_power,
    max_abs,
    spectral_function_oracle,
    unitarity_residual,
)
from utils.file_formats import matrix_to_dict, spec_to_dict
from utils.settings import load_settings

logger = logging.getLogger(__name__)


# -----------------------------
# Job + report types
# -----------------------------
@dataclass(frozen=True, eq=False)
class JobConfig:
    """
    One synthesis + verification request.

    U comes either from a matrix file or from a circuit file (K is then the
    circuit's gate count); `source` records where it came from for the report.
    """

    U: np.ndarray
    spec: FunctionSpec
    m: Optional[int] = None
    seed: int = 20240601
    tolerances: Mapping[str, float] = field(default_factory=dict)
    K: Optional[int] = None
    source: str = ""

    @classmethod
    def from_settings(
        cls,
        U: np.ndarray,
        spec: FunctionSpec,
        settings: Mapping[str, Any],
        m: Optional[int] = None,
        K: Optional[int] = None,
        source: str = "",
    ) -> "JobConfig":
        return cls(
            U=as_matrix(U),
            spec=spec,
            m=m,
            seed=int(settings["verification"]["seed"]),
            tolerances=dict(settings["tolerances"]),
            K=K,
            source=source,
        )


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance


def _fixed(x: float) -> float:
    """Residuals are reported to 6 significant digits."""
    return float(f"{x:.6e}")


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [_fixed(z.real), _fixed(z.imag)]


@dataclass
class VerificationReport:
    label: str
    m: int
    mu: int
    tau: complex
    seed: int
    input_hash: str
    checks: List[CheckResult] = field(default_factory=list)
    gate_counts: Dict[str, int] = field(default_factory=dict)
    two_level: Dict[str, int] = field(default_factory=dict)
    cost: Optional[CostReport] = None
    alpha: Tuple[complex, ...] = ()
    extension_roots: Tuple[complex, ...] = ()
    phase_map: Dict[str, complex] = field(default_factory=dict)
    source: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def checks_frame(self) -> pd.DataFrame:
        rows = [
            {"check": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed}
            for c in self.checks
        ]
        return pd.DataFrame(rows, columns=["check", "residual", "tolerance", "passed"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "source": self.source,
            "input_hash": self.input_hash,
            "seed": self.seed,
            "m": self.m,
            "mu": self.mu,
            "tau": _pair(self.tau),
            "alpha": [_pair(a) for a in self.alpha],
            "extension_roots": [_pair(r) for r in self.extension_roots],
            "phase_map": {k: _pair(v) for k, v in self.phase_map.items()},
            "verdict": self.verdict,
            "checks": [
                {
                    "name": c.name,
                    "residual": _fixed(c.residual),
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
            "gate_counts": dict(self.gate_counts),
            "two_level": dict(self.two_level),
            "cost": None if self.cost is None else {"K": self.cost.K, "c_syn": self.cost.c_syn, **self.cost.as_row()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -----------------------------
# Agent
# -----------------------------
class VerificationAgent:
    """
    Builds the generic circuit for f(U) and checks it against the spectral oracle.
    """

    def __init__(self, settings: Optional[Mapping[str, Any]] = None) -> None:
        cfg = load_settings(overrides=settings)

        verification = cfg.get("verification", {})
        self.random_states = int(verification.get("random_states", 20))
        self.basis_state_max_dim = int(verification.get("basis_state_max_dim", 16))

        self.max_m = int(cfg.get("search", {}).get("max_m", 64))
        self.c_syn = int(cfg.get("cost", {}).get("c_syn", 64))
        self.max_width = int(cfg.get("simulation", {}).get("max_width", 12))
        self.default_tolerances = dict(cfg.get("tolerances", {}))

    # ---------------------------------------------------------------------
    # Deterministic input hashing
    # ---------------------------------------------------------------------
    @staticmethod
    def _compute_input_hash(job: JobConfig, tolerances: Mapping[str, float]) -> str:
        """SHA-256 over U, f, m, tolerances and seed."""
        payload = {
            "U": matrix_to_dict(job.U),
            "f": spec_to_dict(job.spec),
            "m": job.m,
            "K": job.K,
            "tolerances": {k: float(v) for k, v in tolerances.items()},
            "seed": job.seed,
        }
        raw = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()

    def _tolerances(self, job: JobConfig) -> Dict[str, float]:
        tols = dict(self.default_tolerances)
        tols.update({k: float(v) for k, v in job.tolerances.items()})
        return tols

    # ---------------------------------------------------------------------
    # Sampled states
    # ---------------------------------------------------------------------
    def _sample_states(self, dim: int, seed: int) -> List[np.ndarray]:
        rng = np.random.default_rng(seed)
        states = []
        for _ in range(self.random_states):
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            states.append(v / np.linalg.norm(v))
        if dim <= self.basis_state_max_dim:
            states.extend(np.eye(dim, dtype=complex))
        return states

    # ---------------------------------------------------------------------
    # Gate-count helpers
    # ---------------------------------------------------------------------
    @staticmethod
    def _default_K(U: np.ndarray) -> int:
        """Gate count for U: the QFT builder when U is a DFT, else a two-level bound."""
        dim = U.shape[0]
        n = num_qubits(U)
        if n >= 1 and max_abs(U - dft_matrix(n)) <= 1e-12:
            return len(qft_circuit(n))
        if dim <= MAX_TWO_LEVEL_DIM:
            return max(1, len(two_level_decompose(U)))
        return dim * (dim - 1) // 2

    @staticmethod
    def _two_level_counts(bundle: SynthesisBundle) -> Dict[str, int]:
        dim = 2**bundle.mu
        if bundle.mu == 0 or dim > MAX_TWO_LEVEL_DIM:
            return {}
        ancillae = list(range(bundle.mu))
        counts: Dict[str, int] = {}
        for name, mat in (("B", bundle.B), ("M", bundle.M)):
            decomposition = two_level_decompose(mat)
            counts[f"{name}_factors"] = len(decomposition)
            counts[f"{name}_gates"] = len(two_level_circuit(decomposition, ancillae, tag=name))
        return counts

    # ---------------------------------------------------------------------
    # Checks
    # ---------------------------------------------------------------------
    def _matrix_checks(self, bundle: SynthesisBundle, tols: Mapping[str, float]) -> List[CheckResult]:
        unit_tol = tols["unitarity"]
        checks = [
            CheckResult("unitarity_B", unitarity_residual(bundle.B), unit_tol),
            CheckResult("unitarity_C", unitarity_residual(bundle.C), unit_tol),
            CheckResult("unitarity_M", unitarity_residual(bundle.M), unit_tol),
        ]

        lemma = check_unitarity_lemma(bundle.alpha)
        checks.append(CheckResult("lemma_row_norm", lemma.max_row_norm_deviation, tols["lemma"]))
        checks.append(CheckResult("lemma_offdiag", lemma.max_offdiag_inner, tols["lemma"]))

        gram_row = (bundle.C @ bundle.C.conj().T)[0]
        agreement = float(np.max(np.abs(np.asarray(lemma.inner_products) - gram_row)))
        checks.append(CheckResult("lemma_agreement", agreement, tols["lemma_agreement"]))
        return checks

    def _state_checks(
        self,
        circuit: Circuit,
        bundle: SynthesisBundle,
        U: np.ndarray,
        oracle: np.ndarray,
        states: List[np.ndarray],
        tols: Mapping[str, float],
    ) -> List[CheckResult]:
        m, mu = bundle.m, bundle.mu
        n = circuit.width - mu
        block = 2**n
        V = linear_combination(bundle.alpha, U)
        powers = [matrix_power(U, k) for k in range(m)]
        inv_sqrt_m = 1.0 / math.sqrt(m)

        worst = {"state_B": 0.0, "state_A": 0.0, "state_M": 0.0, "state_A_dag": 0.0}
        end_to_end = 0.0
        leak = 0.0
        for psi in states:
            full = np.zeros(2**circuit.width, dtype=complex)
            full[:block] = psi
            stages = simulate_stages(circuit, full, tol=tols["default"])

            Vpsi = V @ psi
            expected = {
                "state_B": [psi] * m,
                "state_A": [powers[i] @ psi for i in range(m)],
                "state_M": [powers[k] @ Vpsi for k in range(m)],
                "state_A_dag": [Vpsi] * m,
            }
            for name, blocks in expected.items():
                ref = np.zeros_like(full)
                for k, b in enumerate(blocks):
                    ref[k * block : (k + 1) * block] = inv_sqrt_m * b
                worst[name] = max(worst[name], max_abs(stages[name[len("state_"):]] - ref))

            system, outside = split_registers(stages["B_dag"], mu, n)
            end_to_end = max(end_to_end, max_abs(system - oracle @ psi))
            leak = max(leak, outside)

        inter_tol = tols["intermediate"]
        checks = [CheckResult(name, value, inter_tol) for name, value in worst.items()]
        checks.append(CheckResult("end_to_end", end_to_end, tols["end_to_end"]))
        checks.append(CheckResult("ancilla_leak", leak, tols["end_to_end"]))
        return checks

    # ---------------------------------------------------------------------
    # Pipeline
    # ---------------------------------------------------------------------
    def run(self, job: JobConfig) -> Tuple[SynthesisBundle, Circuit, VerificationReport]:
        """
        Synthesize, assemble and verify.

        Raises:
            SynthesisError subclasses from the synth package (precondition, unimodularity, ...)
        """
        tols = self._tolerances(job)
        U = as_matrix(job.U)
        input_hash = self._compute_input_hash(job, tols)

        bundle = synthesize(
            U,
            job.spec,
            m=job.m,
            tol=tols["default"],
            max_m=self.max_m,
            unimodular_tol=tols["unimodular"],
        )
        circuit = assemble_generic(bundle, U, tols["default"])
        logger.info("run: %s m=%d mu=%d width=%d", bundle.label, bundle.m, bundle.mu, circuit.width)

        extension = extend_to_binomial(U, bundle.m, tols["default"], materialize=False)
        if extension.missing_roots:
            logger.warning(
                "minimal polynomial %s has degree %d < m=%d; interpolating over %d extra root(s)",
                extension.mpoly.format(),
                extension.mpoly.degree,
                bundle.m,
                len(extension.missing_roots),
            )

        checks = self._matrix_checks(bundle, tols)
        checks.append(CheckResult("reconstruction", bundle.alpha.reconstruction_residual(job.spec), tols["reconstruction"]))
        if circuit.width <= self.max_width:
            whole = circuit_to_matrix(circuit, self.max_width)
            checks.append(CheckResult("unitarity_circuit", unitarity_residual(whole), tols["unitarity"]))

        oracle = spectral_function_oracle(U, job.spec, tols["default"])
        states = self._sample_states(U.shape[0], job.seed)
        checks += self._state_checks(circuit, bundle, U, oracle, states, tols)

        K = job.K if job.K is not None else self._default_K(U)
        phase_map = {}
        if job.spec.variant == "named" and job.spec.tag == "frft":
            phase_map = {_root_label(r): v for r, v in frft_phase_map(job.spec.x).items()}

        report = VerificationReport(
            label=bundle.label,
            m=bundle.m,
            mu=bundle.mu,
            tau=bundle.tau,
            seed=job.seed,
            input_hash=input_hash,
            checks=checks,
            gate_counts=circuit.gate_counts(),
            two_level=self._two_level_counts(bundle),
            cost=cost_estimate(K, bundle.m, self.c_syn),
            alpha=tuple(complex(a) for a in bundle.alpha.alpha),
            extension_roots=extension.missing_roots,
            phase_map=phase_map,
            source=job.source,
        )

        for failed in report.failed_checks():
            logger.warning("check %s failed: %.3e > %.1e", failed.name, failed.residual, failed.tolerance)
        return bundle, circuit, report


def _root_label(z: complex) -> str:
    return {1: "1", -1: "-1", 1j: "i", -1j: "-i"}.get(complex(z), repr(complex(z)))
