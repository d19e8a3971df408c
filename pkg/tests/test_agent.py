import logging

import numpy as np
import pytest

from agents.verification_agent import JobConfig, VerificationAgent
from synth.errors import PreconditionError, UnimodularityError
from synth.funcsynth import FunctionSpec
from synth.matcore import dft_matrix
from utils.settings import load_settings

EXPECTED_CHECKS = [
    "unitarity_B",
    "unitarity_C",
    "unitarity_M",
    "lemma_row_norm",
    "lemma_offdiag",
    "lemma_agreement",
    "reconstruction",
    "unitarity_circuit",
    "state_B",
    "state_A",
    "state_M",
    "state_A_dag",
    "end_to_end",
    "ancilla_leak",
]


def _job(U, spec, **kwargs):
    return JobConfig.from_settings(U, spec, load_settings(), **kwargs)


def test_frft_on_f3_passes():
    bundle, circuit, report = VerificationAgent().run(_job(dft_matrix(3), FunctionSpec.frft(0.4)))
    assert report.passed
    assert report.verdict == "pass"
    assert (report.m, report.mu) == (4, 2)
    assert circuit.width == 5
    assert [c.name for c in report.checks] == EXPECTED_CHECKS
    assert report.extension_roots == ()
    assert set(report.phase_map) == {"1", "-1", "i", "-i"}


def test_cost_defaults_to_qft_gate_count():
    _, _, report = VerificationAgent().run(_job(dft_matrix(3), FunctionSpec.identity()))
    assert report.cost.K == 7
    assert report.two_level["B_factors"] >= 1


def test_explicit_K_is_used():
    _, _, report = VerificationAgent().run(_job(dft_matrix(3), FunctionSpec.identity(), K=11))
    assert report.cost.K == 11


def test_report_json_is_deterministic():
    job = _job(dft_matrix(3), FunctionSpec.frft(0.4))
    first = VerificationAgent().run(job)[2]
    second = VerificationAgent().run(job)[2]
    assert first.input_hash == second.input_hash
    assert first.to_json() == second.to_json()
    assert first.to_json().endswith("\n")


def test_input_hash_changes_with_seed():
    a = VerificationAgent().run(_job(dft_matrix(2), FunctionSpec.identity()))[2]
    job = JobConfig.from_settings(
        dft_matrix(2), FunctionSpec.identity(), load_settings(overrides={"verification": {"seed": 7}})
    )
    b = VerificationAgent().run(job)[2]
    assert a.input_hash != b.input_hash


def test_f2_takes_extension_path_and_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="agents.verification_agent"):
        _, _, report = VerificationAgent().run(_job(dft_matrix(2), FunctionSpec.frft(0.9)))
    assert report.passed
    assert len(report.extension_roots) == 1
    assert report.extension_roots[0] == pytest.approx(1j)
    assert any("extra root" in r.getMessage() for r in caplog.records)


def test_checks_frame_columns():
    _, _, report = VerificationAgent().run(_job(np.diag([1, 1j]), FunctionSpec.power(0.5)))
    frame = report.checks_frame()
    assert list(frame.columns) == ["check", "residual", "tolerance", "passed"]
    assert frame["passed"].all()


def test_partial_settings_keep_defaults():
    agent = VerificationAgent({"verification": {"random_states": 3}})
    assert agent.random_states == 3
    assert agent.max_m == 64
    assert agent.default_tolerances["end_to_end"] == pytest.approx(1e-8)


def test_unimodularity_error_propagates():
    spec = FunctionSpec.from_samples([1, 2, 1, 1])
    with pytest.raises(UnimodularityError) as info:
        VerificationAgent().run(_job(dft_matrix(3), spec))
    assert "root r = 1i" in str(info.value)


def test_wrong_m_raises_with_hint():
    with pytest.raises(PreconditionError) as info:
        VerificationAgent().run(_job(np.diag([1, 1j]), FunctionSpec.identity(), m=2))
    assert "try m=4" in str(info.value)


def test_tight_tolerance_fails_verdict():
    settings = load_settings(overrides={"tolerances": {"end_to_end": 1e-30, "intermediate": 1e-30}})
    job = JobConfig.from_settings(dft_matrix(3), FunctionSpec.frft(0.4), settings)
    _, _, report = VerificationAgent(settings).run(job)
    assert report.verdict == "fail"
    assert "end_to_end" in [c.name for c in report.failed_checks()]


def test_square_root_of_f3_passes():
    report = VerificationAgent().run(_job(dft_matrix(3), FunctionSpec.power(0.5)))[2]
    assert report.passed


def test_square_root_with_eigenvalue_minus_one_passes(random_unitary):
    Q = random_unitary(4)
    U = Q @ np.diag([1, -1, 1j, -1j]) @ Q.conj().T
    report = VerificationAgent().run(_job(U, FunctionSpec.power(0.5)))[2]
    assert report.passed
