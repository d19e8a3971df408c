import json

import numpy as np
import pandas as pd
import pytest

import cli
from synth.circuit import qft_circuit
from synth.funcsynth import FunctionSpec
from synth.matcore import dft_matrix, max_abs, spectral_function_oracle
from utils import file_formats


@pytest.fixture
def matrix_file(tmp_path):
    def _write(name, M):
        path = tmp_path / name
        file_formats.write_matrix(path, M)
        return str(path)

    return _write


# ---- mpoly ----

def test_mpoly_f3(matrix_file, capsys):
    assert cli.main(["mpoly", matrix_file("F3.json", dft_matrix(3))]) == 0
    assert capsys.readouterr().out.strip() == "x^4 - 1; m=4, tau=1"


def test_mpoly_identity(matrix_file, capsys):
    assert cli.main(["mpoly", matrix_file("I.json", np.eye(4))]) == 0
    assert capsys.readouterr().out.strip() == "x - 1; m=1, tau=1"


def test_mpoly_not_found(matrix_file, capsys):
    U = np.diag([1, np.exp(0.3j)])
    assert cli.main(["mpoly", matrix_file("D.json", U)]) == 4
    assert "no m <= 64 found" in capsys.readouterr().out


def test_mpoly_writes_json(matrix_file, tmp_path):
    out = tmp_path / "mpoly.json"
    assert cli.main(["mpoly", matrix_file("F3.json", dft_matrix(3)), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["text"] == "x^4 - 1"
    assert payload["m"] == 4


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert cli.main(["mpoly", str(tmp_path / "nope.json")]) == 2
    assert "error:" in capsys.readouterr().err


def test_unparseable_file_is_usage_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["mpoly", str(bad)]) == 2


def test_unwritable_out_is_usage_error(matrix_file, tmp_path, capsys):
    out = tmp_path / "missing" / "x.json"
    assert cli.main(["mpoly", matrix_file("F3.json", dft_matrix(3)), "--out", str(out)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_arguments_exit_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["cost"])
    assert info.value.code == 2


# ---- build ----

def test_build_frft_writes_outputs(tmp_path, capsys):
    out_dir = tmp_path / "build"
    pdf = tmp_path / "report.pdf"
    code = cli.main(["build", "--dft", "3", "--frft", "0.4", "--out", str(out_dir), "--pdf", str(pdf)])
    assert code == 0
    for name in ("B.json", "C.json", "M.json", "circuit.json", "report.json"):
        assert (out_dir / name).exists()
    report = json.loads((out_dir / "report.json").read_text())
    assert report["verdict"] == "pass"
    assert report["m"] == 4
    assert pdf.read_bytes().startswith(b"%PDF")
    assert "verdict: pass" in capsys.readouterr().err


def test_build_prints_report_without_out(capsys):
    assert cli.main(["build", "--dft", "2", "--order", "0.5"]) == 0
    report = json.loads(capsys.readouterr().out)
    [(re_part, im_part)] = report["extension_roots"]
    assert abs(re_part) <= 1e-9 and abs(im_part - 1) <= 1e-9


def test_build_non_unimodular_samples(matrix_file, tmp_path, capsys):
    spec = tmp_path / "spec.json"
    file_formats.write_spec(spec, FunctionSpec.from_samples([1, 2, 1, 1]))
    code = cli.main(["build", "--matrix", matrix_file("F3.json", dft_matrix(3)), "--spec", str(spec)])
    assert code == 3
    assert "root r = 1i" in capsys.readouterr().err


def test_build_wrong_m_names_hint(matrix_file, capsys):
    code = cli.main(["build", "--matrix", matrix_file("D.json", np.diag([1, 1j])), "--m", "2"])
    assert code == 3
    assert "try m=4" in capsys.readouterr().err


def test_build_failed_verification_exit_1(tmp_path, capsys):
    config = tmp_path / "tight.json"
    config.write_text(json.dumps({"tolerances": {"end_to_end": 1e-30, "intermediate": 1e-30}}))
    code = cli.main(["build", "--dft", "3", "--frft", "0.4", "--config", str(config), "--out", str(tmp_path / "b")])
    assert code == 1
    assert "end_to_end" in capsys.readouterr().err


def test_build_from_circuit_file_uses_its_gate_count(tmp_path):
    circuit_path = tmp_path / "qft.json"
    file_formats.write_circuit(circuit_path, qft_circuit(2))
    out_dir = tmp_path / "b"
    assert cli.main(["build", "--circuit", str(circuit_path), "--conjugate", "--out", str(out_dir)]) == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["cost"]["K"] == len(qft_circuit(2))


# ---- simulate / frft ----

def test_simulate_built_circuit(tmp_path):
    out_dir = tmp_path / "build"
    assert cli.main(["build", "--dft", "3", "--frft", "0.4", "--out", str(out_dir)]) == 0

    rng = np.random.default_rng(5)
    psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    psi /= np.linalg.norm(psi)
    full = np.zeros(32, dtype=complex)
    full[:8] = psi
    file_formats.write_state(tmp_path / "in.json", full)

    out = tmp_path / "out.json"
    code = cli.main(
        ["simulate", "--circuit", str(out_dir / "circuit.json"), "--state", str(tmp_path / "in.json"), "--out", str(out)]
    )
    assert code == 0
    result = file_formats.read_state(out)
    expected = spectral_function_oracle(dft_matrix(3), FunctionSpec.frft(0.4)) @ psi
    assert max_abs(result[:8] - expected) <= 1e-8
    assert max_abs(result[8:]) <= 1e-8


def test_simulate_rejects_non_integer_ancilla_count(tmp_path, capsys):
    payload = file_formats.circuit_to_dict(qft_circuit(1))
    payload["num_ancillae"] = "x"
    (tmp_path / "c.json").write_text(json.dumps(payload))
    file_formats.write_state(tmp_path / "s.json", np.array([1, 0], dtype=complex))
    code = cli.main(["simulate", "--circuit", str(tmp_path / "c.json"), "--state", str(tmp_path / "s.json")])
    assert code == 2
    assert "num_ancillae" in capsys.readouterr().err


def test_frft_order_one_on_zero_state(tmp_path):
    out = tmp_path / "out.json"
    assert cli.main(["frft", "--n", "3", "--order", "1", "--out", str(out)]) == 0
    assert max_abs(file_formats.read_state(out) - np.full(8, 2**-1.5)) <= 1e-9


def test_frft_state_size_mismatch(tmp_path):
    file_formats.write_state(tmp_path / "s.json", np.array([1, 0], dtype=complex))
    assert cli.main(["frft", "--n", "3", "--x", "0.2", "--state", str(tmp_path / "s.json")]) == 2


# ---- limitation ----

def test_limitation_diag(matrix_file, capsys):
    assert cli.main(["limitation", matrix_file("D.json", np.diag([1, 1j]))]) == 0
    out = capsys.readouterr().out
    assert "m(x) = x^2 + (-1-1i) x + i" in out
    assert "first row norm^2 = 3" in out


def test_limitation_f2(matrix_file, capsys):
    assert cli.main(["limitation", matrix_file("F2.json", dft_matrix(2))]) == 0
    assert "first row norm^2 = 3" in capsys.readouterr().out


def test_limitation_not_applicable(matrix_file):
    assert cli.main(["limitation", matrix_file("F3.json", dft_matrix(3))]) == 3


# ---- cost ----

def test_cost_single_row(capsys):
    assert cli.main(["cost", "--K", "10", "--m", "4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "m,mu,bound_A,bound_small,total_bound"
    assert out.splitlines()[1] == "4,2,420,6144,6984"


def test_cost_sweep_is_monotone(tmp_path):
    out = tmp_path / "cost.csv"
    assert cli.main(["cost", "--K", "10", "--sweep", "--m-max", "16", "--out", str(out)]) == 0
    table = pd.read_csv(out)
    assert list(table["m"]) == list(range(2, 17))
    assert table["total_bound"].is_monotonic_increasing
    assert table.loc[table["m"] == 4, "bound_A"].item() == 14 * 3 * 10


def test_global_flags_before_command(matrix_file, capsys):
    assert cli.main(["--tol", "1e-9", "mpoly", matrix_file("F3.json", dft_matrix(3))]) == 0
    assert capsys.readouterr().out.startswith("x^4 - 1")

