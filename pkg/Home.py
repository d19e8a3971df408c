# ---------------- Home.py ----------------
# -*- coding: utf-8 -*-
"""
Generic Circuit Synthesis - Home Page
=====================================
Build and verify the B, A, M, A^dagger, B^dagger circuit that realizes f(U)
for a unitary U with U^m = tau I.

Page Overview (for future devs)
------------------------------
- Initializes the page shell (page config, settings, sidebar tolerance / seed)
- Input section: pick U (DFT F_n, diagonal phases, uploaded matrix JSON) and f
  (fractional DFT power, principal power, identity, conjugate, uploaded spec JSON)
- Runs VerificationAgent on demand and keeps the result in session_state
- Shows the verdict, the checks table, alpha, C / M, gate counts, the cost sweep
- Allows exporting the report to a PDF

Important implementation notes:
- Library errors are SynthesisError subclasses; they render as st.error, never a traceback.
- Streamlit deprecation:
    - use width="stretch" instead of use_container_width=True
"""

from __future__ import annotations

import json
import math
from datetime import datetime
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import streamlit as st

# Keep legacy import behavior stable
import sys
sys.path.append(str(Path(__file__).parent))

from agents.verification_agent import JobConfig, VerificationAgent
from synth.circuit import cost_sweep
from synth.errors import SynthesisError
from synth.frft import frft_angle
from synth.funcsynth import FunctionSpec
from synth.matcore import dft_matrix
from utils import file_formats
from utils.page_shell import init_page
from utils.pdf_exports import build_verification_pdf


# -----------------------------------------------------------------------------
# Formatting helpers
# -----------------------------------------------------------------------------
def _complex_cell(z: complex) -> str:
    z = complex(z)
    re_part = 0.0 if abs(z.real) < 1e-12 else z.real
    im_part = 0.0 if abs(z.imag) < 1e-12 else z.imag
    if im_part == 0.0:
        return f"{re_part:.6g}"
    return f"{re_part:.6g} {'-' if im_part < 0 else '+'} {abs(im_part):.6g}i"


def _matrix_frame(M: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame([[_complex_cell(z) for z in row] for row in np.asarray(M)])


# -----------------------------------------------------------------------------
# Inputs
# -----------------------------------------------------------------------------
def _choose_unitary() -> Tuple[Optional[np.ndarray], str]:
    kind = st.radio("U", ["DFT F_n", "Diagonal phases", "Upload matrix JSON"], horizontal=True)

    if kind == "DFT F_n":
        n = st.slider("n (system qubits)", min_value=1, max_value=6, value=3)
        return dft_matrix(n), f"dft(n={n})"

    if kind == "Diagonal phases":
        raw = st.text_input("Phases as fractions of a full turn", value="0, 0.25")
        try:
            turns = [float(t) for t in raw.split(",") if t.strip()]
        except ValueError:
            st.error("Phases must be comma-separated numbers.")
            return None, ""
        size = len(turns)
        if size == 0 or size & (size - 1):
            st.error("Need a power-of-two number of phases.")
            return None, ""
        return np.diag(np.exp(2j * math.pi * np.asarray(turns))), f"diag(turns={turns})"

    upload = st.file_uploader("Matrix JSON", type=["json"], key="matrix_upload")
    if upload is None:
        return None, ""
    try:
        return file_formats.matrix_from_dict(json.loads(upload.getvalue())), upload.name
    except (SynthesisError, ValueError) as e:
        st.error(f"Could not read matrix: {e}")
        return None, ""


def _choose_function() -> Optional[FunctionSpec]:
    kind = st.radio(
        "f",
        ["Fractional DFT power", "Power", "Identity", "Conjugate", "Upload spec JSON"],
        horizontal=True,
    )

    if kind == "Fractional DFT power":
        order = st.slider("Order a (x = a·π/2)", min_value=-4.0, max_value=4.0, value=0.5, step=0.05)
        return FunctionSpec.frft(frft_angle(order))
    if kind == "Power":
        return FunctionSpec.power(st.number_input("s", value=0.5))
    if kind == "Identity":
        return FunctionSpec.identity()
    if kind == "Conjugate":
        return FunctionSpec.conjugate()

    upload = st.file_uploader("Function spec JSON", type=["json"], key="spec_upload")
    if upload is None:
        return None
    try:
        return file_formats.spec_from_dict(json.loads(upload.getvalue()))
    except (SynthesisError, ValueError) as e:
        st.error(f"Could not read function spec: {e}")
        return None


# -----------------------------------------------------------------------------
# Result renderer
# -----------------------------------------------------------------------------
def _render_result(bundle, circuit, report) -> None:
    c1, c2, c3, c4 = st.columns(4)
    c1.metric("Verdict", report.verdict.upper())
    c2.metric("m / μ", f"{report.m} / {report.mu}")
    c3.metric("Circuit width", str(circuit.width))
    c4.metric("Gates", str(len(circuit)))

    if report.extension_roots:
        st.warning(
            "Minimal polynomial has lower degree than m; interpolating over extra roots "
            + ", ".join(_complex_cell(r) for r in report.extension_roots)
        )

    # PDF export
    try:
        pdf_bytes = build_verification_pdf(report=report.to_dict(), generated_at=datetime.now().strftime("%Y-%m-%d %H:%M:%S"))
        fname_ts = datetime.now().strftime("%Y%m%d-%H%M%S")
        st.download_button(
            "⬇️ Download Verification PDF",
            data=pdf_bytes,
            file_name=f"verification_{fname_ts}.pdf",
            mime="application/pdf",
            type="secondary",
            width="stretch",
        )
    except Exception as e:
        st.warning(f"PDF export unavailable: {e}")

    st.divider()

    st.write("### ✅ Checks")
    df_checks = report.checks_frame()
    df_checks["residual"] = df_checks["residual"].map(lambda x: f"{x:.3e}")
    df_checks["tolerance"] = df_checks["tolerance"].map(lambda x: f"{x:.0e}")
    st.dataframe(df_checks, width="stretch", hide_index=True)

    left, right = st.columns(2)
    with left:
        st.write("### α")
        df_alpha = pd.DataFrame({"i": range(report.m), "alpha_i": [_complex_cell(a) for a in report.alpha]})
        st.dataframe(df_alpha, width="stretch", hide_index=True)
        if report.phase_map:
            st.caption("Eigenvalue → phase: " + ", ".join(f"{k} ↦ {_complex_cell(v)}" for k, v in report.phase_map.items()))
    with right:
        st.write("### Gate counts")
        counts = {**report.gate_counts, **{f"two-level {k}": v for k, v in report.two_level.items()}}
        st.dataframe(pd.DataFrame(sorted(counts.items()), columns=["Kind", "Count"]), width="stretch", hide_index=True)

    with st.expander("C and M"):
        st.write("C (row k = α·P^k)")
        st.dataframe(_matrix_frame(bundle.C), width="stretch")
        st.write("M = diag(C, I)")
        st.dataframe(_matrix_frame(bundle.M), width="stretch")

    st.write("### 📈 Cost bounds")
    if report.cost is not None:
        st.caption(f"K = {report.cost.K}, c_syn = {report.cost.c_syn}")
        df_cost = cost_sweep(report.cost.K, range(2, 65), report.cost.c_syn)
        st.line_chart(df_cost.set_index("m")[["bound_A", "bound_small", "total_bound"]])
        st.dataframe(pd.DataFrame([report.cost.as_row()]), width="stretch", hide_index=True)


# -----------------------------------------------------------------------------
# Main
# -----------------------------------------------------------------------------
def main() -> None:
    settings = init_page("Generic Circuit Synthesis")

    st.title("Generic Circuit Synthesis")
    st.markdown("*f(U) as a linear combination of powers of U, verified by simulation*")
    st.divider()

    U, source = _choose_unitary()
    spec = _choose_function()
    m_override = st.number_input("m (0 = smallest m with U^m scalar)", min_value=0, max_value=64, value=0, step=1)

    run_clicked = st.button("Run synthesis", type="primary", width="stretch", disabled=U is None or spec is None)
    if run_clicked:
        with st.spinner("Building and simulating the circuit..."):
            try:
                job = JobConfig.from_settings(U, spec, settings, m=int(m_override) or None, source=source)
                st.session_state["synthesis_result"] = VerificationAgent(settings).run(job)
            except SynthesisError as e:
                st.session_state.pop("synthesis_result", None)
                st.error(f"Synthesis failed: {e}")
            except Exception as e:
                st.session_state.pop("synthesis_result", None)
                st.error(f"Home page error: {e}")

    result = st.session_state.get("synthesis_result")
    if not result:
        st.info("Pick U and f, then run the synthesis.")
        return

    st.divider()
    _render_result(*result)


if __name__ == "__main__":
    main()
