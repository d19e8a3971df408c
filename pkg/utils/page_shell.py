# utils/page_shell.py
# -*- coding: utf-8 -*-
"""
Shared Page Shell

Page Overview (for future devs)
------------------------------
Provides a consistent app shell across pages:
- set_page_config
- settings (config/defaults.json, cached per session)
- sidebar tolerance / seed controls layered over the settings

Usage:
    from utils.page_shell import init_page
    settings = init_page("Generic Circuit Synthesis")
"""

from __future__ import annotations

from typing import Any, Dict

import streamlit as st

from utils.settings import load_settings


@st.cache_data(show_spinner=False)
def _cached_settings() -> Dict[str, Any]:
    return load_settings()


def init_page(title: str) -> Dict[str, Any]:
    """
    Initialize page shell and return the effective settings.

    Important:
    - Must be called before the page renders content.
    """
    # Must be first Streamlit call
    st.set_page_config(
        page_title=title,
        page_icon="🔬",
        layout="wide",
        initial_sidebar_state="expanded",
    )

    base = _cached_settings()
    with st.sidebar:
        st.header("Settings")
        tol = st.number_input(
            "Numerical tolerance",
            value=float(base["tolerances"]["default"]),
            format="%.1e",
            min_value=1e-14,
            max_value=1e-6,
        )
        seed = st.number_input("Seed", value=int(base["verification"]["seed"]), step=1)

    return load_settings(overrides={"tolerances": {"default": float(tol)}, "verification": {"seed": int(seed)}})
