"""
Settings Utility
================
Tolerances, sampling and search limits shared by the CLI, the agent and the page.

Usage:
    from utils.settings import load_settings
    settings = load_settings(overrides={"verification": {"seed": 7}})
    settings["tolerances"]["end_to_end"]
"""

from __future__ import annotations

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.json"

# Fallback when config/defaults.json is missing or unreadable
_FALLBACK: Dict[str, Any] = {
    "tolerances": {
        "default": 1e-10,
        "cluster": 1e-7,
        "unimodular": 1e-8,
        "coefficient": 1e-8,
        "unitarity": 1e-9,
        "end_to_end": 1e-8,
        "intermediate": 1e-10,
        "lemma": 1e-9,
        "lemma_agreement": 1e-12,
        "reconstruction": 1e-9,
    },
    "verification": {
        "random_states": 20,
        "basis_state_max_dim": 16,
        "seed": 20240601,
    },
    "search": {"max_m": 64},
    "cost": {"c_syn": 64},
    "simulation": {"max_width": 12},
}


def _deep_merge(base: Dict[str, Any], extra: Mapping[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        elif value is not None:
            out[key] = copy.deepcopy(value)
    return out


def load_settings(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Load settings JSON, falling back to the built-in defaults.

    Args:
        path: settings file (defaults to config/defaults.json)
        overrides: nested dict merged on top; None values are ignored

    Returns:
        dict: fallback <- file <- overrides
    """
    settings_path = Path(path) if path else DEFAULT_SETTINGS_PATH
    try:
        with open(settings_path, encoding="utf-8") as f:
            loaded = json.load(f)
        if not isinstance(loaded, dict):
            raise ValueError("settings file must hold a JSON object")
        settings = _deep_merge(_FALLBACK, loaded)
    except Exception as e:
        logger.warning("settings: using built-in defaults (%s: %s)", settings_path, e)
        settings = copy.deepcopy(_FALLBACK)

    if overrides:
        settings = _deep_merge(settings, overrides)
    return settings
