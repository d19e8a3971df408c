# -*- coding: utf-8 -*-
"""
Synthesis Errors
================
Exception hierarchy shared by the synth package.

Library code raises these; only the CLI and the Streamlit page catch them.
Each class carries the process exit code the CLI reports for it:
    2 = usage / parse / resource problem
    3 = precondition (math) problem
"""

from __future__ import annotations

from typing import Optional


EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_NOT_FOUND = 4


class SynthesisError(Exception):
    """Base class for everything the synthesis pipeline raises."""

    exit_code = EXIT_PRECONDITION


class DimensionError(SynthesisError):
    """Shapes do not fit (non-square matrix, wrong state length, μ too small)."""

    exit_code = EXIT_USAGE


class FormError(SynthesisError):
    """An object is not in the required canonical form (e.g. non-monic polynomial)."""

    exit_code = EXIT_USAGE


class FormatError(SynthesisError):
    """A matrix / spec / circuit / state file could not be parsed."""

    exit_code = EXIT_USAGE


class ResourceError(SynthesisError):
    """Request exceeds the dense-simulation limits."""

    exit_code = EXIT_USAGE


class PreconditionError(SynthesisError):
    """A mathematical precondition does not hold (non-unitary input, U^m not scalar)."""

    def __init__(self, message: str, hint: Optional[str] = None) -> None:
        super().__init__(message)
        self.hint = hint

    def __str__(self) -> str:
        base = super().__str__()
        return f"{base} (hint: {self.hint})" if self.hint else base


class NumericError(SynthesisError):
    """An eigensolver or division step did not produce a usable result."""


class DomainError(SynthesisError):
    """A scalar function is undefined at a required point."""


class UnimodularityError(SynthesisError):
    """A function value on an interpolation node is off the unit circle."""

    def __init__(self, root: complex, value: complex, tol: float) -> None:
        self.root = complex(root)
        self.value = complex(value)
        self.tol = tol
        super().__init__(
            f"|f(r)| = {abs(self.value):.12g} at root r = {_fmt_complex(self.root)} "
            f"(must be 1 within {tol:g})"
        )


class NotApplicableError(SynthesisError):
    """The requested demonstration does not apply to this input."""


class ConsistencyError(SynthesisError):
    """A bundle or circuit does not agree with the unitary it is used with."""


def _fmt_complex(z: complex) -> str:
    re_part = 0.0 if abs(z.real) < 1e-12 else z.real
    im_part = 0.0 if abs(z.imag) < 1e-12 else z.imag
    if im_part == 0.0:
        return f"{re_part:.12g}"
    if re_part == 0.0:
        return f"{im_part:.12g}i"
    return f"{re_part:.12g}{im_part:+.12g}i"
