# -*- coding: utf-8 -*-
"""
Matrix Core
===========

Module Overview (for future devs)
---------------------------------
Dense complex linear algebra used by every other synth module:
- ComplexMatrix values are plain numpy complex128 arrays, validated by as_matrix()
- Polynomial: ascending complex coefficients (minimal polynomials, x^m - tau, g(x))
- Spectrum: Schur-based eigendecomposition of a unitary with eigenvalue clusters
- spectral_function_oracle(): f(U) = T diag(f(lambda_i)) T^dagger, the reference
  every circuit result is checked against

Conventions:
- Default tolerance is 1e-10 unless a caller overrides it.
- Eigenvalues closer than 1e-7 on the unit circle are the same cluster.
- Everything here is a pure function of its inputs; returned arrays are read-only.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as npoly

from synth.errors import (
    DimensionError,
    DomainError,
    FormError,
    NumericError,
    PreconditionError,
    ResourceError,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
CLUSTER_TOL = 1e-7
COEFF_TOL = 1e-8
MAX_DIM = 1024

# Schur off-diagonal allowance, per unit of dim * tol
_SCHUR_SLACK = 100.0

MatrixLike = Union[np.ndarray, Sequence[Sequence[complex]]]


# -----------------------------------------------------------------------------
# ComplexMatrix helpers
# -----------------------------------------------------------------------------
def as_matrix(M: MatrixLike) -> np.ndarray:
    """
    Validate and return a square complex128 matrix.

    Raises:
        DimensionError: not 2-D, not square, or empty
        FormError: NaN / Inf entries
        ResourceError: dimension beyond MAX_DIM
    """
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionError("matrix dimension must be at least 1")
    if arr.shape[0] > MAX_DIM:
        raise ResourceError(f"matrix dimension {arr.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise FormError("matrix has non-finite entries")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only copy so values stay immutable after construction."""
    out = np.array(arr, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def max_abs(M: np.ndarray) -> float:
    """Max-entry norm."""
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


def unitarity_residual(M: MatrixLike) -> float:
    """max |M^dagger M - I|."""
    arr = as_matrix(M)
    return max_abs(arr.conj().T @ arr - np.eye(arr.shape[0]))


def is_unitary(M: MatrixLike, tol: float = DEFAULT_TOL) -> bool:
    """True iff the max-entry norm of M^dagger M - I is at most tol."""
    if tol <= 0:
        raise PreconditionError(f"tolerance must be positive, got {tol}")
    return unitarity_residual(M) <= tol


def _require_unitary(U: MatrixLike, tol: float) -> np.ndarray:
    arr = as_matrix(U)
    residual = unitarity_residual(arr)
    if residual > tol:
        raise PreconditionError(f"matrix is not unitary: |U^dagger U - I|_max = {residual:.3e} > {tol:g}")
    return arr


def matrix_power(U: MatrixLike, k: int) -> np.ndarray:
    """
    U^k by repeated squaring. Negative k uses U^dagger (inputs are unitary).
    """
    arr = as_matrix(U)
    if k < 0:
        return np.linalg.matrix_power(arr.conj().T, -k)
    return np.linalg.matrix_power(arr, k)


def dft_matrix(n: int) -> np.ndarray:
    """F_n = 2^{-n/2} (exp(-2 pi i k l / 2^n))_{k,l}."""
    if n < 0:
        raise DimensionError(f"qubit count must be non-negative, got {n}")
    size = 2**n
    k = np.arange(size)
    # reduce k*l mod N first; keeps the exponent small
    phase = (np.outer(k, k) % size) / size
    return np.exp(-2j * np.pi * phase) / np.sqrt(size)


# -----------------------------------------------------------------------------
# Polynomial
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class Polynomial:
    """
    Complex polynomial with ascending coefficients.

    Trailing zero coefficients are stripped on construction, so degree is
    always the index of the last nonzero coefficient (the zero polynomial
    is stored as a single 0).
    """

    coeffs: Tuple[complex, ...]

    def __post_init__(self) -> None:
        values = [complex(c) for c in self.coeffs]
        if not all(cmath.isfinite(c) for c in values):
            raise FormError("polynomial has non-finite coefficients")
        while len(values) > 1 and values[-1] == 0:
            values.pop()
        if not values:
            values = [0j]
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def from_roots(cls, roots: Sequence[complex]) -> "Polynomial":
        """Monic polynomial with the given roots."""
        if len(roots) == 0:
            return cls((1.0 + 0j,))
        coeffs = np.asarray(npoly.polyfromroots(np.asarray(roots, dtype=complex)), dtype=complex)
        coeffs[-1] = 1.0
        return cls(tuple(coeffs))

    @classmethod
    def binomial(cls, m: int, tau: complex) -> "Polynomial":
        """x^m - tau."""
        if m < 1:
            raise FormError(f"binomial degree must be >= 1, got {m}")
        coeffs = [0j] * (m + 1)
        coeffs[0] = -complex(tau)
        coeffs[m] = 1.0 + 0j
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def is_monic(self, tol: float = 0.0) -> bool:
        return abs(self.leading - 1.0) <= tol

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def evaluate(self, x: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        """Horner evaluation at a scalar or a square matrix."""
        if np.ndim(x) == 0:
            acc = 0j
            for c in reversed(self.coeffs):
                acc = acc * complex(x) + c
            return acc

        X = as_matrix(x)
        eye = np.eye(X.shape[0], dtype=complex)
        acc = self.coeffs[-1] * eye
        for c in reversed(self.coeffs[:-1]):
            acc = acc @ X + c * eye
        return acc

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """Quotient and remainder of polynomial long division."""
        if divisor.degree == 0 and divisor.coeffs[0] == 0:
            raise NumericError("division by the zero polynomial")
        quo, rem = npoly.polydiv(self.as_array(), divisor.as_array())
        return Polynomial(tuple(quo)), Polynomial(tuple(rem))

    def norm(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def format(self, var: str = "x", digits: int = 10) -> str:
        """
        Human readable form, highest degree first.

        Examples:
            x^4 - 1
            x^3 + i x^2 - x - i
        """
        parts = []
        for k in range(self.degree, -1, -1):
            c = _snap(self.coeffs[k], digits)
            if c == 0:
                continue
            sign, body, spaced = _coefficient_text(c, digits)
            if k > 0 and body == "1":
                body = ""
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            term = body + (" " if body and mono and spaced else "") + mono
            if not parts:
                parts.append(("-" if sign == "-" else "") + term)
            else:
                parts.append(f" {sign} {term}")
        return "".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.format()


def _snap(c: complex, digits: int) -> complex:
    threshold = 10.0 ** (1 - digits)
    re_part = round(c.real, digits)
    im_part = round(c.imag, digits)
    re_part = 0.0 if abs(re_part) < threshold else re_part
    im_part = 0.0 if abs(im_part) < threshold else im_part
    return complex(re_part, im_part)


def _coefficient_text(c: complex, digits: int) -> Tuple[str, str, bool]:
    """(sign, magnitude text, needs space before the monomial)."""
    if c.imag == 0:
        return ("-" if c.real < 0 else "+"), f"{abs(c.real):.{digits}g}", False
    if c.real == 0:
        mag = f"{abs(c.imag):.{digits}g}"
        return ("-" if c.imag < 0 else "+"), ("i" if mag == "1" else f"{mag}i"), True
    return "+", f"({c.real:.{digits}g}{c.imag:+.{digits}g}i)", True


# -----------------------------------------------------------------------------
# Spectrum
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues, unitary eigenvector matrix T, and eigenvalue clusters."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def cluster_values(self) -> Tuple[complex, ...]:
        """One representative per cluster: member mean renormalized to |lambda| = 1."""
        reps = []
        for members in self.clusters:
            mean = complex(np.mean(self.eigenvalues[list(members)]))
            reps.append(mean / abs(mean) if abs(mean) > 0 else mean)
        return tuple(reps)

    def cluster_of(self) -> np.ndarray:
        """Cluster index for every eigenvalue position."""
        labels = np.empty(len(self.eigenvalues), dtype=int)
        for label, members in enumerate(self.clusters):
            labels[list(members)] = label
        return labels

    def reassemble(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        """T diag(values) T^dagger (defaults to the eigenvalues themselves)."""
        diag = self.eigenvalues if values is None else np.asarray(values, dtype=complex)
        T = self.eigenvectors
        return (T * diag) @ T.conj().T


def _cluster_eigenvalues(values: np.ndarray, cluster_tol: float) -> Tuple[Tuple[int, ...], ...]:
    anchors: list = []
    groups: list = []
    for idx, lam in enumerate(values):
        for g, anchor in enumerate(anchors):
            if abs(lam - anchor) <= cluster_tol:
                groups[g].append(idx)
                break
        else:
            anchors.append(lam)
            groups.append([idx])
    return tuple(tuple(g) for g in groups)


def eigendecompose_unitary(
    U: MatrixLike,
    tol: float = DEFAULT_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> Spectrum:
    """
    Diagonalize a unitary via the complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the Schur vectors
    are an orthonormal eigenbasis even when eigenvalues repeat.

    Raises:
        PreconditionError: U not unitary within tol
        NumericError: Schur iteration failed or the triangular factor is not diagonal
    """
    arr = _require_unitary(U, tol)
    dim = arr.shape[0]

    try:
        D, T = scipy.linalg.schur(arr, output="complex")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericError(f"Schur decomposition failed: {e}") from e

    off = max_abs(np.triu(D, 1)) if dim > 1 else 0.0
    if off > _SCHUR_SLACK * dim * tol:
        raise NumericError(f"Schur factor not diagonal (off-diagonal {off:.3e}); input is not normal")

    eigenvalues = np.diag(D).copy()
    clusters = _cluster_eigenvalues(eigenvalues, cluster_tol)
    logger.debug("eigendecompose_unitary: dim=%d clusters=%d offdiag=%.2e", dim, len(clusters), off)
    return Spectrum(eigenvalues=frozen(eigenvalues), eigenvectors=frozen(T), clusters=clusters)


def minimal_polynomial(U: MatrixLike, tol: float = DEFAULT_TOL) -> Polynomial:
    """Product of (x - lambda) over the distinct eigenvalue clusters of a unitary U."""
    spectrum = eigendecompose_unitary(U, tol)
    return Polynomial.from_roots(spectrum.cluster_values)


def scalar_power_check(U: MatrixLike, m: int, tol: float = DEFAULT_TOL) -> Optional[complex]:
    """
    tau if U^m = tau I within tol, otherwise None.

    U^m is formed by repeated squaring.
    """
    if m < 1:
        raise PreconditionError(f"power must be a positive integer, got {m}")
    arr = _require_unitary(U, tol)
    W = matrix_power(arr, m)
    tau = complex(W[0, 0])
    deviation = max_abs(W - tau * np.eye(arr.shape[0]))
    if deviation <= tol:
        return tau
    return None


def find_scalar_power(U: MatrixLike, max_m: int = 64, tol: float = DEFAULT_TOL) -> Optional[Tuple[int, complex]]:
    """Smallest m <= max_m with U^m scalar, as (m, tau); None if there is none."""
    arr = _require_unitary(U, tol)
    for m in range(1, max_m + 1):
        tau = scalar_power_check(arr, m, tol)
        if tau is not None:
            return m, tau
    return None


# -----------------------------------------------------------------------------
# Spectral oracle
# -----------------------------------------------------------------------------
def spectral_function_oracle(
    U: MatrixLike,
    f: Callable[[complex], complex],
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """
    f(U) = T diag(f(lambda_i)) T^dagger.

    f is evaluated once per eigenvalue cluster (at the cluster representative),
    so two functions that agree on the spectrum give the same matrix.

    Raises:
        DomainError: f undefined (or non-finite) at an eigenvalue
    """
    spectrum = eigendecompose_unitary(U, tol)

    cluster_values = []
    for lam in spectrum.cluster_values:
        try:
            value = complex(f(lam))
        except DomainError:
            raise
        except (ArithmeticError, ValueError, TypeError) as e:
            raise DomainError(f"function undefined at eigenvalue {lam:.12g}: {e}") from e
        if not cmath.isfinite(value):
            raise DomainError(f"function is not finite at eigenvalue {lam:.12g}")
        cluster_values.append(value)

    diag = np.asarray(cluster_values, dtype=complex)[spectrum.cluster_of()]
    return spectrum.reassemble(diag)
