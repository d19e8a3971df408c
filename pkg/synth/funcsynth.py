# -*- coding: utf-8 -*-
"""
Function Synthesis
==================

Module Overview (for future devs)
---------------------------------
Turns a scalar function f and a unitary U with U^m = tau I into the matrices
the generic circuit needs.

Flow:
1) Sample f on the m roots of x^m - tau (rho * omega^k, k = 0..m-1)
2) Inverse DFT of the samples, de-scaled by rho^i -> alpha (CoefficientVector)
3) Companion matrix P of x^m - tau, coefficient matrix C (row k = alpha P^k)
4) M = diag(C, I) on mu ancillae, B = Householder completion of the uniform column
5) Bundle everything as a SynthesisBundle for circuit.assemble_generic()

Also here:
- check_unitarity_lemma(): row inner products of C straight from alpha
- limitation_demo(): the non-binomial counterexample (first row norm^2 > 1)
- extend_to_binomial(): U^m scalar but minimal polynomial of lower degree

Important:
- Every f value on a node must be unimodular (1e-8); otherwise M is not unitary
  and we fail fast with UnimodularityError naming the root.
- Root ordering: rho = exp(i arg(tau)/m), arg(tau) in (-pi, pi].
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from synth.errors import (
    DimensionError,
    DomainError,
    FormError,
    NotApplicableError,
    NumericError,
    PreconditionError,
    UnimodularityError,
)
from synth.matcore import (
    CLUSTER_TOL,
    COEFF_TOL,
    DEFAULT_TOL,
    MatrixLike,
    Polynomial,
    as_matrix,
    eigendecompose_unitary,
    find_scalar_power,
    frozen,
    matrix_power,
    max_abs,
    scalar_power_check,
)

logger = logging.getLogger(__name__)

UNIMODULAR_TOL = 1e-8
NAMED_TAGS = ("frft", "power", "identity", "conjugate")


# -----------------------------------------------------------------------------
# Interpolation nodes
# -----------------------------------------------------------------------------
def principal_root(m: int, tau: complex) -> complex:
    """rho = exp(i arg(tau) / m) with arg(tau) in (-pi, pi]."""
    phase = cmath.phase(complex(tau))
    if phase <= -math.pi:
        phase = math.pi
    return cmath.exp(1j * phase / m)


def binomial_roots(m: int, tau: complex) -> np.ndarray:
    """The m roots of x^m - tau, ordered rho * omega^k."""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    rho = principal_root(m, tau)
    k = np.arange(m)
    return rho * np.exp(2j * np.pi * k / m)


def ancilla_count(m: int) -> int:
    """Smallest mu with 2^(mu-1) < m <= 2^mu (mu = 0 for m = 1)."""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    return (m - 1).bit_length()


def _check_register(m: int, mu: int) -> int:
    if mu < 0 or m < 1 or m > 2**mu or (mu > 0 and m <= 2 ** (mu - 1)):
        raise DimensionError(f"need 2^(mu-1) < m <= 2^mu, got m={m}, mu={mu}")
    return 2**mu


# -----------------------------------------------------------------------------
# FunctionSpec
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """
    A scalar function, either by samples on the roots of x^m - tau or by name.

    Named tags:
        frft(x)      fractional DFT power, defined by its four closed-form coefficients
        power(s)     principal branch lambda^s
        identity     lambda
        conjugate    conj(lambda)
    """

    variant: str
    tag: Optional[str] = None
    x: Optional[float] = None
    s: Optional[float] = None
    m: Optional[int] = None
    tau: complex = 1.0 + 0j
    samples: Tuple[complex, ...] = ()
    node_tol: float = CLUSTER_TOL

    def __post_init__(self) -> None:
        if self.variant == "samples":
            if self.m is None or self.m < 1:
                raise FormError("samples spec needs m >= 1")
            if len(self.samples) != self.m:
                raise FormError(f"samples spec has {len(self.samples)} samples, expected m={self.m}")
            values = tuple(complex(v) for v in self.samples)
            if not all(cmath.isfinite(v) for v in values):
                raise FormError("samples must be finite")
            object.__setattr__(self, "samples", values)
            object.__setattr__(self, "tau", complex(self.tau))
        elif self.variant == "named":
            if self.tag not in NAMED_TAGS:
                raise FormError(f"unknown named function {self.tag!r}; expected one of {NAMED_TAGS}")
            if self.tag == "frft" and (self.x is None or not math.isfinite(self.x)):
                raise FormError("frft needs a finite angle x")
            if self.tag == "power" and (self.s is None or not math.isfinite(self.s)):
                raise FormError("power needs a finite exponent s")
        else:
            raise FormError(f"unknown variant {self.variant!r}")

    # ---- constructors ----
    @classmethod
    def from_samples(cls, samples: Sequence[complex], tau: complex = 1.0) -> "FunctionSpec":
        return cls(variant="samples", m=len(samples), tau=complex(tau), samples=tuple(samples))

    @classmethod
    def frft(cls, x: float) -> "FunctionSpec":
        return cls(variant="named", tag="frft", x=float(x))

    @classmethod
    def power(cls, s: float) -> "FunctionSpec":
        return cls(variant="named", tag="power", s=float(s))

    @classmethod
    def identity(cls) -> "FunctionSpec":
        return cls(variant="named", tag="identity")

    @classmethod
    def conjugate(cls) -> "FunctionSpec":
        return cls(variant="named", tag="conjugate")

    # ---- evaluation ----
    @property
    def nodes(self) -> np.ndarray:
        if self.variant != "samples":
            raise NotApplicableError("named functions have no fixed node set")
        return binomial_roots(self.m, self.tau)

    def __call__(self, lam: complex) -> complex:
        lam = complex(lam)
        if self.variant == "samples":
            nodes = self.nodes
            k = int(np.argmin(np.abs(nodes - lam)))
            if abs(nodes[k] - lam) > self.node_tol:
                raise DomainError(f"samples spec is undefined at {lam:.12g} (not a root of x^{self.m} - tau)")
            return self.samples[k]

        if self.tag == "identity":
            return lam
        if self.tag == "conjugate":
            return lam.conjugate()
        if self.tag == "power":
            if lam == 0:
                raise DomainError("power is undefined at 0")
            # arg in (-pi, pi]; values within node_tol of -pi sit on the +pi side, as in principal_root
            phase = cmath.phase(lam)
            if phase < -math.pi + self.node_tol:
                phase = math.pi
            return cmath.exp(self.s * complex(math.log(abs(lam)), phase))

        # frft: evaluated through its coefficient polynomial on the fourth roots of unity
        from synth.frft import frft_coefficients

        quarter = np.array([1, 1j, -1, -1j])
        k = int(np.argmin(np.abs(quarter - lam)))
        if abs(quarter[k] - lam) > self.node_tol:
            raise DomainError(f"frft is only defined on the fourth roots of unity, got {lam:.12g}")
        return frft_coefficients(self.x).evaluate(complex(quarter[k]))

    def describe(self) -> str:
        if self.variant == "samples":
            return f"samples(m={self.m}, tau={self.tau:.12g})"
        if self.tag == "frft":
            return f"frft(x={self.x!r})"
        if self.tag == "power":
            return f"power(s={self.s!r})"
        return self.tag or "named"


# -----------------------------------------------------------------------------
# CoefficientVector
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """alpha_0 .. alpha_{m-1} with the tau of x^m - tau they were built for."""

    alpha: np.ndarray
    m: int
    tau: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        values = np.asarray(self.alpha, dtype=complex).reshape(-1)
        if len(values) != self.m or self.m < 1:
            raise DimensionError(f"alpha has {len(values)} entries, expected m={self.m}")
        object.__setattr__(self, "alpha", frozen(values))
        object.__setattr__(self, "tau", complex(self.tau))

    def evaluate(self, lam: complex) -> complex:
        """sum_i alpha_i lam^i."""
        acc = 0j
        for a in self.alpha[::-1]:
            acc = acc * lam + a
        return complex(acc)

    def reconstruction_residual(self, f: Callable[[complex], complex]) -> float:
        """max_k |sum_i alpha_i r_k^i - f(r_k)| over the roots of x^m - tau."""
        nodes = binomial_roots(self.m, self.tau)
        return max(abs(self.evaluate(r) - complex(f(r))) for r in nodes)


def _as_alpha(alpha: Union[CoefficientVector, Sequence[complex], np.ndarray]) -> np.ndarray:
    if isinstance(alpha, CoefficientVector):
        return np.asarray(alpha.alpha, dtype=complex)
    return np.asarray(alpha, dtype=complex).reshape(-1)


def interp_coefficients(
    f: Callable[[complex], complex],
    m: int,
    tau: complex,
    tol: float = UNIMODULAR_TOL,
) -> CoefficientVector:
    """
    alpha_i = rho^{-i} * (1/m) sum_k f(rho omega^k) omega^{-ik}.

    Raises:
        PreconditionError: m < 1 or |tau| != 1
        DomainError: f undefined at a root
        UnimodularityError: |f(root)| != 1 within tol
    """
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > tol:
        raise PreconditionError(f"|tau| must be 1, got {abs(tau):.12g}")

    roots = binomial_roots(m, tau)
    if isinstance(f, FunctionSpec) and f.variant == "samples" and f.m == m and abs(f.tau - tau) <= tol:
        samples = np.asarray(f.samples, dtype=complex)
    else:
        samples = np.empty(m, dtype=complex)
        for k, r in enumerate(roots):
            try:
                samples[k] = complex(f(complex(r)))
            except DomainError:
                raise
            except (ArithmeticError, ValueError, TypeError) as e:
                raise DomainError(f"function undefined at root {complex(r):.12g}: {e}") from e

    for r, v in zip(roots, samples):
        if not cmath.isfinite(v):
            raise DomainError(f"function is not finite at root {complex(r):.12g}")
        if abs(abs(v) - 1.0) > tol:
            raise UnimodularityError(complex(r), complex(v), tol)

    rho = principal_root(m, tau)
    alpha = np.fft.fft(samples) / m * rho ** (-np.arange(m))
    logger.debug("interp_coefficients: m=%d tau=%s alpha=%s", m, tau, np.round(alpha, 12))
    return CoefficientVector(alpha=alpha, m=m, tau=tau)


def linear_combination(alpha: Union[CoefficientVector, Sequence[complex]], U: MatrixLike) -> np.ndarray:
    """sum_i alpha_i U^i."""
    coeffs = _as_alpha(alpha)
    arr = as_matrix(U)
    power = np.eye(arr.shape[0], dtype=complex)
    total = np.zeros_like(power)
    for a in coeffs:
        total = total + a * power
        power = power @ arr
    return total


# -----------------------------------------------------------------------------
# P, C, M, B
# -----------------------------------------------------------------------------
def companion_matrix(mpoly: Polynomial) -> np.ndarray:
    """
    Companion matrix of m(x) = x^m - g(x): super-diagonal ones, last row (g_0 .. g_{m-1}).
    """
    m = mpoly.degree
    if m < 1:
        raise FormError(f"companion matrix needs degree >= 1, got {m}")
    if not mpoly.is_monic(tol=1e-12):
        raise FormError(f"polynomial is not monic (leading coefficient {mpoly.leading})")

    g = -mpoly.as_array()[:m]
    P = np.zeros((m, m), dtype=complex)
    P[np.arange(m - 1), np.arange(1, m)] = 1.0
    P[m - 1, :] = g
    return P


def beta_matrix(alpha: Union[CoefficientVector, Sequence[complex]], P: MatrixLike) -> np.ndarray:
    """C with row k = alpha P^k, k = 0 .. m-1."""
    row = _as_alpha(alpha)
    P = as_matrix(P)
    m = len(row)
    if P.shape[0] != m:
        raise DimensionError(f"alpha has length {m} but P is {P.shape[0]}x{P.shape[0]}")

    C = np.empty((m, m), dtype=complex)
    for k in range(m):
        C[k] = row
        row = row @ P
    return C


def circulant_form(alpha: CoefficientVector) -> np.ndarray:
    """Closed form of C for x^m - tau: [tau]_{i>j} alpha_{(j-i) mod m}."""
    a = _as_alpha(alpha)
    m = len(a)
    i, j = np.indices((m, m))
    scale = np.where(i > j, alpha.tau, 1.0)
    return scale * a[(j - i) % m]


def build_M(C: MatrixLike, mu: int) -> np.ndarray:
    """diag(C, I_{2^mu - m})."""
    C = as_matrix(C)
    dim = _check_register(C.shape[0], mu)
    M = np.eye(dim, dtype=complex)
    M[: C.shape[0], : C.shape[0]] = C
    return M


def build_B(m: int, mu: int) -> np.ndarray:
    """
    Unitary whose first column is (1/sqrt(m))(1,..,1,0,..,0)^t.

    Householder reflection I - 2 v v^dagger / |v|^2 with v = e_0 - target;
    identity when the target already is e_0 (m = 1).
    """
    dim = _check_register(m, mu)
    if m == 1:
        return np.eye(dim, dtype=complex)

    target = np.zeros(dim)
    target[:m] = 1.0 / math.sqrt(m)
    v = -target
    v[0] += 1.0
    H = np.eye(dim) - 2.0 * np.outer(v, v) / float(v @ v)
    return H.astype(complex)


# -----------------------------------------------------------------------------
# Lemma check
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class LemmaReport:
    max_row_norm_deviation: float
    max_offdiag_inner: float
    inner_products: Tuple[complex, ...]

    def passed(self, tol: float = 1e-9) -> bool:
        return self.max_row_norm_deviation <= tol and self.max_offdiag_inner <= tol


def check_unitarity_lemma(alpha: CoefficientVector) -> LemmaReport:
    """
    <row a|row 0> of C evaluated straight from alpha, no matrix build:

        sum_{j<a} conj(tau) conj(alpha_{j-a mod m}) alpha_j + sum_{j>=a} conj(alpha_{j-a}) alpha_j
    """
    a_vec = _as_alpha(alpha)
    m = len(a_vec)
    tau_bar = complex(alpha.tau).conjugate()

    inner = []
    for a in range(m):
        low = sum(tau_bar * a_vec[(j - a) % m].conjugate() * a_vec[j] for j in range(a))
        high = sum(a_vec[j - a].conjugate() * a_vec[j] for j in range(a, m))
        inner.append(complex(low + high))

    row_dev = abs(inner[0] - 1.0)
    offdiag = max((abs(v) for v in inner[1:]), default=0.0)
    return LemmaReport(max_row_norm_deviation=row_dev, max_offdiag_inner=offdiag, inner_products=tuple(inner))


# -----------------------------------------------------------------------------
# Limitation demo
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LimitationReport:
    mpoly: Polynomial
    g: Polynomial
    C: np.ndarray
    first_row_norm_sq: float
    reduction_residual: float


def limitation_demo(U: MatrixLike, tol: float = DEFAULT_TOL) -> LimitationReport:
    """
    Non-binomial minimal polynomial x^m - g(x): take V = U^m = g(U), so alpha = g,
    and the first row of C has squared norm sum |g_i|^2 > 1.

    Raises:
        NotApplicableError: g is constant (binomial minimal polynomial)
    """
    arr = as_matrix(U)
    spectrum = eigendecompose_unitary(arr, tol)
    mpoly = Polynomial.from_roots(spectrum.cluster_values)
    m = mpoly.degree

    g_coeffs = -mpoly.as_array()[:m]
    if m < 2 or np.all(np.abs(g_coeffs[1:]) <= COEFF_TOL):
        raise NotApplicableError(
            f"minimal polynomial {mpoly.format()} is binomial; the limitation needs a non-constant g(x)"
        )

    g = Polynomial(tuple(g_coeffs))
    C = beta_matrix(g_coeffs, companion_matrix(mpoly))
    norm_sq = float(np.sum(np.abs(C[0]) ** 2))
    reduction = max_abs(matrix_power(arr, m) - g.evaluate(arr))

    logger.debug("limitation_demo: m(x)=%s g(x)=%s |row0|^2=%.12g", mpoly.format(), g.format(), norm_sq)
    return LimitationReport(mpoly=mpoly, g=g, C=C, first_row_norm_sq=norm_sq, reduction_residual=reduction)


# -----------------------------------------------------------------------------
# Extension to x^m - tau
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ExtensionResult:
    tau: complex
    nodes: np.ndarray
    mpoly: Polynomial
    cofactor: Polynomial
    missing_roots: Tuple[complex, ...]
    U_A: Optional[np.ndarray] = None


def _scalar_power_hint(U: np.ndarray, tol: float, max_m: int = 64) -> Optional[str]:
    found = find_scalar_power(U, max_m, tol)
    if found is None:
        return None
    return f"U^{found[0]} is scalar; try m={found[0]}"


def extend_to_binomial(U: MatrixLike, m: int, tol: float = DEFAULT_TOL, materialize: bool = True) -> ExtensionResult:
    """
    U^m = tau I: the minimal polynomial of U divides x^m - tau = m(x) m_2(x).

    Nodes are all m roots of x^m - tau. When materialize is set, U_A = diag(U, A)
    with A = diag(roots of m_2); its minimal polynomial is x^m - tau.

    Raises:
        PreconditionError: U^m is not scalar
        NumericError: the division leaves a remainder
    """
    arr = as_matrix(U)
    tau = scalar_power_check(arr, m, tol)
    if tau is None:
        raise PreconditionError(f"U^{m} is not a scalar matrix", hint=_scalar_power_hint(arr, tol))

    spectrum = eigendecompose_unitary(arr, tol)
    mpoly = Polynomial.from_roots(spectrum.cluster_values)
    _, remainder = Polynomial.binomial(m, tau).divmod(mpoly)
    if remainder.norm() > COEFF_TOL:
        raise NumericError(f"x^{m} - tau is not divisible by {mpoly.format()} (remainder {remainder.norm():.3e})")

    nodes = binomial_roots(m, tau / abs(tau))
    eigen = np.asarray(spectrum.cluster_values, dtype=complex)
    missing = tuple(complex(r) for r in nodes if np.min(np.abs(eigen - r)) > CLUSTER_TOL)
    if len(missing) != m - mpoly.degree:
        raise NumericError(
            f"expected {m - mpoly.degree} roots outside the spectrum, found {len(missing)}"
        )

    cofactor = Polynomial.from_roots(missing)
    U_A = None
    if materialize:
        U_A = scipy.linalg.block_diag(arr, np.diag(np.asarray(missing, dtype=complex))) if missing else arr.copy()

    if missing:
        logger.info("extend_to_binomial: m(x)=%s, adding roots %s", mpoly.format(), cofactor.format())
    return ExtensionResult(
        tau=tau,
        nodes=frozen(nodes),
        mpoly=mpoly,
        cofactor=cofactor,
        missing_roots=missing,
        U_A=None if U_A is None else frozen(U_A),
    )


# -----------------------------------------------------------------------------
# Bundle
# -----------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SynthesisBundle:
    m: int
    mu: int
    tau: complex
    alpha: CoefficientVector
    P: np.ndarray
    C: np.ndarray
    M: np.ndarray
    B: np.ndarray
    label: str = ""


def assemble_bundle(alpha: CoefficientVector, label: str = "") -> SynthesisBundle:
    """P, C, M and B for a coefficient vector over x^m - tau."""
    m = alpha.m
    mu = ancilla_count(m)
    P = companion_matrix(Polynomial.binomial(m, alpha.tau))
    C = beta_matrix(alpha, P)
    return SynthesisBundle(
        m=m,
        mu=mu,
        tau=alpha.tau,
        alpha=alpha,
        P=frozen(P),
        C=frozen(C),
        M=frozen(build_M(C, mu)),
        B=frozen(build_B(m, mu)),
        label=label,
    )


def synthesize(
    U: MatrixLike,
    f: Callable[[complex], complex],
    m: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    max_m: int = 64,
    unimodular_tol: float = UNIMODULAR_TOL,
) -> SynthesisBundle:
    """
    Full algebra for f(U): detect / check U^m = tau I, interpolate, build P, C, M, B.

    Raises:
        PreconditionError: U^m not scalar (hint names the smallest valid m), or no m <= max_m
        UnimodularityError: |f| != 1 on some root of x^m - tau
    """
    arr = as_matrix(U)
    if m is None:
        found = find_scalar_power(arr, max_m, tol)
        if found is None:
            raise PreconditionError(f"no m <= {max_m} makes U^m scalar")
        m, tau = found
    else:
        tau = scalar_power_check(arr, m, tol)
        if tau is None:
            raise PreconditionError(f"U^{m} is not a scalar matrix", hint=_scalar_power_hint(arr, tol, max_m))

    tau = tau / abs(tau)
    alpha = interp_coefficients(f, m, tau, unimodular_tol)
    label = f.describe() if isinstance(f, FunctionSpec) else getattr(f, "__name__", "f")
    logger.debug("synthesize: m=%d tau=%s f=%s", m, tau, label)
    return assemble_bundle(alpha, label=label)
