"""Malmquist-Takenaka functions, the Cayley-type variable map and the
generalized MT family.

The MT system is

    phi_n(x) = sqrt(2/pi) i^n (1 + 2ix)^n / (1 - 2ix)^(n+1),    n in Z,

and with x = tan(theta/2)/2 it becomes i^n sqrt(2/pi) e^{i(n+1/2)theta} cos(theta/2).
All evaluators go through the angle form, so large |n| never forms (1+2ix)^n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DomainError, ParameterError

SQRT_2_OVER_PI = float(np.sqrt(2.0 / np.pi))

_I_POWERS = np.array([1.0, 1.0j, -1.0, -1.0j])


def ipow(n):
    """Exact i**n for integer n (scalar or array)."""
    return _I_POWERS[np.mod(n, 4)]


def theta_of_x(x):
    """Map x in R to theta = 2 arctan(2x) in (-pi, pi)."""
    return 2.0 * np.arctan(2.0 * np.asarray(x, dtype=float))[()]


def x_of_theta(theta):
    """Inverse of :func:`theta_of_x`; raises DomainError for |theta| >= pi."""
    theta = np.asarray(theta, dtype=float)
    if np.any(~(np.abs(theta) < np.pi)):
        raise DomainError("theta must satisfy |theta| < pi")
    return (0.5 * np.tan(0.5 * theta))[()]


def envelope(x):
    """Common modulus sqrt(2 / (pi (1 + 4x^2))) of every MT function."""
    x = np.asarray(x, dtype=float)
    return (SQRT_2_OVER_PI / np.sqrt(1.0 + 4.0 * x * x))[()]


def eval_mt(n, x):
    """Evaluate the MT function phi_n at x.

    ``n`` and ``x`` broadcast against each other. Uses
    e^{i theta/2} cos(theta/2) = 1 / (1 - 2ix) so only the unimodular factor
    e^{i n theta} depends on n.
    """
    n = np.asarray(n)
    x = np.asarray(x, dtype=float)
    theta = 2.0 * np.arctan(2.0 * x)
    val = ipow(n) * SQRT_2_OVER_PI * np.exp(1j * n * theta) / (1.0 - 2.0j * x)
    return val[()]


def eval_mt_theta(n, theta):
    """MT function in the angle variable, i^n sqrt(2/pi) e^{i(n+1/2)theta} cos(theta/2)."""
    n = np.asarray(n)
    theta = np.asarray(theta, dtype=float)
    if np.any(~(np.abs(theta) < np.pi)):
        raise DomainError("theta must satisfy |theta| < pi")
    val = ipow(n) * SQRT_2_OVER_PI * np.exp(1j * (n + 0.5) * theta) * np.cos(0.5 * theta)
    return val[()]


class PhaseConvention(enum.Enum):
    """Unimodular prefactor gamma_n of the generalized family."""

    POWERS_OF_MINUS_I = "(-i)^n"
    UNIT = "1"

    def gamma(self, n):
        n = np.asarray(n)
        if self is PhaseConvention.POWERS_OF_MINUS_I:
            return ipow(-n)
        return np.ones(n.shape, dtype=complex)[()]


@dataclass(frozen=True)
class GeneralMTParams:
    """Parameters (lambda, omega, delta, gamma_n) of the generalized MT family."""

    lam: complex = 0.5j
    omega: float = 0.0
    delta: float = 0.0
    phase: PhaseConvention = PhaseConvention.POWERS_OF_MINUS_I

    def __post_init__(self):
        lam = complex(self.lam)
        if lam.imag == 0.0 or not np.isfinite(lam.real) or not np.isfinite(lam.imag):
            raise ParameterError("lambda must be finite with nonzero imaginary part")
        if not (np.isfinite(self.omega) and np.isfinite(self.delta)):
            raise ParameterError("omega and delta must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "delta", float(self.delta))


def eval_general_mt(p: GeneralMTParams, n, x):
    """gamma_n sqrt(|Im lam|/pi) e^{i omega x} (lam - x)^{n+delta} / (conj(lam) - x)^{n+delta+1}.

    The ratio (lam - x)/(conj(lam) - x) is unimodular with continuous phase
    2 arg(lam - x), so non-integer powers are taken along that branch.
    """
    n = np.asarray(n)
    x = np.asarray(x, dtype=float)
    lam = p.lam
    half_phase = np.arctan2(lam.imag, lam.real - x)
    s = n + p.delta
    val = (
        p.phase.gamma(n)
        * np.sqrt(abs(lam.imag) / np.pi)
        * np.exp(1j * (p.omega * x + 2.0 * s * half_phase))
        / (np.conj(lam) - x)
    )
    return val[()]


def general_mt_bc(p: GeneralMTParams, n):
    """Recurrence coefficients (b_n, c_n) of the generalized family.

    Derived by writing -s/(lam-x) + (s+1)/(conj(lam)-x) in the basis
    {v/u, 1, u/v} with u = lam - x, v = conj(lam) - x:

        b_n = (n + delta + 1) gamma_n / (2i Im(lam) gamma_{n+1})
        c_n = omega + (2(n + delta) + 1) / (2 Im(lam))
    """
    n = np.asarray(n)
    beta = p.lam.imag
    s = n + p.delta
    ratio = p.phase.gamma(n) / p.phase.gamma(n + 1)
    b = (s + 1.0) * ratio / (2.0j * beta)
    c = p.omega + (2.0 * s + 1.0) / (2.0 * beta)
    return np.asarray(b)[()], np.asarray(c, dtype=float)[()]


class Family(enum.Enum):
    MT = "mt"
    GENERAL_MT = "gmt"
    FOURIER_LAGUERRE = "fl"
    SHIFTED_HERMITE = "hermite"


@dataclass(frozen=True)
class BasisSpec:
    """Which orthonormal system an expansion lives in.

    Use the constructors :meth:`mt`, :meth:`general_mt`,
    :meth:`fourier_laguerre` and :meth:`shifted_hermite`.
    """

    family: Family
    alpha: float = 0.0
    params: Optional[GeneralMTParams] = None

    def __post_init__(self):
        if self.family is Family.FOURIER_LAGUERRE and not self.alpha > -1.0:
            raise ParameterError("Fourier-Laguerre basis requires alpha > -1")
        if self.family is Family.GENERAL_MT and self.params is None:
            raise ParameterError("generalized MT basis needs GeneralMTParams")
        if not np.isfinite(self.alpha):
            raise ParameterError("alpha must be finite")

    @classmethod
    def mt(cls):
        return cls(Family.MT)

    @classmethod
    def general_mt(cls, params: GeneralMTParams):
        return cls(Family.GENERAL_MT, params=params)

    @classmethod
    def fourier_laguerre(cls, alpha: float):
        return cls(Family.FOURIER_LAGUERRE, alpha=float(alpha))

    @classmethod
    def shifted_hermite(cls, alpha: float = 0.0):
        return cls(Family.SHIFTED_HERMITE, alpha=float(alpha))

    @property
    def indexed_over_z(self) -> bool:
        """True when the basis is indexed by all integers rather than n >= 0."""
        return self.family in (Family.MT, Family.GENERAL_MT)

    def __str__(self):
        if self.family is Family.MT:
            return "mt"
        if self.family is Family.GENERAL_MT:
            p = self.params
            return f"gmt:{p.lam.real:g},{p.lam.imag:g},{p.omega:g},{p.delta:g}"
        return f"{self.family.value}:{self.alpha:g}"
