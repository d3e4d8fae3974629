"""Fourier-Laguerre and twisted Hermite systems.

The Fourier-Laguerre functions are Fourier transforms of orthonormal
generalized Laguerre polynomials weighted by sqrt(xi^alpha e^-xi) on (0, inf).
Several independent routes compute them:

* :func:`eval_fl_sum` -- the terminating 2F1 sum in z = 2/(1 - 2ix);
* :func:`build_phi_from_derivatives` -- a combination of derivatives of phi_0,
  driven either by the beta_{n,l} recurrence or by the explicit polynomial
  coefficients p_{n,l};
* :func:`eval_fl` -- a polynomial in w = e^{i theta} whose coefficients carry no
  cancellation, used for large n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import gammaln

from .basis_core import SQRT_2_OVER_PI, ipow
from .exceptions import ParameterError, ReducibilityError, WindowError

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


def _check_alpha(alpha):
    if not alpha > -1.0:
        raise ParameterError(f"alpha must exceed -1, got {alpha}")


def _check_n(n):
    if int(n) != n or n < 0:
        raise ParameterError(f"index must be a non-negative integer, got {n}")


def laguerre_bc(alpha: float, n: int):
    """b_n = sqrt((n+1)(n+1+alpha)), c_n = 2n+1+alpha."""
    _check_alpha(alpha)
    _check_n(n)
    return float(np.sqrt((n + 1.0) * (n + 1.0 + alpha))), float(2 * n + 1 + alpha)


def phi0_derivative(alpha: float, ell: int, x):
    """ell-th derivative of the zeroth Fourier-Laguerre function."""
    _check_alpha(alpha)
    _check_n(ell)
    x = np.asarray(x, dtype=float)
    z = 2.0 / (1.0 - 2.0j * x)
    logc = gammaln(ell + 1.0 + 0.5 * alpha) - 0.5 * gammaln(1.0 + alpha)
    val = ipow(ell) / _SQRT_2PI * np.exp(logc) * z ** (ell + 1.0 + 0.5 * alpha)
    return val[()]


@dataclass(frozen=True)
class BetaTable:
    """Triangular table beta[n, l], 0 <= l <= n <= n_max, plus the b, c used."""

    b: np.ndarray
    c: np.ndarray
    entries: np.ndarray

    @property
    def n_max(self) -> int:
        return self.entries.shape[0] - 1


def beta_table(b, c, n_max: int) -> BetaTable:
    """Build beta_{n,l} from beta_00 = beta_11 = 1, beta_10 = -i c_0 and

        beta_{n+1,l} = beta_{n,l-1} + |b_{n-1}|^2 beta_{n-1,l} - i c_n beta_{n,l}.

    ``b`` needs entries 0..n_max-1 and ``c`` entries 0..n_max-1.
    """
    b = np.asarray(b)
    c = np.asarray(c, dtype=float)
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    if n_max > 0 and (len(b) < n_max or len(c) < n_max):
        raise ParameterError("need b_n and c_n for n < n_max")
    if np.any(b[:n_max] == 0):
        raise ReducibilityError("b_n vanishes inside the table; system is reducible")
    beta = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    beta[0, 0] = 1.0
    if n_max >= 1:
        beta[1, 0] = -1j * c[0]
        beta[1, 1] = 1.0
    for n in range(1, n_max):
        bb = abs(b[n - 1]) ** 2
        beta[n + 1, 1 : n + 2] = beta[n, 0 : n + 1]
        beta[n + 1, : n + 1] += bb * np.append(beta[n - 1, :n], 0.0) - 1j * c[n] * beta[n, : n + 1]
    return BetaTable(b=b[:n_max].copy(), c=c[:n_max].copy(), entries=beta)


@dataclass(frozen=True)
class PolyCoeffTable:
    """Monomial coefficients p[n, l] of the orthonormal polynomials p_n."""

    p: np.ndarray

    @property
    def n_max(self) -> int:
        return self.p.shape[0] - 1


def laguerre_poly_table(alpha: float, n_max: int) -> PolyCoeffTable:
    """Coefficients of p_n = (-1)^n sqrt(n!/Gamma(n+1+alpha)) L_n^(alpha).

    p_{n,l} = sqrt(n! Gamma(n+1+alpha)) / Gamma(1+alpha)
              * (-1)^(n-l) / (l! (n-l)! (1+alpha)_l)

    evaluated in log space.
    """
    _check_alpha(alpha)
    p = np.zeros((n_max + 1, n_max + 1))
    for n in range(n_max + 1):
        ell = np.arange(n + 1)
        logmag = (
            0.5 * (gammaln(n + 1.0) + gammaln(n + 1.0 + alpha))
            - gammaln(ell + 1.0)
            - gammaln(n - ell + 1.0)
            - gammaln(1.0 + alpha + ell)
        )
        p[n, : n + 1] = (-1.0) ** (n - ell) * np.exp(logmag)
    return PolyCoeffTable(p)


def build_phi_from_derivatives(
    table: Union[BetaTable, PolyCoeffTable],
    phi0_derivs: Callable,
    n: int,
    x,
):
    """phi_n as a linear combination of phi_0^(l), l = 0..n.

    ``phi0_derivs(l, x)`` returns the l-th derivative of phi_0. With a
    :class:`BetaTable` the weights are beta_{n,l} / (b_0 ... b_{n-1}); with a
    :class:`PolyCoeffTable` they are i^n (-i)^l p_{n,l} / p_{0,0}.
    """
    _check_n(n)
    if n > table.n_max:
        raise WindowError(f"n={n} exceeds table n_max={table.n_max}")
    x = np.asarray(x, dtype=float)
    if isinstance(table, BetaTable):
        weights = table.entries[n, : n + 1] / np.prod(table.b[:n])
    else:
        ell = np.arange(n + 1)
        weights = ipow(n) * ipow(-ell) * table.p[n, : n + 1] / table.p[0, 0]
    total = np.zeros(x.shape, dtype=complex)
    for ell in range(n + 1):
        total = total + weights[ell] * phi0_derivs(ell, x)
    return total[()]


def eval_fl_sum(alpha: float, n: int, x):
    """Fourier-Laguerre function via the terminating hypergeometric sum.

    phi_n(x) = (-i)^n / sqrt(2 pi) sqrt(Gamma(n+1+a)/n!) Gamma(1+a/2)/Gamma(1+a)
               * z^(1+a/2) 2F1(-n, 1+a/2; 1+a; z),      z = 2/(1-2ix).

    Terms reach 3^n in size, so use :func:`eval_fl` beyond n ~ 30.
    """
    _check_alpha(alpha)
    _check_n(n)
    x = np.asarray(x, dtype=float)
    z = 2.0 / (1.0 - 2.0j * x)
    a2 = 0.5 * alpha
    # 2F1 coefficients t_l via the term ratio, summed by Horner
    t = np.empty(n + 1)
    t[0] = 1.0
    for ell in range(n):
        t[ell + 1] = t[ell] * (ell - n) * (ell + 1.0 + a2) / ((ell + 1.0 + alpha) * (ell + 1.0))
    hyp = np.zeros(x.shape, dtype=complex)
    for coef in t[::-1]:
        hyp = hyp * z + coef
    logc = 0.5 * (gammaln(n + 1.0 + alpha) - gammaln(n + 1.0)) + gammaln(1.0 + a2) - gammaln(1.0 + alpha)
    val = ipow(-n) / _SQRT_2PI * np.exp(logc) * z ** (1.0 + a2) * hyp
    return val[()]


def fl_polynomial(alpha: float, n: int) -> np.ndarray:
    """Coefficients (ascending) of the degree-n polynomial Pi_n^(alpha)(w) with

        phi_n(x) = (-i)^n sqrt(2/pi) (1-2ix)^(-1-alpha/2) Pi_n(e^{i theta(x)}).

    Using z = 1 + w and DLMF 15.8.7,
    2F1(-n, 1+a/2; 1+a; 1+w) = sum_k (-1)^k C(n,k) (a/2)_{n-k} (1+a/2)_k / (1+a)_n w^k,
    which has no cancellation and no 0/0 at alpha = 0.
    """
    _check_alpha(alpha)
    _check_n(n)
    a2 = 0.5 * alpha
    k = np.arange(n + 1)
    if alpha == 0.0:
        hyp = np.zeros(n + 1)
        hyp[n] = (-1.0) ** n
    else:
        m = n - k
        # (a/2)_m = Gamma(a/2+m)/Gamma(a/2); sign from negative factors when -1/2 < a/2 < 0
        log_poch = gammaln(a2 + m) - gammaln(a2)
        sign = np.where((a2 < 0) & (m > 0), -1.0, 1.0)
        logmag = (
            gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(m + 1.0)
            + log_poch
            + gammaln(1.0 + a2 + k) - gammaln(1.0 + a2)
            - (gammaln(1.0 + alpha + n) - gammaln(1.0 + alpha))
        )
        hyp = (-1.0) ** k * sign * np.exp(logmag)
    # fold the normalisation: 2^(a/2) Gamma(1+a/2) sqrt(Gamma(n+1+a)/n!) / Gamma(1+a)
    lognorm = (
        a2 * np.log(2.0)
        + gammaln(1.0 + a2)
        + 0.5 * (gammaln(n + 1.0 + alpha) - gammaln(n + 1.0))
        - gammaln(1.0 + alpha)
    )
    return hyp * np.exp(lognorm)


def eval_fl(alpha: float, n: int, x):
    """Fourier-Laguerre function phi_n, stable for large n; n < 0 uses the mirror."""
    if n < 0:
        return eval_fl_mirror(alpha, n, x)
    coeffs = fl_polynomial(alpha, n)
    x = np.asarray(x, dtype=float)
    w = np.exp(2j * np.arctan(2.0 * x))
    poly = np.zeros(x.shape, dtype=complex)
    for coef in coeffs[::-1]:
        poly = poly * w + coef
    val = ipow(-n) * SQRT_2_OVER_PI * (1.0 - 2.0j * x) ** (-1.0 - 0.5 * alpha) * poly
    return val[()]


def eval_fl_mirror(alpha: float, n: int, x):
    """Basis functions for n <= -1, spanning PW_(-inf, 0].

    phi_n = -i conj(phi_{-n-1}); the phase is chosen so that alpha = 0
    reproduces the MT functions exactly.
    """
    if int(n) != n or n > -1:
        raise ParameterError("mirror index must be <= -1")
    m = -int(n) - 1
    if m <= 30:
        base = eval_fl_sum(alpha, m, x)
    else:
        base = eval_fl(alpha, m, x)
    return (-1j * np.conj(base))[()]


def fl_bc_full(alpha: float, n: int):
    """(b_n, c_n) of the Fourier-Laguerre system extended to all n in Z."""
    _check_alpha(alpha)
    if n >= 0:
        return laguerre_bc(alpha, n)
    if n == -1:
        return 0.0, -laguerre_bc(alpha, 0)[1]
    b_mirror, _ = laguerre_bc(alpha, -n - 2)
    return -b_mirror, -laguerre_bc(alpha, -n - 1)[1]


# --- twisted Hermite ---------------------------------------------------------


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Normalized Hermite functions psi_0..psi_{n_max} at x, shape (n_max+1,) + x.shape.

    psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}; the
    normalization is folded into the recurrence so nothing overflows.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def eval_twisted_hermite(alpha: float, n: int, x):
    """(-1)^n e^{i alpha x} psi_n(x): the canonical system for the measure e^{-(xi-alpha)^2}.

    Satisfies phi_n' = -b_{n-1} phi_{n-1} + i alpha phi_n + b_n phi_{n+1}
    with b_n = sqrt((n+1)/2).
    """
    _check_n(n)
    x = np.asarray(x, dtype=float)
    psi = hermite_functions(n, x)[n]
    return ((-1.0) ** n * np.exp(1j * alpha * x) * psi)[()]


def hermite_bc(alpha: float, n: int):
    _check_n(n)
    return float(np.sqrt((n + 1) / 2.0)), float(alpha)
