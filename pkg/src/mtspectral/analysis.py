"""Convergence diagnostics for MT expansions.

Decay of |c_n| is classified into three families:

* exponential      |c_n| ~ rho^{-|n|}
* stretched exp    |c_n| ~ exp(-c |n|^p), 0 < p <= 1
* algebraic        |c_n| ~ |n|^{-q}

Fits use the tail envelope max_{m >= n} |c_m|, which removes the
interference nulls that make raw log-magnitudes useless for least squares.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import InsufficientData, ParameterError
from .transform import Expansion, analyze, make_grid, synthesize

FLOOR = 1e-14
MIN_POINTS = 16


@dataclass(frozen=True)
class RhoRegion:
    """Disc {|x - center| < radius} on which f continues analytically when
    its coefficients decay like rho^{-|n|}."""

    rho: float
    center: complex
    radius: float


def rho_region(rho: float) -> RhoRegion:
    """Centre and radius of the disc associated with a decay rate ``rho`` > 1.

    Examples
    --------
    >>> r = rho_region(3.0)
    >>> r.center, r.radius
    (0.625j, 0.375)
    """
    if not rho > 1.0:
        raise ParameterError(f"rho must exceed 1, got {rho}")
    gap = rho - 1.0 / rho
    return RhoRegion(float(rho), 0.5j * (rho + 1.0 / rho) / gap, 1.0 / gap)


def pole_rho(z: complex) -> float:
    """Decay rate produced by a simple pole at ``z`` (Im z != 0).

    Computed as |w|^{+-1} with w = (1 + 2iz)/(1 - 2iz), the image of z under
    the Cayley map that turns MT functions into powers of w.
    """
    z = complex(z)
    if z.imag == 0:
        raise ParameterError("pole must be off the real axis")
    w = abs((1 + 2j * z) / (1 - 2j * z))
    return float(max(w, 1.0 / w))


def reference_coeffs_runge(n):
    """Closed-form MT coefficients <1/(1+x^2), phi_n>.

    sqrt(2 pi) i^n / 3^{n+1} for n >= 0 and -sqrt(2 pi) i^n 3^n for n <= -1.
    """
    n = np.asarray(n)
    s = np.sqrt(2 * np.pi)
    mag = s * 3.0 ** (-np.abs(n) - (n >= 0))
    phase = np.where(n >= 0, 1.0, -1.0) * (1j) ** (n % 4)
    return (mag * phase)[()]


def mt_coefficients(f: Callable, N: int, oversample: int = 8) -> Expansion:
    """MT coefficients on [-N, N-1] computed on an oversampled grid.

    Sampling on 2 * oversample * N points keeps aliasing out of the
    retained window, which matters for algebraically decaying coefficients.
    """
    if oversample < 1:
        raise ParameterError("oversample must be >= 1")
    full = analyze(f, make_grid(N * oversample))
    return full.restrict(-N, N - 1)


class DecayModel(enum.Enum):
    EXPONENTIAL = "exponential"
    STRETCHED_EXP = "stretched-exp"
    ALGEBRAIC = "algebraic"


@dataclass(frozen=True)
class DecayFit:
    """Result of fitting one model to one coefficient tail.

    ``params`` holds ``rho`` (exponential), ``c`` and ``p`` (stretched) or
    ``q`` (algebraic); ``window`` is the inclusive |n| range used and
    ``residual`` the RMS log-residual corrected for the number of fitted
    parameters.
    """

    model: DecayModel
    params: dict
    window: tuple
    residual: float

    def __getattr__(self, name):
        try:
            return self.__dict__["params"][name]
        except KeyError:
            raise AttributeError(name) from None

    def predict(self, n):
        """Model magnitudes (up to the fitted amplitude ``a``) at |n|."""
        n = np.abs(np.asarray(n, dtype=float))
        a = self.params["a"]
        if self.model is DecayModel.EXPONENTIAL:
            return np.exp(a - n * np.log(self.params["rho"]))
        if self.model is DecayModel.ALGEBRAIC:
            return np.exp(a - self.params["q"] * np.log(n))
        return np.exp(a - self.params["c"] * n ** self.params["p"])


def tail_envelope(mags) -> np.ndarray:
    """Running maximum from the far end: env[i] = max(mags[i:])."""
    return np.maximum.accumulate(np.asarray(mags, dtype=float)[::-1])[::-1]


def _linear_fit(t, y):
    A = np.column_stack([np.ones_like(t), t])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef, float(np.sum((A @ coef - y) ** 2))


def _prepare(n, mags):
    n = np.abs(np.asarray(n, dtype=float))
    mags = np.abs(np.asarray(mags, dtype=float))
    if n.shape != mags.shape:
        raise ValueError("n and magnitudes must have the same length")
    order = np.argsort(n, kind="stable")
    n, mags = n[order], mags[order]
    env = tail_envelope(mags)
    above = np.nonzero(env > FLOOR)[0]
    if above.size == 0:
        raise InsufficientData("all coefficient magnitudes are below the floor")
    K = n[above[-1]]
    sel = (n >= K / 4) & (n <= K) & (n > 0) & (env > FLOOR)
    if np.count_nonzero(sel) < MIN_POINTS:
        raise InsufficientData(
            f"only {np.count_nonzero(sel)} usable magnitudes in [{K / 4:g}, {K:g}], need {MIN_POINTS}"
        )
    return n[sel], np.log(env[sel]), (int(np.ceil(K / 4)), int(K))


def fit_decay(n, mags, model: DecayModel) -> DecayFit:
    """Fit one decay model to the magnitudes of a single coefficient tail.

    Parameters
    ----------
    n : array_like of int
        Indices; only |n| is used, so a negative tail can be passed as is.
    mags : array_like
        |c_n| at those indices.
    model : DecayModel

    Returns
    -------
    DecayFit

    Raises
    ------
    InsufficientData
        Fewer than 16 points above 1e-14 in the window [K/4, K], where K is
        the largest |n| whose envelope is above the floor.
    """
    t, y, window = _prepare(n, mags)
    m = len(t)
    if model is DecayModel.EXPONENTIAL:
        (a, s), ss = _linear_fit(t, y)
        params, k = {"a": a, "rho": float(np.exp(-s))}, 2
    elif model is DecayModel.ALGEBRAIC:
        (a, s), ss = _linear_fit(np.log(t), y)
        params, k = {"a": a, "q": float(-s)}, 2
    else:

        def sse(p):
            return _linear_fit(t**p, y)[1]

        res = minimize_scalar(sse, bounds=(1e-3, 1.0), method="bounded", options={"xatol": 1e-8})
        p = float(res.x)
        (a, s), ss = _linear_fit(t**p, y)
        params, k = {"a": a, "c": float(-s), "p": p}, 3
    residual = float(np.sqrt(ss / max(m - k, 1)))
    return DecayFit(model, {key: float(v) for key, v in params.items()}, window, residual)


def split_tails(e: Expansion):
    """(n, |c_n|) for the n >= 0 and n < 0 parts of an expansion."""
    n = e.indices
    mags = np.abs(e.coeffs)
    pos, neg = n >= 0, n < 0
    return (n[pos], mags[pos]), (n[neg], mags[neg])


def fit_all_models(n, mags) -> dict:
    """Fits of every model family to one tail, keyed by DecayModel."""
    return {model: fit_decay(n, mags, model) for model in DecayModel}


def best_model(fits: dict, edge: float = 0.01) -> DecayModel:
    """Model with the smallest residual among the non-degenerate fits.

    The stretched exponential contains the exponential (p = 1) and, in the
    limit p -> 0, the algebraic family. A stretched fit whose exponent sits
    within ``edge`` of either end has collapsed onto one of those, and any
    residual advantage it shows comes from the extra parameter absorbing
    roundoff, so it is not allowed to win.
    """
    candidates = dict(fits)
    stretched = candidates.get(DecayModel.STRETCHED_EXP)
    if stretched is not None and len(candidates) > 1:
        p = stretched.params["p"]
        if p >= 1.0 - edge or p <= edge:
            del candidates[DecayModel.STRETCHED_EXP]
    return min(candidates, key=lambda m: candidates[m].residual)


def slower_tail(e: Expansion):
    """The tail (positive or negative) whose envelope decays more slowly.

    Compared by the envelope value halfway through the common |n| range,
    away from the roundoff-dominated far end; ties go to the positive tail.
    """
    (n_pos, m_pos), (n_neg, m_neg) = split_tails(e)
    if len(n_neg) == 0:
        return n_pos, m_pos
    if len(n_pos) == 0:
        return n_neg, m_neg
    k = min(len(n_pos), len(n_neg)) - 1
    env_pos = tail_envelope(m_pos)
    env_neg = tail_envelope(m_neg[::-1])  # ordered by |n| ascending
    probe = max(k // 2, 0)
    if env_neg[probe] > env_pos[probe]:
        return n_neg, m_neg
    return n_pos, m_pos


def partial_sum_error(f: Callable, e: Expansion, xs) -> np.ndarray:
    """|f(x) - sum_n c_n phi_n(x)| at the points ``xs``."""
    xs = np.asarray(xs, dtype=float)
    return np.abs(np.asarray(f(xs)) - synthesize(e, xs))

