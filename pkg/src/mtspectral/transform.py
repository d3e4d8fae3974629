"""Mapped-FFT analysis and synthesis for the MT system, plus quadrature
oracles and a Gauss-Hermite baseline.

The grid lives in the angle variable: theta_k = -pi + (k - 1/2) pi/N,
k = 1..2N, and x_k = tan(theta_k / 2) / 2. On this grid the inner product

    <f, g>_N = pi/(4N) sum_k (1 + 4 x_k^2) f(x_k) conj(g(x_k))

is exact for products of MT functions with indices in [-N, N-1], so the
coefficients <f, phi_n>_N are a single FFT of f(x_k)(1 - 2i x_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bases import evaluate_many
from .basis_core import SQRT_2_OVER_PI, BasisSpec, Family, ipow
from .exceptions import BasisMismatch, ParameterError, WindowError
from .laguerre import hermite_functions


@dataclass(frozen=True)
class MappedGrid:
    """Equispaced angle grid of 2N midpoints and its image on the real line."""

    N: int
    theta: np.ndarray
    x: np.ndarray
    weight: np.ndarray


@dataclass
class Expansion:
    """Coefficients of a truncated expansion over the window [n_min, n_max].

    ``inexact`` lists indices whose values are known to be affected by
    window truncation (filled in by operator application).
    """

    spec: BasisSpec
    n_min: int
    coeffs: np.ndarray
    inexact: tuple = field(default=())

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex).ravel()
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("expansion coefficients must be finite")

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.coeffs) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + len(self.coeffs))

    def coeff(self, n: int) -> complex:
        """Coefficient of phi_n, zero outside the window."""
        if self.n_min <= n <= self.n_max:
            return complex(self.coeffs[n - self.n_min])
        return 0.0j

    def restrict(self, n_min: int, n_max: int) -> "Expansion":
        """Copy onto the window [n_min, n_max], padding with zeros."""
        out = np.zeros(n_max - n_min + 1, dtype=complex)
        lo, hi = max(n_min, self.n_min), min(n_max, self.n_max)
        if lo <= hi:
            out[lo - n_min : hi - n_min + 1] = self.coeffs[lo - self.n_min : hi - self.n_min + 1]
        return Expansion(self.spec, n_min, out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    @classmethod
    def unit(cls, spec: BasisSpec, n: int, n_min: int | None = None, n_max: int | None = None):
        """The coefficient vector of phi_n alone."""
        n_min = n if n_min is None else n_min
        n_max = n if n_max is None else n_max
        c = np.zeros(n_max - n_min + 1, dtype=complex)
        c[n - n_min] = 1.0
        return cls(spec, n_min, c)


def make_grid(N: int) -> MappedGrid:
    """Build the 2N-point mapped grid."""
    if int(N) != N or N < 1:
        raise ParameterError(f"grid half-size must be a positive integer, got {N!r}")
    N = int(N)
    k = np.arange(1, 2 * N + 1)
    theta = -np.pi + (k - 0.5) * np.pi / N
    x = 0.5 * np.tan(0.5 * theta)
    weight = np.pi / (4 * N) * (1.0 + 4.0 * x * x)
    return MappedGrid(N, theta, x, weight)


def _twiddle(n: np.ndarray, N: int) -> np.ndarray:
    # e^{-i n theta_k} = e^{i n pi} e^{-i n pi/(2N)} e^{-2 pi i n j/(2N)} with j = k - 1
    return (-1.0) ** (n % 2) * np.exp(-1j * np.pi * n / (2 * N))


def analyze(f: Callable, grid: MappedGrid) -> Expansion:
    """Discrete MT coefficients <f, phi_n>_N for n in [-N, N-1].

    Parameters
    ----------
    f : callable
        Vectorized function of a real array.
    grid : MappedGrid

    Returns
    -------
    Expansion
        MT expansion with ``n_min = -N``.
    """
    N = grid.N
    samples = np.asarray(f(grid.x), dtype=complex) * (1.0 - 2j * grid.x)
    if samples.shape != grid.x.shape:
        samples = np.broadcast_to(samples, grid.x.shape)
    F = np.fft.fft(samples)
    n = np.arange(-N, N)
    c = np.conj(ipow(n)) * np.sqrt(np.pi / 2) / (2 * N) * _twiddle(n, N) * F[n % (2 * N)]
    return Expansion(BasisSpec.mt(), -N, c)


def synthesize(e: Expansion, x):
    """Evaluate the partial sum sum_n c_n phi_n(x) directly."""
    xa = np.asarray(x, dtype=float)
    V = evaluate_many(e.spec, e.indices, xa.ravel())
    vals = e.coeffs @ V
    return vals.reshape(xa.shape)[()]


def synthesize_on_grid(e: Expansion, grid: MappedGrid) -> np.ndarray:
    """Values of an MT expansion at the grid nodes via one inverse FFT."""
    if e.spec.family is not Family.MT:
        raise BasisMismatch("grid synthesis is defined for the MT basis only")
    N = grid.N
    if e.n_min < -N or e.n_max > N - 1:
        raise WindowError(f"window [{e.n_min}, {e.n_max}] exceeds grid range [{-N}, {N - 1}]")
    n = e.indices
    a = np.zeros(2 * N, dtype=complex)
    a[n % (2 * N)] = e.coeffs * ipow(n) * np.conj(_twiddle(n, N))
    s = 2 * N * np.fft.ifft(a)
    return SQRT_2_OVER_PI * s / (1.0 - 2j * grid.x)


def discrete_inner_product(f_vals, g_vals, grid: MappedGrid) -> complex:
    """<f, g>_N from samples at the grid nodes."""
    return complex(np.sum(grid.weight * np.asarray(f_vals) * np.conj(np.asarray(g_vals))))


def quadrature_nodes(M: int = 4096):
    """Nodes and weights for integrals over R with algebraically decaying integrands.

    Midpoints in u on (-pi, pi) are pushed through theta = psi(u), whose
    derivative vanishes to high order at u = +-pi, then x = tan(theta/2)/2.
    The composite map flattens the endpoint behaviour of cos^a(theta/2)
    weights so the periodic midpoint rule keeps converging fast.
    """
    if M < 2:
        raise ParameterError("need at least two quadrature nodes")
    u = -np.pi + (np.arange(M) + 0.5) * 2 * np.pi / M
    theta = u + 1.5 * np.sin(u) + 0.3 * np.sin(2 * u) + np.sin(3 * u) / 30
    dpsi = 1 + 1.5 * np.cos(u) + 0.6 * np.cos(2 * u) + 0.1 * np.cos(3 * u)
    x = 0.5 * np.tan(0.5 * theta)
    # dx = (1 + 4x^2)/4 dtheta
    w = (2 * np.pi / M) * dpsi * (1.0 + 4.0 * x * x) / 4.0
    return x, w


def inner_product_quadrature(f: Callable, g: Callable, M: int = 4096) -> complex:
    """Slow but accurate reference value of the integral of f conj(g) over R."""
    x, w = quadrature_nodes(M)
    return complex(np.sum(w * np.asarray(f(x)) * np.conj(np.asarray(g(x)))))


def gram_matrix(spec: BasisSpec, indices: Sequence[int], M: int = 4096) -> np.ndarray:
    """Matrix of <phi_j, phi_k> over ``indices`` by the quadrature oracle."""
    x, w = quadrature_nodes(M)
    V = evaluate_many(spec, indices, x)
    return (V * w) @ V.conj().T


def hermite_analyze(f: Callable, N: int, alpha: float = 0.0) -> Expansion:
    """Twisted-Hermite coefficients n = 0..N-1 by Gauss-Hermite quadrature.

    Uses M = max(2N + 64, 128) nodes. Weights are recomputed from the
    normalized Hermite functions as 1 / sum_n psi_n(x_k)^2, which already
    contains the e^{x^2} factor and never overflows.
    """
    if N < 1:
        raise ParameterError("N must be positive")
    M = max(2 * N + 64, 128)
    nodes, _ = np.polynomial.hermite.hermgauss(M)
    psi = hermite_functions(M - 1, nodes)
    w = 1.0 / np.sum(psi * psi, axis=0)
    spec = BasisSpec.shifted_hermite(alpha)
    n = np.arange(N)
    phi = ((-1.0) ** n)[:, None] * np.exp(1j * alpha * nodes)[None, :] * psi[:N]
    fx = np.asarray(f(nodes), dtype=complex)
    return Expansion(spec, 0, (np.conj(phi) * (w * fx)).sum(axis=1))
