"""Tridiagonal operators acting on expansion coefficients.

Every operator here has the form

    L phi_n = sub_n phi_{n-1} + diag_n phi_n + sup_n phi_{n+1},

stored row by row. Acting on an expansion sum_n c_n phi_n gives new
coefficients (L^T c)_m = sub_{m+1} c_{m+1} + diag_m c_m + sup_{m-1} c_{m-1}.
For differentiation sub_n = -conj(b_{n-1}), diag_n = i c_n, sup_n = b_n, so
the matrix is skew-Hermitian and exp(tD) is unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .bases import recurrence
from .basis_core import BasisSpec, Family
from .exceptions import BasisMismatch, ParameterError, WindowError
from .transform import Expansion

SQRT_2PI = float(np.sqrt(2.0 * np.pi))

# direct convolution below this combined window, FFT above
_DIRECT_PRODUCT_LIMIT = 64
MAX_PROPAGATOR_WINDOW = 1024


@dataclass(frozen=True)
class TridiagOp:
    """Tridiagonal operator on the index window [n_min, n_min + len(diag) - 1].

    ``sub[r]``, ``diag[r]`` and ``sup[r]`` are the weights of phi_{n-1},
    phi_n and phi_{n+1} in the image of phi_n, n = n_min + r.
    """

    n_min: int
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    spec: BasisSpec | None = None

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.diag) - 1

    @property
    def size(self) -> int:
        return len(self.diag)

    def row(self, n: int):
        r = n - self.n_min
        if not 0 <= r < self.size:
            raise WindowError(f"row {n} outside [{self.n_min}, {self.n_max}]")
        return complex(self.sub[r]), complex(self.diag[r]), complex(self.sup[r])

    def to_dense(self) -> np.ndarray:
        """Matrix A with A[r, r-1] = sub[r], A[r, r] = diag[r], A[r, r+1] = sup[r]."""
        A = np.diag(np.asarray(self.diag, dtype=complex))
        A += np.diag(self.sub[1:], -1)
        A += np.diag(self.sup[:-1], 1)
        return A

    def is_skew_hermitian(self, tol: float = 0.0) -> bool:
        A = self.to_dense()
        return bool(np.max(np.abs(A + A.conj().T), initial=0.0) <= tol)

    def generator(self) -> np.ndarray:
        """Matrix acting on coefficient vectors, i.e. the transpose of :meth:`to_dense`."""
        return self.to_dense().T


def _from_rows(n_min, n_max, row, spec=None) -> TridiagOp:
    if n_max < n_min:
        raise WindowError(f"empty window [{n_min}, {n_max}]")
    rows = [row(n) for n in range(n_min, n_max + 1)]
    sub, diag, sup = (np.array(col, dtype=complex) for col in zip(*rows))
    return TridiagOp(n_min, sub, diag, sup, spec)


def diff_op(spec: BasisSpec, n_min: int, n_max: int) -> TridiagOp:
    """Differentiation operator of ``spec`` restricted to [n_min, n_max].

    Examples
    --------
    >>> D = diff_op(BasisSpec.mt(), -4, 8)
    >>> D.row(5)
    ((-5+0j), 11j, (6+0j))
    """
    if not spec.indexed_over_z and n_min < 0:
        raise WindowError(f"{spec} needs n_min >= 0, got {n_min}")

    def row(n):
        b_n, c_n = recurrence(spec, n)
        if n - 1 < 0 and not spec.indexed_over_z:
            b_prev = 0.0
        else:
            b_prev, _ = recurrence(spec, n - 1)
        return -np.conj(b_prev), 1j * c_n, b_n

    return _from_rows(n_min, n_max, row, spec)


def cayley_weight_op(n_min: int, n_max: int) -> TridiagOp:
    """Multiplication by 4i/(1 + 4x^2) in the MT basis: rows (-1, 2i, 1)."""
    return _from_rows(n_min, n_max, lambda n: (-1.0, 2j, 1.0), BasisSpec.mt())


def x_ddx_op(n_min: int, n_max: int) -> TridiagOp:
    """The operator x d/dx in the MT basis.

    x phi_n' = -(n/2) i phi_{n-1} - phi_n / 2 - i (n+1)/2 phi_{n+1}.
    """
    return _from_rows(
        n_min, n_max, lambda n: (-0.5j * n, -0.5, -0.5j * (n + 1)), BasisSpec.mt()
    )


def _check_spec(op: TridiagOp, e: Expansion):
    if op.spec is not None and op.spec != e.spec:
        raise BasisMismatch(f"operator basis {op.spec} does not match expansion basis {e.spec}")


def apply(op: TridiagOp, e: Expansion) -> Expansion:
    """Coefficients of L applied to the expansion ``e``.

    The result window is the input window grown by one index on each side
    and clipped to the operator window. Wherever that clipping drops a
    term, the affected boundary index is listed in ``inexact``.
    """
    _check_spec(op, e)
    if e.n_min < op.n_min or e.n_max > op.n_max:
        raise WindowError(
            f"expansion window [{e.n_min}, {e.n_max}] not inside operator window "
            f"[{op.n_min}, {op.n_max}]"
        )
    lo, hi = max(e.n_min - 1, op.n_min), min(e.n_max + 1, op.n_max)
    c = e.restrict(lo - 1, hi + 1).coeffs  # padded by one on each side
    r = np.arange(lo, hi + 1) - op.n_min
    out = op.diag[r] * c[1:-1]
    # phi_{m+1} contributes sub_{m+1} to index m; phi_{m-1} contributes sup_{m-1}
    has_next = r + 1 < op.size
    has_prev = r - 1 >= 0
    out[has_next] += op.sub[r[has_next] + 1] * c[2:][has_next]
    out[has_prev] += op.sup[r[has_prev] - 1] * c[:-2][has_prev]

    inexact = []
    if e.n_min - 1 < op.n_min and e.coeff(op.n_min) != 0 and op.sub[0] != 0:
        inexact.append(op.n_min)
    if e.n_max + 1 > op.n_max and e.coeff(op.n_max) != 0 and op.sup[-1] != 0:
        inexact.append(op.n_max)
    return Expansion(e.spec, lo, out, inexact=tuple(inexact))


def mt_product(e1: Expansion, e2: Expansion) -> Expansion:
    """Coefficients of the pointwise product of two MT expansions.

    Uses phi_m phi_n = (phi_{m+n} - i phi_{m+n+1}) / sqrt(2 pi), valid for
    all integers m, n, so the product is a convolution followed by a
    two-tap filter. The result covers [n1 + n2, n1 + n2 + L1 + L2 - 1].
    """
    for e in (e1, e2):
        if e.spec.family is not Family.MT:
            raise BasisMismatch("mt_product needs two MT expansions")
    a, b = e1.coeffs, e2.coeffs
    if len(a) + len(b) <= _DIRECT_PRODUCT_LIMIT:
        conv = np.convolve(a, b)
    else:
        conv = fftconvolve(a, b)
    h = np.zeros(len(a) + len(b), dtype=complex)
    h[:-1] += conv
    h[1:] -= 1j * conv
    return Expansion(e1.spec, e1.n_min + e2.n_min, h / SQRT_2PI)


def propagate(op: TridiagOp, e: Expansion, t: float) -> Expansion:
    """Solve c'(t) = D^T c(t) on the operator window, i.e. return exp(t D^T) c(0).

    For the MT differentiation operator this advects u_t = u_x, whose exact
    solution is u(x, t) = u(x + t, 0). Uses the eigendecomposition of the
    Hermitian matrix i D^T, so the map is unitary to rounding.
    """
    _check_spec(op, e)
    if op.size > MAX_PROPAGATOR_WINDOW:
        raise WindowError(f"propagator window {op.size} exceeds {MAX_PROPAGATOR_WINDOW}")
    if not op.is_skew_hermitian():
        raise ParameterError("propagate needs a skew-Hermitian operator")
    if e.n_min < op.n_min or e.n_max > op.n_max:
        raise WindowError("expansion window not inside operator window")
    c0 = e.restrict(op.n_min, op.n_max).coeffs
    H = 1j * op.generator()
    H = 0.5 * (H + H.conj().T)
    lam, V = np.linalg.eigh(H)
    ct = V @ (np.exp(-1j * t * lam) * (V.conj().T @ c0))
    return Expansion(e.spec, op.n_min, ct)
