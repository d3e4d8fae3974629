"""Uniform access to every basis family: pointwise values and (b_n, c_n)."""

from __future__ import annotations

import numpy as np

from . import laguerre
from .basis_core import BasisSpec, Family, eval_general_mt, eval_mt, general_mt_bc
from .exceptions import WindowError


def check_index(spec: BasisSpec, n: int):
    if not spec.indexed_over_z and spec.family is not Family.FOURIER_LAGUERRE and n < 0:
        raise WindowError(f"{spec} is indexed by n >= 0, got n={n}")


def evaluate(spec: BasisSpec, n: int, x):
    """Value of the n-th function of ``spec`` at ``x``."""
    check_index(spec, n)
    fam = spec.family
    if fam is Family.MT:
        return eval_mt(n, x)
    if fam is Family.GENERAL_MT:
        return eval_general_mt(spec.params, n, x)
    if fam is Family.FOURIER_LAGUERRE:
        if n < 0:
            return laguerre.eval_fl_mirror(spec.alpha, n, x)
        return laguerre.eval_fl(spec.alpha, n, x)
    return laguerre.eval_twisted_hermite(spec.alpha, n, x)


def evaluate_many(spec: BasisSpec, indices, x) -> np.ndarray:
    """Matrix of values, rows indexed by ``indices`` and columns by ``x``."""
    indices = np.asarray(indices, dtype=int)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    fam = spec.family
    if fam is Family.MT:
        return eval_mt(indices[:, None], x[None, :])
    if fam is Family.GENERAL_MT:
        return eval_general_mt(spec.params, indices[:, None], x[None, :])
    if fam is Family.SHIFTED_HERMITE:
        if indices.size and indices.min() < 0:
            raise WindowError("Hermite functions are indexed by n >= 0")
        top = int(indices.max()) if indices.size else 0
        psi = laguerre.hermite_functions(top, x)[indices]
        return (-1.0) ** indices[:, None] * np.exp(1j * spec.alpha * x)[None, :] * psi
    return np.array([evaluate(spec, int(n), x) for n in indices]).reshape(len(indices), len(x))


def recurrence(spec: BasisSpec, n: int):
    """(b_n, c_n) with phi_n' = -conj(b_{n-1}) phi_{n-1} + i c_n phi_n + b_n phi_{n+1}."""
    fam = spec.family
    if fam is Family.MT:
        return float(n + 1), float(2 * n + 1)
    if fam is Family.GENERAL_MT:
        b, c = general_mt_bc(spec.params, n)
        return complex(b), float(c)
    check_index(spec, n)
    if fam is Family.FOURIER_LAGUERRE:
        return laguerre.fl_bc_full(spec.alpha, n)
    return laguerre.hermite_bc(spec.alpha, n)
