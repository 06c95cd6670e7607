"""Hermite functions in the ``exp(-pi t^2)`` normalisation.

``h_n`` is proportional to ``exp(pi t^2) (d/dt)^n exp(-2 pi t^2)`` with the
sign fixed so that the leading coefficient is positive; with that choice
the Bargmann transform maps ``h_n`` onto the monomial ``e_n``.

Evaluation uses the normalised three-term recurrence

    h_{n+1}(t) = a_n * t * h_n(t) - b_n * h_{n-1}(t),
    a_n = 2 sqrt(pi / (n + 1)),  b_n = sqrt(n / (n + 1)),

which was checked against symbolic Rodrigues differentiation for n <= 4
(see tests/test_hermite.py).  Literal differentiation loses all accuracy
beyond n ~ 8.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma

from .errors import ParameterError
from .grid import PhaseGrid, Signal, TimeGrid

MAX_ORDER = 12

# (a_n, b_n) for n = 0 .. MAX_ORDER - 1
RECURRENCE = tuple((2.0 * math.sqrt(math.pi / (n + 1)), math.sqrt(n / (n + 1)))
                   for n in range(MAX_ORDER))

H0_SCALE = 2.0 ** 0.25


def hermite_values(n: int, t, out_all: bool = False):
    """Evaluate ``h_n`` at arbitrary points ``t``.

    No order cap is applied here; this is the kernel used by the lattice
    machinery, which needs orders in the hundreds.  With ``out_all`` the
    array ``[h_0(t), ..., h_n(t)]`` is returned.
    """
    if n < 0 or int(n) != n:
        raise ParameterError(f"Hermite order must be a non-negative integer, got {n}")
    t = np.asarray(t, dtype=float)
    out = np.empty((n + 1,) + t.shape) if out_all else None
    prev = np.zeros_like(t)
    cur = H0_SCALE * np.exp(-np.pi * t * t)
    if out_all:
        out[0] = cur
    for k in range(n):
        a = RECURRENCE[k][0] if k < MAX_ORDER else 2.0 * math.sqrt(math.pi / (k + 1))
        b = RECURRENCE[k][1] if k < MAX_ORDER else math.sqrt(k / (k + 1))
        prev, cur = cur, a * t * cur - b * prev
        if out_all:
            out[k + 1] = cur
    return out if out_all else cur


def _check_order(n, max_order):
    if int(n) != n or n < 0:
        raise ParameterError(f"Hermite order must be a non-negative integer, got {n}")
    if n > max_order:
        raise ParameterError(f"Hermite order {n} exceeds the configured maximum {max_order}")


def gaussian_window(grid: TimeGrid) -> Signal:
    """``phi(t) = 2^{1/4} exp(-pi t^2)``, unit L2 norm."""
    return Signal(grid, hermite_values(0, grid.nodes))


def hermite_function(n: int, grid: TimeGrid, max_order: int = MAX_ORDER) -> Signal:
    _check_order(n, max_order)
    return Signal(grid, hermite_values(int(n), grid.nodes))


def hermite_vector(n: int, grid: TimeGrid):
    """The window vector ``(h_0, ..., h_{n-1})``."""
    from .grid import VectorSignal
    if n < 1:
        raise ParameterError("need at least one channel")
    return VectorSignal(grid, tuple(hermite_function(k, grid, max_order=max(n, MAX_ORDER))
                                    for k in range(n)))


def s0_norm_formula(n: int) -> float:
    """Closed form ``2^{n/2+1} Gamma(n/2 + 1) / sqrt(n!)`` of the S0 norm of ``h_n``."""
    if n < 0:
        raise ParameterError("order must be non-negative")
    return float(2.0 ** (n / 2 + 1) * gamma(n / 2 + 1) / math.sqrt(math.factorial(n)))


def s0_norm_numeric(n: int, phase: PhaseGrid, time: TimeGrid) -> float:
    """Integral of ``|<h_n, M_omega T_x phi>|`` over the phase grid."""
    from .gabor import stft
    _check_order(n, MAX_ORDER)
    V = stft(hermite_function(n, time), gaussian_window(time), phase)
    return float(np.sum(np.abs(V.values)) * phase.cell_area)
