"""Short-time Fourier transform on the uniform grids.

Convention (used by every module): ``V_g f(x, w) = <f, M_w T_x g>`` with
``T_x g(t) = g(t - x)`` and ``M_w g(t) = exp(2 pi i w t) g(t)``.
Shifts falling outside the time grid are zero-filled, never wrapped.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .grid import (GridField, PhaseGrid, Signal, TimeGrid, VectorSignal,
                   inner_product, phase_inner_product)


@dataclass(frozen=True)
class TFShift:
    x: float
    omega: float


def snap(grid: TimeGrid, x: float) -> tuple[int, float]:
    """Nearest whole number of time steps (round half to even) and the residual."""
    k = int(np.rint(x / grid.step))
    return k, float(x - k * grid.step)


def _translate_samples(values: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(values)
    n = len(values)
    if k >= 0:
        if k < n:
            out[k:] = values[:n - k]
    elif -k < n:
        out[:n + k] = values[-k:]
    return out


def _translate_fourier(values: np.ndarray, x: float, step: float) -> np.ndarray:
    # band-limited sub-sample shift; the zero padding keeps it non-circular
    n = len(values)
    padded = np.concatenate([values, np.zeros(n, dtype=complex)])
    nu = np.fft.fftfreq(2 * n, d=step)
    shifted = np.fft.ifft(np.fft.fft(padded) * np.exp(-2j * np.pi * nu * x))
    return shifted[:n]


def tf_shift(g: Signal, s: TFShift, exact: bool = False) -> Signal:
    """``M_omega T_x g`` on the grid of ``g``.

    By default ``x`` is snapped to the nearest multiple of the grid step.
    ``exact=True`` performs a band-limited sub-sample translation instead,
    which is what phase-sensitive commutation checks need.
    """
    t = g.grid.nodes
    if exact:
        moved = _translate_fourier(np.asarray(g.values), s.x, g.grid.step)
    else:
        moved = _translate_samples(np.asarray(g.values), snap(g.grid, s.x)[0])
    return Signal(g.grid, np.exp(2j * np.pi * s.omega * t) * moved)


def phase_shifts(time: TimeGrid, phase: PhaseGrid):
    """Integer shifts of the phase-grid x nodes and the worst snap residual."""
    k = np.rint(phase.x / time.step).astype(int)
    return k, float(np.max(np.abs(phase.x - k * time.step)))


def _shifted_matrix(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    n = len(values)
    idx = np.arange(n)[None, :] - shifts[:, None]
    valid = (idx >= 0) & (idx < n)
    return np.where(valid, values[np.clip(idx, 0, n - 1)], 0.0)


def stft(f: Signal, g: Signal, phase: PhaseGrid, method: str = "fast") -> GridField:
    """Sample ``V_g f`` on every node of ``phase``.

    ``method="fast"`` forms the windowed products for all x nodes at once and
    applies the Fourier sums as one matrix product; ``"direct"`` evaluates
    ``inner_product(f, tf_shift(g, (x, w)))`` node by node.
    """
    if f.grid != g.grid:
        raise ShapeError("f and g must share a time grid")
    time = f.grid
    if method == "direct":
        out = np.empty((phase.nx, phase.nomega), dtype=complex)
        for i, x in enumerate(phase.x):
            for j, w in enumerate(phase.omega):
                out[i, j] = inner_product(f, tf_shift(g, TFShift(x, w)))
        return GridField(phase, out)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    shifts, _ = phase_shifts(time, phase)
    prod = f.values[None, :] * np.conj(_shifted_matrix(np.asarray(g.values), shifts))
    kernel = np.exp(-2j * np.pi * np.outer(time.nodes, phase.omega)) * time.step
    return GridField(phase, prod @ kernel)


def verify_orthogonality_relations(f1: Signal, f2: Signal, g1: Signal, g2: Signal,
                                   phase: PhaseGrid) -> tuple[complex, complex]:
    """Both sides of ``<V_g1 f1, V_g2 f2> = <f1, f2> conj(<g1, g2>)``."""
    lhs = phase_inner_product(stft(f1, g1, phase), stft(f2, g2, phase))
    rhs = inner_product(f1, f2) * np.conj(inner_product(g1, g2))
    return lhs, complex(rhs)


def super_stft(f: VectorSignal, g: VectorSignal, phase: PhaseGrid) -> GridField:
    """Vector-valued transform ``sum_k V_{g_k} f_k``."""
    if f.n != g.n:
        raise ShapeError(f"channel mismatch: {f.n} signals vs {g.n} windows")
    total = sum(stft(a, b, phase).values for a, b in zip(f.channels, g.channels))
    return GridField(phase, total)


def write_field_csv(F: GridField, path, header_lines=()) -> None:
    """Write ``x,omega,re,im`` rows; ``header_lines`` become leading ``#`` comments."""
    g = F.grid
    X, W = np.meshgrid(g.x, g.omega, indexing="ij")
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("x,omega,re,im\n")
        for x, w, v in zip(X.ravel(), W.ravel(), F.values.ravel()):
            fh.write(f"{float(x)!r},{float(w)!r},{float(v.real)!r},{float(v.imag)!r}\n")


def read_field_csv(path):
    """Inverse of :func:`write_field_csv`; returns ``(GridField, comment_lines)``."""
    comments, rows = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif line.startswith("x,"):
                continue
            elif line.strip():
                rows.append([float(v) for v in line.split(",")])
    a = np.array(rows)
    xs, ws = np.unique(a[:, 0]), np.unique(a[:, 1])
    nx, nw = len(xs), len(ws)
    grid = PhaseGrid(float(-xs[0]), float(-ws[0]), nx, nw)
    vals = (a[:, 2] + 1j * a[:, 3]).reshape(nx, nw)
    return GridField(grid, vals), comments
