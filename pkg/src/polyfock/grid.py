"""Uniform time grids, phase-plane grids and the quadratures used on them.

All containers are frozen dataclasses holding read-only numpy arrays.
Integrals are plain Riemann (midpoint-style) sums with uniform weights;
every function in the library decays like a Gaussian, so this rule is
spectrally accurate on the default grids.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError, ShapeError

__all__ = [
    "TimeGrid", "Signal", "VectorSignal", "PhaseGrid", "GridField",
    "make_time_grid", "make_phase_grid", "inner_product", "norm",
    "vector_inner_product", "vector_norm", "phase_quadrature",
    "phase_inner_product", "read_signal_csv", "write_signal_csv",
]


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeGrid:
    half_width: float
    size: int

    def __post_init__(self):
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise ParameterError(f"half_width must be positive, got {self.half_width}")
        if int(self.size) != self.size or self.size < 2:
            raise ParameterError(f"size must be an integer >= 2, got {self.size}")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.size

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.step * np.arange(self.size)

    def zeros(self) -> "Signal":
        return Signal(self, np.zeros(self.size, dtype=complex))


def make_time_grid(T: float, N: int) -> TimeGrid:
    """Grid of ``N`` nodes ``-T + j * 2T/N`` covering ``[-T, T)``."""
    return TimeGrid(float(T), N)


@dataclass(frozen=True)
class Signal:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.size,):
            raise ShapeError(f"expected {self.grid.size} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ParameterError("signal values must be finite")
        object.__setattr__(self, "values", _frozen(v))

    def __add__(self, other):
        _check_same_grid(self, other)
        return Signal(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return Signal(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return Signal(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return Signal(self.grid, -self.values)


def _check_same_grid(f, g):
    if f.grid != g.grid:
        raise ShapeError(f"grid mismatch: {f.grid} vs {g.grid}")


@dataclass(frozen=True)
class VectorSignal:
    grid: TimeGrid
    channels: tuple

    def __post_init__(self):
        chans = tuple(self.channels)
        if not chans:
            raise ShapeError("a vector signal needs at least one channel")
        for c in chans:
            if c.grid != self.grid:
                raise ShapeError("all channels must share the vector signal's grid")
        object.__setattr__(self, "channels", chans)

    @classmethod
    def from_signals(cls, *signals):
        return cls(signals[0].grid, signals)

    @property
    def n(self) -> int:
        return len(self.channels)

    def __len__(self):
        return len(self.channels)

    def __getitem__(self, k):
        return self.channels[k]

    def as_array(self) -> np.ndarray:
        return np.stack([c.values for c in self.channels])

    def __add__(self, other):
        _check_channels(self, other)
        return VectorSignal(self.grid, tuple(a + b for a, b in zip(self.channels, other.channels)))

    def __sub__(self, other):
        _check_channels(self, other)
        return VectorSignal(self.grid, tuple(a - b for a, b in zip(self.channels, other.channels)))

    def __mul__(self, scalar):
        return VectorSignal(self.grid, tuple(c * scalar for c in self.channels))

    __rmul__ = __mul__


def _check_channels(f, g):
    if f.grid != g.grid:
        raise ShapeError("grid mismatch between vector signals")
    if f.n != g.n:
        raise ShapeError(f"channel count mismatch: {f.n} vs {g.n}")


def inner_product(f: Signal, g: Signal) -> complex:
    """Riemann-sum approximation of the L2 pairing, linear in ``f``."""
    _check_same_grid(f, g)
    return complex(np.vdot(g.values, f.values) * f.grid.step)


def norm(f: Signal) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def vector_inner_product(f: VectorSignal, g: VectorSignal) -> complex:
    _check_channels(f, g)
    return sum((inner_product(a, b) for a, b in zip(f.channels, g.channels)), 0j)


def vector_norm(f: VectorSignal) -> float:
    return float(np.sqrt(vector_inner_product(f, f).real))


@dataclass(frozen=True)
class PhaseGrid:
    """Product grid over the phase plane, ``z = x + i*omega``."""

    x_half_width: float
    omega_half_width: float
    nx: int
    nomega: int

    def __post_init__(self):
        for name in ("x_half_width", "omega_half_width"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ParameterError(f"{name} must be positive, got {v}")
        for name in ("nx", "nomega"):
            v = getattr(self, name)
            if int(v) != v or v < 2:
                raise ParameterError(f"{name} must be an integer >= 2, got {v}")

    @property
    def dx(self) -> float:
        return 2.0 * self.x_half_width / self.nx

    @property
    def domega(self) -> float:
        return 2.0 * self.omega_half_width / self.nomega

    @property
    def cell_area(self) -> float:
        return self.dx * self.domega

    @property
    def x(self) -> np.ndarray:
        return -self.x_half_width + self.dx * np.arange(self.nx)

    @property
    def omega(self) -> np.ndarray:
        return -self.omega_half_width + self.domega * np.arange(self.nomega)

    @property
    def z(self) -> np.ndarray:
        """Complex node matrix of shape ``(nx, nomega)``."""
        return self.x[:, None] + 1j * self.omega[None, :]

    def field(self, values) -> "GridField":
        return GridField(self, values)


def make_phase_grid(X: float = 6.0, nx: int = 256, Omega: float | None = None,
                    nomega: int | None = None) -> PhaseGrid:
    return PhaseGrid(float(X), float(X if Omega is None else Omega), int(nx),
                     int(nx if nomega is None else nomega))


@dataclass(frozen=True)
class GridField:
    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.nx, self.grid.nomega):
            raise ShapeError(f"field shape {v.shape} does not match grid "
                             f"({self.grid.nx}, {self.grid.nomega})")
        object.__setattr__(self, "values", _frozen(v))


_WEIGHTS = ("none", "gaussian")


def _weight(grid: PhaseGrid, weight: str) -> np.ndarray:
    if weight == "none":
        return np.ones((grid.nx, grid.nomega))
    if weight in ("gaussian", "gaussian_e_minus_pi_z2"):
        return np.exp(-np.pi * np.abs(grid.z) ** 2)
    raise ParameterError(f"unknown weight {weight!r}; expected one of {_WEIGHTS}")


def phase_quadrature(F: GridField, weight: str = "none") -> float:
    """Cell-weighted sum of ``|F|^2``, optionally against ``exp(-pi|z|^2)``."""
    v = F.values
    if not np.all(np.isfinite(v)):
        raise ParameterError("field values must be finite")
    return float(np.sum(np.abs(v) ** 2 * _weight(F.grid, weight)) * F.grid.cell_area)


def phase_inner_product(F: GridField, G: GridField, weight: str = "none",
                        mask: np.ndarray | None = None) -> complex:
    """``sum F * conj(G) * w`` over the grid (optionally restricted to ``mask``)."""
    if F.grid != G.grid:
        raise ShapeError("phase grid mismatch")
    integrand = F.values * np.conj(G.values) * _weight(F.grid, weight)
    if mask is not None:
        integrand = np.where(mask, integrand, 0.0)
    return complex(np.sum(integrand) * F.grid.cell_area)


def read_signal_csv(path, grid: TimeGrid | None = None) -> Signal:
    """Read a ``t,re,im`` CSV (header required).

    Without ``grid`` the file must describe a uniform grid of the
    ``[-T, T)`` form; with ``grid`` the samples are linearly interpolated
    onto it and zero-filled outside the file's range.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["t", "re", "im"]:
            raise ParameterError(f"{path}: expected header 't,re,im', got {header}")
        rows = [tuple(float(x) for x in row) for row in reader if row]
    if len(rows) < 2:
        raise ParameterError(f"{path}: need at least two samples")
    t, re, im = (np.array(c) for c in zip(*rows))
    vals = re + 1j * im
    if grid is None:
        step = t[1] - t[0]
        n = len(t)
        if not np.allclose(np.diff(t), step, rtol=1e-9, atol=1e-12) or \
                not np.isclose(t[0], -n * step / 2, rtol=1e-9, atol=1e-12):
            raise ParameterError(f"{path}: samples are not a uniform [-T, T) grid")
        return Signal(TimeGrid(n * step / 2, n), vals)
    tt = grid.nodes
    out = np.interp(tt, t, vals.real, left=0.0, right=0.0) \
        + 1j * np.interp(tt, t, vals.imag, left=0.0, right=0.0)
    return Signal(grid, out)


def write_signal_csv(f: Signal, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re", "im"])
        for t, v in zip(f.grid.nodes, f.values):
            w.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
