"""Two-dimensional time-frequency lattices ``A Z^2``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError
from .grid import Signal, TimeGrid

SINGULAR_EPS = 1e-12
DEFAULT_CAP = 20000
J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Lattice2D:
    """Lattice generated by the columns of ``generator`` (points ``A @ k``)."""

    generator: np.ndarray

    def __post_init__(self):
        A = np.array(self.generator, dtype=float)
        if A.shape != (2, 2) or not np.all(np.isfinite(A)):
            raise ParameterError(f"lattice generator must be a finite 2x2 matrix, got {A!r}")
        if abs(np.linalg.det(A)) <= SINGULAR_EPS:
            raise ParameterError("lattice generator is singular")
        A.setflags(write=False)
        object.__setattr__(self, "generator", A)

    def __eq__(self, other):
        return isinstance(other, Lattice2D) and np.array_equal(self.generator, other.generator)

    def __hash__(self):
        return hash(self.generator.tobytes())

    def __repr__(self):
        return f"Lattice2D({self.generator.tolist()})"


def lattice_from_matrix(A) -> Lattice2D:
    return Lattice2D(np.asarray(A, dtype=float))


def square_lattice(alpha: float) -> Lattice2D:
    return Lattice2D(np.diag([alpha, alpha]))


def rect_lattice(alpha: float, beta: float) -> Lattice2D:
    return Lattice2D(np.diag([alpha, beta]))


def square_of_density(D: float) -> Lattice2D:
    if D <= 0:
        raise ParameterError("density must be positive")
    return square_lattice(1.0 / np.sqrt(D))


def density(L: Lattice2D) -> float:
    return 1.0 / abs(np.linalg.det(L.generator))


def adjoint_lattice(L: Lattice2D) -> Lattice2D:
    """The lattice of all shifts commuting with every shift in ``L``: ``J A^{-T} Z^2``."""
    return Lattice2D(J @ np.linalg.inv(L.generator.T))


@dataclass(frozen=True)
class LatticePointSet:
    points: np.ndarray      # (m, 2) array of (x, omega)
    indices: np.ndarray     # (m, 2) integer coordinates
    radius: float
    source: Lattice2D

    def __len__(self):
        return len(self.points)

    @property
    def z(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]


def enumerate_points(L: Lattice2D, radius: float, cap: int = DEFAULT_CAP) -> LatticePointSet:
    """All points with Euclidean norm ``<= radius``, ordered lexicographically by index."""
    if not radius > 0:
        raise ParameterError("radius must be positive")
    A = L.generator
    # |k| <= |A^{-1}| |p| bounds the index box
    K = int(np.ceil(radius * np.linalg.norm(np.linalg.inv(A), 2))) + 1
    if (2 * K + 1) ** 2 > 50 * cap and np.pi * radius ** 2 * density(L) > cap:
        raise CapacityError(f"about {np.pi * radius ** 2 * density(L):.0f} points exceed cap {cap}")
    r = np.arange(-K, K + 1)
    k1, k2 = np.meshgrid(r, r, indexing="ij")
    idx = np.stack([k1.ravel(), k2.ravel()], axis=1)
    pts = idx @ A.T
    keep = np.hypot(pts[:, 0], pts[:, 1]) <= radius * (1 + 1e-12)
    idx, pts = idx[keep], pts[keep]
    if len(pts) > cap:
        raise CapacityError(f"{len(pts)} lattice points within radius {radius} exceed cap {cap}")
    return LatticePointSet(pts, idx, float(radius), L)


def same_point_set(a: LatticePointSet, b: LatticePointSet, tol: float = 1e-9) -> bool:
    if len(a) != len(b):
        return False
    pa = a.points[np.lexsort(np.round(a.points / tol).T[::-1])]
    pb = b.points[np.lexsort(np.round(b.points / tol).T[::-1])]
    return bool(np.allclose(pa, pb, atol=tol))


def symplectic(p, q) -> float:
    """``x_p * w_q - w_p * x_q``; shifts commute iff this is an integer."""
    return float(p[0] * q[1] - p[1] * q[0])


def _pad(g: Signal, extra: float) -> Signal:
    grid = g.grid
    k = int(np.ceil(extra / grid.step))
    big = TimeGrid(grid.half_width + k * grid.step, grid.size + 2 * k)
    return Signal(big, np.concatenate([np.zeros(k), g.values, np.zeros(k)]))


def _shift_rows(V: np.ndarray, xs, step: float) -> np.ndarray:
    """Band-limited translation of each row of ``V`` by the matching ``xs``."""
    n = V.shape[-1]
    nu = np.fft.fftfreq(2 * n, d=step)
    spec = np.fft.fft(np.concatenate([V, np.zeros_like(V)], axis=-1), axis=-1)
    ramp = np.exp(-2j * np.pi * np.asarray(xs)[:, None] * nu[None, :])
    return np.fft.ifft(spec * ramp, axis=-1)[..., :n]


def commutation_residual(L: Lattice2D, mu, sample_g: Signal, radius: float = 3.0) -> float:
    """``max_z ||pi_z pi_mu g - pi_mu pi_z g|| / ||g||`` over lattice points ``|z| <= radius``.

    Shifts are applied literally (band-limited sub-sample translation) on a
    zero-padded copy of ``g`` wide enough that nothing leaves the grid.
    """
    mx, mw = float(mu[0]), float(mu[1])
    if mx == 0 and mw == 0:
        return 0.0
    g = _pad(sample_g, radius + abs(mx) + 1.0)
    t, step = g.grid.nodes, g.grid.step
    pts = enumerate_points(L, radius).points
    m = len(pts)
    gv = np.asarray(g.values)[None, :]
    # pi_z (pi_mu g)
    g_mu = np.exp(2j * np.pi * mw * t) * _shift_rows(gv, [mx], step)
    a = np.exp(2j * np.pi * np.outer(pts[:, 1], t)) * _shift_rows(np.repeat(g_mu, m, 0), pts[:, 0], step)
    # pi_mu (pi_z g)
    g_z = np.exp(2j * np.pi * np.outer(pts[:, 1], t)) * _shift_rows(np.repeat(gv, m, 0), pts[:, 0], step)
    b = np.exp(2j * np.pi * mw * t)[None, :] * _shift_rows(g_z, np.full(m, mx), step)
    return float(np.max(np.linalg.norm(a - b, axis=1)) / np.linalg.norm(gv))
