"""Multiplexing n signals into one coefficient stream with Hermite super-windows.

Encoding samples ``<f, M_w T_x (h_0, ..., h_{n-1})>`` over the lattice points
in a disk.  Decoding inverts the truncated analysis map on the span of Hermite
functions of order up to ``floor(pi (R - margin)^2)`` per channel, with a
Tikhonov-regularised pseudo-inverse.  The reported condition number is
``B / A`` for the truncated frame operator on that span, so a collapsing
lower frame bound shows up as ill-conditioning.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ParameterError, ShapeError
from .frames import DEFAULT_GRID, DEFAULT_MARGIN, GaborSystemSpec, _probe_coefficients, analysis, \
    hermite_system, probe_order
from .grid import Signal, TimeGrid, VectorSignal, vector_norm
from .hermite import hermite_values
from .lattice import Lattice2D, LatticePointSet, enumerate_points
from .rng import generator

DEFAULT_REGULARIZATION = 1e-10
ILL_CONDITIONED = 1e12
FLAG_ILL = "ill_conditioned"
STREAM_HEADER = ["ix", "iy", "x", "omega", "re", "im"]
SNR_HEADER = "channel,snr_db"


@dataclass
class MuxStream:
    coefficients: np.ndarray
    spec: dict
    point_set: LatticePointSet
    grid: TimeGrid

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=complex)
        if self.coefficients.shape != (len(self.point_set),):
            raise ShapeError(f"{self.coefficients.shape[0]} coefficients for {len(self.point_set)} points")

    def __len__(self):
        return len(self.point_set)


@dataclass
class DecodeResult:
    channels: VectorSignal
    condition: float
    flags: tuple = ()
    order: int = 0
    coefficients: np.ndarray = field(repr=False, default=None)


def _system(n: int, L: Lattice2D) -> GaborSystemSpec:
    if n < 1:
        raise ParameterError("multiplexing needs at least one channel")
    return hermite_system("super", n, L)


def mux_encode(channels: VectorSignal, L: Lattice2D, radius: float) -> MuxStream:
    spec = _system(channels.n, L)
    ps = enumerate_points(L, radius)
    c = analysis(spec, ps, channels, channels.grid)
    return MuxStream(c, spec.echo(), ps, channels.grid)


def decode_matrix(n: int, L: Lattice2D, radius: float, margin: float = DEFAULT_MARGIN,
                  grid: TimeGrid = DEFAULT_GRID):
    """Analysis matrix of the Hermite basis ``(channel, order)``, shape (points, n*(M+1))."""
    spec = _system(n, L)
    ps = enumerate_points(L, radius)
    order = probe_order(radius, margin)
    return _probe_coefficients(spec, ps, grid, order), order


def mux_decode(stream: MuxStream, L: Lattice2D, radius: float,
               regularization: float = DEFAULT_REGULARIZATION, margin: float = DEFAULT_MARGIN,
               n: int | None = None) -> DecodeResult:
    n = len(stream.spec["windows"]) if n is None else n
    C, order = decode_matrix(n, L, radius, margin)
    if C.shape[0] != len(stream):
        raise ShapeError(f"stream has {len(stream)} coefficients, decoder expects {C.shape[0]}")
    U, s, Vh = scipy.linalg.svd(C, full_matrices=False)
    y = Vh.conj().T @ ((s / (s * s + regularization)) * (U.conj().T @ stream.coefficients))
    lam = s * s
    cond = math.inf if lam[-1] <= 0 or C.shape[0] < C.shape[1] else float(lam[0] / lam[-1])
    flags = (FLAG_ILL,) if cond > ILL_CONDITIONED else ()
    H = hermite_values(order, stream.grid.nodes, out_all=True)
    Y = y.reshape(n, order + 1)
    chans = tuple(Signal(stream.grid, Y[k] @ H) for k in range(n))
    return DecodeResult(VectorSignal(stream.grid, chans), cond, flags, order, Y)


def relative_errors(ref: VectorSignal, est: VectorSignal) -> list[float]:
    out = []
    for a, b in zip(ref.channels, est.channels):
        na = np.linalg.norm(a.values)
        d = np.linalg.norm(a.values - b.values)
        out.append(float(d / na) if na > 0 else float(d * math.sqrt(a.grid.step)))
    return out


def snr_db(ref: VectorSignal, est: VectorSignal) -> list[float]:
    out = []
    for a, b in zip(ref.channels, est.channels):
        sig = np.sum(np.abs(a.values) ** 2)
        err = np.sum(np.abs(a.values - b.values) ** 2)
        out.append(math.inf if err == 0 else float(10 * np.log10(sig / err)))
    return out


def mux_report(channels: VectorSignal, L: Lattice2D, radius: float, noise_sigma: float = 0.0,
               seed: int = 0, regularization: float = DEFAULT_REGULARIZATION) -> dict:
    """Encode, add complex Gaussian noise of deviation ``noise_sigma``, decode, measure SNR."""
    if noise_sigma < 0:
        raise ParameterError("noise_sigma must be non-negative")
    stream = mux_encode(channels, L, radius)
    rng = generator(seed, "multiplex", "noise")
    m = len(stream)
    noise = (rng.normal(size=m) + 1j * rng.normal(size=m)) * (noise_sigma / math.sqrt(2))
    noisy = MuxStream(stream.coefficients + noise, stream.spec, stream.point_set, stream.grid)
    dec = mux_decode(noisy, L, radius, regularization)
    return {"snr_db": snr_db(channels, dec.channels), "condition": dec.condition,
            "flags": list(dec.flags), "noise_sigma": noise_sigma, "seed": int(seed)}


def snr_csv(snr) -> str:
    return SNR_HEADER + "\n" + "".join(f"{k},{v!r}\n" for k, v in enumerate(snr))


def write_stream_csv(stream: MuxStream, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STREAM_HEADER)
        for (i, j), (x, om), c in zip(stream.point_set.indices, stream.point_set.points,
                                      stream.coefficients):
            w.writerow([int(i), int(j), repr(float(x)), repr(float(om)),
                        repr(float(c.real)), repr(float(c.imag))])


def read_stream_coefficients(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Indices, points and coefficients from a stream CSV."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, [])
        if header != STREAM_HEADER:
            raise ParameterError(f"{path}: expected header {','.join(STREAM_HEADER)}")
        rows = [row for row in r if row]
    idx = np.array([[int(a), int(b)] for a, b, *_ in rows], dtype=int).reshape(-1, 2)
    pts = np.array([[float(row[2]), float(row[3])] for row in rows]).reshape(-1, 2)
    c = np.array([float(row[4]) + 1j * float(row[5]) for row in rows])
    return idx, pts, c


def hermite_band_signal(n: int, grid: TimeGrid, seed: int, max_order: int = 8) -> VectorSignal:
    """Random channels with Hermite coefficients supported on orders ``<= max_order``."""
    rng = generator(seed, "multiplex", "channels", n)
    H = hermite_values(max_order, grid.nodes, out_all=True)
    chans = []
    for _ in range(n):
        a = rng.normal(size=max_order + 1) + 1j * rng.normal(size=max_order + 1)
        chans.append(Signal(grid, (a / np.linalg.norm(a)) @ H))
    return VectorSignal(grid, tuple(chans))
