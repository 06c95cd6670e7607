"""Density-threshold experiments for polyanalytic Fock spaces.

Everything on the Fock side is expressed in the orthonormal basis
``e_{k,m}`` (``k < n``).  Since ``B^k h_m = e_{k,m}``, a function
``F = sum_k B^k f_k`` with ``f_k = sum_m c_{k,m} h_m`` has coefficients
``c_{k,m}`` and ``||F||^2 = sum |c_{k,m}|^2``.  Weighted point evaluations
``F(z) exp(-pi|z|^2/2)`` then form a matrix ``A`` with one row per lattice
point and one column per basis function, and

* sampling ratios are Rayleigh quotients of ``A^H A``,
* interpolation is the least-squares problem ``A c = data``.

The weighted samples carry the unimodular factor ``exp(i pi x w)``; it does
not change any modulus, so the sampling side ignores it.
"""
from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bargmann import ekm_weighted
from .errors import ParameterError
from .frames import (DECAYING, DEFAULT_GRID, DEFAULT_MARGIN, DEFAULT_RADII, STABLE, BoundsReport,
                     GaborSystemSpec, _check_radii, estimate_frame_bounds, estimate_riesz_bounds,
                     hermite_system, probe_order, trend_verdict)
from .grid import TimeGrid
from .lattice import Lattice2D, adjoint_lattice, enumerate_points, square_of_density
from .rng import generator
from .windows import Window, hermite_windows

MODES = ("sampling", "interpolation", "superframe", "riesz")
INTERPOLATING = "interpolating"
NOT_INTERPOLATING = "not_interpolating"
EXPLORATORY = "exploratory"

DEGENERATE_NORM = 1e-12
ADVERSARIAL_SPAN = 16
TRIAL_MAX_ORDER = 8
RESIDUAL_FAIL = 0.05          # median relative residual that counts as failure
COEFF_FAIL = 1e6              # median coefficient norm that counts as failure
INTERP_DRAWS = 32
INTERP_RADIUS = 10.0
BASIS_MARGIN = 3.0            # interpolation basis reaches this far past the disk
RANK_TOL = 1e-13              # relative singular value counted as zero

SWEEP_HEADER = "n,density,mode,diagnostic,verdict,seed"


def evaluation_matrix(n: int, max_m: int, z) -> np.ndarray:
    """Columns ``e_{k,m}(z) exp(-pi|z|^2/2)`` ordered ``(k, m)`` with ``k`` major."""
    z = np.asarray(z, dtype=complex).ravel()
    cols = [ekm_weighted(k, m, z) for k in range(n) for m in range(max_m + 1)]
    return np.stack(cols, axis=1) if cols else np.zeros((z.size, 0), dtype=complex)


def _check_n(n):
    if int(n) != n or n < 1:
        raise ParameterError(f"polyanalytic degree must be a positive integer, got {n}")
    return int(n)


# -- sampling ---------------------------------------------------------------

@dataclass
class SamplingStats:
    ratios: list
    min_ratio: float
    max_ratio: float
    trial_count: int
    seed: int
    skipped: int = 0
    adversarial_min: float = math.nan
    space_min: float = math.nan
    space_max: float = math.nan
    max_order: int = TRIAL_MAX_ORDER
    point_count: int = 0


def sampling_ratio_stats(n: int, L: Lattice2D, trials: int = 64, radius: float = 8.0,
                         seed: int = 0, max_order: int = TRIAL_MAX_ORDER,
                         coefficients=None) -> SamplingStats:
    """Weighted sample energy over ``||F||^2`` for random ``F`` in ``F^n``.

    Trial ``F`` have Hermite coefficients ``c_{k,m}``, ``m <= max_order``.
    Pass ``coefficients`` (shape ``(trials, n*(max_order+1))``) to supply
    them instead of drawing.  ``adversarial_min`` minimises the ratio over the
    span of the first 16 trials; ``space_min``/``space_max`` are the exact
    extremes over the whole trial space.
    """
    n = _check_n(n)
    ps = enumerate_points(L, radius)
    A = evaluation_matrix(n, max_order, ps.z)
    dim = A.shape[1]
    if coefficients is None:
        rng = generator(seed, "nyquist", "sampling", n)
        C = rng.normal(size=(trials, dim)) + 1j * rng.normal(size=(trials, dim))
    else:
        C = np.atleast_2d(np.asarray(coefficients, dtype=complex))
        if C.shape[1] != dim:
            raise ParameterError(f"coefficient rows must have length {dim}, got {C.shape[1]}")
    norms = np.linalg.norm(C, axis=1)
    keep = norms >= DEGENERATE_NORM
    Ck = C[keep]
    ratios = (np.linalg.norm(Ck @ A.T, axis=1) / norms[keep]) ** 2
    Q = A.conj().T @ A
    Q = 0.5 * (Q + Q.conj().T)
    w = scipy.linalg.eigvalsh(Q)
    adv = math.nan
    if len(Ck):
        span = scipy.linalg.orth(Ck[:ADVERSARIAL_SPAN].T)
        adv = float(scipy.linalg.eigvalsh(span.conj().T @ Q @ span)[0])
    lo = min(ratios.min(), adv) if len(ratios) else math.nan
    return SamplingStats(ratios=[float(r) for r in ratios], min_ratio=float(lo),
                         max_ratio=float(ratios.max()) if len(ratios) else math.nan,
                         trial_count=int(keep.sum()), seed=int(seed), skipped=int((~keep).sum()),
                         adversarial_min=adv, space_min=float(max(w[0], 0.0)),
                         space_max=float(w[-1]), max_order=int(max_order),
                         point_count=len(ps))


def sampling_bounds(n: int, L: Lattice2D, radii=DEFAULT_RADII,
                    margin: float = DEFAULT_MARGIN, seed: int = 0) -> BoundsReport:
    """Sampling-bound trend for ``F^n`` on ``L``.

    At radius ``R`` the trial space is all ``e_{k,m}`` with ``m`` up to
    ``floor(pi (R - margin)^2)``, so it grows with the disk and the verdict
    reflects the whole space rather than a fixed band.
    """
    n = _check_n(n)
    radii = _check_radii(radii)
    lows, highs, orders = [], [], []
    for R in radii:
        order = probe_order(R, margin)
        st = sampling_ratio_stats(n, L, trials=ADVERSARIAL_SPAN, radius=R, seed=seed, max_order=order)
        lows.append(st.space_min)
        highs.append(st.space_max)
        orders.append(order)
    meta = {"mode": "sampling", "n": n, "margin": margin, "probe_orders": orders,
            "generator": L.generator.tolist(), "seed": int(seed)}
    return BoundsReport(radii, lows, highs, trend_verdict(lows, highs), meta)


# -- interpolation ----------------------------------------------------------

@dataclass
class InterpolationReport:
    residual_norm: float
    coefficient_norm: float
    condition_estimate: float
    radius: float
    max_m: int
    point_count: int
    coefficients: np.ndarray = field(repr=False, default=None)


def default_max_m(n: int, point_count: int, radius: float) -> int:
    """Basis cutoff: at least ``points/n + 8`` and reaching ``BASIS_MARGIN`` past the disk."""
    return max(point_count // n + 8, int(math.floor(math.pi * (radius + BASIS_MARGIN) ** 2)))


def _weighted_matrix(n, ps, max_m):
    z = ps.z
    return evaluation_matrix(n, max_m, z) * np.exp(1j * np.pi * z.real * z.imag)[:, None]


def _solve(U, s, Vh, data):
    tol = RANK_TOL * s[0] if s.size else 0.0
    good = s > tol
    y = (U.conj().T @ data)
    c = Vh[good].conj().T @ (y[good] / s[good])
    return c


def interpolation_solve(n: int, L: Lattice2D, radius: float, data, max_m: int | None = None
                        ) -> InterpolationReport:
    """Least-squares ``F`` in ``F^n`` with ``exp(i pi x w - pi|z|^2/2) F(z) = data`` on the disk.

    ``residual_norm`` is relative to ``||data||``.  A numerically rank
    deficient system reports ``condition_estimate = inf``.
    """
    n = _check_n(n)
    ps = enumerate_points(L, radius)
    data = np.asarray(data, dtype=complex).ravel()
    if data.size != len(ps):
        raise ParameterError(f"data has {data.size} entries, disk holds {len(ps)} points")
    if max_m is None:
        max_m = default_max_m(n, len(ps), radius)
    A = _weighted_matrix(n, ps, max_m)
    U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    c = _solve(U, s, Vh, data)
    dn = np.linalg.norm(data)
    res = np.linalg.norm(A @ c - data) / dn if dn > 0 else 0.0
    full = min(A.shape)
    cond = math.inf if (s.size < full or s[-1] <= RANK_TOL * s[0]) else float(s[0] / s[-1])
    return InterpolationReport(float(res), float(np.linalg.norm(c)), cond, float(radius),
                               int(max_m), len(ps), c)


def interpolation_trial(n: int, L: Lattice2D, radius: float = INTERP_RADIUS,
                        draws: int = INTERP_DRAWS, seed: int = 0, max_m: int | None = None) -> dict:
    """Median residual and coefficient norm over random unit-norm data draws."""
    n = _check_n(n)
    ps = enumerate_points(L, radius)
    if max_m is None:
        max_m = default_max_m(n, len(ps), radius)
    A = _weighted_matrix(n, ps, max_m)
    U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    rng = generator(seed, "nyquist", "interpolation", n)
    res, cn = [], []
    for _ in range(draws):
        a = rng.normal(size=len(ps)) + 1j * rng.normal(size=len(ps))
        a /= np.linalg.norm(a)
        c = _solve(U, s, Vh, a)
        res.append(np.linalg.norm(A @ c - a))
        cn.append(np.linalg.norm(c))
    med_res, med_cn = float(np.median(res)), float(np.median(cn))
    fails = med_res > RESIDUAL_FAIL or med_cn > COEFF_FAIL
    return {"median_residual": med_res, "median_coefficient_norm": med_cn,
            "condition": float(s[0] / s[-1]) if s[-1] > 0 else math.inf,
            "max_m": int(max_m), "point_count": len(ps),
            "verdict": NOT_INTERPOLATING if fails else INTERPOLATING}


# -- sweeps -----------------------------------------------------------------

@dataclass
class SweepConfig:
    radii: tuple = DEFAULT_RADII
    margin: float = DEFAULT_MARGIN
    interpolation_radius: float = INTERP_RADIUS
    draws: int = INTERP_DRAWS
    grid: TimeGrid = DEFAULT_GRID
    seed: int = 0


@dataclass
class SweepRow:
    n: int
    density: float
    mode: str
    diagnostic: float
    verdict: str
    seed: int

    def csv(self) -> str:
        return f"{self.n},{self.density!r},{self.mode},{self.diagnostic!r},{self.verdict},{self.seed}"


def _dedupe(densities):
    out = []
    for d in densities:
        d = float(d)
        if d <= 0:
            raise ParameterError(f"density must be positive, got {d}")
        if d in out:
            warnings.warn(f"duplicate density {d} dropped", stacklevel=3)
            continue
        out.append(d)
    return out


def density_cell(n: int, D: float, mode: str, config: SweepConfig | None = None) -> SweepRow:
    """One (density, mode) diagnostic on the square lattice of density ``D``."""
    cfg = config or SweepConfig()
    L = square_of_density(D)
    if mode == "sampling":
        rep = sampling_bounds(n, L, cfg.radii, cfg.margin, cfg.seed)
        return SweepRow(n, D, mode, float(rep.lower_bounds[-1]), rep.verdict, cfg.seed)
    if mode == "interpolation":
        out = interpolation_trial(n, L, cfg.interpolation_radius, cfg.draws, cfg.seed)
        return SweepRow(n, D, mode, out["median_coefficient_norm"], out["verdict"], cfg.seed)
    if mode == "superframe":
        rep = estimate_frame_bounds(hermite_system("super", n, L), cfg.radii, cfg.grid,
                                    seed=cfg.seed, margin=cfg.margin)
        return SweepRow(n, D, mode, float(rep.lower_bounds[-1]), rep.verdict, cfg.seed)
    if mode == "riesz":
        rep = estimate_riesz_bounds(hermite_system("super", n, L), cfg.radii, cfg.grid, seed=cfg.seed)
        return SweepRow(n, D, mode, float(rep.lower_bounds[-1]), rep.verdict, cfg.seed)
    raise ParameterError(f"unknown sweep mode {mode!r}; expected one of {MODES}")


def density_sweep(n: int, densities, mode: str, config: SweepConfig | None = None) -> list[SweepRow]:
    """Diagnostic and verdict per density; duplicate densities are dropped with a warning."""
    n = _check_n(n)
    if mode not in MODES:
        raise ParameterError(f"unknown sweep mode {mode!r}; expected one of {MODES}")
    return [density_cell(n, D, mode, config) for D in _dedupe(densities)]


def true_space_scan(n: int, densities, config: SweepConfig | None = None) -> list[SweepRow]:
    """Frame-bound verdicts for the single window ``h_n``; exploratory, no expected outcome."""
    n = int(n)
    if n < 0:
        raise ParameterError(f"Hermite order must be non-negative, got {n}")
    cfg = config or SweepConfig()
    rows = []
    for D in _dedupe(densities):
        spec = GaborSystemSpec("scalar", (f"hermite:{n}",), square_of_density(D))
        rep = estimate_frame_bounds(spec, cfg.radii, cfg.grid, seed=cfg.seed, margin=cfg.margin)
        rows.append(SweepRow(n, D, "true_space", float(rep.lower_bounds[-1]),
                             f"{rep.verdict}|{EXPLORATORY}", cfg.seed))
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(SWEEP_HEADER + "\n")
    for r in rows:
        buf.write(r.csv() + "\n")
    return buf.getvalue()


def multiple_system_bounds(windows, L: Lattice2D, mode: str, radii=DEFAULT_RADII,
                           grid: TimeGrid = DEFAULT_GRID, seed: int = 0) -> BoundsReport:
    """Bounds of the union system ``union_k G(g_k, L)``.

    ``multiframe`` reads as a multiple-sampling diagnostic and ``union_riesz``
    as a multiple-interpolation diagnostic for the Fock space.
    """
    if isinstance(windows, int):
        windows = hermite_windows(windows)
    spec = GaborSystemSpec("multi_union", tuple(windows), L)
    if mode == "multiframe":
        return estimate_frame_bounds(spec, radii, grid, seed=seed)
    if mode == "union_riesz":
        return estimate_riesz_bounds(spec, radii, grid, seed=seed)
    raise ParameterError(f"unknown mode {mode!r}; expected multiframe or union_riesz")


def sampling_duality(n: int, L: Lattice2D, radii=DEFAULT_RADII, grid: TimeGrid = DEFAULT_GRID,
                     seed: int = 0) -> dict:
    """Sampling verdict for ``F^n`` on ``L`` next to the union Riesz verdict on the adjoint."""
    samp = sampling_bounds(n, L, radii, seed=seed)
    uni = multiple_system_bounds(n, adjoint_lattice(L), "union_riesz", radii, grid, seed)
    agree = samp.verdict == uni.verdict and samp.verdict in (STABLE, DECAYING)
    return {"sampling": samp, "union_riesz": uni, "agree": agree}
