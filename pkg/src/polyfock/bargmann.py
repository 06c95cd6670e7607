"""Bargmann, true polyanalytic and polyanalytic Bargmann transforms.

Everything here is expressed through the STFT convention of
:mod:`polyfock.gabor`.  Under that convention the Hermite-window relation
carries a frequency reflection for every order,

    V_{h_n} f(x, -w) = exp(i pi x w - pi |z|^2 / 2) (B^n f)(z),   z = x + i w,

which was established numerically (``V_{h_k} h_m`` matches ``e_{k,m}`` to
rounding) and is what makes ``B^k h_m = e_{k,m}`` hold.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import eval_genlaguerre, gammaln

from . import ekm_table
from .errors import CapabilityError, ParameterError, ShapeError
from .gabor import _shifted_matrix, phase_shifts
from .grid import GridField, PhaseGrid, Signal, VectorSignal, phase_inner_product
from .hermite import hermite_function

RAW = "raw_F"
WEIGHTED = "bargmann_weighted"
MAX_POLY_DEGREE = 6
FD_MAX_ORDER = 4
CONVENTION_NOTE = ("V_g f(x,w) = <f, M_w T_x g>; "
                   "B^n f(z) = exp(-i pi x w + pi |z|^2/2) V_{h_n} f(x, -w), z = x + i w")


def _unimodular_gauss(grid: PhaseGrid) -> np.ndarray:
    """``exp(i pi x w - pi |z|^2 / 2)`` on the grid nodes."""
    z = grid.z
    return np.exp(1j * np.pi * z.real * z.imag - 0.5 * np.pi * np.abs(z) ** 2)


@dataclass(frozen=True)
class FockField:
    """A function on the phase grid, either raw ``F`` or the weighted samples.

    ``valid`` marks nodes whose value is trustworthy (finite-difference
    rings and out-of-grid interpolation are excluded); ``flags`` carries
    human-readable warnings.
    """

    field: GridField
    normalization: str = RAW
    valid: np.ndarray | None = None
    flags: tuple = ()

    def __post_init__(self):
        if self.normalization not in (RAW, WEIGHTED):
            raise ParameterError(f"unknown normalization tag {self.normalization!r}")

    @property
    def grid(self) -> PhaseGrid:
        return self.field.grid

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def mask(self) -> np.ndarray:
        if self.valid is None:
            return np.ones(self.values.shape, dtype=bool)
        return self.valid

    def to_raw(self) -> "FockField":
        if self.normalization == RAW:
            return self
        return FockField(GridField(self.grid, self.values / _unimodular_gauss(self.grid)),
                         RAW, self.valid, self.flags)

    def to_weighted(self) -> "FockField":
        if self.normalization == WEIGHTED:
            return self
        return FockField(GridField(self.grid, self.values * _unimodular_gauss(self.grid)),
                         WEIGHTED, self.valid, self.flags)

    def __add__(self, other):
        return _combine(self, other, 1.0)

    def __sub__(self, other):
        return _combine(self, other, -1.0)

    def __mul__(self, c):
        return FockField(GridField(self.grid, self.values * c), self.normalization,
                         self.valid, self.flags)

    __rmul__ = __mul__


def _combine(a: FockField, b: FockField, sign: float) -> FockField:
    if a.grid != b.grid:
        raise ShapeError("phase grid mismatch")
    b = b.to_raw() if a.normalization == RAW else b.to_weighted()
    valid = None
    if a.valid is not None or b.valid is not None:
        valid = a.mask & b.mask
    return FockField(GridField(a.grid, a.values + sign * b.values), a.normalization,
                     valid, a.flags + b.flags)


def raw(grid: PhaseGrid, values) -> FockField:
    return FockField(GridField(grid, values), RAW)


def fock_inner(F: FockField, G: FockField, mask=None) -> complex:
    """Gaussian-weighted inner product ``int F conj(G) exp(-pi|z|^2) dz``."""
    return phase_inner_product(F.to_raw().field, G.to_raw().field, "gaussian", mask)


def fock_norm(F: FockField, mask=None) -> float:
    return math.sqrt(max(fock_inner(F, F, mask).real, 0.0))


# -- transforms -------------------------------------------------------------

def stft_nodes(f: Signal, g: Signal, xs, omegas) -> np.ndarray:
    """``V_g f`` on the product of arbitrary ``xs`` (snapped) and ``omegas``."""
    time = f.grid
    shifts = np.rint(np.asarray(xs) / time.step).astype(int)
    prod = f.values[None, :] * np.conj(_shifted_matrix(np.asarray(g.values), shifts))
    kernel = np.exp(-2j * np.pi * np.outer(time.nodes, omegas)) * time.step
    return prod @ kernel


def _reflected_stft(f: Signal, window: Signal, phase: PhaseGrid) -> np.ndarray:
    """``V_window f(x, -w)`` on the phase grid nodes."""
    if f.grid != window.grid:
        raise ShapeError("signal and window must share a time grid")
    return stft_nodes(f, window, phase.x, -phase.omega)


def _unweight(grid: PhaseGrid, V: np.ndarray) -> np.ndarray:
    z = grid.z
    return np.exp(-1j * np.pi * z.real * z.imag + 0.5 * np.pi * np.abs(z) ** 2) * V


def bargmann_transform(f: Signal, phase: PhaseGrid, method: str = "stft") -> FockField:
    """``(Bf)(z) = 2^{1/4} int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt``.

    ``method="stft"`` unweights the Gaussian-window STFT; ``"quadrature"``
    sums the kernel directly.  The kernel sum cancels for large ``|Im z|``
    (relative error grows like ``exp(pi w^2 / 2)``), so it serves as a
    cross-check on moderate grids only.
    """
    if method == "stft":
        return true_poly_bargmann(f, 0, phase)
    if method != "quadrature":
        raise ParameterError(f"unknown method {method!r}")
    t = f.grid.nodes
    x, w = phase.x, phase.omega
    left = (f.values * np.exp(-np.pi * t ** 2))[None, :] * np.exp(2 * np.pi * np.outer(x, t))
    F = (left @ np.exp(2j * np.pi * np.outer(t, w))) * (f.grid.step * 2 ** 0.25)
    return raw(phase, F * np.exp(-0.5 * np.pi * phase.z ** 2))


def monomial_basis(m: int, phase: PhaseGrid) -> FockField:
    """``e_m(z) = sqrt(pi^m / m!) z^m``."""
    if m < 0:
        raise ParameterError("m must be non-negative")
    c = math.exp(0.5 * (m * math.log(math.pi) - math.lgamma(m + 1)))
    return raw(phase, c * phase.z ** m)


def _check_degree(n, cap=None):
    if int(n) != n or n < 0:
        raise ParameterError(f"order must be a non-negative integer, got {n}")
    if cap is not None and n > cap:
        raise CapabilityError(f"order {n} exceeds supported maximum {cap}")


def true_poly_bargmann(f: Signal, n: int, phase: PhaseGrid) -> FockField:
    """``B^n f`` from the STFT with window ``h_n`` (the normative route)."""
    _check_degree(n)
    window = hermite_function(n, f.grid, max_order=max(n, 12))
    V = _reflected_stft(f, window, phase)
    return raw(phase, _unweight(phase, V))


def poly_bargmann(f: VectorSignal, phase: PhaseGrid) -> FockField:
    """``sum_k B^k f_k`` for ``f = (f_0, ..., f_{n-1})``."""
    total = np.zeros((phase.nx, phase.nomega), dtype=complex)
    for k, fk in enumerate(f.channels):
        total += true_poly_bargmann(fk, k, phase).values
    return raw(phase, total)


# -- finite differences -----------------------------------------------------

_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _diff(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order central difference; the outer two rows are left as NaN."""
    v = np.moveaxis(values, axis, 0)
    out = np.full_like(v, np.nan)
    out[2:-2] = (_STENCIL[0] * v[:-4] + _STENCIL[1] * v[1:-3]
                 + _STENCIL[3] * v[3:-1] + _STENCIL[4] * v[4:]) / h
    return np.moveaxis(out, 0, axis)


def _ring_mask(shape, width: int) -> np.ndarray:
    m = np.zeros(shape, dtype=bool)
    if 2 * width < min(shape):
        m[width:shape[0] - width, width:shape[1] - width] = True
    return m


def dbar_power(F: FockField, p: int) -> FockField:
    """``(d/d conj z)^p F`` with ``d/d conj z = (d/dx + i d/dw) / 2``."""
    _check_degree(p, FD_MAX_ORDER)
    F = F.to_raw()
    g = F.grid
    v = np.array(F.values)
    for _ in range(p):
        v = 0.5 * (_diff(v, g.dx, 0) + 1j * _diff(v, g.domega, 1))
    valid = _ring_mask(v.shape, 2 * p) & F.mask
    return FockField(GridField(g, np.where(valid, v, 0.0)), RAW, valid, F.flags)


def _dz_analytic(values: np.ndarray, h: float) -> np.ndarray:
    # for an entire function the complex derivative equals d/dx
    return _diff(values, h, 0)


def true_poly_bargmann_derivative_route(f: Signal, n: int, phase: PhaseGrid,
                                        F: FockField | None = None) -> FockField:
    """Independent evaluation of ``B^n f`` from derivatives of ``F = Bf``.

    ``B^n f = (pi^n n!)^{-1/2} sum_k C(n,k) (-pi conj z)^k F^{(n-k)}(z)``,
    with ``F^{(j)}`` from repeated fourth-order differences along x.
    """
    _check_degree(n, FD_MAX_ORDER)
    if F is None:
        F = bargmann_transform(f, phase)
    F = F.to_raw()
    derivs = [np.array(F.values)]
    for _ in range(n):
        derivs.append(_dz_analytic(derivs[-1], phase.dx))
    zb = np.conj(phase.z)
    total = np.zeros_like(derivs[0])
    for k in range(n + 1):
        total = total + math.comb(n, k) * (-np.pi * zb) ** k * derivs[n - k]
    total /= math.sqrt(math.pi ** n * math.factorial(n))
    valid = np.zeros(total.shape, dtype=bool)
    valid[2 * n:phase.nx - 2 * n, :] = True
    return FockField(GridField(phase, np.where(valid, total, 0.0)), RAW, valid)


# -- the e_{k,m} basis ------------------------------------------------------

def basis_ekm(k: int, m: int, phase: PhaseGrid, table_path=None) -> FockField:
    """``e_{k,m}`` from the frozen coefficient table (``k <= 4, m <= 8``)."""
    return raw(phase, ekm_table.evaluate(k, m, phase.z, table_path))


def ekm_weighted(k: int, m: int, z) -> np.ndarray:
    """``e_{k,m}(z) exp(-pi |z|^2 / 2)`` for any ``k, m`` via Laguerre polynomials.

    For ``m >= k``: ``e_{k,m} = sqrt(k!/m!) pi^{(m-k)/2} z^{m-k} L_k^{(m-k)}(pi|z|^2)``,
    and the same with ``k, m`` swapped and ``z`` replaced by ``-conj z`` when ``m < k``.  Magnitudes are
    assembled in log space so large ``m`` does not overflow.
    """
    z = np.asarray(z, dtype=complex)
    u = np.pi * np.abs(z) ** 2
    lo, hi = min(k, m), max(k, m)
    d = hi - lo
    log_c = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + 0.5 * d * math.log(math.pi)
    lag = eval_genlaguerre(lo, d, u)
    base = z if m >= k else -np.conj(z)
    if d == 0:
        mag = np.exp(log_c - 0.5 * u)
        return mag * lag
    r = np.abs(base)
    with np.errstate(divide="ignore"):
        mag = np.exp(log_c + d * np.log(r) - 0.5 * u)
    phase = np.exp(1j * d * np.angle(base))
    return np.where(r > 0, mag * phase, 0.0) * lag


def ekm_values(k: int, m: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return ekm_weighted(k, m, z) * np.exp(0.5 * np.pi * np.abs(z) ** 2)


# -- shifts and reproducing kernels -----------------------------------------

def _interpolator(F: FockField):
    g = F.grid
    v = F.to_raw().values
    re = RegularGridInterpolator((g.x, g.omega), v.real, method="cubic",
                                 bounds_error=False, fill_value=np.nan)
    im = RegularGridInterpolator((g.x, g.omega), v.imag, method="cubic",
                                 bounds_error=False, fill_value=np.nan)
    return lambda pts: re(pts) + 1j * im(pts)


def beta_shift(F: FockField, z0: complex) -> FockField:
    """``exp(i pi x0 w0 - pi|z0|^2/2) exp(pi conj(z0) zeta) F(zeta - z0)``.

    Off-node values come from cubic interpolation of ``F`` (fourth-order
    accurate in the cell size).  Nodes whose pre-image leaves the grid are
    zeroed, excluded from ``valid`` and reported in ``flags``.
    """
    z0 = complex(z0)
    g = F.grid
    if z0 == 0:
        return F.to_raw()
    zeta = g.z
    src = zeta - z0
    pts = np.stack([src.real.ravel(), src.imag.ravel()], axis=-1)
    shifted = _interpolator(F)(pts).reshape(zeta.shape)
    inside = np.isfinite(shifted)
    pref = np.exp(1j * np.pi * z0.real * z0.imag - 0.5 * np.pi * abs(z0) ** 2)
    vals = np.where(inside, pref * np.exp(np.pi * np.conj(z0) * zeta) * np.nan_to_num(shifted), 0.0)
    flags = F.flags
    if not inside.all():
        flags = flags + (f"beta_shift: {int((~inside).sum())} nodes map outside the grid",)
    return FockField(GridField(g, vals), RAW, inside & F.mask, flags)


def reproducing_eval(F: FockField, z: complex, derivative_order: int = 0) -> complex:
    """``<F, w^j exp(pi conj(z) w)>_F``, which equals ``pi^{-j} F^{(j)}(z)``."""
    _check_degree(derivative_order)
    g = F.grid
    z = complex(z)
    if g.x_half_width - abs(z.real) < 3.0 or g.omega_half_width - abs(z.imag) < 3.0:
        warnings.warn(f"reproducing_eval: z = {z} is within 3 units of the grid edge; "
                      "the Gaussian-weighted quadrature may be inaccurate", RuntimeWarning)
    w = g.z
    kernel = w ** derivative_order * np.exp(np.pi * np.conj(z) * w)
    integrand = F.to_raw().values * np.conj(kernel) * np.exp(-np.pi * np.abs(w) ** 2)
    return complex(np.sum(integrand) * g.cell_area)


def project_true_component(F: FockField, k: int, max_m: int) -> FockField:
    """Orthogonal projection onto ``span{e_{k,m} : m <= max_m}``."""
    if k > ekm_table.MAX_K or max_m > ekm_table.MAX_M:
        raise CapabilityError("projection limited to the frozen table (k <= 4, m <= 8)")
    g = F.grid
    out = np.zeros((g.nx, g.nomega), dtype=complex)
    for m in range(max_m + 1):
        e = basis_ekm(k, m, g)
        out += fock_inner(F, e) * e.values
    return raw(g, out)
