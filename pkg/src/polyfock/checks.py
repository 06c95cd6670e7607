"""Named invariant checks shared by ``verify`` and the acceptance tests.

Each check returns a :class:`CheckResult` whose ``value`` is the worst
observed error (or a verdict summary) and ``threshold`` the bound it must
meet.  Values are rounded to 10 significant digits so that reports are
byte-stable across runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ekm_table
from .bargmann import (basis_ekm, bargmann_transform, dbar_power, fock_inner, fock_norm,
                       monomial_basis, poly_bargmann, raw, true_poly_bargmann)
from .frames import DECAYING, STABLE, duality_check, estimate_frame_bounds, \
    estimate_riesz_bounds, hermite_system
from .gabor import stft, super_stft, verify_orthogonality_relations
from .grid import (Signal, TimeGrid, VectorSignal, make_phase_grid, make_time_grid, norm,
                   phase_quadrature, vector_norm)
from .hermite import gaussian_window, hermite_function, hermite_values, s0_norm_formula, \
    s0_norm_numeric
from .lattice import (adjoint_lattice, density, enumerate_points, lattice_from_matrix,
                      commutation_residual, rect_lattice, same_point_set, square_of_density)
from .multiplex import hermite_band_signal, mux_decode, mux_encode, relative_errors
from .nyquist import INTERPOLATING, NOT_INTERPOLATING, interpolation_trial, sampling_bounds
from .rng import generator
from .windows import hermite_windows


def _r(v) -> float:
    v = float(v)
    return v if not math.isfinite(v) or v == 0 else float(f"{v:.10g}")


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "value": _r(self.value),
                "threshold": _r(self.threshold), "details": self.details}


def _result(name, value, threshold, **details) -> CheckResult:
    return CheckResult(name, bool(value < threshold), value, threshold, details)


# default resolutions
def time_grid() -> TimeGrid:
    return make_time_grid(8.0, 4096)


def phase_grid():
    return make_phase_grid(6.0, 256)


def random_signal(rng, grid: TimeGrid, max_order: int = 8, spread: float = 1.0) -> Signal:
    """Hermite combination of order ``<= max_order``, moved by a random time-frequency shift."""
    a = rng.normal(size=max_order + 1) + 1j * rng.normal(size=max_order + 1)
    x, w = rng.uniform(-spread, spread, size=2)
    t = grid.nodes
    v = (a @ hermite_values(max_order, t - x, out_all=True)) * np.exp(2j * np.pi * w * t)
    return Signal(grid, v / np.linalg.norm(a))


# -- criterion 1 ------------------------------------------------------------

def hermite_orthonormality(max_order: int = 8) -> CheckResult:
    tg = time_grid()
    H = np.stack([hermite_function(n, tg).values for n in range(max_order + 1)])
    G = H.conj() @ H.T * tg.step
    err = float(np.max(np.abs(G - np.eye(max_order + 1))))
    return _result("hermite_orthonormality", err, 1e-8, max_order=max_order)


# -- criterion 2 ------------------------------------------------------------

def stft_isometry(pairs: int = 64, seed: int = 0) -> CheckResult:
    tg, pg = time_grid(), phase_grid()
    rng = generator(seed, "checks", "stft")
    worst_iso = worst_orth = 0.0
    for _ in range(pairs):
        f1, f2, g1, g2 = (random_signal(rng, tg) for _ in range(4))
        V = stft(f1, g1, pg)
        iso = math.sqrt(phase_quadrature(V)) / (norm(f1) * norm(g1))
        worst_iso = max(worst_iso, abs(iso - 1.0))
        lhs, rhs = verify_orthogonality_relations(f1, f2, g1, g2, pg)
        worst_orth = max(worst_orth, abs(lhs - rhs) / (norm(f1) * norm(f2) * norm(g1) * norm(g2)))
    return _result("stft_isometry", max(worst_iso, worst_orth), 1e-5, pairs=pairs,
                   isometry=_r(worst_iso), orthogonality=_r(worst_orth))


# -- criterion 3 ------------------------------------------------------------

def bargmann_hermite(max_n: int = 6) -> CheckResult:
    tg, pg = time_grid(), phase_grid()
    disk = np.abs(pg.z) <= 2
    worst = 0.0
    for n in range(max_n + 1):
        B = bargmann_transform(hermite_function(n, tg), pg)
        worst = max(worst, float(np.max(np.abs(B.values - monomial_basis(n, pg).values)[disk])))
    return _result("bargmann_hermite", worst, 1e-6, max_n=max_n)


def bargmann_basis(max_k: int = 3, max_m: int = 3) -> CheckResult:
    tg, pg = time_grid(), phase_grid()
    disk = np.abs(pg.z) <= 2
    worst = 0.0
    for k in range(max_k + 1):
        for m in range(max_m + 1):
            B = true_poly_bargmann(hermite_function(m, tg), k, pg)
            worst = max(worst, float(np.max(np.abs(B.values - basis_ekm(k, m, pg).values)[disk])))
    return _result("bargmann_basis", worst, 1e-5, max_k=max_k, max_m=max_m)


# -- criterion 4 ------------------------------------------------------------

def basis_gram(max_k: int = 3, max_m: int = 5) -> CheckResult:
    """Fock Gram matrix of the tabulated ``e_{k,m}``; fails on a corrupted table."""
    pg = make_phase_grid(7.0, 256)
    path = ekm_table.table_path()
    try:
        fields = [basis_ekm(k, m, pg, path) for k in range(max_k + 1) for m in range(max_m + 1)]
    except Exception as exc:               # unreadable table counts as a failed check
        return CheckResult("basis_gram", False, math.inf, 1e-4, {"error": str(exc)})
    G = np.array([[fock_inner(a, b) for b in fields] for a in fields])
    err = float(np.max(np.abs(G - np.eye(len(fields)))))
    return _result("basis_gram", err, 1e-4, max_k=max_k, max_m=max_m)


# -- criterion 5 ------------------------------------------------------------

def polyanalytic_ladder(max_n: int = 3, signals: int = 16, seed: int = 0) -> CheckResult:
    """``||dbar^{n+1} B^n f|| / ||dbar^n B^n f||`` on the disk ``|z| <= 3``."""
    tg, pg = time_grid(), phase_grid()
    rng = generator(seed, "checks", "ladder")
    disk = np.abs(pg.z) <= 3
    worst = 0.0
    for n in range(max_n + 1):
        for _ in range(signals):
            F = true_poly_bargmann(random_signal(rng, tg, spread=0.5), n, pg)
            hi, lo = dbar_power(F, n + 1), dbar_power(F, n)
            mask = hi.mask & disk
            worst = max(worst, fock_norm(hi, mask) / fock_norm(lo, mask))
    # z conj(z) - 1 is polyanalytic of order 2
    z = pg.z
    E = dbar_power(raw(pg, z * np.conj(z) - 1), 2)
    example = float(np.max(np.abs(E.values[E.mask])))
    ok = worst < 1e-3 and example < 1e-6
    return CheckResult("polyanalytic_ladder", ok, worst, 1e-3,
                       {"example_residual": _r(example), "example_threshold": 1e-6,
                        "signals": signals, "max_n": max_n})


# -- criterion 6 ------------------------------------------------------------

def isometries(max_n: int = 4, seed: int = 0, trials: int = 4) -> CheckResult:
    tg, pg = time_grid(), phase_grid()
    rng = generator(seed, "checks", "isometry")
    worst = {"true_poly": 0.0, "poly": 0.0, "super_stft": 0.0}
    for n in range(max_n + 1):
        for _ in range(trials):
            f = random_signal(rng, tg, spread=0.5)
            worst["true_poly"] = max(worst["true_poly"],
                                     abs(fock_norm(true_poly_bargmann(f, n, pg)) / norm(f) - 1))
        if n == 0:
            continue
        for _ in range(trials):
            fv = VectorSignal(tg, tuple(random_signal(rng, tg, spread=0.5) for _ in range(n)))
            nf = vector_norm(fv)
            worst["poly"] = max(worst["poly"], abs(fock_norm(poly_bargmann(fv, pg)) / nf - 1))
            g = VectorSignal(tg, tuple(w.sample(tg) for w in hermite_windows(n)))
            S = super_stft(fv, g, pg)
            worst["super_stft"] = max(worst["super_stft"],
                                      abs(math.sqrt(phase_quadrature(S)) / nf - 1))
    return _result("isometries", max(worst.values()), 1e-4,
                   **{k: _r(v) for k, v in worst.items()})


# -- criterion 7 ------------------------------------------------------------

def s0_norms(max_n: int = 4) -> CheckResult:
    tg, pg = time_grid(), make_phase_grid(7.0, 256)
    rel = {}
    for n in range(max_n + 1):
        rel[n] = abs(s0_norm_numeric(n, pg, tg) / s0_norm_formula(n) - 1)
    exact0 = abs(s0_norm_formula(0) - 2.0)
    ok = max(rel.values()) < 1e-2 and exact0 < 1e-12
    return CheckResult("s0_norms", ok, max(rel.values()), 1e-2,
                       {"relative": {str(k): _r(v) for k, v in rel.items()}, "n0_formula": 2.0})


# -- criterion 8 ------------------------------------------------------------

def random_lattice(rng):
    while True:
        A = rng.uniform(-1.5, 1.5, size=(2, 2))
        if 0.4 < abs(np.linalg.det(A)) < 2.5:
            return lattice_from_matrix(A)


def lattice_algebra(lattices: int = 32, commutation_lattices: int = 3, seed: int = 0) -> CheckResult:
    rng = generator(seed, "checks", "lattice")
    ok_sets = True
    for a, b in [(0.5, 2.0), (1.0, 1.0), (0.8, 1.25), (0.4, 0.7)]:
        adj = enumerate_points(adjoint_lattice(rect_lattice(a, b)), 6.0)
        ref = enumerate_points(rect_lattice(1 / b, 1 / a), 6.0)
        ok_sets &= same_point_set(adj, ref)
    worst_d = 0.0
    lats = [random_lattice(rng) for _ in range(lattices)]
    for L in lats:
        worst_d = max(worst_d, abs(density(L) * density(adjoint_lattice(L)) - 1))
    g = gaussian_window(TimeGrid(6.0, 1024))
    worst_c = 0.0
    for L in lats[:commutation_lattices]:
        mus = enumerate_points(adjoint_lattice(L), 2.0).points
        for mu in mus[:4]:
            worst_c = max(worst_c, commutation_residual(L, mu, g, radius=2.0))
    ok = ok_sets and worst_d < 1e-12 and worst_c < 1e-9
    return CheckResult("lattice_algebra", ok, max(worst_d, worst_c), 1e-9,
                       {"adjoint_point_sets": bool(ok_sets), "density_product": _r(worst_d),
                        "commutation": _r(worst_c)})


# -- criterion 9 ------------------------------------------------------------

def _expected(D, n, positive_above=True):
    above = D > n
    return above if positive_above else not above


def nyquist_bracketing(modes=("sampling", "interpolation", "superframe", "riesz"),
                       ns=(1, 2, 3), seed: int = 0) -> CheckResult:
    """Densities ``n -/+ 0.5`` give opposite, correctly oriented verdicts in every mode."""
    verdicts = {}
    failures = 0
    for n in ns:
        for D in (n - 0.5, n + 0.5):
            L = square_of_density(D)
            above = D > n
            for mode in modes:
                if mode == "sampling":
                    v = sampling_bounds(n, L, seed=seed).verdict
                    good = v == (STABLE if above else DECAYING)
                elif mode == "interpolation":
                    v = interpolation_trial(n, L, seed=seed)["verdict"]
                    good = v == (NOT_INTERPOLATING if above else INTERPOLATING)
                elif mode == "superframe":
                    v = estimate_frame_bounds(hermite_system("super", n, L), seed=seed).verdict
                    good = v == (STABLE if above else DECAYING)
                elif mode == "riesz":
                    v = estimate_riesz_bounds(hermite_system("super", n, L), seed=seed).verdict
                    good = v == (DECAYING if above else STABLE)
                else:
                    raise ValueError(mode)
                verdicts[f"n{n}_D{D}_{mode}"] = v
                failures += not good
    return CheckResult("nyquist_bracketing", failures == 0, failures, 1,
                       {"verdicts": verdicts, "modes": list(modes)})


# -- criterion 10 -----------------------------------------------------------

def duality(ns=(1, 2, 3), seed: int = 0) -> CheckResult:
    pairs = {}
    failures = 0
    for n in ns:
        for D in (n - 0.5, n + 0.5):
            out = duality_check(hermite_windows(n), square_of_density(D), seed=seed)
            for k, p in out["pairs"].items():
                pairs[f"n{n}_D{D}_{k}"] = [p["primal"], p["dual"]]
                failures += not p["agree"]
    return CheckResult("duality", failures == 0, failures, 1, {"pairs": pairs})


# -- criterion 11 -----------------------------------------------------------

def multiplex_round_trip(radius: float = 10.0, seed: int = 0) -> CheckResult:
    grid = TimeGrid(16.0, 2048)
    f = hermite_band_signal(2, grid, seed)
    good_L, bad_L = square_of_density(2.5), square_of_density(1.5)
    dec = mux_decode(mux_encode(f, good_L, radius), good_L, radius)
    err = max(relative_errors(f, dec.channels))
    lone = VectorSignal(grid, (f[0], Signal(grid, np.zeros(grid.size))))
    dl = mux_decode(mux_encode(lone, good_L, radius), good_L, radius)
    xtalk = float(np.linalg.norm(dl.channels[1].values) / np.linalg.norm(f[0].values))
    bad = mux_decode(mux_encode(f, bad_L, radius), bad_L, radius)
    bad_err = max(relative_errors(f, bad.channels))
    bad_caught = bool(bad.flags) or bad_err > 0.1
    ok = err < 1e-3 and xtalk < 1e-3 and bad_caught
    return CheckResult("multiplex_round_trip", ok, max(err, xtalk), 1e-3,
                       {"error": _r(err), "cross_talk": _r(xtalk), "below_error": _r(bad_err),
                        "below_flags": list(bad.flags), "below_caught": bad_caught})


FAST = {
    "hermite_orthonormality": hermite_orthonormality,
    "stft_isometry": lambda seed: stft_isometry(16, seed),
    "bargmann_hermite": bargmann_hermite,
    "bargmann_basis": bargmann_basis,
    "basis_gram": basis_gram,
    "polyanalytic_ladder": lambda seed: polyanalytic_ladder(3, 4, seed),
    "isometries": lambda seed: isometries(4, seed, trials=2),
    "s0_norms": s0_norms,
    "lattice_algebra": lambda seed: lattice_algebra(32, 1, seed),
    "nyquist_fock_side": lambda seed: _renamed(
        nyquist_bracketing(("sampling", "interpolation"), seed=seed), "nyquist_fock_side"),
    "multiplex_round_trip": lambda seed: multiplex_round_trip(8.0, seed),
}

FULL = {
    **FAST,
    "stft_isometry": lambda seed: stft_isometry(64, seed),
    "polyanalytic_ladder": lambda seed: polyanalytic_ladder(3, 16, seed),
    "isometries": lambda seed: isometries(4, seed),
    "lattice_algebra": lambda seed: lattice_algebra(32, 3, seed),
    "nyquist_fock_side": None,
    "nyquist_bracketing": lambda seed: nyquist_bracketing(seed=seed),
    "duality": lambda seed: duality(seed=seed),
    "multiplex_round_trip": lambda seed: multiplex_round_trip(10.0, seed),
}
FULL = {k: v for k, v in FULL.items() if v is not None}

_SEEDLESS = {"hermite_orthonormality", "bargmann_hermite", "bargmann_basis", "basis_gram", "s0_norms"}


def _renamed(res: CheckResult, name: str) -> CheckResult:
    res.name = name
    return res


def run_suite(suite: str, seed: int) -> list[CheckResult]:
    table = {"fast": FAST, "full": FULL}[suite]
    out = []
    for name, fn in table.items():
        out.append(fn() if name in _SEEDLESS else fn(seed))
    return out
