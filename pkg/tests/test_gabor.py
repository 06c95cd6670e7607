import cmath
import math

import numpy as np
import pytest

from polyfock.checks import random_signal
from polyfock.errors import ShapeError
from polyfock.gabor import (TFShift, phase_shifts, read_field_csv, snap, stft, super_stft,
                            tf_shift, verify_orthogonality_relations, write_field_csv)
from polyfock.grid import (Signal, VectorSignal, inner_product, make_phase_grid, make_time_grid,
                           norm, phase_inner_product, phase_quadrature, vector_inner_product,
                           vector_norm)
from polyfock.hermite import gaussian_window, hermite_function, hermite_vector


def test_identity_shift(tg):
    g = hermite_function(2, tg)
    assert np.array_equal(tf_shift(g, TFShift(0, 0)).values, g.values)


def test_shift_unitary(tg):
    g = hermite_function(3, tg)
    assert abs(norm(tf_shift(g, TFShift(1.25, -0.7))) - norm(g)) < 1e-10


def test_shift_order_phase(tg):
    # T_x M_w g = exp(-2 pi i x w) M_w T_x g; at (1, 1/2) the factor is -1
    g = hermite_function(1, tg)
    x, w = 1.0, 0.5
    mt = tf_shift(g, TFShift(x, w))
    modulated = Signal(tg, np.exp(2j * np.pi * w * tg.nodes) * g.values)
    tm = tf_shift(modulated, TFShift(x, 0))
    factor = cmath.exp(-2j * math.pi * x * w)
    assert abs(factor + 1) < 1e-15
    assert np.max(np.abs(tm.values - factor * mt.values)) < 1e-12


def test_zero_fill_not_circular():
    g = make_time_grid(1, 8)
    s = Signal(g, np.arange(8, dtype=complex) + 1)
    moved = tf_shift(s, TFShift(3 * g.step, 0))
    assert np.array_equal(moved.values[:3], np.zeros(3))
    assert np.array_equal(moved.values[3:], s.values[:5])


def test_snap_half_even():
    g = make_time_grid(1, 8)      # step 0.25
    assert snap(g, 0.125)[0] == 0
    assert snap(g, 0.375)[0] == 2
    k, r = snap(g, 0.3)
    assert k == 1 and abs(r - 0.05) < 1e-15


def test_exact_shift_subsample(tg):
    g = gaussian_window(tg)
    moved = tf_shift(g, TFShift(0.3 + tg.step / 3, 0), exact=True)
    ref = 2 ** 0.25 * np.exp(-np.pi * (tg.nodes - 0.3 - tg.step / 3) ** 2)
    assert np.max(np.abs(moved.values - ref)) < 1e-10


def test_default_grid_snaps_exactly(tg, pg):
    _, residual = phase_shifts(tg, pg)
    assert residual == 0.0


def test_gaussian_stft_closed_form(tg, pg):
    phi = gaussian_window(tg)
    V = stft(phi, phi, pg).values
    z = pg.z
    mid = (pg.nx // 2, pg.nomega // 2)
    assert z[mid] == 0
    assert abs(V[mid] - 1) < 1e-8
    d = np.abs(z) <= 3
    # full closed form including the phase exp(-i pi x w)
    ref = np.exp(-1j * np.pi * z.real * z.imag - np.pi * np.abs(z) ** 2 / 2)
    assert np.max(np.abs(np.abs(V) - np.abs(ref))[d]) < 1e-6
    assert np.max(np.abs(V - ref)[d]) < 1e-10


def test_direct_matches_fast(rng):
    time = make_time_grid(6, 768)
    phase = make_phase_grid(3, 8)
    for _ in range(64):
        f, g = random_signal(rng, time), random_signal(rng, time)
        a = stft(f, g, phase).values
        b = stft(f, g, phase, method="direct").values
        assert np.max(np.abs(a - b)) < 1e-10


@pytest.mark.parametrize("n", range(6))
def test_isometry_hermite_windows(tg, pg, rng, n):
    f, g = random_signal(rng, tg), hermite_function(n, tg)
    V = stft(f, g, pg)
    assert abs(math.sqrt(phase_quadrature(V)) / (norm(f) * norm(g)) - 1) < 1e-5


def test_orthogonality_trivial(tg, pg):
    phi = gaussian_window(tg)
    lhs, rhs = verify_orthogonality_relations(phi, phi, phi, phi, pg)
    assert abs(lhs - 1) < 1e-8 and abs(rhs - 1) < 1e-12


def test_orthogonal_windows(tg, pg, rng):
    f1, f2 = random_signal(rng, tg), random_signal(rng, tg)
    lhs, rhs = verify_orthogonality_relations(f1, f2, hermite_function(0, tg), hermite_function(1, tg), pg)
    assert abs(rhs) < 1e-12 and abs(lhs) < 1e-5


def test_orthogonality_random_against_fine(rng):
    # the fine resolution acts as the quadrature oracle
    coarse_t, coarse_p = make_time_grid(8, 2048), make_phase_grid(6, 128)
    fine_t, fine_p = make_time_grid(8, 4096), make_phase_grid(6, 256)
    seeds = rng.integers(0, 2 ** 31, size=4)
    def quartet(grid):
        return [random_signal(np.random.default_rng(int(s)), grid) for s in seeds]
    lc, rc = verify_orthogonality_relations(*quartet(coarse_t), coarse_p)
    lf, rf = verify_orthogonality_relations(*quartet(fine_t), fine_p)
    scale = math.prod(norm(s) for s in quartet(fine_t))
    assert abs(lc - rc) <= 1e-4 * scale
    assert abs(lf - rf) <= 1e-4 * scale
    assert abs(lc - lf) <= 1e-4 * scale


def test_shape_errors(tg, pg):
    other = make_time_grid(4, 512)
    with pytest.raises(ShapeError):
        stft(hermite_function(0, tg), hermite_function(0, other), pg)
    with pytest.raises(ShapeError):
        super_stft(hermite_vector(2, tg), hermite_vector(3, tg), pg)


def test_super_reduces_to_scalar(tg, pg, rng):
    f, g = random_signal(rng, tg), hermite_function(2, tg)
    a = super_stft(VectorSignal.from_signals(f), VectorSignal.from_signals(g), pg).values
    assert np.array_equal(a, stft(f, g, pg).values)


@pytest.mark.parametrize("n", range(1, 5))
def test_super_isometry(tg, pg, rng, n):
    f = VectorSignal(tg, tuple(random_signal(rng, tg) for _ in range(n)))
    S = super_stft(f, hermite_vector(n, tg), pg)
    assert abs(math.sqrt(phase_quadrature(S)) / vector_norm(f) - 1) < 1e-5


def test_biorthogonal_windows(tg, pg, rng):
    # <g_j, gamma_k> = delta_jk with gamma_k = h_k + h_{k+2}
    g = hermite_vector(2, tg)
    gamma = VectorSignal.from_signals(hermite_function(0, tg) + hermite_function(2, tg),
                                      hermite_function(1, tg) + hermite_function(3, tg))
    G = [[inner_product(a, b) for b in gamma.channels] for a in g.channels]
    assert np.allclose(G, np.eye(2), atol=1e-10)
    f1 = VectorSignal(tg, tuple(random_signal(rng, tg) for _ in range(2)))
    f2 = VectorSignal(tg, tuple(random_signal(rng, tg) for _ in range(2)))
    lhs = phase_inner_product(super_stft(f1, g, pg), super_stft(f2, gamma, pg))
    assert abs(lhs - vector_inner_product(f1, f2)) < 1e-4


def test_field_csv_round_trip(tmp_path, tg):
    phase = make_phase_grid(2, 8)
    V = stft(hermite_function(1, tg), gaussian_window(tg), phase)
    p = tmp_path / "v.csv"
    write_field_csv(V, p, ["hello"])
    back, comments = read_field_csv(p)
    assert comments == ["hello"]
    assert back.grid == phase
    assert np.array_equal(back.values, V.values)
