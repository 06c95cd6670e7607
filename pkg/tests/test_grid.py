import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyfock.errors import ParameterError, ShapeError
from polyfock.grid import (GridField, PhaseGrid, Signal, TimeGrid, VectorSignal, inner_product,
                           make_phase_grid, make_time_grid, norm, phase_inner_product,
                           phase_quadrature, read_signal_csv, vector_inner_product, vector_norm,
                           write_signal_csv)
from polyfock.hermite import hermite_function
from polyfock.bargmann import monomial_basis


def test_smallest_grid():
    g = make_time_grid(1, 2)
    assert g.step == 1.0
    assert list(g.nodes) == [-1.0, 0.0]


def test_default_step():
    assert make_time_grid(8, 4096).step == 2.0 ** -8


@pytest.mark.parametrize("T,N", [(0, 10), (-1, 10), (1, 1), (1, 0)])
def test_bad_grid(T, N):
    with pytest.raises(ParameterError):
        make_time_grid(T, N)


def test_nodes_symmetric(tg):
    t = tg.nodes
    assert np.all(np.diff(t) > 0)
    assert t[0] == -tg.half_width
    assert abs(t[-1] + t[0]) <= tg.step + 1e-15


def test_signal_validation(tg):
    with pytest.raises(ShapeError):
        Signal(tg, np.zeros(tg.size - 1))
    with pytest.raises(ParameterError):
        Signal(tg, np.full(tg.size, np.nan))


def test_gaussian_norm_against_fine_oracle(tg):
    # h0 on the default grid against N = 2^16
    h = hermite_function(0, tg)
    fine = make_time_grid(8, 2 ** 16)
    hf = hermite_function(0, fine)
    assert abs(inner_product(h, h) - 1) < 1e-8
    assert abs(inner_product(h, h) - inner_product(hf, hf)) < 1e-8


def test_even_odd_orthogonal(tg):
    assert abs(inner_product(hermite_function(0, tg), hermite_function(1, tg))) < 1e-10


def test_zero_inner(tg):
    z = Signal(tg, np.zeros(tg.size))
    assert inner_product(z, hermite_function(2, tg)) == 0


def test_grid_mismatch(tg):
    other = make_time_grid(4, 128)
    with pytest.raises(ShapeError):
        inner_product(hermite_function(0, tg), hermite_function(0, other))


def _rand(rng, grid):
    return Signal(grid, rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size))


@given(st.integers(0, 2 ** 32 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                       allow_infinity=False))
def test_sesquilinear(seed, a):
    g = make_time_grid(2, 64)
    rng = np.random.default_rng(seed)
    f1, f2, h = (_rand(rng, g) for _ in range(3))
    lhs = inner_product(f1 * a + f2, h)
    rhs = a * inner_product(f1, h) + inner_product(f2, h)
    scale = (abs(a) + 1) * 64 * 10
    assert abs(lhs - rhs) <= 1e-12 * scale
    assert abs(inner_product(f1, h) - np.conj(inner_product(h, f1))) <= 1e-12 * scale


def test_vector_inner(tg):
    h0, h1 = hermite_function(0, tg), hermite_function(1, tg)
    z = Signal(tg, np.zeros(tg.size))
    f = VectorSignal.from_signals(h0, h1)
    assert abs(vector_inner_product(f, f) - 2) < 1e-8
    assert vector_inner_product(VectorSignal.from_signals(h0, z), VectorSignal.from_signals(z, h0)) == 0
    one = VectorSignal.from_signals(h1)
    assert vector_inner_product(one, one) == inner_product(h1, h1)
    assert abs(vector_norm(f) - math.sqrt(2)) < 1e-8


def test_vector_channel_mismatch(tg):
    h0 = hermite_function(0, tg)
    with pytest.raises(ShapeError):
        vector_inner_product(VectorSignal.from_signals(h0), VectorSignal.from_signals(h0, h0))
    with pytest.raises(ShapeError):
        VectorSignal(tg, ())


def test_phase_grid_geometry():
    p = make_phase_grid(6, 256)
    assert p.z.shape == (256, 256)
    assert math.isclose(p.cell_area, (12 / 256) ** 2)
    with pytest.raises(ParameterError):
        PhaseGrid(1.0, 1.0, 1, 4)


def test_gaussian_integral(pg):
    one = GridField(pg, np.ones((pg.nx, pg.nomega)))
    assert abs(phase_quadrature(one, "gaussian") - 1) < 1e-6
    assert phase_quadrature(GridField(pg, np.zeros((pg.nx, pg.nomega))), "gaussian") == 0
    assert abs(phase_quadrature(one, "gaussian_e_minus_pi_z2") - 1) < 1e-6


@pytest.mark.parametrize("m", range(7))
def test_monomials_unit_norm(pg, m):
    assert abs(phase_quadrature(monomial_basis(m, pg).field, "gaussian") - 1) < 1e-4


def test_unknown_weight(pg):
    with pytest.raises(ParameterError):
        phase_quadrature(GridField(pg, np.ones((pg.nx, pg.nomega))), "flat")


def test_phase_inner_mask(pg):
    e1 = monomial_basis(1, pg).field
    full = phase_inner_product(e1, e1, "gaussian")
    m = pg.z.real > 0.3
    parts = phase_inner_product(e1, e1, "gaussian", m) + phase_inner_product(e1, e1, "gaussian", ~m)
    assert abs(parts - full) < 1e-12
    assert abs(phase_inner_product(e1, e1, "gaussian", np.zeros_like(m))) == 0


def test_self_convergence():
    # doubling both resolutions leaves the Fock norm of e_3 unchanged
    a = phase_quadrature(monomial_basis(3, make_phase_grid(6, 128)).field, "gaussian")
    b = phase_quadrature(monomial_basis(3, make_phase_grid(6, 256)).field, "gaussian")
    assert abs(a - b) < 1e-6


def test_signal_csv_round_trip(tmp_path, tg):
    f = hermite_function(3, tg) * (1 + 2j)
    p = tmp_path / "f.csv"
    write_signal_csv(f, p)
    g = read_signal_csv(p)
    assert g.grid == tg
    assert np.array_equal(g.values, f.values)
    coarse = make_time_grid(8, 1024)
    h = read_signal_csv(p, coarse)
    assert np.max(np.abs(h.values - hermite_function(3, coarse).values * (1 + 2j))) < 1e-4


def test_signal_csv_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("time,re,im\n0,1,0\n")
    with pytest.raises(ParameterError):
        read_signal_csv(p)


def test_norm(tg):
    assert abs(norm(hermite_function(5, tg)) - 1) < 1e-10
