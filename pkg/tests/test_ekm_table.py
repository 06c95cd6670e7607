import math

import numpy as np
import pytest

from polyfock import ekm_table
from polyfock.errors import CapabilityError, ParameterError


def test_shipped_table_matches_symbolic():
    derived = ekm_table.derive_table()
    shipped = ekm_table.load_table(ekm_table.DEFAULT_PATH)
    assert set(derived) == set(shipped)
    for key, terms in derived.items():
        assert set(terms) == set(shipped[key])
        for mon, c in terms.items():
            assert abs(shipped[key][mon] - c) <= 1e-14 * max(1.0, abs(c))


def test_header_versioned():
    first = ekm_table.DEFAULT_PATH.read_text().splitlines()[0]
    assert first.startswith(f"# ekm_coeffs v{ekm_table.TABLE_VERSION}")


def test_k0_is_monomial():
    z = np.array([0.3 + 0.1j, -1.2j, 2.0])
    for m in range(ekm_table.MAX_M + 1):
        ref = math.sqrt(math.pi ** m / math.factorial(m)) * z ** m
        assert np.allclose(ekm_table.evaluate(0, m, z), ref, rtol=1e-13, atol=0)


def test_e10():
    # e_{1,0} = -sqrt(pi) conj(z)
    z = np.array([0.5 - 0.25j, 1.0 + 1.0j])
    assert np.allclose(ekm_table.evaluate(1, 0, z), -math.sqrt(math.pi) * np.conj(z), rtol=1e-14)


def test_capability_and_range():
    with pytest.raises(CapabilityError):
        ekm_table.coefficients(ekm_table.MAX_K + 1, 0)
    with pytest.raises(CapabilityError):
        ekm_table.coefficients(0, ekm_table.MAX_M + 1)
    with pytest.raises(ParameterError):
        ekm_table.coefficients(-1, 0)


def test_bad_columns(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# x\nk,m,i,j,value\n0,0,0,0,1\n")
    with pytest.raises(ParameterError):
        ekm_table.load_table(p)


def test_missing_entry(tmp_path):
    p = tmp_path / "partial.csv"
    p.write_text("k,m,i,j,re,im\n0,0,0,0,1.0,0.0\n")
    with pytest.raises(ParameterError):
        ekm_table.coefficients(1, 1, p)


def test_env_override(tmp_path, monkeypatch):
    p = tmp_path / "t.csv"
    ekm_table.write_table(p, {(0, 0): {(0, 0): 2.0}})
    monkeypatch.setenv(ekm_table.ENV_VAR, str(p))
    assert ekm_table.table_path() == p
    assert ekm_table.evaluate(0, 0, np.array([1.0]))[0] == 2.0
