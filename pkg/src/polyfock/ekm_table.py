"""Coefficient table for the true polyanalytic basis ``e_{k,m}``.

``e_{k,m}(z) = sum_{i,j} c[k,m,i,j] z^i conj(z)^j`` for ``k <= 4, m <= 8``.
The shipped asset ``data/ekm_coeffs.csv`` was produced by
:func:`derive_table`, which expands the defining Wirtinger derivative
symbolically (sympy).  Runtime evaluation only reads the CSV.
"""
from __future__ import annotations

import csv
import os
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import CapabilityError, ParameterError

TABLE_VERSION = 1
MAX_K = 4
MAX_M = 8
DEFAULT_PATH = Path(__file__).with_name("data") / "ekm_coeffs.csv"
ENV_VAR = "POLYFOCK_EKM_TABLE"


def table_path() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_PATH))


def derive_table(max_k: int = MAX_K, max_m: int = MAX_M):
    """Symbolic expansion; returns ``{(k, m): {(i, j): float}}``."""
    import sympy as sp

    z, zb = sp.symbols("z zb")
    out = {}
    for k in range(max_k + 1):
        for m in range(max_m + 1):
            em = sp.sqrt(sp.pi ** m / sp.factorial(m)) * z ** m
            expr = sp.exp(sp.pi * z * zb) * sp.diff(sp.exp(-sp.pi * z * zb) * em, z, k)
            expr = sp.expand(sp.simplify(expr / sp.sqrt(sp.pi ** k * sp.factorial(k))))
            poly = sp.Poly(expr, z, zb)
            out[(k, m)] = {mon: float(sp.N(c, 30)) for mon, c in poly.terms()}
    return out


def write_table(path=DEFAULT_PATH, table=None) -> None:
    table = derive_table() if table is None else table
    with open(path, "w", newline="") as fh:
        fh.write(f"# ekm_coeffs v{TABLE_VERSION}: coefficient of z^i conj(z)^j in e_(k,m)\n")
        w = csv.writer(fh)
        w.writerow(["k", "m", "i", "j", "re", "im"])
        for (k, m), terms in sorted(table.items()):
            for (i, j), c in sorted(terms.items()):
                w.writerow([k, m, i, j, repr(float(c)), "0.0"])


@lru_cache(maxsize=4)
def _load(path: str):
    table = {}
    with open(path, newline="") as fh:
        rows = [r for r in fh if not r.startswith("#")]
    reader = csv.DictReader(rows)
    if reader.fieldnames != ["k", "m", "i", "j", "re", "im"]:
        raise ParameterError(f"{path}: unexpected columns {reader.fieldnames}")
    for r in reader:
        key = (int(r["k"]), int(r["m"]))
        table.setdefault(key, {})[(int(r["i"]), int(r["j"]))] = complex(float(r["re"]), float(r["im"]))
    return table


def load_table(path=None):
    return _load(str(table_path() if path is None else path))


def coefficients(k: int, m: int, path=None) -> dict:
    if k < 0 or m < 0:
        raise ParameterError("k and m must be non-negative")
    if k > MAX_K or m > MAX_M:
        raise CapabilityError(f"e_(k,m) table covers k <= {MAX_K}, m <= {MAX_M}; got ({k}, {m})")
    table = load_table(path)
    if (k, m) not in table:
        raise ParameterError(f"coefficient table is missing e_({k},{m})")
    return table[(k, m)]


def evaluate(k: int, m: int, z, path=None) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    out = np.zeros_like(z)
    for (i, j), c in coefficients(k, m, path).items():
        out = out + c * z ** i * zb ** j
    return out
