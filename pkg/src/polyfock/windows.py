"""Window specifiers: ``gaussian``, ``hermite:<n>`` and ``csv:<path>``.

A window is kept as a callable rather than a sample vector so that lattice
shifts that do not land on grid nodes are evaluated exactly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ParameterError
from .grid import Signal, TimeGrid
from .hermite import MAX_ORDER, hermite_values


@dataclass(frozen=True)
class Window:
    name: str
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    def sample(self, grid: TimeGrid) -> Signal:
        return Signal(grid, self(grid.nodes))


def hermite_window(n: int) -> Window:
    return Window(f"hermite:{n}", lambda t, n=n: hermite_values(n, t).astype(complex))


def _csv_window(path: str) -> Window:
    p = Path(path)
    if not p.exists():
        raise ParameterError(f"window file not found: {p}")
    with p.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["t", "re", "im"]:
            raise ParameterError(f"{p}: expected header 't,re,im', got {header}")
        rows = np.array([[float(x) for x in row] for row in reader if row])
    t, re, im = rows.T

    def f(s):
        return (np.interp(s, t, re, left=0.0, right=0.0)
                + 1j * np.interp(s, t, im, left=0.0, right=0.0))

    return Window(f"csv:{path}", f)


def parse_window(spec: str, max_order: int = MAX_ORDER) -> Window:
    spec = spec.strip()
    if spec == "gaussian":
        return Window("gaussian", hermite_window(0).func)
    if spec.startswith("hermite:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ParameterError(f"bad Hermite window specifier {spec!r}") from None
        if n < 0 or n > max_order:
            raise ParameterError(f"Hermite window order {n} outside [0, {max_order}]")
        return hermite_window(n)
    if spec.startswith("csv:"):
        return _csv_window(spec[4:])
    raise ParameterError(f"unknown window specifier {spec!r}")


def hermite_windows(n: int) -> list[Window]:
    return [hermite_window(k) for k in range(n)]
