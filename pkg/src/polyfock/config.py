"""Experiment configuration: flat ``key = value`` lines grouped in ``[sections]``.

Blank lines and lines starting with ``#`` or ``;`` are ignored.  Every key is
declared in :data:`SCHEMA`; unknown sections or keys, malformed values and
missing required keys raise :class:`ConfigError` with a ``path:line:``
prefix.  ``docs/config_schema.md`` documents the same schema.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ParameterError
from .lattice import Lattice2D, lattice_from_matrix, rect_lattice, square_lattice, square_of_density
from .rng import DEFAULT_SEED

REQUIRED = object()


class ConfigError(ParameterError):
    pass


def _floats(s: str) -> tuple:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _strings(s: str) -> tuple:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def parse_lattice(s: str) -> Lattice2D:
    """``density:D`` | ``square:a`` | ``rect:a,b`` | ``matrix:a11,a12,a21,a22``."""
    kind, _, arg = s.partition(":")
    vals = _floats(arg)
    if kind == "density" and len(vals) == 1:
        return square_of_density(vals[0])
    if kind == "square" and len(vals) == 1:
        return square_lattice(vals[0])
    if kind == "rect" and len(vals) == 2:
        return rect_lattice(*vals)
    if kind == "matrix" and len(vals) == 4:
        return lattice_from_matrix([[vals[0], vals[1]], [vals[2], vals[3]]])
    raise ValueError(f"bad lattice specifier {s!r}")


def _radii(s: str) -> tuple:
    r = _floats(s)
    if len(r) < 3:
        raise ValueError(f"radii schedule needs at least three entries, got {len(r)}")
    if any(b <= a for a, b in zip(r, r[1:])) or r[0] <= 0:
        raise ValueError("radii must be positive and strictly increasing")
    return r


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise ValueError(f"expected a positive integer, got {v}")
    return v


def _choice(*options):
    def parse(s):
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return s
    return parse


def _transform(s: str) -> str:
    if s in ("bargmann", "poly") or (s.startswith("true_poly:") and s[10:].isdigit()):
        return s
    raise ValueError(f"expected bargmann, poly or true_poly:<n>, got {s!r}")


# section -> key -> (parser, default)
SCHEMA = {
    "run": {"seed": (int, DEFAULT_SEED)},
    "grid": {"T": (float, 8.0), "N": (int, 4096), "X": (float, 6.0), "nx": (int, 256),
             "Omega": (float, None), "nomega": (int, None)},
    "transform": {"input": (_strings, REQUIRED), "transform": (_transform, REQUIRED),
                  "output": (str, "transform.csv")},
    "frames": {"kind": (_choice("scalar", "super", "multi_union"), "super"),
               "windows": (_strings, REQUIRED), "lattice": (parse_lattice, REQUIRED),
               "mode": (_choice("frame", "riesz"), "frame"), "radii": (_radii, (8.0, 10.0, 12.0)),
               "probe_count": (_positive_int, 16), "margin": (float, 3.0),
               "T": (float, 16.0), "N": (int, 2048), "output": (str, "bounds")},
    "sweep": {"n": (int, REQUIRED), "densities": (_floats, REQUIRED),
              "mode": (_choice("sampling", "interpolation", "superframe", "riesz", "true_space"),
                       REQUIRED),
              "radii": (_radii, (8.0, 10.0, 12.0)), "margin": (float, 3.0),
              "interpolation_radius": (float, 10.0), "draws": (_positive_int, 32),
              "output": (str, "sweep.csv")},
    "mux": {"n": (_positive_int, REQUIRED), "lattice": (parse_lattice, REQUIRED),
            "radius": (float, 10.0), "noise_sigmas": (_floats, (0.0,)),
            "regularization": (float, 1e-10), "max_order": (int, 8),
            "channels": (_strings, None), "T": (float, 16.0), "N": (int, 2048),
            "output": (str, "mux")},
    "verify": {"suite": (_choice("fast", "full"), "fast")},
}


@dataclass
class Config:
    path: str
    values: dict           # section -> key -> parsed value
    lines: dict            # (section, key) -> line number; (section, None) -> header line

    def section(self, name: str) -> dict:
        return self.values.get(name, {})

    def require(self, name: str, command: str) -> dict:
        """Parsed section with defaults filled in; missing required keys raise."""
        given = self.values.get(name, {})
        anchor = self.lines.get((name, None), 1)
        out = {}
        for key, (_, default) in SCHEMA[name].items():
            if key in given:
                out[key] = given[key]
            elif default is REQUIRED:
                where = f"[{name}]" if (name, None) in self.lines else f"[{name}] (section absent)"
                raise ConfigError(f"{self.path}:{anchor}: missing required key '{key}' in {where} "
                                  f"for command {command}")
            else:
                out[key] = default
        return out


def parse_config_text(text: str, path: str = "<config>") -> Config:
    values: dict = {}
    lines: dict = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{path}:{no}: malformed section header {line!r}")
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"{path}:{no}: unknown section [{section}]; "
                                  f"expected one of {', '.join(SCHEMA)}")
            if (section, None) in lines:
                raise ConfigError(f"{path}:{no}: duplicate section [{section}]")
            lines[(section, None)] = no
            values.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected 'key = value', got {line!r}")
        if section is None:
            raise ConfigError(f"{path}:{no}: key outside any section")
        key, _, val = (p.strip() for p in line.partition("="))
        if key not in SCHEMA[section]:
            raise ConfigError(f"{path}:{no}: unknown key '{key}' in [{section}]")
        if key in values[section]:
            raise ConfigError(f"{path}:{no}: duplicate key '{key}' in [{section}]")
        parser = SCHEMA[section][key][0]
        try:
            values[section][key] = parser(val)
        except (ValueError, ParameterError) as exc:
            raise ConfigError(f"{path}:{no}: bad value for '{key}' in [{section}]: {exc}") from None
        lines[(section, key)] = no
    return Config(path, values, lines)


def load_config(path) -> Config:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}:0: cannot read config: {exc.strerror}") from None
    return parse_config_text(text, str(p))


def empty_config() -> Config:
    return Config("<defaults>", {}, {})
