"""Command-line front end: ``polyfock {transform,frame-bounds,sweep,mux,verify}``.

Exit codes: 0 success, 1 verification failure, 2 configuration or parameter
error, 3 capacity error.  Output files are written to ``--out`` through a
temporary file and an atomic rename.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from contextlib import contextmanager
from pathlib import Path

from .bargmann import CONVENTION_NOTE, RAW, bargmann_transform, poly_bargmann, true_poly_bargmann
from .checks import run_suite
from .config import Config, ConfigError, empty_config, load_config
from .errors import CapabilityError, CapacityError, ParameterError, ShapeError
from .frames import GaborSystemSpec, estimate_frame_bounds, estimate_riesz_bounds
from .gabor import write_field_csv
from .grid import TimeGrid, VectorSignal, make_phase_grid, make_time_grid
from .multiplex import hermite_band_signal, mux_encode, mux_report, snr_csv, write_stream_csv
from .nyquist import SweepConfig, density_sweep, sweep_csv, true_space_scan
from .windows import parse_window

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_CAPACITY = 0, 1, 2, 3


@contextmanager
def atomic_path(path: Path):
    """Yield a temporary sibling of ``path``; rename it into place on success."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        yield Path(tmp)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_text(path: Path, text: str) -> None:
    with atomic_path(path) as tmp:
        tmp.write_text(text)


def _seed(args, cfg: Config) -> int:
    if args.seed is not None:
        return args.seed
    return cfg.require("run", "run")["seed"]


# -- commands ---------------------------------------------------------------

def cmd_transform(cfg: Config, seed: int, out: Path) -> int:
    sec = cfg.require("transform", "transform")
    g = cfg.require("grid", "transform")
    tg = make_time_grid(g["T"], g["N"])
    pg = make_phase_grid(g["X"], g["nx"], g["Omega"], g["nomega"])
    signals = [parse_window(s).sample(tg) for s in sec["input"]]
    kind = sec["transform"]
    if kind == "poly":
        F = poly_bargmann(VectorSignal(tg, tuple(signals)), pg)
    else:
        if len(signals) != 1:
            raise ConfigError(f"{cfg.path}:{cfg.lines[('transform', 'input')]}: "
                              f"transform {kind} takes exactly one input")
        if kind == "bargmann":
            F = bargmann_transform(signals[0], pg)
        else:
            F = true_poly_bargmann(signals[0], int(kind.split(":")[1]), pg)
    header = [CONVENTION_NOTE, f"norm_tag: {RAW}", f"transform: {kind}",
              f"input: {','.join(sec['input'])}", f"seed: {seed}"]
    path = out / sec["output"]
    with atomic_path(path) as tmp:
        write_field_csv(F.to_raw().field, tmp, header)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_frame_bounds(cfg: Config, seed: int, out: Path) -> int:
    sec = cfg.require("frames", "frame-bounds")
    spec = GaborSystemSpec(sec["kind"], sec["windows"], sec["lattice"])
    grid = TimeGrid(sec["T"], sec["N"])
    if sec["mode"] == "frame":
        rep = estimate_frame_bounds(spec, sec["radii"], grid, sec["probe_count"], seed, sec["margin"])
    else:
        rep = estimate_riesz_bounds(spec, sec["radii"], grid, seed)
    write_text(out / f"{sec['output']}.json", rep.to_json() + "\n")
    write_text(out / f"{sec['output']}.csv", "\n".join(rep.csv_rows()) + "\n")
    print(f"verdict: {rep.verdict}")
    return EXIT_OK


def cmd_sweep(cfg: Config, seed: int, out: Path) -> int:
    sec = cfg.require("sweep", "sweep")
    sc = SweepConfig(radii=sec["radii"], margin=sec["margin"],
                     interpolation_radius=sec["interpolation_radius"], draws=sec["draws"], seed=seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if sec["mode"] == "true_space":
            rows = true_space_scan(sec["n"], sec["densities"], sc)
        else:
            rows = density_sweep(sec["n"], sec["densities"], sec["mode"], sc)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    path = out / sec["output"]
    write_text(path, sweep_csv(rows))
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def cmd_mux(cfg: Config, seed: int, out: Path) -> int:
    sec = cfg.require("mux", "mux")
    grid = TimeGrid(sec["T"], sec["N"])
    if sec["channels"]:
        if len(sec["channels"]) != sec["n"]:
            raise ConfigError(f"{cfg.path}:{cfg.lines[('mux', 'channels')]}: "
                              f"{len(sec['channels'])} channels listed but n = {sec['n']}")
        f = VectorSignal(grid, tuple(parse_window(s).sample(grid) for s in sec["channels"]))
    else:
        f = hermite_band_signal(sec["n"], grid, seed, sec["max_order"])
    L, R = sec["lattice"], sec["radius"]
    stream = mux_encode(f, L, R)
    with atomic_path(out / f"{sec['output']}_stream.csv") as tmp:
        write_stream_csv(stream, tmp)
    summary = []
    for i, sigma in enumerate(sec["noise_sigmas"]):
        rep = mux_report(f, L, R, sigma, seed, sec["regularization"])
        write_text(out / f"{sec['output']}_snr_{i}.csv", snr_csv(rep["snr_db"]))
        summary.append(rep)
        print(f"sigma={sigma!r}: snr_db={[round(v, 2) for v in rep['snr_db']]} flags={rep['flags']}")
    write_text(out / f"{sec['output']}_report.json",
               json.dumps({"runs": summary, "points": len(stream)}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(suite: str, seed: int, out: Path | None) -> int:
    results = run_suite(suite, seed)
    failed = [r.name for r in results if not r.passed]
    report = {"suite": suite, "seed": seed, "passed": not failed, "failed": failed,
              "checks": [r.to_dict() for r in results]}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is not None:
        write_text(out / f"verify_{suite}.json", text)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.value:.3g} (threshold {r.threshold:g})")
    return EXIT_VERIFY if failed else EXIT_OK


# -- entry point ------------------------------------------------------------

COMMANDS = {"transform": cmd_transform, "frame-bounds": cmd_frame_bounds,
            "sweep": cmd_sweep, "mux": cmd_mux}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyfock", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=[*COMMANDS, "verify"])
    p.add_argument("--config", help="experiment config file")
    p.add_argument("--seed", type=int, help="64-bit seed; overrides [run] seed")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--suite", choices=["fast", "full"], help="verification suite")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        cfg = load_config(args.config) if args.config else empty_config()
        seed = _seed(args, cfg)
        if args.command == "verify":
            suite = args.suite or cfg.require("verify", "verify")["suite"]
            return cmd_verify(suite, seed, out)
        if not args.config:
            raise ConfigError(f"<command line>:0: command {args.command} needs --config")
        return COMMANDS[args.command](cfg, seed, out)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, ParameterError, ShapeError, CapabilityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
