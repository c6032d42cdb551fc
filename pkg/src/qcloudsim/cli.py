"""``qcloudsim`` command line: run experiments, fit and plot records,
calibrate backends and inspect topologies."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .backends import CONFIG_ENV, ConfigError, dumps_backend, load_backend
from .bench import (EXPERIMENTS, Experiment, FitError, default_grid, fit_gaussian, fit_linear_first4,
                    gaussian_model, read_records, record_points, sweep, write_records)
from .topology import PRESETS, TopologyError, bfs_distances, load_topology, max_degree, preset

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[int]:
    """``"0..10"``, ``"2..60:2"`` (inclusive, with step) or ``"1,2,5"``."""
    text = text.strip()
    try:
        if ".." in text:
            span, _, step = text.partition(":")
            a, b = span.split("..")
            step_n = int(step) if step else 1
            if step_n < 1:
                raise ValueError
            return list(range(int(a), int(b) + 1, step_n))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}; use A..B, A..B:STEP or a comma list") from None


def _backend(args):
    try:
        return load_backend(args.backend, args.config_dir)
    except ConfigError as e:
        if "unknown backend" in str(e):
            raise UsageError(str(e)) from None
        raise


def cmd_run(args) -> int:
    passes = None
    if args.passes is not None:
        passes = tuple(p.strip() for p in args.passes.split(",") if p.strip())
    experiment = Experiment(args.experiment, n=args.n, passes=passes,
                            strings_per_weight=args.strings_per_weight)
    backend = _backend(args)
    grid_text = args.grid or args.weights
    grid = parse_grid(grid_text) if grid_text else default_grid(args.experiment, args.n)
    records = sweep(experiment, grid, backend, args.shots, args.seed, workers=args.workers)
    if args.output:
        write_records(records, args.output)
    else:
        for r in records:
            print(r.to_json())
    return EXIT_OK


def _load(path) -> list:
    records = read_records(path)
    if not records:
        raise FitError(f"{path}: no records")
    return records


def _fit(records, model: str):
    points = record_points(records)
    return fit_gaussian(points) if model == "gaussian" else fit_linear_first4(points)


def cmd_fit(args) -> int:
    records = _load(args.records)
    if len({r.experiment for r in records}) > 1 or len({r.backend for r in records}) > 1:
        raise FitError("records mix experiments or backends; fit one series at a time")
    result = _fit(records, args.model)
    names = ("d0", "amplitude") if result.model == "gaussian" else ("intercept", "slope")
    print(json.dumps({"backend": records[0].backend, "experiment": records[0].experiment,
                      "model": result.model, **dict(zip(names, result.params)),
                      "residual": result.residual}))
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plot import write_svg

    records = _load(args.records)
    curve = None
    if args.fit:
        result = _fit(records, args.fit)
        if result.model == "gaussian":
            d0, amp = result.params
            curve = lambda x: float(gaussian_model(x, d0, amp))  # noqa: E731
        else:
            b0, b1 = result.params
            curve = lambda x: b0 + b1 * x  # noqa: E731
    write_svg(records, args.output, title=args.title or "", curve=curve)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    from .calibration import PUBLISHED_TARGETS, CalibrationTargets, calibrate_backend

    backend = _backend(args)
    targets = PUBLISHED_TARGETS.get(backend.name)
    if args.slope is not None:
        targets = CalibrationTargets(args.slope, args.intercept, args.d0,
                                     targets.sigma_bracket if targets else (0.0, 0.1))
    if targets is None:
        raise UsageError(f"no built-in targets for {backend.name}; pass --slope")
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    tuned = calibrate_backend(backend, targets, shots=args.shots, seed=args.seed, log=log)
    text = dumps_backend(tuned)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_topology_info(args) -> int:
    g = load_topology(args.topology) if Path(args.topology).is_file() else preset(args.topology)
    degrees = [g.degree(v) for v in range(g.n)]
    hub = degrees.index(max(degrees))
    diameter = max(max(bfs_distances(g, v).values()) for v in range(g.n))
    print(f"name {g.name}")
    print(f"qubits {g.n}")
    print(f"edges {len(g.edges)}")
    print(f"max_degree {max_degree(g)} (vertex {hub})")
    print(f"diameter {diameter}")
    if args.edges:
        for a, b in sorted(g.edges):
            print(f"edge {a} {b}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcloudsim", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config-dir", type=Path, default=None,
                   help=f"backend config directory (default: ${CONFIG_ENV} or the bundled presets)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment sweep and write records")
    r.add_argument("experiment", choices=EXPERIMENTS)
    r.add_argument("--backend", required=True)
    r.add_argument("--shots", type=int, default=1024)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--grid", help="parameter grid: A..B, A..B:STEP or a comma list")
    r.add_argument("--weights", help="alias of --grid for bv Hamming weights")
    r.add_argument("--n", type=int, default=4, help="bv data qubits")
    r.add_argument("--strings-per-weight", type=int, default=1,
                   help="bv: average over this many random hidden strings per weight")
    r.add_argument("--passes", help="comma-separated transpiler passes (empty for decomposition only)")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--output", "-o")
    r.set_defaults(func=cmd_run)

    f = sub.add_parser("fit", help="fit a record file")
    f.add_argument("records")
    f.add_argument("--model", choices=("gaussian", "linear"), required=True)
    f.set_defaults(func=cmd_fit)

    pl = sub.add_parser("plot", help="render records as an SVG scatter")
    pl.add_argument("records")
    pl.add_argument("--output", "-o", required=True)
    pl.add_argument("--fit", choices=("gaussian", "linear"))
    pl.add_argument("--title")
    pl.set_defaults(func=cmd_plot)

    c = sub.add_parser("calibrate", help="fit p2 and sigma of a backend to its published figures")
    c.add_argument("--backend", required=True)
    c.add_argument("--slope", type=float, help="target success lost per SWAP")
    c.add_argument("--intercept", type=float)
    c.add_argument("--d0", type=float, help="target CNOT-chain Gaussian decay depth")
    c.add_argument("--shots", type=int, default=8192)
    c.add_argument("--seed", type=int, default=2021)
    c.add_argument("--output", "-o", help="write the calibrated config here")
    c.add_argument("--verbose", "-v", action="store_true")
    c.set_defaults(func=cmd_calibrate)

    t = sub.add_parser("topology-info", help="summarize a topology preset or file")
    t.add_argument("topology", help=f"preset ({', '.join(PRESETS)}) or file path")
    t.add_argument("--edges", action="store_true")
    t.set_defaults(func=cmd_topology_info)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config_dir is None and os.environ.get(CONFIG_ENV):
        args.config_dir = Path(os.environ[CONFIG_ENV])
    try:
        if args.command == "run" and args.shots < 1:
            raise UsageError("--shots must be >= 1")
        return args.func(args)
    except UsageError as e:
        print(f"qcloudsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, TopologyError, FitError, ValueError, OSError) as e:
        print(f"qcloudsim: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
