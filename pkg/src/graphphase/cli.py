"""Command-line interface: ``graphphase <command> ...``.

Exit codes: 0 success, 2 usage error, 3 parse or input error, 4 numerical or
pipeline failure.  Tolerance, weight, iteration, seed and format defaults can
be set through ``GRAPHPHASE_*`` environment variables; flags take precedence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .cycles import acyclicity_index, extract_cycle_cover
from .errors import (
    DefectiveError,
    GraphPhaseError,
    InvalidArgumentError,
    NumericalError,
    ParseError,
    PerturbationError,
    PreconditionError,
)
from .experiments import run_grid, run_rosace
from .graphs import (
    GraphSignal,
    GridSpec,
    RosaceSpec,
    dump_edge_list,
    dump_signal,
    gen_cycle,
    gen_grid,
    gen_path,
    gen_rosace,
    load_edge_list,
    load_signal,
    signal_planar_wave,
    signal_rosace,
)
from .hilbert import analytic, build_ght, dump_analysis, dump_frequency, instantaneous_frequency
from .perturb import perturb
from .spectral import ToleranceSet, decompose

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4

ENV_PREFIX = "GRAPHPHASE_"

log = logging.getLogger("graphphase")


class UsageError(Exception):
    pass


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"environment variable {ENV_PREFIX}{name}={raw!r} is not a valid {cast.__name__}") from None


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("numerical configuration")
    g.add_argument("--tol-zero", type=float, help="relative threshold for zero eigenvalues (default 1e-8)")
    g.add_argument("--tol-imag", type=float, help="relative threshold for the real axis (default 1e-10)")
    g.add_argument("--tol-collinear", type=float, help="eigenvector collinearity threshold (default 1e-6)")
    g.add_argument("--kappa-max", type=float, help="largest accepted eigenbasis condition number (default 1e8)")
    g.add_argument("--weight", type=float, help="weight of added edges (default 1.0)")
    g.add_argument("--max-iter", type=int, help="perturbation iteration cap (default 2n)")
    g.add_argument("--seed", type=int, help="random seed for generated signals (default 0)")
    g.add_argument("--format", choices=("csv", "json"), help="output format where both apply (default csv)")
    g.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    g.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _config(args) -> argparse.Namespace:
    """Resolve flags, environment and defaults into one namespace."""
    defaults = ToleranceSet()

    def pick(flag, env_name, cast, default):
        return flag if flag is not None else _env(env_name, cast, default)

    try:
        tol = ToleranceSet(
            zero=pick(args.tol_zero, "TOL_ZERO", float, defaults.zero),
            imag=pick(args.tol_imag, "TOL_IMAG", float, defaults.imag),
            collinear=pick(args.tol_collinear, "TOL_COLLINEAR", float, defaults.collinear),
            kappa_max=pick(args.kappa_max, "KAPPA_MAX", float, defaults.kappa_max),
        )
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    weight = pick(args.weight, "WEIGHT", float, 1.0)
    if not weight > 0:
        raise UsageError(f"--weight must be positive, got {weight}")
    max_iter = pick(args.max_iter, "MAX_ITER", int, None)
    if max_iter is not None and max_iter < 0:
        raise UsageError("--max-iter must be non-negative")
    fmt = pick(args.format, "FORMAT", str, "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    seed = pick(args.seed, "SEED", int, 0)
    return argparse.Namespace(tolerances=tol, weight=weight, max_iter=max_iter, format=fmt, seed=seed)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _parse_path(text: str) -> list[int]:
    try:
        nodes = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--path must be comma-separated node indices, got {text!r}") from None
    if len(nodes) < 2:
        raise UsageError("--path needs at least two nodes")
    return nodes


def _load_graph(path: str):
    if path == "-":
        return load_edge_list(sys.stdin)
    return load_edge_list(path)


# ---------------------------------------------------------------- commands


def cmd_gen(args, cfg) -> int:
    if args.kind == "cycle":
        g = gen_cycle(args.n)
    elif args.kind == "path":
        g = gen_path(args.n)
    elif args.kind == "rosace":
        g = gen_rosace(RosaceSpec(args.hubs, args.fan))
    else:
        g = gen_grid(GridSpec(args.rows, args.cols, args.twist))
    _write(args.output, dump_edge_list(g))
    return EXIT_OK


def cmd_signal(args, cfg) -> int:
    if args.kind == "rosace":
        x = signal_rosace(RosaceSpec(args.hubs, args.fan))
    elif args.kind == "planar":
        x = signal_planar_wave(GridSpec(args.rows, args.cols, args.twist), args.direction, args.period)
    elif args.kind == "cosine":
        if args.n < 1:
            raise InvalidArgumentError("--n must be >= 1")
        period = args.period if args.period is not None else args.n
        x = GraphSignal(np.cos(2 * np.pi * np.arange(args.n) / period))
    else:
        if args.n < 1:
            raise InvalidArgumentError("--n must be >= 1")
        x = GraphSignal(np.random.default_rng(cfg.seed).standard_normal(args.n))
    _write(args.output, dump_signal(x))
    return EXIT_OK


def cmd_perturb(args, cfg) -> int:
    g = _load_graph(args.graph)
    res = perturb(g, weight=cfg.weight, tolerances=cfg.tolerances, max_iterations=cfg.max_iter)
    _write(args.output, dump_edge_list(res.perturbed))
    report = _json(res.to_report())
    if args.report:
        _write(args.report, report)
    else:
        sys.stderr.write(report)
    log.info("added %d edges", len(res.added_edges))
    return EXIT_OK


def cmd_spectrum(args, cfg) -> int:
    g = _load_graph(args.graph)
    _write(args.output, _json(decompose(g, cfg.tolerances).to_report()))
    return EXIT_OK


def cmd_analyze(args, cfg) -> int:
    g = _load_graph(args.graph)
    x = load_signal(args.signal, g.n)
    path = _parse_path(args.path) if args.path else None
    if path is not None and args.freq_output is None and args.output == "-" and cfg.format == "csv":
        raise UsageError("with --path and CSV output, give -o or --freq-output so the two tables do not share stdout")
    dec = decompose(g, cfg.tolerances)
    added = []
    if not dec.diagnostics().passed:
        if not args.auto_perturb:
            raise DefectiveError(
                "adjacency is not diagonalizable and invertible; run 'graphphase perturb' "
                "first or pass --auto-perturb"
            )
        res = perturb(g, weight=cfg.weight, tolerances=cfg.tolerances, max_iterations=cfg.max_iter)
        dec, added, g = res.decomposition, res.added_edges, res.perturbed
        log.info("auto-perturb added %d edges", len(added))
    a = analytic(build_ght(dec), x)
    omega = None
    if path is not None:
        if max(path) >= g.n or min(path) < 0:
            raise InvalidArgumentError(f"--path node out of range for {g.n} nodes")
        omega = instantaneous_frequency(a.phase, path, closed=args.closed, graph=g)
    if cfg.format == "json":
        out = {
            "added_edges": [[s, d, w] for s, d, w in added],
            "nodes": [
                {"node": k, "x": float(a.source[k]), "hx": float(a.hilbert[k]),
                 "amplitude": float(a.amplitude[k]), "phase": float(a.phase[k])}
                for k in range(g.n)
            ],
        }
        if omega is not None:
            nxt = path[1:] + path[:1] if args.closed else path[1:]
            out["frequency"] = [
                {"from_node": s, "to_node": d, "omega": float(w)} for s, d, w in zip(path, nxt, omega)
            ]
        _write(args.output, _json(out))
    else:
        _write(args.output, dump_analysis(a))
        if omega is not None:
            _write(args.freq_output or "-", dump_frequency(path, omega, args.closed))
    return EXIT_OK


def _table_csv(table: dict) -> str:
    cols = list(table)
    lines = [",".join(cols)]
    for row in zip(*(table[c] for c in cols)):
        lines.append(",".join(repr(int(v)) if np.issubdtype(type(v), np.integer) else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def cmd_experiment(args, cfg) -> int:
    if args.name == "rosace":
        rep = run_rosace(RosaceSpec(args.hubs, args.fan), cfg.weight, cfg.tolerances)
    else:
        rep = run_grid(GridSpec(args.rows, args.cols, args.twist), args.direction, args.period,
                       cfg.weight, cfg.tolerances)
    if cfg.format == "json":
        _write(args.output, _json(rep.to_dict()))
    else:
        _write(args.output, _table_csv(rep.table))
        if args.series_output:
            series = {k: v for k, v in rep.series.items() if len(v) == len(next(iter(rep.series.values())))}
            _write(args.series_output, _table_csv(series))
    sys.stderr.write(_json({"added_edges": [[s, d, w] for s, d, w in rep.added_edges], **rep.summary}))
    return EXIT_OK


def cmd_cyclecover(args, cfg) -> int:
    g = _load_graph(args.graph)
    idx = acyclicity_index(g)
    cycles = []
    if idx.r == 0:
        cycles = [list(c) for c in extract_cycle_cover(g).cycles]
    _write(args.output, _json({"r": idx.r, "cycles": cycles}))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="graphphase", description="Phase analysis of signals on directed graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a generated graph as an edge list")
    p.add_argument("kind", choices=("cycle", "path", "rosace", "grid"))
    p.add_argument("--n", type=int, default=8, help="node count for cycle/path")
    p.add_argument("--hubs", type=int, default=20)
    p.add_argument("--fan", type=int, default=20)
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--twist", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("signal", parents=[common], help="write a generated signal as node,value CSV")
    p.add_argument("kind", choices=("rosace", "planar", "cosine", "noise"))
    p.add_argument("--n", type=int, default=8, help="length for cosine/noise")
    p.add_argument("--hubs", type=int, default=20)
    p.add_argument("--fan", type=int, default=20)
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--twist", type=int, default=3)
    p.add_argument("--direction", choices=("horizontal", "vertical"), default="horizontal")
    p.add_argument("--period", type=float, default=None)
    p.set_defaults(func=cmd_signal)

    p = sub.add_parser("perturb", parents=[common], help="add edges until the adjacency is diagonalizable and invertible")
    p.add_argument("graph", help="edge-list CSV ('-' for stdin)")
    p.add_argument("--report", help="perturbation report JSON (default: stderr)")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("spectrum", parents=[common], help="spectral report JSON for a graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("analyze", parents=[common], help="Hilbert transform, amplitude and phase of a signal")
    p.add_argument("graph")
    p.add_argument("signal")
    p.add_argument("--auto-perturb", action="store_true", help="perturb a defective graph instead of failing")
    p.add_argument("--path", help="comma-separated nodes for instantaneous frequency")
    p.add_argument("--closed", action="store_true", help="treat --path as a cycle")
    p.add_argument("--freq-output", help="frequency CSV destination (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment", parents=[common], help="run the rosace or grid experiment")
    p.add_argument("name", choices=("rosace", "grid"))
    p.add_argument("--hubs", type=int, default=20)
    p.add_argument("--fan", type=int, default=20)
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--twist", type=int, default=3)
    p.add_argument("--direction", choices=("horizontal", "vertical"), default="horizontal")
    p.add_argument("--period", type=float, default=None)
    p.add_argument("--series-output", help="CSV for the hub-cycle or increment series")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("cyclecover", parents=[common], help="acyclicity index and a disjoint cycle cover")
    p.add_argument("graph")
    p.set_defaults(func=cmd_cyclecover)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"graphphase: error: {exc}\n")
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        sys.stderr.write(f"graphphase: error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write(f"graphphase: parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        sys.stderr.write(f"graphphase: cannot read or write: {exc}\n")
        return EXIT_PARSE
    except PerturbationError as exc:
        sys.stderr.write(f"graphphase: perturbation failed: {exc}\n")
        sys.stderr.write(_json({"error": str(exc), "trace": exc.trace}))
        return EXIT_NUMERICAL
    except (DefectiveError, PreconditionError, NumericalError, GraphPhaseError) as exc:
        sys.stderr.write(f"graphphase: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
