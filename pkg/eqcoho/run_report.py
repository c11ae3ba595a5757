"""
Command-line entry point.

Usage:
    python run_report.py report --n 6 --p 3 [--json] [--force]
    python run_report.py sweep --max-n 10 [--json] [--force] [--out table.csv] [--timings] [--workers 4]
    python run_report.py e2 --n 5 --p 5 --cols 4 [--render ascii|tikz]
    python run_report.py lyndon --length 5 [--by-blocks] [--json]
    python run_report.py betti --n 5 --p 2 [--json]
    python run_report.py module-cohomology --file module.json --degrees 0..5 [--json]
    python run_report.py example --name sigma-g --n 6 --p 3 [--json]
    python run_report.py example --name wedge-swap [--json]

Exit codes: 0 success, 2 usage or domain error, 3 internal assertion.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Any, Optional, Sequence

import config
from combinatorics.lyndon import (
    lyndon_blocks,
    lyndon_count,
    lyndon_plus_count,
    lyndon_words,
    zero_block_histogram,
)
from complexes.moment_angle import betti_numbers, build_complex, polygon_complex, polygon_genus_formula
from errors import EXIT_OK, EXIT_USAGE, ArgumentError, EqcohoError
from groups.cyclic_rep import (
    group_cohomology_dim,
    module_from_json,
    thm32_hypotheses,
    weighted_sum_observation,
)
from reports.render import (
    example_to_dict,
    render_e2_ascii,
    render_e2_tikz,
    render_example_text,
    render_report_text,
    render_sweep_text,
    report_to_dict,
    sweep_to_dict,
    to_json,
    write_sweep_csv,
)
from spectral.examples import EXAMPLE_NAMES, sigma_g_pipeline, wedge_swap_pipeline
from spectral.polygon import build_polygon_report, polygon_e2_page, sweep
from utils.run_monitor import analysis_run

log = logging.getLogger(__name__)

_DEGREES = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_degrees(text: str) -> range:
    match = _DEGREES.match(text)
    if not match:
        raise ArgumentError(f"degrees must look like A..B, got {text!r}")
    low, high = int(match.group(1)), int(match.group(2))
    if low > high:
        raise ArgumentError(f"empty degree range {text!r}")
    return range(low, high + 1)


# ── subcommands ────────────────────────────────────────────


def cmd_report(args: argparse.Namespace) -> int:
    with analysis_run("polygon_report", n=args.n, p=args.p) as run:
        report = build_polygon_report(args.n, args.p, force=args.force)
        run.cells_processed = report.cell_count
    print(to_json(report_to_dict(report)) if args.json else render_report_text(report))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    result = sweep(args.max_n, workers=args.workers, force=args.force)
    if args.out:
        write_sweep_csv(result, args.out)
        log.info("sweep table written to %s", args.out)
    if args.json:
        print(to_json(sweep_to_dict(result, timings=args.timings)))
    else:
        print(render_sweep_text(result, timings=args.timings))
    return result.exit_code


def cmd_e2(args: argparse.Namespace) -> int:
    if args.cols < 1:
        raise ArgumentError(f"--cols must be >= 1, got {args.cols}")
    page = polygon_e2_page(args.n, args.p, window=args.cols, force=args.force)
    grid = page.grid(args.cols)
    if args.render == "tikz":
        print(render_e2_tikz(grid, caption=f"$n={args.n},\\ p={args.p}$"))
    else:
        print(render_e2_ascii(grid))
    return EXIT_OK


def cmd_lyndon(args: argparse.Namespace) -> int:
    d = args.length
    table = lyndon_words(d)
    data: dict[str, Any] = {
        "length": d,
        "total": len(table),
        "lyndon_count": lyndon_count(d),
        "words": table.as_strings(),
        "single_block": lyndon_blocks(d, 1),
        "lyndon_plus": lyndon_plus_count(d),
    }
    if args.by_blocks:
        data["blocks"] = zero_block_histogram(d)
    if args.json:
        print(to_json(data))
        return EXIT_OK
    print(f"Lyndon words of length {d}: {data['total']}")
    print("  " + " ".join(data["words"]))
    print(f"  L({d},1)={data['single_block']}  l_{d}-L({d},1)={data['lyndon_plus']}")
    if args.by_blocks:
        for blocks, count in data["blocks"].items():
            print(f"  {blocks} zero-block(s): {count}")
    return EXIT_OK


def cmd_betti(args: argparse.Namespace) -> int:
    C = build_complex(polygon_complex(args.n), args.p)
    betti = betti_numbers(C)
    data = {
        "n": args.n,
        "p": args.p,
        "betti": list(betti),
        "genus": betti[1] // 2,
        "genus_formula": polygon_genus_formula(args.n),
        "euler_characteristic": C.euler_characteristic(),
        "cells": list(C.cell_counts),
    }
    if args.json:
        print(to_json(data))
    else:
        print(f"betti (n={args.n}, p={args.p}): {tuple(betti)}  genus={data['genus']}  cells={tuple(C.cell_counts)}")
    return EXIT_OK


def cmd_module_cohomology(args: argparse.Namespace) -> int:
    degrees = parse_degrees(args.degrees)
    try:
        with open(args.file, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON in {args.file}: line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(raw, dict):
        raise ArgumentError("module JSON must be an object")
    module = module_from_json(raw)
    hypotheses = thm32_hypotheses(module)
    data = {
        "n": module.n,
        "p": module.p,
        "dim": module.dim,
        "semisimple": module.semisimple,
        "cohomology": {str(k): group_cohomology_dim(module, k) for k in degrees},
        "thm32_hypotheses": {
            "norm_zero": hypotheses.norm_zero,
            "kernel_in_image": hypotheses.kernel_in_image,
        },
        "weighted_sum_observation": weighted_sum_observation(module),
    }
    if args.json:
        print(to_json(data))
        return EXIT_OK
    print(f"module n={module.n} p={module.p} dim={module.dim}" + (" (semisimple regime)" if module.semisimple else ""))
    for k, value in data["cohomology"].items():
        print(f"  H^{k} = {value}")
    print(f"  norm_zero={hypotheses.norm_zero} kernel_in_image={hypotheses.kernel_in_image}")
    obs = data["weighted_sum_observation"]
    print(f"  weighted sum: rank {obs['rank']} from dim {obs['source_dim']} to dim {obs['target_dim']}"
          f" (iso={obs['weighted_sum_iso']})")
    return EXIT_OK


def cmd_example(args: argparse.Namespace) -> int:
    if args.name == "sigma-g":
        if args.n is None or args.p is None:
            raise ArgumentError("example sigma-g needs --n and --p")
        report = sigma_g_pipeline(args.n, args.p)
    else:
        report = wedge_swap_pipeline()
    print(to_json(example_to_dict(report)) if args.json else render_example_text(report))
    return EXIT_OK


# ── parser ─────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Equivariant formality and P_G-freeness for cyclic actions")
    sub = parser.add_subparsers(dest="command", required=True)

    report = sub.add_parser("report", help="Full verdict bundle for one polygon (n, p)")
    report.add_argument("--n", type=int, required=True)
    report.add_argument("--p", type=int, required=True)
    report.add_argument("--json", action="store_true")
    report.add_argument("--force", action="store_true", help="Ignore the EQCOHO_MAX_N size guard")
    report.set_defaults(handler=cmd_report)

    sweep_p = sub.add_parser("sweep", help="Verdict table for every 3 <= n <= max-n, p | n")
    sweep_p.add_argument("--max-n", type=int, required=True)
    sweep_p.add_argument("--json", action="store_true")
    sweep_p.add_argument("--force", action="store_true")
    sweep_p.add_argument("--out", help="Also write the verdict table as CSV")
    sweep_p.add_argument("--timings", action="store_true", help="Include per-pair elapsed seconds")
    sweep_p.add_argument("--workers", type=int, default=None, help=f"Process pool size (default {config.WORKERS})")
    sweep_p.set_defaults(handler=cmd_sweep)

    e2 = sub.add_parser("e2", help="E2 chart of a polygon action")
    e2.add_argument("--n", type=int, required=True)
    e2.add_argument("--p", type=int, required=True)
    e2.add_argument("--cols", type=int, default=config.DEFAULT_WINDOW)
    e2.add_argument("--render", choices=["ascii", "tikz"], default="ascii")
    e2.add_argument("--force", action="store_true")
    e2.set_defaults(handler=cmd_e2)

    lyndon = sub.add_parser("lyndon", help="Binary Lyndon words of one length")
    lyndon.add_argument("--length", type=int, required=True)
    lyndon.add_argument("--by-blocks", action="store_true")
    lyndon.add_argument("--json", action="store_true")
    lyndon.set_defaults(handler=cmd_lyndon)

    betti = sub.add_parser("betti", help="Betti numbers of the polygon polyhedral product")
    betti.add_argument("--n", type=int, required=True)
    betti.add_argument("--p", type=int, required=True)
    betti.add_argument("--json", action="store_true")
    betti.set_defaults(handler=cmd_betti)

    module = sub.add_parser("module-cohomology", help="H^k(C_n; M) for a module given as JSON")
    module.add_argument("--file", required=True)
    module.add_argument("--degrees", default="0..5", help="Inclusive range A..B")
    module.add_argument("--json", action="store_true")
    module.set_defaults(handler=cmd_module_cohomology)

    example = sub.add_parser("example", help="Built-in worked examples")
    example.add_argument("--name", choices=EXAMPLE_NAMES, required=True)
    example.add_argument("--n", type=int)
    example.add_argument("--p", type=int)
    example.add_argument("--json", action="store_true")
    example.set_defaults(handler=cmd_example)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.WARNING),
        format=config.LOG_FORMAT,
        datefmt=config.LOG_DATEFMT,
    )
    try:
        return args.handler(args)
    except EqcohoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
