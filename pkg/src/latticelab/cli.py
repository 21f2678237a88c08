"""Command-line front door.

    latticelab <subcommand> [--xmax N] [--grid N] [--tol F] [--margin F]
               [--eps F] [--seed N] [--out DIR] [--format csv|json]
               [--config FILE] [--sweep-only]

Subcommands: error-terms, expsum, spacing1, spacing2, exponents,
verify-all.  Each runs the verification checks of its module (one
PASS/FAIL line per criterion; exit status 0 iff all passed) and, when
--out is given, writes the module's sweep tables there.  --sweep-only
skips the checks.  --config points at a flat key=value file whose entries
are overridden by explicit command-line flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from latticelab import harness
from latticelab.persist import LatticeCountCache, write_csv, write_json

CONFIG_KEYS = {
    "xmax": ("x_max", int),
    "grid": ("grid", int),
    "tol": ("tol", float),
    "margin": ("margin", float),
    "eps": ("eps", float),
    "seed": ("seed", int),
    "out": ("out", str),
    "format": ("fmt", str),
}


def load_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise harness.UsageError(
                    f"config {path}:{lineno}: expected key=value, got {line!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise harness.UsageError(f"config {path}:{lineno}: unknown key {key!r}")
            field, cast = CONFIG_KEYS[key]
            try:
                values[field] = cast(value.strip())
            except ValueError as exc:
                raise harness.UsageError(f"config {path}:{lineno}: {exc}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticelab",
        description="desk-scale verification lab for lattice/divisor error "
        "terms, exponential sums, spacing problems, and exponent optimization",
    )
    parser.add_argument("subcommand", choices=harness.SUBCOMMANDS)
    parser.add_argument("--xmax", type=int, help="sweep ceiling for X (default 1e6)")
    parser.add_argument("--grid", type=int, help="grid points for curves (default 10001)")
    parser.add_argument("--tol", type=float, help="root tolerance (default 1e-10)")
    parser.add_argument("--margin", type=float, help="explicit >>/<< constant (default 1)")
    parser.add_argument("--eps", type=float, help="explicit epsilon power (default 0.05)")
    parser.add_argument("--seed", type=int, help="RNG seed (default 20240801)")
    parser.add_argument("--out", type=str, help="output directory for tables")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"))
    parser.add_argument("--config", type=str, help="flat key=value config file")
    parser.add_argument(
        "--sweep-only", action="store_true", help="write tables, skip the checks"
    )
    return parser


def _write_table(cfg, name: str, header, rows) -> list[str]:
    os.makedirs(cfg.out, exist_ok=True)
    rows = list(rows)
    written = []
    if cfg.fmt == "csv":
        path = os.path.join(cfg.out, f"{name}.csv")
        write_csv(path, header, rows)
        written.append(path)
    else:
        path = os.path.join(cfg.out, f"{name}.json")
        write_json(path, {"header": list(header), "rows": [list(r) for r in rows]})
        written.append(path)
    return written


def write_outputs(cfg: harness.ExperimentConfig) -> list[str]:
    written = []
    sub = cfg.subcommand
    if sub in ("error-terms", "verify-all"):
        cache = LatticeCountCache(os.path.join(cfg.out, "lattice_cache.txt"))
        rows = harness.sweep_error_terms(cfg, cache)
        written += _write_table(cfg, "error_terms", harness.ERROR_TERMS_HEADER, rows)
        cache.spot_check(cfg.rng())
    if sub in ("expsum", "verify-all"):
        written += _write_table(
            cfg, "expsum", harness.EXPSUM_HEADER, harness.sweep_expsum(cfg)
        )
    if sub in ("spacing1", "verify-all"):
        written += _write_table(
            cfg, "spacing1", harness.SPACING1_HEADER, harness.sweep_spacing1(cfg)
        )
    if sub in ("spacing2", "verify-all"):
        written += _write_table(
            cfg, "spacing2_arcs", harness.SPACING2_HEADER, harness.sweep_spacing2(cfg)
        )
        path = os.path.join(cfg.out, "spacing2_pairs.json")
        write_json(path, harness.spacing2_pair_report(cfg))
        written.append(path)
    if sub in ("exponents", "verify-all"):
        written += _write_table(
            cfg, "exponent_curve", harness.CURVE_HEADER, harness.sweep_exponents(cfg)
        )
        path = os.path.join(cfg.out, "theta_star.json")
        write_json(path, harness.theta_report(cfg))
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    values = {}
    if args.config:
        try:
            values.update(load_config_file(args.config))
        except (OSError, harness.UsageError) as exc:
            parser.error(str(exc))
    for flag, (field, _) in CONFIG_KEYS.items():
        cli_val = getattr(args, field if field != "x_max" else "xmax", None)
        if cli_val is not None:
            values[field] = cli_val
    try:
        cfg = harness.ExperimentConfig(subcommand=args.subcommand, **values)
    except harness.UsageError as exc:
        parser.error(str(exc))
        return 2  # unreachable; parser.error exits
    exit_code = 0
    if not args.sweep_only:
        report = harness.run_suite(cfg)
        for line in report.summary_lines():
            print(line)
        exit_code = report.exit_status
        if cfg.out:
            os.makedirs(cfg.out, exist_ok=True)
            write_json(
                os.path.join(cfg.out, "report.json"),
                {
                    "subcommand": cfg.subcommand,
                    "seed": cfg.seed,
                    "exit_status": report.exit_status,
                    "wall_clock": report.wall_clock,
                    "checks": [
                        {
                            "name": c.name,
                            "passed": c.passed,
                            "detail": c.detail,
                            "elapsed": c.elapsed,
                        }
                        for c in report.checks
                    ],
                },
            )
    if cfg.out:
        try:
            for path in write_outputs(cfg):
                print(f"wrote {path}")
        except harness.UsageError as exc:
            parser.error(str(exc))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
