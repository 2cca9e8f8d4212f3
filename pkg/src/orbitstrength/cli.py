"""Command line entry point: ``orbitstrength {analyze,witness,verify} CONFIG``.

Exit codes: 0 success, 1 configuration error, 2 orbit of z not locally
closed (analyze), 3 witness exhausted, 4 witness verification failed.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import LocallyClosedViolation, multiplicity_report
from .config import ConfigError, build_scenario, load_config
from .geometry import Interval, format_number
from .sojourn import relative_compactness_probe
from .suite import run_suite
from .witness import (HorizonTooSmall, Witness, WitnessExhausted, construct_witness,
                      self_convergence_witness, verify_witness)

EXIT_OK, EXIT_CONFIG, EXIT_NOT_LOCALLY_CLOSED, EXIT_EXHAUSTED, EXIT_UNVERIFIED = 0, 1, 2, 3, 4


def _load(args):
    cfg = load_config(args.config)
    overrides = {}
    for key in ("n_max", "m_max", "tail_start", "window"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    cfg = replace(cfg, **overrides)
    if cfg.tail_start is not None and not 1 <= cfg.tail_start <= cfg.n_max:
        raise ConfigError("tail_start must lie in [1, n_max]")
    return cfg, build_scenario(cfg)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(args) -> int:
    cfg, scenario = _load(args)
    window = Interval.closed(-cfg.window, cfg.window) if cfg.window else None
    out = _out_dir(args)
    try:
        report = multiplicity_report(scenario, cfg.n_max, cfg.m_max, cfg.tail_start, window)
    except LocallyClosedViolation as exc:
        print(f"error: {exc}")
        boxes = [scenario.neighborhoods(m) for m in range(1, cfg.m_max + 1)]
        horizons = (250.0, 500.0, 1000.0, 2000.0)
        lines = ["windowed growth of the sojourn measure of z on [-T, T]",
                 "m  " + "  ".join(f"T={format_number(T)}" for T in horizons) + "  slope"]
        for d in relative_compactness_probe(scenario.z, boxes, horizons):
            if d.bounded:
                lines.append(f"{d.m}  bounded measure {format_number(d.measure)}")
            else:
                lines.append(f"{d.m}  " + "  ".join(f"{v:.6g}" for v in d.windowed_measures)
                             + f"  {d.growth_slope:.6g}")
        text = "\n".join(lines) + "\n"
        print(text, end="")
        (out / "report.txt").write_text(f"error: {exc}\n{text}")
        return EXIT_NOT_LOCALLY_CLOSED
    text = report.render()
    print(text, end="")
    (out / "report.txt").write_text(text)
    (out / "ratios.csv").write_text(report.table.to_csv())
    return EXIT_OK


def cmd_witness(args) -> int:
    cfg, scenario = _load(args)
    out = _out_dir(args)
    if args.load:
        try:
            w = Witness.from_csv(Path(args.load).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load witness: {exc}") from None
    else:
        try:
            if scenario.windowed:
                w = self_convergence_witness(scenario, args.k, m_max=min(cfg.m_max, 4))
            else:
                w = construct_witness(scenario, args.k, cfg.n_max, cfg.m_max,
                                      subsequence=args.subsequence)
        except (WitnessExhausted, HorizonTooSmall) as exc:
            print(f"witness exhausted: {exc}")
            return EXIT_EXHAUSTED
        (out / "witness.csv").write_text(w.to_csv())
    verdict = verify_witness(scenario, w)
    if not verdict.passed:
        print(f"verification failed (condition {verdict.condition}): {verdict.message}")
        return EXIT_UNVERIFIED
    rows = w.ns
    print(f"witness k={w.k} verified on n={rows[0]}..{rows[-1]} ({len(rows)} rows)")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg, scenario = _load(args)
    results = run_suite(scenario, cfg.n_max, cfg.m_max, cfg.tail_start, seed=args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_UNVERIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitstrength",
                                     description="Strength of convergence of orbits of free R-actions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="scenario file")
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--m-max", dest="m_max", type=int)
        p.add_argument("--tail-start", dest="tail_start", type=int)
        p.add_argument("--window", type=float, help="half-width of the parameter window")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for oracle boxes")

    p = sub.add_parser("analyze", help="ratio table and relative multiplicities")
    common(p)
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("witness", help="construct and verify a k-times convergence witness")
    common(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--subsequence", action="store_true",
                   help="witness along a subsequence (limsup condition)")
    p.add_argument("--load", help="verify an existing witness.csv instead of constructing one")
    p.set_defaults(func=cmd_witness)
    p = sub.add_parser("verify", help="run the invariant suite")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
