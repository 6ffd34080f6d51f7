"""Command-line front end for the experiment runner.

One subcommand per experiment kind; every run is described by a single JSON
config document.  Exit codes: 0 all verdicts pass, 1 a verdict failed (or a
search returned not-found), 2 input or verification error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import (
    ExperimentError,
    ExperimentReport,
    run_build,
    run_norm_growth,
    run_simulate,
    run_stability_scan,
    run_toy,
    run_verify,
)

SUBCOMMANDS = (
    "verify-set",
    "build-lambda",
    "toy-cascade",
    "simulate",
    "norm-growth",
    "stability-scan",
)


def _load_config(path):
    if path is None:
        return {}
    if not os.path.exists(path):
        raise ExperimentError(f"config file does not exist: {path}")
    with open(path) as fh:
        cfg = json.load(fh)
    cfg.setdefault("base_dir", os.path.dirname(os.path.abspath(path)))
    return cfg


def _emit(report_obj, out_dir, fmt):
    text = json.dumps(report_obj, sort_keys=True, indent=2) + "\n"
    if out_dir:
        with open(os.path.join(out_dir, "report.json"), "w") as fh:
            fh.write(text)
    if fmt == "json":
        sys.stdout.write(text)
    else:
        _print_csv_summary(report_obj)


def _print_csv_summary(obj, prefix=""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            _print_csv_summary(obj[key], f"{prefix}{key}." if prefix else f"{key}.")
    elif isinstance(obj, list):
        sys.stdout.write(f"{prefix[:-1]},{json.dumps(obj)}\n")
    else:
        sys.stdout.write(f"{prefix[:-1]},{obj}\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlscascade",
        description="Resonance-geometry verification and truncated cubic NLS experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to the JSON config document")
        p.add_argument("--out", help="directory for reports and CSV series")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        if name == "build-lambda":
            p.add_argument("--p", type=int, help="generation count (overrides config)")
            p.add_argument("--box", type=int, help="search box (overrides config)")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        out_dir = args.out
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

        if args.command == "verify-set":
            report = run_verify(cfg, out_dir)
            _emit(report.to_json(), out_dir, args.format)
            return 0 if report.passed else 1
        if args.command == "build-lambda":
            if getattr(args, "p", None) is not None:
                cfg["p"] = args.p
            if getattr(args, "box", None) is not None:
                cfg["box"] = args.box
            g = run_build(cfg, out_dir)
            payload = {"found": g is not None}
            if g is not None:
                payload["set"] = g.to_json()
            _emit(payload, out_dir, args.format)
            return 0 if g is not None else 1
        runner = {
            "toy-cascade": run_toy,
            "simulate": run_simulate,
            "norm-growth": run_norm_growth,
            "stability-scan": run_stability_scan,
        }[args.command]
        report: ExperimentReport = runner(cfg, out_dir)
        _emit(report.to_json(), out_dir, args.format)
        return 0 if report.passed else 1
    except ExperimentError as e:
        payload = {"error": str(e)}
        if e.payload is not None and hasattr(e.payload, "to_json"):
            payload["report"] = e.payload.to_json()
        sys.stderr.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        sys.stderr.write(f'{{"error": "{type(e).__name__}: {e}"}}\n')
        return 2


if __name__ == "__main__":
    sys.exit(main())
