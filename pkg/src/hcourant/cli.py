"""Command line driver: ``hcourant <suite> [flags]``.

Exit status 0 when every check passes, 1 when a check fails and 2 when the
scenario or the flags cannot be used.  Reports are JSON with records sorted
by name; apart from the ``seconds`` fields they depend only on the scenario
and the seed.
"""
from __future__ import annotations

import argparse
import json
import sys

from .scenario import SUITES, Scenario, ScenarioError, load_scenario
from .structures import ModelError
from .suites import SuiteConfig, all_passed, run_suite, thread_count

__all__ = ["main", "build_parser", "parse_n_values"]


def parse_n_values(text: str) -> list[int]:
    """'7', '5,7,9' or '5:15' (odd values in the inclusive range)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = (int(x) for x in part.split(":", 1))
            out.extend(k for k in range(lo, hi + 1) if k % 2)
        else:
            out.append(int(part))
    for k in out:
        if k < 5 or k % 2 == 0:
            raise ValueError(f"n must be odd and at least 5, got {k}")
        if k > 25:
            raise ValueError(f"n = {k} exceeds the supported maximum 25")
    return sorted(set(out))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hcourant", description="Exact checks for the embedding of observables into higher Courant algebras.")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--scenario", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-arity", type=int, dest="max_arity")
    p.add_argument("--tuples", type=int)
    p.add_argument("--n", dest="n_values", help="odd n for appendixb: 7, 5,7 or 5:15")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of one line per check")
    return p


def _config(args, scenario: Scenario | None) -> SuiteConfig:
    cfg = SuiteConfig()
    if scenario is not None:
        model = scenario.model()
        model.validate()
        cfg.models = [model]
        cfg.seed = scenario.seed
        cfg.tuples = scenario.tuples
        cfg.max_arity = scenario.max_arity
        cfg.comoment = scenario.comoment(model)
        cfg.gauge_form = scenario.gauge
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ScenarioError("seed must be an unsigned 64-bit integer")
        cfg.seed = args.seed
    if args.tuples is not None:
        if args.tuples < 0:
            raise ScenarioError("--tuples must be non-negative")
        cfg.tuples = args.tuples
    if args.max_arity is not None:
        if args.max_arity < 1:
            raise ScenarioError("--max-arity must be positive")
        cfg.max_arity = args.max_arity
    if args.n_values:
        try:
            cfg.n_values = parse_n_values(args.n_values)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
    if cfg.comoment is not None and cfg.gauge_form is None:
        raise ScenarioError("a comoment map needs a gauge line for the pentagon suite")
    return cfg


def report_json(suite: str, cfg: SuiteConfig, records: list) -> str:
    report = {
        "suite": suite,
        "seed": cfg.seed,
        "passed": all_passed(records),
        "records": records,
    }
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        scenario = load_scenario(args.scenario) if args.scenario else None
        cfg = _config(args, scenario)
    except (ScenarioError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = run_suite(args.suite, cfg, thread_count())
    text = report_json(args.suite, cfg, records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for r in records:
            line = f"{r['status'].upper():4} {r['name']}  ({r['tuples']} samples, {r['seconds']:.2f}s)"
            if "values" in r:
                line += "  " + " ".join(r["values"])
            if "solution" in r and r["solution"]:
                line += "  " + " ".join(f"{k}={v}" for k, v in r["solution"].items())
            print(line)
            if r["status"] != "pass":
                print("     counterexample: " + json.dumps(r["counterexample"], sort_keys=True))
        failed = sum(r["status"] != "pass" for r in records)
        print(f"{len(records) - failed}/{len(records)} checks passed")
    return 0 if all_passed(records) else 1


if __name__ == "__main__":
    sys.exit(main())
