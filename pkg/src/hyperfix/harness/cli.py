"""Command line: ``hyperfix verify | run | list-scenarios``."""
from __future__ import annotations

import argparse
import sys
import time

from .config import ConfigError, load_config
from .scenarios import SCENARIOS, load_scenario, run_scenario, scenario_path
from .suites import DEFAULT_SAMPLES, report, verify_all


def _cmd_verify(args) -> int:
    t = time.perf_counter()
    results = verify_all(seed=args.seed, samples=args.samples)
    sys.stdout.write(report(results))
    failed = [r for r in results if not r.passed]
    for r in failed:
        what = "expected violations, found none" if r.expect_violations else f"first violation: {r.violations[0]}"
        print(f"# FAIL {r.name}: {what}", file=sys.stderr)
    print(f"# {len(results) - len(failed)}/{len(results)} suites passed in {time.perf_counter() - t:.1f} s",
          file=sys.stderr)
    return 0 if not failed else 1


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        res = run_scenario(cfg, out_dir=args.out)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(res.summary_text())
    for name, path in res.files.items():
        print(f"# wrote {path}", file=sys.stderr)
    return res.exit_code


def _cmd_list(args) -> int:
    for key in SCENARIOS:
        cfg = load_scenario(key)
        print(f"{key}\t{scenario_path(key)}\t{cfg.iteration.mode}\t{cfg.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperfix", description="Common fixed points of Lipschitz group actions.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run every property suite and print one CSV line per suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help=f"size of the largest suites; smaller suites scale down from it (default {DEFAULT_SAMPLES})")
    v.set_defaults(func=_cmd_verify)
    r = sub.add_parser("run", help="run one scenario config and write trace.csv, summary.txt, config.ini")
    r.add_argument("--config", required=True, help="scenario INI file")
    r.add_argument("--out", default=None, help="output directory (default: [output] dir, else out/<name>)")
    r.set_defaults(func=_cmd_run)
    ls = sub.add_parser("list-scenarios", help="list the shipped scenario configs")
    ls.set_defaults(func=_cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be >= 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
