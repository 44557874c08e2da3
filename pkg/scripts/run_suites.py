"""Run verification suites and write one JSON report per suite.

    python3 scripts/run_suites.py --out reports/            # everything
    python3 scripts/run_suites.py segal-core prod-trees     # a selection
"""
import argparse
import pathlib
import sys

from dendroidal.verify import SUITES, run_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("suites", nargs="*", default=sorted(SUITES))
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("reports"))
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.suites:
        rep = run_verify(name)
        (args.out / f"{name}.json").write_text(rep.to_json(timing=args.timing) + "\n")
        failed += not rep.passed
        print(f"{name:32s} {'pass' if rep.passed else 'FAIL'} {rep.seconds:7.1f}s {rep.summary}", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
