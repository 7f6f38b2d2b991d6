"""Run the property suites and print one line per suite; exit 1 if any fails."""
from __future__ import annotations

import argparse
import sys

from promlin.verify import run_all, suites


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--only", action="append", help="suite name; repeatable")
    ap.add_argument("--names", action="store_true", help="list suite names and exit")
    args = ap.parse_args(argv)
    if args.names:
        for name, _ in suites(args.max_size, args.seed):
            print(name)
        return 0
    ok = True
    for r in run_all(args.max_size, args.seed, args.only):
        ok &= r.ok
        print(f"{r.name:52s} {'PASS' if r.ok else 'FAIL'}  checked={r.checked}  {r.seconds:.1f}s  {r.detail}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
