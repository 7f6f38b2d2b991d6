"""Tabulate CSP verdicts over every monoid in the corpus up to a given order.

For each monoid the ordinary CSP (all elements as constants) is classified, and the
verdict is compared against the structural rule: Abelian and a union of subgroups.
"""
from __future__ import annotations

import argparse
import collections
import sys

from promlin.algebra import is_abelian, is_union_of_subgroups
from promlin.classify import classify_csp
from promlin.corpus import monoid_corpus


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--list", action="store_true", help="print one line per monoid")
    args = ap.parse_args(argv)

    tally = collections.Counter()
    mismatches = []
    for name, M in monoid_corpus(args.max_size):
        if M.size > args.max_size:
            continue
        res = classify_csp(M)
        expected = is_abelian(M) and is_union_of_subgroups(M)
        tally[(M.size, res.verdict.value)] += 1
        if res.tractable != expected:
            mismatches.append(name)
        if args.list:
            note = res.algorithm_note or ""
            print(f"{name:12s} |M|={M.size}  {res.verdict.value:10s} {note}")

    print("order  verdict     count")
    for (n, v), c in sorted(tally.items()):
        print(f"{n:5d}  {v:10s} {c:6d}")
    if mismatches:
        print("mismatches:", ", ".join(mismatches))
        return 1
    print("all verdicts match the structural rule")
    return 0


if __name__ == "__main__":
    sys.exit(main())
