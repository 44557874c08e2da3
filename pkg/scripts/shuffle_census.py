"""Tabulate shuffle counts over all unordered pairs of small trees, checking
percolation against the brute-force enumeration where that is cheap."""
import argparse
from collections import Counter
from itertools import combinations_with_replacement

from dendroidal.serialize import to_term
from dendroidal.shuffles import shuffles, shuffles_bruteforce
from dendroidal.trees import enumerate_trees


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=3)
    ap.add_argument("--max-arity", type=int, default=3)
    ap.add_argument("--check-up-to", type=int, default=10, help="brute-force check when choice points <= this")
    args = ap.parse_args()
    corpus = enumerate_trees(args.max_vertices, args.max_arity)
    hist = Counter()
    total = checked = 0
    largest = (0, "")
    for a, b in combinations_with_replacement(corpus, 2):
        n = len(shuffles(a, b))
        hist[n] += 1
        total += n
        if n > largest[0]:
            largest = (n, f"{to_term(a)} (x) {to_term(b)}")
        if len(a.vertices) * len(b.vertices) <= args.check_up_to:
            assert n == len(shuffles_bruteforce(a, b, max_choices=args.check_up_to)), (to_term(a), to_term(b))
            checked += 1
    pairs = sum(hist.values())
    print(f"trees: {len(corpus)}  unordered pairs: {pairs}  shuffles: {total}  brute-force checked: {checked}")
    print(f"largest: {largest[0]} shuffles for {largest[1]}")
    for n in sorted(hist):
        print(f"{n:4d} shuffles: {hist[n]} pairs")


if __name__ == "__main__":
    main()
