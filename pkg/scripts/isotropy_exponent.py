"""Tabulate isotropy of the graph subgroup for every quaternion override.

For each type and every s in [1, n - 1] this prints whether V is maximal
isotropic, next to the two candidate rules: s = -1 mod n (degree) and
s = -1 mod e, where e is the exponent of ker(lambda).  The second rule is
the one that matches: the pairing on the graph is (1 + s) times the pairing
on ker(lambda^4), which vanishes exactly when e divides 1 + s.
"""

from __future__ import annotations

import argparse

from qtrick.abelian import Isotropy, kernel_of_polarization
from qtrick.instances import generate_instance
from qtrick.trick import FourSquares, check_graph_isotropy, decompose_four_squares


def parse_type(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def main() -> None:
    p = argparse.ArgumentParser(description="isotropy of V versus s mod n and s mod exponent")
    p.add_argument("types", nargs="*", type=parse_type, default=[(2,), (3,), (4,), (6,), (1, 2), (2, 4), (1, 6)])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    mismatches = {"degree": 0, "exponent": 0}
    for ty in args.types:
        X = generate_instance(len(ty), ty, "integers", args.seed).polarized()
        n, e = X.degree, kernel_of_polarization(X).exponent
        print(f"type {ty}: n = {n}, exponent = {e}")
        for s in range(1, n):
            maximal = check_graph_isotropy(X, FourSquares(n, *decompose_four_squares(s))) is Isotropy.MAXIMAL_ISOTROPIC
            by_degree, by_exponent = (s + 1) % n == 0, (s + 1) % e == 0
            mismatches["degree"] += maximal != by_degree
            mismatches["exponent"] += maximal != by_exponent
            if maximal or by_degree:
                print(f"  s = {s:>3}: maximal={maximal!s:<5} s=-1 mod n: {by_degree!s:<5} s=-1 mod e: {by_exponent}")
    print(f"rule 's = -1 mod n' mispredicts {mismatches['degree']} cases")
    print(f"rule 's = -1 mod e' mispredicts {mismatches['exponent']} cases")


if __name__ == "__main__":
    main()
