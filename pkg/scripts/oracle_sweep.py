"""Compare the descent route against pi^{-1} on many seeded random instances."""

import argparse
import time

from qtrick.acceptance import random_instance
from qtrick.trick import build_pi, descent_route, four_squares, graph_V, principal_mu

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--count", type=int, default=100)
p.add_argument("--max-g", type=int, default=3)
args = p.parse_args()

bad = 0
t0 = time.perf_counter()
for seed in range(args.count):
    X = random_instance(seed, args.max_g).polarized()
    q = four_squares(X.degree)
    pi = build_pi(X, q)
    ok = descent_route(X, pi, graph_V(X, q), principal_mu(X, pi)) == (True, True)
    bad += not ok
    print(f"seed {seed:>4} g={X.g} type={X.type}: {'agree' if ok else 'DISAGREE'}")
print(f"{args.count - bad}/{args.count} agree in {time.perf_counter() - t0:.1f}s")
raise SystemExit(1 if bad else 0)
