"""Run the full construction over a grid of polarization types and rings.

    python scripts/run_grid.py --g 1 2 --d 1 2 3 5 6 --rings integers gauss
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from qtrick.errors import RingIncompatible
from qtrick.exact_linalg import symplectic_type
from qtrick.instances import generate_instance
from qtrick.rings import RING_MODELS
from qtrick.trick import run_trick


@dataclass(frozen=True)
class GridConfig:
    genera: tuple[int, ...] = (1, 2)
    divisors: tuple[int, ...] = (1, 2, 3, 5, 6)
    rings: tuple[str, ...] = tuple(sorted(RING_MODELS))
    seed: int = 0


def types_for(g: int, d: int) -> tuple[int, ...]:
    return (1,) * (g - 1) + (d,)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--g", type=int, nargs="+", default=list(GridConfig.genera))
    p.add_argument("--d", type=int, nargs="+", default=list(GridConfig.divisors))
    p.add_argument("--rings", nargs="+", default=list(GridConfig.rings))
    p.add_argument("--seed", type=int, default=GridConfig.seed)
    a = p.parse_args()
    cfg = GridConfig(tuple(a.g), tuple(a.d), tuple(a.rings), a.seed)

    print(f"{'type':<12}{'ring':<13}{'n':>5}{'s':>6}  {'quadruple':<16}{'|V|':>10}  {'ok':<4}{'secs':>7}")
    failures = 0
    for g in cfg.genera:
        for d in cfg.divisors:
            ty = types_for(g, d)
            for ring in cfg.rings:
                try:
                    A = generate_instance(g, ty, ring, cfg.seed).ring_action()
                except RingIncompatible as exc:
                    print(f"{str(ty):<12}{ring:<13} skipped: {exc}")
                    continue
                t0 = time.perf_counter()
                res = run_trick(A.X, A)
                secs = time.perf_counter() - t0
                assert res.mu is None or symplectic_type(res.mu) == (1,) * (8 * g)
                failures += not res.ok
                print(
                    f"{str(ty):<12}{ring:<13}{A.X.degree:>5}{res.squares.s:>6}  "
                    f"{str(res.squares.quadruple):<16}{res.V.order:>10}  {'yes' if res.ok else 'NO':<4}{secs:>7.2f}"
                )
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
