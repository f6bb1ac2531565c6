"""Exhaustive congruence-orbit table for tiny rings.

    python3 scripts/orbit_table.py
    python3 scripts/orbit_table.py --ring zmod:3^2 --ring trunc:3:1:2 --budget 1000000   # about 3 minutes
"""

import argparse
import time
from dataclasses import dataclass, field
from typing import List

from cogredient.localring import make_ring
from cogredient.oracle import BudgetExceededError, DEFAULT_BUDGET, verify_classification


@dataclass
class OrbitTableConfig:
    rings: List[str] = field(default_factory=lambda: ["zmod:3", "zmod:3^2", "zmod:5", "zmod:7", "trunc:3:1:2"])
    max_n: int = 3
    budget: int = 2 * 10**5
    sample: int = 500


def run(cfg: OrbitTableConfig):
    print(f"{'ring':<14}{'n':>3}{'total':>9}  {'orbit sizes':<20}{'forms':<46}{'pass':>5}{'secs':>7}")
    for spec in cfg.rings:
        R = make_ring(spec)
        for n in range(1, cfg.max_n + 1):
            start = time.perf_counter()
            try:
                rep = verify_classification(R, n, budget=cfg.budget, sample=cfg.sample, spec=spec)
            except BudgetExceededError:
                print(f"{spec:<14}{n:>3}  over budget", flush=True)
                break
            forms = " | ".join(f"nu={f['nu']} {f['delta_kind']}" for f in rep.canonical_forms)
            secs = time.perf_counter() - start
            print(f"{spec:<14}{n:>3}{rep.total:>9}  {str(rep.orbit_sizes):<20}{forms:<46}{str(rep.passed):>5}{secs:>7.2f}", flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ring", action="append", dest="rings")
    ap.add_argument("--max-n", type=int, default=OrbitTableConfig.max_n)
    ap.add_argument("--budget", type=int, default=OrbitTableConfig.budget)
    ap.add_argument("--sample", type=int, default=OrbitTableConfig.sample)
    args = ap.parse_args()
    cfg = OrbitTableConfig(max_n=args.max_n, budget=min(args.budget, DEFAULT_BUDGET), sample=args.sample)
    if args.rings:
        cfg.rings = args.rings
    run(cfg)


if __name__ == "__main__":
    main()
