"""Reduce a seeded random corpus and report witness exactness, class balance and timing.

    python3 scripts/corpus_check.py --per-cell 100 --max-n 6
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import List

from cogredient.localring import make_ring
from cogredient.matrix import random_symmetric_invertible
from cogredient.reduction import classify, reduce


@dataclass
class CorpusConfig:
    rings: List[str] = field(
        default_factory=lambda: ["zmod:3", "zmod:3^3", "zmod:5^2", "zmod:13", "gr:3^2:2", "gr:5^2:2", "trunc:3:2:2"]
    )
    min_n: int = 1
    max_n: int = 6
    per_cell: int = 50
    seed: int = 0


def run(cfg: CorpusConfig) -> bool:
    all_ok = True
    print(f"{'ring':<14}{'n':>3}{'exact':>8}{'agree':>8}  {'class counts':<28}{'ms/reduce':>10}")
    for spec in cfg.rings:
        R = make_ring(spec)
        for n in range(cfg.min_n, cfg.max_n + 1):
            rng = random.Random(f"{cfg.seed}/{spec}/{n}")
            mats = [random_symmetric_invertible(R, n, rng) for _ in range(cfg.per_cell)]
            start = time.perf_counter()
            witnesses = [reduce(S) for S in mats]
            ms = 1000 * (time.perf_counter() - start) / cfg.per_cell
            exact = sum(w.verify(S) for w, S in zip(witnesses, mats))
            agree = sum(classify(S) == w.form for w, S in zip(witnesses, mats))
            counts = Counter((w.form.nu, w.form.delta_kind.value) for w in witnesses)
            all_ok &= exact == agree == cfg.per_cell
            classes = " / ".join(f"{c}" for c in sorted(counts.values(), reverse=True))
            print(f"{spec:<14}{n:>3}{exact:>8}{agree:>8}  {classes:<28}{ms:>10.2f}", flush=True)
    print("all exact" if all_ok else "FAILURES")
    return all_ok


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ring", action="append", dest="rings")
    ap.add_argument("--min-n", type=int, default=CorpusConfig.min_n)
    ap.add_argument("--max-n", type=int, default=CorpusConfig.max_n)
    ap.add_argument("--per-cell", type=int, default=CorpusConfig.per_cell)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    args = ap.parse_args()
    cfg = CorpusConfig(min_n=args.min_n, max_n=args.max_n, per_cell=args.per_cell, seed=args.seed)
    if args.rings:
        cfg.rings = args.rings
    raise SystemExit(0 if run(cfg) else 1)


if __name__ == "__main__":
    main()
