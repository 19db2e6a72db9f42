"""Profile-likelihood recovery of (b, q) as the sample size grows.

    python scripts/fit_recovery.py [--b 2 --q 0.5] [--reps 10]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from gompertz_kl import GompertzParams, Sampler, mle_fit


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--q", type=float, default=1.0)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 1_000, 10_000, 100_000])
    args = ap.parse_args()

    truth = GompertzParams(args.b, args.q)
    print(f"truth b={truth.b:g} q={truth.q:g}, {args.reps} seeded replicates per size")
    print(f"{'n':>8} {'mean b':>10} {'sd b':>9} {'mean q':>10} {'sd q':>9} {'ms/fit':>8}")
    for n in args.sizes:
        bs, qs = [], []
        t0 = time.perf_counter()
        for seed in range(args.reps):
            res = mle_fit(Sampler(truth, seed=seed).sample(n))
            bs.append(res.params.b)
            qs.append(res.params.q)
        ms = 1e3 * (time.perf_counter() - t0) / args.reps
        print(f"{n:8d} {np.mean(bs):10.4f} {np.std(bs, ddof=1):9.4f} "
              f"{np.mean(qs):10.4f} {np.std(qs, ddof=1):9.4f} {ms:8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
