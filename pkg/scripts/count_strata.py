"""Solution counts and timing per (a, b) stratum of normalized curvatures."""

import argparse
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from crgauss import classify, solve_gauss


@dataclass(frozen=True)
class Config:
    samples: int = 1000
    seed: int = 0


def draw(rng, k):
    r = rng.uniform(0.05, 1, k)
    b = r * np.exp(2j * np.pi * rng.random(k))
    a = rng.uniform(0.05, 1, k)
    return {
        "a>0, b=0": (a, np.zeros(k)),
        "a<0, b=0": (-a, np.zeros(k)),
        "a=0, b!=0": (np.zeros(k), b),
        "a!=0, b!=0": (rng.choice([-1, 1], k) * a, b),
        "a=b=0": (np.zeros(k), np.zeros(k)),
    }


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'stratum':<12} {'counts':<18} {'L_S classes':<46} seconds")
    for name, (a_arr, b_arr) in draw(rng, cfg.samples).items():
        t0 = time.perf_counter()
        counts = Counter(len(solve_gauss(a, b)) for a, b in zip(a_arr, b_arr))
        dt = time.perf_counter() - t0
        classes = Counter((c.rank, c.trace_sign) for c in (classify(a, b) for a, b in zip(a_arr, b_arr)))
        print(f"{name:<12} {dict(counts)!s:<18} {dict(classes)!s:<46} {dt:.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(p.parse_args())))
