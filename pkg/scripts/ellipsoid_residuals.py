"""Sphere residuals of the Webster map on sampled points, as the quadratic part grows."""

import argparse
from dataclasses import dataclass

import numpy as np

from crgauss.embed import random_quadratic_form, sample_points, sphere_residual


@dataclass(frozen=True)
class Config:
    n: int = 3
    forms: int = 20
    samples: int = 10_000
    seed: int = 0


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'max |B|':>8} {'worst residual':>15} {'min |1-b|':>10}")
    for bound in (0.05, 0.1, 0.2, 0.3, 0.4, 0.45):
        worst, gap = 0.0, np.inf
        for _ in range(cfg.forms):
            Q = random_quadratic_form(cfg.n, rng, bound)
            z = sample_points(Q, cfg.samples, rng)
            worst = max(worst, float(np.max(np.abs(sphere_residual(Q, z)))))
            gap = min(gap, float(np.min(np.abs(1 - Q(z)))))
        print(f"{bound:>8.2f} {worst:>15.2e} {gap:>10.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for k, v in vars(Config()).items():
        p.add_argument(f"--{k}", type=type(v), default=v)
    main(Config(**vars(p.parse_args())))
