"""Grid-search the Gauss equation and compare the clusters with the closed-form solutions."""

import argparse
import time
from dataclasses import dataclass

from crgauss.gauss import GridSpec, brute_clusters, solve_gauss
from crgauss.cli import match_clusters


@dataclass(frozen=True)
class Config:
    step: float = 0.25
    g_tol: float = 0.2


CASES = [((1, 0), (-3, 6)), ((-1, 0), (-6, 3)), ((0, 1), (-3, 3)), ((1, 1), (-4, 7)), ((0.5, 0.5j), (-4, 5))]


def main(cfg: Config):
    for (a, b), (lo, hi) in CASES:
        grid = GridSpec(lo, hi, cfg.step, cfg.g_tol)
        t0 = time.perf_counter()
        clusters = [c for c in brute_clusters(a, b, grid) if -c.min_eigenvalue > grid.g_tol]
        dt = time.perf_counter() - t0
        sols = list(solve_gauss(a, b))
        pairs = match_clusters(clusters, sols, grid.step)
        print(f"(a, b) = ({a}, {b})  grid [{lo}, {hi}]^4  {dt:.2f} s")
        for i, j, d in pairs:
            A = sols[j].A
            print(f"  cluster {i} (size {clusters[i].size:>3}) -> {sols[j].branch:<20} "
                  f"tau={A.tau:+.4f} rho={A.rho:+.4f} sigma={A.sigma:.4f}  dist {d:.3f}")
        one_to_one = (
            len(clusters) == len(sols) == len(pairs)
            and len({i for i, _, _ in pairs}) == len({j for _, j, _ in pairs}) == len(sols)
        )
        if not one_to_one:
            # solutions closer than the grid can resolve end up in one cluster
            print(f"  NOT ONE-TO-ONE: {len(clusters)} clusters for {len(sols)} solutions")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--step", type=float, default=Config.step)
    p.add_argument("--g-tol", dest="g_tol", type=float, default=Config.g_tol)
    main(Config(**vars(p.parse_args())))
