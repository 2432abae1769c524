"""Binned choice-count ratio of a collapsing-boundary DDM against its likelihood ratio.

Pooled RTs are cut into equal-count bins. In each bin with at least
``min_side`` trials per choice, ``count_x / count_y`` is compared with
``exp(mu b(t) / (sigma^2 / 2))`` at the bin's median time.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from chronopref.generators import DdmSpec, HyperbolicBoundary, ddm_likelihood_ratio, sample_ddm


@dataclass
class StudyConfig:
    n: int = 50_000
    bins: int = 16
    min_side: int = 200
    dt: float = 1e-3
    seed: int = 22
    workers: int = 4


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in vars(StudyConfig()).items():
        ap.add_argument(f"--{f.replace('_', '-')}", type=type(v), default=v)
    ap.add_argument("--mu", type=float, nargs="+", default=[0.25, 0.5])
    args = ap.parse_args()
    cfg = StudyConfig(**{k: getattr(args, k) for k in vars(StudyConfig())})

    for mu in args.mu:
        spec = DdmSpec(u={"x": mu, "y": 0.0}, boundary=HyperbolicBoundary(1.0, 1.0), dt=cfg.dt)
        sim = sample_ddm(spec, ("x", "y"), cfg.n, seed=cfg.seed, workers=cfg.workers)
        edges = np.quantile(sim.rt, np.linspace(0, 1, cfg.bins + 1))
        which = np.clip(np.searchsorted(edges, sim.rt, side="right") - 1, 0, cfg.bins - 1)
        print(f"mu={mu}  p_hat={sim.chose_x.mean():.4f}  redrawn={sim.resampled}")
        print(f"{'t_med':>8} {'n_x':>6} {'n_y':>6} {'ratio':>8} {'target':>8} {'rel.dev':>8}")
        for k in range(cfg.bins):
            m = which == k
            cx, cy = int(np.sum(m & sim.chose_x)), int(np.sum(m & ~sim.chose_x))
            t_med = float(np.median(sim.rt[m]))
            target = float(ddm_likelihood_ratio(spec, t_med, mu=mu))
            if cx < cfg.min_side or cy < cfg.min_side:
                print(f"{t_med:8.3f} {cx:6d} {cy:6d} {'sparse':>8}")
                continue
            print(f"{t_med:8.3f} {cx:6d} {cy:6d} {cx / cy:8.3f} {target:8.3f} {cx / cy / target - 1:+8.3f}")


if __name__ == "__main__":
    main()
