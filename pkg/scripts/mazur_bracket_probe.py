"""Compare the h-weighted Mazur bracket with the classical one.

For each h the script reports the density-check defects (regularized measure
against the Mazur-type measure) and the additivity defects of the Mazur-type
measure itself. Only h = 1 behaves for the h-weighted form.
"""

import argparse
from dataclasses import dataclass, field

from qtwist.cyclotomic import tower_for_orders
from qtwist.measures import Ball, MazurType, additivity_check, mazur_density_check
from qtwist.padic import PadicContext
from qtwist.qbernoulli import QSetting
from qtwist.suites import fmt_val


@dataclass
class ProbeConfig:
    p: int = 3
    q: int = 4
    alpha: int = 2
    M: int = 30
    h_values: list = field(default_factory=lambda: [0, 1, 2, 3])
    n_values: list = field(default_factory=lambda: [1, 2])
    levels: list = field(default_factory=lambda: [2, 3, 4])


def run(cfg: ProbeConfig):
    ctx = PadicContext(cfg.p, cfg.M)
    T = tower_for_orders(ctx, 1)
    for h in cfg.h_values:
        S = QSetting(T, ctx(cfg.q), h)
        for variant in ("weighted", "standard"):
            add = [fmt_val(additivity_check(MazurType(h, cfg.alpha, variant), Ball(a, 1, cfg.p), S))
                   for a in range(cfg.p)]
            print(f"h={h} bracket={variant:8s} additivity at level 1: {' '.join(add)}")
            for n in cfg.n_values:
                ds = [fmt_val(mazur_density_check(n, None, None, cfg.alpha, S, N, variant)) for N in cfg.levels]
                print(f"    n={n} density defects N={cfg.levels}: {' '.join(ds)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--alpha", type=int, default=2)
    ap.add_argument("--h", type=int, nargs="+", default=[0, 1, 2, 3])
    a = ap.parse_args()
    run(ProbeConfig(p=a.p, alpha=a.alpha, q=1 + a.p, h_values=a.h))


if __name__ == "__main__":
    main()
