"""Print Riemann-sum defects against the closed-form twisted q-Bernoulli numbers.

    python scripts/witt_table.py --p 3 --levels 2 3 4 5 6
"""

import argparse
from dataclasses import dataclass, field

from qtwist.cyclotomic import tower_for_orders
from qtwist.padic import PadicContext
from qtwist.qbernoulli import IntegrandSpec, QSetting, beta_twisted, q_integral_moments
from qtwist.suites import fmt_val


@dataclass
class WittConfig:
    p: int = 3
    M: int = 30
    q_exponent: int = 1
    h_values: list = field(default_factory=lambda: [0, 1, 2])
    m_max: int = 4
    levels: list = field(default_factory=lambda: [2, 3, 4, 5])


def run(cfg: WittConfig):
    ctx = PadicContext(cfg.p, cfg.M)
    q = ctx(1 + cfg.p ** cfg.q_exponent)
    print(f"p={cfg.p} q=1+p^{cfg.q_exponent} M={cfg.M}  levels {cfg.levels}")
    for order in (1, cfg.p):
        T = tower_for_orders(ctx, order)
        xi = T.root_of_unity(order)
        for h in cfg.h_values:
            S = QSetting(T, q, h)
            sums = {N: q_integral_moments(IntegrandSpec(cfg.m_max, xi, weight=h - 1), S, N) for N in cfg.levels}
            for m in range(cfg.m_max + 1):
                closed = beta_twisted(m, 0, S, xi)
                ds = [fmt_val(sums[N][m].agreement(closed)) for N in cfg.levels]
                print(f"  xi_order={order} h={h} m={m}: " + " ".join(f"{d:>3}" for d in ds))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--M", type=int, default=30)
    ap.add_argument("--m-max", type=int, default=4)
    ap.add_argument("--levels", type=int, nargs="+", default=[2, 3, 4, 5])
    a = ap.parse_args()
    run(WittConfig(p=a.p, M=a.M, m_max=a.m_max, levels=a.levels))


if __name__ == "__main__":
    main()
