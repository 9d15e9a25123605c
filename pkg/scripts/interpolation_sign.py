"""Defects of the L-series at s = 1 - m against the four signed/omega closed forms.

Longer level ranges than the default grid show where the defects plateau.
"""

import argparse
from dataclasses import dataclass, field

from qtwist.characters import character
from qtwist.cyclotomic import tower_for_orders
from qtwist.lfunction import LSetting, interpolation_check
from qtwist.padic import PadicContext


@dataclass
class SignConfig:
    p: int = 3
    M: int = 30
    h: int = 1
    chi: tuple = (1, 0)
    xi_order: int = 1
    alpha: int = 2
    mazur: str = "weighted"
    m_values: list = field(default_factory=lambda: [1, 2, 3])
    levels: list = field(default_factory=lambda: [1, 2, 3, 4, 5])


def run(cfg: SignConfig):
    ctx = PadicContext(cfg.p, cfg.M)
    chi = character(*cfg.chi)
    T = tower_for_orders(ctx, cfg.xi_order, chi.order)
    st = LSetting(T, ctx(1 + cfg.p), cfg.h, chi, T.root_of_unity(cfg.xi_order), cfg.alpha,
                  max(cfg.levels), mazur=cfg.mazur)
    for m in cfg.m_values:
        rep = interpolation_check(m, st, cfg.levels, strict=False).as_dict()
        print(f"m={m} resolved sign={rep['sign']} omega={rep['omega_factor']} "
              f"coincident={rep['coincident_variants']}")
        for name, ds in rep["defects"].items():
            print(f"    {name:22s} {' '.join(f'{d:>3}' for d in ds)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--h", type=int, default=1)
    ap.add_argument("--chi", type=int, nargs=2, default=[1, 0], metavar=("MODULUS", "INDEX"))
    ap.add_argument("--xi-order", type=int, default=1)
    ap.add_argument("--alpha", type=int, default=2)
    ap.add_argument("--mazur", choices=("weighted", "standard"), default="weighted")
    ap.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    a = ap.parse_args()
    run(SignConfig(p=a.p, h=a.h, chi=tuple(a.chi), xi_order=a.xi_order, alpha=a.alpha, mazur=a.mazur,
                   levels=a.levels))


if __name__ == "__main__":
    main()
