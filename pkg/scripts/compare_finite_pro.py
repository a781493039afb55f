"""Compare Z(M) on finite models Z/2^k(i) over C2 with the 2-adic twist table.

Each finite model has r real places (decomposition group C2) and s complex
places, with the twist given by the sign character. The 2-adic prediction is
reduced to level k by sending 2^t Z_2 to Z/2^(k-t).
"""

import argparse
from dataclasses import dataclass

from cohwork.algebra import FinMod
from cohwork.gmodules import GModule
from cohwork.groups import catalog_group
from cohwork.positive import GlobalSetup, Place, twist_z_pro, z_direct, z_formula
from cohwork.tate import sign_character


@dataclass
class Config:
    k: int = 3
    i_min: int = -2
    i_max: int = 3
    max_real: int = 2
    max_complex: int = 2


def finite_model(k: int, i: int, r: int, s: int) -> GlobalSetup:
    G = catalog_group("C2")
    places = [Place(f"r{t}", "real", G.whole()) for t in range(r)]
    places += [Place(f"c{t}", "complex", G.trivial_subgroup()) for t in range(s)]
    M = GModule.trivial(G, FinMod((k,), k))
    return GlobalSetup(G, sign_character(G, k), M, i, places, 4)


def reduced_prediction(k: int, i: int, r: int, s: int) -> list[int] | None:
    z = twist_z_pro(i, r, s)
    if z.rank is not None:
        return None
    return sorted(1 << (k - x.valuation) for x in z.summands if x.valuation < k)


def run(cfg: Config) -> list[dict]:
    rows = []
    for i in range(cfg.i_min, cfg.i_max + 1):
        for r in range(cfg.max_real + 1):
            for s in range(cfg.max_complex + 1):
                if not r + s:
                    continue
                S = finite_model(cfg.k, i, r, s)
                formula = sorted(z_formula(S).invariant_factors())
                rows.append({
                    "i": i, "r": r, "s": s,
                    "direct": sorted(z_direct(S).invariant_factors()),
                    "formula": formula,
                    "reduced_pro": reduced_prediction(cfg.k, i, r, s),
                })
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=val)
    cfg = Config(**vars(p.parse_args(argv)))
    agree = 0
    rows = run(cfg)
    print(f"k = {cfg.k}")
    print(f"{'i':>3} {'r':>2} {'s':>2}  {'direct':<16} {'formula':<16} reduced 2-adic")
    for row in rows:
        same = row["formula"] == row["reduced_pro"]
        agree += same
        print(f"{row['i']:>3} {row['r']:>2} {row['s']:>2}  {str(row['direct']):<16} {str(row['formula']):<16} "
              f"{row['reduced_pro']}{'' if same else '   differs'}")
    print(f"{agree}/{len(rows)} finite models match the reduced 2-adic table")


if __name__ == "__main__":
    main()
