"""Print the table of Z(Z_2(i)) over a grid of twists and place counts."""

import argparse
from dataclasses import dataclass, fields

from cohwork.positive import twist_z_pro


@dataclass
class Config:
    i_min: int = -4
    i_max: int = 4
    max_real: int = 2
    max_complex: int = 2
    strict: bool = False


def parse(argv=None) -> Config:
    p = argparse.ArgumentParser(description=__doc__)
    for f in fields(Config):
        if f.type is bool or f.type == "bool":
            p.add_argument(f"--{f.name.replace('_', '-')}", action="store_true")
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", type=int, default=f.default)
    return Config(**vars(p.parse_args(argv)))


def run(cfg: Config) -> list[tuple[int, int, int, str, str]]:
    rows = []
    for i in range(cfg.i_min, cfg.i_max + 1):
        for r in range(cfg.max_real + 1):
            for s in range(cfg.max_complex + 1):
                if r + s:
                    z = twist_z_pro(i, r, s, strict=cfg.strict)
                    rows.append((i, r, s, str(z), z.note))
    return rows


def main(argv=None):
    cfg = parse(argv)
    print(f"{'i':>3} {'r':>2} {'s':>2}  Z(Z_2(i))")
    for i, r, s, text, note in run(cfg):
        print(f"{i:>3} {r:>2} {s:>2}  {text}{'   (' + note + ')' if note else ''}")


if __name__ == "__main__":
    main()
