"""Time each verification suite and optionally write the timings as JSON."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from cohwork.harness import SUITES, run_suite


@dataclass
class Config:
    count: int = 100
    seed: int = 42
    repeats: int = 1
    out: str = ""


def run(cfg: Config) -> list[dict]:
    rows = []
    for name in SUITES:
        times = []
        for _ in range(cfg.repeats):
            t0 = time.perf_counter()
            res = run_suite(name, cfg.count, cfg.seed)
            times.append(time.perf_counter() - t0)
        rows.append({"suite": name, "instances": res.instances, "ok": res.ok, "best_seconds": round(min(times), 3)})
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in asdict(Config()).items():
        p.add_argument(f"--{name}", type=type(val), default=val)
    cfg = Config(**vars(p.parse_args(argv)))
    rows = run(cfg)
    for row in rows:
        print(f"{row['suite']:<13} {row['instances']:>4} instances  {row['best_seconds']:>8.2f}s  {'ok' if row['ok'] else 'FAILED'}")
    print(f"total {sum(r['best_seconds'] for r in rows):.2f}s")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "suites": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
