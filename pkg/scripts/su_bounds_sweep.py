"""Sweep SU(n) bounds over n for several primes and summarise how tight they are.

For each prime reports the n with exact exponent, the widest gap between the
lower bound and the recursive upper bound, and where the recursive bound
improves on the closed form. Optionally dumps a CSV per prime.
"""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from liexp.tables import format_su, su_rows


@dataclass
class Config:
    primes: list[int] = field(default_factory=lambda: [3, 5, 7, 11, 13])
    max_n: int = 200
    csv_dir: Path | None = None


def run(cfg: Config) -> None:
    for p in cfg.primes:
        rows = su_rows(p, cfg.max_n)
        exact = [r.n for r in rows if r.exact and r.n > p]
        widest = max(rows, key=lambda r: r.upper_recursive - r.lower)
        better = [r.n for r in rows if r.upper_recursive < r.upper_closed]
        print(f"p={p}: exact for n>p at {exact}")
        print(f"  widest gap at n={widest.n}: [{widest.lower}, {widest.upper_recursive}]")
        if better:
            print(f"  recursion beats closed form for {len(better)} values, first at n={better[0]}")
        if cfg.csv_dir:
            cfg.csv_dir.mkdir(parents=True, exist_ok=True)
            (cfg.csv_dir / f"su_p{p}.csv").write_text(format_su(rows, p, "csv"))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7, 11, 13])
    ap.add_argument("--max-n", type=int, default=200)
    ap.add_argument("--csv-dir", type=Path)
    a = ap.parse_args()
    run(Config(a.primes, a.max_n, a.csv_dir))
