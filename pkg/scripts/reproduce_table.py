"""Rebuild the exceptional-groups table, cross-check every cell, and write all formats.

    python scripts/reproduce_table.py --out results/
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from liexp.bounds import RuleContext
from liexp.exceptional import DEFAULT_PRIMES, crosscheck_table, exceptional_table
from liexp.tables import FORMATS, format_exceptional


@dataclass
class Config:
    out: Path = Path("results")
    strict: bool = False
    primes: tuple[int, ...] = DEFAULT_PRIMES


def run(cfg: Config) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    rows = exceptional_table(cfg.primes, ctx_for=lambda p: RuleContext(p, strict=cfg.strict))
    ext = {"text": "txt", "csv": "csv", "latex": "tex", "json": "json"}
    for fmt in FORMATS:
        (cfg.out / f"exceptional_table.{ext[fmt]}").write_text(format_exceptional(rows, fmt))
    report = crosscheck_table(strict=cfg.strict, primes=cfg.primes)
    print(format_exceptional(rows, "text"))
    print(report.summary())
    return 0 if report.ok else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--strict", action="store_true")
    a = ap.parse_args()
    raise SystemExit(run(Config(out=a.out, strict=a.strict)))
