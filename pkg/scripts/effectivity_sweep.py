"""Sweep effectivity checks over window sizes and levels for the bundled families.

    python scripts/effectivity_sweep.py --nmax 3 --samples 20 --csv sweep.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass

from opcalc.dfamily import effectivity_check
from opcalc.suites import dd2_family, expmono_family, grid_family


@dataclass
class SweepConfig:
    nmax: int = 3
    samples: int = 20
    seed: int = 0
    grid_boxes: tuple[int, ...] = (4, 5, 6)
    expmono_sizes: tuple[int, ...] = (6, 8)
    dd2_sizes: tuple[int, ...] = (8, 12)


@dataclass
class SweepRow:
    family: str
    size: int
    n: int
    verdict: str
    inclusions: int
    failed: int
    samples: int
    seconds: float


def families(cfg: SweepConfig):
    for b in cfg.grid_boxes:
        yield "grid", b, grid_family((b, b))
    for n in cfg.expmono_sizes:
        yield "expmono", n, expmono_family(n)
    for n in cfg.dd2_sizes:
        yield "dd2", n, dd2_family(n)


def sweep(cfg: SweepConfig) -> list[SweepRow]:
    rows = []
    for name, size, fam in families(cfg):
        for n in range(cfg.nmax + 1):
            t0 = time.perf_counter()
            rep = effectivity_check(fam, n, samples=cfg.samples, seed=cfg.seed)
            rows.append(SweepRow(
                name, size, n, rep.verdict, len(rep.linear_inclusions),
                sum(not r.passed for r in rep.linear_inclusions), rep.samples_checked,
                round(time.perf_counter() - t0, 3),
            ))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=SweepConfig.nmax)
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--csv", help="also write rows to this file")
    args = ap.parse_args(argv)
    cfg = SweepConfig(nmax=args.nmax, samples=args.samples, seed=args.seed)
    rows = sweep(cfg)
    header = list(asdict(rows[0]))
    table = [header] + [[str(v) for v in asdict(r).values()] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    for line in table:
        print("  ".join(c.rjust(w) for c, w in zip(line, widths)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=header)
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
