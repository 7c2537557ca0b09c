"""Stream the (l, g) cells with real critical parameters to CSV and report the tightest margin."""
import argparse
import sys
from dataclasses import dataclass

import numpy as np

from chmgauss import critical


@dataclass
class Config:
    g_min: int = 38
    g_max: int = 5000
    workers: int | None = None
    out: str = "-"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g-min", type=int, default=Config.g_min)
    ap.add_argument("--g-max", type=int, default=Config.g_max)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default="-")
    cfg = Config(**vars(ap.parse_args()))
    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w")
    cols = ("g", "l", "X", "t_minus", "t_plus", "t3", "margin", "margin_err")
    fh.write(",".join(cols) + "\n")
    n, worst, where = 0, np.inf, None
    for blk in critical.iter_scan(cfg.g_min, cfg.g_max, roots_only=True, workers=cfg.workers):
        for row in zip(*(blk[c] for c in cols)):
            fh.write(",".join(str(v) for v in row) + "\n")
        if len(blk["g"]):
            i = int(np.argmin(blk["margin"]))
            if blk["margin"][i] < worst:
                worst, where = float(blk["margin"][i]), (int(blk["g"][i]), int(blk["l"][i]))
            n += len(blk["g"])
    if fh is not sys.stdout:
        fh.close()
    print(f"{n} cells with real roots; min t_-^2 - t3^2 = {worst:.6e} at (g, l) = {where}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
