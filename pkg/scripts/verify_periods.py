"""Loop quadrature against the closed-form periods, plus the rank of the linear systems at t1, t2, t3."""
import argparse
import math
from dataclasses import dataclass

from chmgauss import critical, periods


@dataclass
class Config:
    g_min: int = 2
    g_max: int = 5


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g-min", type=int, default=Config.g_min)
    ap.add_argument("--g-max", type=int, default=Config.g_max)
    cfg = Config(**vars(ap.parse_args()))
    ok = True
    for g in range(cfg.g_min, cfg.g_max + 1):
        worst = max(c.rel_diff for c in periods.compare_closed_forms(g))
        coh = periods.cohomology_check(g)
        cv = critical.critical_values(critical.GenusParams(g))
        dims = [periods.assemble_system(g, t).dim_solution
                for t in (cv.t1, cv.t2, cv.t3, math.sqrt(cv.t1 * cv.t2))]
        good = worst < periods.PERIOD_TOL and coh.passed and dims == [1, 1, 2, 0]
        ok &= good
        print(f"g={g}: closed-form rel {worst:.1e}, cohomology rel {coh.max_rel:.1e}, "
              f"dim H at (t1, t2, t3, generic) = {dims} {'ok' if good else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
