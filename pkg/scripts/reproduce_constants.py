"""Print the decimal constants behind the sign arguments and the certificate table."""
import argparse
from dataclasses import dataclass

from chmgauss import bounds


@dataclass
class Config:
    grid_step: float = 1e-5
    with_cells: bool = False


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-step", type=float, default=Config.grid_step)
    ap.add_argument("--with-cells", action="store_true", help="also run the cell-by-cell checks up to g=5000")
    cfg = Config(**vars(ap.parse_args()))
    box = bounds.DomainBox(grid_step=cfg.grid_step)
    for name, value in bounds.reference_constants(box).items():
        print(f"{name:28s} {value: .10g}")
    certs = bounds.certify_items(box) + bounds.certify_t3_bound(box)
    if cfg.with_cells:
        certs += bounds.certify_cells(box)
    print()
    for c in certs:
        print(f"{c.claim_id:26s} {'ok ' if c.verified else 'FAIL'} margin={c.worst_margin: .3e} err={c.error_bound:.1e}")
    return 0 if all(c.verified for c in certs) else 1


if __name__ == "__main__":
    raise SystemExit(main())
