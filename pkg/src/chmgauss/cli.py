"""Command-line reports: critical values, classification, scans and verification suites.

Exit codes: 0 success, 1 a verification failed, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, bounds, critical, periods, surface

COMMANDS = ("critical", "nullity", "index", "scan", "verify-bounds", "verify-periods", "verify-systems")
SCAN_FIELDS = ("g", "l", "X", "has_roots", "t_minus", "t_plus", "t3", "margin")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    genus: int | None = None
    genus_min: int | None = None
    genus_max: int | None = None
    t: str | None = None
    output: str = "csv"
    tol: float = critical.DEFAULT_TOL
    roots_only: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output not in ("csv", "json"):
            raise UsageError("--output must be csv or json")
        if self.genus is not None and self.genus < 1:
            raise UsageError("--genus must be >= 1")
        if self.genus == 1 and self.command not in ("nullity", "index"):
            raise UsageError("genus 1 is only supported by nullity and index")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if math.isnan(x) else x
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _dump(obj, out) -> None:
    out.write(json.dumps(_jsonable(obj), indent=2, sort_keys=False))
    out.write("\n")


def _header(cfg: RunConfig) -> dict:
    return {"config": asdict(cfg), "version": __version__}


def _csv(out, header, rows) -> None:
    out.write(",".join(header) + "\n")
    for r in rows:
        out.write(",".join(fmt(v) for v in r) + "\n")


def _require_genus(cfg: RunConfig) -> int:
    if cfg.genus is None:
        raise UsageError(f"{cfg.command} needs --genus")
    return cfg.genus


def _resolve_t(cfg: RunConfig, params: critical.GenusParams):
    """(numeric t or None for the surface itself, label)."""
    spec = (cfg.t or "surface").strip().lower()
    if params.g == 1:
        if spec not in ("costa", "surface", "t2"):
            raise UsageError("genus 1 supports only --t costa")
        return None, "costa"
    if spec == "costa":
        raise UsageError("--t costa needs --genus 1")
    if spec == "surface":
        return None, "t2"
    if spec in ("t1", "t2", "t3"):
        return getattr(critical.critical_values(params), spec), spec
    try:
        t = float(spec)
    except ValueError:
        raise UsageError(f"cannot parse --t {cfg.t!r}") from None
    if not t > 0 or not math.isfinite(t):
        raise UsageError("--t must be a positive number")
    return t, "value"


# --------------------------------------------------------------- commands


def cmd_critical(cfg: RunConfig, out) -> int:
    g = _require_genus(cfg)
    cv = critical.critical_values(critical.GenusParams(g))
    if cfg.output == "json":
        _dump({**_header(cfg), "g": g,
               "t1": cv.t1, "t2": cv.t2, "t3": cv.t3,
               "rel_err_bound": {"t1": cv.rel_err[0], "t2": cv.rel_err[1], "t3": cv.rel_err[2]},
               "t3_gt_t2": cv.t3 > cv.t2}, out)
    else:
        _csv(out, ("g", "t1", "t2", "t3", "t1_rel_err", "t2_rel_err", "t3_rel_err"),
             [(g, cv.t1, cv.t2, cv.t3, *cv.rel_err)])
    return 0


def cmd_nullity(cfg: RunConfig, out) -> int:
    params = critical.GenusParams(_require_genus(cfg))
    t, label = _resolve_t(cfg, params)
    st = critical.nullity_status(params, t, cfg.tol)
    tv = math.nan if st.t is None else st.t
    if cfg.output == "json":
        _dump({**_header(cfg), "g": params.g, "t": tv, "t_label": label, "nullity": st.value,
               "determinate": st.determinate, "lower_bound": st.lower_bound, "matched": st.matched}, out)
    else:
        _csv(out, ("g", "t", "nullity", "determinate", "lower_bound", "matched"),
             [(params.g, tv, st.value if st.determinate else "undetermined", st.determinate,
               st.lower_bound, st.matched or "none")])
    return 0


def cmd_index(cfg: RunConfig, out) -> int:
    params = critical.GenusParams(_require_genus(cfg))
    t, label = _resolve_t(cfg, params)
    try:
        ind = critical.index(params, t, cfg.tol)
    except critical.OutOfValidity as exc:
        raise UsageError(str(exc)) from None
    tv = math.nan if t is None and params.g == 1 else (critical.critical_values(params).t2 if t is None else t)
    if cfg.output == "json":
        _dump({**_header(cfg), "g": params.g, "t": tv, "t_label": label, "index": ind}, out)
    else:
        _csv(out, ("g", "t", "index"), [(params.g, tv, ind)])
    return 0


def cmd_scan(cfg: RunConfig, out) -> int:
    lo = cfg.genus_min if cfg.genus_min is not None else cfg.genus
    hi = cfg.genus_max if cfg.genus_max is not None else cfg.genus
    if lo is None or hi is None:
        raise UsageError("scan needs --genus-min/--genus-max (or --genus)")
    if not 2 <= lo <= hi:
        raise UsageError("scan needs 2 <= genus-min <= genus-max")
    n_rows = n_roots = 0
    failures = 0
    worst = math.inf
    if cfg.output == "json":
        out.write("{\n  " + json.dumps(_jsonable(_header(cfg)))[1:-1] + ',\n  "rows": [')
    else:
        out.write(",".join(SCAN_FIELDS) + "\n")
    first = True
    for blk in critical.iter_scan(lo, hi, cfg.roots_only):
        has = blk["has_roots"]
        bad = has & ~(blk["margin"] - blk["margin_err"] > 0)
        failures += int(bad.sum())
        if has.any():
            worst = min(worst, float(np.min(blk["margin"][has])))
        n_rows += len(has)
        n_roots += int(has.sum())
        fields = SCAN_FIELDS + (("X_err", "margin_err") if cfg.output == "json" else ())
        cols = [blk[k] for k in fields]
        for r in zip(*cols):
            if cfg.output == "json":
                out.write(("\n    " if first else ",\n    ") + json.dumps(_jsonable(dict(zip(fields, r)))))
            else:
                out.write(",".join(fmt(v) for v in r) + "\n")
            first = False
    if cfg.output == "json":
        summary = {"rows": n_rows, "rows_with_roots": n_roots, "min_margin": None if n_roots == 0 else worst,
                   "uncertified_margins": failures}
        out.write('\n  ],\n  "summary": ' + json.dumps(summary) + "\n}\n")
    print(f"scan g={lo}..{hi}: {n_rows} rows, {n_roots} with real roots, "
          f"{failures} uncertified margins", file=sys.stderr)
    return 1 if failures else 0


def _cert_rows(certs):
    return [(c.claim_id, c.verified, c.worst_margin, c.error_bound, c.method,
             ";".join(f"{k}={v}" for k, v in c.worst_point)) for c in certs]


def cmd_verify_bounds(cfg: RunConfig, out) -> int:
    box = bounds.DomainBox(g_max=cfg.genus_max or bounds.BOX.g_max)
    certs = bounds.certify_all(box)
    consts = bounds.reference_constants(box)
    if cfg.output == "json":
        _dump({**_header(cfg), "certificates": [asdict(c) for c in certs], "constants": consts}, out)
    else:
        out.write("claim_id,verified,worst_margin,error_bound,method,worst_point\n")
        for r in _cert_rows(certs):
            out.write(f"{r[0]},{fmt(r[1])},{fmt(r[2])},{fmt(r[3])},\"{r[4]}\",{r[5]}\n")
    return 0 if all(c.verified for c in certs) else 1


def _genus_range(cfg: RunConfig, default: tuple[int, int]) -> range:
    if cfg.genus is not None:
        return range(cfg.genus, cfg.genus + 1)
    lo = cfg.genus_min if cfg.genus_min is not None else default[0]
    hi = cfg.genus_max if cfg.genus_max is not None else default[1]
    if not 2 <= lo <= hi:
        raise UsageError("need 2 <= genus-min <= genus-max")
    return range(lo, hi + 1)


def cmd_verify_periods(cfg: RunConfig, out) -> int:
    rows = []
    ok = True
    for g in _genus_range(cfg, (2, 5)):
        cmp = periods.compare_closed_forms(g)
        worst = max(c.rel_diff for c in cmp)
        phase = all(c.phase_ok for c in cmp)
        coh = periods.cohomology_check(g)
        rot = periods.rotation_check(g)
        res = max(max(abs(surface.residue_at(f, c).value) for c in ("Q0", "P1"))
                  for f in surface.basis_forms(g))
        passed = worst < periods.PERIOD_TOL and phase and coh.passed and rot < periods.PERIOD_TOL and res < 1e-10
        ok &= passed
        rows.append((g, worst, phase, coh.max_rel, rot, res, passed))
    header = ("g", "closed_form_max_rel", "phases_imaginary", "cohomology_max_rel", "rotation_max_rel",
              "max_residue", "passed")
    if cfg.output == "json":
        _dump({**_header(cfg), "rows": [dict(zip(header, r)) for r in rows], "passed": ok}, out)
    else:
        _csv(out, header, rows)
    return 0 if ok else 1


def cmd_verify_systems(cfg: RunConfig, out) -> int:
    rows = []
    ok = True
    for g in _genus_range(cfg, (2, 3)):
        cv = critical.critical_values(critical.GenusParams(g))
        table = periods.period_table(g, numeric=True)
        for label, t, expected in (("t1", cv.t1, 4), ("t2", cv.t2, 4), ("t3", cv.t3, 5),
                                   ("generic", math.sqrt(cv.t1 * cv.t2), 3)):
            for mode in ("reduced", "full"):
                a = periods.assemble_system(g, t, mode, table=table)
                passed = a.nullity == expected and a.gap_ok
                ok &= passed
                rows.append((g, label, t, mode, a.dim_solution, a.nullity, expected, a.gap_ok, passed))
    header = ("g", "t_label", "t", "mode", "dim_H", "nullity", "expected", "gap_ok", "passed")
    if cfg.output == "json":
        _dump({**_header(cfg), "rows": [dict(zip(header, r)) for r in rows], "passed": ok}, out)
    else:
        _csv(out, header, rows)
    return 0 if ok else 1


HANDLERS = {
    "critical": cmd_critical, "nullity": cmd_nullity, "index": cmd_index, "scan": cmd_scan,
    "verify-bounds": cmd_verify_bounds, "verify-periods": cmd_verify_periods,
    "verify-systems": cmd_verify_systems,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        return HANDLERS[cfg.command](cfg, out)
    except (UsageError, critical.DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chmgauss", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--genus", type=int)
        sp.add_argument("--genus-min", type=int)
        sp.add_argument("--genus-max", type=int)
        sp.add_argument("--output", choices=("csv", "json"), default="csv")
        sp.add_argument("--tol", type=float, default=critical.DEFAULT_TOL)
        if name in ("nullity", "index"):
            sp.add_argument("--t", default="surface",
                            help="positive number, t1, t2, t3, surface (the surface's own Gauss map) or costa (g = 1)")
        if name == "scan":
            sp.add_argument("--roots-only", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command, genus=args.genus, genus_min=args.genus_min, genus_max=args.genus_max,
            t=getattr(args, "t", None), output=args.output, tol=args.tol,
            roots_only=getattr(args, "roots_only", False),
        )
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
