"""Command-line interface: ``wilkshift <command> [options]``.

Exit status is 0 on success, 1 on a usage or numerical error (the error
class name is printed) and 2 when a verification suite finds violations.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import cantor, chart, dynamics, verify
from .chart import A_MAX, MINUS, PLUS, ChartPoint
from .errors import WilkshiftError
from .precision import DEFAULT_DIGITS, DIGITS_ENV_VAR, PrecisionCtx
from .serialize import dec, dumps_csv, dumps_json
from .signs import SignSeq, all_strings
from .tridiag import max_abs_diff, shifted_step

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
DEFAULT_OUT_DIGITS = 30


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    ctx: PrecisionCtx
    a: Fraction
    fmt: str
    output: str | None
    out_digits: int
    args: argparse.Namespace


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}") from None


def _decimal(text: str) -> str:
    _fraction(text)
    return text


def _num(cfg: RunConfig, text: str):
    return cfg.ctx.num(Fraction(text)) if "/" in text else cfg.ctx.num(text)


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV_VAR)
    try:
        return int(raw) if raw else DEFAULT_DIGITS
    except ValueError:
        return DEFAULT_DIGITS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help=f"working decimal digits (default ${DIGITS_ENV_VAR} or {DEFAULT_DIGITS})")
    common.add_argument("--a", type=_fraction, default=A_MAX, help="rectangle half-width, at most 1/10")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the artifact here instead of stdout")
    common.add_argument("--out-digits", type=int, default=DEFAULT_OUT_DIGITS,
                        help="significant digits written per number")

    parser = _Parser(prog="wilkshift", description="Wilkinson-shift QR dynamics near T_X.")
    sub = parser.add_subparsers(dest="command", required=True)

    def point(p):
        p.add_argument("--x", type=_decimal, required=True)
        p.add_argument("--y", type=_decimal, required=True)

    p = sub.add_parser("step", parents=[common], help="one Wilkinson step")
    point(p)
    p.add_argument("--side", choices=(PLUS, MINUS), help="force a branch of W")
    p.add_argument("--matrix", action="store_true", help="also run the matrix-level step")

    p = sub.add_parser("orbit", parents=[common], help="iterate the Wilkinson map")
    point(p)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--no-stop", action="store_true", help="do not stop after escaping")

    p = sub.add_parser("classify", parents=[common], help="orbit plus convergence-rate class")
    point(p)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--no-stop", action="store_true")

    p = sub.add_parser("locate", parents=[common], help="bracket the arc of a sign sequence")
    p.add_argument("--y", type=_decimal, required=True)
    p.add_argument("--sigma", required=True, help="e.g. '+-+' or '+-(+)'")
    p.add_argument("--depth", type=int, help="number of symbols to certify (default: precision cap)")

    p = sub.add_parser("intervals", parents=[common], help="interval table on a horizontal line")
    p.add_argument("--y", type=_decimal, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gaps", action="store_true", help="also bracket the Y0 parts")

    p = sub.add_parser("boxcount", parents=[common], help="ball cover of a horizontal section")
    p.add_argument("--y", type=_decimal, required=True)
    p.add_argument("--r", type=_fraction, required=True)

    p = sub.add_parser("cover", parents=[common], help="ball cover of the exceptional set")
    p.add_argument("--r", type=_fraction, required=True)

    p = sub.add_parser("render", parents=[common], help="polyline data for figures")
    p.add_argument("--what", choices=("sets", "images"), default="sets")
    p.add_argument("--n", type=int, default=2, help="level of the sets X_n^tau")
    p.add_argument("--heights", type=int, default=8, help="heights per sign of y (or points per edge)")

    p = sub.add_parser("verify", parents=[common], help="run sampled verification suites")
    p.add_argument("--suite", required=True, choices=(*verify.SUITES, "all"))
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--regions", default=None,
                   help="comma list among R,R+,R-,X0+,X0- (lemma3.5 and lemma3.6)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, help="extra random cone samples (lemma4.4)")
    return parser


def _config(args) -> RunConfig:
    digits = args.digits if args.digits is not None else _default_digits()
    try:
        ctx = PrecisionCtx(digits)
    except ValueError as exc:
        raise UsageError(f"--digits: {exc}") from None
    try:
        a = chart.check_a(args.a)
    except ValueError as exc:
        raise UsageError(f"--a: {exc}") from None
    if args.out_digits < 1:
        raise UsageError("--out-digits must be positive")
    return RunConfig(args.command, ctx, a, args.format, args.output,
                     min(args.out_digits, digits), args)


def _label_row(label: chart.RegionLabel):
    return {"in_rect": label.in_rect, "in_X0": label.in_wedge_X0, "in_Y0": label.in_Y0,
            "in_D0": label.in_D0 or "", "on_rh": label.on_rh, "on_rv": label.on_rv}


def _orbit_rows(rec: dynamics.OrbitRecord):
    rows = []
    for k, (p, lab) in enumerate(zip(rec.points, rec.regions)):
        row = {"k": k, "x": p.x, "y": p.y, "side": lab.side}
        row.update(_label_row(lab))
        row["shift"] = rec.shifts[k] if k < len(rec.shifts) else None
        rows.append(row)
    return rows


def _point(cfg: RunConfig) -> ChartPoint:
    return ChartPoint(_num(cfg, cfg.args.x), _num(cfg, cfg.args.y))


def cmd_step(cfg: RunConfig):
    p = _point(cfg)
    ctx = cfg.ctx
    side = cfg.args.side or chart.side_of(p.x)
    shift, x1, y1 = dynamics.branch_step(ctx.mp, side, p.x, p.y)
    image = dynamics.w_side(side, p, ctx, cfg.a)
    result = {"digits": ctx.digits, "x": p.x, "y": p.y, "side": side, "shift": shift,
              "x1": image.x, "y1": image.y}
    if cfg.args.matrix:
        t1 = shifted_step(shift, chart.phi(p, ctx), ctx, extend=True)
        result["matrix_vs_chart"] = max_abs_diff(t1, chart.phi(image, ctx))
    rows = [{"k": 0, "x": p.x, "y": p.y, "side": side, "shift": shift},
            {"k": 1, "x": image.x, "y": image.y, "side": chart.side_of(image.x), "shift": None}]
    return result, rows, EXIT_OK


def cmd_orbit(cfg: RunConfig):
    rec = dynamics.orbit(_point(cfg), cfg.args.steps, cfg.ctx, cfg.a,
                         stop_at_escape=not cfg.args.no_stop)
    result = {"digits": cfg.ctx.digits}
    result.update({k: getattr(rec, k) for k in
                   ("points", "shifts", "sides", "regions", "escape_step", "escape_side",
                    "underflow_step", "kmax")})
    return result, _orbit_rows(rec), EXIT_OK


def cmd_classify(cfg: RunConfig):
    rec = dynamics.orbit(_point(cfg), cfg.args.steps, cfg.ctx, cfg.a,
                         stop_at_escape=not cfg.args.no_stop)
    cls = dynamics.classify(rec, cfg.ctx)
    result = {"digits": cfg.ctx.digits, "kind": cls.kind, "witness_step": cls.witness_step,
              "ratio_log": cls.ratio_log, "sides": rec.sides, "escape_step": rec.escape_step,
              "escape_side": rec.escape_side,
              "quadratic_ratios": dynamics.rate_ratios(rec, 2),
              "cubic_ratios": dynamics.rate_ratios(rec, 3, rec.escape_step or 0)}
    rows = _orbit_rows(rec)
    for row in rows:
        row["kind"] = cls.kind
    return result, rows, EXIT_OK


def _bracket_row(b: cantor.Bracket):
    return {"tau": b.tau, "y": b.y, "lo": b.lo, "hi": b.hi, "outer_lo": b.outer_lo,
            "outer_hi": b.outer_hi, "width": b.width}


def cmd_locate(cfg: RunConfig):
    try:
        sigma = SignSeq.parse(cfg.args.sigma)
    except ValueError as exc:
        raise UsageError(f"--sigma: {exc}") from None
    y = _num(cfg, cfg.args.y)
    depth = cfg.args.depth
    if depth is None:
        depth = int(min(cantor.depth_cap(y, cfg.ctx.digits), sigma.defined_length()))
    b = cantor.locate(y, sigma, depth, cfg.ctx, cfg.a)
    result = {"digits": cfg.ctx.digits, "sigma": str(sigma), "depth": depth, "midpoint": b.mid}
    result.update(_bracket_row(b))
    return result, [dict(_bracket_row(b), midpoint=b.mid)], EXIT_OK


def cmd_intervals(cfg: RunConfig):
    y = _num(cfg, cfg.args.y)
    n = cfg.args.n
    tree = cantor.interval_tree(y, n, cfg.ctx, cfg.a)
    gaps = cantor.gap_table(y, tree, cfg.ctx, cfg.a) if cfg.args.gaps else {}
    lower, upper = cantor.sandwich_bounds(y, n, cfg.ctx)
    rows = []
    for tau in all_strings(n):
        row = _bracket_row(tree[tau])
        if gaps:
            row.update({"gap_lo": gaps[tau].lo, "gap_hi": gaps[tau].hi})
        row.update({"lower_bound": lower, "upper_bound": upper})
        rows.append(row)
    result = {"digits": cfg.ctx.digits, "y": y, "n": n, "lower_bound": lower,
              "upper_bound": upper, "intervals": rows}
    return result, rows, EXIT_OK


def cmd_boxcount(cfg: RunConfig):
    cover = cantor.line_cover(_num(cfg, cfg.args.y), cfg.args.r, cfg.ctx, cfg.a)
    result = {"digits": cfg.ctx.digits, "y": cover.y, "r": cover.r, "n": cover.n,
              "depth": cover.depth, "count": cover.count, "components": cover.components,
              "bound": cover.bound, "within_bound": cover.count <= cover.bound,
              "centers": cover.centers}
    rows = [{"sigma": f"{tau}(+)", "x": x, "y": cover.y} for tau, x in cover.centers.items()]
    return result, rows, EXIT_OK


def cmd_cover(cfg: RunConfig):
    cover = cantor.cover_2d(cfg.args.r, cfg.ctx, cfg.a, full=True)
    rows = [{"sigma": f"{tau}(+)", "x": x, "y": y} for (tau, _), (x, y) in cover.centers.items()]
    result = {"digits": cfg.ctx.digits, "r": cover.r, "n": cover.n, "m": cover.m,
              "count": cover.count, "bound": cover.bound, "centers": rows}
    return result, rows, EXIT_OK


def cmd_render(cfg: RunConfig):
    ctx = cfg.ctx
    e = chart.edges(ctx, cfg.a)
    k = max(cfg.args.heights, 2 if cfg.args.what == "images" else 1)
    rows = []
    if cfg.args.what == "sets":
        ys = [e.y_max * j / k for j in range(-k, k + 1) if j != 0]
        for y in ys:
            tree = cantor.interval_tree(y, cfg.args.n, ctx, cfg.a)
            for tau in all_strings(cfg.args.n):
                b = tree[tau]
                rows.append({"tau": tau, "y": y, "lo": b.lo, "hi": b.hi})
    else:
        two = ctx.num(2)
        ys = verify.linspace(-e.y_max, e.y_max, k)
        xs_plus = verify.linspace(e.x_lo, two, k)
        xs_minus = verify.linspace(two, e.x_hi, k)
        pieces = {
            "W+ left": [(PLUS, e.x_lo, y) for y in ys],
            "W+ top": [(PLUS, x, e.y_max) for x in xs_plus],
            "W+ right": [(PLUS, two, y) for y in ys],
            "W+ bottom": [(PLUS, x, -e.y_max) for x in xs_plus],
            "W- left": [(MINUS, two, y) for y in ys],
            "W- top": [(MINUS, x, e.y_max) for x in xs_minus],
            "W- right": [(MINUS, e.x_hi, y) for y in ys],
            "W- bottom": [(MINUS, x, -e.y_max) for x in xs_minus],
        }
        for name, pts in pieces.items():
            for i, (side, x, y) in enumerate(pts):
                _, x1, y1 = dynamics.branch_step(ctx.mp, side, x, y)
                rows.append({"piece": name, "k": i, "x": x1, "y": y1})
    return {"digits": ctx.digits, "what": cfg.args.what, "rows": rows}, rows, EXIT_OK


def cmd_verify(cfg: RunConfig):
    names = list(verify.SUITES) if cfg.args.suite == "all" else [cfg.args.suite]
    reports = []
    for name in names:
        options = {}
        if name in ("lemma3.5", "lemma3.6") and cfg.args.regions:
            regions = tuple(r.strip() for r in cfg.args.regions.split(","))
            bad = [r for r in regions if r not in ("R", *verify.REGIONS)]
            if bad:
                raise UsageError(f"--regions: unknown region {bad[0]!r}")
            options["regions"] = regions
        if name in ("lemma3.6", "lemma4.4", "thm6.1-claims"):
            options["seed"] = cfg.args.seed
        if name == "lemma4.4":
            options["random_samples"] = cfg.args.random
        rep = verify.run_suite(name, cfg.args.grid, cfg.ctx, cfg.a, **options)
        print(rep.summary(), file=sys.stderr)
        reports.append(rep)
    status = EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY
    result = {"digits": cfg.ctx.digits, "grid": cfg.args.grid,
              "reports": [_report(r) for r in reports]}
    rows = [{"suite": r.suite, "check": v.check, "point": " ".join(_points(v.point)),
             "detail": v.detail} for r in reports for v in r.violations]
    if not rows:
        rows = [{"suite": r.suite, "check": "", "point": "", "detail": r.summary()} for r in reports]
    return result, rows, status


def _points(values):
    return [dec(v, 20) if hasattr(v, "_mpf_") else str(v) for v in values]


def _report(rep: verify.Report):
    return {"suite": rep.suite, "summary": f"{rep.violation_count} violations / {rep.samples} samples",
            "samples": rep.samples, "violation_count": rep.violation_count,
            "violations": rep.violations, "info": rep.info}


COMMANDS = {
    "step": cmd_step,
    "orbit": cmd_orbit,
    "classify": cmd_classify,
    "locate": cmd_locate,
    "intervals": cmd_intervals,
    "boxcount": cmd_boxcount,
    "cover": cmd_cover,
    "render": cmd_render,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        result, rows, status = COMMANDS[args.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"wilkshift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WilkshiftError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"wilkshift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = {"significant_digits": cfg.out_digits, **result}
    text = dumps_json(result, cfg.out_digits) if cfg.fmt == "json" else dumps_csv(rows, cfg.out_digits)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())
