"""Command line entry point: ``steklov-dirichlet <subcommand> [flags]``.

Single results are printed as JSON, sweeps are written as CSV and the
figure as SVG. The exit status is 0 iff every check requested by the
subcommand passed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import geometry as geo
from . import harness
from .shell import ShellSpec, bounds_report, rbar, shell_boundary_mass, shell_sigma1
from .solver import DEFAULT_ORDERS, DEFAULT_QUAD, boundary_trace, solve_sigma1


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    def default(o):
        if isinstance(o, (np.bool_,)):
            return bool(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.integer):
            return int(o)
        raise TypeError(type(o))

    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"


def _load_body(args) -> geo.StarBody2D:
    if args.body and args.body_file:
        raise UsageError("give either --body or --body-file, not both")
    if args.body_file:
        text = Path(args.body_file).read_text()
    elif args.body:
        text = args.body
    else:
        raise UsageError("a body is required (--body JSON or --body-file PATH)")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"body is not valid JSON: {exc}") from None
    return geo.parse_body(spec, args.quad)


def _domain(args) -> geo.AnnularDomain2D:
    if args.r1 is None:
        raise UsageError("--r1 is required")
    return geo.AnnularDomain2D(args.r1, _load_body(args))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_shell(args) -> int:
    if args.r1 is None or args.r2 is None:
        raise UsageError("shell needs --r1 and --r2")
    spec = ShellSpec(args.n, args.r1, args.r2)
    _emit(_dump({
        "n": spec.n,
        "R1": spec.R1,
        "R2": spec.R2,
        "sigma1": shell_sigma1(spec),
        "w_normalization": 1.0 / math.sqrt(shell_boundary_mass(spec)),
    }), args.out)
    return 0


def cmd_solve(args) -> int:
    domain = _domain(args)
    res = solve_sigma1(domain, args.orders, args.quad)
    out = res.to_json()
    out["convex"] = domain.outer.is_convex
    _emit(_dump(out), args.out)
    return 0


def cmd_verify_main(args) -> int:
    r1 = 1.0 if args.r1 is None else args.r1
    seeds = range(args.seed, args.seed + args.samples)
    records = harness.sweep_main(seeds, r1, N=args.orders, M=args.quad, workers=args.workers)
    _emit(harness.records_to_csv(records), args.out)
    ok = all(r.pass_main and r.pass_hl and r.pass_key for r in records)
    return 0 if ok else 1


def cmd_explore_key(args) -> int:
    r1 = 1.0 if args.r1 is None else args.r1
    rows = harness.check_key_outside_rbar(args.samples, args.seed, r1)
    _emit(harness.rows_to_csv(rows), args.out)
    return 0


def cmd_counterexample(args) -> int:
    r1 = 1e-5 if args.r1 is None else args.r1
    report = harness.counterexample_ellipse(r1, args.b)
    _emit(_dump(report), args.out)
    return 0 if report["d_ellipse_gt_d_shell"] else 1


def cmd_bounds(args) -> int:
    if args.body is None and args.body_file is None:
        if args.r1 is None or args.r2 is None:
            raise UsageError("bounds needs --body/--body-file or a shell via --r1/--r2")
        spec = ShellSpec(args.n, args.r1, args.r2)
        rep = bounds_report(spec.n, spec.R1, spec.volume, spec.R2)
        out = dict(rep.__dict__, sigma1=shell_sigma1(spec), volume=spec.volume)
        out["passed"] = harness.leq(out["sigma1"], rep.sigma_upper_volume)
        _emit(_dump(out), args.out)
        return 0 if out["passed"] else 1
    domain = _domain(args)
    out = harness.check_bounds(domain, args.orders, args.quad)
    rep = bounds_report(2, domain.R1, out["volume"], geo.max_radius(domain.outer))
    out.update(rep.__dict__)
    _emit(_dump(out), args.out)
    return 0 if out["passed"] else 1


# ---------------------------------------------------------------------------
# SVG

_RAMP = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))


def _color(u: float) -> str:
    u = min(max(u, 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(u), len(_RAMP) - 2)
    f = u - i
    c = [round(a + (b - a) * f) for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#%02x%02x%02x" % tuple(c)


def render_svg(domain: geo.AnnularDomain2D, N: int = DEFAULT_ORDERS, M: int = DEFAULT_QUAD,
               size: int = 600, segments: int = 256) -> str:
    res = solve_sigma1(domain, N, M)
    rb = rbar(2, domain.R1)
    extent = 1.1 * max(rb, geo.max_radius(domain.outer))
    k = size / (2 * extent)

    def xy(x, y):
        return f"{size / 2 + k * x:.3f},{size / 2 - k * y:.3f}"

    t = 2 * np.pi * np.arange(segments) / segments
    rho = geo.eval_rho(domain.outer, t)[0]
    px, py = rho * np.cos(t), rho * np.sin(t)
    trace = boundary_trace(res, domain, t)
    lo, hi = float(trace.min()), float(trace.max())
    span = hi - lo if hi > lo else 1.0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle id="rbar" cx="{size / 2:.3f}" cy="{size / 2:.3f}" r="{k * rb:.3f}" '
        'fill="none" stroke="#888888" stroke-dasharray="6,4" stroke-width="1"/>',
        f'<circle id="inner" cx="{size / 2:.3f}" cy="{size / 2:.3f}" r="{k * domain.R1:.3f}" '
        'fill="#dddddd" stroke="black" stroke-width="1.5"/>',
        '<path id="outer" d="M ' + " L ".join(xy(a, b) for a, b in zip(px, py)) + ' Z" '
        'fill="none" stroke="black" stroke-width="1.5"/>',
        '<g id="trace" stroke-width="6" stroke-linecap="round">',
    ]
    for i in range(segments):
        j = (i + 1) % segments
        u = 0.5 * (trace[i] + trace[j] - 2 * lo) / span
        lines.append(f'<line x1="{size / 2 + k * px[i]:.3f}" y1="{size / 2 - k * py[i]:.3f}" '
                     f'x2="{size / 2 + k * px[j]:.3f}" y2="{size / 2 - k * py[j]:.3f}" stroke="{_color(u)}"/>')
    lines.append("</g>")
    lines.append(f'<text x="10" y="20" font-family="monospace" font-size="12">sigma1 = {res.sigma1:.10g}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def cmd_plot(args) -> int:
    domain = _domain(args)
    _emit(render_svg(domain, args.orders, args.quad), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steklov-dirichlet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, body=False):
        sp.add_argument("--r1", type=float, default=None, help="inner radius R1")
        sp.add_argument("--n", type=int, default=2, help="dimension")
        sp.add_argument("--orders", type=int, default=DEFAULT_ORDERS, help="max angular order N")
        sp.add_argument("--quad", type=int, default=DEFAULT_QUAD, help="quadrature size M")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        if body:
            sp.add_argument("--body", default=None, help="outer body as inline JSON")
            sp.add_argument("--body-file", default=None, help="outer body JSON file")
        return sp

    s = common(sub.add_parser("shell", help="closed-form shell eigenvalue"))
    s.add_argument("--r2", type=float, default=None)
    s.set_defaults(func=cmd_shell)

    common(sub.add_parser("solve", help="numerical sigma1 of an annulus"), body=True).set_defaults(func=cmd_solve)

    for name, func, default_samples in (("verify-main", cmd_verify_main, 200),
                                         ("explore-key", cmd_explore_key, 100)):
        s = common(sub.add_parser(name))
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=default_samples)
        s.add_argument("--workers", type=int, default=1)
        s.set_defaults(func=func)

    s = common(sub.add_parser("counterexample", help="ellipse vs circle under a perimeter match"))
    s.add_argument("--b", type=float, default=1.1)
    s.set_defaults(func=cmd_counterexample)

    s = common(sub.add_parser("bounds", help="explicit upper bounds"), body=True)
    s.add_argument("--r2", type=float, default=None)
    s.set_defaults(func=cmd_bounds)

    common(sub.add_parser("plot", help="SVG of the domain and eigenfunction trace"), body=True).set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
