"""Command-line entry point.

Verbs: ``construct`` (run the building pipeline or emit the bundled
example curve), ``certify`` (topology, inflections, hull on a curve file),
``braid`` (realizability obstruction for the fixed braid family), and
``plot`` (SVG rendering of certified data).  Exit codes: 0 success, 2 a
certificate failed, 3 malformed input.  Reports are deterministic for a
given plan and seed; plots are views of certified polylines and segment
data, never independent computations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from gmpy2 import mpq

from . import __version__
from .bivar import Curve
from .construct import ConstructionPlan, build_hilbert, example_sextic
from .errors import CurveLabError
from .hull import count_hull_segments, trace_outer_oval
from .inflection import count_inflections
from .qmath import q_str
from .braid import obstruction_check
from .topology import certify_hyperbolic, certify_nonsingular, compute_topology

EXIT_OK = 0
EXIT_CERT = 2
EXIT_INPUT = 3


def _threads() -> int:
    """Parallelism cap from CURVELAB_THREADS (the library is sequential
    today; the cap is honored by any future parallel section)."""
    try:
        return max(1, int(os.environ.get("CURVELAB_THREADS", "1")))
    except ValueError:
        return 1


def _write_json(path: str, data) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _certify_curve(c: Curve, budget: int | None):
    """Full certificate chain for one curve; returns (report, failing-name)."""
    report: dict = {"version": __version__, "curve": c.to_json(), "certificates": {}}
    certs = report["certificates"]
    ns = certify_nonsingular(c)
    certs["nonsingular"] = ns.to_json()
    if not ns:
        return report, "nonsingular"
    try:
        tree = compute_topology(c)
    except CurveLabError as exc:
        certs["topology"] = {"error": str(exc)}
        return report, "topology"
    topo = certify_hyperbolic(c, tree)
    certs["topology"] = tree.to_json()
    certs["hyperbolic"] = topo.to_json()
    try:
        kwargs = {"budget": budget} if budget else {}
        infl = count_inflections(c, tree, **kwargs)
        certs["inflections"] = infl.to_json()
    except CurveLabError as exc:
        certs["inflections"] = {"error": str(exc)}
        return report, "inflections"
    try:
        poly = trace_outer_oval(c, tree)
        kwargs = {"budget": budget} if budget else {}
        hull = count_hull_segments(c, poly, **kwargs)
        certs["hull"] = hull.to_json()
        report["_internal"] = (tree, infl, hull, poly)
    except CurveLabError as exc:
        certs["hull"] = {"error": str(exc)}
        return report, "hull"
    return report, None


def _cmd_certify(args) -> int:
    try:
        with open(args.infile) as fh:
            c = Curve.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report, failed = _certify_curve(c, args.budget)
    report.pop("_internal", None)
    report["pass"] = failed is None
    if failed:
        report["failed_certificate"] = failed
    if args.json:
        _write_json(args.json, report)
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    if failed:
        print(f"certification failed: {failed}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _cmd_construct(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.example_sextic:
        c = example_sextic()
        report, failed = _certify_curve(c, args.budget)
        report.pop("_internal", None)
        report["pass"] = failed is None
        _write_json(os.path.join(args.out, "curve_1.json"), c.to_json())
        _write_json(os.path.join(args.out, "report.json"), report)
        if failed:
            print(f"certification failed: {failed}", file=sys.stderr)
            return EXIT_CERT
        return EXIT_OK
    if not args.plan:
        print("input error: need --plan or --example-sextic", file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(args.plan) as fh:
            plan = ConstructionPlan.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        chain = build_hilbert(plan)
    except CurveLabError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        _write_json(
            os.path.join(args.out, "report.json"),
            {"version": __version__, "plan": plan.to_json(), "pass": False, "error": str(exc)},
        )
        return EXIT_CERT
    steps = []
    for i, st in enumerate(chain):
        _write_json(os.path.join(args.out, f"curve_{i + 1}.json"), st.curve.to_json())
        steps.append(
            {
                "curve": f"curve_{i + 1}.json",
                "topology": st.topology.to_json(),
                "inflections": st.inflections.to_json() if st.inflections else None,
                "hull": st.hull.to_json(),
                "union_hull": st.union_hull.to_json() if st.union_hull else None,
                "epsilon": q_str(st.epsilon) if st.epsilon is not None else None,
            }
        )
    _write_json(
        os.path.join(args.out, "report.json"),
        {"version": __version__, "plan": plan.to_json(), "pass": True, "steps": steps},
    )
    return EXIT_OK


def _cmd_braid(args) -> int:
    ns = range(args.range[0], args.range[1] + 1) if args.range else [args.n]
    if not ns or any(n is None for n in ns):
        print("input error: need --n or --range", file=sys.stderr)
        return EXIT_INPUT
    try:
        results = [obstruction_check(n).to_json() for n in ns]
    except CurveLabError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = {"version": __version__, "results": results}
    if len(results) == 1:
        out.update(results[0])
    if args.json:
        _write_json(args.json, out)
    else:
        json.dump(out, sys.stdout, indent=2, sort_keys=True)
        print()
    return EXIT_OK


def _svg(polylines, segments, path: str) -> None:
    """SVG 1.1 scene: certified oval polylines plus hull bridge segments."""
    xs = [float(p[0]) for poly in polylines for p in poly] or [0.0]
    ys = [float(p[1]) for poly in polylines for p in poly] or [0.0]
    pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    size = 640
    sc = size / max(w, h)

    def sx(v):
        return (float(v) - x0) * sc

    def sy(v):
        return size - (float(v) - y0) * sc

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for poly in polylines:
        d = " ".join(f"{sx(px):.2f},{sy(py):.2f}" for px, py in poly)
        parts.append(
            f'<polygon points="{d}" fill="none" stroke="black" stroke-width="1.2"/>'
        )
    for seg in segments:
        ax = (seg.end_a.x.lo + seg.end_a.x.hi) / 2
        ay = (seg.end_a.y.lo + seg.end_a.y.hi) / 2
        bx = (seg.end_b.x.lo + seg.end_b.x.hi) / 2
        by = (seg.end_b.y.lo + seg.end_b.y.hi) / 2
        parts.append(
            f'<line x1="{sx(ax):.2f}" y1="{sy(ay):.2f}" x2="{sx(bx):.2f}" '
            f'y2="{sy(by):.2f}" stroke="red" stroke-width="2.5"/>'
        )
    parts.append("</svg>")
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    os.replace(tmp, path)


def _cmd_plot(args) -> int:
    try:
        with open(args.infile) as fh:
            c = Curve.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report, failed = _certify_curve(c, args.budget)
    internal = report.pop("_internal", None)
    if failed or internal is None:
        print(f"certification failed: {failed}", file=sys.stderr)
        return EXIT_CERT
    tree, _infl, hull, poly = internal
    polylines = [o.polyline for o in tree.ovals if o.polyline]
    _svg([poly] + polylines, hull.segments, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="curvelab",
        description="certified topology, inflections, hull segments, and "
        "braid obstructions for real plane curves",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("construct", help="run the building pipeline")
    p.add_argument("--plan", help="plan JSON file")
    p.add_argument("--example-sextic", action="store_true")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("certify", help="certify a curve file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--json", help="write the report here instead of stdout")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("braid", help="braid-family obstruction check")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--range", type=int, nargs=2, metavar=("A", "B"))
    p.add_argument("--json", help="write the report here instead of stdout")
    p.set_defaults(func=_cmd_braid)

    p = sub.add_parser("plot", help="SVG of a certified curve")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="SVG output path")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_plot)

    args = parser.parse_args(argv)
    _ = _threads()
    try:
        return args.func(args)
    except CurveLabError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
