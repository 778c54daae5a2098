"""Command-line interface: analyze, render, census, segment.

Exit codes: 0 success, 1 usage error, 2 analysis error, 3 at least one
theorem-violation diagnostic.  The cell budget is overridable through the
FSQ_CELL_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import core
from .core import DigitSet, FsqError, TheoremViolation, parse_digit_set
from .classify import Classification, classify
from .census import enumerate_census, summarize, write_report
from .graphs import adjacency_structure, to_dot
from .render import parse_color, render_attractor, render_diagram, render_tree_overlay
from .segments import SegmentDigitSet, segment_intersect

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ERROR = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_digit_set(arg: str) -> DigitSet:
    """Inline digit set when the argument contains ':', else a file path."""
    if ":" in arg or arg.lstrip().startswith("{"):
        return parse_digit_set(arg)
    with open(arg) as fh:
        return parse_digit_set(fh.read())


def _apply_budget():
    raw = os.environ.get("FSQ_CELL_BUDGET")
    if raw:
        try:
            core.DEFAULT_CELL_BUDGET = int(raw)
        except ValueError:
            raise FsqError(f"FSQ_CELL_BUDGET must be an integer, got {raw!r}")
        # Modules captured the default at import time only as a keyword
        # default; re-exporting keeps explicit callers in sync.
        for mod in ("graphs", "boundary", "orders", "render"):
            module = sys.modules.get(f"{__package__}.{mod}")
            if module is not None and hasattr(module, "DEFAULT_CELL_BUDGET"):
                module.DEFAULT_CELL_BUDGET = core.DEFAULT_CELL_BUDGET


def _faces_sorted(faces):
    return [list(a) for a in sorted(faces)]


def _intersection_json(f):
    out = {"kind": f.kind.value}
    if f.points:
        out["points"] = [str(p) for p in f.points]
    if f.fixed_point is not None:
        out["fixed_point"] = str(f.fixed_point)
        out["seeds"] = [str(p) for p in f.seeds]
    if f.generator_digits:
        out["generator_digits"] = sorted(list(g) for g in f.generator_digits)
    return out


def classification_json(cls: Classification) -> dict:
    D = cls.digit_set
    out = {
        "digit_set": {"n": D.n, "m": D.m, "digits": [list(d) for d in D.digits]},
        "connected": cls.connected,
        "component_count": cls.connectivity.component_count,
        "one_point_property": cls.one_point,
        "dendrite": cls.dendrite,
        "failed_gate": cls.connectivity.failed_gate,
        "intersections": {
            f"{a[0]},{a[1]}": _intersection_json(f) for a, f in sorted(cls.intersections.items())
        },
        "max_finite_intersection": (
            "infinite" if cls.max_finite_intersection is None else cls.max_finite_intersection
        ),
        "quadruple_free": cls.quadruple_free,
        "violations": list(cls.violations),
        "inconclusive": list(cls.inconclusive),
    }
    if cls.connectivity.cycle_witness:
        out["cycle_witness"] = [
            {"kind": kind, "at": str(label) if kind == "black" else f"{label[0]},{label[1]}"}
            for kind, label in cls.connectivity.cycle_witness
        ]
    if cls.boundary is not None:
        out["boundary"] = {
            "type": cls.boundary.type.value,
            "points": [{"point": str(p), "kind": kind} for p, kind in cls.boundary.points],
            "active_faces": _faces_sorted(cls.boundary.active_faces),
            "offset_faces": _faces_sorted(cls.boundary.offset_faces),
            "corner_orders": {str(c): o for c, o in sorted(cls.boundary.corner_orders.items())},
        }
    if cls.main_tree is not None:
        shape = cls.main_tree.shape
        out["main_tree"] = {
            "type": shape.type_id,
            "shape": shape.encoding,
            "ramification_degrees": list(shape.ramification_degrees),
            "leaf_count": shape.leaf_count,
            "stabilized_at": cls.main_tree.stabilized_at,
        }
    if cls.orders is not None:
        out["orders"] = {
            "max": cls.orders.max_order,
            "histogram": {str(k): v for k, v in sorted(cls.orders.histogram.items())},
            "ramification_points": [
                {"point": str(p), "order": o} for p, o in cls.orders.ramification_points
            ],
            "entries": [
                {
                    "point": str(e.point),
                    "order": e.order,
                    "method": e.method,
                    "level": e.stabilized_at_level,
                }
                for e in cls.orders.entries
            ],
        }
    return out


def classification_text(cls: Classification) -> str:
    lines = [f"digit set: {cls.digit_set}"]
    lines.append(
        f"connected: {'yes' if cls.connected else 'no'} "
        f"(components: {cls.connectivity.component_count})"
    )
    lines.append("intersections:")
    for a, f in sorted(cls.intersections.items()):
        desc = f.kind.value
        if f.points:
            desc += " {" + "; ".join(str(p) for p in f.points) + "}"
        elif f.fixed_point is not None:
            desc += f" fixed {f.fixed_point}, seeds {{{'; '.join(str(p) for p in f.seeds)}}}"
        elif f.generator_digits:
            desc += f" generated by {sorted(f.generator_digits)}"
        lines.append(f"  ({a[0]:2d},{a[1]:2d}): {desc}")
    lines.append(f"one-point property: {'yes' if cls.one_point else 'no'}")
    verdict = "yes" if cls.dendrite else f"no (failed gate: {cls.connectivity.failed_gate})"
    lines.append(f"dendrite: {verdict}")
    if cls.connectivity.cycle_witness:
        walk = " - ".join(
            (f"[{lbl[0]},{lbl[1]}]" if kind == "white" else f"({lbl})")
            for kind, lbl in cls.connectivity.cycle_witness
        )
        lines.append(f"cycle witness: {walk}")
    mf = "infinite" if cls.max_finite_intersection is None else cls.max_finite_intersection
    lines.append(f"max piece intersection: {mf}")
    lines.append(f"quadruple-free: {cls.quadruple_free}")
    if cls.boundary is not None:
        b = cls.boundary
        pts = ", ".join(f"{p} ({kind})" for p, kind in b.points)
        lines.append(f"boundary type: {b.type.value}")
        lines.append(f"boundary points: {pts}")
        faces = ", ".join(f"({a[0]},{a[1]})" for a in sorted(b.active_faces))
        lines.append(f"active faces: {faces}")
        if b.corner_orders:
            orders = ", ".join(f"{c}: {o}" for c, o in sorted(b.corner_orders.items()))
            lines.append(f"corner orders: {orders}")
        else:
            lines.append("corner orders: none (no corner points)")
    if cls.main_tree is not None:
        shape = cls.main_tree.shape
        t = shape.type_id if shape.type_id is not None else "unmatched"
        lines.append(
            f"main tree: type {t}, shape {shape.encoding}, "
            f"stabilized at level {cls.main_tree.stabilized_at}"
        )
    if cls.orders is not None:
        lines.append(f"max point order: {cls.orders.max_order}")
        if cls.orders.ramification_points:
            rams = ", ".join(f"{p} (order {o})" for p, o in cls.orders.ramification_points)
            lines.append(f"ramification points: {rams}")
    if cls.violations:
        lines.append("violations:")
        for v in cls.violations:
            lines.append(f"  ! {v}")
    else:
        lines.append("violations: none")
    if cls.inconclusive:
        lines.append("inconclusive stages:")
        for v in cls.inconclusive:
            lines.append(f"  ? {v}")
    return "\n".join(lines)


def _cmd_analyze(args) -> int:
    D = _load_digit_set(args.digitset)
    cls = classify(D, order_level=args.level)
    if args.dot:
        dot = to_dot(adjacency_structure(D, 1))
        if args.dot == "-":
            sys.stdout.write(dot)
        else:
            with open(args.dot, "w") as fh:
                fh.write(dot)
    if args.json:
        json.dump(classification_json(cls), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(classification_text(cls))
    return EXIT_VIOLATION if cls.violations else EXIT_OK


def _cmd_render(args) -> int:
    D = _load_digit_set(args.digitset)
    fill = parse_color(args.fill) if args.fill else None
    background = parse_color(args.background) if args.background else None
    if args.diagram:
        svg = render_diagram(D, cell_color=fill)
        with open(args.output, "w") as fh:
            fh.write(svg)
        return EXIT_OK
    if args.tree:
        tree_color = parse_color(args.tree_color) if args.tree_color else None
        data = render_tree_overlay(
            D, args.k, px=args.px, fill=fill, background=background, tree_color=tree_color
        )
    else:
        data = render_attractor(D, args.k, px=args.px, fill=fill, background=background)
    with open(args.output, "wb") as fh:
        fh.write(data)
    return EXIT_OK


def _cmd_census(args) -> int:
    def progress(done, total):
        print(f"census: classified {done}/{total} classes", file=sys.stderr)

    records = enumerate_census(
        args.n,
        m_min=args.m_min,
        m_max=args.m_max,
        dendrites_only=args.dendrites_only,
        jobs=args.jobs,
        progress=progress if not args.quiet else None,
    )
    csv_path, json_path = write_report(records, args.out, args.n)
    summary = summarize(records)
    print(
        f"census n={args.n}: {summary['total']} digit sets, "
        f"{summary['connected']} connected, {summary['dendrites']} dendrites",
        file=sys.stderr,
    )
    print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    return EXIT_VIOLATION if summary["violations"] else EXIT_OK


def _parse_int_list(text: str) -> tuple:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _cmd_segment(args) -> int:
    d1 = SegmentDigitSet(args.n, _parse_int_list(args.d1))
    d2 = SegmentDigitSet(args.n, _parse_int_list(args.d2))
    result = segment_intersect(d1, d2)
    kind = result.kind.value
    if result.points:
        print(f"{kind.capitalize()}: {', '.join(str(p) for p in result.points)}")
    elif result.fixed_point is not None:
        seeds = ", ".join(str(s) for s in result.seeds)
        print(f"{kind.capitalize()}: fixed point {result.fixed_point}; seeds {seeds}")
        first = ", ".join(str(p) for p in result.expand(args.expand))
        print(f"first points: {first}")
    elif result.generator_digits:
        print(f"{kind.capitalize()}: generated by digits {sorted(result.generator_digits)}")
    else:
        print(kind.capitalize())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fsq", description="Exact analysis of fractal squares")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full classification of one digit set")
    p.add_argument("digitset", help="inline '<n>: x,y ...' / JSON, or a file path")
    p.add_argument("--level", type=int, default=2, help="order-census depth (default 2)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--dot", metavar="PATH", help="write the level-1 structure as DOT ('-' = stdout)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("render", help="render an approximation or diagram")
    p.add_argument("digitset")
    p.add_argument("-k", type=int, default=4, help="refinement level (default 4)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--px", type=int, default=729, help="canvas size in pixels")
    p.add_argument("--tree", action="store_true", help="overlay the main tree")
    p.add_argument("--diagram", action="store_true", help="emit the SVG digit diagram instead")
    p.add_argument("--fill", help="cell color (#rrggbb or r,g,b)")
    p.add_argument("--background", help="background color")
    p.add_argument("--tree-color", help="overlay color")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("census", help="exhaustive census for one order")
    p.add_argument("-n", type=int, required=True, choices=(2, 3, 4, 5))
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--dendrites-only", action="store_true", help="emit only dendrite records")
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("segment", help="intersection of two fractal segments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d1", required=True, help="comma-separated digits of the first segment")
    p.add_argument("--d2", required=True, help="comma-separated digits of the second segment")
    p.add_argument("--expand", type=int, default=8, help="points to list for countable sets")
    p.set_defaults(func=_cmd_segment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_budget()
        return args.func(args)
    except TheoremViolation as exc:
        print(f"theorem-violation diagnostic: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (FsqError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
