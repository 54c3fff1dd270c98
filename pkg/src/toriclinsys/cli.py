"""Command-line front end.

Exit codes: 0 success (or non-special), 2 input error, 3 special system,
4 property violation (a fuzz run or cross-check found a mismatch).
"""

from __future__ import annotations

import argparse
import json
import sys

from .divisor import divisor, lattice_points, polytope_of
from .errors import CriterionMismatch, InputError, InternalError
from .fan import (
    blowup_fixed_point,
    fan_to_json_dict,
    hirzebruch,
    load_fan,
    product,
    projective_space,
    save_fan,
)
from .fleet import (
    conjecture_scan,
    random_fan_2d,
    run_edge_degree_fuzz,
    run_witness_criterion_fuzz,
)
from .linsys import load_system, speciality_report
from .picard import candidate_curves, explore_orders, load_class, reduce as picard_reduce
from .render import render_system_svg, slice_report


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_gen(args) -> int:
    name = args.variety
    if name == "p2":
        fan = projective_space(2)
    elif name == "pn":
        fan = projective_space(args.dim)
    elif name == "hirzebruch":
        fan = hirzebruch(args.a)
    elif name == "product":
        fan = product(load_fan(args.fans[0]), load_fan(args.fans[1]))
    elif name == "blowup":
        fan = blowup_fixed_point(load_fan(args.fan), args.cone)
    else:  # random2d
        fan = random_fan_2d(args.seed, args.steps)
    if args.out:
        save_fan(fan, args.out)
    else:
        _write(json.dumps(fan_to_json_dict(fan), indent=1), None)
    return 0


def _load_system_arg(args):
    return load_system(args.system, check=not args.unchecked)


def _cmd_special(args) -> int:
    report = speciality_report(_load_system_arg(args), strict_marked=args.strict_marked)
    if args.json:
        _write(json.dumps(report.to_json_dict(), indent=1), None)
    else:
        _write(
            f"virtual dim {report.virtual_dim}, effective dim {report.effective_dim}, "
            f"h1 {report.h1}, special {report.special}",
            None,
        )
    return 3 if report.special else 0


def _cmd_dim(args) -> int:
    spec = _load_system_arg(args)
    report = speciality_report(spec, strict_marked=args.strict_marked)
    if args.dump:
        pts = lattice_points(polytope_of(spec.divisor))
        _write("\n".join(" ".join(str(c) for c in p) for p in pts), None)
    if args.json:
        _write(json.dumps(report.to_json_dict(), indent=1), None)
    else:
        _write(
            f"virtual dim {report.virtual_dim}, effective dim {report.effective_dim}, h1 {report.h1}",
            None,
        )
    return 3 if report.special else 0


def _cmd_witness(args) -> int:
    report = speciality_report(_load_system_arg(args), strict_marked=args.strict_marked)
    entries = [dict(w.to_json_dict(), value=v) for w, v in report.witnesses]
    if args.json:
        _write(json.dumps(entries, indent=1), None)
    elif entries:
        _write(
            "\n".join(
                f"wall facet {e['facet_rays']} cones {e['cones']}: intersection {e['value']}"
                for e in entries
            ),
            None,
        )
    else:
        _write("no witness wall", None)
    return 3 if report.special else 0


def _cmd_check_edges(args) -> int:
    fan = load_fan(args.fan, check=not args.unchecked)
    if fan.dim != 2:
        raise InputError("check-edges draws random ample divisors on 2D fans only")
    if args.trials > 10_000:
        raise InputError("at most 10000 trials")
    summary = run_edge_degree_fuzz(args.trials, args.seed, fan=fan)
    if summary.violations:
        _write(json.dumps(sorted(summary.violations, key=str), indent=1), None)
        return 4
    _write(f"ok: {summary.trials} divisors, {summary.walls_checked} walls, 0 violations", None)
    return 0


def _cmd_fuzz(args) -> int:
    summary = run_witness_criterion_fuzz(args.trials, args.seed, include_3d=not args.no_3d)
    payload = {
        "trials": summary.trials,
        "special_instances": summary.specials,
        "criterion_violations": sorted(summary.violations, key=str),
        "pair_restriction_failures": sorted(summary.pair_failures, key=str),
    }
    if args.json:
        _write(json.dumps(payload, indent=1), None)
    else:
        _write(
            f"{summary.trials} systems, {summary.specials} special, "
            f"{len(summary.violations)} criterion violations, "
            f"{len(summary.pair_failures)} pair-restriction failures",
            None,
        )
    return 0 if summary.ok else 4


def _cmd_scan(args) -> int:
    scan = conjecture_scan(args.trials, args.seed, bound=args.bound)
    payload = {"agree": scan.agree, "disagree": scan.disagree, "undecided": scan.undecided}
    if args.json:
        payload["records"] = list(scan.records)
    _write(json.dumps(payload, indent=1), None)
    return 0


def _cmd_reduce(args) -> int:
    cls = load_class(args.cls)
    candidates = candidate_curves(cls.model, bound=args.bound)
    trace = picard_reduce(cls, candidates)
    if trace.stop_reason == "cap":
        _write("reduction hit the iteration cap; no verdict", None)
        return 4
    if args.json:
        payload = {
            "start": list(trace.start.coeffs()),
            "steps": [
                {
                    "subtract": list(s.candidate.cls.coeffs()),
                    "source": s.candidate.source,
                    "intersection": s.intersection,
                    "v_after": s.v_after,
                }
                for s in trace.steps
            ],
            "final": list(trace.final.coeffs()),
            "v_start": trace.v_start,
            "v_final": trace.v_final,
            "minus_one_special": trace.minus_one_special,
            "stop_reason": trace.stop_reason,
        }
        _write(json.dumps(payload, indent=1), None)
    else:
        _write(trace.table(), None)
    if args.all_orders:
        exploration = explore_orders(cls, candidates, depth=6)
        _write(
            f"all-orders (depth 6): verdicts {sorted(exploration.verdicts)}, "
            f"order-sensitive {exploration.order_sensitive}, truncated {exploration.truncated}",
            None,
        )
    return 0


def _cmd_render(args) -> int:
    spec = _load_system_arg(args)
    if spec.fan.dim == 2:
        _write(render_system_svg(spec, size=args.size), args.out)
    else:
        rows = slice_report(spec)
        text = "\n".join(
            f"slice {r['slice']}: {r['points']} points, {r['kept']} kept, {r['cut']} cut"
            for r in rows
        )
        _write(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toriclinsys",
        description="Exact speciality engine for linear systems with torus-fixed base points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a built-in or random fan as JSON")
    gen_sub = gen.add_subparsers(dest="variety", required=True)
    for name in ("p2", "pn", "hirzebruch", "product", "blowup", "random2d"):
        g = gen_sub.add_parser(name)
        g.add_argument("--out", default=None)
        g.set_defaults(func=_cmd_gen)
        if name == "pn":
            g.add_argument("dim", type=int)
        elif name == "hirzebruch":
            g.add_argument("a", type=int)
        elif name == "product":
            g.add_argument("fans", nargs=2)
        elif name == "blowup":
            g.add_argument("fan")
            g.add_argument("--cone", type=int, required=True)
        elif name == "random2d":
            g.add_argument("--seed", type=int, default=0)
            g.add_argument("--steps", type=int, default=3)

    def system_command(name, help_text, extra=()):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system")
        p.add_argument("--json", action="store_true")
        p.add_argument("--unchecked", action="store_true", help="skip fan validation on load")
        p.add_argument("--strict-marked", action="store_true", dest="strict_marked",
                       help="witness scan only over walls with both endpoints marked")
        for flag, kw in extra:
            p.add_argument(flag, **kw)
        return p

    system_command("special", "speciality report; exit 3 when special").set_defaults(
        func=_cmd_special
    )
    system_command(
        "dim",
        "virtual/effective dimension and h1",
        extra=[("--dump", {"action": "store_true", "help": "list the polytope lattice points"})],
    ).set_defaults(func=_cmd_dim)
    system_command("witness", "walls with system intersection <= -2").set_defaults(
        func=_cmd_witness
    )

    ce = sub.add_parser("check-edges", help="degree = edge points - 1 on random ample divisors")
    ce.add_argument("fan")
    ce.add_argument("--trials", type=int, default=50)
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--unchecked", action="store_true")
    ce.set_defaults(func=_cmd_check_edges)

    fz = sub.add_parser("fuzz", help="random systems: h1 > 0 iff a witness wall exists")
    fz.add_argument("--trials", type=int, default=100)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--json", action="store_true")
    fz.add_argument("--no-3d", action="store_true", dest="no_3d")
    fz.set_defaults(func=_cmd_fuzz)

    sc = sub.add_parser("scan", help="compare exact speciality with the (-1)-special verdict")
    sc.add_argument("--trials", type=int, default=50)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--bound", type=int, default=3)
    sc.add_argument("--json", action="store_true")
    sc.set_defaults(func=_cmd_scan)

    rd = sub.add_parser("reduce", help="subtract candidate rational curves; (-1)-special verdict")
    rd.add_argument("cls", metavar="class")
    rd.add_argument("--bound", type=int, default=3)
    rd.add_argument("--json", action="store_true")
    rd.add_argument("--all-orders", action="store_true", dest="all_orders")
    rd.set_defaults(func=_cmd_reduce)

    rn = sub.add_parser("render", help="SVG diagram (2D) or per-slice counts (3D)")
    rn.add_argument("system")
    rn.add_argument("out", nargs="?", default=None)
    rn.add_argument("--size", type=int, default=480)
    rn.add_argument("--unchecked", action="store_true")
    rn.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CriterionMismatch as exc:
        sys.stderr.write(f"property violation: {exc}\n")
        sys.stderr.write(json.dumps(exc.reproducer, indent=1) + "\n")
        return 4
    except InternalError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return 4
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def entry() -> None:
    sys.exit(main())
