"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 budget refusal, 4 infeasible or
degenerate input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, certify, concentration, enumeration, instances, oracle
from .io import ParseError, Report, dump_instance, load_instance

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 2, 3, 4


class CliExit(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _grid(text: str) -> list:
    """``a:b:step`` inclusive, as exact fractions."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("delta grid must be a:b:step")
    a, b, step = map(_frac, parts)
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("delta grid needs step > 0 and a <= b")
    out, t = [], a
    while t <= b:
        out.append(t)
        t += step
    return out


def _point(v) -> list:
    return [int(x) for x in v]


# -- commands ------------------------------------------------------------------


def cmd_bounds(args) -> Report:
    inst = load_instance(args.file)
    rep = Report("bounds", inst.name)
    S = args.support
    if S is not None and any(not 0 <= i < inst.n for i in S):
        raise CliExit(EXIT_PARSE, f"support index out of range 0..{inst.n - 1}")
    try:
        rep.extend_bounds(bounds.full_report(inst, S, args.epsilon))
    except ValueError as exc:
        raise CliExit(EXIT_INFEASIBLE, str(exc)) from None
    rep.data = {"m": inst.m, "n": inst.n, "Delta": inst.delta, "support": S}
    return rep


def cmd_enumerate(args) -> Report:
    inst = load_instance(args.file)
    if inst.n > args.max_n:
        raise CliExit(EXIT_BUDGET, f"refusing: n={inst.n} exceeds --max-n {args.max_n}")
    try:
        res = enumeration.enumerate_vertices(inst, workers=args.workers, max_boxes=args.max_boxes)
    except enumeration.BudgetRefused as exc:
        raise CliExit(EXIT_BUDGET, f"refusing: {exc}") from None
    rep = Report("enumerate", inst.name)
    rep.add("vertices", len(res.vertices))
    rep.add("candidates", res.candidates_considered)
    rep.add("boxes_probed", res.boxes_probed)
    rep.add("bfs_used", res.bfs_used)
    rep.data = {"status": res.status, "vertices": sorted(_point(v) for v in res.vertices), "warnings": res.warnings}
    return rep


def cmd_oracle(args) -> Report:
    inst = load_instance(args.file)
    try:
        cloud = oracle.enumerate_lattice(inst, args.max_lattice_points)
        verts = oracle.hull_vertices_oracle(cloud)
    except oracle.BudgetExceeded as exc:
        raise CliExit(EXIT_BUDGET, f"refusing: {exc}") from None
    except oracle.OracleError as exc:
        raise CliExit(EXIT_INFEASIBLE, str(exc)) from None
    rep = Report("oracle", inst.name)
    rep.add("lattice_points", len(cloud.points))
    rep.add("vertices", len(verts))
    rep.add("max_vertex_support", max((len(v.support()) for v in verts), default=0))
    rep.extend_bounds(bounds.vertex_count_bounds(inst.n, inst.m, inst.delta))
    data = {"status": "ok" if verts else "infeasible", "bounds_used": list(cloud.bounds_used),
            "vertices": sorted(_point(v) for v in verts)}
    if inst.c is not None and verts:
        point, size = oracle.min_support_optimum(inst, inst.c, cloud)
        rep.add("min_support_optimum", size)
        data["optimum"] = _point(point)
    rep.data = data
    return rep


def cmd_certify(args) -> Report:
    inst = load_instance(args.file)
    try:
        res = certify.kernel_certificate(inst, args.point)
    except ValueError as exc:
        raise CliExit(EXIT_INFEASIBLE, str(exc)) from None
    rep = Report("certify", inst.name)
    if isinstance(res, certify.KernelWitness):
        w = _point(res.x)
        rep.add("verdict", "NOT a vertex", note="witness x gives feasible v-x and v+x")
        rep.data = {"point": args.point, "vertex": False, "witness": w,
                    "message": f"NOT a vertex, witness ({','.join(map(str, w))})"}
    else:
        rep.add("verdict", "no witness", note="necessary condition only, not a proof")
        rep.data = {"point": args.point, "vertex": None, "support_size": res.support_size,
                    "message": "no kernel witness on the support (not a proof of vertexhood)"}
    return rep


def _family_from_args(args) -> concentration.BoundedVectorFamily:
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    law = args.law or cfg.get("law", "two-point")
    if "lower" in cfg and "upper" in cfg:
        return concentration.BoundedVectorFamily(cfg["lower"], cfg["upper"], law)
    n = args.n or cfg.get("n", 50)
    m = args.m or cfg.get("m", 5)
    half = args.half if args.half is not None else Fraction(cfg.get("half", "1/2"))
    return concentration.BoundedVectorFamily.symmetric(n, m, half, law)


def cmd_concentration(args) -> Report:
    fam = _family_from_args(args)
    grid = concentration.sqrt_d_grid(fam, args.delta_grid)
    tr = concentration.mc_tail(fam, grid, args.samples, args.seed, args.workers)
    rep = Report("concentration", f"n={fam.n} m={fam.m} law={fam.law}")
    rep.add("threshold_T", tr.threshold)
    rep.add("denominator_D", tr.denominator)
    for t, d, e, s, th in zip(args.delta_grid, tr.delta_grid, tr.empirical, tr.stderr, tr.theoretical):
        rep.add(f"tail[{t}*sqrtD]", e, note=f"stderr={s:.3g}")
        rep.add(f"bound[{t}*sqrtD]", th)
    rep.add("mean_deviation", tr.mean_deviation, note=f"stderr={tr.mean_deviation_stderr:.3g}")
    viol = tr.violations()
    rep.data = {
        "samples": tr.samples, "seed": tr.seed, "multipliers": [str(t) for t in args.delta_grid],
        "delta": [d.decimal(12) for d in tr.delta_grid], "empirical": list(tr.empirical),
        "stderr": list(tr.stderr), "theoretical": [t.decimal(12) for t in tr.theoretical],
        "violations": viol,
    }
    return rep


def cmd_gen(args) -> str:
    try:
        spec = instances.FamilySpec.parse(args.spec)
    except ValueError as exc:
        raise CliExit(EXIT_PARSE, str(exc)) from None
    return dump_instance(instances.gen(spec))


def cmd_ineq(args) -> Report:
    try:
        case = bounds.ineq_table_bound(args.m, args.c, args.Delta)
    except ValueError as exc:
        raise CliExit(EXIT_INFEASIBLE, str(exc)) from None
    rep = Report("ineq", f"m={args.m} c={args.c} Delta={args.Delta}")
    rep.add("cDelta", case.cDelta)
    rep.add(f"Thm20.case{case.case_id}", case.bound, note="table case")
    rep.add("Eq2.root", bounds.minimal_Y(args.m, case.cDelta))
    rep.add("Eq2.integer", bounds.minimal_Y_integer(args.m, case.cDelta))
    rep.add("Thm21", bounds.ineq_uniform_bound(args.m, args.c, args.Delta))
    rep.data = {"case": case.case_id}
    return rep


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the machine-readable document here")
    common.add_argument("--workers", type=int, default=1)
    p = argparse.ArgumentParser(prog="hullsupport", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    s = add("bounds", "every support bound for an instance")
    s.add_argument("file")
    s.add_argument("--support", type=_int_list, help="column set S, e.g. 0,2,3")
    s.add_argument("--epsilon", type=_frac, default=Fraction(1))

    s = add("enumerate", "vertices of the integer hull via proximity boxes")
    s.add_argument("file")
    s.add_argument("--max-n", type=int, default=enumeration.DESK_LIMITS["n"])
    s.add_argument("--max-boxes", type=int, default=None)

    s = add("oracle", "brute-force lattice points and hull vertices")
    s.add_argument("file")
    s.add_argument("--max-lattice-points", type=int, default=oracle.DEFAULT_MAX_POINTS)

    s = add("certify", "search a kernel witness against vertexhood")
    s.add_argument("file")
    s.add_argument("point", type=_int_list)

    s = add("concentration", "Monte Carlo check of the vector tail bound")
    s.add_argument("--config", help="JSON with n, m, half, law or lower/upper matrices")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--half", type=_frac)
    s.add_argument("--law", choices=concentration.LAWS)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--delta-grid", type=_grid, default=_grid("0.25:2:0.25"),
                   help="multipliers t of sqrt(D), as a:b:step")

    s = add("gen", "write an instance of a family")
    s.add_argument("spec", help="e.g. knapsack-powers(3), block-diagonal(2,2), triangular(3), random(5,1,8,42)")

    s = add("ineq", "the Y - (m/2) log Y inequality for given m, c, Delta")
    s.add_argument("m", type=int)
    s.add_argument("c", type=_frac)
    s.add_argument("Delta", type=_frac)
    return p


COMMANDS = {
    "bounds": cmd_bounds, "enumerate": cmd_enumerate, "oracle": cmd_oracle, "certify": cmd_certify,
    "concentration": cmd_concentration, "gen": cmd_gen, "ineq": cmd_ineq,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except CliExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(result, str):
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(result)
        else:
            sys.stdout.write(result)
        return EXIT_OK
    sys.stdout.write(result.to_text())
    msg = result.data.get("message")
    if msg:
        print(msg)
    if result.data.get("vertices") is not None:
        for v in result.data["vertices"]:
            print("vertex", " ".join(map(str, v)))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(result.to_json())
    if result.data.get("status") == "infeasible":
        return EXIT_INFEASIBLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
