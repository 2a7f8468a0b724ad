"""Command-line front end.

Exit codes: 0 success or stable, 1 violation found, 2 invalid input,
3 assumption violated, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from nodalstab import degree_accounting as da
from nodalstab import frobenius as fb
from nodalstab.document import DocumentError, dumps, parse_graph_document, parse_matrix_document
from nodalstab.errors import AssumptionError, EnumerationCapError, GraphError
from nodalstab.filtration import (
    compute_filtration,
    divisor_multiplicities,
    normalize_map,
    snf_elementary_divisors,
)
from nodalstab.graph_core import (
    bridges,
    connected_components,
    cycle_rank,
    genus,
    genus_halfdegree_form,
    validate_graph,
)
from nodalstab.polarization import (
    fraction_str,
    parse_fraction,
    polarize_bridgeless,
    polarize_general,
)
from nodalstab.sheaf import a_rank, a_slope, euler_char, hl_slope
from nodalstab.stability import DEFAULT_CAP, PARALLEL_MIN_VERTICES, verify_structure_sheaf_stability

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_ASSUMPTION, EXIT_CAP = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None


# --- commands -------------------------------------------------------------------
# each returns (report dict, exit code)


def cmd_genus(args):
    doc = parse_graph_document(_read(args.file))
    g = doc.graph
    rep = validate_graph(g)
    out = {
        "connected": rep.connected,
        "vertices": {
            v.id: {"genus": v.genus, "degree": g.degree(v.id)} for v in g.vertices
        },
        "assumptions": dict(sorted(rep.flags.items())),
        "assumption_details": {k: list(v) for k, v in sorted(rep.details.items())},
    }
    if rep.connected:
        out["cycle_rank"] = cycle_rank(g)
        out["genus"] = genus(g)
        out["genus_halfdegree_form"] = fraction_str(genus_halfdegree_form(g))
        out["bridges"] = sorted(bridges(g))
    else:
        out["components"] = connected_components(g)
    return out, EXIT_OK


def _polarization(doc, args, use_document: bool):
    """(weights, description) for the command flags."""
    if use_document and doc.polarization is not None and not args.general:
        return doc.polarization, "document"
    if args.general:
        a = polarize_general(doc.graph, args.N)
        n = args.N if args.N is not None else genus(doc.graph) + 1
        return a, f"general(N={n})"
    if args.N is not None:
        raise _Usage("--N requires --general")
    return polarize_bridgeless(doc.graph), "bridgeless"


def cmd_polarize(args):
    doc = parse_graph_document(_read(args.file))
    a, source = _polarization(doc, args, use_document=False)
    w = a.weights
    return {
        "construction": source,
        "polarization": a.to_json(),
        "sum": fraction_str(sum(w.values())),
        "all_positive": all(x > 0 for x in w.values()),
        "common_denominator": a.common_denominator,
    }, EXIT_OK


def cmd_check_stability(args):
    doc = parse_graph_document(_read(args.file))
    a, source = _polarization(doc, args, use_document=True)
    rep = verify_structure_sheaf_stability(
        doc.graph,
        a,
        args.mode,
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
        cap=args.cap,
        parallel_min_vertices=args.parallel_threshold,
    )
    out = rep.to_json()
    out["polarization"] = a.to_json()
    out["polarization_source"] = source
    return out, EXIT_OK if rep.stable else EXIT_VIOLATION


def cmd_sheaf(args):
    doc = parse_graph_document(_read(args.file))
    if doc.sheaf is None:
        raise DocumentError("document has no sheaf annotation")
    m = doc.sheaf
    out = {"euler_char": euler_char(m)}
    if doc.polarization is not None:
        ar = a_rank(m, doc.polarization)
        out["a_rank"] = fraction_str(ar)
        if ar:
            out["a_slope"] = fraction_str(a_slope(m, doc.polarization))
            out["hl_slope"] = fraction_str(hl_slope(m, doc.polarization))
    return out, EXIT_OK


def cmd_filtration(args):
    m = parse_matrix_document(_read(args.file))
    norm, shift = normalize_map(m)
    res = compute_filtration(norm)
    exps = snf_elementary_divisors(norm)
    mult = divisor_multiplicities(exps)
    out = res.to_json()
    out.update(
        {
            "p": m.p,
            "n": m.n,
            "normalization_shift": shift,
            "elementary_divisor_exponents": exps,
            "divisor_multiplicities": list(mult),
            "agrees_with_smith_form": res.graded_dims_E == mult and res.graded_dims_F == mult,
        }
    )
    return out, EXIT_OK


def cmd_bounds(args):
    p, g, r = args.p, args.g, args.r
    out = {"p": p, "g": g, "r": r, "n": args.n}
    out["assumption"] = fb.assumption_check(p, r, g).to_json()
    mu0 = parse_fraction(args.mu0) if args.mu0 is not None else Fraction(1 - g)
    out["mu0"] = fraction_str(mu0)
    params = fb.BoundParams(p, g, r, args.n, mu0)
    if r <= p:
        out["slope_bound_iterated"] = fraction_str(fb.slope_bound_iterated(params))
    else:
        out["slope_bound_iterated"] = None
    if mu0 == 1 - g and g > 1 and 1 < r <= p:
        out["degree_bound"] = fb.degree_bound(params).to_json()
    else:
        out["degree_bound"] = None
    if args.ranks is not None:
        seq = fb.RankSequence(tuple(int(x) for x in args.ranks.split(",")))
        out["rank_sequence"] = fb.validate_rank_sequence(seq, r, p).to_json()
    if args.chain is not None:
        cm, cd = args.chain
        out["chain"] = fb.hw_chain_check(p, cm, cd).to_json()
    return out, EXIT_OK


def cmd_degree_account(args):
    doc = parse_graph_document(_read(args.file))
    t = doc.tree
    if t is None:
        raise DocumentError("document has no tree annotation")
    genera = doc.graph.genera
    bad = [v for v in t.tree.non_root if genera[v] != 0]
    if bad:
        raise GraphError(f"non-root vertices {bad} must have genus 0")
    out = {"root": t.tree.root, "r": t.r}
    try:
        out["root_degree_identity"] = da.root_degree_identity(t)
    except ValueError:
        out["root_degree_identity"] = None
    if out["root_degree_identity"] is not None and t.root_degree is not None:
        out["total_euler_char"] = da.total_euler_char(t, genera[t.tree.root])
        out["expected_euler_char"] = t.r * (1 - genera[t.tree.root])
    forced = da.infer_forced_values(t)
    out["forced"] = forced.to_json()
    out["monotonicity"] = da.monotonicity_check(t).to_json()
    code = EXIT_VIOLATION if forced.status == "contradiction" else EXIT_OK
    return out, code


# --- rendering ------------------------------------------------------------------


def render_text(data, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(data))
    return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the canonical JSON report")

    parser = argparse.ArgumentParser(
        prog="nodalstab", description="Stability checks on dual graphs of nodal curves."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", parents=[common], help="genus, degrees and assumption flags")
    p.add_argument("file", help="graph document, or - for stdin")
    p.set_defaults(func=cmd_genus)

    def pol_flags(sp):
        sp.add_argument("--general", action="store_true", help="use the construction that allows bridges")
        sp.add_argument("--N", type=int, default=None, help="integer N > genus (default genus + 1)")

    p = sub.add_parser("polarize", parents=[common], help="construct a polarization degree")
    p.add_argument("file")
    pol_flags(p)
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser(
        "check-stability", parents=[common], help="verify stability of the structure sheaf"
    )
    p.add_argument("file")
    pol_flags(p)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument(
        "--workers", type=int, default=None, help="worker processes (default $NODALSTAB_WORKERS or 1)"
    )
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest vertex count enumerated exhaustively")
    p.add_argument(
        "--parallel-threshold",
        type=int,
        default=PARALLEL_MIN_VERTICES,
        help="smallest vertex count that is split across workers",
    )
    p.set_defaults(func=cmd_check_stability)

    p = sub.add_parser("sheaf", parents=[common], help="Euler characteristic and slopes of a sheaf annotation")
    p.add_argument("file")
    p.set_defaults(func=cmd_sheaf)

    p = sub.add_parser("filtration", parents=[common], help="lattice filtration of a matrix over Z_(p)")
    p.add_argument("file", help="matrix document")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("bounds", parents=[common], help="slope and degree bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--mu0", default=None, help='starting slope as "p/q" (default 1 - g)')
    p.add_argument("--ranks", default=None, help="comma-separated rank sequence to validate")
    p.add_argument("--chain", type=int, nargs=2, metavar=("M", "D"), default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("degree-account", parents=[common], help="forced degrees on an oriented tree")
    p.add_argument("file", help="tree document")
    p.set_defaults(func=cmd_degree_account)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, code = args.func(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssumptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(render_text(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
