"""Command line interface.

Exit codes: 0 ok, 2 input error, 3 degenerate, 4 unbounded,
5 verification failure, 6 generation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import errors
from .bounds import expansion_trace
from .cones import estimate_cone_volumes
from .estimator import PolytopeAnalyzer
from .generators import GeneratorSpec
from .hrep import format_hrep, parse_hrep, read_hrep
from .polytope import DEFAULT_TOL
from .report import render, trace_dict

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_UNBOUNDED = 4
EXIT_VERIFY = 5
EXIT_GENERATE = 6

FAMILY_NAMES = {
    "hypercube": "hypercube",
    "simplex": "simplex",
    "regular-polygon": "regular_polygon",
    "cross-polytope": "cross_polytope",
    "random-tangent": "random_tangent",
}


def _positive_samples(text):
    value = int(text)
    if value < 1000:
        raise argparse.ArgumentTypeError("must be at least 1000")
    return value


def _sigma(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=_positive_samples, default=10**6,
                        help="uniform directions for cone volumes (default 1e6)")
    common.add_argument("--facet-samples", type=_positive_samples, default=10**5,
                        help="directions per facet area estimate (default 1e5)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None,
                        help="tightness/feasibility tolerance (default 1e-9)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--all-minors", action="store_true",
                        help="also report det* over all nonzero n x n minors")
    common.add_argument("--perturb", type=_sigma, default=0.0, metavar="SIGMA",
                        help="add uniform noise in [-SIGMA, SIGMA] to b before analysis")
    common.add_argument("--workers", type=int, default=1,
                        help="threads for Monte Carlo sampling (results do not depend on it)")
    common.add_argument("-o", "--output", default=None, help="write the report here")

    parser = argparse.ArgumentParser(
        prog="polydiam",
        description="Polytope diameters, condition-number diameter bounds and their proof checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("analyze", "full pipeline and report"),
                        ("diameter", "exact graph diameter"),
                        ("bound", "condition numbers and the explicit diameter bound")]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
    p = sub.add_parser("verify", parents=[common], help="check the lemmas")
    p.add_argument("file")
    p.add_argument("--lemma", choices=("1", "2", "3", "all"), default="all")
    p = sub.add_parser("trace", parents=[common], help="BFS frontier expansion between two vertices")
    p.add_argument("file")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)

    p = sub.add_parser("generate", help="write a test polytope as .hrep")
    p.add_argument("family", choices=sorted(FAMILY_NAMES))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--rows", type=int, default=None,
                   help="row count (random-tangent) or side count (regular-polygon)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    return parser


def _load(path):
    if path == "-":
        return parse_hrep(sys.stdin.read())
    return read_hrep(path)


def _analyzer(args, lemmas):
    tol = DEFAULT_TOL if args.tol is None else replace(DEFAULT_TOL, tight=args.tol, feas=args.tol)
    return PolytopeAnalyzer(samples=args.samples, facet_samples=args.facet_samples,
                            seed=args.seed, workers=args.workers, all_minors=args.all_minors,
                            lemmas=lemmas, perturb=args.perturb, tol=tol)


def _emit(text, args):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_analyze(args, lemmas=(1, 2, 3)):
    est = _analyzer(args, lemmas).fit(_load(args.file))
    _emit(render(est.report(), args.format), args)
    return EXIT_OK if est.lemmas_hold() else EXIT_VERIFY


def run_diameter(args):
    est = _analyzer(args, ()).fit(_load(args.file))
    rep = est.report()
    keys = ("n", "m", "vertices", "edges", "exact_diameter", "diameter_witness", "hirsch_quantity")
    _emit(render({k: rep[k] for k in keys}, args.format), args)
    return EXIT_OK


def run_bound(args):
    est = _analyzer(args, ()).fit(_load(args.file))
    rep = est.report()
    keys = ("n", "m", "exact_arithmetic", "perturb_sigma", "delta", "det_star",
            "det_star_all_minors", "expansion_constant", "j_max_paper", "diameter_bound_paper",
            "j_max_standard", "diameter_bound_standard", "exact_diameter", "hirsch_quantity",
            "paper_ball_volume", "standard_ball_volume")
    _emit(render({k: rep[k] for k in keys}, args.format), args)
    return EXIT_OK


def run_verify(args):
    lemmas = (1, 2, 3) if args.lemma == "all" else (int(args.lemma),)
    est = _analyzer(args, lemmas).fit(_load(args.file))
    rep = est.report()
    keys = ("n", "m", "delta", "det_star", "samples", "facet_samples", "seed",
            "accepted_samples", "ties", "lemma_results", "all_passed")
    _emit(render({k: rep[k] for k in keys}, args.format), args)
    return EXIT_OK if est.lemmas_hold() else EXIT_VERIFY


def run_trace(args):
    est = _analyzer(args, ()).fit(_load(args.file))
    G = est.graph_
    for vid in (args.start, args.target):
        if not 0 <= vid < len(G):
            raise ValueError(f"vertex id {vid} out of range 0..{len(G) - 1}")
    volumes = estimate_cone_volumes(G, args.samples, args.seed, args.workers,
                                    est.tol or DEFAULT_TOL)
    t = expansion_trace(G, args.start, args.target, est.condition_, volumes=volumes)
    rep = {"n": G.n, "m": G.H.m, "samples": args.samples, "seed": args.seed,
           "j_max_paper": est.bound_.j_max_paper, **trace_dict(t)}
    _emit(render(rep, args.format), args)
    return EXIT_OK if t.meet_bound_holds and t.growth_holds else EXIT_VERIFY


def run_generate(args):
    family = FAMILY_NAMES[args.family]
    m = args.rows
    if family == "regular_polygon" and m is None:
        raise ValueError("regular-polygon needs --rows (number of sides)")
    spec = GeneratorSpec(family, args.dim, m, args.seed)
    H = spec.build()
    text = format_hrep(H, f"{args.family} dim={H.n} rows={H.m} seed={args.seed}")
    _emit(text, args)
    return EXIT_OK


COMMANDS = {
    "analyze": run_analyze,
    "diameter": run_diameter,
    "bound": run_bound,
    "verify": run_verify,
    "trace": run_trace,
    "generate": run_generate,
}


def _error_detail(exc):
    if isinstance(exc, errors.Degenerate):
        return {"vertices": [{"point": p, "tight_rows": t} for p, t in exc.vertices]}
    if isinstance(exc, errors.Unbounded):
        return {"vertex_id": exc.vertex_id, "direction": exc.direction}
    if isinstance(exc, errors.ParseError):
        return {"line": exc.line, "reason": exc.reason}
    return {}


def _exit_code(exc):
    if isinstance(exc, errors.GenerationFailed):
        return EXIT_GENERATE
    if isinstance(exc, (errors.Degenerate, errors.TooManyTies, errors.InconsistentAdjacency)):
        return EXIT_DEGENERATE
    if isinstance(exc, errors.Unbounded):
        return EXIT_UNBOUNDED
    return EXIT_INPUT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (errors.PolytopeError, ValueError, OSError) as exc:
        code = _exit_code(exc)
        payload = {"error": type(exc).__name__, "message": str(exc),
                   "exit_code": code, "detail": _error_detail(exc)}
        print(f"polydiam: {type(exc).__name__}: {exc}", file=sys.stderr)
        if getattr(args, "format", "json") == "json":
            sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
