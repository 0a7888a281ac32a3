"""Command-line interface.

Verbs: compute (cameras -> fundamental set), check (compatibility report),
reconstruct (set -> cameras), nview (rank/signature diagnostics), cycle
(skew edge data residuals), synth (seeded scenes).  Exit codes are a stable
contract: 0 compatible / success, 1 incompatible / failed, 2 input error,
3 undetermined.
"""
import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .compatibility import COMPATIBLE, INCOMPATIBLE, UNDETERMINED, check_complete
from .cycle import (
    ViewingGraph,
    cameras_from_cycle_solution,
    check_general_graph,
    cycle_residuals,
    skew_data_from_matrices,
)
from .exceptions import (
    FundcheckError,
    InvalidInput,
    ReconstructionFailed,
    ScaleRecoveryError,
    SchemaError,
)
from .nview import assemble, kgg_test, rank_only_test, recover_scales
from .projective import Tolerances
from .reconstruction import reconstruct_complete
from .sets import FundamentalSet
from .synth import SceneSpec, perturb, random_scene

EXIT_OK = 0
EXIT_INCOMPATIBLE = 1
EXIT_INPUT = 2
EXIT_UNDETERMINED = 3

_VERDICT_CODE = {COMPATIBLE: EXIT_OK, INCOMPATIBLE: EXIT_INCOMPATIBLE,
                 UNDETERMINED: EXIT_UNDETERMINED}

ENV_RESIDUAL_TOL = "FUNDCHECK_TOL_RESIDUAL"


def _tolerances(args):
    residual = args.tol_residual
    if residual is None:
        env = os.environ.get(ENV_RESIDUAL_TOL)
        residual = float(env) if env else None
    kwargs = {}
    if args.tol_rank is not None:
        kwargs["rank_tol"] = args.tol_rank
    if residual is not None:
        kwargs["residual_tol"] = residual
    return Tolerances(**kwargs)


def _emit(doc, out):
    text = io.dump_json(doc, out)
    if out is None:
        print(text)


def cmd_compute(args):
    tol = _tolerances(args)
    cameras = io.cameras_from_doc(io.load_json(args.file))
    fset = FundamentalSet.from_cameras(cameras, tol=tol, normalize=True)
    _emit(io.fset_to_doc(fset), args.out)
    return EXIT_OK


def _check_one(path, args, tol):
    fset = io.fset_from_doc(io.load_json(path), tol)
    if args.graph:
        graph = io.graph_from_doc(io.load_json(args.graph))
        report = check_general_graph(fset, graph, tol)
    else:
        report = check_complete(fset, tol)
    return report


def cmd_check(args):
    tol = _tolerances(args)
    if args.batch:
        paths = sorted(Path(args.batch).glob("*.json"))
        if not paths:
            print(f"no .json files in {args.batch}", file=sys.stderr)
            return EXIT_INPUT
        codes = []
        for path in paths:
            try:
                report = _check_one(path, args, tol)
                codes.append(_VERDICT_CODE[report.verdict])
                print(f"{path.name}: {report.verdict}")
            except FundcheckError as exc:
                codes.append(EXIT_INPUT)
                print(f"{path.name}: error: {exc}")
        for level in (EXIT_INPUT, EXIT_INCOMPATIBLE, EXIT_UNDETERMINED):
            if level in codes:
                return level
        return EXIT_OK
    if not args.file:
        print("check needs a file or --batch DIR", file=sys.stderr)
        return EXIT_INPUT
    report = _check_one(args.file, args, tol)
    _emit(io.report_to_doc(report), args.out)
    return _VERDICT_CODE[report.verdict]


def cmd_reconstruct(args):
    tol = _tolerances(args)
    fset = io.fset_from_doc(io.load_json(args.file), tol)
    try:
        rec = reconstruct_complete(fset, tol)
    except ReconstructionFailed as exc:
        print(f"reconstruction failed: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    doc = io.cameras_to_doc(rec.cameras, {"residual": rec.residual,
                                          "uniqueness": rec.uniqueness})
    _emit(doc, args.out)
    return EXIT_OK


def cmd_nview(args):
    tol = _tolerances(args)
    fset = io.fset_from_doc(io.load_json(args.file), tol)
    mode = args.mode
    if mode == "auto":
        from .compatibility import _all_collinear_pattern

        mode = "collinear" if _all_collinear_pattern(fset.normalized()) else "noncollinear"
    try:
        scales = recover_scales(fset, tol)
    except ScaleRecoveryError as exc:
        print(f"scale recovery failed: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    nv = assemble(fset.normalized(), scales)
    diag = kgg_test(nv, mode, tol)
    rank_only = rank_only_test(nv, mode, fset, tol)
    doc = {"kind": "report", "version": io.VERSION}
    doc.update(diag.to_dict())
    doc["rank_only"] = rank_only
    doc["scales"] = {f"{i},{j}": v for (i, j), v in scales.items()}
    _emit(doc, args.out)
    return EXIT_OK if diag.verdict else EXIT_INCOMPATIBLE


def cmd_cycle(args):
    tol = _tolerances(args)
    fset = io.fset_from_doc(io.load_json(args.file), tol)
    graph = (io.graph_from_doc(io.load_json(args.graph)) if args.graph
             else ViewingGraph.of_set(fset))
    try:
        data = skew_data_from_matrices(
            {e: fset.matrices[e] for e in graph.edges}, tol)
    except (InvalidInput, KeyError) as exc:
        print(f"edge matrices are not skew-symmetric: {exc}", file=sys.stderr)
        return EXIT_INPUT
    residual = cycle_residuals(graph, data)
    doc = {"kind": "report", "version": io.VERSION, "cycle_residual": residual}
    ok = residual <= tol.residual_tol
    if ok and len(graph.components()) == 1:
        cams = cameras_from_cycle_solution(graph, data, tol)
        doc["cameras"] = [cams[v].tolist() for v in graph.vertices]
    doc["verdict"] = COMPATIBLE if ok else INCOMPATIBLE
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_INCOMPATIBLE


def cmd_synth(args):
    tol = _tolerances(args)
    spec = SceneSpec(n=args.n, case_tag=args.case, seed=args.seed)
    cameras = random_scene(spec, tol)
    fset = FundamentalSet.from_cameras(cameras, tol=tol)
    if args.noise:
        fset = perturb(fset, args.noise, seed=args.seed)
    if args.out_cameras:
        io.dump_json(io.cameras_to_doc(cameras), args.out_cameras)
    _emit(io.fset_to_doc(fset), args.out_set)
    return EXIT_OK


def _add_tol_flags(p):
    p.add_argument("--tol-rank", type=float, default=None,
                   help="singular value ratio below which values count as zero")
    p.add_argument("--tol-residual", type=float, default=None,
                   help=f"residual threshold (env {ENV_RESIDUAL_TOL} overrides the default)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fundcheck",
        description="compatibility checks and camera recovery for fundamental matrix sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="pairwise fundamental matrices of cameras")
    p.add_argument("file", help="cameras JSON")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("check", help="compatibility verdict for a set")
    p.add_argument("file", nargs="?", default=None, help="fundamental set JSON")
    p.add_argument("--graph", default=None, help="viewing graph JSON (general-graph check)")
    p.add_argument("--batch", default=None, help="directory of set JSONs")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reconstruct", help="recover cameras from a complete set")
    p.add_argument("file", help="fundamental set JSON")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("nview", help="stacked-matrix rank/signature diagnostics")
    p.add_argument("file", help="fundamental set JSON")
    p.add_argument("--mode", choices=("auto", "noncollinear", "collinear"), default="auto")
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_nview)

    p = sub.add_parser("cycle", help="cycle residuals of skew edge data")
    p.add_argument("file", help="fundamental set JSON with skew-symmetric matrices")
    p.add_argument("--graph", default=None)
    p.add_argument("--out", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_cycle)

    p = sub.add_parser("synth", help="seeded synthetic scene and set")
    p.add_argument("--case", choices=("Case1", "Case2", "Case3", "Case4", "General"),
                   default="General")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out-cameras", default=None)
    p.add_argument("--out-set", default=None)
    _add_tol_flags(p)
    p.set_defaults(fn=cmd_synth)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FundcheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
