"""``expfam`` command line.

Exit status is 0 on success, 2 when a check reports a violated verdict and
1 on errors such as unreadable input.
Every report embeds the resolved configuration.
"""

import argparse
import csv
import io as _io
import sys
from importlib import metadata

from . import io
from .circuits import (circuit_basis, closure_membership, coparallel_classes,
                       mixture_decomposition, rank_of_class)
from .errors import ExpFamError
from .family import convex_support_vertices
from .maximize import local_maximizers, max_divergence_oracle
from .optimality import optimality_report, scan_conjecture
from .projection import ri_project

COMMANDS = ("build", "project", "divergence", "maximize", "circuits", "decompose",
            "verify", "scan")
ORACLE_TOL = 1e-3


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def build_parser():
    parser = argparse.ArgumentParser(prog="expfam", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--family", help="family JSON file")
    parser.add_argument("--dist", help="distribution JSON file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-10,
                        help="moment residual tolerance of projections")
    parser.add_argument("--starts", type=int, default=64, help="random multistart directions")
    parser.add_argument("--oracle", action="store_true",
                        help="also run the brute-force maximisation oracle")
    parser.add_argument("--out", help="report path (default: standard output)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--N", type=int, help="scan: number of states")
    parser.add_argument("--k", type=int, help="scan: family dimension")
    parser.add_argument("--samples", type=int, default=200, help="scan: random families")
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ExpFamError(f"{args.command} needs --{name}")


def _build(args, family):
    return {"family": io.family_to_dict(family), "dim": family.dim,
            "normal_basis": [list(v) for v in family.normal_basis],
            "convex_support_vertices": sorted(convex_support_vertices(family).vertices)}, 0


def _project(args, family):
    P = io.load_distribution(args.dist, family.n_states)
    return ri_project(family, P, tol=args.tol).to_json(), 0


def _divergence(args, family):
    P = io.load_distribution(args.dist, family.n_states)
    proj = ri_project(family, P, tol=args.tol)
    membership = closure_membership(family, P)
    return {"divergence": proj.divergence, "projection": proj.to_json(),
            "in_closure": membership.member}, 0


def _maximize(args, family):
    report = local_maximizers(family, n_starts=args.starts, seed=args.seed)
    out = report.to_json()
    code = 0
    if args.oracle:
        value, argmax = max_divergence_oracle(family)
        agree = abs(value - report.global_estimate) <= ORACLE_TOL
        out["oracle"] = {"value": value, "argmax": argmax, "agrees": agree,
                         "tol": ORACLE_TOL}
        code = 0 if agree else 2
    return out, code


def _circuits(args, family):
    return {"circuits": circuit_basis(family).to_json()}, 0


def _decompose(args, family):
    basis = circuit_basis(family)
    cop = coparallel_classes(family, basis)
    return {"coparallel_classes": [{"states": list(c), "rank": rank_of_class(family, c, basis)}
                                   for c in cop.classes],
            "loops": list(cop.loops),
            "components": [{"states": list(s), "family": io.family_to_dict(f)}
                           for s, f in mixture_decomposition(family, basis)]}, 0


def _verify(args, family):
    report = optimality_report(family, n_starts=args.starts, seed=args.seed,
                               oracle=args.oracle)
    return report.to_json(), 0 if report.passed else 2


def _scan(args):
    _require(args, "N", "k")
    report = scan_conjecture(args.N, args.k, args.samples, seed=args.seed)
    return report, 0


def _config(args):
    return {k: getattr(args, k) for k in ("command", "family", "dist", "seed", "tol",
                                          "starts", "oracle", "out", "format", "N", "k",
                                          "samples")}


def run(args):
    """Execute a parsed command; returns ``(exit_code, text)``."""
    config = _config(args)
    if args.command == "scan":
        report, code = _scan(args)
        if args.format == "csv":
            buf = _io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["family_id", "N", "k", "maxD", "bound"])
            for row in report.rows():
                writer.writerow([row[0], row[1], row[2], repr(row[3]), repr(row[4])])
            return code, buf.getvalue()
        result = report.to_json()
    else:
        _require(args, "family")
        family = io.load_family(args.family)
        if args.command in ("project", "divergence"):
            _require(args, "dist")
        handler = {"build": _build, "project": _project, "divergence": _divergence,
                   "maximize": _maximize, "circuits": _circuits, "decompose": _decompose,
                   "verify": _verify}[args.command]
        result, code = handler(args, family)
    return code, io.dumps({"config": config, "version": _version(), "result": result})


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, text = run(args)
    except ExpFamError as err:
        print(f"expfam: error: {err}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
