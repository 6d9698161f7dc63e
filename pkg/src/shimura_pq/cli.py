"""Command line interface.

Subcommands: ``check`` runs the full criterion and emits a JSON certificate,
``graph`` builds the dual graph and reports statistics (optionally a DOT file
of the blown-up quotient), ``ogg`` classifies the congruence case.  Exit
codes for ``check``: 0 satisfied, 1 a verification check failed, 2 the
congruence hypotheses are unmet, 3 invalid input or internal error.
"""

import argparse
import json
import os
import sys

from .certify import (
    CACHE_ENV,
    certificate_json,
    check_ogg,
    exit_code,
    genus,
    graph_statistics,
    load_or_build_graph,
    run_criterion,
)
from .compgroup import to_dot


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="criterion",
        description="Rational-point criterion for Atkin-Lehner quotients of "
        "Shimura curves of discriminant pq, with exact certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the full criterion for (p, q)")
    check.add_argument("--p", type=int, required=True)
    check.add_argument("--q", type=int, required=True)
    check.add_argument("--l", type=int, default=None,
                       help="force the auxiliary prime of the conductor tower")
    check.add_argument("--max-n", type=int, default=None,
                       help="maximal tower depth (default: genus + 2)")
    check.add_argument("--cache", default=None, help="graph cache directory")
    check.add_argument("--json", dest="json_file", default=None,
                       help="also write the certificate to this file")
    check.add_argument("--override-hypotheses", action="store_true",
                       help="run the machinery even if hypotheses fail")

    graph = sub.add_parser("graph", help="build the dual graph and print statistics")
    graph.add_argument("--p", type=int, required=True)
    graph.add_argument("--q", type=int, required=True)
    graph.add_argument("--dot", default=None,
                       help="write the blown-up quotient graph in DOT format")
    graph.add_argument("--cache", default=None)
    graph.add_argument("--json", dest="json_file", default=None)

    ogg = sub.add_parser("ogg", help="classify the congruence case of (p, q)")
    ogg.add_argument("--p", type=int, required=True)
    ogg.add_argument("--q", type=int, required=True)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "ogg":
            out = {"p": args.p, "q": args.q, "ogg_case": check_ogg(args.p, args.q)}
            print(json.dumps(out, sort_keys=True, indent=2))
            return 0

        cache_dir = getattr(args, "cache", None) or os.environ.get(CACHE_ENV)

        if args.command == "graph":
            graph, from_cache = load_or_build_graph(args.p, args.q, cache_dir)
            stats, mg, blown = graph_statistics(graph)
            out = {
                "p": args.p,
                "q": args.q,
                "genus": genus(args.q),
                "graph": stats,
                "graph_from_cache": from_cache,
            }
            blob = json.dumps(out, sort_keys=True, indent=2)
            print(blob)
            if args.json_file:
                with open(args.json_file, "w", encoding="utf-8") as fh:
                    fh.write(blob + "\n")
            if args.dot:
                with open(args.dot, "w", encoding="utf-8") as fh:
                    fh.write(to_dot(blown))
            return 0

        cert = run_criterion(
            args.p,
            args.q,
            l=args.l,
            n_max=args.max_n,
            cache_dir=cache_dir,
            override=args.override_hypotheses,
        )
        blob = certificate_json(cert)
        sys.stdout.write(blob)
        if args.json_file:
            with open(args.json_file, "w", encoding="utf-8") as fh:
                fh.write(blob)
        return exit_code(cert)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - resource/internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
