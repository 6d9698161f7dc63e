#!/usr/bin/env python3
"""Scan a battery of discriminants on a pair (p, q).

For each negative discriminant D coprime to pq, tabulates the total
optimal-embedding counts on both graphs against the closed-form trace
values, and flags the Gross vectors whose support meets an exceptional
edge (those break the cycle construction at small p).

    python scripts/disc_battery.py --p 13 --q 47 --bound 120
"""

import argparse

from shimura_pq.certify import load_or_build_graph
from shimura_pq.gross import (
    class_number,
    graph_eichler_units,
    gross_shimura,
    optimal_embeddings,
    support,
)
from shimura_pq.ntheory import kronecker


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=13)
    ap.add_argument("--q", type=int, default=47)
    ap.add_argument("--bound", type=int, default=100)
    ap.add_argument("--cache", default=None)
    args = ap.parse_args()
    p, q = args.p, args.q
    graph, _ = load_or_build_graph(p, q, args.cache)
    vset = graph.vset
    exceptional = {i for i, e in enumerate(graph.edges) if e.length > 1}

    print(f" D      h  (D|q) (D|p)  sum H_k  sum h_i  exceptional support")
    for d in range(-3, -args.bound - 1, -1):
        if d % 4 not in (0, 1) or d % p == 0 or d % q == 0:
            continue
        h = class_number(d)
        vertex_total = sum(
            optimal_embeddings(rec.right_order, d, vset.units_of(k))
            for k, rec in enumerate(vset.classes)
        )
        gam = gross_shimura(graph, d)
        edge_total = sum(
            int(gam[i] * graph.edges[i].length) for i in range(len(graph.edges))
        )
        expect_v = (1 - kronecker(d, q)) * h
        expect_e = (1 - kronecker(d, q)) * (1 + kronecker(d, p)) * h
        hits = sorted(set(support(gam)) & exceptional)
        flags = []
        if vertex_total != expect_v or edge_total != expect_e:
            flags.append("TRACE MISMATCH")
        if hits:
            flags.append(f"hits {hits}")
        print(f"{d:5} {h:4}  {kronecker(d, q):+}   {kronecker(d, p):+}   "
              f"{vertex_total:5}    {edge_total:5}    {' '.join(flags)}")


if __name__ == "__main__":
    main()
