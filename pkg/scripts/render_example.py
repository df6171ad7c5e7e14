#!/usr/bin/env python3
"""Produce an example figure: triangulation underlay, selected edges, and a
highlighted witness path for the longest Delaunay edge."""

import argparse

from d8span.analysis import witness_path
from d8span.builder import construct_d8
from d8span.geometry import euclid
from d8span.pointio import RunConfig, generate
from d8span.render import render_svg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="example.svg")
    args = ap.parse_args()

    ps = generate(RunConfig(n=args.n, seed=args.seed))
    T, sel = construct_d8(ps)
    longest = max(T.edges, key=lambda e: euclid(ps[e[0]], ps[e[1]]))
    w = witness_path(T, sel, *longest)
    with open(args.out, "w") as fh:
        fh.write(render_svg(T, sel, path=w.vertices))
    print(
        f"wrote {args.out}: witness for edge {longest} has "
        f"{len(w.vertices) - 1} hops, trace {w.trace}"
    )


if __name__ == "__main__":
    main()
