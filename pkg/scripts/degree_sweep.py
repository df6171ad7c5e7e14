#!/usr/bin/env python3
"""Exploratory sweep: how often does the construction reach degree 8?

Runs random instances, tracks the degree histogram and the largest degree
ever seen, and saves the first degree-8 instance it encounters.
"""

import argparse
import collections
import json

import numpy as np

from d8span.analysis import degree_audit
from d8span.builder import construct_d8
from d8span.geometry import PointSet
from d8span.pointio import serialize_points


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--seed0", type=int, default=0)
    ap.add_argument("--save-first-8", default=None, help="point file path")
    args = ap.parse_args()

    hist = collections.Counter()
    max_seen = 0
    first_8 = None
    for k in range(args.instances):
        rng = np.random.default_rng(args.seed0 + k)
        ps = PointSet.from_pairs(rng.uniform(0, 1000, size=(args.n, 2)))
        T, sel = construct_d8(ps)
        d = degree_audit(T, sel)
        hist[d["max_degree"]] += 1
        max_seen = max(max_seen, d["max_degree"])
        if d["max_degree"] == 8 and first_8 is None:
            first_8 = args.seed0 + k
            if args.save_first_8:
                with open(args.save_first_8, "w") as fh:
                    fh.write(serialize_points(ps))

    print(
        json.dumps(
            {
                "instances": args.instances,
                "n": args.n,
                "max_degree_histogram": dict(sorted(hist.items())),
                "max_degree_seen": max_seen,
                "first_degree_8_seed": first_8,
            },
            indent=2,
        )
    )


if __name__ == "__main__":
    main()
