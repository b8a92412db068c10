"""Sweeping exponent lattices.

The deciders are checked against each other and against the classical
regions on every point of a reciprocal grid.  The m = 2 scan at the end is the
table one would hand to a plotting tool.
"""
import collections
import time

from hlskit.consistency import (DEFAULT_GRID, check_duality, check_known_regions,
                                check_omega_gamma, default_lattices, parse_fix, scan_rows)

for lattice in default_lattices((1, 2)):
    for check in (check_duality, check_omega_gamma):
        t0 = time.perf_counter()
        rep = check(lattice)
        print(f"{rep.summary()}  [m={lattice.m}, {time.perf_counter() - t0:.2f}s]")

print(check_known_regions().summary())

# m = 2 region map with q_1 pinned to infinity
rows = list(scan_rows((1, 1), DEFAULT_GRID, parse_fix(["q1=inf"], 2)))
members = [r for r in rows if r["member"]]
print(f"{len(rows)} points with q1 = inf, {len(members)} members")
print("rules used:", dict(collections.Counter(r["rule"] for r in members)))
print("members with p2 = q2:", sum(r["p2"] == r["q2"] for r in members))
