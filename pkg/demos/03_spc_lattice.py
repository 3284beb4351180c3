#!/usr/bin/env python3
"""The lattice of labeled partial partitions: subsets of B, blocks, and
per-block group orbits of labels, ordered by refinement-with-matching
cross sections.  Adjoining a top element completes the meet semilattice;
the top is exactly where incompatible labelings collide.

Run:  python demos/03_spc_lattice.py
"""

from krc import FiniteGroup, TOP, canonicalize, enumerate_spcs, join, leq, meet

Z2 = FiniteGroup.cyclic(2)

universe = enumerate_spcs(2, Z2)
print(f"all {len(universe)} SPCs over B = {{1,2}} with G = Z_2:")
for s in universe:
    print("  ", s)
print("(plus the adjoined top: a completed lattice of 7 elements)")
print()

x = canonicalize(2, [{1, 2}], {1: 0, 2: 0}, Z2)
y = canonicalize(2, [{1, 2}], {1: 0, 2: 1}, Z2)
print("x =", x)
print("y =", y)
print("x <= y:", leq(x, y, Z2))
print("meet(x, y) =", meet(x, y, Z2))
print("join(x, y) =", join(x, y, Z2), " <- incompatible labels force the top")
print()

# Over the trivial group no labels can clash, so the join always exists
# as an SPC: the structure is a genuine lattice exactly then.
TRIV = FiniteGroup.trivial()
flat = enumerate_spcs(3, TRIV)
tops = sum(1 for a in flat for b in flat if join(a, b, TRIV) is TOP)
print(f"over the trivial group on 3 points: {len(flat)} SPCs, {tops} joins hit the top")
z2_universe = enumerate_spcs(2, Z2)
tops2 = sum(1 for a in z2_universe for b in z2_universe if join(a, b, Z2) is TOP)
print(f"over Z_2 on 2 points: {tops2} of {len(z2_universe)**2} joins hit the top")
