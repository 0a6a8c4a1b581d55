"""
Regular points, regular cores and glued cyclic acts
===================================================

A walk through the act layer on two small monoids.
"""

import numpy as np

from actlab import families, regular_representation, validate_act
from actlab.act import coproduct, cyclic_subact
from actlab.regular import decompose_regular, is_act_regular, regular_core

# right zeros with an identity: 0 is 1, 1 is x, 2 is y
M = families.rz2_plus_1()
S = regular_representation(M)
print("RZ2+1 table\n", M.table)

# each point of S over itself is regular, certified by an idempotent
for a in S.points:
    entry = is_act_regular(S, a)
    print(f"point {M.name(a)}: regular={entry.regular}, idempotent={M.name(entry.idempotent)}")

# the one-point act over a chain of groups is not: the group part acts freely
G = families.cg()
one = validate_act(G, np.zeros((G.order, 1), dtype=np.int64))
entry = is_act_regular(one, 0)
print("\none-point act over CG(2,1) regular?", entry.regular)
print("each idempotent is refuted by a pair (s, t):", dict(entry.refutation))

# a regular act rebuilt from cyclic pieces S.e
SG = regular_representation(G)
piece, _ = cyclic_subact(SG, 3)
A, _ = coproduct(piece, SG)
dec = decompose_regular(A)
print("\nrepresentatives", dec.representatives, "idempotents", dec.idempotents)
print("coproduct size", dec.coproduct.size, "-> blocks", dec.theta.n_blocks, "== |A| =", A.size)
print("regular core of A has", len(regular_core(A)), "points")
