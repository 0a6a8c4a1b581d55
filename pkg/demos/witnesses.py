"""
Witness constructions
=====================

Grid, tree, counting and triple constructions, each checked by the
formula evaluator as it is built.
"""

from actlab import families
from actlab.act import cyclic_subact, regular_representation
from actlab.logic import format_formula
from actlab.witness import (
    build_counting,
    build_grid,
    build_tree,
    enumerate_triples,
    extract_triple,
    standard_counting_phi,
)

# grid: b_i and c_j related by the formula exactly when i >= j
M = families.rz2_plus_1()
w = build_grid(M, a=0, t=1, s=2, N=4)
print("formula:", format_formula(w.formula))
print("act size", w.act.size)
print(w.pattern().astype(int))

# tree: level-k membership tells sequences apart
t = build_tree(families.cg(), a=0, chain=[1, 3], kappa=2, d=2)
print("\ntree leaves", {"".join(map(str, k)): v for k, v in t.leaf.items()})

# counting acts: formula i holds at the glued point iff i in K
syn = families.syn9()
c = build_counting(syn, 1, 2, 3, 2, 3, standard_counting_phi(2), Ks=[(0,), (1,), (0, 2), ()])
for K, ca in sorted(c.acts.items(), key=lambda kv: sorted(kv[0])):
    print(f"K={sorted(K)!s:8} size={ca.act.size:2d} truth={[int(v) for v in ca.truth]}")

# triples over the two-point group act, and one extracted from a larger act
G = families.cg()
S = regular_representation(G)
A, _ = cyclic_subact(S, 1)
fam = enumerate_triples(G, A)
print("\ntriples over S.0_0:", fam.count())
tr, _, _ = extract_triple(G, S, S.orbit(3), 0)
print("extracted from S over S.0_1 at 1:", tr.to_json())
