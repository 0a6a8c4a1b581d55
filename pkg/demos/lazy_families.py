"""
Infinite examples on finite windows
===================================

Rule-defined monoids whose ideal oracles are checked against bounded
certificate search before anything is classified.
"""

from actlab.lazy import LAZY_FAMILIES, bounded_classify, format_elem, lazy_family

for name in LAZY_FAMILIES:
    L = lazy_family(name, window=4 if name == "ex7_1" else 3)
    rep = bounded_classify(L)
    dirs = {k: v["evidence"]["direction"] for k, v in rep["sections"].items()}
    print(f"{name}: {rep['oracle_pairs_checked']} oracle pairs, {rep['window_elements']} window elements")
    print("   ", dirs)

# left zeros a_i, b_j separated by two free generators
L = lazy_family("ex7_1", window=4)
probe = bounded_classify(L)["sections"]["order_property"]["evidence"]
print("\n" + probe["formula"])
for i, row in enumerate(probe["pattern"]):
    print(f"  a{i}", "".join("#" if v else "." for v in row))

# a strictly growing chain of left ideals once a top level is added
top = lazy_family("ex8_4", window=3)
print("\nascending chain:", [format_elem(x) for x in top.ascending_chain(3)])
