"""
Classifier reports on the fixture monoids
=========================================

One row per fixture, one column per report section.
"""

from actlab import full_report
from actlab.classify import SECTIONS
from actlab.corpus import fixtures

SHORT = {"HOLDS": "yes", "FAILS": "no", "NOT-DECIDABLE-FINITE": "ndf", "UP-TO-BOUND": "utb", "R-EMPTY": "-"}

print("monoid".ljust(10), " ".join(s.rjust(6) for s in SECTIONS))
for name, M in fixtures().items():
    rep = full_report(M)
    row = [SHORT[rep["sections"][s]["verdict"]] for s in SECTIONS]
    print(name.ljust(10), " ".join(v.rjust(6) for v in row))

# the incomparable pair behind a failed stability verdict, with its grid
rep = full_report(fixtures()["rz2"])
w = rep["sections"]["thm71"]["witness"]
print("\nRZ2+1 incomparable left ideals", w["incomparable"], "below", w["under"])
for row in w["grid"]["pattern"]:
    print("  ", "".join("#" if v else "." for v in row))

# the condition-3 witness of model completeness
mc = full_report(fixtures()["b22"])["sections"]["thm51"]["witness"]
print("\nB22+1 smallest eSf:", mc)
