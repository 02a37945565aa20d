"""Canonical structures on the second-order tangent bundle.

Builds J1, J2, C1, C2 on a chart with n = 1, shows their matrices, and runs
the full identity suite (nilpotency, bracket relations, spray identities)
on randomized polynomial semi-sprays.
"""

import numpy as np

from t2geom import canonical_pack, make_semispray, verify_identity_suite
from t2geom import expr as ex
from t2geom.calculus import lie_bracket
from t2geom.sampling import SampleSpec, sample_points

n = 1
pack = canonical_pack(n)
p = np.array([0.5, 1.2, -0.7])  # (x, y, z)

print("J1 at p:")
print(pack.J1.evaluate(p))
print("J2 at p:")
print(pack.J2.evaluate(p))
print("C1 =", pack.C1.evaluate(p), "  C2 =", pack.C2.evaluate(p))
print("J2^2 = 2 J1:")
print(pack.J2.evaluate(p) @ pack.J2.evaluate(p))

# a semi-spray of type 2 is any field (y, z, g); a quadratic completion
S = make_semispray(n, 2, {"z": [ex.mul(ex.coord("y", 0), ex.coord("z", 0))]})
print("\nS =", S.field.evaluate(p))
print("[C2, S] - S =", (lie_bracket(pack.C2, S.field) - S.field).evaluate(p),
      " (nonzero: this completion is not homogeneous)")

points = sample_points(n, SampleSpec(count=25, seed=0))
report = verify_identity_suite(n, points, tol=1e-9, seed=0, spray_samples=5)
print()
print(report.to_text())
