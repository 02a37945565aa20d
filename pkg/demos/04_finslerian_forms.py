"""Finslerian 2-forms on the second-order tangent bundle (n = 2).

Searches the built-in witness family for a maximal-rank member, derives its
energy and canonical spray, decomposes the form into an exact leading term
plus a contraction remainder, and builds the canonical connection pair.
Runs in about a minute; the spray components are symbolic rational
functions, so the conjugate-pair brackets dominate the cost.
"""

import numpy as np

from t2geom import expr as ex
from t2geom.canonical import canonical_pack
from t2geom.finsler import (canonical_connections, canonical_spray,
                            decompose_omega, finsler_witness, induced_metric,
                            skew_matrix, validate_finslerian)
from t2geom.sampling import SampleSpec, max_residual, sample_points

points = sample_points(2, SampleSpec(count=25, seed=0))
F = finsler_witness(2, points)
print(validate_finslerian(F, points).to_text())

p = points[0]
print("skew matrix rank at p:",
      np.linalg.matrix_rank(skew_matrix(F.omega, p), tol=1e-8))

G, E, rep = canonical_spray(F, points)
print("canonical spray at p:", np.round(G.evaluate(p), 6))
print("energy at p:", ex.evaluate(E, p))
print(rep.to_text())

# the induced metric pairs velocity lifts; the energy is half its norm
pack = canonical_pack(2)
s = G.evaluate(p)
print("g(J2 G, J2 G) - 2E =", induced_metric(F, s, s, p) - 2 * ex.evaluate(E, p))

lead, theta, rep = decompose_omega(F, points)
print(rep.to_text())
print("remainder term magnitude:", max_residual(theta, points))

g2, g1, _, rep = canonical_connections(F, points)
print(rep.to_text())
