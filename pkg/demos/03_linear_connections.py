"""Linear connections and the nonlinear connections they induce.

Walks through the built-in catalog: the flat connection (J2-regular but not
J1-regular), a J1-regular sample whose induced type-2 connection has a
closed form, and a torsion-free member whose strong torsion relates the two
canonical constructions.
"""

import numpy as np

from t2geom.canonical import canonical_pack
from t2geom.linear import (catalog, dc_matrix, fiber_maps, homogeneity_criterion,
                           induced_connection, is_regular, prop3_obstruction,
                           prop4_relation)
from t2geom.sampling import SampleSpec, max_residual, sample_points

points = sample_points(1, SampleSpec(count=25, seed=0))
cat = catalog(1, points)
pack = canonical_pack(1)
p = points[0]

flat = cat["flat"]
print("flat connection:")
print("  J1-regular:", is_regular(flat, "J1", points).verdict)
print("  J2-regular:", is_regular(flat, "J2", points).verdict)
print("  obstruction report:")
print(prop3_obstruction(flat, points).to_text())

g1 = induced_connection(flat, "J2", points)
print("induced type-1 connection of the flat connection:")
print(np.round(g1.form.evaluate(p)))

sample = cat["sample"]
print("sample connection (coefficients singular at y = 0):")
print("  D C1 =")
print(np.round(dc_matrix(sample, pack.C1).evaluate(p), 10))
g2 = induced_connection(sample, "J1", points)
print("  induced type-2 connection:")
print(np.round(g2.form.evaluate(p)))
crit, homog = homogeneity_criterion(sample, "J1", points)
print("  homogeneity criterion / verdict:", crit, "/", homog)

witness = cat["prop4-witness"]
conn, bar, T, rep = prop4_relation(witness, points)
print("\ntorsion-free witness: T - 3(Gamma2 - Gamma2bar) residual =",
      max_residual(T - 3.0 * (conn.form - bar.form), points))
print(rep.to_text())
