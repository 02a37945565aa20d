"""Nonlinear connections of types 1 and 2, their torsions, and the
decomposition of a type-1 connection into (spray, strong torsion).
"""

import numpy as np

from t2geom import expr as ex
from t2geom.connections import (Connection, associated_semispray,
                                conjugate_pair, decompose_type1,
                                reference_semispray, strong_torsion,
                                strong_torsion_closed_form,
                                validate_connection)
from t2geom.fields import VectorOneForm
from t2geom.sampling import SampleSpec, max_residual, sample_points

points = sample_points(1, SampleSpec(count=25, seed=0))

# the conjugate pair of the flat spray S0 = (y, z, 0)
S0 = reference_semispray(1, 2)
g1, g2 = conjugate_pair(S0, points)
p = points[0]
print("Gamma1 =")
print(g1.form.evaluate(p))
print("Gamma2 =")
print(g2.form.evaluate(p))
print("type-1 axioms:", validate_connection(g1.form, 1, points).passed)
print("type-2 axioms:", validate_connection(g2.form, 2, points).passed)

# a curved homogeneous type-1 connection: A = a y, B = a z
a = 0.5
rows = [[ex.ONE, ex.ZERO, ex.ZERO],
        [ex.mul(ex.Const(a), ex.coord("y", 0)), ex.Const(-1.0), ex.ZERO],
        [ex.mul(ex.Const(a), ex.coord("z", 0)), ex.ZERO, ex.Const(-1.0)]]
conn = Connection(VectorOneForm(1, rows), 1)
T = strong_torsion(conn)
print("\nstrong torsion at p:")
print(T.evaluate(p))
print("definition vs closed form:",
      max_residual(T - strong_torsion_closed_form(conn), points))

# decompose and reconstruct
S = associated_semispray(conn, reference_semispray(1, 1))
back = decompose_type1(S, T, points)
print("round-trip residual:", max_residual(back.form - conn.form, points))
print("flat decomposition:",
      np.round(decompose_type1(reference_semispray(1, 1),
                               VectorOneForm.zero(1), points).form.evaluate(p)))
