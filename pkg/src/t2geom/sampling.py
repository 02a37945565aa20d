"""Sample-point generation and residual helpers for pointwise verification.

Several canonical objects are smooth only away from y = 0, so the default
boxes keep every |y_i| in [0.5, 2] (random sign); x and z are uniform in
[-2, 2].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import ScalarPForm, VectorField, VectorOneForm, VectorTwoForm


@dataclass(frozen=True)
class SampleSpec:
    count: int = 25
    seed: int = 0
    x_bounds: tuple = (-2.0, 2.0)
    y_mag_bounds: tuple = (0.5, 2.0)
    z_bounds: tuple = (-2.0, 2.0)


def sample_points(n: int, spec: SampleSpec = SampleSpec()) -> np.ndarray:
    """Draw spec.count chart points of dimension 3n."""
    rng = np.random.default_rng(spec.seed)
    x = rng.uniform(*spec.x_bounds, size=(spec.count, n))
    ymag = rng.uniform(*spec.y_mag_bounds, size=(spec.count, n))
    ysign = rng.choice([-1.0, 1.0], size=(spec.count, n))
    z = rng.uniform(*spec.z_bounds, size=(spec.count, n))
    return np.hstack([x, ymag * ysign, z])


def max_residual(obj, points) -> float:
    """Max absolute value of a field/form over sample points (basis arguments)."""
    worst = 0.0
    for p in points:
        if isinstance(obj, VectorField):
            worst = max(worst, float(np.max(np.abs(obj.evaluate(p)))))
        elif isinstance(obj, VectorOneForm):
            worst = max(worst, float(np.max(np.abs(obj.evaluate(p)))))
        elif isinstance(obj, VectorTwoForm):
            for vec in obj.coeffs.values():
                from .expr import Evaluator

                e = Evaluator(p)
                worst = max(worst, max((abs(e(c)) for c in vec), default=0.0))
        elif isinstance(obj, ScalarPForm):
            from .expr import Evaluator

            e = Evaluator(p)
            if obj.degree == 0:
                worst = max(worst, abs(e(obj.body)))
            else:
                worst = max(worst, max((abs(e(c)) for c in obj.coeffs.values()), default=0.0))
        else:
            raise TypeError(f"cannot measure residual of {type(obj).__name__}")
    return worst


def random_polynomial_field(n: int, rng, max_degree: int = 2) -> VectorField:
    """Random vector field with small-integer polynomial components."""
    from . import expr as ex

    d = 3 * n
    comps = []
    for _ in range(d):
        terms = [ex.Const(float(rng.integers(-2, 3)))]
        for _ in range(max_degree):
            j = int(rng.integers(0, d))
            c = float(rng.integers(-2, 3))
            k = int(rng.integers(0, d))
            terms.append(ex.mul(ex.Const(c), ex.coord_global(n, j), ex.coord_global(n, k)))
        comps.append(ex.add(*terms))
    return VectorField(n, comps)
