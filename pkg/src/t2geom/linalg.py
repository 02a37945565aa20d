"""Small dense linear algebra: symbolic determinants/solves over expression
matrices (needed where a constructed field must stay differentiable) and the
numeric rank/subspace checks used by the verifiers."""

from __future__ import annotations

import numpy as np

from . import expr as ex
from .errors import SingularForm


def sym_det(matrix) -> ex.Expr:
    """Determinant of a square expression matrix via memoised minor expansion.

    Minors are shared across cofactors, so the result is a compact DAG even
    for the 6 x 6 skew matrices of the Finslerian solver.
    """
    m = [list(row) for row in matrix]
    size = len(m)
    memo: dict[tuple, ex.Expr] = {}

    def minor(rows: tuple, cols: tuple) -> ex.Expr:
        if len(rows) == 1:
            return m[rows[0]][cols[0]]
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0 = rows[0]
        parts = []
        for k, c in enumerate(cols):
            e = m[r0][c]
            if ex.is_zero(e):
                continue
            sub = minor(rows[1:], cols[:k] + cols[k + 1:])
            sign = 1.0 if k % 2 == 0 else -1.0
            parts.append(ex.mul(ex.Const(sign), e, sub))
        out = ex.add(*parts)
        memo[key] = out
        return out

    return minor(tuple(range(size)), tuple(range(size)))


def sym_solve(matrix, rhs) -> list:
    """Solve A x = b symbolically by Cramer's rule (small A, expression entries)."""
    size = len(matrix)
    det = sym_det(matrix)
    inv_det = ex.Recip(det)
    out = []
    for j in range(size):
        replaced = [[rhs[i] if c == j else matrix[i][c] for c in range(size)]
                    for i in range(size)]
        out.append(ex.mul(sym_det(replaced), inv_det))
    return out


def sym_inverse(matrix) -> list:
    """Inverse of a small expression matrix via the adjugate."""
    size = len(matrix)
    det = sym_det(matrix)
    inv_det = ex.Recip(det)
    out = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            rows = tuple(r for r in range(size) if r != j)
            cols = tuple(c for c in range(size) if c != i)
            sub = [[matrix[r][c] for c in cols] for r in rows]
            cof = sym_det(sub) if sub else ex.ONE
            sign = 1.0 if (i + j) % 2 == 0 else -1.0
            out[i][j] = ex.mul(ex.Const(sign), cof, inv_det)
    return out


def rank(mat: np.ndarray, tol: float = 1e-8) -> int:
    return int(np.linalg.matrix_rank(mat, tol=tol))


def subspace_distance(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Distance between the column spaces of two matrices (0 iff equal spans)."""
    qa, _ = np.linalg.qr(basis_a)
    qb, _ = np.linalg.qr(basis_b)
    pa = qa @ qa.T
    pb = qb @ qb.T
    return float(np.max(np.abs(pa - pb)))


def kernel_basis(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    _, s, vt = np.linalg.svd(mat)
    null_mask = np.zeros(vt.shape[0], dtype=bool)
    null_mask[len(s):] = True
    null_mask[: len(s)] |= s <= tol * max(1.0, s[0] if len(s) else 1.0)
    return vt[null_mask].T


def solve_checked(mat: np.ndarray, rhs: np.ndarray, residual_tol: float = 1e-9) -> np.ndarray:
    """Dense solve with residual verification; raises SingularForm on failure."""
    try:
        x = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularForm(f"singular matrix in pointwise solve: {exc}") from exc
    res = float(np.max(np.abs(mat @ x - rhs)))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if res > residual_tol * scale:
        raise SingularForm(f"pointwise solve residual {res:.3e} exceeds {residual_tol:.1e}")
    return x
