"""Dense exact linear algebra over finite fields.

Matrices are numpy int64 arrays with entries reduced into range(q); all
dimensions in this project are at most a few hundred, so plain Gaussian
elimination is fast enough.  Prime fields use vectorized mod-p row
operations; extension fields fall back to table arithmetic element-wise.
"""

from __future__ import annotations

import numpy as np

from .errors import DependentBasis, NotSubspace
from .field import FieldOps, FieldSpec, field_ops


def as_matrix(rows, cols: int | None = None) -> np.ndarray:
    M = np.array(rows, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else M.reshape(0, cols or 0)
    if M.size == 0 and cols is not None:
        M = M.reshape(0, cols)
    return M


def echelonize(M: np.ndarray, field: FieldSpec | FieldOps) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of M.

    Returns (rref, rank, pivot_columns).  Pivots are chosen leftmost-first,
    taking the first row with a nonzero entry, so the output is
    deterministic.
    """
    ops = field if isinstance(field, FieldOps) else field_ops(field)
    if ops.k == 1:
        return _echelon_prime(M, ops.p)
    return _echelon_generic(M, ops)


def _echelon_prime(M: np.ndarray, p: int) -> tuple[np.ndarray, int, list[int]]:
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            R[mask] = (R[mask] - np.outer(col[mask], R[r])) % p
        pivots.append(c)
        r += 1
    return R, len(pivots), pivots


def _echelon_generic(M: np.ndarray, ops: FieldOps) -> tuple[np.ndarray, int, list[int]]:
    R = [[int(x) for x in row] for row in np.asarray(M, dtype=np.int64)]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        sel = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if sel is None:
            continue
        R[r], R[sel] = R[sel], R[r]
        inv = ops.inv(R[r][c])
        R[r] = [ops.mul(inv, x) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [ops.sub(x, ops.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return np.array(R, dtype=np.int64).reshape(rows, cols), len(pivots), pivots


def rank(M: np.ndarray, field: FieldSpec | FieldOps) -> int:
    return echelonize(M, field)[1]


def express_in_span(v, basis: np.ndarray, field: FieldSpec | FieldOps):
    """Coefficients c with sum(c_i * basis_i) == v, or None if not in span.

    Raises DependentBasis if the basis rows are linearly dependent.
    """
    ops = field if isinstance(field, FieldOps) else field_ops(field)
    basis = as_matrix(basis)
    v = np.asarray(v, dtype=np.int64) % (ops.q if ops.k > 1 else ops.p)
    m = basis.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    if rank(basis, ops) != m:
        raise DependentBasis("basis rows are linearly dependent")
    # Solve x * basis = v by eliminating the augmented system [basis^T | v^T].
    aug = np.concatenate([basis.T, v.reshape(-1, 1)], axis=1)
    R, _, pivots = echelonize(aug, ops)
    if m in pivots:
        return None
    coeffs = np.zeros(m, dtype=np.int64)
    for row, c in enumerate(pivots):
        coeffs[c] = R[row, m]
    return coeffs


def extend_basis(sub: np.ndarray, ambient: np.ndarray, field: FieldSpec | FieldOps) -> np.ndarray:
    """Rows of ambient extending sub to a basis of ambient's row space.

    Rows are chosen greedily in ambient order, so the complement is
    deterministic.  Raises NotSubspace if sub is not inside the ambient
    row space.
    """
    ops = field if isinstance(field, FieldOps) else field_ops(field)
    ambient = as_matrix(ambient)
    sub = as_matrix(sub, cols=ambient.shape[1])
    ambient_rank = rank(ambient, ops)
    if sub.shape[0]:
        stacked = np.concatenate([ambient, sub], axis=0)
        if rank(stacked, ops) != ambient_rank:
            raise NotSubspace("sub is not contained in the ambient row space")
    current = sub
    current_rank = rank(sub, ops) if sub.shape[0] else 0
    chosen = []
    for row in ambient:
        if current_rank == ambient_rank:
            break
        trial = np.concatenate([current, row.reshape(1, -1)], axis=0)
        trial_rank = rank(trial, ops)
        if trial_rank > current_rank:
            chosen.append(row)
            current = trial
            current_rank = trial_rank
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), ambient.shape[1])
