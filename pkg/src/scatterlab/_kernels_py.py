"""Pure numpy kernels; reference implementation and import-time fallback."""
import numpy as np


def inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def batch_rank(mats, p):
    """Ranks over F_p of a stack of matrices, shape (B, R, C)."""
    A = np.array(mats, dtype=np.int64) % p
    if A.ndim != 3:
        raise ValueError("expected a (B, R, C) array")
    B, R, C = A.shape
    row = np.zeros(B, dtype=np.int64)
    if B == 0 or R == 0:
        return row
    inv = inverse_table(p)
    rows = np.arange(R)
    for c in range(C):
        mask = (A[:, :, c] != 0) & (rows[None, :] >= row[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = mask[b].argmax(axis=1)
        r0 = row[b]
        top = A[b, r0].copy()
        A[b, r0] = A[b, piv]
        A[b, piv] = top
        A[b, r0] = A[b, r0] * inv[A[b, r0, c]][:, None] % p
        factors = A[b, :, c].copy()
        factors[rows[None, :] <= r0[:, None]] = 0
        A[b] = (A[b] - factors[:, :, None] * A[b, r0][:, None, :]) % p
        row[b] += 1
        if (row >= R).all():
            break
    return row
