"""Exact linear algebra over F_p (numpy int64) and over a finite field object."""
import numpy as np

from .kernels import batch_rank


class SingularSystemError(ValueError):
    pass


def rref(M, p):
    """Reduced row echelon form over F_p; returns (R, pivot_columns)."""
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        f = A[:, c].copy()
        f[r] = 0
        A = (A - f[:, None] * A[r][None, :]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p):
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return int(batch_rank(M[None], p)[0])


def row_basis(M, p):
    """Canonical (RREF) basis of the row space."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1])
    return rref(M, p)[0]


def nullspace(M, p):
    """Basis (as rows) of {v : M v = 0}."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = (-R[r, fc]) % p
    return out


def annihilator(rows, p, dim=None):
    """Basis of vectors orthogonal (dot product) to every given row."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return np.eye(dim if dim is not None else rows.shape[1], dtype=np.int64)
    return nullspace(rows, p)


def same_span(A, B, p):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    ra, rb = row_basis(A, p), row_basis(B, p)
    return ra.shape == rb.shape and bool((ra == rb).all())


def in_span(basis, vecs, p):
    """Row-wise membership of ``vecs`` in the row span of ``basis``."""
    basis = np.asarray(basis, dtype=np.int64)
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    if basis.shape[0] == 0:
        return ~(vecs % p).any(axis=1)
    ann = nullspace(basis, p)
    if ann.shape[0] == 0:
        return np.ones(vecs.shape[0], dtype=bool)
    return ~((vecs @ ann.T) % p).any(axis=1)


def solve(M, b, p):
    """One solution x of M x = b over F_p, or None."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, piv = rref(np.hstack([M, b]), p)
    if piv and piv[-1] == M.shape[1]:
        return None
    x = np.zeros(M.shape[1], dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, -1]
    return x


def inverse(M, p):
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    R, piv = rref(np.hstack([M, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise SingularSystemError("matrix is singular")
    return R[:, n:]


# -- elimination over a field object (GF or FieldTower) ---------------------

def _echelon(F, rows):
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    r = 0
    swaps = 0
    pivots = []
    for c in range(ncols):
        k = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if k is None:
            continue
        if k != r:
            A[r], A[k] = A[k], A[r]
            swaps += 1
        inv = F.inv(A[r][c])
        for i in range(r + 1, nrows):
            if A[i][c]:
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots, swaps


def field_rank(F, rows):
    return len(_echelon(F, rows)[1]) if rows else 0


def field_det(F, rows):
    n = len(rows)
    A, piv, swaps = _echelon(F, rows)
    if len(piv) < n:
        return 0
    d = 1
    for i in range(n):
        d = F.mul(d, A[i][i])
    return F.neg(d) if swaps % 2 else d


def field_solve(F, rows, rhs):
    """Unique solution of a square system over F; raises if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    A, piv, _ = _echelon(F, aug)
    if piv[:n] != list(range(n)):
        raise SingularSystemError("system is singular")
    x = [0] * n
    for i in range(n - 1, -1, -1):
        s = A[i][n]
        for j in range(i + 1, n):
            s = F.sub(s, F.mul(A[i][j], x[j]))
        x[i] = F.div(s, A[i][i])
    return x
