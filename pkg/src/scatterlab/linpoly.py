"""q-polynomials over F_{q^n} and their matrices."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg
from .ff_tower import FieldError, FieldTower


class LinPoly:
    """f(x) = sum a_i x^(q^i), i < n, as an F_q-endomorphism of F_{q^n}.

    Coefficients are element indices; index i holds the coefficient of
    x^(q^i).  Instances are immutable.
    """

    def __init__(self, tower: FieldTower, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != tower.n:
            raise FieldError(f"need exactly n={tower.n} coefficients, got {len(coeffs)}")
        for c in coeffs:
            tower.field.check(c)
        self.tower = tower
        self.coeffs = coeffs

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, tower):
        return cls(tower, [0] * tower.n)

    @classmethod
    def monomial(cls, tower, i, c=1):
        coeffs = [0] * tower.n
        coeffs[i % tower.n] = c
        return cls(tower, coeffs)

    @classmethod
    def identity(cls, tower):
        return cls.monomial(tower, 0)

    @classmethod
    def from_terms(cls, tower, terms):
        """Sum of c x^(q^i) over (i, c) pairs; exponents reduced mod n."""
        coeffs = [0] * tower.n
        for i, c in terms:
            coeffs[i % tower.n] = tower.add(coeffs[i % tower.n], c)
        return cls(tower, coeffs)

    @classmethod
    def qt_polynomial(cls, tower, a, s=0):
        """g_a(x^(q^s)) = sum a_i x^(q^(t i + s)) for a = (a_0, ..., a_{t'-1})."""
        t = tower.require_t()
        if len(a) != tower.tprime:
            raise FieldError(f"a must have n/t = {tower.tprime} entries")
        return cls.from_terms(tower, [(t * i + s, c) for i, c in enumerate(a)])

    @classmethod
    def trace(cls, tower, m=None, l=1):
        """tr_{q^m/q^l} as a q-polynomial (m defaults to n)."""
        m = tower.n if m is None else m
        return cls.from_terms(tower, [(l * i, 1) for i in range(m // l)])

    @classmethod
    def from_json(cls, tower, obj):
        if "coeffs" in obj:
            return cls(tower, [tower.parse_element(c) for c in obj["coeffs"]])
        if "monomials" in obj:
            return cls.from_terms(tower, [(int(i), tower.parse_element(c)) for i, c in obj["monomials"]])
        raise FieldError('q-polynomial JSON needs "coeffs" or "monomials"')

    def to_json(self):
        return {"coeffs": [self.tower.format_element(c) for c in self.coeffs]}

    # -- basics --------------------------------------------------------------

    def __repr__(self):
        terms = [f"{c}*x^(q^{i})" for i, c in enumerate(self.coeffs) if c]
        return "LinPoly(" + (" + ".join(terms) or "0") + ")"

    def __eq__(self, other):
        return isinstance(other, LinPoly) and self.tower == other.tower and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _same_tower(self, other):
        if self.tower != other.tower:
            raise FieldError("q-polynomials over different towers")

    def is_zero(self):
        return not any(self.coeffs)

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if c]

    def is_qt_polynomial(self, t=None):
        """True iff only exponents q^(t i) occur."""
        t = self.tower.require_t() if t is None else t
        return all(i % t == 0 for i in self.support())

    def __add__(self, other):
        self._same_tower(other)
        F = self.tower
        return LinPoly(F, [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._same_tower(other)
        F = self.tower
        return LinPoly(F, [F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return LinPoly(self.tower, [self.tower.neg(a) for a in self.coeffs])

    def scale(self, c):
        """c * f(x)."""
        return LinPoly(self.tower, [self.tower.mul(c, a) for a in self.coeffs])

    def precompose_scalar(self, c):
        """f(c x)."""
        F = self.tower
        return LinPoly(F, [F.mul(a, F.frobenius(c, i)) for i, a in enumerate(self.coeffs)])

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        F = self.tower
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, F.frobenius(x, i)))
        return acc

    def evaluate_a(self, xs):
        F = self.tower
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.field.add_a(acc, F.field.mul_a(a, F.frobenius_a(xs, i)))
        return acc

    @cached_property
    def values(self):
        """f(x) for every x, indexed by x."""
        return self.evaluate_a(np.arange(self.tower.order, dtype=np.int64))

    # -- algebra -------------------------------------------------------------

    def compose(self, other):
        """(self o other), reduced mod x^(q^n) - x."""
        self._same_tower(other)
        F, n = self.tower, self.tower.n
        out = [0] * n
        for i, fi in enumerate(self.coeffs):
            if not fi:
                continue
            for j, gj in enumerate(other.coeffs):
                if gj:
                    k = (i + j) % n
                    out[k] = F.add(out[k], F.mul(fi, F.frobenius(gj, i)))
        return LinPoly(F, out)

    def adjoint(self):
        """Adjoint with respect to (x, y) -> tr_{q^n/q}(x y)."""
        F, n = self.tower, self.tower.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            out[(n - i) % n] = F.frobenius(a, n - i)
        return LinPoly(F, out)

    def f_rho(self, rho):
        """f(rho x) - rho f(x)."""
        if rho == 0:
            raise FieldError("rho must be nonzero")
        F = self.tower
        return LinPoly(F, [F.mul(a, F.sub(F.frobenius(rho, i), rho)) for i, a in enumerate(self.coeffs)])

    # -- matrices --------------------------------------------------------------

    def dickson(self):
        """n x n Dickson matrix, entry (r, c) = a_{(c - r) mod n}^(q^r)."""
        F, n = self.tower, self.tower.n
        return [[F.frobenius(self.coeffs[(c - r) % n], r) for c in range(n)] for r in range(n)]

    def dickson_rank(self):
        return linalg.field_rank(self.tower, self.dickson())

    def dickson_det(self):
        return linalg.field_det(self.tower, self.dickson())

    def fq_matrix(self):
        """(hn x hn) F_p-matrix M with M vec(x) = vec(f(x))."""
        return restricted_matrix(self, self.tower.n)

    def rank_kernel(self):
        """(rank over F_q, F_q-basis of ker f)."""
        F = self.tower
        p, h = F.p, F.h
        M = self.fq_matrix()
        r = linalg.rank(M, p)
        if r % h:  # pragma: no cover - F_q-linearity
            raise AssertionError("F_p-rank of an F_q-linear map must be a multiple of h")
        ker = [F.field.from_vec(v) for v in linalg.nullspace(M, p)]
        return r // h, fq_independent(F, ker)

    def kernel_dim(self):
        return self.tower.n - self.rank_kernel()[0]

    def is_bijective(self):
        return linalg.rank(self.fq_matrix(), self.tower.p) == self.tower.h * self.tower.n


def restricted_matrix(f, d):
    """F_p-matrix (hn x hd) of f restricted to F_{q^d}, in the subfield basis."""
    F = f.tower
    basis = F.subfield_basis(d)
    vals = f.evaluate_a(np.asarray(basis, dtype=np.int64))
    return F.field.digits(vals).T.copy()


def coefficients_from_matrix(tower, M, d):
    """Coefficients c_0..c_{d-1} over F_{q^n} of the map F_{q^d} -> F_{q^n} given by M.

    Columns of ``M`` are images of the F_p-basis of F_{q^d}; the first d basis
    vectors form an F_q-basis, so a d x d Moore system pins the coefficients.
    """
    F = tower
    M = np.asarray(M, dtype=np.int64)
    fq_basis = F.subfield_fq_basis(d)
    values = [F.field.undigits(M[:, j]) for j in range(d)]
    values = [int(v) for v in values]
    moore = [[F.frobenius(b, i) for i in range(d)] for b in fq_basis]
    return linalg.field_solve(F, moore, values)


def linpoly_from_matrix(tower, M):
    return LinPoly(tower, coefficients_from_matrix(tower, M, tower.n))


def fq_independent(tower, elements):
    """Greedy F_q-independent subset (F_q = F_p when h = 1)."""
    F = tower
    if F.h == 1:
        return list(elements)
    scal = F.subfield_basis(1)
    chosen, rows = [], np.zeros((0, F.h * F.n), dtype=np.int64)
    r = 0
    for e in elements:
        new = F.field.digits(np.array([F.mul(s, e) for s in scal], dtype=np.int64))
        cand = np.vstack([rows, new])
        rc = linalg.rank(cand, F.p)
        if rc > r:
            chosen.append(e)
            rows, r = cand, rc
    return chosen


def interpolate_qt_linear(tower, pairs):
    """The q^t-polynomial g_a with g_a(v_j) = w_j for an F_{q^t}-basis (v_j).

    Raises :class:`linalg.SingularSystemError` when the v_j are not an
    F_{q^t}-basis of F_{q^n}.
    """
    F = tower
    t, tp = F.require_t(), F.tprime
    if len(pairs) != tp:
        raise FieldError(f"need exactly n/t = {tp} interpolation points")
    rows = [[F.frobenius(v, t * i) for i in range(tp)] for v, _ in pairs]
    a = linalg.field_solve(F, rows, [w for _, w in pairs])
    return LinPoly.qt_polynomial(F, a)


def qt_basis(tower):
    """An F_{q^t}-basis of F_{q^n}: 1, g, ..., g^(t'-1)."""
    tower.require_t()
    return [tower.element(j) for j in range(tower.tprime)]
