"""Exact arithmetic in F_{p^m} and the tower F_p <= F_q <= F_{q^t} <= F_{q^n}.

Elements are plain Python ints: the base-p digits of ``idx`` are the
coefficients of the element in the power basis of the defining modulus,
constant term first.  ``0`` is zero, ``1`` is one and, for m > 1, ``p`` is
the primitive element ``g`` (the class of ``x``).

Fields up to ``ZECH_LIMIT`` elements carry exp/log/Zech tables; larger
fields fall back to coefficient-vector arithmetic.  Every scalar operation
has a vectorised ``*_a`` twin working on int64 numpy arrays.
"""
from __future__ import annotations

import itertools
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint, isprime

ZECH_LIMIT = 1 << 22
_BLOCK = 2048


class FieldError(ValueError):
    pass


# -- polynomials over F_p as coefficient lists, constant term first --------

def _poly_mulmod(a, b, mod, p):
    m = len(mod) - 1
    res = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    res[i + j] = (res[i + j] + ai * bj) % p
    # mod is monic
    for k in range(len(res) - 1, m - 1, -1):
        c = res[k]
        if c:
            for j in range(m):
                res[k - m + j] = (res[k - m + j] - c * mod[j]) % p
    return res[:m]


def _poly_powmod_x(e, mod, p):
    """x^e modulo ``mod`` over F_p."""
    m = len(mod) - 1
    result = [1] + [0] * (m - 1)
    base = [0] * m
    if m == 1:
        base = [(-mod[0]) % p]
    else:
        base[1] = 1
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _prime_order(c, p):
    k, v = 1, c
    while v != 1:
        v = v * c % p
        k += 1
    return k


@lru_cache(maxsize=None)
def _factors(n):
    return tuple(factorint(n))


def is_primitive(coeffs, p):
    """True iff the monic polynomial with low coefficients ``coeffs`` is primitive.

    ``x`` having multiplicative order exactly p^m - 1 already forces
    irreducibility: a reducible modulus has fewer than p^m - 1 units.
    """
    m = len(coeffs)
    if coeffs[0] % p == 0:
        return False
    mod = [c % p for c in coeffs] + [1]
    order = p**m - 1
    one = [1] + [0] * (m - 1)
    if _poly_powmod_x(order, mod, p) != one:
        return False
    return all(_poly_powmod_x(order // r, mod, p) != one for r in _factors(order))


def smallest_primitive(p, m):
    """Lexicographically smallest primitive polynomial, constant term first."""
    # the norm of a root, (-1)^m c_0, must generate F_p^*
    roots = {c for c in range(1, p) if _prime_order(((-1) ** m * c) % p, p) == p - 1}
    for coeffs in itertools.product(range(p), repeat=m):
        if coeffs[0] in roots and is_primitive(coeffs, p):
            return list(coeffs)
    raise FieldError(f"no primitive polynomial of degree {m} over F_{p}")  # pragma: no cover


class GF:
    """The field F_{p^m}.

    Parameters
    ----------
    p : prime
    m : extension degree over F_p
    modulus : optional low coefficients ``[c_0, ..., c_{m-1}]`` of a monic
        primitive polynomial (a trailing leading 1 is accepted and dropped)
    tables : force (True) or forbid (False) Zech tables; default is by size
    """

    def __init__(self, p, m, modulus=None, *, tables=None):
        if not isprime(p):
            raise FieldError(f"p={p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be positive")
        self.p = int(p)
        self.m = int(m)
        self.order = self.p**self.m
        self.q1 = self.order - 1
        if modulus is None:
            modulus = smallest_primitive(self.p, self.m)
        else:
            modulus = [int(c) % self.p for c in modulus]
            if len(modulus) == self.m + 1:
                if modulus[-1] != 1:
                    raise FieldError("modulus must be monic")
                modulus = modulus[:-1]
            if len(modulus) != self.m:
                raise FieldError(f"modulus must have degree {self.m}")
            if not is_primitive(modulus, self.p):
                raise FieldError("modulus is reducible or imprimitive")
        self.modulus = tuple(modulus)
        self._pw = np.array([self.p**i for i in range(self.m)], dtype=np.int64)
        self._pw_list = [self.p**i for i in range(self.m)]
        # multiplication by x on coordinate vectors (companion matrix)
        T = np.zeros((self.m, self.m), dtype=np.int64)
        for i in range(1, self.m):
            T[i, i - 1] = 1
        T[:, self.m - 1] = [(-c) % self.p for c in self.modulus]
        self._companion = T
        self.g = self.p if self.m > 1 else self._prime_field_generator()
        self.tables = (self.order <= ZECH_LIMIT) if tables is None else bool(tables)
        if self.tables:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def _prime_field_generator(self):
        # m == 1: x maps to the root of x + c_0, i.e. -c_0
        return (-self.modulus[0]) % self.p

    # -- tables ------------------------------------------------------------

    def _build_tables(self):
        p, m, q1 = self.p, self.m, self.q1
        if m == 1:
            powers = np.empty((q1, 1), dtype=np.int64)
            v = 1
            for k in range(q1):
                powers[k, 0] = v
                v = v * self.g % p
            exp = powers[:, 0].copy()
        else:
            blk = min(_BLOCK, q1)
            first = np.zeros((blk, m), dtype=np.int64)
            v = np.zeros(m, dtype=np.int64)
            v[0] = 1
            for k in range(blk):
                first[k] = v
                v = self._companion @ v % p
            step = _matpow(self._companion, blk, p)
            exp = np.empty(q1, dtype=np.int64)
            A = np.eye(m, dtype=np.int64)
            for start in range(0, q1, blk):
                block = first @ A.T % p
                stop = min(start + blk, q1)
                exp[start:stop] = block[: stop - start] @ self._pw
                A = step @ A % p
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(q1, dtype=np.int64)
        if (log[1:] < 0).any():  # pragma: no cover - guarded by primitivity
            raise FieldError("modulus is not primitive")
        c0 = exp % p
        plus_one = exp - c0 + (c0 + 1) % p
        zech = np.where(plus_one == 0, -1, log[plus_one])
        self._exp = exp
        self._log = log
        self._zech = zech
        self._log_minus_one = 0 if p == 2 else q1 // 2

    # -- conversions -------------------------------------------------------

    def to_vec(self, x):
        x = int(x)
        return [(x // w) % self.p for w in self._pw_list]

    def from_vec(self, v):
        if len(v) != self.m:
            raise FieldError(f"coefficient vector must have length {self.m}")
        return sum((int(c) % self.p) * w for c, w in zip(v, self._pw_list))

    def digits(self, arr):
        arr = np.asarray(arr, dtype=np.int64)
        return (arr[..., None] // self._pw) % self.p

    def undigits(self, D):
        return np.asarray(D, dtype=np.int64) @ self._pw

    def check(self, x):
        if not (0 <= x < self.order):
            raise FieldError(f"{x} is not an element of {self!r}")
        return x

    # -- scalar arithmetic ---------------------------------------------------

    def log(self, x):
        if x == 0:
            raise ZeroDivisionError("log of zero")
        if not self.tables:
            raise FieldError("discrete log needs Zech tables")
        return int(self._log[x])

    def exp(self, k):
        """g^k."""
        if self.tables:
            return int(self._exp[k % self.q1])
        return self.pow(self.g, k)

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        if self.tables:
            la = self._log[a]
            z = self._zech[(self._log[b] - la) % self.q1]
            return 0 if z < 0 else int(self._exp[(la + z) % self.q1])
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(self.to_vec(a), self.to_vec(b), self._pw_list))

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        p = self.p
        return sum(((-x) % p) * w for x, w in zip(self.to_vec(a), self._pw_list))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.tables:
            return int(self._exp[(self._log[a] + self._log[b]) % self.q1])
        mod = list(self.modulus) + [1]
        return self.from_vec(_poly_mulmod(self.to_vec(a), self.to_vec(b), mod, self.p))

    def pow(self, a, e):
        e = int(e)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        if self.tables:
            return int(self._exp[(int(self._log[a]) * e) % self.q1])
        e %= self.q1
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.tables:
            return int(self._exp[(-self._log[a]) % self.q1])
        return self.pow(a, self.q1 - 1)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, k=1):
        """a^(p^k)."""
        if a == 0:
            return 0
        return self.pow(a, pow(self.p, k % self.m, self.q1) if self.q1 > 1 else 1)

    def prime_scalar(self, c):
        """The element c * 1 of the prime field."""
        return int(c) % self.p

    # -- vectorised arithmetic ---------------------------------------------

    def add_a(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.tables:
            a, b = np.broadcast_arrays(a, b)
            la = self._log[a]
            z = self._zech[(self._log[b] - la) % self.q1]
            out = np.where(z < 0, 0, self._exp[(la + z) % self.q1])
            out = np.where(a == 0, b, out)
            return np.where(b == 0, a, out)
        return self.undigits((self.digits(a) + self.digits(b)) % self.p)

    def neg_a(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self.undigits((-self.digits(a)) % self.p)

    def sub_a(self, a, b):
        return self.add_a(a, self.neg_a(b))

    def mul_a(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.tables:
            out = self._exp[(self._log[a] + self._log[b]) % self.q1]
            return np.where((a == 0) | (b == 0), 0, out)
        return self.undigits(self._mul_digits(self.digits(a), self.digits(b)))

    def _mul_digits(self, A, B):
        A, B = np.broadcast_arrays(A, B)
        m, p = self.m, self.p
        prod = np.zeros(A.shape[:-1] + (2 * m - 1,), dtype=np.int64)
        for i in range(m):
            prod[..., i : i + m] += A[..., i : i + 1] * B
        prod %= p
        return (prod[..., :m] + prod[..., m:] @ self._reduction_rows) % p

    @cached_property
    def _reduction_rows(self):
        # coordinates of x^m, ..., x^(2m-2)
        rows = np.zeros((max(self.m - 1, 0), self.m), dtype=np.int64)
        v = np.zeros(self.m, dtype=np.int64)
        v[self.m - 1] = 1
        for k in range(self.m - 1):
            v = self._companion @ v % self.p
            rows[k] = v
        return rows

    def pow_a(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if self.tables:
            out = self._exp[(self._log[a] * (e % self.q1)) % self.q1]
            return np.where(a == 0, 1 if e == 0 else 0, out)
        if e < 0:
            raise FieldError("negative powers need tables")
        D = self.digits(a)
        R = np.zeros_like(D)
        R[..., 0] = 1
        while e:
            if e & 1:
                R = self._mul_digits(R, D)
            D = self._mul_digits(D, D)
            e >>= 1
        return self.undigits(R)

    def inv_a(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero")
        if self.tables:
            return self._exp[(-self._log[a]) % self.q1]
        return self.pow_a(a, self.q1 - 1)

    def frob_a(self, a, k=1):
        a = np.asarray(a, dtype=np.int64)
        k %= self.m
        if self.tables:
            out = self._exp[(self._log[a] * pow(self.p, k, self.q1)) % self.q1]
            return np.where(a == 0, 0, out)
        M = self.frob_matrix(k)
        return self.undigits(self.digits(a) @ M.T % self.p)

    def frob_matrix(self, k=1):
        """F_p-matrix of x -> x^(p^k) on coordinate columns."""
        cols = [self.to_vec(self.frob_scalar_slow(self._pw_list[j], k)) for j in range(self.m)]
        return np.array(cols, dtype=np.int64).T

    def frob_scalar_slow(self, a, k):
        for _ in range(k % self.m):
            a = self.pow(a, self.p)
        return a

    # -- structure ---------------------------------------------------------

    def subfield_elements(self, d):
        """Sorted indices of F_{p^d}; d must divide m."""
        if self.m % d:
            raise FieldError(f"{d} does not divide {self.m}")
        if self.tables:
            step = self.q1 // (self.p**d - 1)
            els = self._exp[np.arange(0, self.q1, step)]
            return np.sort(np.concatenate([[0], els]))
        basis = self.subfield_basis(d)
        return np.sort(span_indices(self, basis))

    def subfield_generator(self, d):
        """A primitive element of F_{p^d}: g^((p^m - 1)/(p^d - 1))."""
        if self.m % d:
            raise FieldError(f"{d} does not divide {self.m}")
        return self.pow(self.g, self.q1 // (self.p**d - 1))

    def subfield_basis(self, d):
        """F_p-basis gamma^0, ..., gamma^(d-1) of F_{p^d}, gamma its generator."""
        gam = self.subfield_generator(d)
        out, v = [], 1
        for _ in range(d):
            out.append(v)
            v = self.mul(v, gam)
        return out


def _matpow(M, e, p):
    R = np.eye(M.shape[0], dtype=np.int64)
    B = M % p
    while e:
        if e & 1:
            R = R @ B % p
        B = B @ B % p
        e >>= 1
    return R


def span_indices(F, basis):
    """All F_p-linear combinations of ``basis`` as element indices."""
    D = F.digits(np.asarray(basis, dtype=np.int64))
    k = len(basis)
    coeffs = np.array(list(itertools.product(range(F.p), repeat=k)), dtype=np.int64)
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    return F.undigits(coeffs @ D % F.p)


class FieldTower:
    """The chain F_p <= F_q <= F_{q^t} <= F_{q^n} with q = p^h.

    ``t`` may be None for towers without an intermediate field (n prime or
    n = 2 with nothing in between); operations needing t then refuse.
    Exponents ``m``, ``l`` in the tower methods count powers of q.
    """

    def __init__(self, p, h, n, t=None, modulus=None, *, tables=None):
        if not isprime(p):
            raise FieldError(f"p={p} is not prime")
        if h < 1 or n < 1:
            raise FieldError("h and n must be positive")
        if t is not None and (n % t or t in (1, n)):
            raise FieldError(f"t={t} must be a divisor of n={n} with 1 < t < n")
        self.p, self.h, self.n, self.t = int(p), int(h), int(n), t
        self.tprime = None if t is None else n // t
        self.q = self.p**self.h
        self.field = GF(self.p, self.h * self.n, modulus, tables=tables)
        self.modulus = self.field.modulus
        self.g = self.field.g
        self.order = self.field.order

    def __repr__(self):
        return f"FieldTower(p={self.p}, h={self.h}, n={self.n}, t={self.t})"

    def __eq__(self, other):
        return isinstance(other, FieldTower) and (self.h, self.n, self.t, self.field) == (
            other.h,
            other.n,
            other.t,
            other.field,
        )

    def __hash__(self):
        return hash((self.h, self.n, self.t, self.field))

    @property
    def spec(self):
        return {"p": self.p, "h": self.h, "n": self.n, "t": self.t, "modulus": list(self.modulus)}

    def require_t(self):
        if self.t is None:
            raise FieldError("this tower has no intermediate field F_{q^t}")
        return self.t

    def _divides(self, m):
        if m <= 0 or self.n % m:
            raise FieldError(f"{m} does not divide n={self.n}")

    # delegation to the underlying field
    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def div(self, a, b):
        return self.field.div(a, b)

    def inv(self, a):
        return self.field.inv(a)

    def pow(self, a, e):
        return self.field.pow(a, e)

    def frobenius(self, x, j=1):
        """x^(q^j), j taken mod n."""
        return self.field.frob(x, self.h * (j % self.n))

    def frobenius_a(self, x, j=1):
        return self.field.frob_a(x, self.h * (j % self.n))

    def rel_trace(self, x, m, l):
        """tr_{q^m/q^l}(x) = sum of x^(q^(l i)) for i < m/l."""
        self._divides(m)
        if m % l:
            raise FieldError(f"{l} does not divide {m}")
        acc = 0
        for i in range(m // l):
            acc = self.add(acc, self.frobenius(x, l * i))
        return acc

    def rel_trace_a(self, x, m, l):
        self._divides(m)
        if m % l:
            raise FieldError(f"{l} does not divide {m}")
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for i in range(m // l):
            acc = self.field.add_a(acc, self.frobenius_a(x, l * i))
        return acc

    def rel_norm(self, x, m, l):
        """N_{q^m/q^l}(x) = x^((q^m - 1)/(q^l - 1))."""
        self._divides(m)
        if m % l:
            raise FieldError(f"{l} does not divide {m}")
        return self.pow(x, (self.q**m - 1) // (self.q**l - 1))

    def rel_norm_a(self, x, m, l):
        self._divides(m)
        if m % l:
            raise FieldError(f"{l} does not divide {m}")
        return self.field.pow_a(x, (self.q**m - 1) // (self.q**l - 1))

    def in_subfield(self, x, m):
        self._divides(m)
        return self.frobenius(x, m) == x

    def subfield_elements(self, m):
        """Sorted indices of F_{q^m}."""
        self._divides(m)
        return self.field.subfield_elements(self.h * m)

    def subfield_basis(self, m):
        """F_p-basis (h*m elements) of F_{q^m}; for m = n it is the power basis."""
        self._divides(m)
        if m == self.n:
            return [self.p**i for i in range(self.h * self.n)]
        return self.field.subfield_basis(self.h * m)

    def subfield_fq_basis(self, m):
        """F_q-basis of F_{q^m}: the first m powers of a generator of F_{q^m}."""
        self._divides(m)
        gam = self.g if m == self.n else self.field.subfield_generator(self.h * m)
        out, v = [], 1
        for _ in range(m):
            out.append(v)
            v = self.mul(v, gam)
        return out

    def element(self, k):
        """g^k."""
        return self.field.exp(k)

    def scalar(self, c):
        """Prime-field constant c * 1."""
        return self.field.prime_scalar(c)

    # -- JSON literals -------------------------------------------------------

    def parse_element(self, lit):
        """Element literal: 0, a prime-field integer, ["g", k] or ["vec", [c_0, ...]]."""
        if isinstance(lit, bool):
            raise FieldError(f"bad element literal {lit!r}")
        if isinstance(lit, int):
            return self.scalar(lit)
        if isinstance(lit, (list, tuple)) and len(lit) == 2:
            tag, val = lit
            if tag == "g":
                return self.element(int(val))
            if tag == "vec":
                return self.field.from_vec(list(val))
        raise FieldError(f"bad element literal {lit!r}")

    def format_element(self, x):
        return 0 if x == 0 else ["vec", self.field.to_vec(x)]


def build_field(p, h, n, t=None, modulus_override=None, *, tables=None):
    """Construct a :class:`FieldTower` (deterministic default modulus)."""
    return FieldTower(p, h, n, t, modulus_override, tables=tables)


def tower_from_json(obj, *, tables=None):
    return build_field(obj["p"], obj.get("h", 1), obj["n"], obj.get("t"), obj.get("modulus"), tables=tables)


def arith(F, a, b=None, kind="add"):
    """Dispatch helper: ``kind`` in add/sub/mul/div/inv/neg/pow (b is the exponent)."""
    if kind == "add":
        return F.add(a, b)
    if kind == "sub":
        return F.sub(a, b)
    if kind == "mul":
        return F.mul(a, b)
    if kind == "div":
        return F.div(a, b)
    if kind == "inv":
        return F.inv(a)
    if kind == "neg":
        return F.neg(a)
    if kind == "pow":
        return F.pow(a, b)
    raise ValueError(f"unknown operation {kind!r}")


def prime_power(q):
    """Split q = p^h; raises for non prime powers."""
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, h), = f.items()
    return int(p), int(h)

