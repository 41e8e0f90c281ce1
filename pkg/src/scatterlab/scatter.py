"""Scattered / L-q^t / R-q^t partially scattered classification.

Two independent routes:

* ``classify_definitional`` buckets x -> f(x)/x over F_{q^n}^* and inspects
  the ratio classes y/z inside each bucket;
* ``classify_frho`` tests bijectivity of f_rho(x) = f(rho x) - rho f(x) for
  rho in F_{q^t} \\ F_q (R), F_{q^n} \\ F_{q^t} (L), F_{q^n} \\ F_q (scattered).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ff_tower import GF, FieldError, FieldTower, build_field, prime_power, span_indices
from .kernels import batch_rank
from .linalg import nullspace
from .linpoly import LinPoly

PROPERTIES = ("scattered", "L_ps", "R_ps")
DEFAULT_BUDGET = 1 << 22
_CHUNK = 1 << 13


class MethodDisagreement(RuntimeError):
    """The definitional and f_rho routes returned different verdicts."""


@dataclass
class ClassificationReport:
    scattered: bool
    L_ps: bool
    R_ps: bool
    method: str
    t: int
    witness: dict = field(default_factory=dict)
    timing_ms: float = 0.0
    sampled: bool = False

    def __post_init__(self):
        if self.scattered != (self.L_ps and self.R_ps):
            raise AssertionError("scattered must equal L_ps and R_ps")

    @property
    def verdicts(self):
        return {"scattered": self.scattered, "L_ps": self.L_ps, "R_ps": self.R_ps}

    def to_json(self, tower=None, params=None):
        wit = {}
        for k, v in sorted(self.witness.items()):
            if tower is None:
                wit[k] = v
            elif isinstance(v, tuple):
                wit[k] = [tower.format_element(x) for x in v]
            else:
                wit[k] = tower.format_element(v)
        return {
            "verdicts": self.verdicts,
            "method": self.method,
            "witness": wit or None,
            "sampled": self.sampled,
            "params": dict(params or {}, t=self.t),
        }


def _check_divisor(tower, t):
    t = tower.require_t() if t is None else t
    if tower.n % t or not 1 < t < tower.n:
        raise FieldError(f"t={t} must be a nontrivial divisor of n={tower.n}")
    return t


# -- definitional route -----------------------------------------------------

def _first_violation(key, sub, xs):
    """Smallest (y, z), y < z, sharing ``key`` but differing in ``sub``; None if none."""
    order = np.lexsort((xs, key))
    k, s, x = key[order], sub[order], xs[order]
    new = np.r_[True, k[1:] != k[:-1]]
    gid = np.cumsum(new) - 1
    starts = np.flatnonzero(new)
    diff = s != s[starts][gid]
    if not diff.any():
        return None
    groups, first = np.unique(gid[diff], return_index=True)
    ys = x[starts[groups]]
    zs = x[diff][first]
    best = np.lexsort((zs, ys))[0]
    return int(ys[best]), int(zs[best])


def classify_definitional(f: LinPoly, t=None, *, budget=None, seed=0) -> ClassificationReport:
    """Classify f straight from the defining implications on ratios y/z."""
    start = time.perf_counter()
    F = f.tower
    t = _check_divisor(F, t)
    field_ = F.field
    if not field_.tables:
        raise FieldError("definitional classification needs a tabulated field")
    budget = DEFAULT_BUDGET if budget is None else budget
    sampled = F.order - 1 > budget
    if sampled:
        rng = np.random.default_rng(seed)
        xs = np.sort(rng.choice(np.arange(1, F.order, dtype=np.int64), size=budget, replace=False))
        fx = f.evaluate_a(xs)
    else:
        xs = np.arange(1, F.order, dtype=np.int64)
        fx = f.values[1:]
    ratio = field_.mul_a(fx, field_.inv_a(xs))
    logs = field_._log[xs]
    q1 = field_.q1
    mod_t = q1 // (F.q**t - 1)
    mod_1 = q1 // (F.q - 1)
    tcls = logs % mod_t
    qcls = logs % mod_1
    wit = {}
    w_l = _first_violation(ratio, tcls, xs)
    w_r = _first_violation(ratio * mod_t + tcls, qcls, xs)
    w_s = _first_violation(ratio, qcls, xs)
    for name, w in (("L_ps", w_l), ("R_ps", w_r), ("scattered", w_s)):
        if w is not None:
            wit[name] = w
    return ClassificationReport(
        scattered=w_s is None,
        L_ps=w_l is None,
        R_ps=w_r is None,
        method="definitional",
        t=t,
        witness=wit,
        timing_ms=(time.perf_counter() - start) * 1e3,
        sampled=sampled,
    )


# -- f_rho route ------------------------------------------------------------

def affine_orbit_leaders(tower, rhos):
    """Keep rho only if it is the smallest element of {l rho + c : l in F_q^*, c in F_q}.

    f_(l rho + c) = l f_rho, so bijectivity is constant on these orbits.
    """
    F = tower.field
    rhos = np.asarray(rhos, dtype=np.int64)
    fq = tower.subfield_elements(1)
    best = rhos.copy()
    for lam in fq[1:]:
        scaled = F.mul_a(int(lam), rhos)
        for c in fq:
            best = np.minimum(best, F.add_a(scaled, int(c)))
    return rhos[best == rhos]


def frho_singular(f: LinPoly, rhos) -> np.ndarray:
    """Boolean mask: f_rho is not bijective, for each rho in ``rhos``."""
    F = f.tower
    field_ = F.field
    dim = F.h * F.n
    rhos = np.asarray(rhos, dtype=np.int64)
    out = np.zeros(rhos.shape[0], dtype=bool)
    basis = F.subfield_basis(F.n)
    fb = [f.evaluate(b) for b in basis]
    for lo in range(0, rhos.shape[0], _CHUNK):
        r = rhos[lo : lo + _CHUNK]
        cols = []
        for b, vb in zip(basis, fb):
            img = field_.sub_a(f.evaluate_a(field_.mul_a(r, b)), field_.mul_a(r, vb))
            cols.append(field_.digits(img))
        mats = np.stack(cols, axis=2)
        out[lo : lo + _CHUNK] = batch_rank(mats, F.p) < dim
    return out


def _rho_sets(F, t):
    fq = F.subfield_elements(1)
    ft = F.subfield_elements(t)
    everything = np.arange(F.order, dtype=np.int64)
    return {
        "R_ps": np.setdiff1d(ft, fq),
        "L_ps": np.setdiff1d(everything, ft),
    }


def classify_frho(f: LinPoly, t=None, *, budget=None, seed=0, reduce=True) -> ClassificationReport:
    """Classify f through bijectivity of the maps f_rho."""
    start = time.perf_counter()
    F = f.tower
    t = _check_divisor(F, t)
    budget = DEFAULT_BUDGET if budget is None else budget
    sampled = False
    wit = {}
    for name, rhos in _rho_sets(F, t).items():
        if reduce:
            rhos = affine_orbit_leaders(F, rhos)
        if rhos.shape[0] > budget:
            rng = np.random.default_rng(seed)
            rhos = np.sort(rng.choice(rhos, size=budget, replace=False))
            sampled = True
        bad = frho_singular(f, rhos)
        if bad.any():
            wit[name] = int(rhos[bad].min())
    if wit:
        wit["scattered"] = min(wit.values())
    return ClassificationReport(
        scattered=not wit,
        L_ps="L_ps" not in wit,
        R_ps="R_ps" not in wit,
        method="f_rho",
        t=t,
        witness=wit,
        timing_ms=(time.perf_counter() - start) * 1e3,
        sampled=sampled,
    )


def classify(f: LinPoly, t=None, method="both", *, budget=None, seed=0) -> ClassificationReport:
    if method == "definitional":
        return classify_definitional(f, t, budget=budget, seed=seed)
    if method == "f_rho":
        return classify_frho(f, t, budget=budget, seed=seed)
    if method != "both":
        raise ValueError(f"unknown method {method!r}")
    a = classify_definitional(f, t, budget=budget, seed=seed)
    b = classify_frho(f, t, budget=budget, seed=seed)
    if not (a.sampled or b.sampled) and a.verdicts != b.verdicts:
        raise MethodDisagreement(f"definitional {a.verdicts} vs f_rho {b.verdicts} for {f!r}")
    wit = dict(b.witness)
    wit.update({f"{k}_pair": v for k, v in a.witness.items()})
    return ClassificationReport(
        scattered=a.scattered and b.scattered,
        L_ps=a.L_ps and b.L_ps,
        R_ps=a.R_ps and b.R_ps,
        method="both",
        t=a.t,
        witness=wit,
        timing_ms=a.timing_ms + b.timing_ms,
        sampled=a.sampled or b.sampled,
    )


# -- named families -----------------------------------------------------------

FAMILIES = ("binomial_2t", "trinomial_3t", "trace_kernel_fsk", "gax_shape")


@dataclass(frozen=True)
class FamilySpec:
    """A named construction with its parameters (field elements as indices)."""

    family: str
    params: dict

    @classmethod
    def from_json(cls, obj, tower):
        params = dict(obj.get("params", {}))
        for key in ("delta", "m"):
            if key in params:
                params[key] = tower.parse_element(params[key])
        if "a" in params:
            params["a"] = [tower.parse_element(c) for c in params["a"]]
        return cls(obj["family"], params)


def _need(cond, msg):
    if not cond:
        raise FieldError(f"constraint violated: {msg}")


def build_family(spec: FamilySpec, tower: FieldTower) -> LinPoly:
    F, n, q = tower, tower.n, tower.q
    t = F.require_t()
    prm = spec.params
    fam = spec.family
    if fam == "binomial_2t":
        s, delta = prm["s"], prm["delta"]
        _need(n == 2 * t, "n = 2t")
        _need(math.gcd(s, n) == 1, "gcd(s, n) = 1")
        return LinPoly.from_terms(F, [(s, delta), (t + s, 1)])
    if fam == "trinomial_3t":
        s, delta = prm["s"], prm["delta"]
        _need(n == 3 * t, "n = 3t")
        _need(math.gcd(s, n) == 1, "gcd(s, n) = 1")
        return LinPoly.from_terms(F, [(s, 1), (t + s, 1), (2 * t + s, delta)])
    if fam == "trace_kernel_fsk":
        s, k = prm["s"], prm["k"]
        _need(q % 2 == 1, "q odd")
        _need(n == 2 * t, "n = 2t")
        _need(math.gcd(s, n) == 1, "gcd(s, 2t) = 1")
        _need(math.gcd(k, n) == 1, "gcd(k, 2t) = 1")
        minus = F.neg(1)
        # (x + x^(q^t))^(q^s) + (x - x^(q^t))^(q^k)
        return LinPoly.from_terms(F, [(s, 1), (t + s, 1), (k, 1), (t + k, minus)])
    if fam == "gax_shape":
        a = list(prm["a"])
        s = prm.get("s", 1)
        k = prm.get("k", 0)
        m = prm.get("m", 0)
        _need(len(a) == F.tprime, "len(a) = n/t")
        _need(math.gcd(s, t) == 1, "x^(q^s) generates Gal(F_{q^t}/F_q): gcd(s, t) = 1")
        _need(0 <= k < F.tprime, "0 <= k < n/t")
        g = LinPoly.qt_polynomial(F, a, s)
        return g - LinPoly.monomial(F, k * t, m)
    raise FieldError(f"unknown family {fam!r}; expected one of {FAMILIES}")


# -- closure / transfer rules -----------------------------------------------

@dataclass
class RuleCheck:
    rule: str
    premise: bool
    conclusion: bool
    details: dict = field(default_factory=dict)

    @property
    def conforms(self):
        return (not self.premise) or self.conclusion

    def __bool__(self):
        return self.conforms


RULES = (
    "add_scalar_keeps_L",
    "add_qt_keeps_R",
    "compose_qt_R_iff_bijective",
    "twist_gives_R",
    "singular_qt_not_R",
    "coprime_L_gives_R",
)


def check_construction_rules(f: LinPoly, t=None, rule="add_qt_keeps_R", *, m=None, g=None, s=None, method="f_rho"):
    """Check one closure/transfer statement on an instance by reclassifying.

    Rules
    -----
    add_scalar_keeps_L : f L-ps  =>  f + m x is L-ps (needs ``m``)
    add_qt_keeps_R : f R-ps  =>  f + g is R-ps for a q^t-polynomial ``g``
    compose_qt_R_iff_bijective : f R-ps  =>  (g o f R-ps  <=>  g bijective)
    twist_gives_R : f a bijective L-ps q^t-polynomial, s | n, gcd(s, t) = 1
        =>  f(x^(q^s)) is R-q^t-ps and R-q^s-ps
    singular_qt_not_R : f a q^t-polynomial with nontrivial kernel
        =>  f(x^(q^s)) is not R-ps
    coprime_L_gives_R : gcd(t, n/t) = 1 and f L-q^t-ps  =>  f is R-q^(n/t)-ps
    """
    F = f.tower
    t = _check_divisor(F, t)

    def cls(h, tt=t):
        return classify(h, tt, method=method)

    if rule == "add_scalar_keeps_L":
        if m is None:
            raise FieldError("rule needs m")
        prem = cls(f).L_ps
        concl = cls(f + LinPoly.monomial(F, 0, m)).L_ps
        return RuleCheck(rule, prem, concl)
    if rule == "add_qt_keeps_R":
        if g is None or not g.is_qt_polynomial(t):
            raise FieldError("rule needs a q^t-polynomial g")
        return RuleCheck(rule, cls(f).R_ps, cls(f + g).R_ps)
    if rule == "compose_qt_R_iff_bijective":
        if g is None or not g.is_qt_polynomial(t):
            raise FieldError("rule needs a q^t-polynomial g")
        bij = g.is_bijective()
        r = cls(g.compose(f)).R_ps
        return RuleCheck(rule, cls(f).R_ps, r == bij, {"g_bijective": bij, "composite_R_ps": r})
    if rule in ("twist_gives_R", "singular_qt_not_R"):
        if not f.is_qt_polynomial(t):
            raise FieldError("rule needs f to be a q^t-polynomial")
        if s is None:
            raise FieldError("rule needs s")
        h = f.compose(LinPoly.monomial(F, s))
        if rule == "singular_qt_not_R":
            prem = not f.is_bijective()
            return RuleCheck(rule, prem, not cls(h).R_ps)
        _need(0 < s < F.n and F.n % s == 0, "s a proper divisor of n")
        _need(math.gcd(s, t) == 1, "gcd(s, t) = 1")
        prem = f.is_bijective() and cls(f).L_ps
        r_t = cls(h).R_ps
        r_s = True if s == 1 else cls(h, s).R_ps
        return RuleCheck(rule, prem, r_t and r_s, {"R_q^t": r_t, "R_q^s": r_s})
    if rule == "coprime_L_gives_R":
        tp = F.n // t
        _need(math.gcd(t, tp) == 1, "gcd(t, n/t) = 1")
        return RuleCheck(rule, cls(f).L_ps, cls(f, tp).R_ps)
    raise FieldError(f"unknown rule {rule!r}; expected one of {RULES}")


# -- the norm condition for binomials ----------------------------------------

@dataclass
class SolutionReport:
    method: str
    params: dict
    has_solution: bool
    count: int
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "method": self.method,
            "params": self.params,
            "has_solution": self.has_solution,
            "count": self.count,
            "witness": self.witness,
            "details": self.details,
        }


def norm_ratio_a(tower, rhos, s):
    """N_{q^2t/q^t}((rho^(q^(t+s)) - rho) / (rho^(q^s) - rho)) for rho outside F_q.

    Entries where the numerator vanishes are set to -1 (no element index),
    so they never count as solutions.
    """
    F = tower.field
    t = tower.require_t()
    rhos = np.asarray(rhos, dtype=np.int64)
    num = F.sub_a(tower.frobenius_a(rhos, t + s), rhos)
    den = F.sub_a(tower.frobenius_a(rhos, s), rhos)
    out = tower.rel_norm_a(F.mul_a(num, F.inv_a(den)), 2 * t, t)
    out[num == 0] = -1
    return out


def solve_norm_condition(q, t, s=1, d=None, *, method="scan", tower=None, direct_limit=1 << 12):
    """Solutions of the norm condition under which f_rho of a binomial is singular.

    ``scan``: all rho in F_{q^2t} \\ F_q with
    N_{q^2t/q^t}((rho^(q^(t+s)) - rho)/(rho^(q^s) - rho)) = d  (d an element of the tower).

    ``value_set``: for d = -1, s = 1 and odd q, whether
    {(r1^q - r1)^2 : r1 in F_{q^t}} meets {r2^2 + r2^(2q) : 0 != r2 in ker tr_{q^2t/q^t}}.
    Computed inside F_{q^2t} when F_{q^t} has at most ``direct_limit`` elements,
    and always through the reduction r2^2 = w, w running over the non-squares
    of F_{q^t}.
    """
    p, h = prime_power(q)
    if method == "scan":
        if math.gcd(s, 2 * t) != 1:
            raise FieldError("gcd(s, 2t) = 1 required")
        T = tower or build_field(p, h, 2 * t, t)
        if (T.q, T.n, T.t) != (q, 2 * t, t):
            raise FieldError("tower must be F_q <= F_{q^t} <= F_{q^2t}")
        if d is None:
            raise FieldError("scan needs d")
        rhos = np.setdiff1d(np.arange(T.order, dtype=np.int64), T.subfield_elements(1))
        sols = rhos[norm_ratio_a(T, rhos, s) == d]
        return SolutionReport(
            method="scan",
            params={"q": q, "t": t, "s": s, "d": T.format_element(d)},
            has_solution=bool(sols.size),
            count=int(sols.size),
            witness={"rho": T.format_element(int(sols[0]))} if sols.size else None,
        )
    if method != "value_set":
        raise ValueError(f"unknown method {method!r}")
    if s != 1:
        raise FieldError("the value-set reduction is stated for s = 1")
    if q % 2 == 0:
        raise FieldError("the value-set reduction needs odd q")
    reduced = _value_sets_reduced(p, h, t)
    details = {"reduced": reduced}
    if q**t <= direct_limit:
        direct = _value_sets_direct(p, h, t)
        details["direct"] = direct
        for key in ("left_size", "right_size", "common"):
            if direct[key] != reduced[key]:
                raise AssertionError(f"value-set routes disagree on {key}: {direct} vs {reduced}")
    return SolutionReport(
        method="value_set",
        params={"q": q, "t": t, "s": 1, "d": -1},
        has_solution=reduced["common"] > 0,
        count=reduced["common"],
        witness=reduced.get("witness"),
        details=details,
    )


def _intersect_report(left, right, left_src, right_src):
    lu, ru = np.unique(left), np.unique(right)
    common = np.intersect1d(lu, ru)
    out = {"left_size": int(lu.size), "right_size": int(ru.size), "common": int(common.size)}
    if common.size:
        v = int(common[0])
        out["witness"] = {
            "value": v,
            "rho1": int(left_src[left == v].min()),
            "rho2_source": int(right_src[right == v].min()),
        }
    return out


def _value_sets_reduced(p, h, t, chunk=1 << 18):
    K = GF(p, h * t)
    left, right = [], []
    total = K.order
    minus_one = K.neg(1)
    half = (total - 1) // 2
    for lo in range(0, total, chunk):
        a = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        fa = K.frob_a(a, h)
        da = K.sub_a(fa, a)
        left.append(K.mul_a(da, da))
    # a fixed non-square c; {c u^2 : u != 0} is the set of non-squares
    c = _non_square(K, half, minus_one)
    for lo in range(1, total, chunk):
        u = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        w = K.mul_a(c, K.mul_a(u, u))
        right.append(K.add_a(w, K.frob_a(w, h)))
    left = np.concatenate(left)
    right = np.concatenate(right)
    return _intersect_report(left, right, np.arange(total, dtype=np.int64), np.arange(1, total, dtype=np.int64))


def _non_square(K, half, minus_one):
    for c in range(2, K.order):
        if K.pow(c, half) == minus_one:
            return c
    raise AssertionError("no non-square found")  # pragma: no cover


def _value_sets_direct(p, h, t):
    T = build_field(p, h, 2 * t, t)
    F = T.field
    ft = T.subfield_elements(t)
    tr = LinPoly.trace(T, 2 * t, t)
    ker = [F.from_vec(v) for v in nullspace(tr.fq_matrix(), p)]
    rho2 = span_indices(F, ker)
    rho2 = rho2[rho2 != 0]
    d1 = F.sub_a(T.frobenius_a(ft, 1), ft)
    left = F.mul_a(d1, d1)
    sq = F.mul_a(rho2, rho2)
    right = F.add_a(sq, T.frobenius_a(sq, 1))
    return _intersect_report(left, right, ft, rho2)


# -- kernels of R-partially scattered polynomials -------------------------------

def kernel_elements(f: LinPoly):
    """All elements of ker f, sorted."""
    F = f.tower
    basis = [F.field.from_vec(v) for v in nullspace(f.fq_matrix(), F.p)]
    return span_indices(F.field, basis)


def max_kernel_qt_line_dim(f: LinPoly, t=None):
    """Largest F_q-dimension of ker f meet <v>_{F_{q^t}} over v != 0."""
    F = f.tower
    t = _check_divisor(F, t)
    ker = kernel_elements(f)
    ker = ker[ker != 0]
    if not ker.size:
        return 0
    M = F.field.q1 // (F.q**t - 1)
    if F.field.tables:
        cls = F.field._log[ker] % M
    else:
        sub = F.subfield_elements(t)[1:]
        cls = np.min([F.field.mul_a(int(lam), ker) for lam in sub], axis=0)
    _, counts = np.unique(cls, return_counts=True)
    return round(math.log(int(counts.max()) + 1, F.q))
