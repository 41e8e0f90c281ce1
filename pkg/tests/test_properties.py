"""Randomised algebraic identities, driven by hypothesis."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from scatterlab import kernels
from scatterlab.ff_tower import build_field
from scatterlab.linpoly import LinPoly, linpoly_from_matrix
from scatterlab.rmcode import RMCode, delsarte_dual
from scatterlab.scatter import classify

TOWERS = [build_field(3, 1, 4, 2), build_field(2, 1, 6, 3), build_field(3, 2, 2), build_field(2, 1, 4, 2)]

props = settings(max_examples=60, deadline=None)


def tower():
    return st.sampled_from(TOWERS)


@st.composite
def elements(draw, k=3):
    F = draw(tower())
    return (F, *(draw(st.integers(0, F.order - 1)) for _ in range(k)))


@st.composite
def polys(draw, k=2):
    F = draw(tower())
    coeff = st.lists(st.integers(0, F.order - 1), min_size=F.n, max_size=F.n)
    return (F, *(LinPoly(F, draw(coeff)) for _ in range(k)))


# -- field arithmetic ------------------------------------------------------------------


@props
@given(elements())
def test_ring_axioms(data):
    F, a, b, c = data
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@props
@given(elements(2), st.integers(0, 12))
def test_frobenius_is_a_field_automorphism(data, j):
    F, a, b = data
    assert F.frobenius(F.add(a, b), j) == F.add(F.frobenius(a, j), F.frobenius(b, j))
    assert F.frobenius(F.mul(a, b), j) == F.mul(F.frobenius(a, j), F.frobenius(b, j))
    assert F.frobenius(a, F.n) == a


@props
@given(elements(2))
def test_relative_norm_and_trace(data):
    F, a, b = data
    for l in range(1, F.n + 1):
        if F.n % l:
            continue
        assert F.rel_norm(F.mul(a, b), F.n, l) == F.mul(F.rel_norm(a, F.n, l), F.rel_norm(b, F.n, l))
        assert F.rel_trace(F.add(a, b), F.n, l) == F.add(F.rel_trace(a, F.n, l), F.rel_trace(b, F.n, l))
        tr = F.rel_trace(a, F.n, l)
        assert F.frobenius(tr, l) == tr  # lands in F_{q^l}


@props
@given(elements(1), elements(1))
def test_batch_ops_match_scalar(x, y):
    F, a = x
    b = y[1] % F.order
    A = np.array([a, b, 0, 1], dtype=np.int64)
    B = np.array([b, a, a, b], dtype=np.int64)
    assert F.field.mul_a(A, B).tolist() == [F.mul(u, v) for u, v in zip(A.tolist(), B.tolist())]
    assert F.field.add_a(A, B).tolist() == [F.add(u, v) for u, v in zip(A.tolist(), B.tolist())]


# -- linearized polynomials ------------------------------------------------------------


@props
@given(polys(), st.integers(0, 10**6))
def test_compose_is_function_composition(data, x):
    F, f, g = data
    x %= F.order
    assert f.compose(g)(x) == f(g(x))


@props
@given(polys())
def test_adjoint_identities(data):
    F, f, g = data
    assert f.adjoint().adjoint() == f
    assert f.compose(g).adjoint() == g.adjoint().compose(f.adjoint())
    assert (f + g).adjoint() == f.adjoint() + g.adjoint()


@props
@given(polys(1), st.integers(0, 10**6), st.integers(0, 10**6))
def test_adjoint_respects_trace_form(data, x, y):
    F, f = data
    x, y = x % F.order, y % F.order
    lhs = F.rel_trace(F.mul(f(x), y), F.n, 1)
    rhs = F.rel_trace(F.mul(x, f.adjoint()(y)), F.n, 1)
    assert lhs == rhs


@props
@given(polys(), st.integers(1, 10**6))
def test_f_rho_is_additive_in_f(data, rho):
    F, f, g = data
    rho = rho % (F.order - 1) + 1
    assert (f + g).f_rho(rho) == f.f_rho(rho) + g.f_rho(rho)
    assert f.f_rho(1).is_zero()
    x = F.g
    assert f.f_rho(rho)(x) == F.sub(f(F.mul(rho, x)), F.mul(rho, f(x)))


@props
@given(polys(1))
def test_rank_nullity_and_dickson(data):
    F, f = data
    rank, _ = f.rank_kernel()
    assert rank + f.kernel_dim() == F.n
    assert f.dickson_rank() == rank
    assert f.is_bijective() == (f.dickson_det() != 0)


@props
@given(polys(1))
def test_matrix_round_trip(data):
    F, f = data
    assert linpoly_from_matrix(F, f.fq_matrix()) == f


@settings(max_examples=25, deadline=None)
@given(polys(1))
def test_classification_routes_agree(data):
    F, f = data
    if F.t is None:
        return
    a = classify(f, F.t, "definitional")
    b = classify(f, F.t, "f_rho")
    assert (a.scattered, a.L_ps, a.R_ps) == (b.scattered, b.L_ps, b.R_ps)


@settings(max_examples=30, deadline=None)
@given(polys(1))
def test_adjoint_preserves_scatteredness(data):
    F, f = data
    if F.t is None:
        return
    assert classify(f, F.t).scattered == classify(f.adjoint(), F.t).scattered


# -- codes and kernels ------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(polys(2))
def test_dual_is_an_involution(data):
    F, f, g = data
    C = RMCode.from_generators(F, [f, g], F.n, scalar_field_exp=1)
    D = delsarte_dual(C)
    assert C.fp_dim + D.fp_dim == F.h * F.n**2  # F_p-dimension of the F_q-linear maps
    assert delsarte_dual(D) == C


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_batch_rank_invariant_under_row_ops(p, r, c, seed):
    gen = np.random.default_rng(seed)
    M = gen.integers(0, p, size=(8, r, c))
    P = gen.integers(0, p, size=(r, r))
    # an invertible left factor keeps the rank
    P[np.triu_indices(r, 1)] = 0
    np.fill_diagonal(P, 1)
    PM = np.einsum("ij,bjk->bik", P, M) % p
    assert (kernels.batch_rank(PM, p) == kernels.batch_rank(M, p)).all()
    assert (kernels.batch_rank(np.swapaxes(M, 1, 2).copy(), p) == kernels.batch_rank(M, p)).all()
