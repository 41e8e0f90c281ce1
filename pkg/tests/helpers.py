"""Seeded generators shared by the test modules."""
import numpy as np

from scatterlab.linpoly import LinPoly


def rng(seed=0):
    return np.random.default_rng(seed)


def random_poly(F, gen, density=1.0):
    coeffs = gen.integers(0, F.order, size=F.n)
    if density < 1.0:
        coeffs = np.where(gen.random(F.n) < density, coeffs, 0)
    return LinPoly(F, coeffs.tolist())


def naive_eval(F, f, x):
    """sum a_i x^(q^i) with the power taken by repeated multiplication."""
    acc = 0
    for i, a in enumerate(f.coeffs):
        v = 1
        for _ in range(F.q**i):
            v = F.mul(v, x)
        acc = F.add(acc, F.mul(a, v))
    return acc
