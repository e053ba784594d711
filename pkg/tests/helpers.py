"""Shared test oracles: dense exact matrices and a complex-float embedding.

The dense-matrix routines are an independent implementation (plain list
arithmetic, no sparse tensors) used to cross-check structure constants;
the float embedding sends z_N to exp(2 pi i / N) and is used as a sanity
oracle next to the exact assertions, never instead of them.
"""

import cmath

from atsbench.scalars import Scalar


def numeric(s: Scalar) -> complex:
    z = cmath.exp(2j * cmath.pi / s.conductor)
    return sum(float(c) * z ** k for k, c in enumerate(s.coeffs))


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) < tol


def dense_mul(field, a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = [[field.zero for _ in range(p)] for _ in range(n)]
    for i in range(n):
        for k in range(m):
            if a[i][k].is_zero():
                continue
            for j in range(p):
                out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def dense_transpose(m):
    return [list(row) for row in zip(*m)]


def dense_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def dense_scale(c, m):
    return [[c * x for x in row] for row in m]


def sparse_of_algebra_elem(alg, vec, dim):
    out = [alg.field.zero] * dim
    for i, c in vec.items():
        out[i] = c
    return out
