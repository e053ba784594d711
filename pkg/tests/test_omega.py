"""Structure-tensor algebras: gradings, morphisms, ideals, simplicity."""

import json

from atsbench.groups import AbelianGroup
from atsbench.omega import (INVOLUTION, PRODUCT, TRIPLE, Grading, LinearMap,
                            OmegaAlgebra, algebra_from_dict, algebra_to_dict,
                            check_grading, check_involution, check_morphism,
                            check_t4_flip, coarsen, graded_is_simple,
                            ideal_closure, is_simple, pi1_coarsening)
from atsbench.scalars import CycloField

FQ = CycloField(1)
Z = AbelianGroup(1)
ZxZ2 = AbelianGroup(1, (2,))


def matrix_algebra(n, with_involution=True):
    alg = OmegaAlgebra(FQ, n * n, {PRODUCT: 2},
                       [f"E{i+1}{j+1}" for i in range(n) for j in range(n)])
    def ix(i, j):
        return n * i + j
    for i in range(n):
        for j in range(n):
            for l in range(n):
                alg.set_entry(PRODUCT, (ix(i, j), ix(j, l)), {ix(i, l): FQ.one})
    if with_involution:
        alg.add_operator(INVOLUTION, 1)
        for i in range(n):
            for j in range(n):
                alg.set_entry(INVOLUTION, (ix(i, j),), {ix(j, i): FQ.one})
    return alg


def m2_grading(alg):
    degs = (Z.element((0,)), Z.element((-1,)), Z.element((1,)), Z.element((0,)))
    return Grading(alg, Z, degs, graded_ops=frozenset({PRODUCT}))


def test_m2_standard_grading_passes():
    alg = matrix_algebra(2)
    assert check_grading(m2_grading(alg)).passed


def test_bad_degmap_reports_violation():
    # E12 E21 = E11 would need degree (2) if both have degree (1)
    alg = matrix_algebra(2)
    degs = (Z.element((0,)), Z.element((1,)), Z.element((1,)), Z.element((0,)))
    rep = check_grading(Grading(alg, Z, degs, graded_ops=frozenset({PRODUCT})))
    assert not rep.passed
    assert any("(1, 2)" in v for v in rep.violations)


def test_trivial_grading_passes():
    alg = matrix_algebra(3)
    degs = tuple(Z.element((0,)) for _ in range(9))
    # everything sits in degree 0, so even the involution is graded here
    assert check_grading(Grading(alg, Z, degs)).passed


def test_identity_morphism_passes():
    alg = matrix_algebra(2)
    assert check_morphism(LinearMap.identity(alg)).passed


def test_transpose_is_involution():
    alg = matrix_algebra(2)
    assert check_involution(alg).passed
    # 16 product pairs + 4 squares were scanned
    assert check_involution(alg).checked == 20


def test_swap_is_not_automorphism():
    alg = matrix_algebra(2)
    cols = [alg.basis_vec(0), alg.basis_vec(2), alg.basis_vec(1),
            alg.basis_vec(3)]
    f = LinearMap(alg, alg, cols)
    assert not check_morphism(f, ops=[PRODUCT]).passed


def test_t4_flip():
    alg = matrix_algebra(2)
    assert check_t4_flip(m2_grading(alg)).passed


def test_ideal_closure_of_zero():
    alg = matrix_algebra(2)
    assert ideal_closure(alg, [{}]).rank == 0


def test_ideal_closure_reaches_everything():
    alg = matrix_algebra(2)
    assert ideal_closure(alg, [alg.basis_vec(0)]).rank == 4


def make_f_plus_f(exchange):
    ops = {PRODUCT: 2}
    alg = OmegaAlgebra(FQ, 2, ops)
    alg.set_entry(PRODUCT, (0, 0), {0: FQ.one})
    alg.set_entry(PRODUCT, (1, 1), {1: FQ.one})
    if exchange:
        alg.add_operator(INVOLUTION, 1)
        alg.set_entry(INVOLUTION, (0,), {1: FQ.one})
        alg.set_entry(INVOLUTION, (1,), {0: FQ.one})
    return alg


def test_exchange_insertion_in_closure():
    alg = make_f_plus_f(exchange=True)
    assert ideal_closure(alg, [alg.basis_vec(0)]).rank == 2


def test_simplicity_examples():
    assert is_simple(matrix_algebra(2))
    assert not is_simple(make_f_plus_f(exchange=False))
    assert is_simple(make_f_plus_f(exchange=True))


def test_simplicity_catches_rotated_ideal():
    # F + F presented on the basis (1,1), (1,-1): no basis vector lies in
    # a proper ideal, the eigenvector sweep finds one anyway
    alg = OmegaAlgebra(FQ, 2, {PRODUCT: 2})
    half = FQ.scalar(1) / FQ.scalar(2)
    # e0 = (1,1), e1 = (1,-1): e0*e0 = (1,1) = e0, e0*e1 = (1,-1) = e1,
    # e1*e1 = (1,1) = e0
    alg.set_entry(PRODUCT, (0, 0), {0: FQ.one})
    alg.set_entry(PRODUCT, (0, 1), {1: FQ.one})
    alg.set_entry(PRODUCT, (1, 0), {1: FQ.one})
    alg.set_entry(PRODUCT, (1, 1), {0: FQ.one})
    assert not is_simple(alg)


def test_closure_monotone_idempotent():
    alg = matrix_algebra(2)
    small = ideal_closure(alg, [alg.basis_vec(1)])
    again = ideal_closure(alg, small.rows)
    assert again.rank == small.rank
    assert ideal_closure(alg, [alg.basis_vec(i) for i in range(4)]).rank == 4


def test_coarsening():
    alg = matrix_algebra(2)
    grading = m2_grading(alg)
    same = coarsen(grading, lambda d: d, Z)
    assert same.degmap == grading.degmap
    # Z -> Z/2 coarsening: degrees become (0), (1), (1), (0)
    Z2 = AbelianGroup(0, (2,))
    mod2 = coarsen(grading, lambda d: Z2.element((d.coords[0],)), Z2)
    assert check_grading(mod2).passed
    assert [d.coords for d in mod2.degmap] == [(0,), (1,), (1,), (0,)]


def test_coarsening_functoriality():
    # check_grading passes on the coarsened grading whenever it passes
    alg = matrix_algebra(2)
    gr = Grading(alg, ZxZ2,
                 (ZxZ2.element((0, 0)), ZxZ2.element((-1, 1)),
                  ZxZ2.element((1, 1)), ZxZ2.element((0, 0))),
                 graded_ops=frozenset({PRODUCT}))
    assert check_grading(gr).passed
    pi1 = pi1_coarsening(gr)
    assert check_grading(pi1).passed
    assert sorted(set(d.coords[0] for d in pi1.degmap)) == [-1, 0, 1]


def test_graded_simplicity_vs_plain():
    alg = make_f_plus_f(exchange=True)
    G = AbelianGroup(0, (2,))
    gr = Grading(alg, G, (G.element((0,)), G.element((1,))),
                 graded_ops=frozenset({PRODUCT}))
    assert not graded_is_simple(alg, gr)      # each block is a graded ideal
    assert is_simple(alg)                     # but phi-stability saves it


def test_triple_nontriviality_requirement():
    W = OmegaAlgebra(FQ, 1, {TRIPLE: 3})
    assert not is_simple(W)                   # zero product
    W.set_entry(TRIPLE, (0, 0, 0), {0: FQ.one})
    assert is_simple(W)


def test_unit_detection():
    alg = matrix_algebra(2)
    u = alg.unit()
    assert u == {0: FQ.one, 3: FQ.one}
    nounit = OmegaAlgebra(FQ, 1, {PRODUCT: 2})
    assert nounit.unit() is None


def test_json_round_trip():
    alg = matrix_algebra(2)
    gr = m2_grading(alg)
    data = json.loads(json.dumps(algebra_to_dict(alg, gr)))
    alg2, gr2 = algebra_from_dict(data)
    assert alg2.tensors == alg.tensors
    assert gr2.degmap == gr.degmap
    assert gr2.graded_ops == gr.graded_ops
