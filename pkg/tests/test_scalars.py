"""Exact cyclotomic arithmetic: spec examples and field axioms."""

import random
from fractions import Fraction

import pytest

from atsbench.scalars import (ConductorMismatch, CycloField,
                              ScalarDivisionError, cyclotomic_polynomial,
                              euler_phi, parse_scalar)
from helpers import close, numeric


def test_root_of_unity_identity_case():
    assert CycloField(1).zeta(1, 0) == CycloField(1).one


def test_root_of_unity_minus_one():
    F = CycloField(2)
    assert F.zeta(2, 1) == F.scalar(-1)


def test_zeta4_squared_is_minus_one():
    # oracle: reduce x*x modulo x^2 + 1 by hand: x^2 = -1
    F = CycloField(4)
    i = F.zeta(4, 1)
    assert cyclotomic_polynomial(4) == (Fraction(1), Fraction(0), Fraction(1))
    assert i * i == F.scalar(-1)
    assert close(numeric(i) ** 2, -1)


def test_half_plus_half():
    F = CycloField(1)
    assert F.scalar(Fraction(1, 2)) + F.scalar(Fraction(1, 2)) == F.one


def test_inverse_of_minus_one():
    F = CycloField(2)
    assert F.scalar(-1).inverse() == F.scalar(-1)


def test_field_axioms_randomized_exact():
    # associativity, distributivity, inverses on seeded random triples
    rng = random.Random(12345)
    for conductor in (1, 2, 3, 4, 12):
        F = CycloField(conductor)
        for _ in range(40):
            a, b, c = (F.random_scalar(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a and a * b == b * a
            if not a.is_zero():
                assert a * a.inverse() == F.one
                assert (a / a) == F.one


def test_root_orders():
    for conductor in (2, 3, 4, 6, 12):
        F = CycloField(conductor)
        for n in (1, 2, 3, 4, 6, 12):
            if conductor % n:
                continue
            z = F.zeta(n, 1)
            assert z ** n == F.one
            for k in range(1, n):
                assert z ** k != F.one


def test_conductor_mismatch_errors():
    F3 = CycloField(3)
    with pytest.raises(ConductorMismatch):
        F3.zeta(2, 1)
    with pytest.raises(ConductorMismatch):
        CycloField(4).one + CycloField(2).one


def test_division_by_zero():
    F = CycloField(4)
    with pytest.raises(ScalarDivisionError):
        F.one / F.zero


def test_numeric_embedding_consistency():
    rng = random.Random(7)
    F = CycloField(12)
    for _ in range(25):
        a, b = F.random_scalar(rng), F.random_scalar(rng)
        assert close(numeric(a * b), numeric(a) * numeric(b), 1e-7)
        assert close(numeric(a + b), numeric(a) + numeric(b), 1e-7)


def test_textual_forms():
    assert parse_scalar("1/2 + 1/2", 1).rational_value() == 1
    F = CycloField(12)
    s = F.scalar(Fraction(3, 2)) * F.zeta(12, 5) - F.one
    assert parse_scalar(str(s), 12) == s
    assert str(F.zero) == "0"
    with pytest.raises(ConductorMismatch):
        parse_scalar("z4^1", 12)


def test_euler_phi_small():
    assert [euler_phi(n) for n in (1, 2, 3, 4, 6, 12)] == [1, 1, 2, 2, 2, 4]


def test_roots_of_unity_group():
    F = CycloField(4)
    roots = F.roots_of_unity()
    assert len(roots) == 4
    assert all((r ** 4) == F.one for r in roots)
    F3 = CycloField(3)
    roots3 = F3.roots_of_unity()
    assert len(roots3) == 6
