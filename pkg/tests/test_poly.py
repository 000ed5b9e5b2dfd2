import random

import pytest

from trigrad.errors import HalfIntegerT
from trigrad.families import parse_poincare
from trigrad.grading import TriDegree
from trigrad.poly import Poincare, SignedLaurent, format_signed


TREFOIL = parse_poincare("a^2q^-2 + a^2q^2t^-2 + a^4t^-3")


def random_poincare(rng, max_terms=6):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = TriDegree(rng.randint(-3, 3), rng.randint(-4, 4), 2 * rng.randint(-3, 3))
        terms[mono] = terms.get(mono, 0) + rng.randint(1, 3)
    return Poincare(terms)


def test_add_identity():
    assert Poincare.zero() + TREFOIL == TREFOIL


def test_add_doubles_trefoil():
    doubled = TREFOIL + TREFOIL
    assert doubled.total_dim == 6
    assert all(mult == 2 for _, mult in doubled.items())


def test_mul_identity():
    assert TREFOIL * Poincare.one() == TREFOIL


def test_total_dim_additive_and_multiplicative():
    rng = random.Random(7)
    for _ in range(300):
        p, q = random_poincare(rng), random_poincare(rng)
        assert (p + q).total_dim == p.total_dim + q.total_dim
        assert (p * q).total_dim == p.total_dim * q.total_dim


def test_psi_dual_trefoil():
    assert TREFOIL.psi_dual() == parse_poincare("a^-2q^2 + a^-2q^-2t^2 + a^-4t^3")


def test_psi_involution_and_ring_hom():
    rng = random.Random(11)
    for _ in range(300):
        p, q = random_poincare(rng), random_poincare(rng)
        assert p.psi_dual().psi_dual() == p
        assert (p + q).psi_dual() == p.psi_dual() + q.psi_dual()
        assert (p * q).psi_dual() == p.psi_dual() * q.psi_dual()


def test_euler_trefoil():
    # sign (-1)^t applied per term
    expect = SignedLaurent({(2, -2): 1, (2, 2): 1, (4, 0): -1})
    assert TREFOIL.euler_specialize() == expect
    assert format_signed(expect) == "a^2q^-2 + a^2q^2 - a^4"


def test_euler_multiplicative():
    rng = random.Random(13)
    for _ in range(300):
        p, q = random_poincare(rng), random_poincare(rng)
        assert (p * q).euler_specialize() == p.euler_specialize() * q.euler_specialize()


def test_euler_rejects_half_integer_t():
    with pytest.raises(HalfIntegerT):
        Poincare.monomial(0, 0, 1).euler_specialize()


def test_sl_specialize_single_monomial():
    assert Poincare.monomial(2, -2, 0).sl_specialize(2) == Poincare.monomial(0, 2, 0)


def test_subtract_guards():
    with pytest.raises(ValueError):
        Poincare.zero().subtract(Poincare.one())
