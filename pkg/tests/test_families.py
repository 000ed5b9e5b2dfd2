import random

import pytest

from trigrad.errors import BracketEval, BracketProduct, PolynomialSyntax
from trigrad.families import (
    FamilyPoincare,
    format_family,
    format_poly,
    parse_poincare,
    parse_poly,
    string_bottom_name,
    string_top_name,
)
from trigrad.grading import TriDegree
from trigrad.poly import Poincare


def test_parse_trefoil():
    fam = parse_poly("a^2 q^-2 + a^2 q^2 t^-2 + a^4 t^-3")
    assert fam.plain_part == parse_poincare("a^2q^-2+a^2q^2t^-2+a^4t^-3")
    assert fam.plain_part.total_dim == 3


def test_parse_empty_and_zero():
    assert parse_poly("") == FamilyPoincare.zero()
    assert parse_poly("0") == FamilyPoincare.zero()
    assert parse_poincare("").total_dim == 0


def test_parse_bracket_and_multiplicity():
    fam = parse_poly("[N-2] a^2 q^3 t^-3 + 2 a q t^-2")
    items = dict(fam.items())
    assert items[(TriDegree(2, 3, -6), -2)] == 1
    assert items[(TriDegree(1, 1, -4), None)] == 2


def test_parse_half_exponents():
    fam = parse_poly("a^4q^3t^-11/2 + qt^1/2")
    degs = [m for (m, _), _ in fam.items()]
    assert TriDegree(4, 3, -11) in degs
    assert TriDegree(0, 1, 1) in degs


def test_parse_errors_carry_position():
    with pytest.raises(PolynomialSyntax):
        parse_poly("a^2 + + q")
    with pytest.raises(PolynomialSyntax):
        parse_poly("[M-2] q")
    with pytest.raises(PolynomialSyntax):
        parse_poly("q^1/3")


def test_format_parse_roundtrip_random():
    rng = random.Random(23)
    for _ in range(400):
        terms = {}
        for _ in range(rng.randint(0, 7)):
            mono = TriDegree(rng.randint(-3, 3), rng.randint(-5, 5), rng.randint(-6, 6))
            c = rng.choice([None, None, -2, -1, 0, 1])
            key = (mono, c)
            terms[key] = terms.get(key, 0) + rng.randint(1, 3)
        fam = FamilyPoincare(terms)
        text = format_family(fam)
        assert parse_poly(text) == fam
        # formatting is idempotent through a parse cycle
        assert format_family(parse_poly(text)) == text


def test_bracket_evaluation():
    fam = parse_poly("[N-1]a^2qt^-2")
    assert fam.evaluate(2) == parse_poincare("a^2qt^-2")
    assert fam.evaluate(4) == parse_poincare("a^2q^3t^-2 + a^2qt^-2 + a^2q^-1t^-2")
    # [0] vanishes
    assert parse_poly("[N-2]q").evaluate(2) == Poincare.zero()
    with pytest.raises(BracketEval):
        parse_poly("[N-2]q").evaluate(1)


def test_bracket_mul_rules():
    plain = parse_poly("aq^-1")
    bracket = parse_poly("[N-1]a^2qt^-2")
    prod = plain * bracket
    assert dict(prod.items()) == {(TriDegree(3, 0, -4), -1): 1}
    with pytest.raises(BracketProduct):
        bracket * bracket


def test_quantum_bracket_shape():
    # [m] has m monomials, symmetric under q -> 1/q
    for m in range(0, 7):
        fam = FamilyPoincare({(TriDegree(0, 0, 0), -1): 1})
        val = fam.evaluate(m + 1)
        assert val.total_dim == m
        assert val.psi_dual() == val


def test_string_end_names():
    # For a^2*q*t^-2*[N-1]: top a^2 q^(N-1) merges to a^3 q^-1, bottom
    # a^2 q^(3-N) merges to a q^3.
    m = TriDegree(2, 1, -4)
    assert string_top_name(m, -1) == TriDegree(3, -1, -4)
    assert string_bottom_name(m, -1) == TriDegree(1, 3, -4)


def test_format_poly_accepts_poincare():
    assert format_poly(Poincare.one()) == "1"
    assert format_poly(Poincare.zero()) == "0"
