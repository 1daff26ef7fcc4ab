from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import ORACLES, galois_pattern, seeded, sympy_pattern
from stablepoly.errors import DegreeOverflow, DivisionByZero, ParseError
from stablepoly.gftower import field_of_order, prime_field
from stablepoly.polyring import (
    FactorPattern,
    Poly,
    compose,
    discriminant,
    distinct_degree,
    equal_degree_split,
    factor_pattern,
    gcd,
    is_irreducible,
    is_squarefree,
    iterate,
    poly_divmod,
    roots_in_field,
    squarefree_decomposition,
)


def P(q, coeffs):
    F = field_of_order(q)
    if isinstance(coeffs, str):
        return Poly.parse(F, coeffs)
    return Poly.from_ints(F, coeffs)


# -- arithmetic and parsing ---------------------------------------------------


def test_gcd_example():
    assert gcd(P(5, [4, 0, 1]), P(5, [4, 1])) == P(5, [4, 1])


def test_derivative_example():
    assert P(2, [1, 1, 0, 1]).derivative() == P(2, [1, 0, 1])


def test_divmod_example():
    q, r = poly_divmod(P(3, [2, 1, 0, 1]), P(3, [1, 1]))
    assert q == P(3, [2, 2, 1]) and r.is_zero()


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        poly_divmod(P(3, [1, 1]), P(3, []))


@seeded
@given(st.lists(st.integers(0, 8), min_size=1, max_size=8), st.lists(st.integers(0, 8), min_size=2, max_size=5))
def test_divmod_identity_f9(a, b):
    F = field_of_order(9)
    f = Poly.from_elements([F.from_index(v) for v in a])
    g = Poly.from_elements([F.from_index(v) for v in b])
    if g.is_zero():
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


def test_compose_examples():
    x2 = P(3, [0, 0, 1])
    assert compose(x2, x2) == P(3, [0, 0, 0, 0, 1])
    f = P(3, [1, 0, 1])
    assert compose(f, Poly.x(f.desc)) == f
    assert compose(f, f).c.tolist() == ORACLES["compose_x2p1_x2p1_f3"]


def test_iterate_examples():
    f = P(2, [1, 0, 1, 1])
    assert iterate(f, 0) == Poly.x(f.desc)
    assert iterate(P(3, [0, 0, 1]), 3) == P(3, [0] * 8 + [1])
    f2 = iterate(f, 2)
    assert f2.c.tolist() == ORACLES["iterate2_x3_x2_1_f2"]
    assert is_irreducible(f2)


def test_iterate_cap():
    with pytest.raises(DegreeOverflow):
        iterate(P(2, [1, 0, 1, 1]), 5, cap=100)


def test_parse_encode_round_trip():
    f = P(9, "[0,1],2,0,1")
    assert f.encode() == "[0,1],[2,0],[0,0],[1,0]"
    assert P(9, f.encode()) == f


def test_parse_error_positions():
    with pytest.raises(ParseError) as info:
        P(4, "1,,1")
    assert info.value.position == 2
    with pytest.raises(ParseError) as info:
        P(4, "1,[0,1,1,1]")
    assert info.value.position == 2


def test_evaluate_matches_pointwise():
    F = field_of_order(9)
    f = Poly.parse(F, "[0,1],2,0,1")
    for e in F.elements():
        acc = F.zero()
        for c in reversed(f.coeffs()):
            acc = acc * e + c
        assert f(e) == acc


# -- irreducibility and roots -------------------------------------------------


def test_irreducibility_examples():
    assert is_irreducible(P(2, [1, 1, 1]))
    assert is_irreducible(P(2, [1, 0, 1, 1]))
    assert not is_irreducible(P(5, [1, 0, 1]))


@pytest.mark.parametrize("p,d", [(2, 5), (3, 4), (5, 3)])
def test_irreducibility_matches_sympy(p, d):
    for tail in itertools.product(range(p), repeat=d):
        coeffs = list(tail) + [1]
        assert is_irreducible(Poly.from_ints(prime_field(p), coeffs)) == sympy_pattern(coeffs, p).is_irreducible()


def test_root_examples():
    F2, F3 = prime_field(2), prime_field(3)
    assert [r.index() for r in roots_in_field(P(2, [0, 1, 1]))] == [0, 1]
    assert [r.index() for r in roots_in_field(P(3, [1, 1, 0, 0, 1]))] == [1]
    assert roots_in_field(P(2, [1, 1, 0, 1])) == []
    assert F2 and F3


@pytest.mark.parametrize("q", [4, 8, 9, 25])
def test_roots_by_evaluation(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for _ in range(30):
        f = Poly.from_elements([F.from_index(int(v)) for v in rng.integers(0, q, 4)] + [F.one()])
        expect = [e for e in F.elements() if f(e).is_zero()]
        assert roots_in_field(f) == expect


def test_equal_degree_split_recovers_factors():
    F = field_of_order(9)
    x = Poly.x(F)
    lin = [x - F.from_index(i) for i in (1, 4, 7)]
    g = lin[0] * lin[1] * lin[2]
    parts = equal_degree_split(g, 1)
    assert sorted(p.encode() for p in parts) == sorted(l.monic().encode() for l in lin)


# -- factorization --------------------------------------------------------------


def test_factor_pattern_examples():
    assert factor_pattern(P(5, [4, 0, 0, 0, 1])) == FactorPattern(((1, 1),) * 4)
    assert factor_pattern(P(3, [2, 1, 0, 1])) == FactorPattern(((1, 1), (2, 1)))
    assert factor_pattern(P(3, [2, 1, 0, 0, 1])) == FactorPattern(((4, 1),))
    assert str(factor_pattern(P(3, [0, 0, 1, 1]))) == "[1,1^2]"


@pytest.mark.parametrize("p,d", [(2, 6), (3, 5), (5, 4), (7, 3)])
def test_factor_pattern_matches_sympy(p, d):
    rng = np.random.default_rng(p * 100 + d)
    for _ in range(150):
        coeffs = [int(v) for v in rng.integers(0, p, d)] + [1]
        assert factor_pattern(Poly.from_ints(prime_field(p), coeffs)) == sympy_pattern(coeffs, p)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_factor_pattern_matches_galois(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for _ in range(40):
        d = int(rng.integers(2, 7))
        f = Poly.from_elements([F.from_index(int(v)) for v in rng.integers(0, q, d)] + [F.one()])
        assert factor_pattern(f) == galois_pattern(f)


def test_squarefree_decomposition_reassembles():
    F = field_of_order(9)
    x = Poly.x(F)
    f = (x - F.from_index(2)) ** 3 * (x * x + x + F.from_index(4)) ** 2 * (x + F.one())
    parts = squarefree_decomposition(f)
    prod = Poly.constant(F.one())
    for g, m in parts:
        prod = prod * g**m
    assert prod == f.monic()


def test_distinct_degree_products():
    # (x + 1)(x^2 + 1)(x^3 + 2x + 1), all irreducible over F_3
    f = P(3, [1, 1]) * P(3, [1, 0, 1]) * P(3, [1, 2, 0, 1])
    assert is_squarefree(f)
    assert [d for _, d in distinct_degree(f)] == [1, 2, 3]
    prod = Poly.constant(f.desc.one())
    for g, d in distinct_degree(f):
        assert g.degree % d == 0
        prod = prod * g
    assert prod == f


# -- discriminants --------------------------------------------------------------


def test_discriminant_examples():
    assert discriminant(P(5, [1, 1, 1])).index() == 2
    F = prime_field(7)
    for a in range(1, 7):
        assert discriminant(Poly.from_ints(F, [-a, 0, 0, 0, 1])) == F.scalar(-256 * a**3)
    for a, b in itertools.product(range(7), repeat=2):
        assert discriminant(Poly.from_ints(F, [b, a, 0, 1])) == F.scalar(-4 * a**3 - 27 * b**2)


@pytest.mark.parametrize("q", [5, 9])
def test_discriminant_detects_repeated_roots(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        f = Poly.from_elements([F.from_index(int(v)) for v in rng.integers(0, q, d)] + [F.one()])
        assert discriminant(f).is_zero() == (not is_squarefree(f))
