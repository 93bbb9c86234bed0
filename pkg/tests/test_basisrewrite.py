from __future__ import annotations

import random
from math import comb

import pytest

from helpers import (
    as_operator,
    compose,
    d3_power,
    oleinik_radkevic,
    op_add,
    op_scale,
    op_truncate,
    rand_poly,
    random_type_i0,
    standard_form,
)
from sosgevrey.basisrewrite import (
    combine,
    expand_commutator,
    growth_constants,
    solve_basis,
)
from sosgevrey.fields import XI1, FieldSymbol, OperatorSpec
from sosgevrey.normalform import NotTypeI0
from sosgevrey.symcore import ONE, X1, X3, ZERO

TRUNC = 8


def test_basis_element_itself():
    sf = standard_form(oleinik_radkevic(2, 5))
    assert solve_basis(sf.spec.X2, sf).as_tuple() == (ZERO, ONE, ZERO)
    assert solve_basis(FieldSymbol(ZERO, ZERO, X1 ** 4), sf).as_tuple() == (ZERO, ZERO, ONE)


def test_requires_divisibility():
    sf = standard_form(oleinik_radkevic(2, 5))
    with pytest.raises(ValueError):
        solve_basis(FieldSymbol(ZERO, ZERO, X1), sf)


def test_not_type_i0():
    x = X1
    spec = OperatorSpec(XI1, FieldSymbol(ZERO, x, x * x ** 2), FieldSymbol(ZERO, x ** 3, ZERO))
    sf = standard_form(spec)  # type I_2
    with pytest.raises(NotTypeI0):
        solve_basis(FieldSymbol(ZERO, X1, ZERO), sf)


def random_target(rng: random.Random, sf) -> FieldSymbol:
    return FieldSymbol(
        rand_poly(rng, 3),
        X1 ** (sf.p - 1) * rand_poly(rng, 3),
        X1 ** (sf.q - 1) * rand_poly(rng, 3),
    )


def test_random_targets_reassemble():
    rng = random.Random(7)
    for _ in range(30):
        sf = standard_form(random_type_i0(rng))
        target = random_target(rng, sf)
        co = solve_basis(target, sf, TRUNC)
        resid = combine(co, sf) - target
        assert resid.map(lambda e: e.truncate(TRUNC)).is_zero()


def commutator_oracle(sf, j: int, m: int):
    X = as_operator(sf.reassemble().field(j))
    D = d3_power(m)
    return op_add(compose(X, D), compose(D, X), -1)


def table_operator(sf, table, m: int):
    out: dict = {}
    basis = sf.reassemble().fields
    for l in range(1, m + 1):
        for h in (1, 2, 3):
            g = table.entry(l, h)
            if g.is_zero():
                continue
            term = compose(as_operator(basis[h - 1]), d3_power(m - l))
            out = op_add(out, op_scale(term, g * comb(m, l)))
    return out


def test_expand_commutator_matches_operator_composition():
    rng = random.Random(11)
    for _ in range(6):
        sf = standard_form(random_type_i0(rng))
        for j in (2, 3):
            for m in (1, 2, 3):
                table = expand_commutator(sf, j, m, TRUNC)
                lhs = op_truncate(commutator_oracle(sf, j, m), TRUNC)
                rhs = op_truncate(table_operator(sf, table, m), TRUNC)
                assert lhs == rhs


def test_gamma_zero_is_minus_identity():
    sf = standard_form(random_type_i0(random.Random(3)))
    for j in (1, 2, 3):
        t = expand_commutator(sf, j, 2)
        assert [t.entry(0, h) for h in (1, 2, 3)] == [-ONE if h == j else ZERO for h in (1, 2, 3)]


def test_x1_field_commutes_with_d3():
    sf = standard_form(random_type_i0(random.Random(5)))
    t = expand_commutator(sf, 1, 4)
    assert all(t.entry(l, h).is_zero() for l in range(1, 5) for h in (1, 2, 3))


def test_x3_independent_spec_gives_empty_table():
    sf = standard_form(oleinik_radkevic(2, 4))
    for j in (2, 3):
        t = expand_commutator(sf, j, 3)
        assert all(t.entry(l, h).is_zero() for l in range(1, 4) for h in (1, 2, 3))


def test_twisted_oleinik_radkevic_double_bracket():
    # X2 = x1 (1 + x3) xi2; [X2, d3^2] = -2 x1 d2 d3 (d3 X2 coefficient is x1)
    spec = OperatorSpec(XI1, FieldSymbol(ZERO, X1 * (1 + X3), ZERO), FieldSymbol(ZERO, ZERO, X1 ** 4))
    sf = standard_form(spec)
    t = expand_commutator(sf, 2, 2, TRUNC)
    lhs = op_truncate(commutator_oracle(sf, 2, 2), TRUNC)
    assert lhs == {(0, 1, 1): -2 * X1}
    assert op_truncate(table_operator(sf, t, 2), TRUNC) == lhs
    # -d3 X2 = -x1 xi2 = gamma_22 X2 with gamma_22 = -1/(1 + x3)
    assert (t.entry(1, 2) * (1 + X3)).truncate(TRUNC) == -ONE


def test_growth_constants_reported():
    sf = standard_form(random_type_i0(random.Random(2)))
    g = growth_constants(expand_commutator(sf, 2, 3))
    assert set(g) == {"1", "2", "3"}
    assert all(v >= 0 for v in g.values())


def test_m_out_of_range():
    sf = standard_form(oleinik_radkevic(2, 3))
    with pytest.raises(ValueError):
        expand_commutator(sf, 2, 5)
