from __future__ import annotations

from hypothesis import given, settings

from helpers import fields, oleinik_radkevic, polys
from sosgevrey.fields import (
    XI1,
    XI2,
    XI3,
    BracketWord,
    FieldSymbol,
    HormanderFail,
    OperatorSpec,
    bracket,
    brackets_by_length,
    chain_summary,
    hormander_check,
    hormander_grid,
    iterated_bracket,
    rank,
    stratification,
)
from sosgevrey.symcore import ONE, X1, X2, ZERO


def test_bracket_of_coordinate_fields_vanishes():
    assert bracket(XI1, XI2).is_zero()


def test_bracket_example():
    # [d1, x1 d2] = d2
    assert bracket(XI1, FieldSymbol(ZERO, X1, ZERO)) == XI2


def test_iterated_bracket_is_right_nested():
    spec = oleinik_radkevic(2, 4)
    # {X1, {X1, X3}} = d1^2 (x1^3) xi3 = 6 x1 xi3
    assert iterated_bracket(spec, BracketWord.parse("1,1,3")) == FieldSymbol(ZERO, ZERO, 6 * X1)
    assert iterated_bracket(spec, (1, 1, 1, 3)) == FieldSymbol(ZERO, ZERO, 6 * ONE)


def test_bracket_word_validation():
    import pytest
    with pytest.raises(ValueError):
        BracketWord(())
    with pytest.raises(ValueError):
        BracketWord((1, 4))


@given(fields, fields)
def test_antisymmetry(F, G):
    assert bracket(F, G) == -bracket(G, F)


@settings(max_examples=50, deadline=None)
@given(fields, fields, fields)
def test_jacobi(F, G, H):
    total = bracket(F, bracket(G, H)) + bracket(G, bracket(H, F)) + bracket(H, bracket(F, G))
    assert total.is_zero()


@given(fields, fields, polys)
def test_leibniz(F, G, g):
    assert bracket(F, G.scale(g)) == bracket(F, G).scale(g) + G.scale(F.apply(g))


def test_rank():
    assert rank([(1, 0, 0), (2, 0, 0), (0, 0, 1)]) == 2
    assert rank([]) == 0


def test_hormander_on_oleinik_radkevic():
    for p in range(1, 5):
        for q in range(p, 6):
            assert hormander_check(oleinik_radkevic(p, q)) == q


def test_hormander_fail_is_falsy():
    spec = OperatorSpec(XI1, FieldSymbol(ZERO, X1, ZERO), FieldSymbol())
    res = hormander_check(spec, max_len=5)
    assert isinstance(res, HormanderFail) and not res
    assert res.span_dim == 2


def test_hormander_grid_off_sigma():
    spec = oleinik_radkevic(2, 3)
    out = hormander_grid(spec, n=3)
    assert out["failures"] == []
    assert out["max_length"] == 3


def test_levels_are_deduplicated():
    levels = brackets_by_length(oleinik_radkevic(1, 1), 3)
    assert len(levels[0]) == 3
    assert levels[1] == [] and levels[2] == []


def test_stratification_oleinik_radkevic():
    layers = stratification(oleinik_radkevic(3, 5), 6)
    assert chain_summary(layers) == "1:base 2:base 3:codim_drop 4:equal 5:empty 6:empty"
    assert layers[2].equation == "xi2 = 0"


def test_stratification_p_equals_one():
    layers = stratification(oleinik_radkevic(1, 3), 4)
    assert chain_summary(layers) == "1:codim_drop 2:equal 3:empty 4:empty"


def test_stratification_case_iia_layer():
    spec = OperatorSpec(
        XI1,
        FieldSymbol(ZERO, X1 * (X2 + X1), X1 * X1),
        FieldSymbol(ZERO, -X1 * X1, X1 * (X2 + X1)),
    )
    layers = stratification(spec, 4)
    assert layers[1].status == "codim_drop" and layers[1].equation == "x2 = 0"
    assert layers[2].status == "empty"


def test_field_symbol_helpers():
    F = FieldSymbol(X1, X2, ZERO)
    assert F.coeff(2) == X2
    assert F.evaluate((1, 2, 3)) == (1, 2, 0)
    assert str(XI3) == "(1)*xi3"
    assert FieldSymbol().is_zero()
