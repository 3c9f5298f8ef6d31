import pytest
from hypothesis import given, strategies as st

from pforms.errors import DivisionByZero, ParseError, SemanticError
from pforms.field import Field
from pforms.parse import parse_expr

from conftest import elements, fields

F = Field(3, ("x", "y"))


def test_grammar_example():
    a = parse_expr("((x+y)^2)/(x*y)", F)
    x, y = F["x"], F["y"]
    assert a == (x + y) ** 2 / (x * y)


def test_whitespace_and_literals_mod_p():
    assert parse_expr("  4 * x +  - 2 ", F) == F["x"] + F.one()
    assert parse_expr("3", F) == F.zero()


def test_precedence():
    assert parse_expr("x + y*x^2", F) == F["x"] + F["y"] * F["x"] ** 2
    assert parse_expr("-x^2", F) == -(F["x"] ** 2)
    assert parse_expr("x/y/x", F) == F.one() / F["y"]


@pytest.mark.parametrize("text,column", [("x +", 4), ("(x", 3), ("x $ y", 3), ("", 1), ("x y", 3), ("x^y", 3)])
def test_syntax_errors_carry_column(text, column):
    with pytest.raises(ParseError) as err:
        parse_expr(text, F)
    assert err.value.line == 1
    assert err.value.column == column


def test_unknown_variable():
    with pytest.raises(SemanticError):
        parse_expr("x + q", F)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        parse_expr("x/(y-y)", F)


def test_non_string():
    with pytest.raises(ParseError):
        parse_expr(3, F)


@given(fields, st.data())
def test_str_round_trip(K, data):
    a = data.draw(elements(K))
    assert parse_expr(str(a), K) == a
    assert str(parse_expr(str(a), K)) == str(a)
