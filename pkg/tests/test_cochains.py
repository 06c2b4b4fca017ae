from fractions import Fraction

import pytest
from hypothesis import given

from conftest import cochains
from linfty.cochains import (
    Cochain, HomogeneityError, ParseError, cochain_basis, format_cochain, format_rational, parse_cochain,
)
from linfty.graded import SPACE_1_2


def test_parse_spec_grammar():
    c = parse_cochain("psi[0,1,2]_3 - 3*psi[1,1,1]_1")
    assert c.degree == 3 and c.parity == 1
    assert c.coefficient((1, 1, 1), 0) == -3
    assert c.coefficient((0, 1, 2), 2) == 1


def test_rationals_print_in_lowest_terms():
    assert format_rational(Fraction(6, -4)) == "-3/2"
    assert format_cochain(parse_cochain("4/6*phi[0,0,2]_3")) == "2/3*phi[0,0,2]_3"


def test_label_is_checked_against_parity():
    # phi and psi are one notation; a mislabelled generator is rejected
    with pytest.raises(ParseError):
        parse_cochain("phi[1,0,0]_3")


def test_mixed_degrees_are_not_homogeneous():
    with pytest.raises(HomogeneityError):
        parse_cochain("psi[1,0,0]_3 + psi[0,0,2]_1")


@pytest.mark.parametrize("text", ["psi[1,0,0]", "psi[2,0,0]_1", "psi[1,0,0]_4", "3*", "psi[1,0,0]_3 +"])
def test_malformed(text):
    with pytest.raises((ParseError, ValueError)):
        parse_cochain(text)


def test_zero_parses():
    assert parse_cochain("0").is_zero


@given(cochains())
def test_format_parse_roundtrip(c):
    assert parse_cochain(format_cochain(c)) == c


@given(cochains(), cochains())
def test_addition_is_exact(a, b):
    if (a.degree, a.parity) != (b.degree, b.parity):
        return
    assert (a + b) - b == a
    assert (a - a).is_zero


def test_basis_counts():
    # four monomials of weight 3, three targets, split by parity
    assert len(cochain_basis(SPACE_1_2, 3)) == 12
    assert len(cochain_basis(SPACE_1_2, 3, 0)) == len(cochain_basis(SPACE_1_2, 3, 1)) == 6


def test_zero_without_degree_adds_to_anything():
    c = Cochain.basis(SPACE_1_2, (1, 1, 0), 0)
    assert Cochain.zero(SPACE_1_2) + c == c
