from fractions import Fraction

import pytest

from linfty import templates
from linfty.families import psi


def test_parametric_indices_and_coefficients():
    c = templates.cochain("psi[1,0,p-1]_3 + (2*p-m-2)*psi[1,1,p-2]_2", {"m": 1, "p": 3})
    assert c == psi((1, 0, 2), 3) + psi((1, 1, 1), 2, 3)


def test_negative_index_term_drops_out():
    assert templates.cochain("psi[1,1,n]_1", {"n": -1}).is_zero


def test_numbers_and_conditions():
    assert templates.number("(m+2)/3", {"m": 2}) == Fraction(4, 3)
    assert templates.integer("2*n-m", {"n": 3, "m": 1}) == 5
    assert templates.condition("k != 2*n-m", {"k": 4, "n": 3, "m": 1})
    assert templates.condition(None)


def test_errors():
    with pytest.raises(templates.TemplateError):
        templates.cochain("", {})
    with pytest.raises(templates.TemplateError):
        templates.integer("1/2")
    with pytest.raises(templates.TemplateError):
        templates.cochain("m+1", {"m": 0})
