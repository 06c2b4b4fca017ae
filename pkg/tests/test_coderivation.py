from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import automorphisms, cochains
from linfty.cochains import Cochain, HomogeneityError, parse_cochain
from linfty.coderivation import (
    LInfinityStructure, LinearAutomorphism, bracket, bracket_by_evaluation, conjugate_linear, evaluate,
    exp_automorphism, exp_linear, is_codifferential, lift,
)
from linfty.families import d_infty, d_sharp, d_star, d_zero_deg1, psi
from linfty.graded import SPACE_1_2, symmetric_basis


def test_evaluate_uses_index_factorial():
    assert evaluate(psi((0, 0, 2), 3), (0, 0, 2)) == {2: 2}
    assert evaluate(psi((1, 0, 0), 3), (0, 1, 0)) == {}
    assert evaluate(psi((1, 1, 0), 1), (1, 1, 0)) == {0: 1}


def test_lift_replaces_one_letter():
    # w1 w3 -> w3 w3
    assert lift(psi((1, 0, 0), 3), (1, 0, 1)) == {(0, 0, 2): 1}
    assert lift(Cochain.zero(SPACE_1_2, 1, 1), (1, 0, 1)) == {}


@given(cochains(max_degree=3))
def test_lift_on_own_weight_is_evaluate(c):
    if c.is_zero:
        return
    for mono in symmetric_basis(SPACE_1_2, c.degree):
        img = {next(i for i, e in enumerate(k) if e): v for k, v in lift(c, mono).items()}
        assert img == evaluate(c, mono)


def test_self_bracket_example():
    d = parse_cochain("psi[1,0,0]_3 + psi[0,0,1]_1")
    assert bracket(d, d) == parse_cochain("2*phi[1,0,0]_1 + 2*phi[0,0,1]_3")
    assert bracket(psi((0, 0, 1), 1), psi((0, 0, 1), 1)).is_zero


@settings(max_examples=60)
@given(cochains(), cochains())
def test_bracket_matches_evaluation_oracle(a, b):
    assert bracket(a, b) == bracket_by_evaluation(a, b)


@given(cochains(parity=0))
def test_even_self_bracket_vanishes(a):
    assert bracket(a, a).is_zero


def test_is_codifferential_examples():
    assert is_codifferential(LInfinityStructure.from_cochain(d_sharp(1)))[0]
    ok, w = is_codifferential(LInfinityStructure.from_cochain(parse_cochain("psi[1,0,0]_3 + psi[0,0,1]_1")))
    assert not ok and w.degree == 1
    assert is_codifferential(LInfinityStructure(SPACE_1_2))[0]


def test_conjugation_examples():
    # g(w1) = a3 w1 + a4 w2 brings psi[0,0,1]_1 a3 + psi[0,0,1]_2 a4 onto d_star
    d = psi((0, 0, 1), 1, 2) + psi((0, 0, 1), 2, 3)
    g = LinearAutomorphism.block(((2, -1), (3, -1)))
    assert conjugate_linear(g, d) == d_star(-1)
    assert conjugate_linear(LinearAutomorphism.identity(SPACE_1_2), d) == d
    g = LinearAutomorphism.block(((2, 1), (3, 2)))
    assert conjugate_linear(g, psi((1, 1, 1), 1, 2) + psi((1, 1, 1), 2, 3)) == d_infty(1)


@given(automorphisms(), automorphisms(), cochains())
def test_conjugation_is_an_action(g, h, c):
    assert conjugate_linear(g @ h, c) == conjugate_linear(h, conjugate_linear(g, c))
    assert conjugate_linear(g.inverse(), conjugate_linear(g, c)) == c


@settings(max_examples=40)
@given(automorphisms(), cochains(max_degree=2), cochains(max_degree=2))
def test_conjugation_respects_bracket(g, a, b):
    assert conjugate_linear(g, bracket(a, b)) == bracket(conjugate_linear(g, a), conjugate_linear(g, b))


def test_closed_form_lift_matches_expansion():
    g = LinearAutomorphism.block(((2, -1), (3, 5)), Fraction(-1, 2))
    for mono in [(1, 0, 2), (0, 1, 1), (1, 1, 3), (0, 0, 4)]:
        assert g.lift_monomial(mono) == g.lift_monomial_by_expansion(mono)


def test_singular_map_rejected():
    with pytest.raises(ValueError):
        LinearAutomorphism.block(((1, 2), (2, 4)))


def test_exp_of_zero_is_identity():
    assert exp_linear(Cochain.zero(SPACE_1_2, 1, 0)) == LinearAutomorphism.identity(SPACE_1_2)


def test_exp_of_even_degree_one_cocycle_fixes_d0():
    # diag(1, e^a, 1) with e^a replaced by a rational scale
    g = exp_linear(psi((0, 1, 0), 2), scale=Fraction(5, 3))
    assert conjugate_linear(g, d_zero_deg1()) == d_zero_deg1()


def test_exp_rejects_odd_input():
    with pytest.raises(HomogeneityError):
        exp_automorphism(psi((1, 0, 1), 3), 6)


@settings(max_examples=15, deadline=None)
@given(cochains(degree=2, parity=0))
def test_exp_conjugation_keeps_square_zero(eta):
    d = LInfinityStructure.from_cochain(d_sharp(0), 6)
    e = exp_automorphism(eta, 6)
    moved = e.conjugate(d)
    assert is_codifferential(moved)[0]
    assert e.inverse().conjugate(moved).truncated(6) == d.truncated(6)
