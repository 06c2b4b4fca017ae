from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from linfty.linalg import Echelon, dense, mat_vec, nullspace, rank, row_space_basis, solve

entries = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [{j: Fraction(draw(entries)) for j in range(c)} for _ in range(r)]
    return [{j: v for j, v in row.items() if v} for row in rows], c


def to_sympy(rows, ncols):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in dense(rows, ncols)])


@given(matrices())
def test_rank_matches_sympy(m):
    rows, c = m
    assert rank(rows) == to_sympy(rows, c).rank()


@given(matrices())
def test_nullspace_is_kernel_of_right_size(m):
    rows, c = m
    basis = nullspace(rows, c)
    assert len(basis) == c - to_sympy(rows, c).rank()
    for v in basis:
        assert not any(mat_vec(rows, v))
    assert rank(basis) == len(basis)


@given(matrices(), st.lists(entries, min_size=6, max_size=6))
def test_solve_agrees_with_consistency(m, x):
    rows, c = m
    rhs = mat_vec(rows, {j: Fraction(v) for j, v in enumerate(x[:c])})
    sol = solve(rows, rhs, c)
    assert sol is not None and mat_vec(rows, sol) == rhs


def test_inconsistent_system():
    assert solve([{0: 1}, {0: 2}], [1, 1], 1) is None


@given(matrices())
def test_row_space_basis_spans_rows(m):
    rows, _ = m
    e = Echelon()
    for r in row_space_basis(rows):
        assert e.add(r)
    assert all(e.contains(r) for r in rows)


def test_echelon_reports_dependence():
    e = Echelon()
    assert e.add({0: 1, 1: 2})
    assert not e.add({0: Fraction(1, 2), 1: 1})
    assert e.rank == 1
