from fractions import Fraction

from hypothesis import strategies as st

from linfty.cochains import Cochain, cochain_basis
from linfty.coderivation import LinearAutomorphism
from linfty.graded import SPACE_1_2

small = st.integers(-3, 3).map(Fraction)
nonzero = st.integers(-3, 3).filter(bool).map(Fraction)


@st.composite
def cochains(draw, space=SPACE_1_2, degree=None, parity=None, max_degree=3):
    n = draw(st.integers(1, max_degree)) if degree is None else degree
    p = draw(st.integers(0, 1)) if parity is None else parity
    keys = cochain_basis(space, n, p)
    if not keys:
        return Cochain.zero(space, n, p)
    terms = draw(st.dictionaries(st.sampled_from(keys), nonzero, max_size=4))
    return Cochain(space, terms, n, p)


blocks = st.tuples(small, small, small, small).filter(lambda b: b[0] * b[3] - b[1] * b[2])


@st.composite
def automorphisms(draw):
    l, r, p, s = draw(blocks)
    return LinearAutomorphism.block(((l, r), (p, s)), draw(nonzero))


# One PASS/FAIL line per acceptance criterion, repeated in the terminal summary.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
