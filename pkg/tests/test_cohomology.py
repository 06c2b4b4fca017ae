from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import cochains
from linfty.cochains import Cochain
from linfty.coderivation import LInfinityStructure, bracket
from linfty.cohomology import (
    NotCodifferentialError, check_classes, coboundary, cohomology, deformation_directions, filtered_cohomology,
    is_coboundary, preimage,
)
from linfty.families import d_infty, d_lambda, d_sharp, d_star, d_zero_deg1, psi
from linfty.graded import GradedDim, SPACE_1_2


def h(report):
    return [str(e.h) for e in report.entries]


def test_coboundary_examples():
    assert coboundary(d_zero_deg1(), psi((1, 0, 0), 1)) == -psi((1, 0, 0), 3)
    for m, n in [(0, 0), (1, 2), (2, 1)]:
        got = coboundary(d_lambda(m, 3), psi((1, 0, n + 1), 1))
        assert got == psi((1, 1, m + n + 1), 1, -(n + 1))
    assert coboundary(d_zero_deg1(), Cochain.zero(SPACE_1_2, 2, 0)).is_zero


def test_d0_cohomology():
    r = cohomology(d_zero_deg1(), range(1, 9))
    assert h(r) == ["1|0"] + ["0|0"] * 7
    assert r[1].b == GradedDim(2, 2)
    assert r[1].representatives == [psi((0, 1, 0), 2)]


def test_generic_d_lambda_at_m_2():
    r = cohomology(d_lambda(2, 3), range(1, 9))
    assert h(r) == ["3|1", "3|3", "3|3", "0|1", "0|0", "0|0", "0|0", "0|0"]


def test_d_star_at_m_1():
    r = cohomology(d_star(1), range(1, 8))
    assert h(r) == ["3|2", "3|3", "1|1"] + ["0|0"] * 4


def test_preferred_representatives_are_used():
    r = cohomology(d_lambda(1, 3), [3], preferred=[psi((1, 1, 1), 1)])
    assert psi((1, 1, 1), 1) in r[3].representatives


def test_deformation_directions():
    assert deformation_directions(d_lambda(1, 3), [3]) == [psi((1, 1, 1), 1)]
    assert deformation_directions(d_sharp(1), range(3, 8)) == []


def test_rejects_non_codifferential():
    bad = psi((1, 0, 0), 3) + psi((0, 0, 1), 1)
    with pytest.raises(NotCodifferentialError):
        cohomology(bad, [1])
    with pytest.raises(ValueError):
        cohomology(LInfinityStructure(SPACE_1_2), [1])


@settings(max_examples=40)
@given(cochains(max_degree=4))
def test_preimage_solves_the_equation(eta):
    d = d_infty(1)
    phi = coboundary(d, eta)
    assert is_coboundary(d, phi)
    pre = preimage(d, phi)
    assert pre is not None and coboundary(d, pre) == phi


def test_check_classes():
    d = d_lambda(1, 3)
    assert check_classes(d, [psi((1, 1, 1), 1)]) == (True, True)
    # a coboundary is a cocycle but not a class
    assert check_classes(d, [coboundary(d, psi((1, 0, 1), 1))]) == (True, False)


def test_rank_nullity_in_every_degree():
    for d in (d_lambda(1, Fraction(1, 2)), d_infty(2), d_star(0), d_sharp(1)):
        for e in cohomology(d, range(1, 8)).entries:
            assert e.h.total == len(e.representatives)
            assert e.z.even >= e.h.even and e.z.odd >= e.h.odd


def test_filtered_agrees_with_graded_on_one_component():
    d = LInfinityStructure.from_cochain(d_infty(1), 10)
    assert filtered_cohomology(d, range(1, 7)).fingerprint() == cohomology(d, range(1, 7)).fingerprint()


def test_report_serialises():
    r = cohomology(d_star(0), [1, 2])
    data = r.to_json()
    assert data[0]["h"] == [3, 2] and "representatives" in data[0]
    assert "h" in r.table().splitlines()[0]
