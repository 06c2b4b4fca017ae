"""Named codifferentials on the 1|2 space.

Degree ``m + 2`` families (``m >= 0``)::

    d_infty  = psi[1,1,m]_1
    d_lambda = psi[0,1,m+1]_3 + lambda psi[1,1,m]_1
    d_star   = psi[0,0,m+2]_1
    d_sharp  = psi[0,1,m+1]_3 + psi[0,0,m+2]_1 - (m+2) psi[1,1,m]_1

and in degree 1 the two classes ``d_0 = psi[1,0,0]_3`` and
``d_star(-1) = psi[0,0,1]_1``.
"""

from __future__ import annotations

from fractions import Fraction

from .cochains import Cochain
from .coderivation import LInfinityStructure
from .graded import SPACE_1_2

S = SPACE_1_2


def psi(index, target: int, coeff=1) -> Cochain:
    """Odd basis cochain with a 1-based target."""
    return Cochain.basis(S, index, target - 1, coeff)


phi = psi


def d_zero_deg1() -> Cochain:
    return psi((1, 0, 0), 3)


def d_infty(m: int) -> Cochain:
    _check_m(m)
    return psi((1, 1, m), 1)


def d_lambda(m: int, lam) -> Cochain:
    if m < -1:
        raise ValueError("m must be at least -1")
    lam = Fraction(lam)
    out = psi((0, 1, m + 1), 3)
    if m >= 0 and lam:
        out = out + psi((1, 1, m), 1, lam)
    return out


def d_star(m: int) -> Cochain:
    if m < -1:
        raise ValueError("m must be at least -1")
    return psi((0, 0, m + 2), 1)


def d_sharp(m: int) -> Cochain:
    _check_m(m)
    return psi((0, 1, m + 1), 3) + psi((0, 0, m + 2), 1) - psi((1, 1, m), 1, m + 2)


def coefficients_cochain(m: int, a) -> Cochain:
    """``psi[1,0,m+1]_3 a1 + psi[0,1,m+1]_3 a2 + psi[0,0,m+2]_1 a3 + psi[0,0,m+2]_2 a4 + psi[1,1,m]_1 a5 + psi[1,1,m]_2 a6``."""
    a = [Fraction(x) for x in a]
    keys = [((1, 0, m + 1), 3), ((0, 1, m + 1), 3), ((0, 0, m + 2), 1), ((0, 0, m + 2), 2)]
    if m >= 0:
        keys += [((1, 1, m), 1), ((1, 1, m), 2)]
    if len(a) != len(keys):
        raise ValueError(f"expected {len(keys)} coefficients for m={m}")
    return Cochain(S, {(i, t - 1): c for (i, t), c in zip(keys, a)}, m + 2, 1)


def structure(c: Cochain, truncation: int | None = None) -> LInfinityStructure:
    return LInfinityStructure.from_cochain(c, truncation)


def family(name: str, m: int, lam=None) -> Cochain:
    if name == "d_infty":
        return d_infty(m)
    if name == "d_lambda":
        if lam is None:
            raise ValueError("d_lambda needs lambda")
        return d_lambda(m, lam)
    if name == "d_star":
        return d_star(m)
    if name == "d_sharp":
        return d_sharp(m)
    if name == "d_0":
        return d_zero_deg1()
    raise ValueError(f"unknown family {name!r}")


def _check_m(m: int) -> None:
    if m < 0:
        raise ValueError("m must be nonnegative")
