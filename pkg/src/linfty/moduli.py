"""Codifferentials of a single degree on the 1|2 space, up to linear equivalence.

An odd element of ``L_{m+2}`` has six coordinates (four when ``m = -1``)::

    a1 psi[1,0,m+1]_3 + a2 psi[0,1,m+1]_3 + a3 psi[0,0,m+2]_1
      + a4 psi[0,0,m+2]_2 + a5 psi[1,1,m]_1 + a6 psi[1,1,m]_2

Every nonzero codifferential is conjugate by a linear automorphism to exactly
one of the named representatives in :mod:`linfty.families`; the classifier
returns that name together with an automorphism that realizes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import families
from .cochains import Cochain, HomogeneityError
from .coderivation import LInfinityStructure, LinearAutomorphism, conjugate_linear, is_codifferential
from .graded import SPACE_1_2

FAMILIES = ("zero", "d_0", "d_star", "d_infty", "d_lambda", "d_sharp")


class NotOnVariety(ValueError):
    """The input is not square-zero; ``residuals`` lists the failing equations."""

    def __init__(self, residuals):
        self.residuals = residuals
        super().__init__("not a codifferential: " + ", ".join(f"{k} = {v}" for k, v in residuals))


@dataclass(frozen=True)
class DegreeNCoefficients:
    m: int
    a: tuple[Fraction, ...]

    def __post_init__(self):
        if self.m < -1:
            raise ValueError("m must be at least -1")
        a = tuple(Fraction(x) for x in self.a)
        if len(a) != (4 if self.m == -1 else 6):
            raise ValueError(f"expected {4 if self.m == -1 else 6} coefficients for m={self.m}")
        object.__setattr__(self, "a", a)

    @property
    def degree(self) -> int:
        return self.m + 2

    def to_cochain(self) -> Cochain:
        return families.coefficients_cochain(self.m, self.a)

    @classmethod
    def from_cochain(cls, c: Cochain) -> DegreeNCoefficients:
        if c.space != SPACE_1_2:
            raise ValueError("coefficients are defined on the 1|2 space only")
        if c.is_zero:
            if c.degree is None:
                raise ValueError("zero cochain without a degree")
            return cls(c.degree - 2, (0,) * (4 if c.degree == 1 else 6))
        if c.parity != 1:
            raise HomogeneityError("codifferentials are odd")
        m = c.degree - 2
        n = 4 if m == -1 else 6
        probe = families.coefficients_cochain(m, [1] * n)
        keys = [k for k, _ in sorted(probe.terms().items(), key=lambda kv: _key_order(m, kv[0]))]
        a = [c.coefficient(*k) for k in keys]
        return cls(m, tuple(a))


def _key_order(m: int, key):
    order = [((1, 0, m + 1), 2), ((0, 1, m + 1), 2), ((0, 0, m + 2), 0), ((0, 0, m + 2), 1),
             ((1, 1, m), 0), ((1, 1, m), 1)]
    return order.index(key)


def variety_check(c: DegreeNCoefficients) -> tuple[bool, list[tuple[str, Fraction]]]:
    """Evaluate the quadratic equations cutting out the codifferentials of this degree.

    Returns ``(ok, residuals)`` where ``residuals`` holds the nonzero equations.
    """
    if c.m == -1:
        a1, a2, a3, a4 = c.a
        eqs = [("a1*a3", a1 * a3), ("a2*a3", a2 * a3), ("a1*a4", a1 * a4), ("a2*a4", a2 * a4),
               ("a2*a4+a1*a3", a2 * a4 + a1 * a3)]
    else:
        a1, a2, a3, a4, a5, a6 = c.a
        k = c.m + 2
        eqs = [("a2*a6+a1*a5", a2 * a6 + a1 * a5),
               ("a1*a3+a2*a4", a1 * a3 + a2 * a4),
               ("a3*(a5+(m+2)*a2)", a3 * (a5 + k * a2)),
               ("a4*(a5+(m+2)*a2)", a4 * (a5 + k * a2)),
               ("a3*(a6-(m+2)*a1)", a3 * (a6 - k * a1)),
               ("a4*(a6-(m+2)*a1)", a4 * (a6 - k * a1))]
    bad = [(name, v) for name, v in eqs if v]
    return not bad, bad


@dataclass(frozen=True)
class FamilyTag:
    family: str
    degree: int
    lam: Fraction | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.lam is not None:
            object.__setattr__(self, "lam", Fraction(self.lam))
        if self.family in ("d_0",) and self.degree != 1:
            raise ValueError("d_0 is the degree-1 class")
        if self.family in ("d_infty", "d_sharp") and self.degree < 2:
            raise ValueError(f"{self.family} needs degree at least 2")
        if self.family == "d_lambda" and self.degree < 2:
            raise ValueError("in degree 1 the lambda family collapses to d_0")

    @property
    def m(self) -> int:
        return self.degree - 2

    @property
    def is_family(self) -> bool:
        """A tag for the whole one-parameter family rather than one member."""
        return self.family == "d_lambda" and self.lam is None

    def representative(self) -> Cochain:
        m = self.m
        if self.family == "zero":
            return Cochain.zero(SPACE_1_2, self.degree, 1)
        if self.family == "d_0":
            return families.d_zero_deg1()
        if self.family == "d_star":
            return families.d_star(m)
        if self.family == "d_infty":
            return families.d_infty(m)
        if self.family == "d_sharp":
            return families.d_sharp(m)
        if self.lam is None:
            raise ValueError("the family tag has no single representative")
        return families.d_lambda(m, self.lam)

    def to_json(self) -> dict:
        out = {"family": self.family}
        if self.family == "d_lambda":
            out["lambda"] = None if self.lam is None else _fmt(self.lam)
        out["degree"] = self.degree
        return out

    @classmethod
    def from_json(cls, data: dict) -> FamilyTag:
        lam = data.get("lambda")
        return cls(data["family"], int(data["degree"]), None if lam is None else Fraction(lam))

    def __str__(self) -> str:
        if self.family == "d_lambda":
            return f"d_lambda({'t' if self.lam is None else _fmt(self.lam)}) in degree {self.degree}"
        return f"{self.family} in degree {self.degree}"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


def small_solution(u, v, limit: int = 24) -> tuple[Fraction, Fraction]:
    """A small rational solution ``(x, y)`` of ``u x + v y = 1``.

    Candidates are ranked by number of negative entries, then height, then
    number of non-integers, then ``(|x|, |y|, x, y)``.  The search looks at all
    ``x`` of height at most ``limit`` and falls back to a direct solution.
    """
    u, v = Fraction(u), Fraction(v)
    if not u and not v:
        raise ZeroDivisionError("u and v both vanish")
    best = None

    def consider(x, y):
        nonlocal best
        key = ((x < 0) + (y < 0), max(_height(x), _height(y)), (x.denominator != 1) + (y.denominator != 1),
               abs(x), abs(y), x, y)
        if best is None or key < best[0]:
            best = (key, (x, y))

    if u:
        consider(1 / u, Fraction(0))
    if v:
        consider(Fraction(0), 1 / v)
    if u and v:
        for den in range(1, limit + 1):
            for num in range(-limit, limit + 1):
                x = Fraction(num, den)
                if x.denominator != den:
                    continue
                y = (1 - u * x) / v
                if _height(y) <= limit:
                    consider(x, y)
    return best[1]


def _coefficients(d) -> DegreeNCoefficients:
    if isinstance(d, LInfinityStructure):
        if not d.is_homogeneous:
            raise HomogeneityError("classification needs a single-degree codifferential")
        d = d.leading_term if not d.is_zero else Cochain.zero(SPACE_1_2, d.truncation, 1)
    if d.space != SPACE_1_2:
        raise ValueError("classification is implemented for the 1|2 space")
    return DegreeNCoefficients.from_cochain(d)


def _classify(c: DegreeNCoefficients) -> tuple[FamilyTag, LinearAutomorphism]:
    block = LinearAutomorphism.block
    ident = LinearAutomorphism.identity(SPACE_1_2)
    m = c.m
    if not any(c.a):
        return FamilyTag("zero", c.degree), ident
    if m == -1:
        a1, a2, a3, a4 = c.a
        if a1 == 0 and a2 == 0:
            # g(w1) = a3 w1 + a4 w2
            b1, b2 = small_solution(-a4, a3)
            return FamilyTag("d_star", 1), block(((a3, b1), (a4, b2)))
        # l a1 + p a2 = 1 and r a1 + s a2 = 0
        if a1:
            return FamilyTag("d_0", 1), block(((1 / a1, -a2), (0, a1)))
        return FamilyTag("d_0", 1), block(((0, -a2), (1 / a2, 0)))
    a1, a2, a3, a4, a5, a6 = c.a
    if a3 == 0 and a4 == 0:
        if a1 == 0 and a2 == 0:
            b1, b2 = small_solution(-a6, a5)
            return FamilyTag("d_infty", c.degree), block(((a5, b1), (a6, b2)))
        k = a5 / a2 if a2 else -a6 / a1
        b1, b2 = small_solution(a1, a2)
        return FamilyTag("d_lambda", c.degree, k), block(((a2, b1), (-a1, b2)))
    b1, b2 = small_solution(-a4, a3)
    g = block(((a3, b1), (a4, b2)))
    k = a1 * b1 + a2 * b2
    if k == 0:
        return FamilyTag("d_star", c.degree), g
    return FamilyTag("d_sharp", c.degree), g @ block(((1, 0), (0, 1 / k)))


def canonical_form(d) -> tuple[FamilyTag, LinearAutomorphism]:
    """Family tag of a homogeneous codifferential and ``g`` with ``g^{-1} d g`` equal to its representative.

    Raises :class:`NotOnVariety` for input that is not square-zero.  The
    witness is checked by conjugation before it is returned.
    """
    c = _coefficients(d)
    ok, residuals = variety_check(c)
    if not ok:
        raise NotOnVariety(residuals)
    tag, g = _classify(c)
    if conjugate_linear(g, c.to_cochain()) != tag.representative():
        raise AssertionError(f"witness for {tag} does not conjugate onto the representative")
    return tag, g


def classify(d) -> FamilyTag:
    return canonical_form(d)[0]


def linearly_equivalent(d1, d2) -> tuple[bool, LinearAutomorphism | None]:
    """Whether ``d2 = g^{-1} d1 g`` for some linear ``g``; returns such a ``g`` when it exists."""
    t1, g1 = canonical_form(d1)
    t2, g2 = canonical_form(d2)
    if t1 != t2:
        return False, None
    return True, g1 @ g2.inverse()


def _square_zero(c: Cochain) -> bool:
    return is_codifferential(LInfinityStructure.from_cochain(c))[0]


def jump_neighbors(tag: FamilyTag) -> list[FamilyTag]:
    """Classes met by small perturbations of ``tag`` inside its own degree.

    ``d_sharp`` is linked to ``d_star`` and ``d_lambda(-(m+2))``.  Elsewhere each
    odd cohomology direction ``delta`` of the same degree is followed: the
    classes of ``d + t delta`` at ``t = 1, 2`` are reported, and when they differ
    only in lambda the whole family is reported as ``d_lambda(t)``.
    """
    from .cohomology import deformation_directions

    if tag.family == "zero" or tag.is_family:
        return []
    if tag.family == "d_sharp":
        return [FamilyTag("d_star", tag.degree), FamilyTag("d_lambda", tag.degree, -tag.degree)]
    d = tag.representative()
    out: list[FamilyTag] = []
    for delta in deformation_directions(d, [tag.degree]):
        seen = []
        for t in (1, 2):
            e = d + delta.scale(t)
            if not _square_zero(e):
                seen = []
                break
            seen.append(classify(e))
        if not seen:
            continue
        if seen[0] != seen[1]:
            if all(s.family == "d_lambda" for s in seen):
                new = FamilyTag("d_lambda", tag.degree)
            else:
                continue
        else:
            new = seen[0]
        if new != tag and new not in out:
            out.append(new)
    return out


def coefficient_grid(m: int, values: Sequence[int]):
    """All coefficient vectors with entries in ``values`` (exhaustive test grids)."""
    from itertools import product

    n = 4 if m == -1 else 6
    for a in product(values, repeat=n):
        yield DegreeNCoefficients(m, a)
