"""Sparse cochains in L = Hom(S(W), W) and their text form.

A basis cochain ``phi^I_j`` sends ``w_I`` to ``I! w_j`` and kills every other
monomial.  Its parity is ``parity(I) + parity(w_j)``; even ones print as
``phi``, odd ones as ``psi``.  Targets are 0-based internally and 1-based in
text, so ``psi[1,0,0]_3`` is the basis cochain ``(1,0,0) -> w3``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .graded import SPACE_1_2, GradedSpace, MultiIndex, weight

BasisKey = tuple[MultiIndex, int]


class HomogeneityError(ValueError):
    pass


class ParseError(ValueError):
    pass


def key_parity(space: GradedSpace, key: BasisKey) -> int:
    index, target = key
    return (space.index_parity(index) + space.gen_parity(target)) % 2


def cochain_basis(space: GradedSpace, degree: int, parity: int | None = None) -> list[BasisKey]:
    from .graded import symmetric_basis

    out = []
    for index in symmetric_basis(space, degree):
        for target in range(space.ngens):
            key = (index, target)
            if parity is None or key_parity(space, key) == parity:
                out.append(key)
    return out


def _sort_key(key: BasisKey):
    index, target = key
    return (-weight(index), tuple(-e for e in index), target)


class Cochain:
    """Finite rational combination of basis cochains of one degree and parity.

    The zero cochain may leave degree and parity undeclared; it then behaves
    as the zero of every L_n.
    """

    __slots__ = ("space", "_terms", "degree", "parity")

    def __init__(self, space: GradedSpace, terms: Mapping[BasisKey, object] | None = None,
                 degree: int | None = None, parity: int | None = None):
        self.space = space
        clean: dict[BasisKey, Fraction] = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                index, target = key
                clean[(space.check_index(index), int(target))] = c
        for (index, target) in clean:
            if not 0 <= target < space.ngens:
                raise ValueError(f"target w{target + 1} out of range")
            d = weight(index)
            p = key_parity(space, (index, target))
            if degree is None:
                degree = d
            elif d != degree:
                raise HomogeneityError(f"mixed degrees {degree} and {d}")
            if parity is None:
                parity = p
            elif p != parity:
                raise HomogeneityError("mixed parity cochain")
        self._terms = clean
        self.degree = degree
        self.parity = parity

    @classmethod
    def basis(cls, space: GradedSpace, index, target: int, coeff=1) -> Cochain:
        return cls(space, {(tuple(index), target): coeff})

    @classmethod
    def zero(cls, space: GradedSpace, degree: int | None = None, parity: int | None = None) -> Cochain:
        return cls(space, {}, degree, parity)

    def items(self) -> Iterator[tuple[BasisKey, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0])))

    def terms(self) -> dict[BasisKey, Fraction]:
        return dict(self._terms)

    def coefficient(self, index, target: int) -> Fraction:
        return self._terms.get((tuple(index), target), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _combine(self, other: Cochain, sign: int) -> Cochain:
        if not isinstance(other, Cochain):
            return NotImplemented
        if other.space != self.space:
            raise ValueError("cochains live on different spaces")
        if self.is_zero and other.is_zero:
            return Cochain(self.space, {}, self.degree if self.degree is not None else other.degree,
                           self.parity if self.parity is not None else other.parity)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0) + sign * c
        degree = self.degree if self.degree is not None else other.degree
        parity = self.parity if self.parity is not None else other.parity
        if other.degree is not None and degree != other.degree and self._terms and other._terms:
            raise HomogeneityError("cannot add cochains of different degrees")
        if other.parity is not None and parity != other.parity and self._terms and other._terms:
            raise HomogeneityError("cannot add cochains of different parity")
        return Cochain(self.space, terms, None, None) if any(terms.values()) else Cochain(
            self.space, {}, degree, parity)

    def __add__(self, other: Cochain) -> Cochain:
        return self._combine(other, 1)

    def __sub__(self, other: Cochain) -> Cochain:
        return self._combine(other, -1)

    def __neg__(self) -> Cochain:
        return self.scale(-1)

    def scale(self, c) -> Cochain:
        c = Fraction(c)
        if not c:
            return Cochain(self.space, {}, self.degree, self.parity)
        return Cochain(self.space, {k: c * v for k, v in self._terms.items()}, self.degree, self.parity)

    def __mul__(self, c) -> Cochain:
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Cochain:
        return self.scale(1 / Fraction(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Cochain({format_cochain(self)!r})"

    def __str__(self) -> str:
        return format_cochain(self)


def cochain_sum(space: GradedSpace, parts: Iterable[Cochain]) -> Cochain:
    total = Cochain.zero(space)
    for part in parts:
        total = total + part
    return total


def format_rational(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_key(space: GradedSpace, key: BasisKey) -> str:
    index, target = key
    name = "psi" if key_parity(space, key) else "phi"
    return f"{name}[{','.join(str(e) for e in index)}]_{target + 1}"


def format_cochain(cochain: Cochain) -> str:
    if cochain.is_zero:
        return "0"
    parts = []
    for key, c in cochain.items():
        gen = format_key(cochain.space, key)
        mag = abs(c)
        body = gen if mag == 1 else f"{format_rational(mag)}*{gen}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


_RATIONAL = r"\d+(?:/\d+)?"
_TERM = re.compile(
    rf"\s*(?:(?P<coef>{_RATIONAL})\s*\*\s*)?(?P<name>phi|psi)\s*\[(?P<index>[\d\s,]*)\]\s*_\s*(?P<target>\d+)\s*"
)


def parse_cochain(text: str, space: GradedSpace = SPACE_1_2) -> Cochain:
    """Parse ``[rational '*'] (phi|psi)[i,...]_j`` terms joined by ``+``/``-``.

    The label must agree with the parity of the basis cochain, and the result
    must be homogeneous.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty expression")
    if re.fullmatch(r"[+-]?\s*0", s):
        return Cochain.zero(space)
    terms: dict[BasisKey, Fraction] = {}
    pos = 0
    sign = 1
    first = True
    while pos < len(s):
        m = re.compile(r"\s*([+-])\s*").match(s, pos)
        if m:
            sign = 1 if m.group(1) == "+" else -1
            pos = m.end()
        elif not first:
            raise ParseError(f"expected '+' or '-' at position {pos} in {text!r}")
        m = _TERM.match(s, pos)
        if not m:
            raise ParseError(f"cannot parse term at position {pos} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        try:
            index = tuple(int(x) for x in m.group("index").split(",") if x.strip())
            target = int(m.group("target")) - 1
            index = space.check_index(index)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        if not 0 <= target < space.ngens:
            raise ParseError(f"target {target + 1} out of range")
        key = (index, target)
        expected = "psi" if key_parity(space, key) else "phi"
        if m.group("name") != expected:
            raise ParseError(f"{format_key(space, key)} is written as {m.group('name')}")
        terms[key] = terms.get(key, 0) + sign * coef
        pos = m.end()
        first = False
        sign = 1
    try:
        return Cochain(space, terms)
    except HomogeneityError:
        raise
