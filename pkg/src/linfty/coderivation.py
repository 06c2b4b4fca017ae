"""Coderivation lifts, the graded bracket on L, and automorphism actions.

Everything is evaluated on canonical words: the lift of ``phi`` on ``w_K``
sums over unshuffles of the word of ``K`` whose first block matches a source
monomial of ``phi``.  The signed count of those unshuffles is the compiled
kernel in ``kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

from . import kernels
from .cochains import BasisKey, Cochain, HomogeneityError, format_cochain
from .graded import (
    GradedSpace,
    MultiIndex,
    canonical_word,
    index_factorial,
    place_letter,
    symmetric_basis,
    weight,
)

# element of S(W): monomial -> coefficient
Element = dict


def evaluate(phi: Cochain, monomial: MultiIndex) -> dict[int, Fraction]:
    """Value of ``phi`` on ``w_monomial`` as ``{target: coefficient}``."""
    monomial = tuple(monomial)
    if phi.degree is not None and weight(monomial) != phi.degree:
        raise ValueError(f"cannot evaluate a degree {phi.degree} cochain on weight {weight(monomial)}")
    out: dict[int, Fraction] = {}
    fac = None
    for (index, target), c in phi.items():
        if index == monomial:
            if fac is None:
                fac = index_factorial(index)
            out[target] = out.get(target, 0) + c * fac
    return {t: v for t, v in out.items() if v}


@lru_cache(maxsize=None)
def _basis_lift(space: GradedSpace, index: MultiIndex, target: int, monomial: MultiIndex):
    """Lift of ``phi^index_target`` on ``w_monomial``: ``(result monomial, integer coefficient)`` or None."""
    if any(i > k for i, k in zip(index, monomial)):
        return None
    rest = tuple(k - i for k, i in zip(monomial, index))
    sign, result = place_letter(space, target, rest)
    if not sign:
        return None
    count = kernels.signed_unshuffle_count(canonical_word(monomial), space.odd_flags, weight(index), index)
    if not count:
        return None
    return result, sign * count * index_factorial(index)


def lift(phi: Cochain, monomial: MultiIndex) -> Element:
    """Coderivation lift of ``phi`` applied to ``w_monomial``, in the monomial basis."""
    monomial = tuple(monomial)
    out: Element = {}
    if phi.is_zero or weight(monomial) < phi.degree:
        return out
    for (index, target), c in phi.items():
        hit = _basis_lift(phi.space, index, target, monomial)
        if hit is not None:
            result, n = hit
            out[result] = out.get(result, 0) + c * n
    return {k: v for k, v in out.items() if v}


def lift_element(phi: Cochain, element: Mapping[MultiIndex, object]) -> Element:
    out: Element = {}
    for monomial, c in element.items():
        for result, v in lift(phi, monomial).items():
            out[result] = out.get(result, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _apply_to_element(phi: Cochain, element: Mapping[MultiIndex, object]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for monomial, c in element.items():
        if weight(monomial) != phi.degree:
            continue
        for t, v in evaluate(phi, monomial).items():
            out[t] = out.get(t, 0) + c * v
    return out


@lru_cache(maxsize=None)
def _basis_bracket(space: GradedSpace, a: BasisKey, b: BasisKey) -> tuple[tuple[BasisKey, Fraction], ...]:
    (ia, ta), (ib, tb) = a, b
    pa = (space.index_parity(ia) + space.gen_parity(ta)) % 2
    pb = (space.index_parity(ib) + space.gen_parity(tb)) % 2
    sign = -1 if pa and pb else 1
    degree = weight(ia) + weight(ib) - 1
    out: dict[BasisKey, Fraction] = {}
    for monomial in symmetric_basis(space, degree):
        values: dict[int, int] = {}
        # a( b~(w_K) )
        hit = _basis_lift(space, ib, tb, monomial)
        if hit is not None and hit[0] == ia:
            values[ta] = values.get(ta, 0) + hit[1] * index_factorial(ia)
        # b( a~(w_K) )
        hit = _basis_lift(space, ia, ta, monomial)
        if hit is not None and hit[0] == ib:
            values[tb] = values.get(tb, 0) - sign * hit[1] * index_factorial(ib)
        fac = index_factorial(monomial)
        for t, v in values.items():
            if v:
                out[(monomial, t)] = Fraction(v, fac)
    return tuple(out.items())


def _check_homogeneous(c: Cochain) -> None:
    if c.degree is None and not c.is_zero:
        raise HomogeneityError("cochain has no declared degree")


def bracket(alpha: Cochain, beta: Cochain) -> Cochain:
    """Graded bracket ``[alpha, beta] = alpha beta~ - (-1)^{|alpha||beta|} beta alpha~``."""
    if alpha.space != beta.space:
        raise ValueError("cochains live on different spaces")
    _check_homogeneous(alpha)
    _check_homogeneous(beta)
    space = alpha.space
    if alpha.is_zero or beta.is_zero:
        degree = parity = None
        if alpha.degree is not None and beta.degree is not None:
            degree = alpha.degree + beta.degree - 1
        if alpha.parity is not None and beta.parity is not None:
            parity = (alpha.parity + beta.parity) % 2
        return Cochain.zero(space, degree, parity)
    out: dict[BasisKey, Fraction] = {}
    for ka, ca in alpha.items():
        for kb, cb in beta.items():
            for key, v in _basis_bracket(space, ka, kb):
                out[key] = out.get(key, 0) + ca * cb * v
    return Cochain(space, out, alpha.degree + beta.degree - 1, (alpha.parity + beta.parity) % 2)


def bracket_by_evaluation(alpha: Cochain, beta: Cochain) -> Cochain:
    """The same bracket evaluated through whole lifts of ``alpha`` and ``beta``; used as a cross-check."""
    space = alpha.space
    if alpha.is_zero or beta.is_zero:
        return Cochain.zero(space)
    sign = -1 if alpha.parity and beta.parity else 1
    degree = alpha.degree + beta.degree - 1
    out = {}
    for monomial in symmetric_basis(space, degree):
        first = _apply_to_element(alpha, lift(beta, monomial))
        second = _apply_to_element(beta, lift(alpha, monomial))
        fac = index_factorial(monomial)
        for t in set(first) | set(second):
            v = first.get(t, 0) - sign * second.get(t, 0)
            if v:
                out[(monomial, t)] = Fraction(v) / fac
    return Cochain(space, out, degree, (alpha.parity + beta.parity) % 2)


class LInfinityStructure:
    """Odd element ``d = d_1 + d_2 + ...`` of L, kept up to ``truncation``."""

    def __init__(self, space: GradedSpace, components: Mapping[int, Cochain] | Sequence[Cochain] = (),
                 truncation: int | None = None):
        self.space = space
        if not isinstance(components, Mapping):
            grouped: dict[int, Cochain] = {}
            for c in components:
                if c.is_zero:
                    continue
                grouped[c.degree] = grouped[c.degree] + c if c.degree in grouped else c
            components = grouped
        comps: dict[int, Cochain] = {}
        for n, c in components.items():
            if c.is_zero:
                continue
            if c.space != space:
                raise ValueError("component lives on a different space")
            if c.degree != n:
                raise ValueError(f"component stored at degree {n} has degree {c.degree}")
            if c.parity != 1:
                raise HomogeneityError(f"component of degree {n} is not odd")
            comps[n] = c
        top = max(comps, default=1)
        if truncation is None:
            truncation = top
        if truncation < top:
            raise ValueError("truncation is below a stored component")
        self.components = dict(sorted(comps.items()))
        self.truncation = truncation

    @classmethod
    def from_cochain(cls, c: Cochain, truncation: int | None = None) -> LInfinityStructure:
        return cls(c.space, {c.degree: c} if not c.is_zero else {}, truncation)

    def component(self, n: int) -> Cochain:
        return self.components.get(n, Cochain.zero(self.space, n, 1))

    @property
    def leading_degree(self) -> int | None:
        return next(iter(self.components), None)

    @property
    def leading_term(self) -> Cochain:
        n = self.leading_degree
        return Cochain.zero(self.space) if n is None else self.components[n]

    @property
    def is_zero(self) -> bool:
        return not self.components

    @property
    def is_homogeneous(self) -> bool:
        return len(self.components) <= 1

    def truncated(self, truncation: int) -> LInfinityStructure:
        return LInfinityStructure(self.space, {n: c for n, c in self.components.items() if n <= truncation},
                                  truncation)

    def with_truncation(self, truncation: int) -> LInfinityStructure:
        return LInfinityStructure(self.space, self.components, max(truncation, max(self.components, default=1)))

    def __add__(self, other) -> LInfinityStructure:
        comps = dict(self.components)
        trunc = self.truncation
        if isinstance(other, Cochain):
            other = LInfinityStructure.from_cochain(other)
        for n, c in other.components.items():
            comps[n] = comps[n] + c if n in comps else c
        return LInfinityStructure(self.space, {n: c for n, c in comps.items() if not c.is_zero},
                                  max(trunc, other.truncation))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LInfinityStructure):
            return NotImplemented
        return self.space == other.space and self.components == other.components

    def __repr__(self) -> str:
        return f"LInfinityStructure({self!s}, truncation={self.truncation})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [format_cochain(c) for c in self.components.values()]
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def self_bracket_component(d: LInfinityStructure, n: int) -> Cochain:
    """Degree-``n`` component of ``[d, d]``."""
    total = Cochain.zero(d.space, n, 0)
    for p, cp in d.components.items():
        q = n + 1 - p
        if q in d.components:
            total = total + bracket(cp, d.components[q])
    return total


def is_codifferential(d: LInfinityStructure) -> tuple[bool, Cochain | None]:
    """Check ``[d, d] = 0`` in every degree fixed by the components through the truncation.

    With leading degree ``N`` and truncation ``T`` that is degrees ``2N - 1``
    through ``T + N - 1``.  The witness is the lowest nonzero component.
    """
    if d.is_zero:
        return True, None
    N = d.leading_degree
    for n in range(2 * N - 1, d.truncation + N):
        sq = self_bracket_component(d, n)
        if not sq.is_zero:
            return False, sq
    return True, None


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def _mat_inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("singular linear map")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@dataclass(frozen=True)
class LinearAutomorphism:
    """Parity-preserving invertible map ``g: W -> W``; column ``j`` of ``matrix`` is ``g(w_j)``."""

    space: GradedSpace
    matrix: tuple[tuple[Fraction, ...], ...]
    _inverse: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = self.space.ngens
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError("matrix size does not match the space")
        for i in range(n):
            for j in range(n):
                if m[i][j] and self.space.is_odd(i) != self.space.is_odd(j):
                    raise ValueError("linear automorphisms must preserve parity")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_inverse", _mat_inverse(m))

    @classmethod
    def block(cls, odd_block, even_scalar=1, space: GradedSpace | None = None) -> LinearAutomorphism:
        """The 1|2 map ``g(w1) = l w1 + p w2``, ``g(w2) = r w1 + s w2``, ``g(w3) = q w3`` from ``((l, r), (p, s))``."""
        from .graded import SPACE_1_2

        (l, r), (p, s) = odd_block
        return cls(space or SPACE_1_2, ((l, r, 0), (p, s, 0), (0, 0, even_scalar)))

    @classmethod
    def identity(cls, space: GradedSpace) -> LinearAutomorphism:
        n = space.ngens
        return cls(space, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, space: GradedSpace, entries) -> LinearAutomorphism:
        n = space.ngens
        return cls(space, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def is_block_1_2(self) -> bool:
        return self.space.odd_dim == 2 and self.space.even_dim == 1

    @property
    def odd_block(self):
        m = self.matrix
        return ((m[0][0], m[0][1]), (m[1][0], m[1][1]))

    @property
    def even_scalar(self) -> Fraction:
        return self.matrix[2][2]

    def inverse(self) -> LinearAutomorphism:
        return LinearAutomorphism(self.space, self._inverse)

    def compose(self, other: LinearAutomorphism) -> LinearAutomorphism:
        """``self o other``."""
        return LinearAutomorphism(self.space, _mat_mul(self.matrix, other.matrix))

    def __matmul__(self, other: LinearAutomorphism) -> LinearAutomorphism:
        return self.compose(other)

    def image(self, gen: int) -> dict[int, Fraction]:
        return {i: self.matrix[i][gen] for i in range(self.space.ngens) if self.matrix[i][gen]}

    def apply_inverse(self, vector: Mapping[int, Fraction]) -> dict[int, Fraction]:
        inv = self._inverse
        out = {}
        for i in range(self.space.ngens):
            v = sum((inv[i][j] * c for j, c in vector.items()), Fraction(0))
            if v:
                out[i] = v
        return out

    def lift_monomial(self, monomial: MultiIndex) -> Element:
        """``g~(w_K)`` by the closed form on the 1|2 space, by expanding the product elsewhere."""
        if self.is_block_1_2:
            (l, r), (p, s) = self.odd_block
            q = self.matrix[2][2]
            i1, i2, i3 = monomial
            qn = q ** i3
            if i1 and i2:
                out = {monomial: (l * s - p * r) * qn}
            elif i1:
                out = {(1, 0, i3): l * qn, (0, 1, i3): p * qn}
            elif i2:
                out = {(1, 0, i3): r * qn, (0, 1, i3): s * qn}
            else:
                out = {monomial: qn}
            return {k: v for k, v in out.items() if v}
        return self.lift_monomial_by_expansion(monomial)

    def lift_monomial_by_expansion(self, monomial: MultiIndex) -> Element:
        space = self.space
        current: Element = {}
        for g in canonical_word(monomial):
            image = self.image(g)
            nxt: Element = {}
            if not current:
                for h, c in image.items():
                    key = space.unit(h)
                    nxt[key] = nxt.get(key, 0) + c
            else:
                for mono, cm in current.items():
                    for h, c in image.items():
                        if space.is_odd(h) and mono[h]:
                            continue
                        sign = 1
                        if space.is_odd(h) and sum(mono[j] for j in range(h + 1, space.odd_dim)) % 2:
                            sign = -1
                        key = tuple(e + (1 if j == h else 0) for j, e in enumerate(mono))
                        nxt[key] = nxt.get(key, 0) + sign * cm * c
            current = {k: v for k, v in nxt.items() if v}
        return current


def conjugate_cochain(g: LinearAutomorphism, phi: Cochain) -> Cochain:
    """``g^{-1} o phi o g~`` restricted to the degree of ``phi``."""
    if phi.is_zero:
        return phi
    out = {}
    for monomial in symmetric_basis(phi.space, phi.degree):
        image = _apply_to_element(phi, g.lift_monomial(monomial))
        if not image:
            continue
        fac = index_factorial(monomial)
        for t, v in g.apply_inverse(image).items():
            out[(monomial, t)] = v / fac
    return Cochain(phi.space, out, phi.degree, phi.parity)


def conjugate_linear(g: LinearAutomorphism, d):
    """Transport ``d`` (a structure or a cochain) along ``g``: ``g^{-1} o d o g~``."""
    if isinstance(d, Cochain):
        return conjugate_cochain(g, d)
    return LInfinityStructure(d.space, {n: conjugate_cochain(g, c) for n, c in d.components.items()},
                              d.truncation)


@dataclass(frozen=True)
class ExpAutomorphism:
    """Truncated ``exp(eta~)`` for an even ``eta`` whose components all have degree >= 2."""

    space: GradedSpace
    eta: tuple[Cochain, ...]
    truncation: int

    def inverse(self) -> ExpAutomorphism:
        return ExpAutomorphism(self.space, tuple(-c for c in self.eta), self.truncation)

    def _ad(self, x: dict[int, Cochain]) -> dict[int, Cochain]:
        # x -> [x, eta], truncated
        out: dict[int, Cochain] = {}
        for n, c in x.items():
            for e in self.eta:
                m = n + e.degree - 1
                if m > self.truncation:
                    continue
                b = bracket(c, e)
                if not b.is_zero:
                    out[m] = out[m] + b if m in out else b
        return {n: c for n, c in out.items() if not c.is_zero}

    def conjugate(self, d: LInfinityStructure) -> LInfinityStructure:
        """``exp(-eta~) d~ exp(eta~) = d + [d, eta] + [[d, eta], eta]/2 + ...`` up to the truncation."""
        total = {n: c for n, c in d.components.items() if n <= self.truncation}
        term = dict(total)
        k = 0
        while term:
            k += 1
            term = self._ad(term)
            for n, c in term.items():
                add = c / factorial(k)
                total[n] = total[n] + add if n in total else add
        trunc = max(self.truncation, max(total, default=1))
        return LInfinityStructure(d.space, {n: c for n, c in total.items() if not c.is_zero}, trunc)

    def apply(self, element: Mapping[MultiIndex, object]) -> Element:
        """``exp(eta~)`` applied to an element of S(W); exact because each lift lowers weight."""
        total: Element = {k: Fraction(v) for k, v in element.items()}
        term: Element = dict(total)
        k = 0
        while term:
            k += 1
            nxt: Element = {}
            for e in self.eta:
                for mono, c in lift_element(e, term).items():
                    nxt[mono] = nxt.get(mono, 0) + c
            term = {m: c / k for m, c in nxt.items() if c}
            for m, c in term.items():
                total[m] = total.get(m, 0) + c
        return {m: c for m, c in total.items() if c}


def exp_automorphism(eta: Cochain | Sequence[Cochain], truncation: int) -> ExpAutomorphism:
    parts = [eta] if isinstance(eta, Cochain) else list(eta)
    parts = [c for c in parts if not c.is_zero]
    if not parts:
        space = eta.space if isinstance(eta, Cochain) else None
        return ExpAutomorphism(space, (), truncation)
    for c in parts:
        if c.parity != 0:
            raise HomogeneityError("exponentials are only formed from even cochains")
        if c.degree < 2:
            raise ValueError("degree-1 exponentials are linear maps; use exp_linear")
    return ExpAutomorphism(parts[0].space, tuple(parts), truncation)


def exp_linear(eta: Cochain, scale=None) -> LinearAutomorphism:
    """``exp`` of an even degree-1 cochain as a linear automorphism.

    Nilpotent maps exponentiate exactly.  A diagonal map with integer entries
    ``a_i`` needs ``scale`` standing for ``e``, giving ``diag(scale**a_i)``.
    """
    space = eta.space
    if eta.is_zero:
        return LinearAutomorphism.identity(space)
    if eta.parity != 0 or eta.degree != 1:
        raise ValueError("exp_linear needs an even degree-1 cochain")
    n = space.ngens
    m = [[Fraction(0)] * n for _ in range(n)]
    for (index, target), c in eta.items():
        src = index.index(1)
        m[target][src] += c
    power = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    total = [row[:] for row in power]
    for k in range(1, n + 1):
        power = [list(r) for r in _mat_mul(power, m)]
        if not any(any(r) for r in power):
            return LinearAutomorphism(space, total)
        f = factorial(k)
        total = [[total[i][j] + power[i][j] / f for j in range(n)] for i in range(n)]
    if any(m[i][j] for i in range(n) for j in range(n) if i != j):
        raise ValueError("only nilpotent or diagonal degree-1 exponentials are exact")
    if scale is None:
        raise ValueError("a diagonal exponential needs a rational stand-in for e")
    scale = Fraction(scale)
    entries = []
    for i in range(n):
        a = m[i][i]
        if a.denominator != 1:
            raise ValueError("diagonal entries must be integers")
        entries.append(scale ** int(a))
    return LinearAutomorphism.diagonal(space, entries)
